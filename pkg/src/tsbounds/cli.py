"""Command-line surface: compute distance spectra, sweep the finite-length
bounds over an E_b/N_0 grid, sweep the asymptotic exponents over an inverse
E_b/N_0 grid, and run the Monte-Carlo ML simulator.

All sweeps emit CSV with 17-significant-digit floats, so a fixed command line
reproduces byte-identical output.  Per-cell numeric failures become "nan"
cells plus a JSON diagnostics sidecar next to the output file; the exit code
is 3 only when every cell of a sweep failed.  Input and usage problems exit
with code 2.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from .bounds import BOUND_TOL, ChannelPoint, ahp, itsb, psi, tsb_bit, tsb_block
from .codes import (
    GrowthRate,
    enumerate_spectrum,
    load_generator,
    load_spectrum,
    random_ensemble_spectrum,
    save_spectrum,
)
from .exponents import chernoff_psi, chernoff_tsb, gallager_rce, tsb_exponent, union_exponent
from .numerics import Tolerance

BOUND_CHOICES = ("tsb", "tsb-bit", "itsb", "ahp", "psi", "chernoff-tsb", "chernoff-psi")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def parse_grid(text: str) -> list[float]:
    """Parse "start:stop:step" into an inclusive grid; a bare number is a
    single-point grid."""
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:step or a single value, got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0.0:
        raise ValueError(f"grid step must be positive, got {step}")
    if stop < start:
        raise ValueError(f"grid is empty: stop {stop} < start {start}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _parse_ensemble(text: str) -> tuple[int, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"ensemble must be 'n,rate', got {text!r}")
    return int(parts[0]), float(parts[1])


def _resolve_source(args, sub):
    """Load the code description: (spectrum, iowef-or-None, rate)."""
    if args.generator:
        g = load_generator(args.generator)
        spec, io = enumerate_spectrum(g)
        return spec, io, g.rate
    if args.spectrum:
        spec = load_spectrum(args.spectrum)
        rate = args.rate if args.rate is not None else spec.rate
        if rate is None:
            sub.error("spectrum file carries no rate; pass --rate")
        return spec, None, rate
    n, rate = _parse_ensemble(args.ensemble)
    return random_ensemble_spectrum(n, rate), None, rate


def _sweep(grid, worker, threads: int):
    if threads <= 1:
        return [worker(x) for x in grid]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, grid))


def _write_text(out: str | None, text: str) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_diagnostics(out: str | None, failures: list[dict]) -> None:
    if not failures:
        return
    payload = json.dumps({"failures": failures}, indent=1, sort_keys=True) + "\n"
    if out:
        with open(out + ".diag.json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload)
    else:
        sys.stderr.write(payload)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_spectrum(args, sub) -> int:
    if not args.out:
        sub.error("spectrum needs --out for the JSON payload")
    g = load_generator(args.generator)
    spec, _ = enumerate_spectrum(g)
    save_spectrum(spec, args.out)
    lines = [
        f"({g.n},{g.k}) code, rate {g.k}/{g.n}, d_min = {spec.d_min}",
        f"{'h':>4} {'A_h':>12}",
    ]
    for h in range(spec.n + 1):
        lv = float(spec.log_a[h])
        if lv > -math.inf:
            lines.append(f"{h:>4} {round(math.exp(lv)):>12}")
    print("\n".join(lines))
    return EXIT_OK


def cmd_bounds(args, sub) -> int:
    names = list(dict.fromkeys(b.strip() for b in args.bounds.split(",") if b.strip()))
    if not names:
        sub.error("at least one bound must be selected")
    for b in names:
        if b not in BOUND_CHOICES:
            sub.error(f"unknown bound {b!r}; choose from {', '.join(BOUND_CHOICES)}")
    spec, io, rate = _resolve_source(args, sub)
    if "tsb-bit" in names and io is None:
        sub.error("tsb-bit needs a generator source (input weights)")
    grid = parse_grid(args.grid)
    tol = Tolerance(
        abs_tol=args.tol_abs, rel_tol=args.tol_rel, max_iter=BOUND_TOL.max_iter
    )
    evals = {
        "tsb": lambda ch: tsb_block(spec, ch, tol).log_value,
        "tsb-bit": lambda ch: tsb_bit(io, ch, tol).log_value,
        "itsb": lambda ch: itsb(spec, ch, tol).log_value,
        "ahp": lambda ch: ahp(spec, ch, tol).log_value,
        "psi": lambda ch: psi(spec, ch, tol).log_value,
        "chernoff-tsb": lambda ch: chernoff_tsb(spec.n, ch.c, spec),
        "chernoff-psi": lambda ch: chernoff_psi(spec.n, ch.c, spec),
    }

    def row(db: float):
        ch = ChannelPoint.from_eb_n0_db(db, rate)
        cells, fails = [ch.c], []
        for name in names:
            try:
                lv = evals[name](ch)
                cells.extend([math.exp(lv), lv])
            except Exception as exc:  # recorded per cell, sweep continues
                cells.extend([math.nan, math.nan])
                fails.append({"eb_n0_db": db, "bound": name, "error": str(exc)})
        return cells, fails

    results = _sweep(grid, row, args.threads)
    header = "eb_n0_db,c," + ",".join(f"{b},log_{b}" for b in names)
    lines = [header]
    failures: list[dict] = []
    for db, (cells, fails) in zip(grid, results):
        failures.extend(fails)
        lines.append(",".join([_fmt(db)] + [_fmt(v) for v in cells]))
    _write_text(args.out, "\n".join(lines) + "\n")
    _emit_diagnostics(args.out, failures)
    if len(failures) == len(grid) * len(names):
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_exponent(args, sub) -> int:
    spec, _, rate = _resolve_source(args, sub)
    gr = GrowthRate.from_spectrum(spec)
    grid = parse_grid(args.grid)
    if any(x <= 0.0 for x in grid):
        sub.error("inverse E_b/N_0 values must be positive")

    def row(inv: float):
        c = rate / inv
        fails = []
        try:
            e_ub = union_exponent(gr, c).exponent
            t = tsb_exponent(gr, c)
            e_tsb, d_star = t.exponent, t.delta_star
        except ValueError as exc:
            # no admissible weight: flagged row, zeros by convention
            e_ub, e_tsb, d_star = 0.0, 0.0, math.nan
            fails.append({"inv_eb_n0": inv, "column": "e_tsb", "error": str(exc)})
        try:
            e_rce = gallager_rce(rate, c)
        except Exception as exc:
            e_rce = math.nan
            fails.append({"inv_eb_n0": inv, "column": "e_rce", "error": str(exc)})
        return (inv, e_ub, e_tsb, e_rce, d_star), fails

    results = _sweep(grid, row, args.threads)
    lines = ["inv_eb_n0,e_ub,e_tsb,e_rce,delta_star"]
    failures: list[dict] = []
    for cells, fails in results:
        failures.extend(fails)
        lines.append(",".join(_fmt(v) for v in cells))
    _write_text(args.out, "\n".join(lines) + "\n")
    _emit_diagnostics(args.out, failures)
    if len(failures) == 2 * len(grid):
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_simulate(args, sub) -> int:
    from .mcsim import simulate_ml

    g = load_generator(args.generator)
    ch = ChannelPoint.from_eb_n0_db(args.snr, g.rate)
    est = simulate_ml(
        g, ch, args.trials, args.seed, transmit=args.transmit, threads=args.threads
    )
    report = {
        "code": {"n": g.n, "k": g.k, "rate": g.rate},
        "channel": {"eb_n0_db": args.snr, "c": ch.c},
        "trials": est.trials,
        "seed": est.seed,
        "transmit": args.transmit,
        "block_error_rate": est.block_error_rate,
        "std_error": est.std_error,
        "bit_error_rate": est.bit_error_rate,
        "bit_std_error": est.bit_std_error,
    }
    _write_text(args.out, json.dumps(report, indent=1, sort_keys=True) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument(
        "--tol-abs",
        type=float,
        default=BOUND_TOL.abs_tol,
        help="absolute quadrature tolerance for bound sweeps",
    )
    common.add_argument(
        "--tol-rel",
        type=float,
        default=BOUND_TOL.rel_tol,
        help="relative quadrature tolerance for bound sweeps",
    )
    common.add_argument(
        "--threads", type=int, default=1, help="worker threads for grid dispatch"
    )
    common.add_argument(
        "--seed", type=int, default=0, help="RNG seed (simulate only)"
    )

    source = argparse.ArgumentParser(add_help=False)
    group = source.add_mutually_exclusive_group(required=True)
    group.add_argument("--generator", help="generator matrix file ('k n' header, 0/1 rows)")
    group.add_argument("--spectrum", help="spectrum JSON file (spectrum subcommand format)")
    group.add_argument("--ensemble", help="random ensemble as 'n,rate'")
    source.add_argument(
        "--rate", type=float, help="code rate override when the spectrum file has none"
    )

    parser = argparse.ArgumentParser(
        prog="tsbounds",
        description="Upper bounds on ML decoding error probability for binary "
        "linear block codes over BPSK-AWGN, with matching error exponents.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_spec = subs.add_parser(
        "spectrum",
        parents=[common],
        help="enumerate a code's distance spectrum to JSON plus a weight table",
    )
    p_spec.add_argument("--generator", required=True, help="generator matrix file")
    p_spec.set_defaults(func=cmd_spectrum)

    p_bounds = subs.add_parser(
        "bounds",
        parents=[common, source],
        help="sweep finite-length bounds over an E_b/N_0 grid to CSV",
    )
    p_bounds.add_argument(
        "--grid", required=True, help="E_b/N_0 grid in dB as start:stop:step"
    )
    p_bounds.add_argument(
        "--bounds",
        required=True,
        help=f"comma-separated subset of: {', '.join(BOUND_CHOICES)}",
    )
    p_bounds.set_defaults(func=cmd_bounds)

    p_exp = subs.add_parser(
        "exponent",
        parents=[common, source],
        help="sweep asymptotic exponents over an inverse E_b/N_0 grid to CSV",
    )
    p_exp.add_argument(
        "--grid", required=True, help="inverse E_b/N_0 grid as start:stop:step"
    )
    p_exp.set_defaults(func=cmd_exponent)

    p_sim = subs.add_parser(
        "simulate",
        parents=[common],
        help="Monte-Carlo ML decoding simulation, JSON report",
    )
    p_sim.add_argument("--generator", required=True, help="generator matrix file")
    p_sim.add_argument("--snr", type=float, required=True, help="E_b/N_0 in dB")
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument(
        "--transmit", choices=("zero", "random"), default="zero",
        help="transmit the all-zero codeword or a uniform random message",
    )
    p_sim.set_defaults(func=cmd_simulate)

    # let each subcommand report usage errors with its own usage line
    for sub in (p_spec, p_bounds, p_exp, p_sim):
        sub.set_defaults(sub=sub)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, args.sub)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
