"""Finite-length upper bounds on ML decoding error probability over the
binary-input AWGN channel: the tangential-sphere bound (block and bit error),
its conditioned improvement, the added-hyper-plane bound, and the lower
envelope shared by the last two.

Geometry: the received vector is decomposed into a radial component z1 along
the transmitted signal, a tangential component z2 in the plane of the
competing codeword, and (for the conditioned bounds) a third component z3.
Every bound integrates Gaussian densities against chi-square tail masses
inside a circular cone whose radius is optimized once per spectrum.

All per-weight terms are accumulated in log domain; individual term
integrals are evaluated in linear double precision (their magnitudes are
probability-sized) and logged afterwards.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammainc, gammaincc, logsumexp

from .codes import DistanceSpectrum, Iowef, bit_weight_transform
from .geometry import ConeGeometry, alpha_theta, delta_slope, rho_max_wh, rho_min_h, rho_ww
from .numerics import (
    Tolerance,
    adaptive_integrate,
    find_root,
    log_q_function,
    sin_power_integral,
    wallis,
)

__all__ = [
    "ChannelPoint",
    "BoundResult",
    "NoSolutionError",
    "solve_cone_radius",
    "tsb_block",
    "tsb_bit",
    "itsb",
    "ahp",
    "psi",
    "triple_term",
]

_NEG_INF = -math.inf

# Default accuracy for the term integrals: relative-error driven, with a
# floor far below any probability of interest.
BOUND_TOL = Tolerance(abs_tol=1e-300, rel_tol=1e-10, max_iter=260)

# Loose cone for spectra where the radius equation has no solution (fewer
# than two effective interior codewords): the bound holds for every radius,
# and a very wide cone recovers union-bound behavior (its cap leakage decays
# like 1/radius).
_FALLBACK_RADIUS_FACTOR = 400.0

_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)
_LOG_Q10 = log_q_function(10.0)


class NoSolutionError(ValueError):
    """Raised when the cone-radius equation has no root (thin spectra)."""


@dataclass(frozen=True)
class ChannelPoint:
    """BPSK-AWGN operating point: c = Es/N0 (linear) and the code rate."""

    c: float
    rate: float

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise ValueError(f"need c > 0, got c={self.c}")
        if not 0 < self.rate <= 1:
            raise ValueError(f"need 0 < rate <= 1, got rate={self.rate}")

    @property
    def sigma_sq(self) -> float:
        return 1.0 / (2.0 * self.c)

    @property
    def eb_n0(self) -> float:
        return self.c / self.rate

    @property
    def eb_n0_db(self) -> float:
        return 10.0 * math.log10(self.eb_n0)

    @classmethod
    def from_eb_n0_db(cls, db: float, rate: float) -> "ChannelPoint":
        return cls(c=rate * 10.0 ** (db / 10.0), rate=rate)


@dataclass(frozen=True)
class BoundResult:
    """A bound evaluation: the probability (may exceed 1, in which case the
    bound is vacuous but still well defined), its natural log, per-weight
    log-domain contributions, the cone radius used, the two tail terms
    (log domain), and an additive error budget for the quadrature plus the
    outer-integral truncation."""

    value: float
    log_value: float
    per_weight: dict[int, float] = field(repr=False)
    cone_radius: float
    tail_terms: dict[str, float]
    error_estimate: float
    converged: bool
    ahp_layer: int | None = None


def _interior_weights(spec: DistanceSpectrum) -> list[int]:
    return [h for h in range(1, spec.n) if spec.log_a[h] > _NEG_INF]


def solve_cone_radius(spec: DistanceSpectrum, tol: Tolerance | None = None) -> float:
    """Radius r* balancing the per-weight angular masses against the full
    sphere: sum_h A_h * integral_0^theta_h sin^(n-3) = sqrt(pi)
    Gamma((n-2)/2) / Gamma((n-1)/2).

    The left side is continuous and strictly increasing in r, so the root is
    unique; it depends only on the spectrum, never on the noise level.
    Raises NoSolutionError when the spectrum's interior weights cannot reach
    the right side (total effective count <= 2).
    """
    n = spec.n
    if n < 3:
        raise ValueError(f"need n >= 3, got n={n}")
    weights = _interior_weights(spec)
    if not weights:
        raise NoSolutionError("spectrum has no interior weights 0 < h < n")
    log_rhs = math.log(2.0) + wallis(n - 3, log=True)
    total = logsumexp([float(spec.log_a[h]) for h in weights])
    if total <= math.log(2.0):
        raise NoSolutionError(
            "interior spectrum mass sum(A_h) <= 2: the angular equation has no root"
        )

    def resid(r: float) -> float:
        geo = ConeGeometry(n, r)
        terms = []
        for h in weights:
            _, theta = alpha_theta(h, geo)
            if theta is not None and theta > 0.0:
                terms.append(
                    float(spec.log_a[h]) + sin_power_integral(n - 3, theta, log=True)
                )
        if not terms:
            return -1e6  # below any attainable residual; keeps the sign
        return max(logsumexp(terms) - log_rhs, -1e6)

    hi = math.sqrt(n)
    for _ in range(200):
        if resid(hi) > 0:
            break
        hi *= 2.0
    else:  # pragma: no cover - excluded by the mass check above
        raise NoSolutionError("could not bracket the cone-radius equation")
    lo = hi / 2.0
    while resid(lo) > 0:
        lo /= 2.0
    tol = tol or Tolerance(abs_tol=1e-12, rel_tol=1e-14, max_iter=300)
    return find_root(resid, lo, hi, tol)


def _cone_radius_or_fallback(spec: DistanceSpectrum) -> float:
    try:
        return solve_cone_radius(spec)
    except NoSolutionError:
        return _FALLBACK_RADIUS_FACTOR * math.sqrt(spec.n)


def _log_minus_one(log_a: float) -> float:
    # ln(max(A - 1, 0)) from ln A, stable for large A.
    if log_a <= 0.0:
        return _NEG_INF
    return log_a + math.log1p(-math.exp(-log_a))


@dataclass(frozen=True)
class _Term:
    log_value: float
    log_error: float
    log_tail: float
    converged: bool


class _Engine:
    """Shared quadrature state for one (spectrum, channel) pair: cone
    geometry, per-weight inclusion, and cached term integrals."""

    def __init__(self, spec: DistanceSpectrum, ch: ChannelPoint, tol: Tolerance):
        if spec.n < 3:
            raise ValueError(f"need n >= 3, got n={spec.n}")
        self.spec = spec
        self.ch = ch
        self.tol = tol
        self.n = spec.n
        self.sqrt_n = math.sqrt(spec.n)
        self.sigma = math.sqrt(ch.sigma_sq)
        self.r = _cone_radius_or_fallback(spec)
        self.geo = ConeGeometry(spec.n, self.r)
        self.geom_included = {
            h
            for h in range(1, spec.n)
            if (t := alpha_theta(h, self.geo)[1]) is not None and t > 0.0
        }
        self.included = [
            h for h in _interior_weights(spec) if h in self.geom_included
        ]
        self.z1_lo = -10.0 * self.sigma
        self.log_q_term = log_q_function(math.sqrt(2.0 * spec.n * ch.c))
        self._pair_cache: dict[int, _Term] = {}
        self._triple_cache: dict[tuple, _Term] = {}
        self._cap: _Term | None = None
        self.trouble: list[str] = []

    # -- scalar densities -------------------------------------------------

    def _phi(self, x):
        s = self.sigma
        return np.exp(-0.5 * (x / s) ** 2) / (s * math.sqrt(2.0 * math.pi))

    def _g(self, dof_half: float, x):
        # Regularized lower-gamma mass; dof 0 is a point mass at the origin.
        if dof_half <= 0.0:
            return np.ones_like(np.asarray(x, dtype=float))
        return gammainc(dof_half, np.maximum(x, 0.0))

    # -- composite Gauss-Legendre panels ----------------------------------

    def _panel_nodes(self, a, b, ksub: int):
        # (m,) bounds -> nodes/weights (m, ksub*24); zero-length rows give
        # zero weights and contribute nothing.
        frac = np.linspace(0.0, 1.0, ksub + 1)
        width = (b - a)[:, None] / ksub
        lo = a[:, None] + (b - a)[:, None] * frac[:-1][None, :]
        mid = lo + 0.5 * width
        half = 0.5 * width
        z = mid[:, :, None] + half[:, :, None] * _GL_X[None, None, :]
        w = np.broadcast_to(half[:, :, None] * _GL_W[None, None, :], z.shape)
        m = a.shape[0]
        return z.reshape(m, -1), w.reshape(m, -1)

    def _ksub(self, span: float) -> int:
        return int(np.clip(math.ceil(span / (4.0 * self.sigma)), 1, 8))

    # -- conditional (given z1) kernels -----------------------------------

    def _pair_given_z1(self, z1: np.ndarray, h: int) -> np.ndarray:
        """Pr(beta_h(z1) <= z2 <= r_z1, chi2_(n-2) mass below r^2 - z2^2)."""
        rz = np.asarray(self.geo.r_z1(z1), dtype=float)
        beta = (self.sqrt_n - z1) * delta_slope(h, self.n)
        a = np.minimum(beta, rz)
        span = float(np.max(rz - a, initial=0.0))
        if span <= 0.0:
            return np.zeros_like(rz)
        z2, w2 = self._panel_nodes(a, rz, self._ksub(span))
        mass = self._g(0.5 * (self.n - 2), (rz[:, None] ** 2 - z2**2) / (2.0 * self.ch.sigma_sq))
        return np.sum(w2 * self._phi(z2) * mass, axis=1)

    def _cap_given_z1(self, z1: np.ndarray) -> np.ndarray:
        rz = np.asarray(self.geo.r_z1(z1), dtype=float)
        return gammaincc(0.5 * (self.n - 1), rz**2 / (2.0 * self.ch.sigma_sq))

    def _triple_given_z1(
        self, z1: np.ndarray, h: int, beta_ref: np.ndarray, rho: float
    ) -> np.ndarray:
        """Pr(beta_h <= z2 <= r_z1, z3 <= l(z2), chi2_(n-3) mass below
        r^2 - z2^2 - z3^2), the conditioned kernel shared by the improved
        bounds.  rho at the -1 crossover makes the z3 constraint vacuous and
        the kernel degenerates to the pair kernel."""
        if rho <= -1.0 + 1e-12:
            return self._pair_given_z1(z1, h)
        rz = np.asarray(self.geo.r_z1(z1), dtype=float)
        beta = (self.sqrt_n - z1) * delta_slope(h, self.n)
        a = np.minimum(beta, rz)
        span = float(np.max(rz - a, initial=0.0))
        if span <= 0.0:
            return np.zeros_like(rz)
        # The regime of the z3 limit changes where the line crosses +-s;
        # those crossings are roots of a quadratic in z2.
        disc = (1.0 - rho * rho) * (rz**2 - beta_ref**2)
        root = np.sqrt(np.maximum(disc, 0.0))
        c_lo = np.clip(beta_ref * rho - root, a, rz)
        c_hi = np.clip(beta_ref * rho + root, a, rz)
        c_lo = np.where(disc >= 0.0, c_lo, a)
        c_hi = np.where(disc >= 0.0, c_hi, a)
        ksub = self._ksub(span)
        segs = [
            self._panel_nodes(a, c_lo, ksub),
            self._panel_nodes(c_lo, c_hi, ksub),
            self._panel_nodes(c_hi, rz, ksub),
        ]
        z2 = np.concatenate([s[0] for s in segs], axis=1)
        w2 = np.concatenate([s[1] for s in segs], axis=1)

        two_ss = 2.0 * self.ch.sigma_sq
        s_sq = np.maximum(rz[:, None] ** 2 - z2**2, 0.0)
        s = np.sqrt(s_sq)
        line = (beta_ref[:, None] - rho * z2) / math.sqrt(1.0 - rho * rho)
        half_disk = 0.5 * self._g(0.5 * (self.n - 2), s_sq / two_ss)
        # Odd part over [0, min(|l|, s)] of the even z3 integrand.
        u = np.minimum(np.abs(line), s)
        z3 = u[:, :, None] * (0.5 * (_GL_X + 1.0))[None, None, :]
        w3 = (0.5 * u)[:, :, None] * _GL_W[None, None, :]
        inner3 = np.sum(
            w3 * self._phi(z3) * self._g(0.5 * (self.n - 3), (s_sq[:, :, None] - z3**2) / two_ss),
            axis=2,
        )
        partial = half_disk + np.sign(line) * inner3
        hmass = np.where(line >= s, 2.0 * half_disk, np.where(line <= -s, 0.0, partial))
        return np.sum(w2 * self._phi(z2) * hmass, axis=1)

    # -- outer z1 integrals ------------------------------------------------

    def _outer(self, inner, tail_log_bound: float, label: str) -> _Term:
        f = lambda z1: self._phi(z1) * inner(np.asarray(z1, dtype=float))
        res = adaptive_integrate(f, self.z1_lo, self.sqrt_n, self.tol)
        if not res.converged:
            self.trouble.append(label)
        log_value = math.log(res.value) if res.value > 0.0 else _NEG_INF
        log_error = math.log(res.error) if res.error > 0.0 else _NEG_INF
        return _Term(log_value, log_error, _LOG_Q10 + tail_log_bound, res.converged)

    def pair_term(self, h: int) -> _Term:
        if h not in self._pair_cache:
            beta_cut = (self.sqrt_n - self.z1_lo) * delta_slope(h, self.n)
            tail = log_q_function(beta_cut / self.sigma)
            self._pair_cache[h] = self._outer(
                lambda z1: self._pair_given_z1(z1, h), tail, f"pair(h={h})"
            )
        return self._pair_cache[h]

    def triple_term(self, h: int, w_ref: int, rho: float) -> _Term:
        key = (h, w_ref, rho)
        if key not in self._triple_cache:
            slope_ref = delta_slope(w_ref, self.n)
            beta_cut = (self.sqrt_n - self.z1_lo) * delta_slope(h, self.n)
            tail = log_q_function(beta_cut / self.sigma)
            self._triple_cache[key] = self._outer(
                lambda z1: self._triple_given_z1(
                    z1, h, (self.sqrt_n - z1) * slope_ref, rho
                ),
                tail,
                f"conditioned(h={h}, ref={w_ref})",
            )
        return self._triple_cache[key]

    def cap_term(self) -> _Term:
        if self._cap is None:
            cut = self._cap_given_z1(np.array([self.z1_lo]))[0]
            tail = math.log(cut) if cut > 0.0 else _NEG_INF
            self._cap = self._outer(self._cap_given_z1, tail, "cap")
        return self._cap

    # -- assembly ----------------------------------------------------------

    def assemble(
        self,
        weighted: dict[int, float],
        include_q: bool = True,
        ahp_layer: int | None = None,
        extra_terms: list[_Term] | None = None,
    ) -> BoundResult:
        cap = self.cap_term()
        logs = list(weighted.values()) + [cap.log_value]
        tail_terms = {"cap": cap.log_value, "q": self.log_q_term if include_q else _NEG_INF}
        if include_q:
            logs.append(self.log_q_term)
        log_value = float(logsumexp(logs)) if logs else _NEG_INF
        err_logs = [t.log_error for t in (extra_terms or [])] + [
            t.log_tail for t in (extra_terms or [])
        ]
        err_logs += [cap.log_error, cap.log_tail]
        error = float(np.exp(logsumexp(err_logs))) if err_logs else 0.0
        converged = cap.converged and all(t.converged for t in (extra_terms or []))
        if self.trouble:
            warnings.warn(
                "quadrature did not converge for: " + ", ".join(sorted(set(self.trouble))),
                RuntimeWarning,
                stacklevel=3,
            )
        return BoundResult(
            value=float(np.exp(log_value)),
            log_value=log_value,
            per_weight=weighted,
            cone_radius=self.r,
            tail_terms=tail_terms,
            error_estimate=error,
            converged=converged,
            ahp_layer=ahp_layer,
        )


def _weighted_error_logs(spec: DistanceSpectrum, terms: dict[int, _Term]) -> list[_Term]:
    # Attach the spectrum coefficients to the error budgets as well.
    out = []
    for h, t in terms.items():
        la = float(spec.log_a[h])
        out.append(_Term(t.log_value, la + t.log_error, la + t.log_tail, t.converged))
    return out


def tsb_block(
    spec: DistanceSpectrum, ch: ChannelPoint, tol: Tolerance = BOUND_TOL
) -> BoundResult:
    """Tangential-sphere bound on the block error probability.

    Sums the per-weight pair terms inside the optimized cone, the chi-square
    cap leakage, and the Gaussian tail beyond the apex.
    """
    eng = _Engine(spec, ch, tol)
    weighted: dict[int, float] = {}
    raw: dict[int, _Term] = {}
    for h in eng.included:
        t = eng.pair_term(h)
        raw[h] = t
        weighted[h] = float(spec.log_a[h]) + t.log_value
    return eng.assemble(weighted, extra_terms=_weighted_error_logs(spec, raw))


def tsb_bit(io: Iowef, ch: ChannelPoint, tol: Tolerance = BOUND_TOL) -> BoundResult:
    """Tangential-sphere bound on the bit error probability: the block
    pipeline run on the information-bit reweighted spectrum, including a
    fresh cone-radius solve."""
    return tsb_block(bit_weight_transform(io), ch, tol)


def itsb(
    spec: DistanceSpectrum,
    ch: ChannelPoint,
    tol: Tolerance = BOUND_TOL,
    rho_fn=None,
) -> BoundResult:
    """Conditioned tangential-sphere bound: one minimum-weight codeword
    anchors the error events and every other pairwise event is intersected
    with the anchor's complement, shrinking each term by a z3 wedge.

    rho_fn optionally overrides the per-weight correlation (used by tests to
    verify monotonicity); the default is the most negative admissible value
    against the anchor weight.
    """
    eng = _Engine(spec, ch, tol)
    d = spec.d_min
    if rho_fn is None:
        rho_fn = lambda h: rho_min_h(h, d, spec.n)
    weighted: dict[int, float] = {}
    extras: list[_Term] = []
    anchor = eng.pair_term(d) if d < spec.n else None
    for h in eng.included:
        if h < d:
            continue  # below the effective anchor weight; see ledger
        coeff = float(spec.log_a[h]) if h != d else _log_minus_one(float(spec.log_a[h]))
        parts = []
        if coeff > _NEG_INF:
            t = eng.triple_term(h, d, float(rho_fn(h)))
            parts.append(coeff + t.log_value)
            extras.append(_Term(t.log_value, coeff + t.log_error, coeff + t.log_tail, t.converged))
        if h == d and anchor is not None:
            parts.append(anchor.log_value)
            extras.append(anchor)
        if parts:
            weighted[h] = float(logsumexp(parts))
    return eng.assemble(weighted, extra_terms=extras)


def _layer_terms(
    eng: _Engine, spec: DistanceSpectrum, w: int
) -> tuple[dict[int, float], dict[int, float], list[_Term]]:
    """Shared per-layer pieces: the anchor + spectrum terms (the envelope),
    and the extension self-term (added by the full bound only)."""
    n = spec.n
    envelope: dict[int, float] = {}
    extras: list[_Term] = []
    if w == n:
        # Degenerate top layer: the anchor threshold sits beyond the cone
        # and the conditioning lines are vacuous, so every spectrum term is
        # a plain pair term and there is no extension pair.
        for h in eng.included:
            t = eng.pair_term(h)
            la = float(spec.log_a[h])
            envelope[h] = la + t.log_value
            extras.append(_Term(t.log_value, la + t.log_error, la + t.log_tail, t.converged))
        return envelope, {}, extras
    anchor = eng.pair_term(w)
    extras.append(anchor)
    self_term: dict[int, float] = {}
    log_count = math.log(math.comb(n, w))
    # The extension pairs exist whether or not the code has weight-w words;
    # only the cone geometry can zero them out.
    t_self = eng.triple_term(w, w, rho_ww(w, n)) if w in eng.geom_included else None
    if t_self is not None:
        self_term[w] = log_count + t_self.log_value
        extras.append(
            _Term(t_self.log_value, log_count + t_self.log_error,
                  log_count + t_self.log_tail, t_self.converged)
        )
    for h in eng.included:
        if h == w:
            continue
        la = float(spec.log_a[h])
        t = eng.triple_term(h, w, rho_max_wh(w, h, n))
        envelope[h] = la + t.log_value
        extras.append(_Term(t.log_value, la + t.log_error, la + t.log_tail, t.converged))
    envelope[w] = anchor.log_value
    return envelope, self_term, extras


def ahp(
    spec: DistanceSpectrum,
    ch: ChannelPoint,
    tol: Tolerance = BOUND_TOL,
    layers=None,
) -> BoundResult:
    """Added-hyper-plane bound: extend the code with every weight-w word,
    anchor on that layer, and keep the best layer.

    layers defaults to all interior weights; w = n is legal and degenerates
    to the plain tangential-sphere form (the extension word is antipodal).
    """
    eng = _Engine(spec, ch, tol)
    layers = list(layers) if layers is not None else list(range(1, spec.n))
    if not layers:
        raise ValueError("need at least one extension layer")
    best = None
    for w in layers:
        if not 1 <= w <= spec.n:
            raise ValueError(f"layer must satisfy 1 <= w <= n, got {w}")
        envelope, self_term, extras = _layer_terms(eng, spec, w)
        merged = dict(envelope)
        for h, lv in self_term.items():
            merged[h] = float(logsumexp([merged[h], lv])) if h in merged else lv
        cand = eng.assemble(merged, include_q=True, ahp_layer=w, extra_terms=extras)
        if best is None or cand.log_value < best.log_value:
            best = cand
    return best


def psi(
    spec: DistanceSpectrum,
    ch: ChannelPoint,
    tol: Tolerance = BOUND_TOL,
    layers=None,
) -> BoundResult:
    """Lower envelope of the two conditioned bounds: the per-layer anchor and
    spectrum terms with neither the extension pair term nor the apex tail,
    minimized over the layer.  Not itself an upper bound on the error
    probability; it sandwiches the conditioned bounds from below."""
    eng = _Engine(spec, ch, tol)
    layers = list(layers) if layers is not None else list(range(1, spec.n))
    if not layers:
        raise ValueError("need at least one extension layer")
    best = None
    for w in layers:
        if not 1 <= w < spec.n:
            raise ValueError(f"layer must satisfy 1 <= w < n, got {w}")
        envelope, _, extras = _layer_terms(eng, spec, w)
        cand = eng.assemble(envelope, include_q=False, ahp_layer=w, extra_terms=extras)
        if best is None or cand.log_value < best.log_value:
            best = cand
    return best


def triple_term(
    h: int,
    beta_ref: float,
    rho: float,
    geo: ConeGeometry,
    ch: ChannelPoint,
    z1: float,
    tol: Tolerance = BOUND_TOL,
) -> float:
    """Log of the conditioned kernel at a single z1: the probability that z2
    lands in [beta_h(z1), r_z1], z3 stays below the correlation line through
    beta_ref, and the residual chi-square mass fits inside the cone section.

    This is the building block the improved bounds integrate over z1; it is
    exposed for direct inspection (monotonicity in rho, oracle comparisons).
    """
    if not 0 < h < geo.n:
        raise ValueError(f"need 0 < h < n, got h={h}")
    if rho >= 1.0:
        raise ValueError(f"need rho < 1, got rho={rho}")
    if z1 >= math.sqrt(geo.n):
        return _NEG_INF
    eng = _Engine.__new__(_Engine)
    eng.ch = ch
    eng.tol = tol
    eng.n = geo.n
    eng.sqrt_n = math.sqrt(geo.n)
    eng.sigma = math.sqrt(ch.sigma_sq)
    eng.r = geo.r
    eng.geo = geo
    z1_arr = np.array([float(z1)])
    ref_arr = np.array([float(beta_ref)])
    value = float(eng._triple_given_z1(z1_arr, h, ref_arr, float(rho))[0])
    return math.log(value) if value > 0.0 else _NEG_INF
