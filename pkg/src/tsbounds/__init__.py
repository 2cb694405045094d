"""Upper bounds on maximum-likelihood decoding error probability for binary
linear block codes over the BPSK-AWGN channel, together with the matching
asymptotic error exponents and a Monte-Carlo ML decoder for validation."""

__version__ = "0.1.0"
