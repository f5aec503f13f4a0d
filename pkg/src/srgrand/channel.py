"""Channel simulators producing (received word, reliability mask, true noise).

``transmit_srbsc`` is the symbol-reliability BSC: each symbol is flagged
unreliable with probability q and, only when flagged, flipped with
probability p. ``transmit_bpsk_awgn`` derives the mask from a threshold on
the BPSK log-likelihood ratio, so flips can fall outside the mask.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .bitcode import BitBlock, make_rng

__all__ = [
    "SrBscParams",
    "ChannelRealization",
    "QuantizerFit",
    "transmit_srbsc",
    "transmit_bpsk_awgn",
    "awgn_sigma",
    "hard_flip_probability",
    "estimate_srbsc_from_awgn",
    "false_negative_rate",
    "threshold_for_false_negative",
]


@dataclass(frozen=True)
class SrBscParams:
    q: float
    p: float

    def __post_init__(self):
        if not (0.0 <= self.q <= 1.0 and 0.0 <= self.p <= 1.0):
            raise ValueError(f"q and p must lie in [0, 1], got q={self.q}, p={self.p}")

    @classmethod
    def from_epsilon(cls, eps: float) -> SrBscParams:
        """q = p = sqrt(eps), so the unconditional flip rate is eps."""
        if not 0.0 <= eps <= 1.0:
            raise ValueError(f"eps must lie in [0, 1], got {eps}")
        r = math.sqrt(eps)
        return cls(r, r)

    @property
    def epsilon(self) -> float:
        return self.q * self.p


@dataclass(frozen=True)
class ChannelRealization:
    received: BitBlock
    mask: BitBlock
    true_noise: BitBlock
    mask_truthful: bool

    @property
    def transmitted(self) -> BitBlock:
        return self.received ^ self.true_noise


def _draw_srbsc(n: int, params: SrBscParams, rng: np.random.Generator):
    mask = rng.random(n) < params.q
    flips = rng.random(n) < params.p
    return mask, flips & mask


def transmit_srbsc(x: BitBlock, params: SrBscParams, rng) -> ChannelRealization:
    n = len(x)
    if n < 1:
        raise ValueError("empty input block")
    mask, noise = _draw_srbsc(n, params, make_rng(rng))
    z = BitBlock.from_array(noise)
    return ChannelRealization(x ^ z, BitBlock.from_array(mask), z, True)


def awgn_sigma(ebno_db: float, rate: float = 1.0) -> float:
    """Noise standard deviation for unit-energy BPSK at the given Eb/N0."""
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebno_db / 10.0)))


def hard_flip_probability(ebno_db: float, rate: float = 1.0) -> float:
    """Q(1 / sigma): bit error rate of hard-decision BPSK."""
    return 0.5 * float(erfc(1.0 / (awgn_sigma(ebno_db, rate) * math.sqrt(2.0))))


def _bpsk(n: int, bits: np.ndarray, ebno_db: float, rate: float, rng: np.random.Generator):
    sigma = awgn_sigma(ebno_db, rate)
    y = (1.0 - 2.0 * bits) + sigma * rng.standard_normal(n)
    llr = 2.0 * y / sigma**2
    return (y < 0).astype(np.uint8), llr


def transmit_bpsk_awgn(x: BitBlock, ebno_db: float, llr_threshold: float, rng,
                       rate: float = 1.0) -> ChannelRealization:
    """BPSK over AWGN, hard decision by sign, mask where |LLR| < threshold.

    ``rate`` converts Eb/N0 to the per-symbol SNR; the default 1 treats
    ``ebno_db`` as the channel-bit SNR.
    """
    if llr_threshold < 0:
        raise ValueError("llr_threshold must be nonnegative")
    bits = x.to_array()
    hard, llr = _bpsk(len(x), bits, ebno_db, rate, make_rng(rng))
    mask = np.abs(llr) < llr_threshold
    received = BitBlock.from_array(hard)
    return ChannelRealization(received, BitBlock.from_array(mask), received ^ x, False)


@dataclass(frozen=True)
class QuantizerFit:
    q: float
    p: float
    p_defined: bool
    false_negative_rate: float
    bits: int

    @property
    def params(self) -> SrBscParams:
        return SrBscParams(self.q, self.p)


def _simulate_llr(ebno_db: float, bits: int, rng, rate: float):
    rng = make_rng(rng)
    # all-zero input is enough: the channel is symmetric in the transmitted bit
    hard, llr = _bpsk(bits, np.zeros(bits, dtype=np.uint8), ebno_db, rate, rng)
    return hard.astype(bool), np.abs(llr)


def estimate_srbsc_from_awgn(ebno_db: float, llr_threshold: float, rng, bits: int = 1_000_000,
                             rate: float = 1.0) -> QuantizerFit:
    """Fit SR-BSC (q, p) to a thresholded BPSK/AWGN channel by simulation."""
    if llr_threshold < 0:
        raise ValueError("llr_threshold must be nonnegative")
    flip, mag = _simulate_llr(ebno_db, bits, rng, rate)
    mask = mag < llr_threshold
    marked = int(mask.sum())
    q = marked / bits
    fn = float(np.mean(flip & ~mask))
    if marked == 0:
        return QuantizerFit(q, 0.0, False, fn, bits)
    return QuantizerFit(q, float(flip[mask].sum()) / marked, True, fn, bits)


def false_negative_rate(ebno_db: float, llr_threshold: float, rate: float = 1.0) -> float:
    """Closed form P(flip and |LLR| >= t) per bit."""
    sigma = awgn_sigma(ebno_db, rate)
    # flip with |y| >= t sigma^2 / 2 means y <= -t sigma^2 / 2 given +1 sent
    edge = 1.0 + llr_threshold * sigma**2 / 2.0
    return 0.5 * float(erfc(edge / (sigma * math.sqrt(2.0))))


def threshold_for_false_negative(ebno_db: float, target: float, rng, bits: int = 10_000_000,
                                 rate: float = 1.0, tol: float = 1e-6) -> float:
    """Smallest LLR threshold whose simulated false-negative rate is at most ``target``.

    One batch of ``bits`` samples is drawn and the threshold is bisected
    against that fixed sample, where the rate is monotone in the threshold.
    """
    flip, mag = _simulate_llr(ebno_db, bits, rng, rate)
    flipped = np.sort(mag[flip])

    def rate_at(t):
        return (flipped.size - np.searchsorted(flipped, t, "left")) / bits

    lo, hi = 0.0, 1.0
    while rate_at(hi) > target:
        hi *= 2.0
        if hi > 1e6:
            raise ValueError(f"target {target} unreachable with {bits} samples")
    if rate_at(lo) <= target:
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if rate_at(mid) > target:
            lo = mid
        else:
            hi = mid
    return hi
