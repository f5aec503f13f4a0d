"""Large-deviations quantities for guessing decoders on the symbol-reliability BSC.

Everything is in bits: logs are base 2, entropies and exponents are per
symbol. The noise on an unreliable symbol is Bernoulli(p); the number of
unreliable symbols in a block of ``n`` is Binomial(n, q).

Rate functions are obtained numerically as Legendre-Fenchel transforms of
the closed-form scaled cumulant generating functions (sCGFs); the
closed-form Kullback-Leibler rate for the mask fraction is kept as an
independent check.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "NoiseDistribution",
    "LengthLaw",
    "ExponentCurve",
    "NonConvexError",
    "h2",
    "shannon_entropy",
    "renyi_entropy",
    "min_entropy",
    "scgf_noise",
    "scgf_length",
    "scgf_subordinated",
    "legendre_transform",
    "golden_section_max",
    "rate_noise",
    "rate_length",
    "rate_length_kl",
    "rate_subordinated",
    "capacity_sr",
    "capacity_hard",
    "g_star",
    "g_star_from_rate",
    "critical_rate",
    "error_exponent",
    "error_exponent_conditional",
    "error_exponent_from_conditional",
    "abandonment_exponent",
    "abandonment_exponent_terms",
    "complexity_exponent",
    "complexity_exponent_ab",
    "approx_bler",
    "approx_queries_per_bit",
    "brute_force_computations_per_bit",
]

_INV_PHI = (math.sqrt(5) - 1) / 2
ALPHA_WINDOW = (-5.0, 50.0)


class NonConvexError(ValueError):
    pass


@dataclass(frozen=True)
class NoiseDistribution:
    """Law of the noise on an unreliable symbol; ``probs[i] = P(N = i)``."""

    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(x) for x in self.probs)
        if len(probs) < 2 or min(probs) < 0 or abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError(f"not a probability vector: {probs}")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def bernoulli(cls, p: float) -> NoiseDistribution:
        return cls((1.0 - p, p))

    @property
    def base(self) -> int:
        return len(self.probs)

    def _log(self, x):
        return math.log(x, self.base) if self.base != 2 else math.log2(x)


@dataclass(frozen=True)
class LengthLaw:
    """Bernoulli(q) reliability flags; the mean unreliable fraction is ``q``."""

    q: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q must lie in [0, 1], got {self.q}")

    @property
    def mean(self) -> float:
        return self.q


@dataclass
class ExponentCurve:
    xs: np.ndarray
    ys: np.ndarray
    meta: dict = field(default_factory=dict)
    markers: list[tuple[float, float]] = field(default_factory=list)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.ys = np.asarray(self.ys, dtype=float)
        if self.xs.shape != self.ys.shape:
            raise ValueError("xs and ys must have equal shape")
        if np.any(np.diff(self.xs) < 0):
            raise ValueError("xs must be sorted")

    def is_convex(self, tol: float = 1e-9) -> bool:
        ok = np.isfinite(self.ys)
        x, y = self.xs[ok], self.ys[ok]
        if x.size < 3:
            return True
        slopes = np.diff(y) / np.diff(x)
        return bool(np.all(np.diff(slopes) >= -tol))


def _as_noise(d) -> NoiseDistribution:
    if isinstance(d, NoiseDistribution):
        return d
    return NoiseDistribution.bernoulli(float(d))


def _as_law(law) -> LengthLaw:
    return law if isinstance(law, LengthLaw) else LengthLaw(float(law))


# --- entropies -------------------------------------------------------------

def h2(p: float) -> float:
    """Binary entropy in bits."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def shannon_entropy(d) -> float:
    d = _as_noise(d)
    return -sum(x * d._log(x) for x in d.probs if x > 0)


def min_entropy(d) -> float:
    d = _as_noise(d)
    return -d._log(max(d.probs))


def renyi_entropy(d, alpha: float) -> float:
    d = _as_noise(d)
    if alpha == 1.0:
        return shannon_entropy(d)
    if math.isinf(alpha):
        return min_entropy(d)
    if alpha == 0.0:
        return d._log(sum(1 for x in d.probs if x > 0))
    s = sum(x**alpha for x in d.probs if x > 0)
    return d._log(s) / (1.0 - alpha)


# --- sCGFs -----------------------------------------------------------------

def scgf_noise(alpha: float, d) -> float:
    """Growth rate of the alpha-th guesswork moment for fully unreliable blocks."""
    d = _as_noise(d)
    if alpha <= -1.0:
        return -min_entropy(d)
    if alpha == 0.0:
        return 0.0
    # alpha * H_{1/(1+alpha)} written as (1+alpha) log sum p^{1/(1+alpha)};
    # factoring out the largest p keeps the sum >= 1 as alpha -> -1
    t = 1.0 / (1.0 + alpha)
    top = max(d.probs)
    s = sum((x / top) ** t for x in d.probs if x > 0)
    return d._log(top) + (1.0 + alpha) * d._log(s)


def scgf_length(alpha: float, law) -> float:
    q = _as_law(law).q
    if q == 1.0:
        return float(alpha)
    if q == 0.0:
        return 0.0
    # log2(1 - q + q 2^alpha) without overflow for large alpha
    if alpha > 0:
        return alpha + math.log2(q + (1.0 - q) * 2.0 ** (-alpha))
    return math.log2(1.0 - q + q * 2.0**alpha)


def scgf_subordinated(alpha: float, d, law) -> float:
    return scgf_length(scgf_noise(alpha, d), law)


# --- Legendre-Fenchel transform -------------------------------------------

def golden_section_max(fun: Callable[[float], float], lo: float, hi: float, tol: float = 1e-8):
    """Maximise a unimodal function on [lo, hi]; returns (argmax, max)."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fun(d)
    best = [(fun(a), a), (fc, c), (fd, d), (fun(b), b)]
    val, arg = max(best)
    return arg, val


def _check_convex(f: Callable[[float], float], lo: float, hi: float, points: int = 65) -> None:
    grid = np.linspace(lo, hi, points)
    vals = np.array([f(a) for a in grid])
    second = vals[2:] - 2 * vals[1:-1] + vals[:-2]
    scale = 1e-9 * max(1.0, float(np.max(np.abs(vals))))
    bad = np.flatnonzero(second < -scale)
    if bad.size:
        i = bad[0] + 1
        raise NonConvexError(
            f"function is not convex near alpha={grid[i]:.4g} "
            f"(second difference {second[bad[0]]:.3g})"
        )


def legendre_transform(
    f: Callable[[float], float],
    x: float,
    window: tuple[float, float] = ALPHA_WINDOW,
    tol: float = 1e-8,
    check: bool = True,
    max_widen: int = 8,
) -> float:
    """sup_alpha (x * alpha - f(alpha)) for convex ``f``.

    The maximiser is located by golden-section search on ``window``; when it
    lands on an edge the window is doubled on that side (up to ``max_widen``
    times) for as long as the value keeps improving.
    """
    lo, hi = window
    if check:
        _check_convex(f, lo, hi)

    def obj(a):
        return x * a - f(a)

    arg, val = golden_section_max(obj, lo, hi, tol)
    for _ in range(max_widen):
        edge = 10 * tol
        if hi - arg < edge:
            new_lo, new_hi = hi - 1.0, hi + (hi - lo)
        elif arg - lo < edge:
            new_lo, new_hi = lo - (hi - lo), lo + 1.0
        else:
            break
        arg2, val2 = golden_section_max(obj, new_lo, new_hi, tol)
        if val2 <= val + 1e-15:
            break
        lo, hi = min(lo, new_lo), max(hi, new_hi)
        arg, val = arg2, val2
    return val


# --- rate functions --------------------------------------------------------

@lru_cache(maxsize=200_000)
def _rate_noise_cached(x: float, probs: tuple[float, ...]) -> float:
    d = NoiseDistribution(probs)
    top = d._log(sum(1 for v in probs if v > 0))
    if x < 0 or x > top + 1e-15:
        return math.inf
    return legendre_transform(lambda a: scgf_noise(a, d), x, check=False)


def rate_noise(x: float, d) -> float:
    """Rate function of (1/n) log G for a fully unreliable block."""
    d = _as_noise(d)
    return _rate_noise_cached(float(x), d.probs)


def rate_length_kl(l: float, law) -> float:
    """Closed-form rate of the unreliable fraction: KL(l || q) in bits."""
    q = _as_law(law).q
    if l < 0 or l > 1:
        return math.inf

    def term(a, b):
        if a == 0:
            return 0.0
        if b == 0:
            return math.inf
        return a * math.log2(a / b)

    return term(l, q) + term(1.0 - l, 1.0 - q)


def rate_length(l: float, law) -> float:
    """Rate of the unreliable fraction via the transform of the length sCGF."""
    law = _as_law(law)
    if l < 0 or l > 1:
        return math.inf
    return legendre_transform(lambda a: scgf_length(a, law), l, window=(-40.0, 40.0))


def _joint_rate(g: float, l: float, d, q: float) -> float:
    if l <= 0.0:
        return 0.0 + rate_length_kl(0.0, q) if g <= 0 else math.inf
    return l * rate_noise(g / l, d) + rate_length_kl(l, q)


def rate_subordinated(g: float, d, law, tol: float = 1e-10) -> float:
    """inf over l of l * I_N(g / l) + I_L(l): rate of (1/n) log G for masked guessing."""
    d = _as_noise(d)
    q = _as_law(law).q
    top = d._log(sum(1 for v in d.probs if v > 0))
    if g < 0 or g > top + 1e-15:
        return math.inf
    if q == 1.0:
        return rate_noise(g, d)
    if q == 0.0:
        return 0.0 if g == 0 else math.inf
    lo = max(g / top, 1e-6)
    hi = 1.0
    if lo >= hi:
        return _joint_rate(g, 1.0, d, q)
    arg, val = golden_section_max(lambda l: -_joint_rate(g, l, d, q), lo, hi, tol)
    best = -val
    # endpoints: l=1 is admissible; l -> 0 only matters at g=0
    best = min(best, _joint_rate(g, hi, d, q))
    if g == 0:
        best = min(best, _joint_rate(0.0, 0.0, d, q))
    return best


# --- capacities ------------------------------------------------------------

def capacity_sr(q: float, p: float) -> float:
    return 1.0 - q * h2(p)


def capacity_hard(q: float, p: float) -> float:
    return 1.0 - h2(q * p)


# --- critical points -------------------------------------------------------

def _degenerate(d: NoiseDistribution) -> bool:
    return max(d.probs) == 1.0 or len(set(d.probs)) == 1


def g_star(d, h: float = 1e-5) -> float:
    """Point where the noise rate function has slope one: the derivative of the noise sCGF at 1."""
    d = _as_noise(d)
    if _degenerate(d):
        raise ValueError(f"g* does not exist for degenerate noise {d.probs}")
    return (scgf_noise(1.0 + h, d) - scgf_noise(1.0 - h, d)) / (2 * h)


def g_star_from_rate(d, h: float = 1e-4) -> float:
    """Independent route to g*: solve I_N'(g) = 1 on the numerical rate function."""
    from scipy.optimize import brentq

    d = _as_noise(d)
    if _degenerate(d):
        raise ValueError(f"g* does not exist for degenerate noise {d.probs}")
    H = shannon_entropy(d)

    def slope(g):
        return (rate_noise(g + h, d) - rate_noise(g - h, d)) / (2 * h) - 1.0

    return brentq(slope, H + 2 * h, 1.0 - 2 * h, xtol=1e-10)


def _g_star_limit(d: NoiseDistribution) -> float:
    # noiseless or deterministic flips: all mass on one pattern; uniform: flat sCGF slope 1
    if max(d.probs) == 1.0:
        return 0.0
    if len(set(d.probs)) == 1:
        return d._log(len(d.probs))
    return g_star(d)


def critical_rate(q: float, p: float, boundary: str = "tilted") -> float:
    """Rate below which the error exponent is the straight line 1 - R - Lambda_L(H_1/2).

    ``boundary="tilted"`` uses the slope of the subordinated sCGF at 1,
    g* * Lambda_L'(H_1/2), where that straight line meets I_{N^L}(1 - R)
    tangentially. ``boundary="mean"`` uses q * g*, which coincides with the
    tilted point only when q is 0 or 1.
    """
    d = NoiseDistribution.bernoulli(p)
    gs = _g_star_limit(d)
    if boundary == "mean":
        return 1.0 - q * gs
    if boundary != "tilted":
        raise ValueError(f"unknown boundary {boundary!r}")
    a = renyi_entropy(d, 0.5)
    tilt = q * 2.0**a / (1.0 - q + q * 2.0**a)
    return 1.0 - tilt * gs


# --- error exponents -------------------------------------------------------

def error_exponent(R: float, q: float, p: float, boundary: str = "tilted") -> float:
    """Block-error exponent of ML (SRGRAND) decoding of random codes at rate R."""
    d = NoiseDistribution.bernoulli(p)
    if R >= 1.0 - q * h2(p):
        return 0.0
    if R < critical_rate(q, p, boundary):
        return 1.0 - R - scgf_length(renyi_entropy(d, 0.5), q)
    return rate_subordinated(1.0 - R, d, q)


def error_exponent_conditional(R: float, l: float, q: float, p: float) -> float:
    """Joint exponent of an error and an unreliable fraction near ``l``."""
    if not 0.0 < l <= 1.0:
        raise ValueError(f"l must lie in (0, 1], got {l}")
    d = NoiseDistribution.bernoulli(p)
    IL = rate_length_kl(l, q)
    if R <= 1.0 - l * _g_star_limit(d):
        return IL + 1.0 - R - l * renyi_entropy(d, 0.5)
    if R <= 1.0 - l * h2(p):
        return IL + l * rate_noise((1.0 - R) / l, d)
    return IL


def error_exponent_from_conditional(R: float, q: float, p: float, grid: Sequence[float] | None = None) -> float:
    """inf over l of the conditional exponent; grid search refined by golden section."""
    if grid is None:
        grid = np.linspace(0.01, 1.0, 100)
    vals = [error_exponent_conditional(R, float(l), q, p) for l in grid]
    i = int(np.argmin(vals))
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, len(grid) - 1)])
    _, v = golden_section_max(lambda l: -error_exponent_conditional(R, l, q, p), lo, hi, 1e-9)
    return min(min(vals), -v)


def abandonment_exponent_terms(R: float, q: float, p: float, delta: float, literal: bool = False):
    """(ML error exponent, abandonment exponent) for SRGRANDAB.

    The abandonment term is I_{N^L}(q H + delta), matching a budget of
    2^{n (q H + delta)} queries; ``literal=True`` evaluates it at H + delta.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    d = NoiseDistribution.bernoulli(p)
    H = h2(p)
    x = (H if literal else q * H) + delta
    return error_exponent(R, q, p), rate_subordinated(x, d, q)


def abandonment_exponent(R: float, q: float, p: float, delta: float, literal: bool = False) -> float:
    return min(abandonment_exponent_terms(R, q, p, delta, literal))


# --- complexity ------------------------------------------------------------

def complexity_exponent(R: float, q: float, p: float) -> float:
    """Growth rate of the mean number of SRGRAND queries."""
    a = renyi_entropy(NoiseDistribution.bernoulli(p), 0.5)
    return min(scgf_length(a, q), 1.0 - R)


def complexity_exponent_ab(R: float, q: float, p: float, delta: float) -> float:
    return min(complexity_exponent(R, q, p), q * h2(p) + delta)


def approx_bler(n: int, R: float, q: float, p: float) -> float:
    """2^{-n eps(R)}; clamped to 1 with a warning at or above capacity."""
    e = error_exponent(R, q, p)
    if e <= 0.0:
        warnings.warn(
            f"R={R:.4g} is at or above capacity {capacity_sr(q, p):.4g}; block error clamped to 1",
            RuntimeWarning,
            stacklevel=2,
        )
        return 1.0
    return 2.0 ** (-n * e)


def approx_queries_per_bit(n: int, R: float, q: float, p: float) -> float:
    return 2.0 ** (n * complexity_exponent(R, q, p)) / n


def brute_force_computations_per_bit(n: int, R: float) -> float:
    """Likelihood evaluations per bit for exhaustive ML over the code-book."""
    return 2.0 ** (n * min(R, 1.0 - R)) / n
