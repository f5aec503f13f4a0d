"""GRAND-family decoders.

All four algorithms run the same guessing loop over a set of candidate
positions: GRAND guesses over every position, SRGRAND only over positions
flagged unreliable by the mask; the *AB variants stop after a query budget.
One query is one code-book membership test.

Two engines produce identical outcomes: ``"syndrome"`` (default) jumps
straight to the first pattern that yields a code-word using
:class:`~srgrand.search.SyndromeSearch`; ``"loop"`` literally walks the
:class:`~srgrand.guesswork.PatternEnumerator` and calls
:func:`~srgrand.bitcode.is_member` once per guess.
"""
from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .bitcode import BitBlock, LinearCode, is_member
from .channel import SrBscParams
from .guesswork import PatternEnumerator, patterns_up_to_weight, scatter
from .ldp import h2
from .search import SyndromeSearch

__all__ = [
    "Status",
    "DecodeOutcome",
    "NoAbandonment",
    "MaxWeight",
    "MaxQueries",
    "EntropyTypical",
    "MaskGate",
    "resolve_budget",
    "matched_budget_srgrandab",
    "grand",
    "srgrand",
    "guess",
]


class Status(Enum):
    DECODED = "decoded"
    ABANDONED = "abandoned"


@dataclass(frozen=True)
class DecodeOutcome:
    status: Status
    queries: int
    word: BitBlock | None = None
    guessed_noise: BitBlock | None = None

    @property
    def decoded(self) -> bool:
        return self.status is Status.DECODED


@dataclass(frozen=True)
class NoAbandonment:
    pass


@dataclass(frozen=True)
class MaxWeight:
    """Query every pattern of weight <= ``w`` over the searched positions."""

    w: int


@dataclass(frozen=True)
class MaxQueries:
    q: int


@dataclass(frozen=True)
class EntropyTypical:
    """Budget ``ceil(2**x)`` covering an entropy-typical set.

    ``scale`` selects the exponent ``x``:
    ``"full"`` -> n (H + delta), ``"mean"`` -> n (q H + delta),
    ``"realized"`` -> L (H + delta) with L the realized mask weight.
    ``entropy`` defaults to h2(p) of the channel parameters.
    """

    delta: float = 0.05
    scale: str = "full"
    entropy: float | None = None


@dataclass(frozen=True)
class MaskGate:
    """Refuse to guess when more than ``max_fraction * n`` symbols are flagged, else apply ``then``."""

    max_fraction: float
    then: object = NoAbandonment()


def _ceil_pow2(x: float) -> int:
    whole = math.floor(x)
    frac = Fraction(2.0 ** (x - whole))
    return math.ceil(frac * (2**whole) if whole >= 0 else frac / (2**-whole))


def resolve_budget(rule, n: int, mask_weight: int | None = None, params: SrBscParams | None = None) -> int | None:
    """Query budget for one decode; ``None`` means unlimited.

    ``mask_weight`` is the number of searched positions (``n`` for GRAND).
    """
    l = n if mask_weight is None else mask_weight
    if isinstance(rule, NoAbandonment):
        return None
    if isinstance(rule, MaxWeight):
        if rule.w < 0:
            raise ValueError("MaxWeight needs w >= 0")
        return patterns_up_to_weight(l, min(rule.w, l))
    if isinstance(rule, MaxQueries):
        if rule.q < 0:
            raise ValueError("MaxQueries needs q >= 0")
        return int(rule.q)
    if isinstance(rule, EntropyTypical):
        if rule.entropy is not None:
            H = rule.entropy
        elif params is not None:
            H = h2(params.p)
        else:
            raise ValueError("EntropyTypical needs an entropy or channel parameters")
        if rule.scale == "full":
            x = n * (H + rule.delta)
        elif rule.scale == "mean":
            if params is None:
                raise ValueError("scale='mean' needs channel parameters")
            x = n * (params.q * H + rule.delta)
        elif rule.scale == "realized":
            x = l * (H + rule.delta)
        else:
            raise ValueError(f"unknown scale {rule.scale!r}")
        return _ceil_pow2(x)
    if isinstance(rule, MaskGate):
        if l > rule.max_fraction * n:
            return 0
        return resolve_budget(rule.then, n, mask_weight, params)
    raise TypeError(f"not an abandonment rule: {rule!r}")


def matched_budget_srgrandab(grandab_rule, n: int) -> MaxQueries:
    """SRGRANDAB rule allowing as many queries as GRANDAB gets at block length ``n``."""
    if not isinstance(grandab_rule, (MaxWeight, MaxQueries)):
        raise ValueError(f"cannot match budget of {grandab_rule!r}")
    return MaxQueries(resolve_budget(grandab_rule, n, n))


_FULL_SEARCH: "weakref.WeakKeyDictionary[LinearCode, SyndromeSearch]" = weakref.WeakKeyDictionary()


def _searcher(code: LinearCode, positions: list[int]) -> SyndromeSearch:
    nbits = code.n - code.k
    if len(positions) == code.n:
        s = _FULL_SEARCH.get(code)
        if s is None:
            s = _FULL_SEARCH[code] = SyndromeSearch(code.column_syndromes, nbits)
        return s
    cols = code.column_syndromes
    return SyndromeSearch([cols[p] for p in positions], nbits)


def _loop(code, received, mask, budget, complement):
    enum = PatternEnumerator(mask.weight(), complement=complement)
    queries = 0
    for sub in enum:
        if budget is not None and queries >= budget:
            return None, budget
        queries += 1
        z = scatter(mask, sub)
        if is_member(code, received ^ z):
            return z, queries
    return None, queries


def guess(code: LinearCode, received: BitBlock, mask: BitBlock, budget: int | None,
          complement: bool = False, engine: str = "syndrome") -> DecodeOutcome:
    """Guess noise on the set positions of ``mask`` for at most ``budget`` queries."""
    if len(received) != code.n or len(mask) != code.n:
        raise ValueError(f"expected length {code.n}, got {len(received)} and {len(mask)}")
    if engine == "loop":
        z, queries = _loop(code, received, mask, budget, complement)
    elif engine == "syndrome":
        positions = mask.positions()
        target = code.syndrome(received)
        if complement:
            for p in positions:
                target ^= code.column_syndromes[p]
        hit, queries = _searcher(code, positions).first_match(target, budget)
        if hit is None:
            z = None
        else:
            flips = [positions[i] for i in hit]
            z = BitBlock.from_positions(code.n, flips)
            if complement:
                z = z ^ mask
    else:
        raise ValueError(f"unknown engine {engine!r}")
    if z is None:
        return DecodeOutcome(Status.ABANDONED, queries)
    return DecodeOutcome(Status.DECODED, queries, received ^ z, z)


def grand(code: LinearCode, received: BitBlock, rule=NoAbandonment(), params: SrBscParams | None = None,
          complement: bool = False, engine: str = "syndrome") -> DecodeOutcome:
    """Hard-detection GRAND (GRANDAB when ``rule`` has a budget)."""
    if len(received) != code.n:
        raise ValueError(f"received length {len(received)} != n={code.n}")
    budget = resolve_budget(rule, code.n, code.n, params)
    return guess(code, received, BitBlock.ones(code.n), budget, complement, engine)


def srgrand(code: LinearCode, received: BitBlock, mask: BitBlock, rule=NoAbandonment(),
            params: SrBscParams | None = None, complement: bool = False,
            engine: str = "syndrome") -> DecodeOutcome:
    """Symbol-reliability GRAND: guess only on positions where ``mask`` is 1.

    Exhausting all ``2**weight(mask)`` sub-patterns without a code-word (an
    untruthful mask) is reported as abandonment.
    """
    if len(received) != code.n or len(mask) != code.n:
        raise ValueError(f"expected length {code.n}, got {len(received)} and {len(mask)}")
    budget = resolve_budget(rule, code.n, mask.weight(), params)
    return guess(code, received, mask, budget, complement, engine)
