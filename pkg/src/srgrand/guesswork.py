"""Noise patterns in maximum-likelihood order for memoryless binary noise.

Patterns over ``l`` positions are emitted by nondecreasing Hamming weight;
within a weight class the position sets advance in colexicographic order,
which is plain increasing order of the integer bitmask. Ranks are 1-based
and exact (Python integers).
"""
from __future__ import annotations

from math import comb
from typing import Iterator

from .bitcode import BitBlock

__all__ = [
    "PatternEnumerator",
    "patterns_up_to_weight",
    "scatter",
    "gather",
    "rank_of_pattern",
    "unrank_pattern",
    "colex_rank",
    "colex_unrank",
]


def patterns_up_to_weight(l: int, w: int) -> int:
    """Number of length-``l`` patterns of weight at most ``w``."""
    if not 0 <= w <= l:
        raise ValueError(f"need 0 <= w <= l, got w={w}, l={l}")
    return sum(comb(l, i) for i in range(w + 1))


def _next_same_weight(v: int) -> int:
    # Gosper's hack: smallest integer above v with the same popcount
    low = v & -v
    ripple = v + low
    return ripple | (((v ^ ripple) >> 2) // low)


class PatternEnumerator:
    """Iterator over all ``2**length`` patterns in canonical guessing order.

    With ``complement=True`` every pattern is inverted, which is the
    likelihood order when the flip probability exceeds one half.
    """

    def __init__(self, length: int, complement: bool = False):
        if length < 0:
            raise ValueError(f"negative length {length}")
        self.length = length
        self.complement = complement
        self.current_weight = 0
        self._state = 0
        self._full = (1 << length) - 1
        self.exhausted = False
        self.emitted = 0

    def __iter__(self) -> Iterator[BitBlock]:
        return self

    def __next__(self) -> BitBlock:
        if self.exhausted:
            raise StopIteration
        v = self._state
        self.emitted += 1
        # advance
        if self.current_weight == self.length:
            self.exhausted = True
        else:
            nxt = _next_same_weight(v) if v else 0
            if v == 0 or nxt > self._full:
                self.current_weight += 1
                nxt = (1 << self.current_weight) - 1
            self._state = nxt
        if self.complement:
            v ^= self._full
        return BitBlock(self.length, v)

    def next_pattern(self) -> BitBlock | None:
        """Next pattern, or ``None`` once all have been emitted."""
        return next(self, None)


def colex_rank(positions) -> int:
    """0-based colex index of a position set among sets of the same size."""
    return sum(comb(c, i) for i, c in enumerate(sorted(positions), start=1))


def colex_unrank(index: int, w: int) -> list[int]:
    """Inverse of :func:`colex_rank` for ``w``-subsets."""
    out = []
    for i in range(w, 0, -1):
        c = i - 1
        while comb(c + 1, i) <= index:
            c += 1
        out.append(c)
        index -= comb(c, i)
    return out[::-1]


def rank_of_pattern(z: BitBlock, complement: bool = False) -> int:
    """1-based position of ``z`` in the canonical emission order."""
    if complement:
        z = ~z
    l = len(z)
    pos = z.positions()
    w = len(pos)
    below = patterns_up_to_weight(l, w - 1) if w else 0
    return below + colex_rank(pos) + 1


def unrank_pattern(l: int, rank: int) -> BitBlock:
    if not 1 <= rank <= 1 << l:
        raise ValueError(f"rank {rank} outside 1..2^{l}")
    idx = rank - 1
    w = 0
    while idx >= comb(l, w):
        idx -= comb(l, w)
        w += 1
    return BitBlock.from_positions(l, colex_unrank(idx, w))


def scatter(mask: BitBlock, sub: BitBlock) -> BitBlock:
    """Place the bits of ``sub`` in order at the set positions of ``mask``."""
    pos = mask.positions()
    if len(sub) != len(pos):
        raise ValueError(f"sub-pattern length {len(sub)} != mask weight {len(pos)}")
    v = sub.value
    out = 0
    for i, p in enumerate(pos):
        if (v >> i) & 1:
            out |= 1 << p
    return BitBlock(len(mask), out)


def gather(mask: BitBlock, z: BitBlock) -> BitBlock:
    """Inverse of :func:`scatter`: read ``z`` at the set positions of ``mask``."""
    pos = mask.positions()
    v = z.value
    out = 0
    for i, p in enumerate(pos):
        if (v >> p) & 1:
            out |= 1 << i
    return BitBlock(len(pos), out)
