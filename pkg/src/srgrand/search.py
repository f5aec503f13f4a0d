"""First-match search over the canonical guessing order, by syndrome.

Querying ``received xor z`` for membership is the same as asking whether the
syndrome of ``z`` (the XOR of the check-matrix columns it touches) equals the
syndrome of ``received``. Instead of issuing the queries one by one, each
weight class is scanned in bulk and the colex-smallest hit is taken; its
rank is exactly the number of queries the sequential loop would have made.

Small weight classes are scanned through a full table of syndromes in colex
order. Large classes are split meet-in-the-middle: a ``w``-set is a low
``floor(w/2)``-set below a high ``ceil(w/2)``-set, and the high sets are
visited in blocks of increasing largest element so the scan stops at the
first block holding a hit.

Syndromes longer than 64 bits are compressed by a fixed random GF(2)-linear
map to 64 bits; linearity keeps every true hit, and hits are re-verified on
the full syndromes.
"""
from __future__ import annotations

from math import comb
from typing import Sequence

import numpy as np

from .guesswork import colex_rank, colex_unrank

TABLE_LIMIT = 1 << 22
CHUNK = 1 << 18
_HASH_SEED = 0x5EED_CAFE


def _hash_columns(columns: Sequence[int], nbits: int) -> tuple[np.ndarray, list[int] | None]:
    if nbits <= 64:
        return np.array(columns, dtype=np.uint64), None
    rng = np.random.Generator(np.random.PCG64(_HASH_SEED))
    masks = []
    for _ in range(64):
        bits = np.packbits(rng.integers(0, 2, size=nbits, dtype=np.uint8), bitorder="little")
        masks.append(int.from_bytes(bits.tobytes(), "little"))
    return np.array([_project(c, masks) for c in columns], dtype=np.uint64), masks


def _project(value: int, masks: list[int]) -> int:
    h = 0
    for t, m in enumerate(masks):
        h |= ((value & m).bit_count() & 1) << t
    return h


class SyndromeSearch:
    """Search engine bound to a fixed ordered list of candidate positions."""

    def __init__(self, columns: Sequence[int], nbits: int):
        self.columns = list(columns)
        self.l = len(self.columns)
        self.hashed, self._masks = _hash_columns(self.columns, nbits)
        self._xor = {0: np.zeros(1, dtype=np.uint64)}
        self._elems = {0: np.zeros((1, 0), dtype=np.int32)}

    def _h(self, value: int) -> np.uint64:
        return np.uint64(value if self._masks is None else _project(value, self._masks))

    def _verify(self, positions, target: int) -> bool:
        if self._masks is None:
            return True
        s = 0
        for p in positions:
            s ^= self.columns[p]
        return s == target

    # colex tables: entries for sets with largest element < c form a prefix of length C(c, w)
    def _xor_table(self, w: int) -> np.ndarray:
        if w not in self._xor:
            prev = self._xor_table(w - 1)
            parts = [prev[: comb(c, w - 1)] ^ self.hashed[c] for c in range(w - 1, self.l)]
            self._xor[w] = np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint64)
        return self._xor[w]

    def _elem_table(self, w: int) -> tuple[np.ndarray, np.ndarray]:
        if w not in self._elems:
            prev_x = self._xor_table(w - 1)
            prev_e = self._elem_table(w - 1)[1]
            xs, es = [], []
            for c in range(w - 1, self.l):
                m = comb(c, w - 1)
                xs.append(prev_x[:m] ^ self.hashed[c])
                es.append(np.hstack([prev_e[:m], np.full((m, 1), c, dtype=np.int32)]))
            self._xor.setdefault(w, np.concatenate(xs))
            self._elems[w] = np.concatenate(es)
        return self._xor[w], self._elems[w]

    def _first_direct(self, w: int, target: int, allow: int):
        table = self._xor_table(w)[:allow]
        for idx in np.flatnonzero(table == self._h(target)).tolist():
            pos = colex_unrank(idx, w)
            if self._verify(pos, target):
                return idx, pos
        return None

    def _first_split(self, w: int, target: int, allow: int):
        a, b = w // 2, w - w // 2
        lo_x, lo_e = self._elem_table(a)
        hi_x, hi_e = self._elem_table(b)
        order = np.argsort(lo_x, kind="stable")
        lo_sorted = lo_x[order]
        ht = self._h(target)
        start = 0
        c = b - 1
        total = hi_x.size
        while start < total:
            # extend the block to whole largest-element groups
            end = start
            while end < total and (end - start < CHUNK or end == start):
                c += 1
                end = comb(c, b)
            want = hi_x[start:end] ^ ht
            left = np.searchsorted(lo_sorted, want, "left")
            right = np.searchsorted(lo_sorted, want, "right")
            counts = right - left
            n_pairs = int(counts.sum())
            if n_pairs:
                hi_ids = np.repeat(np.arange(start, end), counts)
                offsets = np.repeat(left - np.cumsum(counts) + counts, counts)
                lo_ids = order[np.arange(n_pairs) + offsets]
                ok = lo_e[lo_ids, a - 1] < hi_e[hi_ids, 0]
                lo_ids, hi_ids = lo_ids[ok], hi_ids[ok]
                if lo_ids.size:
                    keys = [lo_e[lo_ids, j] for j in range(a)] + [hi_e[hi_ids, j] for j in range(b)]
                    for i in np.lexsort(keys).tolist():
                        pos = lo_e[lo_ids[i]].tolist() + hi_e[hi_ids[i]].tolist()
                        if self._verify(pos, target):
                            idx = colex_rank(pos)
                            return (idx, pos) if idx < allow else None
            start = end
        return None

    def _first_in_weight(self, w: int, target: int, allow: int):
        if w == 0:
            return (0, []) if target == 0 else None
        if w == 1 or comb(self.l, w) <= TABLE_LIMIT:
            return self._first_direct(w, target, allow)
        return self._first_split(w, target, allow)

    def first_match(self, target: int, budget: int | None = None):
        """Earliest pattern whose syndrome equals ``target`` within ``budget`` queries.

        Returns ``(positions, queries)``; ``positions`` is ``None`` when the
        budget or the whole pattern space ran out first, and ``queries`` is
        then the number of patterns that were ruled out.
        """
        below = 0
        for w in range(self.l + 1):
            if budget is not None and below >= budget:
                return None, budget
            count = comb(self.l, w)
            allow = count if budget is None else min(count, budget - below)
            hit = self._first_in_weight(w, target, allow)
            if hit is not None:
                idx, pos = hit
                return pos, below + idx + 1
            below += allow
        return None, below
