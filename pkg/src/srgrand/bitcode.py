"""Binary linear block codes over GF(2).

Bit vectors are held in :class:`BitBlock`, a fixed-length wrapper around a
Python integer where bit ``i`` of the integer is position ``i`` of the block
(position 0 prints leftmost). Codes are kept in systematic form ``[I | C]`` so
that both the syndrome test and the parity-recompute shortcut are available.
"""
from __future__ import annotations

from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MAX_LENGTH = 4096

__all__ = [
    "BitBlock",
    "LinearCode",
    "make_rng",
    "rlc_new",
    "rm_new",
    "encode",
    "is_member",
    "is_member_systematic",
    "load_code",
    "save_code",
    "parse_code",
    "format_code",
]


def make_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    """PCG64 generator; passing a Generator returns it unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


class BitBlock:
    """Immutable packed binary vector of fixed length."""

    __slots__ = ("_len", "_val")

    def __init__(self, length: int, value: int = 0):
        if length < 0:
            raise ValueError(f"negative length {length}")
        if value < 0 or value >> length:
            raise ValueError(f"value does not fit in {length} bits")
        self._len = int(length)
        self._val = int(value)

    @classmethod
    def zeros(cls, length: int) -> BitBlock:
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> BitBlock:
        return cls(length, (1 << length) - 1)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitBlock:
        value = 0
        length = 0
        for i, b in enumerate(bits):
            if b:
                value |= 1 << i
            length = i + 1
        return cls(length, value)

    @classmethod
    def from_str(cls, text: str) -> BitBlock:
        text = text.strip()
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls.from_bits(c == "1" for c in text)

    @classmethod
    def from_array(cls, arr) -> BitBlock:
        arr = np.asarray(arr, dtype=np.uint8).ravel()
        packed = np.packbits(arr & 1, bitorder="little")
        return cls(arr.size, int.from_bytes(packed.tobytes(), "little"))

    @classmethod
    def from_positions(cls, length: int, positions: Iterable[int]) -> BitBlock:
        value = 0
        for p in positions:
            if not 0 <= p < length:
                raise IndexError(p)
            value |= 1 << p
        return cls(length, value)

    @property
    def value(self) -> int:
        return self._val

    def __len__(self) -> int:
        return self._len

    def weight(self) -> int:
        return self._val.bit_count()

    def positions(self) -> list[int]:
        out = []
        v = self._val
        while v:
            low = v & -v
            out.append(low.bit_length() - 1)
            v ^= low
        return out

    def to_array(self) -> np.ndarray:
        nbytes = (self._len + 7) // 8
        raw = np.frombuffer(self._val.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self._len].copy()

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self._len
        if not 0 <= i < self._len:
            raise IndexError(i)
        return (self._val >> i) & 1

    def head(self, k: int) -> BitBlock:
        """First ``k`` positions."""
        return BitBlock(k, self._val & ((1 << k) - 1))

    def tail(self, k: int) -> BitBlock:
        """Positions ``k`` onward."""
        return BitBlock(self._len - k, self._val >> k)

    def _check(self, other: BitBlock) -> None:
        if not isinstance(other, BitBlock):
            raise TypeError(f"expected BitBlock, got {type(other).__name__}")
        if other._len != self._len:
            raise ValueError(f"length mismatch: {self._len} vs {other._len}")

    def __xor__(self, other: BitBlock) -> BitBlock:
        self._check(other)
        return BitBlock(self._len, self._val ^ other._val)

    def __and__(self, other: BitBlock) -> BitBlock:
        self._check(other)
        return BitBlock(self._len, self._val & other._val)

    def __or__(self, other: BitBlock) -> BitBlock:
        self._check(other)
        return BitBlock(self._len, self._val | other._val)

    def __invert__(self) -> BitBlock:
        return BitBlock(self._len, self._val ^ ((1 << self._len) - 1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitBlock):
            return NotImplemented
        return self._len == other._len and self._val == other._val

    def __hash__(self) -> int:
        return hash((self._len, self._val))

    def __str__(self) -> str:
        return "".join("1" if (self._val >> i) & 1 else "0" for i in range(self._len))

    def __repr__(self) -> str:
        s = str(self)
        if len(s) > 64:
            s = s[:61] + "..."
        return f"BitBlock({self._len}, '{s}')"


def _rows_to_ints(mat: np.ndarray) -> list[int]:
    """Each row of a 0/1 matrix as an int, bit i = column i."""
    packed = np.packbits(np.ascontiguousarray(mat, dtype=np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(r, "little") for r in map(bytes, packed)]


class LinearCode:
    """Systematic binary [n, k] code with generator ``[I | C]`` and check ``[C^T | I]``.

    The check matrix is always derived from the parity part, so the two can
    never disagree. ``permutation`` records the coordinate reordering applied
    to reach systematic form (``None`` when no reordering was needed):
    position ``j`` of this code is position ``permutation[j]`` of the original
    construction.
    """

    def __init__(self, parity: np.ndarray, label: str = "", permutation: Sequence[int] | None = None):
        parity = np.asarray(parity, dtype=np.uint8) & 1
        if parity.ndim != 2:
            raise ValueError("parity part must be a k x (n-k) matrix")
        k, r = parity.shape
        if k < 1 or r < 1 or k + r > MAX_LENGTH:
            raise ValueError(f"invalid dimensions n={k + r}, k={k}")
        self.k = k
        self.n = k + r
        self.parity = parity
        self.parity.setflags(write=False)
        self.label = label or f"[{self.n},{self.k}]"
        self.permutation = tuple(permutation) if permutation is not None else None

        self.generator = np.concatenate([np.eye(k, dtype=np.uint8), parity], axis=1)
        self.check = np.concatenate([parity.T, np.eye(r, dtype=np.uint8)], axis=1)
        self.generator.setflags(write=False)
        self.check.setflags(write=False)

        self._gen_rows = _rows_to_ints(self.generator)
        self._parity_rows = _rows_to_ints(parity)
        self._check_rows = _rows_to_ints(self.check)
        # column j's syndrome, bit t = check[t, j]
        self.column_syndromes = _rows_to_ints(self.check.T)

    @property
    def rate(self) -> float:
        return self.k / self.n

    def syndrome(self, word: BitBlock) -> int:
        if len(word) != self.n:
            raise ValueError(f"word length {len(word)} != n={self.n}")
        v = word.value
        s = 0
        for t, row in enumerate(self._check_rows):
            s |= ((row & v).bit_count() & 1) << t
        return s

    def __repr__(self) -> str:
        return f"LinearCode({self.label}, n={self.n}, k={self.k})"


def rlc_new(n: int, k: int, rng) -> LinearCode:
    """Systematic random linear code; parity bits are i.i.d. Bernoulli(1/2), drawn row-major."""
    if not (1 <= k < n <= MAX_LENGTH):
        raise ValueError(f"invalid dimensions n={n}, k={k}")
    rng = make_rng(rng)
    parity = rng.integers(0, 2, size=(k, n - k), dtype=np.uint8)
    return LinearCode(parity, label=f"RLC[{n},{k}]")


def _monomial_rows(r: int, m: int) -> np.ndarray:
    n = 1 << m
    points = np.arange(n)
    variables = [((points >> i) & 1).astype(np.uint8) for i in range(m)]
    rows = []
    for degree in range(r + 1):
        for subset in combinations(range(m), degree):
            row = np.ones(n, dtype=np.uint8)
            for i in subset:
                row &= variables[i]
            rows.append(row)
    return np.array(rows, dtype=np.uint8)


def _systematic_form(g: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row-reduce a full-rank generator to [I | C], permuting columns when needed."""
    g = g.copy()
    k, n = g.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == k:
            break
        hits = np.flatnonzero(g[row:, col])
        if hits.size == 0:
            continue
        pr = row + hits[0]
        if pr != row:
            g[[row, pr]] = g[[pr, row]]
        others = np.flatnonzero(g[:, col])
        others = others[others != row]
        g[others] ^= g[row]
        pivots.append(col)
        row += 1
    if row < k:
        raise ValueError("generator is rank deficient")
    rest = [c for c in range(n) if c not in set(pivots)]
    perm = pivots + rest
    return g[:, perm], perm


def rm_new(r: int, m: int) -> LinearCode:
    """Reed-Muller RM(r, m): evaluations of monomials of degree <= r on F_2^m."""
    if not (0 <= r <= m <= 12):
        raise ValueError(f"invalid Reed-Muller parameters r={r}, m={m}")
    n = 1 << m
    k = sum(comb(m, i) for i in range(r + 1))
    if k >= n:
        raise ValueError(f"RM({r},{m}) is the full space; no parity bits")
    g, perm = _systematic_form(_monomial_rows(r, m))
    identity = perm == list(range(n))
    return LinearCode(g[:, k:], label=f"RM({r},{m})", permutation=None if identity else perm)


def encode(code: LinearCode, msg: BitBlock) -> BitBlock:
    if len(msg) != code.k:
        raise ValueError(f"message length {len(msg)} != k={code.k}")
    v = msg.value
    out = 0
    i = 0
    while v:
        if v & 1:
            out ^= code._gen_rows[i]
        v >>= 1
        i += 1
    return BitBlock(code.n, out)


def is_member(code: LinearCode, word: BitBlock) -> bool:
    """Syndrome test: check . word^T == 0."""
    return code.syndrome(word) == 0


def is_member_systematic(code: LinearCode, word: BitBlock) -> bool:
    """Recompute the parity bits from the first k positions and compare."""
    if len(word) != code.n:
        raise ValueError(f"word length {len(word)} != n={code.n}")
    v = word.value
    info = v & ((1 << code.k) - 1)
    parity = 0
    i = 0
    while info:
        if info & 1:
            parity ^= code._parity_rows[i]
        info >>= 1
        i += 1
    return parity == v >> code.k


def format_code(code: LinearCode) -> str:
    lines = [f"{code.n} {code.k}"]
    lines.extend("".join("01"[b] for b in row) for row in code.generator)
    return "\n".join(lines) + "\n"


def parse_code(text: str, label: str = "") -> LinearCode:
    """Read the "n k" + k generator rows format; non-systematic generators are row-reduced."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty code description")
    try:
        n, k = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad header line {lines[0]!r}") from exc
    rows = lines[1:]
    if len(rows) != k:
        raise ValueError(f"expected {k} generator rows, found {len(rows)}")
    if any(len(row) != n or set(row) - {"0", "1"} for row in rows):
        raise ValueError(f"generator rows must be {n} characters of 0/1")
    g = np.array([[c == "1" for c in row] for row in rows], dtype=np.uint8)
    g, perm = _systematic_form(g)
    identity = perm == list(range(n))
    return LinearCode(g[:, k:], label=label or f"[{n},{k}]", permutation=None if identity else perm)


def save_code(code: LinearCode, path) -> None:
    Path(path).write_text(format_code(code))


def load_code(path) -> LinearCode:
    path = Path(path)
    return parse_code(path.read_text(), label=path.stem)
