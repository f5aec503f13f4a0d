"""Analytical curve families: error exponents, approximate performance, capacities."""
from __future__ import annotations

import warnings
from typing import Sequence

import numpy as np

from .ldp import (
    ExponentCurve,
    approx_bler,
    approx_queries_per_bit,
    brute_force_computations_per_bit,
    capacity_hard,
    capacity_sr,
    critical_rate,
    error_exponent,
)

CURVE_KINDS = ("error_exponents", "approx_perf", "capacity")


def pq_family(pq: float, qs: Sequence[float]) -> list[tuple[float, float]]:
    """(q, p) pairs with q * p held at ``pq``."""
    if not 0.0 < pq <= 1.0:
        raise ValueError(f"pq must lie in (0, 1], got {pq}")
    out = []
    for q in qs:
        if not 0.0 < q <= 1.0 or pq / q > 1.0:
            raise ValueError(f"q={q} incompatible with pq={pq}")
        out.append((float(q), pq / q))
    return out


def _exponent_curve(q, p, rates, boundary):
    ys = [error_exponent(R, q, p, boundary) for R in rates]
    Rc = critical_rate(q, p, boundary)
    markers = [(Rc, error_exponent(Rc, q, p, boundary))]
    meta = {"kind": "error_exponents", "q": q, "p": p, "capacity": capacity_sr(q, p)}
    return ExponentCurve(rates, ys, meta, markers)


def _perf_curves(q, p, rates, n):
    with warnings.catch_warnings():
        # above capacity the block error is clamped to 1 on purpose
        warnings.simplefilter("ignore", RuntimeWarning)
        bler = [approx_bler(n, R, q, p) for R in rates]
    qpb = [approx_queries_per_bit(n, R, q, p) for R in rates]
    base = {"kind": "approx_perf", "q": q, "p": p, "n": n}
    return [
        ExponentCurve(rates, bler, {**base, "quantity": "bler"}),
        ExponentCurve(rates, qpb, {**base, "quantity": "queries_per_bit"}),
    ]


def emit_curves(kind: str, params: Sequence[tuple[float, float]] | Sequence[float],
                grid: Sequence[float] | None = None, n: int = 100,
                boundary: str = "tilted") -> list[ExponentCurve]:
    """Curves for each entry of ``params``.

    ``error_exponents`` and ``approx_perf`` take (q, p) pairs and a grid of
    rates R; ``capacity`` takes values of p and a grid of q. Error-exponent
    curves carry a marker at the critical rate.
    """
    if kind not in CURVE_KINDS:
        raise ValueError(f"unknown curve kind {kind!r}; expected one of {CURVE_KINDS}")
    if kind == "capacity":
        qs = np.linspace(0.0, 1.0, 101) if grid is None else np.asarray(grid, dtype=float)
        curves = []
        for p in params:
            p = float(p)
            curves.append(ExponentCurve(qs, [capacity_sr(q, p) for q in qs],
                                        {"kind": "capacity", "p": p, "quantity": "sr"}))
            curves.append(ExponentCurve(qs, [capacity_hard(q, p) for q in qs],
                                        {"kind": "capacity", "p": p, "quantity": "hard"}))
        return curves

    rates = np.linspace(0.01, 0.99, 99) if grid is None else np.asarray(grid, dtype=float)
    curves = []
    for q, p in params:
        if kind == "error_exponents":
            curves.append(_exponent_curve(float(q), float(p), rates, boundary))
        else:
            curves.extend(_perf_curves(float(q), float(p), rates, n))
    if kind == "approx_perf":
        bf = [brute_force_computations_per_bit(n, R) for R in rates]
        curves.append(ExponentCurve(rates, bf, {"kind": "approx_perf", "n": n, "quantity": "brute_force"}))
    return curves


def curves_to_csv(curves: Sequence[ExponentCurve]) -> str:
    """Long-format CSV: one row per point, metadata columns first."""
    keys = sorted({k for c in curves for k in c.meta})
    lines = [",".join(["series", *keys, "x", "y", "marker"])]
    for i, c in enumerate(curves):
        meta = [str(c.meta.get(k, "")) for k in keys]
        for x, y in zip(c.xs, c.ys):
            lines.append(",".join([str(i), *meta, format(float(x), ".17g"), format(float(y), ".17g"), "0"]))
        for x, y in c.markers:
            lines.append(",".join([str(i), *meta, format(float(x), ".17g"), format(float(y), ".17g"), "1"]))
    return "\n".join(lines) + "\n"
