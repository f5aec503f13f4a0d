"""Command line: ``srgrand {sweep,curves,quantize,codegen}``.

Exit codes: 0 success, 1 configuration error, 2 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .bitcode import format_code, make_rng
from .channel import estimate_srbsc_from_awgn, false_negative_rate, threshold_for_false_negative
from .curves import CURVE_KINDS, curves_to_csv, emit_curves, pq_family
from .decoder import EntropyTypical, MaxQueries, MaxWeight, NoAbandonment
from .harness import (
    AwgnPoint,
    CodeSpec,
    ConfigError,
    DecoderSpec,
    ExperimentConfig,
    SrBscPoint,
    format_csv,
    run_sweep,
)
from .svg import render_svg


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc


def _pairs(values: list[str]) -> list[tuple[float, float]]:
    out = []
    for v in values:
        xs = _floats(v)
        if len(xs) != 2:
            raise ConfigError(f"expected a pair 'a,b', got {v!r}")
        out.append((xs[0], xs[1]))
    return out


def parse_decoder(text: str) -> DecoderSpec:
    """``kind[:rule]`` with rule ``w=INT``, ``q=INT``, ``matched`` or ``typical=DELTA[/SCALE]``."""
    kind, _, rule = text.partition(":")
    kind = kind.lower()
    if not rule:
        return DecoderSpec(kind, NoAbandonment())
    if rule == "matched":
        return DecoderSpec(kind, "matched")
    key, _, val = rule.partition("=")
    try:
        if key == "w":
            return DecoderSpec(kind, MaxWeight(int(val)))
        if key == "q":
            return DecoderSpec(kind, MaxQueries(int(val)))
        if key == "typical":
            delta, _, scale = val.partition("/")
            return DecoderSpec(kind, EntropyTypical(float(delta), scale or "full"))
    except ValueError as exc:
        raise ConfigError(f"bad decoder rule {text!r}") from exc
    raise ConfigError(f"bad decoder rule {text!r}")


def _grid(args) -> list:
    grid = [SrBscPoint.from_epsilon(e) for e in _floats(args.eps or "")]
    grid += [SrBscPoint(q, p) for q, p in _pairs(args.qp or [])]
    grid += [AwgnPoint(e, t) for e, t in _pairs(args.awgn or [])]
    for pt in grid:
        if isinstance(pt, SrBscPoint) and not (0 <= pt.q <= 1 and 0 <= pt.p <= 1):
            raise ConfigError(f"channel point out of range: {pt}")
    return grid


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc}") from exc


def cmd_sweep(args) -> None:
    cfg = ExperimentConfig(
        code=CodeSpec.parse(args.code),
        decoders=[parse_decoder(d) for d in args.decoder],
        trials=args.trials,
        stop_at_errors=args.stop_at_errors or None,
        rerandomize_code=not args.fixed_code,
        seed=args.seed,
        max_queries=args.max_queries,
        srgrand_fallback=args.fallback,
    )
    grid = _grid(args)
    if not grid:
        raise ConfigError("no channel points: give --eps, --qp or --awgn")
    _emit(format_csv(run_sweep(cfg, grid)), args.out)


def cmd_curves(args) -> None:
    grid = _floats(args.grid) if args.grid else None
    if args.kind == "capacity":
        params = _floats(args.p or "0.01,0.05,0.1,0.2")
    elif args.qp:
        params = _pairs(args.qp)
    else:
        params = pq_family(args.pq, _floats(args.qs))
    curves = emit_curves(args.kind, params, grid, n=args.n, boundary=args.boundary)
    _emit(curves_to_csv(curves), args.out)
    if args.svg:
        render_svg(curves, args.svg, log_y=args.log_y, title=args.kind,
                   xlabel="q" if args.kind == "capacity" else "R")


def cmd_quantize(args) -> None:
    rng = make_rng(args.seed)
    thr = args.threshold
    if thr is None:
        if args.target_fn is None:
            raise ConfigError("give --threshold or --target-fn")
        thr = threshold_for_false_negative(args.ebno, args.target_fn, rng, bits=args.bits)
    fit = estimate_srbsc_from_awgn(args.ebno, thr, rng, bits=args.bits)
    print("ebno_db,llr_threshold,q,p,p_defined,false_negative_rate,false_negative_closed_form,bits")
    print(",".join(format(v, ".17g") if isinstance(v, float) else str(v) for v in (
        float(args.ebno), float(thr), fit.q, fit.p, fit.p_defined, fit.false_negative_rate,
        false_negative_rate(args.ebno, thr), fit.bits)))


def cmd_codegen(args) -> None:
    spec = CodeSpec.parse(args.code)
    code = spec.build(np.random.Generator(np.random.PCG64(np.random.SeedSequence([args.seed]))))
    _emit(format_code(code), args.out)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="srgrand", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="Monte Carlo block error and query-count sweep")
    s.add_argument("--code", required=True, help="rlc:N,K | rm:R,M | file:PATH")
    s.add_argument("--decoder", action="append", required=True,
                   help="kind[:rule], e.g. grandab:w=4, srgrandab:matched, srgrand")
    s.add_argument("--eps", help="comma-separated flip rates, q = p = sqrt(eps)")
    s.add_argument("--qp", action="append", help="explicit channel point q,p (repeatable)")
    s.add_argument("--awgn", action="append", help="BPSK/AWGN point ebno_db,llr_threshold (repeatable)")
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--stop-at-errors", type=int, default=100, help="0 disables early stopping")
    s.add_argument("--fixed-code", action="store_true", help="draw one random code for the whole sweep")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--max-queries", type=int, default=None)
    s.add_argument("--fallback", action="store_true",
                   help="on an exhausted mask, continue with unmasked guessing")
    s.add_argument("--out", help="CSV path (default stdout)")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("curves", help="analytical exponent, performance and capacity curves")
    c.add_argument("--kind", choices=CURVE_KINDS, required=True)
    c.add_argument("--pq", type=float, default=0.05, help="constant q*p of the family")
    c.add_argument("--qs", default="1,0.5,0.25,0.1")
    c.add_argument("--qp", action="append", help="explicit q,p pair instead of a family")
    c.add_argument("--p", help="p values for capacity curves")
    c.add_argument("--grid", help="comma-separated x grid")
    c.add_argument("--n", type=int, default=100)
    c.add_argument("--boundary", choices=("tilted", "mean"), default="tilted")
    c.add_argument("--out")
    c.add_argument("--svg")
    c.add_argument("--log-y", action="store_true")
    c.set_defaults(func=cmd_curves)

    q = sub.add_parser("quantize", help="fit SR-BSC (q, p) to a thresholded BPSK/AWGN channel")
    q.add_argument("--ebno", type=float, required=True)
    q.add_argument("--threshold", type=float)
    q.add_argument("--target-fn", type=float, help="pick the threshold meeting this false-negative rate")
    q.add_argument("--bits", type=int, default=1_000_000)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_quantize)

    g = sub.add_parser("codegen", help="write a code in the text generator format")
    g.add_argument("--code", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_codegen)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
        args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
