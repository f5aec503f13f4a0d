"""Seeded Monte Carlo sweeps of block error rate and query counts.

Every trial draws its own generator from ``SeedSequence([seed, point, trial])``
so results do not depend on evaluation order. At a grid point all decoders
decode the same channel realizations; a decoder that has reached
``stop_at_errors`` block errors drops out, so its trials are a prefix of the
shared sequence.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import beta

from .bitcode import BitBlock, LinearCode, encode, load_code, rlc_new, rm_new
from .channel import SrBscParams, transmit_bpsk_awgn, transmit_srbsc
from .decoder import (
    DecodeOutcome,
    MaxQueries,
    MaxWeight,
    NoAbandonment,
    Status,
    grand,
    guess,
    matched_budget_srgrandab,
    resolve_budget,
)

log = logging.getLogger(__name__)

CSV_HEADER = (
    "epsilon,q,p,decoder,code,n,k,trials,block_errors,bler,bler_ci_lo,bler_ci_hi,"
    "mean_queries_per_bit,abandon_rate,seed"
)
DECODER_KINDS = ("grand", "grandab", "srgrand", "srgrandab")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CodeSpec:
    kind: str
    a: int = 0
    b: int = 0
    path: str | None = None

    @classmethod
    def rlc(cls, n: int, k: int) -> CodeSpec:
        return cls("rlc", n, k)

    @classmethod
    def rm(cls, r: int, m: int) -> CodeSpec:
        return cls("rm", r, m)

    @classmethod
    def file(cls, path) -> CodeSpec:
        return cls("file", path=str(path))

    @classmethod
    def parse(cls, text: str) -> CodeSpec:
        """``rlc:128,99``, ``rm:4,7`` or ``file:path``."""
        kind, _, rest = text.partition(":")
        kind = kind.lower()
        if kind == "file" and rest:
            return cls.file(rest)
        if kind in ("rlc", "rm"):
            try:
                a, b = (int(t) for t in rest.split(","))
            except ValueError as exc:
                raise ConfigError(f"bad code spec {text!r}") from exc
            return cls(kind, a, b)
        raise ConfigError(f"bad code spec {text!r}")

    def build(self, rng) -> LinearCode:
        if self.kind == "rlc":
            return rlc_new(self.a, self.b, rng)
        if self.kind == "rm":
            return rm_new(self.a, self.b)
        if self.kind == "file":
            return load_code(self.path)
        raise ConfigError(f"unknown code kind {self.kind!r}")

    @property
    def random(self) -> bool:
        return self.kind == "rlc"


@dataclass(frozen=True)
class SrBscPoint:
    q: float
    p: float
    nominal: float | None = None  # the eps a point was built from, reported verbatim

    @classmethod
    def from_epsilon(cls, eps: float) -> SrBscPoint:
        prm = SrBscParams.from_epsilon(eps)
        return cls(prm.q, prm.p, float(eps))

    @property
    def epsilon(self) -> float:
        return self.q * self.p if self.nominal is None else self.nominal


@dataclass(frozen=True)
class AwgnPoint:
    ebno_db: float
    llr_threshold: float


@dataclass(frozen=True)
class DecoderSpec:
    """``rule`` is an abandonment rule, or the string ``"matched"`` for SRGRANDAB."""

    kind: str
    rule: object = NoAbandonment()
    label: str = ""

    def __post_init__(self):
        if self.kind not in DECODER_KINDS:
            raise ConfigError(f"unknown decoder {self.kind!r}")

    @property
    def name(self) -> str:
        return self.label or self.kind

    @property
    def masked(self) -> bool:
        return self.kind.startswith("sr")


@dataclass
class ExperimentConfig:
    code: CodeSpec
    decoders: list[DecoderSpec]
    trials: int = 10_000
    stop_at_errors: int | None = 100
    rerandomize_code: bool = True
    seed: int = 0
    max_queries: int | None = None
    srgrand_fallback: bool = False

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.decoders:
            raise ConfigError("at least one decoder is required")
        if self.stop_at_errors is not None and self.stop_at_errors < 1:
            raise ConfigError("stop_at_errors must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        names = [d.name for d in self.decoders]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate decoder names {names}")
        for d in self.decoders:
            if d.rule == "matched" and not any(
                o.kind == "grandab" and isinstance(o.rule, (MaxWeight, MaxQueries)) for o in self.decoders
            ):
                raise ConfigError("matched SRGRANDAB budget needs a grandab decoder with MaxWeight/MaxQueries")


@dataclass
class SweepRow:
    epsilon: float
    q: float
    p: float
    decoder: str
    code: str
    n: int
    k: int
    trials: int
    block_errors: int
    bler: float
    bler_ci_lo: float
    bler_ci_hi: float
    mean_queries_per_bit: float
    abandon_rate: float
    seed: int


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    def by_decoder(self, name: str) -> list[SweepRow]:
        return [r for r in self.rows if r.decoder == name]


def clopper_pearson(errors: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    a = (1.0 - level) / 2.0
    lo = 0.0 if errors == 0 else float(beta.ppf(a, errors, trials - errors + 1))
    hi = 1.0 if errors == trials else float(beta.ppf(1.0 - a, errors + 1, trials - errors))
    return lo, hi


def trial_rng(seed: int, point: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, point, trial])))


def _rule_for(spec: DecoderSpec, cfg: ExperimentConfig, n: int):
    if spec.rule == "matched":
        ref = next(o for o in cfg.decoders if o.kind == "grandab")
        return matched_budget_srgrandab(ref.rule, n)
    if spec.kind in ("grandab", "srgrandab") and isinstance(spec.rule, NoAbandonment):
        raise ConfigError(f"{spec.kind} needs an abandonment rule")
    return spec.rule


def _decode(spec: DecoderSpec, rule, code: LinearCode, ch, params, cfg: ExperimentConfig):
    mask = ch.mask if spec.masked else BitBlock.ones(code.n)
    budget = resolve_budget(rule, code.n, mask.weight(), params)
    if cfg.max_queries is not None:
        budget = cfg.max_queries if budget is None else min(budget, cfg.max_queries)
    out = guess(code, ch.received, mask, budget)
    exhausted = not out.decoded and (budget is None or out.queries < budget)
    if spec.masked and cfg.srgrand_fallback and exhausted:
        rest = None if budget is None else budget - out.queries
        more = grand(code, ch.received, NoAbandonment() if rest is None else MaxQueries(rest))
        return DecodeOutcome(more.status, out.queries + more.queries, more.word, more.guessed_noise)
    return out


@dataclass
class _Tally:
    trials: int = 0
    errors: int = 0
    abandons: int = 0
    queries: int = 0


def run_sweep(cfg: ExperimentConfig, grid: Sequence[SrBscPoint | AwgnPoint],
              trials: Sequence[int] | None = None) -> SweepResult:
    """Simulate every grid point; ``trials`` optionally overrides ``cfg.trials`` point by point."""
    cfg.validate()
    if trials is None:
        trials = [cfg.trials] * len(grid)
    elif len(trials) != len(grid) or min(trials, default=1) < 1:
        raise ConfigError("per-point trials must match the grid and be >= 1")
    result = SweepResult()
    fixed = None
    if not (cfg.rerandomize_code and cfg.code.random):
        fixed = cfg.code.build(np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed]))))
    for pi, (point, n_trials) in enumerate(zip(grid, trials)):
        tallies = {d.name: _Tally() for d in cfg.decoders}
        active = list(cfg.decoders)
        rules = {}
        mask_bits = flip_bits = flips_in_mask = 0
        n = k = 0
        label = ""
        for t in range(n_trials):
            if not active:
                break
            rng = trial_rng(cfg.seed, pi, t)
            code = fixed if fixed is not None else cfg.code.build(rng)
            n, k, label = code.n, code.k, code.label
            x = encode(code, BitBlock.from_array(rng.integers(0, 2, code.k, dtype=np.uint8)))
            if isinstance(point, SrBscPoint):
                params = SrBscParams(point.q, point.p)
                ch = transmit_srbsc(x, params, rng)
            else:
                params = None
                ch = transmit_bpsk_awgn(x, point.ebno_db, point.llr_threshold, rng)
                mask_bits += ch.mask.weight()
                flip_bits += ch.true_noise.weight()
                flips_in_mask += (ch.true_noise & ch.mask).weight()
            for spec in active:
                if spec.name not in rules:
                    rules[spec.name] = _rule_for(spec, cfg, code.n)
                out = _decode(spec, rules[spec.name], code, ch, params, cfg)
                tl = tallies[spec.name]
                tl.trials += 1
                tl.queries += out.queries
                if out.status is Status.ABANDONED:
                    tl.abandons += 1
                    tl.errors += 1
                elif out.word != x:
                    tl.errors += 1
            if cfg.stop_at_errors is not None:
                active = [d for d in active if tallies[d.name].errors < cfg.stop_at_errors]
        if isinstance(point, SrBscPoint):
            eps, q, p = point.epsilon, point.q, point.p
        else:
            # empirical SR-BSC fit of the quantised channel over the trials run
            total = max(1, max(tl.trials for tl in tallies.values()) * n)
            eps, q = flip_bits / total, mask_bits / total
            p = flips_in_mask / mask_bits if mask_bits else 0.0
        for spec in cfg.decoders:
            tl = tallies[spec.name]
            lo, hi = clopper_pearson(tl.errors, tl.trials)
            result.rows.append(SweepRow(
                epsilon=eps, q=q, p=p, decoder=spec.name, code=label, n=n, k=k,
                trials=tl.trials, block_errors=tl.errors,
                bler=tl.errors / tl.trials if tl.trials else 0.0,
                bler_ci_lo=lo, bler_ci_hi=hi,
                mean_queries_per_bit=tl.queries / (tl.trials * n) if tl.trials else 0.0,
                abandon_rate=tl.abandons / tl.trials if tl.trials else 0.0,
                seed=cfg.seed,
            ))
            log.info("point %d %s: %d/%d errors", pi, spec.name, tl.errors, tl.trials)
    return result


# --- CSV -------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def format_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER.split(","))
    for row in result.rows:
        w.writerow([_fmt(getattr(row, f.name)) for f in fields(SweepRow)])
    return buf.getvalue()


def write_csv(result: SweepResult, path) -> None:
    path = Path(path)
    try:
        path.write_text(format_csv(result))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def parse_csv(text: str) -> SweepResult:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != CSV_HEADER.split(","):
        raise ValueError(f"unexpected header {header}")
    types = {f.name: f.type for f in fields(SweepRow)}
    rows = []
    for rec in reader:
        vals = {}
        for name, raw in zip(header, rec):
            t = types[name]
            vals[name] = int(raw) if t == "int" else float(raw) if t == "float" else raw
        rows.append(SweepRow(**vals))
    return SweepResult(rows)


def read_csv(path) -> SweepResult:
    return parse_csv(Path(path).read_text())


def default_grid(eps_values: Sequence[float]) -> list[SrBscPoint]:
    return [SrBscPoint.from_epsilon(e) for e in eps_values]


def bler_separated(a: SweepRow, b: SweepRow) -> bool:
    """True when the 95% intervals of two rows do not overlap."""
    return a.bler_ci_hi < b.bler_ci_lo or b.bler_ci_hi < a.bler_ci_lo

