"""Experiment engine: seeded trials, budget sweeps and result files."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .decode import DEFAULT_NODE_CAP, DecodeResult, comp_decode, dd_decode, grotesque_decode, sss_decode
from .design import (
    BernoulliDesignSpec,
    bernoulli_parameter,
    make_bernoulli_batch,
    make_grotesque_design,
    theorem_budget,
)
from .errors import ConfigurationError, RegimeError, RegimeWarning
from .model import ModelParams, expected_edges, sample_hypergraph, typicality_check
from .oracle import Oracle

DECODERS = ("comp", "dd", "sss", "grotesque")
CSV_COLUMNS = ("t", "multiplier", "trials", "successes", "rate", "stderr", "baseline")


@dataclass
class ExperimentConfig:
    n: int
    k: int
    theta: float | None = None
    q: float | None = None
    nu: float = 1.0
    epsilon: float = 0.25
    algorithm: str = "comp"
    t: int | None = None  # explicit base budget; None means the theorem budget
    multipliers: tuple[float, ...] = (1.0,)
    trials: int = 1
    master_seed: int = 0
    parallelism: int = 1
    delta_bundle: float = 0.1
    c_loc: float = 4.0
    typicality_samples: int = 1000
    sss_node_cap: int = DEFAULT_NODE_CAP
    condition_typical: bool = False
    output_path: str | None = None

    def __post_init__(self) -> None:
        self.multipliers = tuple(float(x) for x in self.multipliers)
        if self.algorithm not in DECODERS:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}; choose from {DECODERS}")
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if not self.multipliers or any(m <= 0 for m in self.multipliers):
            raise ConfigurationError("multipliers must be a nonempty list of positive numbers")
        if self.t is not None and self.t < 1:
            raise ConfigurationError("t must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigurationError("master_seed must be a 64-bit unsigned integer")
        _ = self.params  # validates the model parameters

    @property
    def params(self) -> ModelParams:
        return ModelParams(n=self.n, k=self.k, q=self.q, theta=self.theta, nu=self.nu, epsilon=self.epsilon)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["multipliers"] = list(self.multipliers)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


@dataclass
class TrialRecord:
    trial_index: int
    seed: int
    n: int
    k: int
    q: float
    theta: float | None
    algorithm: str
    multiplier: float
    t: int
    exact: bool
    symmetric_difference: int
    m_true: int
    m_estimated: int
    typical: list[bool] | None
    wall_ms: float
    diagnostics: dict = field(default_factory=dict)
    skipped: str | None = None

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("wall_ms")
        return d


@dataclass(frozen=True)
class SweepPoint:
    multiplier: float
    t: int
    trials: int
    successes: int
    rate: float
    stderr: float


def baseline(params: ModelParams) -> float:
    """Information-theoretic query floor ``m̄ log2(1/q)``."""
    return expected_edges(params) * math.log2(1.0 / params.q)


def resolve_budget(config: ExperimentConfig, multiplier: float = 1.0) -> int:
    """Query count for a Bernoulli decoder, fixed before any oracle call."""
    base = config.t if config.t is not None else theorem_budget(config.algorithm, config.params)
    return max(1, math.ceil(base * multiplier))


def trial_streams(master_seed: int, trial_index: int) -> tuple[int, list[np.random.Generator]]:
    """Per-trial seed and independent (instance, design, typicality) generators."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(trial_index,))
    seed = int(ss.generate_state(1, dtype=np.uint64)[0])
    return seed, [np.random.default_rng(c) for c in ss.spawn(3)]


def run_trial(config: ExperimentConfig, trial_index: int, multiplier: float | None = None) -> TrialRecord:
    mult = config.multipliers[0] if multiplier is None else float(multiplier)
    params = config.params
    seed, (rng_g, rng_d, rng_typ) = trial_streams(config.master_seed, trial_index)
    start = time.perf_counter()
    g = sample_hypergraph(params, rng_g)

    def record(**kw) -> TrialRecord:
        base = dict(
            trial_index=trial_index,
            seed=seed,
            n=params.n,
            k=params.k,
            q=params.q,
            theta=params.theta,
            algorithm=config.algorithm,
            multiplier=mult,
            t=0,
            exact=False,
            symmetric_difference=g.m,
            m_true=g.m,
            m_estimated=0,
            typical=None,
            wall_ms=0.0,
        )
        base.update(kw)
        base["wall_ms"] = round((time.perf_counter() - start) * 1e3, 3)
        return TrialRecord(**base)

    typical = None
    diagnostics: dict = {}
    if config.typicality_samples > 0:
        try:
            typical = typicality_check(g, params, config.typicality_samples, rng_typ).flags()
        except (RegimeError, ConfigurationError) as exc:
            diagnostics["typicality_error"] = str(exc)
    try:
        oracle = Oracle(g)
        if config.algorithm == "grotesque":
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", RegimeWarning)
                spec, layout, batch = make_grotesque_design(params, config.delta_bundle, config.c_loc, rng_d)
            if any(issubclass(w.category, RegimeWarning) for w in caught):
                diagnostics["regime_warning"] = True
            declared = spec.total_queries
            outcomes = oracle.answer_batch(batch)
            result: DecodeResult = grotesque_decode(params.n, params.k, spec, layout, outcomes)
        else:
            t = resolve_budget(config, mult)
            batch = make_bernoulli_batch(params, BernoulliDesignSpec(t, bernoulli_parameter(params)), rng_d)
            declared = t
            outcomes = oracle.answer_batch(batch)
            if config.algorithm == "comp":
                result = comp_decode(params.n, params.k, batch, outcomes)
            elif config.algorithm == "dd":
                result = dd_decode(params.n, params.k, batch, outcomes)
            else:
                result = sss_decode(params.n, params.k, batch, outcomes, config.sss_node_cap)
            diagnostics["bernoulli_positive_rate"] = outcomes.bernoulli_positive_rate
    except RegimeError as exc:
        return record(typical=typical, skipped=str(exc), diagnostics=diagnostics)
    if oracle.queries_answered != declared:
        raise AssertionError(f"oracle answered {oracle.queries_answered} queries, design declared {declared}")
    diagnostics.update(result.diagnostics)
    if result.failed:
        diagnostics["decode_failed"] = True
    sym = len(result.estimate.edges ^ g.edges)
    return record(
        t=oracle.queries_answered,
        exact=(sym == 0) and not result.failed,
        symmetric_difference=sym,
        m_estimated=result.estimate.m,
        typical=typical,
        diagnostics=diagnostics,
    )


def _worker(args: tuple[ExperimentConfig, int, float]) -> TrialRecord:
    config, i, mult = args
    return run_trial(config, i, mult)


def workers(config: ExperimentConfig) -> int:
    env = os.environ.get("HYPERLEARN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigurationError(f"HYPERLEARN_THREADS={env!r} is not an integer") from None
    return max(1, config.parallelism)


def run_trials(config: ExperimentConfig, multiplier: float | None = None) -> list[TrialRecord]:
    """All trials at one multiplier, returned in trial_index order."""
    mult = config.multipliers[0] if multiplier is None else multiplier
    jobs = [(config, i, mult) for i in range(config.trials)]
    nproc = workers(config)
    if nproc == 1:
        return [_worker(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=nproc) as pool:
        return list(pool.map(_worker, jobs, chunksize=max(1, len(jobs) // (4 * nproc))))


def aggregate(records: Sequence[TrialRecord], condition_typical: bool = False) -> tuple[int, int]:
    """(trials counted, exact recoveries), skipping skipped trials."""
    use = [r for r in records if r.skipped is None]
    if condition_typical:
        use = [r for r in use if r.typical is not None and all(r.typical)]
    return len(use), sum(r.exact for r in use)


def sweep(config: ExperimentConfig) -> tuple[list[SweepPoint], list[TrialRecord]]:
    """Success rate with binomial standard error at every budget multiplier."""
    if config.algorithm == "grotesque" and len(config.multipliers) > 1:
        raise ConfigurationError("budget grids apply to the Bernoulli decoders only")
    points, records = [], []
    for mult in config.multipliers:
        recs = run_trials(config, mult)
        records.extend(recs)
        n_used, succ = aggregate(recs, config.condition_typical)
        rate = succ / n_used if n_used else float("nan")
        se = math.sqrt(rate * (1.0 - rate) / n_used) if n_used else float("nan")
        t = recs[0].t if config.algorithm == "grotesque" else resolve_budget(config, mult)
        points.append(SweepPoint(mult, t, n_used, succ, rate, se))
    return points, records


def records_jsonl(records: Iterable[TrialRecord], timing: bool = True) -> str:
    return "".join(json.dumps(r.to_dict(timing), sort_keys=True, separators=(",", ":")) + "\n" for r in records)


def sweep_csv(points: Sequence[SweepPoint], baseline_value: float) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for p in points:
        w.writerow([p.t, p.multiplier, p.trials, p.successes, f"{p.rate:.6f}", f"{p.stderr:.6f}", f"{baseline_value:.6f}"])
    return buf.getvalue()


def monotone_trend(points: Sequence[SweepPoint]) -> bool:
    rates = [p.rate for p in sorted(points, key=lambda p: p.t)]
    return all(a <= b for a, b in zip(rates, rates[1:]))
