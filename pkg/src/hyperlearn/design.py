"""Non-adaptive query designs.

Bernoulli batches feed COMP/DD/SSS; the GROTESQUE design (bundles,
multiplicity tests, location tests) is emitted as one batch built from
``ModelParams`` alone.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigurationError, RegimeError, RegimeWarning
from .grouptest import location_inclusion, make_pools, to_detection_query
from .model import ModelParams, expected_edges
from .oracle import QueryBatch, QueryBlock

ALGORITHMS = ("comp", "dd", "sss")


def bernoulli_parameter(params: ModelParams) -> float:
    """Per-vertex inclusion rate ``(k ν / (q n^k))^(1/k)``."""
    log_x = math.log(params.k * params.nu) - math.log(params.q) - params.k * math.log(params.n)
    if log_x >= 0.0:
        raise RegimeError(
            f"k*nu/(q*n^k) = {math.exp(log_x):.4g} >= 1: the hypergraph is not sparse enough "
            "for a Bernoulli inclusion probability below 1"
        )
    return math.exp(log_x / params.k)


@dataclass(frozen=True)
class BernoulliDesignSpec:
    t: int
    p: float

    def __post_init__(self) -> None:
        if self.t < 1:
            raise ConfigurationError(f"t must be >= 1, got {self.t}")
        if not 0.0 < self.p < 1.0:
            raise ConfigurationError(f"p must lie in (0, 1), got {self.p}")


def make_bernoulli_batch(
    params: ModelParams, spec: BernoulliDesignSpec, rng: np.random.Generator, chunk: int = 1 << 14
) -> QueryBatch:
    n = params.n
    rows = np.empty((spec.t, n), dtype=bool)
    for s in range(0, spec.t, chunk):
        e = min(spec.t, s + chunk)
        rows[s:e] = rng.random((e - s, n)) < spec.p
    return QueryBatch(n, [QueryBlock(np.arange(n), rows, "bernoulli")])


def budget_factor(algorithm: str, k: int, theta: float) -> float:
    """Coefficient c in ``t = c * e * m̄ * ln n``."""
    if algorithm == "comp":
        return float(k)
    if algorithm == "dd":
        return k * max(theta, 1.0 - theta, 1.0 - theta / 2.0, 1.0 + theta / 2.0 - 1.0 / k)
    if algorithm == "sss":
        return k * theta
    raise ConfigurationError(f"no query budget for algorithm {algorithm!r}")


def theorem_budget(algorithm: str, params: ModelParams) -> int:
    """Default query count for a Bernoulli decoder, floored at 1."""
    c = budget_factor(algorithm, params.k, params.effective_theta)
    t = math.ceil(c * math.e * expected_edges(params) * math.log(params.n))
    return max(1, t)


# --- GROTESQUE ------------------------------------------------------------

def multiplicity_margin(k: int) -> float:
    """M = (1/e)(1 - e^(-1/k)): half the gap between single-edge and multi-edge rates."""
    return (1.0 - math.exp(-1.0 / k)) / math.e


def multiplicity_rate(k: int) -> float:
    return math.exp(-1.0 / k)


def multiplicity_queries(k: int, delta: float) -> int:
    """t_mul = ceil(2 ln(2/δ) / M²)."""
    if not 0.0 < delta < 1.0:
        raise ConfigurationError(f"delta must lie in (0, 1), got {delta}")
    return math.ceil(2.0 * math.log(2.0 / delta) / multiplicity_margin(k) ** 2)


def bundle_count(m_bar: float, delta: float) -> int:
    """Smallest b with m̄·exp(-b/(4m̄)) <= δ."""
    return max(1, math.ceil(4.0 * m_bar * math.log(m_bar / delta)))


def location_queries(n: int, k: int, b: int, delta: float, c_loc: float) -> int:
    return max(1, math.ceil(c_loc * k * math.log(n * b / delta)))


@dataclass(frozen=True)
class GrotesqueDesignSpec:
    k: int
    b: int
    r_inc: float
    t_mul: int
    r_mul: float
    threshold_m: float
    t_loc: int
    rho_loc: float
    delta_star: float
    delta_bundle: float = 0.1
    c_loc: float = 4.0

    def __post_init__(self) -> None:
        if self.b < 1 or self.t_mul < 1 or self.t_loc < 1:
            raise ConfigurationError("b, t_mul and t_loc must all be >= 1")
        for name in ("r_inc", "r_mul", "rho_loc", "delta_star"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ConfigurationError(f"{name}={v} outside (0, 1)")

    @property
    def queries_per_bundle(self) -> int:
        return self.t_mul + self.t_loc

    @property
    def total_queries(self) -> int:
        return self.b * self.queries_per_bundle

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "GrotesqueDesignSpec":
        return cls(**d)


@dataclass(frozen=True, eq=False)
class BundleLayout:
    """Bundle membership and where each bundle's queries sit in the batch."""

    n: int
    supports: tuple[np.ndarray, ...]
    mul_ranges: tuple[tuple[int, int], ...]
    loc_ranges: tuple[tuple[int, int], ...]
    pools: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def b(self) -> int:
        return len(self.supports)

    def membership(self) -> np.ndarray:
        out = np.zeros((self.b, self.n), dtype=bool)
        for i, s in enumerate(self.supports):
            out[i, s] = True
        return out

    def check(self, total: int) -> None:
        spans = sorted(list(self.mul_ranges) + list(self.loc_ranges))
        pos = 0
        for start, stop in spans:
            if start != pos or stop < start:
                raise ConfigurationError("bundle query ranges overlap or leave gaps")
            pos = stop
        if pos != total:
            raise ConfigurationError(f"ranges cover {pos} queries, batch has {total}")


def grotesque_spec(params: ModelParams, delta_bundle: float = 0.1, c_loc: float = 4.0) -> GrotesqueDesignSpec:
    if not 0.0 < delta_bundle < 1.0:
        raise ConfigurationError(f"delta_bundle must lie in (0, 1), got {delta_bundle}")
    if c_loc <= 0:
        raise ConfigurationError(f"c_loc must be positive, got {c_loc}")
    m_bar = expected_edges(params)
    if m_bar < 2.0:
        raise RegimeError(f"expected edge count {m_bar:.4g} < 2; bundle sizing needs log m̄ > 0")
    k, n = params.k, params.n
    b = bundle_count(m_bar, delta_bundle)
    r_inc = (2.0 * m_bar) ** (-1.0 / k)
    delta_star = min(delta_bundle / (m_bar * math.log(m_bar)), math.nextafter(0.5, 0.0))
    if r_inc * k * k * m_bar / n >= 1.0:
        warnings.warn(
            f"r_inc*k^2*m̄/n = {r_inc * k * k * m_bar / n:.3g} >= 1: n is too small relative to m̄ "
            "for bundles to isolate edges reliably",
            RegimeWarning,
            stacklevel=3,
        )
    return GrotesqueDesignSpec(
        k=k,
        b=b,
        r_inc=r_inc,
        t_mul=multiplicity_queries(k, delta_star),
        r_mul=multiplicity_rate(k),
        threshold_m=multiplicity_margin(k),
        t_loc=location_queries(n, k, b, delta_bundle, c_loc),
        rho_loc=location_inclusion(k),
        delta_star=delta_star,
        delta_bundle=delta_bundle,
        c_loc=c_loc,
    )


def make_grotesque_design(
    params: ModelParams,
    delta_bundle: float = 0.1,
    c_loc: float = 4.0,
    rng: np.random.Generator | None = None,
) -> tuple[GrotesqueDesignSpec, BundleLayout, QueryBatch]:
    """Build the full GROTESQUE batch: for each bundle, its multiplicity then location queries.

    Bundle memberships are drawn first (one row per bundle), then per bundle
    the multiplicity rows and the location pools, in bundle order.
    """
    if rng is None:
        rng = np.random.default_rng()
    spec = grotesque_spec(params, delta_bundle, c_loc)
    n = params.n
    membership = rng.random((spec.b, n)) < spec.r_inc
    supports, pools, blocks = [], [], []
    mul_ranges, loc_ranges = [], []
    pos = 0
    for i in range(spec.b):
        support = np.flatnonzero(membership[i])
        s = support.size
        mul = rng.random((spec.t_mul, s)) < spec.r_mul
        pool = make_pools(s, spec.t_loc, spec.rho_loc, rng)
        loc = to_detection_query(np.ones(s, dtype=bool), pool)
        blocks.append(QueryBlock(support, mul, "multiplicity", i))
        blocks.append(QueryBlock(support, loc, "location", i))
        mul_ranges.append((pos, pos + spec.t_mul))
        pos += spec.t_mul
        loc_ranges.append((pos, pos + spec.t_loc))
        pos += spec.t_loc
        supports.append(support)
        pools.append(pool)
    layout = BundleLayout(n, tuple(supports), tuple(mul_ranges), tuple(loc_ranges), tuple(pools))
    batch = QueryBatch(n, blocks)
    layout.check(len(batch))
    return spec, layout, batch


def layout_from_batch(batch: QueryBatch) -> BundleLayout:
    """Rebuild a layout from a replayed GROTESQUE batch (pools are complements of location rows)."""
    by_bundle: dict[int, dict] = {}
    for block, start, stop in batch.block_ranges():
        if block.stage == "bernoulli" or block.bundle is None:
            raise ConfigurationError("batch is not a GROTESQUE design")
        entry = by_bundle.setdefault(block.bundle, {"support": block.support})
        if block.stage == "multiplicity":
            entry["mul"] = (start, stop)
        else:
            entry["loc"] = (start, stop)
            entry["pools"] = ~block.rows
    order = sorted(by_bundle)
    if order != list(range(len(order))) or any(("mul" not in e or "loc" not in e) for e in by_bundle.values()):
        raise ConfigurationError("every bundle needs one multiplicity and one location block")
    return BundleLayout(
        batch.n,
        tuple(by_bundle[i]["support"] for i in order),
        tuple(by_bundle[i]["mul"] for i in order),
        tuple(by_bundle[i]["loc"] for i in order),
        tuple(by_bundle[i]["pools"] for i in order),
    )
