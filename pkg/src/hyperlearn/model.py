"""Hypergraph data model, Erdős–Rényi sampling and typicality checks."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ConfigurationError, ContractError

# boundary slack for the θ vs 1/k case split
_THETA_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Generative and design parameters.

    Either ``q`` or ``theta`` must be given; with ``theta`` alone, ``q`` is set
    to ``n ** (-k * (1 - theta))``.
    """

    n: int
    k: int
    q: float | None = None
    theta: float | None = None
    nu: float = 1.0
    epsilon: float = 0.25

    def __post_init__(self) -> None:
        if not (isinstance(self.n, (int, np.integer)) and isinstance(self.k, (int, np.integer))):
            raise ConfigurationError("n and k must be integers")
        if not 2 <= self.k <= self.n:
            raise ConfigurationError(f"need 2 <= k <= n, got n={self.n}, k={self.k}")
        if self.theta is not None:
            if not 0.0 < self.theta < 1.0:
                raise ConfigurationError(f"theta must lie in (0, 1), got {self.theta}")
            q_theta = float(self.n) ** (-self.k * (1.0 - self.theta))
            if self.q is None:
                object.__setattr__(self, "q", q_theta)
            elif abs(self.q - q_theta) > 1e-12 * q_theta:
                raise ConfigurationError(
                    f"q={self.q} inconsistent with theta={self.theta} (expected {q_theta})"
                )
        if self.q is None:
            raise ConfigurationError("one of q or theta is required")
        if not 0.0 < self.q < 1.0:
            raise ConfigurationError(f"q must lie in (0, 1), got {self.q}")
        if not self.nu > 0:
            raise ConfigurationError(f"nu must be positive, got {self.nu}")
        if not self.epsilon > 0:
            raise ConfigurationError(f"epsilon must be positive, got {self.epsilon}")

    @classmethod
    def from_theta(cls, n: int, k: int, theta: float, **kw) -> "ModelParams":
        return cls(n=n, k=k, theta=theta, **kw)

    @property
    def m_bar(self) -> float:
        return expected_edges(self)

    @property
    def effective_theta(self) -> float:
        """θ as given, or back-solved from q as ``1 + ln q / (k ln n)``."""
        if self.theta is not None:
            return self.theta
        return 1.0 + math.log(self.q) / (self.k * math.log(self.n))

    def to_dict(self) -> dict:
        return {
            "n": int(self.n),
            "k": int(self.k),
            "q": self.q,
            "theta": self.theta,
            "nu": self.nu,
            "epsilon": self.epsilon,
        }


def expected_edges(params: ModelParams) -> float:
    """Expected hyperedge count ``q * C(n, k)``."""
    try:
        return float(math.comb(params.n, params.k) * params.q)
    except OverflowError:
        log_c = math.lgamma(params.n + 1) - math.lgamma(params.k + 1) - math.lgamma(params.n - params.k + 1)
        return math.exp(log_c + math.log(params.q))


def d_max(params: ModelParams) -> float:
    """Degree threshold of the typical set (natural log in the sparse branch)."""
    theta = params.effective_theta
    if not 0.0 < theta < 1.0:
        raise ConfigurationError(f"sparsity exponent theta={theta} outside (0, 1)")
    if theta > 1.0 / params.k + _THETA_TOL:
        return params.k * float(params.n) ** (params.k - 1) * params.q
    return math.log(params.n)


def _canonical_edge(edge: Iterable[int], n: int, k: int) -> tuple[int, ...]:
    e = tuple(sorted(int(v) for v in edge))
    if len(e) != k or len(set(e)) != k:
        raise ContractError(f"edge {edge!r} is not a set of {k} distinct vertices")
    if e[0] < 0 or e[-1] >= n:
        raise ContractError(f"edge {edge!r} has a vertex outside [0, {n})")
    return e


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """A k-uniform hypergraph on vertices ``0..n-1``.

    Edges are stored as strictly increasing tuples in a frozenset; any iterable
    of vertex collections is accepted and canonicalized.
    """

    n: int
    k: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.k < 1 or self.n < 0:
            raise ContractError(f"invalid shape n={self.n}, k={self.k}")
        edges = frozenset(_canonical_edge(e, self.n, self.k) for e in self.edges)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_array(cls, n: int, k: int, arr: np.ndarray) -> "Hypergraph":
        arr = np.asarray(arr, dtype=np.int64).reshape(-1, k)
        return cls(n, k, frozenset(map(tuple, np.sort(arr, axis=1).tolist())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.n, self.k, self.edges) == (other.n, other.k, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge) -> bool:
        return tuple(sorted(edge)) in self.edges

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, ...]]:
        return sorted(self.edges)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """(m, k) int64 array of edges in lexicographic order."""
        arr = np.array(self.sorted_edges(), dtype=np.int64).reshape(-1, self.k)
        arr.setflags(write=False)
        return arr

    @cached_property
    def edges_by_first_vertex(self) -> dict[int, np.ndarray]:
        index: dict[int, list] = {}
        for e in self.sorted_edges():
            index.setdefault(e[0], []).append(e)
        return {v: np.array(es, dtype=np.int64) for v, es in index.items()}

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edge_array.ravel(), minlength=self.n)

    def to_dict(self) -> dict:
        return {"n": int(self.n), "k": int(self.k), "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_dict(cls, d: dict) -> "Hypergraph":
        edges = [tuple(sorted(e)) for e in d["edges"]]
        if len(set(edges)) != len(edges):
            raise ContractError("duplicate edges in serialized hypergraph")
        return cls(int(d["n"]), int(d["k"]), frozenset(edges))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, s: str) -> "Hypergraph":
        return cls.from_dict(json.loads(s))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Hypergraph":
        return cls.from_json(Path(path).read_text())


def max_degree(g: Hypergraph) -> int:
    if g.m == 0:
        return 0
    return int(g.degrees().max())


# --- sampling -------------------------------------------------------------

@lru_cache(maxsize=64)
def _colex_tables(n: int, k: int) -> list[np.ndarray]:
    # tables[i][c] = C(c, i) for c in [0, n), saturated below int64 overflow
    cap = 2**62
    return [
        np.array([min(math.comb(c, i), cap) for c in range(n)], dtype=np.int64)
        for i in range(k + 1)
    ]


def unrank_colex(ranks: np.ndarray, n: int, k: int) -> np.ndarray:
    """Map colexicographic ranks in ``[0, C(n, k))`` to sorted k-subsets."""
    ranks = np.asarray(ranks, dtype=np.int64).copy()
    out = np.empty((ranks.shape[0], k), dtype=np.int64)
    tables = _colex_tables(n, k)
    for i in range(k, 0, -1):
        c = np.searchsorted(tables[i], ranks, side="right") - 1
        out[:, i - 1] = c
        ranks -= tables[i][c]
    return out


def rank_colex(subset: Iterable[int]) -> int:
    return sum(math.comb(int(c), i + 1) for i, c in enumerate(sorted(subset)))


def _unrank_colex_int(r: int, n: int, k: int) -> tuple[int, ...]:
    out = []
    c = n - 1
    for i in range(k, 0, -1):
        while math.comb(c, i) > r:
            c -= 1
        out.append(c)
        r -= math.comb(c, i)
        c -= 1
    return tuple(reversed(out))


def _geometric_gaps(rng: np.random.Generator, log1mq: float, size: int) -> np.ndarray:
    """Failures before the next success, as float64 (may exceed int64 range)."""
    u = 1.0 - rng.random(size)  # (0, 1]
    return np.floor(np.log(u) / log1mq)


def sample_hypergraph(params: ModelParams, rng: np.random.Generator) -> Hypergraph:
    """Draw G ~ G^(k)(n, q) by geometric skipping over colex ranks.

    Runs in expected O(m k + m log m); the C(n, k) candidate subsets are never
    enumerated.
    """
    n, k, q = params.n, params.k, params.q
    total = math.comb(n, k)
    log1mq = math.log1p(-q)
    if total < 2**53:
        ranks = []
        pos = -1  # last accepted rank
        expected = q * total
        batch = int(expected + 5.0 * math.sqrt(expected + 1.0)) + 16
        while True:
            gaps = _geometric_gaps(rng, log1mq, batch)
            steps = gaps + 1.0
            cum = pos + np.cumsum(steps)
            inside = cum < total
            if not inside.all():
                stop = int(np.argmin(inside))
                ranks.append(cum[:stop].astype(np.int64))
                break
            ranks.append(cum.astype(np.int64))
            pos = int(cum[-1])
        r = np.concatenate(ranks) if ranks else np.zeros(0, dtype=np.int64)
        return Hypergraph.from_array(n, k, unrank_colex(r, n, k))
    # huge C(n, k): exact integer arithmetic
    edges = []
    pos = -1
    while True:
        gap = _geometric_gaps(rng, log1mq, 1)[0]
        if pos + 1 + gap >= total:
            break
        pos = pos + 1 + int(gap)
        edges.append(_unrank_colex_int(pos, n, k))
    return Hypergraph(n, k, frozenset(edges))


# --- typicality -----------------------------------------------------------

@dataclass(frozen=True)
class TypicalityReport:
    m: int
    max_degree: int
    d_max: float
    m_bar: float
    p_g_estimate: float
    p_g_stderr: float
    mc_samples: int
    in_t1: bool
    in_t2: bool
    in_t3: bool

    @property
    def typical(self) -> bool:
        return self.in_t1 and self.in_t2 and self.in_t3

    def flags(self) -> list[bool]:
        return [self.in_t1, self.in_t2, self.in_t3]


def estimate_positive_rate(
    g: Hypergraph, p: float, samples: int, rng: np.random.Generator, chunk: int = 8192
) -> int:
    """Number of positives among ``samples`` Bernoulli(p) queries on ``g``.

    Only vertices touched by an edge are drawn; the rest cannot change an answer.
    """
    from .kernels import answer_packed, pack_columns, unpack_words

    if g.m == 0:
        return 0
    support = np.unique(g.edge_array)
    local = np.searchsorted(support, g.edge_array)
    positives = 0
    done = 0
    while done < samples:
        c = min(chunk, samples - done)
        rows = rng.random((c, support.size)) < p
        words = answer_packed(pack_columns(rows), local, g.k)
        positives += int(unpack_words(words, c).sum())
        done += c
    return positives


def typicality_check(
    g: Hypergraph, params: ModelParams, mc_samples: int, rng: np.random.Generator
) -> TypicalityReport:
    """Evaluate the three ε-typicality conditions for ``g``.

    Edge count and max degree are checked exactly. The Bernoulli positive
    probability is estimated from ``mc_samples`` queries and accepted with
    three standard errors of slack beyond ``(1 ± ε)(1 - e^-ν)``.
    """
    from .design import bernoulli_parameter

    if mc_samples < 1:
        raise ConfigurationError("mc_samples must be >= 1")
    eps = params.epsilon
    m_bar = expected_edges(params)
    m = g.m
    deg = max_degree(g)
    dm = d_max(params)
    p = bernoulli_parameter(params)
    pos = estimate_positive_rate(g, p, mc_samples, rng)
    p_hat = pos / mc_samples
    se = math.sqrt(p_hat * (1.0 - p_hat) / mc_samples)
    target = 1.0 - math.exp(-params.nu)
    return TypicalityReport(
        m=m,
        max_degree=deg,
        d_max=dm,
        m_bar=m_bar,
        p_g_estimate=p_hat,
        p_g_stderr=se,
        mc_samples=mc_samples,
        in_t1=(1.0 - eps) * m_bar <= m <= (1.0 + eps) * m_bar,
        in_t2=deg <= dm,
        in_t3=(1.0 - eps) * target - 3.0 * se <= p_hat <= (1.0 + eps) * target + 3.0 * se,
    )
