"""Decoders from ``(QueryBatch, QueryOutcomes)`` to an estimated hypergraph.

None of these functions can reach the hidden hypergraph; they see only the
design and its answers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .design import BundleLayout, GrotesqueDesignSpec, multiplicity_margin
from .errors import ContractError
from .grouptest import locate
from .kernels import comp_survivors, pack_columns, unique_cover
from .model import Hypergraph
from .oracle import QueryBatch, QueryOutcomes
from .setcover import SearchBudgetExceeded, min_cover

DEFAULT_NODE_CAP = 10**7


@dataclass
class DecodeResult:
    algorithm: str
    estimate: Hypergraph
    diagnostics: dict = field(default_factory=dict)
    exact: bool | None = None
    failed: bool = False

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "edges": [list(e) for e in self.estimate.sorted_edges()],
            "diagnostics": dict(self.diagnostics),
        }


def _bernoulli_rows(batch: QueryBatch, outcomes: QueryOutcomes) -> tuple[np.ndarray, np.ndarray]:
    if len(outcomes) != len(batch):
        raise ContractError(f"{len(outcomes)} outcomes for {len(batch)} queries")
    if batch.stages() - {"bernoulli"}:
        raise ContractError("COMP/DD/SSS decode Bernoulli-tagged batches only")
    return batch.dense(), outcomes.bits


def _candidates(n: int, k: int, rows: np.ndarray, bits: np.ndarray) -> np.ndarray:
    return comp_survivors(pack_columns(rows[~bits]), k)


def comp_decode(n: int, k: int, batch: QueryBatch, outcomes: QueryOutcomes) -> DecodeResult:
    """Every k-subset not contained in a negative query."""
    rows, bits = _bernoulli_rows(batch, outcomes)
    pe = _candidates(n, k, rows, bits)
    return DecodeResult(
        "comp",
        Hypergraph.from_array(n, k, pe),
        {"negative_queries": int((~bits).sum()), "candidates": int(pe.shape[0])},
    )


def dd_decode(n: int, k: int, batch: QueryBatch, outcomes: QueryOutcomes) -> DecodeResult:
    """Candidates that are the only candidate inside some positive query."""
    rows, bits = _bernoulli_rows(batch, outcomes)
    pe = _candidates(n, k, rows, bits)
    pos_rows = rows[bits]
    owner = unique_cover(pack_columns(pos_rows), pe, k, pos_rows.shape[0])
    chosen = np.unique(owner[owner >= 0])
    return DecodeResult(
        "dd",
        Hypergraph.from_array(n, k, pe[chosen]),
        {
            "pe_size": int(pe.shape[0]),
            "positive_queries": int(bits.sum()),
            "unexplained_positive": int((owner == -1).sum()),
        },
    )


def _positive_masks(pe: np.ndarray, pos_rows: np.ndarray, k: int) -> list[int]:
    """Python-int bitset over positive queries for each candidate edge."""
    from .kernels import n_words

    t = pos_rows.shape[0]
    if pe.shape[0] == 0:
        return []
    cols = pack_columns(pos_rows)
    acc = cols[pe[:, 0]].copy()
    for j in range(1, k):
        acc &= cols[pe[:, j]]
    raw = np.ascontiguousarray(acc, dtype="<u8")
    nbytes = n_words(t) * 8
    buf = raw.tobytes()
    return [int.from_bytes(buf[i * nbytes : (i + 1) * nbytes], "little") for i in range(pe.shape[0])]


def sss_decode(
    n: int, k: int, batch: QueryBatch, outcomes: QueryOutcomes, node_cap: int = DEFAULT_NODE_CAP
) -> DecodeResult:
    """Smallest candidate set explaining every positive query.

    Negative queries hold automatically because every candidate survived
    COMP. Exceeding ``node_cap`` search nodes yields a failed result with an
    empty estimate rather than an approximation.
    """
    rows, bits = _bernoulli_rows(batch, outcomes)
    pe = _candidates(n, k, rows, bits)
    pos_rows = rows[bits]
    t_pos = pos_rows.shape[0]
    masks = _positive_masks(pe, pos_rows, k)
    target = (1 << t_pos) - 1
    diag = {"pe_size": int(pe.shape[0]), "positive_queries": int(t_pos)}
    try:
        chosen, nodes = min_cover(target, masks, node_cap)
    except SearchBudgetExceeded as exc:
        diag.update(nodes=exc.nodes, budget_exceeded=True)
        return DecodeResult("sss", Hypergraph(n, k), diag, failed=True)
    diag["nodes"] = nodes
    if chosen is None:
        diag["infeasible"] = True
        return DecodeResult("sss", Hypergraph(n, k), diag, failed=True)
    return DecodeResult("sss", Hypergraph.from_array(n, k, pe[chosen]), diag)


def multiplicity_threshold(k: int) -> float:
    return 1.0 / math.e + multiplicity_margin(k) / 2.0


def multiplicity_decode(t_mul: int, positives: int, k: int) -> int:
    """1 iff the positive fraction lies strictly inside (0, 1/e + M/2)."""
    if not 0 <= positives <= t_mul:
        raise ContractError(f"positives={positives} outside [0, {t_mul}]")
    p_hat = positives / t_mul
    return int(0.0 < p_hat < multiplicity_threshold(k))


def grotesque_decode(
    n: int, k: int, spec: GrotesqueDesignSpec, layout: BundleLayout, outcomes: QueryOutcomes
) -> DecodeResult:
    bits = outcomes.bits
    total = sum(stop - start for start, stop in layout.mul_ranges + layout.loc_ranges)
    if len(bits) != total:
        raise ContractError(f"{len(bits)} outcomes for a layout of {total} queries")
    found: set[tuple[int, ...]] = set()
    passed = failures = duplicates = 0
    for i in range(layout.b):
        ms, me = layout.mul_ranges[i]
        if not multiplicity_decode(me - ms, int(bits[ms:me].sum()), k):
            continue
        passed += 1
        ls, le = layout.loc_ranges[i]
        edge = locate(layout.supports[i], layout.pools[i], bits[ls:le], k)
        if edge is None:
            failures += 1
        elif edge in found:
            duplicates += 1
        else:
            found.add(edge)
    return DecodeResult(
        "grotesque",
        Hypergraph(n, k, frozenset(found)),
        {
            "bundles": layout.b,
            "bundles_passed": passed,
            "location_decodes": passed,
            "location_failures": failures,
            "duplicate_finds": duplicates,
        },
    )
