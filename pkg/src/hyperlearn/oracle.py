"""Hyperedge-detection oracle, query batches and transcript I/O.

A :class:`QueryBatch` is an ordered list of vertex subsets stored as blocks.
Each block holds boolean rows over a vertex *support*; vertices outside the
support are absent from every query in that block. Bernoulli designs use a
single block over all vertices, GROTESQUE designs use one small block per
bundle and stage, which keeps memory proportional to bundle size rather
than ``n``.
"""

from __future__ import annotations

import json
import struct
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import ContractError
from .kernels import answer_packed, pack_columns, unpack_words
from .model import Hypergraph

STAGES = ("bernoulli", "multiplicity", "location")
MAGIC = b"HQB1"
_HEADER = struct.Struct("<4sQQB")


@dataclass(frozen=True, eq=False)
class QueryBlock:
    support: np.ndarray  # sorted global vertex ids
    rows: np.ndarray  # (t_block, len(support)) bool
    stage: str = "bernoulli"
    bundle: int | None = None

    def __post_init__(self) -> None:
        support = np.asarray(self.support, dtype=np.int64)
        rows = np.asarray(self.rows, dtype=bool)
        if rows.ndim != 2 or rows.shape[1] != support.size:
            raise ContractError(f"rows shape {rows.shape} does not match support of size {support.size}")
        if support.size > 1 and np.any(np.diff(support) <= 0):
            raise ContractError("block support must be strictly increasing")
        if self.stage not in STAGES:
            raise ContractError(f"unknown stage {self.stage!r}")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "rows", rows)

    def __len__(self) -> int:
        return self.rows.shape[0]


@dataclass(frozen=True)
class Segment:
    stage: str
    bundle: int | None
    start: int
    stop: int


class QueryBatch:
    """Non-adaptive design: queries ``0..t-1`` in canonical order."""

    def __init__(self, n: int, blocks: Sequence[QueryBlock] = ()) -> None:
        self.n = int(n)
        self.blocks: tuple[QueryBlock, ...] = tuple(blocks)
        for b in self.blocks:
            if b.support.size and (b.support[0] < 0 or b.support[-1] >= self.n):
                raise ContractError(f"block support exceeds vertex range [0, {self.n})")
        sizes = [len(b) for b in self.blocks]
        self._offsets = np.concatenate([[0], np.cumsum(sizes, dtype=np.int64)]).astype(np.int64)

    @classmethod
    def from_dense(cls, matrix: np.ndarray, stage: str = "bernoulli", bundle: int | None = None) -> "QueryBatch":
        matrix = np.asarray(matrix, dtype=bool)
        if matrix.ndim != 2:
            raise ContractError("dense query matrix must be 2-D (t, n)")
        n = matrix.shape[1]
        return cls(n, [QueryBlock(np.arange(n), matrix, stage, bundle)])

    def __len__(self) -> int:
        return int(self._offsets[-1])

    @property
    def t(self) -> int:
        return len(self)

    def segments(self) -> list[Segment]:
        return [
            Segment(b.stage, b.bundle, int(self._offsets[i]), int(self._offsets[i + 1]))
            for i, b in enumerate(self.blocks)
        ]

    def block_ranges(self) -> Iterator[tuple[QueryBlock, int, int]]:
        for i, b in enumerate(self.blocks):
            yield b, int(self._offsets[i]), int(self._offsets[i + 1])

    def stages(self) -> set[str]:
        return {b.stage for b in self.blocks if len(b)}

    def tag(self, i: int) -> str:
        """Provenance of query ``i``, e.g. ``location(bundle 3, test 7)``."""
        if not 0 <= i < len(self):
            raise IndexError(i)
        j = int(np.searchsorted(self._offsets, i, side="right")) - 1
        b = self.blocks[j]
        if b.stage == "bernoulli":
            return "bernoulli"
        if b.stage == "multiplicity":
            return f"multiplicity(bundle {b.bundle})"
        return f"location(bundle {b.bundle}, test {i - int(self._offsets[j])})"

    def dense(self) -> np.ndarray:
        """(t, n) boolean matrix of every query."""
        out = np.zeros((len(self), self.n), dtype=bool)
        for b, start, stop in self.block_ranges():
            if b.support.size:
                out[start:stop, b.support] = b.rows
        return out

    def query(self, i: int) -> np.ndarray:
        j = int(np.searchsorted(self._offsets, i, side="right")) - 1
        b = self.blocks[j]
        row = np.zeros(self.n, dtype=bool)
        row[b.support] = b.rows[i - int(self._offsets[j])]
        return row


@dataclass(frozen=True, eq=False)
class QueryOutcomes:
    bits: np.ndarray
    bernoulli_positive_rate: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", np.asarray(self.bits, dtype=bool).ravel())

    def __len__(self) -> int:
        return self.bits.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QueryOutcomes):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)


def _as_subset(s, n: int) -> np.ndarray:
    s = np.asarray(s)
    if s.dtype != bool:
        raise ContractError("query subsets are boolean vectors")
    if s.shape != (n,):
        raise ContractError(f"query has length {s.shape}, expected ({n},)")
    return s


def answer_query(g: Hypergraph, s) -> int:
    """1 iff some hyperedge of ``g`` lies inside the vertex set ``s``."""
    s = _as_subset(s, g.n)
    index = g.edges_by_first_vertex
    for v in np.flatnonzero(s):
        es = index.get(int(v))
        if es is not None and s[es].all(axis=1).any():
            return 1
    return 0


def _answer_block(g: Hypergraph, block: QueryBlock) -> np.ndarray:
    t_b = len(block)
    if t_b == 0 or g.m == 0 or block.support.size < g.k:
        return np.zeros(t_b, dtype=bool)
    glob2loc = np.full(g.n, -1, dtype=np.int64)
    glob2loc[block.support] = np.arange(block.support.size)
    local = glob2loc[g.edge_array]
    local = local[(local >= 0).all(axis=1)]
    if local.shape[0] == 0:
        return np.zeros(t_b, dtype=bool)
    words = answer_packed(pack_columns(block.rows), local, g.k)
    return unpack_words(words, t_b)


def answer_batch(g: Hypergraph, batch: QueryBatch) -> QueryOutcomes:
    """Answer every query of ``batch`` against ``g``, positionally aligned."""
    if batch.n != g.n:
        raise ContractError(f"batch over {batch.n} vertices, hypergraph has {g.n}")
    bits = np.zeros(len(batch), dtype=bool)
    bern_pos = bern_total = 0
    for block, start, stop in batch.block_ranges():
        ans = _answer_block(g, block)
        bits[start:stop] = ans
        if block.stage == "bernoulli":
            bern_pos += int(ans.sum())
            bern_total += stop - start
    rate = bern_pos / bern_total if bern_total else None
    return QueryOutcomes(bits, rate)


class Oracle:
    """Sealed hyperedge-detection oracle over a hidden hypergraph.

    Only whole batches are answered, so a decoder fed ``(batch, outcomes)``
    cannot adapt. ``queries_answered`` counts every query ever answered.
    """

    def __init__(self, g: Hypergraph) -> None:
        self._g = g
        self._lock = threading.Lock()
        self._queries = 0

    @property
    def n(self) -> int:
        return self._g.n

    @property
    def k(self) -> int:
        return self._g.k

    @property
    def queries_answered(self) -> int:
        return self._queries

    def answer_batch(self, batch: QueryBatch) -> QueryOutcomes:
        out = answer_batch(self._g, batch)
        with self._lock:
            self._queries += len(batch)
        return out


# --- transcripts ----------------------------------------------------------

def _sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def write_transcript(path: str | Path, batch: QueryBatch, outcomes: QueryOutcomes | None = None) -> None:
    """Write ``HQB1`` binary rows (+ optional outcome bits) and a JSON provenance sidecar.

    Layout: magic, n (u64), t (u64), flags (u8; bit 0 = outcomes present), then
    t rows of ceil(n/8) bytes (LSB-first), then ceil(t/8) outcome bytes.
    """
    path = Path(path)
    if outcomes is not None and len(outcomes) != len(batch):
        raise ContractError("outcomes not aligned with batch")
    dense = batch.dense()
    with path.open("wb") as fh:
        fh.write(_HEADER.pack(MAGIC, batch.n, len(batch), 1 if outcomes is not None else 0))
        fh.write(np.packbits(dense, axis=1, bitorder="little").tobytes())
        if outcomes is not None:
            fh.write(np.packbits(outcomes.bits, bitorder="little").tobytes())
    side = {
        "format": "HQB1",
        "n": batch.n,
        "t": len(batch),
        "segments": [
            {
                "stage": b.stage,
                "bundle": b.bundle,
                "start": start,
                "stop": stop,
                "support": b.support.tolist(),
            }
            for b, start, stop in batch.block_ranges()
        ],
    }
    if outcomes is not None and outcomes.bernoulli_positive_rate is not None:
        side["bernoulli_positive_rate"] = outcomes.bernoulli_positive_rate
    _sidecar_path(path).write_text(json.dumps(side, separators=(",", ":")))


def read_transcript(path: str | Path) -> tuple[QueryBatch, QueryOutcomes | None]:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise ContractError("truncated transcript header")
    magic, n, t, flags = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ContractError(f"bad magic {magic!r}")
    row_bytes = (n + 7) // 8
    body = np.frombuffer(raw, dtype=np.uint8, count=t * row_bytes, offset=_HEADER.size)
    dense = np.unpackbits(body.reshape(t, row_bytes), axis=1, bitorder="little")[:, :n].astype(bool)
    outcomes = None
    if flags & 1:
        off = _HEADER.size + t * row_bytes
        ob = np.frombuffer(raw, dtype=np.uint8, count=(t + 7) // 8, offset=off)
        outcomes = np.unpackbits(ob, bitorder="little")[:t].astype(bool)
    side_path = _sidecar_path(path)
    if side_path.exists():
        side = json.loads(side_path.read_text())
        blocks = []
        for seg in side["segments"]:
            support = np.asarray(seg["support"], dtype=np.int64)
            rows = dense[seg["start"] : seg["stop"]]
            outside = np.ones(n, dtype=bool)
            outside[support] = False
            if rows[:, outside].any():
                raise ContractError("transcript row has vertices outside its declared support")
            blocks.append(QueryBlock(support, rows[:, support], seg["stage"], seg["bundle"]))
        batch = QueryBatch(n, blocks)
        rate = side.get("bernoulli_positive_rate")
    else:
        batch = QueryBatch.from_dense(dense)
        rate = None
    if len(batch) != t:
        raise ContractError("sidecar segments do not cover the transcript")
    return batch, (QueryOutcomes(outcomes, rate) if outcomes is not None else None)
