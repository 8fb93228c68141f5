"""Pure numpy versions of the compiled kernels, same signatures."""

from __future__ import annotations

import itertools

import numpy as np

_CHUNK_WORDS = 1 << 22


def _chunk_rows(width: int, per_row: int) -> int:
    return max(1, _CHUNK_WORDS // max(1, width * per_row))


def comp_survivors(neg_cols: np.ndarray, k: int) -> np.ndarray:
    n, w = neg_cols.shape
    if k > n:
        return np.zeros((0, k), dtype=np.int64)
    out = []
    # one block per leading vertex keeps the (combos, k, W) temporary bounded
    for v0 in range(n - k + 1):
        tails = np.array(list(itertools.combinations(range(v0 + 1, n), k - 1)), dtype=np.int64)
        tails = tails.reshape(-1, k - 1)
        if tails.shape[0] == 0:
            continue
        step = _chunk_rows(w, k)
        for s in range(0, tails.shape[0], step):
            tail = tails[s : s + step]
            acc = np.broadcast_to(neg_cols[v0], (tail.shape[0], w)).copy()
            for j in range(k - 1):
                acc &= neg_cols[tail[:, j]]
            keep = ~acc.any(axis=1)
            if keep.any():
                kept = tail[keep]
                out.append(np.column_stack([np.full(kept.shape[0], v0, dtype=np.int64), kept]))
    if not out:
        return np.zeros((0, k), dtype=np.int64)
    return np.concatenate(out).astype(np.int64)


def _edge_masks(cols: np.ndarray, edges: np.ndarray) -> np.ndarray:
    acc = cols[edges[:, 0]].copy()
    for j in range(1, edges.shape[1]):
        acc &= cols[edges[:, j]]
    return acc


def answer_packed(cols: np.ndarray, edges: np.ndarray) -> np.ndarray:
    w = cols.shape[1]
    out = np.zeros(w, dtype=np.uint64)
    step = _chunk_rows(w, edges.shape[1] if edges.ndim == 2 else 1)
    for s in range(0, edges.shape[0], step):
        masks = _edge_masks(cols, edges[s : s + step])
        out |= np.bitwise_or.reduce(masks, axis=0)
    return out


def unique_cover(cols: np.ndarray, edges: np.ndarray, t: int) -> np.ndarray:
    from .bits import unpack_matrix

    owner = np.full(t, -1, dtype=np.int64)
    counts = np.zeros(t, dtype=np.int64)
    w = cols.shape[1]
    step = _chunk_rows(max(w, t // 8 + 1), edges.shape[1])
    for s in range(0, edges.shape[0], step):
        bits = unpack_matrix(_edge_masks(cols, edges[s : s + step]), t)
        hit = bits.any(axis=0)
        counts += bits.sum(axis=0)
        owner[hit] = s + np.argmax(bits[:, hit], axis=0)
    owner[counts == 0] = -1
    owner[counts > 1] = -2
    return owner
