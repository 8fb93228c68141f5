"""Packing helpers between boolean matrices and uint64 bitsets.

Bitsets run along the *query* axis: for a (t, s) boolean query block the
packed form is an (s, W) uint64 array with W = ceil(t / 64), bit ``i % 64`` of
word ``i // 64`` set when query ``i`` contains the vertex.
"""

from __future__ import annotations

import numpy as np


def n_words(t: int) -> int:
    return (t + 63) // 64


def pack_columns(rows: np.ndarray) -> np.ndarray:
    """Pack a (t, s) boolean matrix into (s, W) uint64 column bitsets."""
    rows = np.asarray(rows, dtype=bool)
    t, s = rows.shape
    w = n_words(t)
    if w == 0:
        return np.zeros((s, 0), dtype=np.uint64)
    padded = np.zeros((s, w * 64), dtype=bool)
    padded[:, :t] = rows.T
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False)


def unpack_words(words: np.ndarray, t: int) -> np.ndarray:
    """Inverse of one row of :func:`pack_columns`: (W,) uint64 -> (t,) bool."""
    words = np.ascontiguousarray(words, dtype="<u8")
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    return bits[:t].astype(bool)


def unpack_matrix(words: np.ndarray, t: int) -> np.ndarray:
    """(r, W) uint64 -> (r, t) bool."""
    words = np.ascontiguousarray(words, dtype="<u8")
    r = words.shape[0]
    bits = np.unpackbits(words.view(np.uint8).reshape(r, -1), axis=1, bitorder="little")
    return bits[:, :t].astype(bool)
