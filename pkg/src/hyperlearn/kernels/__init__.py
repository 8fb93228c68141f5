"""Hot set-containment kernels.

The compiled extension ``_core`` is used when it was built; otherwise the
numpy implementations in ``_fallback`` are selected at import. Setting
``HYPERLEARN_PURE=1`` forces the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _fallback
from .bits import n_words, pack_columns, unpack_matrix, unpack_words

BACKEND = "python"
_impl = _fallback

if os.environ.get("HYPERLEARN_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        pass


def _as_edges(edges, k: int) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(edges, dtype=np.int64).reshape(-1, k))


def _as_cols(cols: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(cols, dtype=np.uint64)


def comp_survivors(neg_cols: np.ndarray, k: int) -> np.ndarray:
    """All k-subsets, in lexicographic order, not contained in any negative query.

    ``neg_cols`` is the (n, W) packed bitset of negative queries per vertex.
    """
    return _impl.comp_survivors(_as_cols(neg_cols), k)


def answer_packed(cols: np.ndarray, edges, k: int) -> np.ndarray:
    """Packed outcome words: query i is positive iff it contains some edge."""
    edges = _as_edges(edges, k)
    if edges.shape[0] == 0:
        return np.zeros(cols.shape[1], dtype=np.uint64)
    return _impl.answer_packed(_as_cols(cols), edges)


def unique_cover(cols: np.ndarray, edges, k: int, t: int) -> np.ndarray:
    """For each of ``t`` queries: the only contained edge's index, -1 for none, -2 for several."""
    edges = _as_edges(edges, k)
    if edges.shape[0] == 0:
        return np.full(t, -1, dtype=np.int64)
    return _impl.unique_cover(_as_cols(cols), edges, t)


def use_backend(name: str) -> None:
    """Switch implementation at runtime (benchmarks and cross-checks)."""
    global _impl, BACKEND
    if name == "python":
        _impl, BACKEND = _fallback, "python"
    elif name == "cython":
        from . import _core

        _impl, BACKEND = _core, "cython"
    else:
        raise ValueError(f"unknown backend {name!r}")


__all__ = [
    "BACKEND",
    "answer_packed",
    "comp_survivors",
    "n_words",
    "pack_columns",
    "unique_cover",
    "unpack_matrix",
    "unpack_words",
    "use_backend",
]
