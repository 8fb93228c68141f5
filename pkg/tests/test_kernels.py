import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperlearn import kernels
from hyperlearn.kernels import _fallback, pack_columns, unpack_matrix, unpack_words

from .conftest import BACKENDS


@given(st.integers(0, 200), st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_pack_roundtrip(t, s, seed):
    rows = np.random.default_rng(seed).random((t, s)) < 0.4
    cols = pack_columns(rows)
    assert cols.shape == (s, (t + 63) // 64)
    assert np.array_equal(unpack_matrix(cols, t), rows.T)
    if s:
        assert np.array_equal(unpack_words(cols[0], t), rows[:, 0])


def naive_survivors(rows_neg, n, k):
    return [h for h in itertools.combinations(range(n), k) if not rows_neg[:, list(h)].all(axis=1).any()]


@pytest.mark.parametrize("k", [2, 3, 4])
def test_comp_survivors_matches_enumeration(backend, k):
    rng = np.random.default_rng(k)
    for _ in range(5):
        n = int(rng.integers(k, 14))
        t = int(rng.integers(0, 130))
        neg = rng.random((t, n)) < 0.5
        got = kernels.comp_survivors(pack_columns(neg), k)
        assert [tuple(r) for r in got.tolist()] == naive_survivors(neg, n, k)


def test_comp_survivors_no_negatives_is_complete(backend):
    got = kernels.comp_survivors(np.zeros((7, 0), dtype=np.uint64), 3)
    assert got.shape == (35, 3)


def test_answer_and_unique_cover_match_naive(backend):
    rng = np.random.default_rng(7)
    for _ in range(10):
        n, k, t = 11, int(rng.integers(2, 4)), int(rng.integers(1, 150))
        rows = rng.random((t, n)) < 0.6
        edges = np.array([h for h in itertools.combinations(range(n), k) if rng.random() < 0.08]).reshape(-1, k)
        contained = rows[:, edges].all(axis=2) if len(edges) else np.zeros((t, 0), bool)
        ans = unpack_words(kernels.answer_packed(pack_columns(rows), edges, k), t)
        assert np.array_equal(ans, contained.any(axis=1))
        owner = kernels.unique_cover(pack_columns(rows), edges, k, t)
        count = contained.sum(axis=1)
        assert np.array_equal(owner == -1, count == 0)
        assert np.array_equal(owner == -2, count > 1)
        one = count == 1
        assert np.array_equal(owner[one], contained[one].argmax(axis=1))


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")
@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.integers(3, 16), st.integers(0, 300), st.integers(0, 2**32 - 1))
def test_backends_agree(k, n, t, seed):
    from hyperlearn.kernels import _core

    rng = np.random.default_rng(seed)
    rows = rng.random((t, n)) < rng.uniform(0.2, 0.8)
    cols = pack_columns(rows)
    assert np.array_equal(_core.comp_survivors(cols, k), _fallback.comp_survivors(cols, k))
    edges = np.ascontiguousarray(rng.integers(0, n, size=(6, k)), dtype=np.int64)
    edges = edges[(np.diff(np.sort(edges, axis=1), axis=1) > 0).all(axis=1)]
    if len(edges):
        assert np.array_equal(_core.answer_packed(cols, edges), _fallback.answer_packed(cols, edges))
        assert np.array_equal(_core.unique_cover(cols, edges, t), _fallback.unique_cover(cols, edges, t))


def test_backend_switch_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")
