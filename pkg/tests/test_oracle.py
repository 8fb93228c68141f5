import numpy as np
import pytest

from hyperlearn.errors import ContractError
from hyperlearn.model import Hypergraph, ModelParams, sample_hypergraph
from hyperlearn.oracle import (
    MAGIC,
    Oracle,
    QueryBatch,
    QueryBlock,
    QueryOutcomes,
    answer_batch,
    answer_query,
    read_transcript,
    write_transcript,
)

from .conftest import brute_contains, random_hypergraph


def test_single_query_semantics():
    g = Hypergraph(6, 3, [(0, 1, 2)])
    s = np.zeros(6, bool)
    s[[0, 1]] = True
    assert answer_query(g, s) == 0
    s[2] = True
    assert answer_query(g, s) == 1
    assert answer_query(g, np.ones(6, bool)) == 1
    assert answer_query(Hypergraph(6, 3), np.ones(6, bool)) == 0


def test_rejects_non_boolean_queries():
    g = Hypergraph(4, 2, [(0, 1)])
    with pytest.raises(ContractError):
        answer_query(g, np.array([1, 1, 0, 0]))
    with pytest.raises(ContractError):
        answer_query(g, np.ones(5, bool))


def test_batch_matches_brute_force(backend, rng):
    for _ in range(30):
        n, k = int(rng.integers(4, 12)), int(rng.integers(2, 4))
        g = random_hypergraph(rng, n, k, rng.uniform(0.02, 0.3))
        rows = rng.random((int(rng.integers(0, 90)), n)) < rng.uniform(0.2, 0.9)
        out = answer_batch(g, QueryBatch.from_dense(rows))
        assert out.bits.tolist() == [bool(brute_contains(g, s)) for s in rows]
        assert out.bits.tolist() == [bool(answer_query(g, s)) for s in rows]


def test_block_local_storage_matches_dense(backend, rng):
    g = random_hypergraph(rng, 10, 2, 0.3)
    sup_a, sup_b = np.array([0, 3, 4, 7]), np.array([1, 2, 5, 6, 8, 9])
    blocks = [
        QueryBlock(sup_a, rng.random((20, 4)) < 0.7, "multiplicity", 0),
        QueryBlock(sup_b, rng.random((15, 6)) < 0.7, "location", 1),
    ]
    batch = QueryBatch(10, blocks)
    dense = batch.dense()
    assert not dense[:20][:, sup_b].any()
    assert answer_batch(g, batch) == answer_batch(g, QueryBatch.from_dense(dense))
    assert batch.tag(0) == "multiplicity(bundle 0)"
    assert batch.tag(27) == "location(bundle 1, test 7)"
    assert np.array_equal(batch.query(27), dense[27])


def test_monotone_under_superset(rng):
    for _ in range(40):
        g = random_hypergraph(rng, 9, 3, 0.1)
        s = rng.random(9) < 0.5
        sup = s | (rng.random(9) < 0.3)
        assert answer_query(g, s) <= answer_query(g, sup)


def test_counter_and_empty_batch():
    g = Hypergraph(5, 2, [(0, 1)])
    o = Oracle(g)
    out = o.answer_batch(QueryBatch(5))
    assert len(out) == 0 and o.queries_answered == 0
    o.answer_batch(QueryBatch.from_dense(np.ones((7, 5), bool)))
    o.answer_batch(QueryBatch.from_dense(np.zeros((3, 5), bool)))
    assert o.queries_answered == 10
    assert not hasattr(o, "edges") and not hasattr(o, "g")


def test_vertex_count_mismatch():
    with pytest.raises(ContractError):
        answer_batch(Hypergraph(5, 2), QueryBatch.from_dense(np.ones((1, 6), bool)))


def test_bernoulli_positive_rate():
    g = Hypergraph(4, 2, [(0, 1)])
    rows = np.array([[1, 1, 0, 0], [1, 0, 1, 1], [1, 1, 1, 1], [0, 0, 0, 0]], bool)
    out = answer_batch(g, QueryBatch.from_dense(rows))
    assert out.bits.tolist() == [True, False, True, False]
    assert out.bernoulli_positive_rate == 0.5


@pytest.mark.parametrize("n", [1, 7, 8, 9, 64, 65])
def test_transcript_roundtrip(tmp_path, rng, n):
    rows = rng.random((13, n)) < 0.5
    bits = rng.random(13) < 0.5
    batch = QueryBatch.from_dense(rows)
    path = tmp_path / "t.hqb"
    write_transcript(path, batch, QueryOutcomes(bits, 0.25))
    raw = path.read_bytes()
    assert raw[:4] == MAGIC
    assert len(raw) == 4 + 8 + 8 + 1 + 13 * ((n + 7) // 8) + 2
    back, out = read_transcript(path)
    assert np.array_equal(back.dense(), rows)
    assert np.array_equal(out.bits, bits)
    assert out.bernoulli_positive_rate == 0.25


def test_transcript_keeps_provenance(tmp_path, rng):
    from hyperlearn.design import make_grotesque_design

    params = ModelParams.from_theta(60, 2, 0.3)
    _, _, batch = make_grotesque_design(params, rng=rng)
    path = tmp_path / "g.hqb"
    write_transcript(path, batch)
    back, out = read_transcript(path)
    assert out is None
    assert [s.__dict__ for s in back.segments()] == [s.__dict__ for s in batch.segments()]
    g = sample_hypergraph(params, rng)
    assert answer_batch(g, back) == answer_batch(g, batch)


def test_transcript_bad_magic(tmp_path):
    p = tmp_path / "x.hqb"
    p.write_bytes(b"NOPE" + bytes(17))
    with pytest.raises(ContractError):
        read_transcript(p)
