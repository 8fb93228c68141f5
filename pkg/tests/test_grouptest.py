import itertools
import math

import numpy as np
import pytest

from hyperlearn.errors import ContractError
from hyperlearn.grouptest import (
    GroupTestInstance,
    gt_decode,
    locate,
    location_inclusion,
    make_pools,
    to_detection_query,
)
from hyperlearn.model import Hypergraph
from hyperlearn.oracle import answer_query


def test_inclusion_rate():
    assert location_inclusion(2) == pytest.approx(0.2928932188, abs=1e-10)
    for k in range(1, 7):
        assert (1 - location_inclusion(k)) ** k == pytest.approx(0.5)


def test_reduction_exhaustive():
    # on a 6-vertex bundle with one planted pair, every pool S gives
    # [S hits the edge] == 1 - detection(bundle \ S)
    n = 6
    bundle = np.ones(n, bool)
    for edge in itertools.combinations(range(n), 2):
        g = Hypergraph(n, 2, [edge])
        for bits in range(1 << n):
            pool = np.array([(bits >> i) & 1 for i in range(n)], bool)
            hit = bool(pool[list(edge)].any())
            assert hit == (1 - answer_query(g, to_detection_query(bundle, pool)))


def test_reduction_respects_bundle():
    bundle = np.array([1, 1, 0, 1], bool)
    assert to_detection_query(bundle, np.array([0, 1, 0, 0], bool)).tolist() == [True, False, False, True]
    with pytest.raises(ContractError):
        to_detection_query(bundle, np.array([0, 0, 1, 0], bool))


def test_negative_pool_rate(rng):
    k, size, t = 3, 40, 20_000
    pools = make_pools(size, t, location_inclusion(k), rng)
    neg = ~pools[:, :k].any(axis=1)
    assert abs(neg.mean() - 0.5) < 4 * math.sqrt(0.25 / t)


def test_decode_success_rate(rng):
    # 30 items, 2 defectives, 200 pools: failure needs a non-defective
    # to dodge all ~100 negative pools, far below 1/1000
    k, size, t_loc = 2, 30, 200
    rho = location_inclusion(k)
    ok = 0
    for _ in range(1000):
        defect = tuple(sorted(rng.choice(size, k, replace=False).tolist()))
        pools = make_pools(size, t_loc, rho, rng)
        out = pools[:, list(defect)].any(axis=1)
        ok += gt_decode(GroupTestInstance(np.arange(size), pools, k), out) == defect
    assert ok >= 999


def test_two_edges_in_bundle_fail():
    # bundle {0..3} with edges {0,1} and {2,3}; pools {0,2} and {1,3}
    # each break both edges so both detections are 0 and every item survives
    g = Hypergraph(4, 2, [(0, 1), (2, 3)])
    bundle = np.ones(4, bool)
    pools = np.array([[1, 0, 1, 0], [0, 1, 0, 1]], bool)
    answers = np.array([answer_query(g, to_detection_query(bundle, p)) for p in pools], bool)
    assert locate(np.arange(4), pools, answers, 2) is None


def test_locate_hand_built():
    # bundle {2,5,7,9} in global ids with edge {5,9}
    universe = np.array([2, 5, 7, 9])
    g = Hypergraph(10, 2, [(5, 9)])
    pools = np.array([[1, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], bool)
    answers = []
    for p in pools:
        q = np.zeros(10, bool)
        q[universe[~p]] = True
        answers.append(answer_query(g, q))
    assert answers == [1, 0, 1, 1, 0]
    assert locate(universe, pools, np.array(answers, bool), 2) == (5, 9)
    mask = np.zeros(10, bool)
    mask[universe] = True
    assert locate(mask, pools, np.array(answers, bool), 2) == (5, 9)


def test_inconsistent_outcomes_rejected():
    # single survivor set {0,1} but a positive pool that hits neither
    pools = np.array([[0, 0, 1], [0, 0, 1], [0, 0, 0]], bool)
    inst = GroupTestInstance(np.arange(3), pools, 2)
    assert gt_decode(inst, np.array([False, False, True])) is None
