import math

import numpy as np
import pytest

from hyperlearn.design import (
    BernoulliDesignSpec,
    bernoulli_parameter,
    bundle_count,
    grotesque_spec,
    layout_from_batch,
    make_bernoulli_batch,
    make_grotesque_design,
    multiplicity_margin,
    multiplicity_queries,
    theorem_budget,
)
from hyperlearn.errors import ConfigurationError, RegimeError, RegimeWarning
from hyperlearn.model import ModelParams, expected_edges

# reference values computed independently at 30-digit precision
P_K2 = 0.1414213562
P_K3 = 0.3107232506
M_K2 = 0.1447492810


def test_bernoulli_parameter_examples():
    assert bernoulli_parameter(ModelParams.from_theta(100, 2, 0.5)) == pytest.approx(P_K2, abs=1e-10)
    assert bernoulli_parameter(ModelParams(n=100, k=3, q=1e-4)) == pytest.approx(P_K3, abs=1e-10)


def test_bernoulli_parameter_regime():
    with pytest.raises(RegimeError):
        bernoulli_parameter(ModelParams(n=5, k=2, q=0.5, nu=10.0))


def test_bernoulli_batch_statistics(rng):
    params = ModelParams.from_theta(100, 2, 0.5)
    batch = make_bernoulli_batch(params, BernoulliDesignSpec(3000, P_K2), rng, chunk=500)
    rows = batch.dense()
    assert rows.shape == (3000, 100)
    assert batch.stages() == {"bernoulli"}
    assert abs(rows.mean() - P_K2) < 4 * math.sqrt(P_K2 * (1 - P_K2) / rows.size)
    # consecutive queries are independent: pairwise agreement of adjacent rows
    agree = (rows[1:] & rows[:-1]).mean()
    assert abs(agree - P_K2**2) < 4 * math.sqrt(P_K2**2 / rows[1:].size)


def test_bernoulli_batch_seeded(rng):
    params = ModelParams.from_theta(50, 2, 0.5)
    spec = BernoulliDesignSpec(40, 0.2)
    a = make_bernoulli_batch(params, spec, np.random.default_rng(3)).dense()
    b = make_bernoulli_batch(params, spec, np.random.default_rng(3)).dense()
    assert np.array_equal(a, b)


class TestTheoremBudgets:
    def test_comp(self):
        assert theorem_budget("comp", ModelParams.from_theta(100, 2, 0.5)) == 1240

    def test_dd_equals_comp_at_half(self):
        p = ModelParams.from_theta(100, 2, 0.5)
        # max{θ, 1-θ, 1-θ/2, 1+θ/2-1/k} = 0.75 at k=2, θ=1/2
        assert theorem_budget("dd", p) == math.ceil(0.75 * 2 * math.e * 49.5 * math.log(100))

    def test_sss(self):
        assert theorem_budget("sss", ModelParams.from_theta(100, 2, 0.5)) == 620

    def test_floor_of_one(self):
        assert theorem_budget("sss", ModelParams(n=10, k=2, q=1e-12)) == 1

    def test_unknown(self):
        with pytest.raises(ConfigurationError):
            theorem_budget("grotesque", ModelParams.from_theta(100, 2, 0.5))


class TestGrotesqueSizes:
    def test_margin(self):
        assert multiplicity_margin(2) == pytest.approx(M_K2, abs=1e-10)

    def test_t_mul(self):
        assert multiplicity_queries(2, 0.01) == 506

    def test_bundle_count(self):
        assert bundle_count(2.0, 0.5) == 12
        assert bundle_count(10.0, 0.1) == math.ceil(40 * math.log(100))

    def test_small_m_bar(self):
        with pytest.raises(RegimeError):
            grotesque_spec(ModelParams(n=10, k=2, q=0.01))

    def test_regime_warning(self):
        with pytest.warns(RegimeWarning):
            grotesque_spec(ModelParams(n=20, k=2, q=0.5))

    def test_spec_roundtrip(self):
        spec = grotesque_spec(ModelParams.from_theta(150, 2, 0.4))
        assert type(spec).from_dict(spec.to_dict()) == spec
        assert spec.total_queries == spec.b * (spec.t_mul + spec.t_loc)


class TestGrotesqueDesign:
    @pytest.fixture
    def design(self, rng):
        params = ModelParams.from_theta(150, 2, 0.4)
        return params, *make_grotesque_design(params, rng=rng)

    def test_layout_invariants(self, design):
        params, spec, layout, batch = design
        assert layout.b == spec.b
        assert len(batch) == spec.total_queries
        layout.check(len(batch))
        for i, (ms, me) in enumerate(layout.mul_ranges):
            ls, le = layout.loc_ranges[i]
            assert me - ms == spec.t_mul and le - ls == spec.t_loc and me == ls

    def test_queries_stay_inside_bundle(self, design):
        _, _, layout, batch = design
        member = layout.membership()
        for block, start, stop in batch.block_ranges():
            assert np.array_equal(block.support, layout.supports[block.bundle])
            for i in (start, stop - 1):
                assert not (batch.query(i) & ~member[block.bundle]).any()

    def test_location_rows_complement_pools(self, design):
        _, _, layout, batch = design
        for block, _, _ in batch.block_ranges():
            if block.stage == "location":
                assert np.array_equal(block.rows, ~layout.pools[block.bundle])

    def test_multiplicity_inclusion_rate(self, design):
        _, spec, _, batch = design
        rows = np.concatenate([b.rows.ravel() for b in batch.blocks if b.stage == "multiplicity"])
        assert abs(rows.mean() - spec.r_mul) < 4 * math.sqrt(spec.r_mul * (1 - spec.r_mul) / rows.size)

    def test_bundle_sizes(self, design):
        params, spec, layout, _ = design
        sizes = np.array([s.size for s in layout.supports])
        mean = params.n * spec.r_inc
        se = math.sqrt(params.n * spec.r_inc * (1 - spec.r_inc) / sizes.size)
        assert abs(sizes.mean() - mean) < 4 * se

    def test_layout_recovered_from_batch(self, design):
        _, _, layout, batch = design
        back = layout_from_batch(batch)
        assert back.mul_ranges == layout.mul_ranges and back.loc_ranges == layout.loc_ranges
        assert all(np.array_equal(a, b) for a, b in zip(back.pools, layout.pools))

    def test_depends_only_on_params_and_seed(self):
        params = ModelParams.from_theta(80, 2, 0.4)
        _, _, a = make_grotesque_design(params, rng=np.random.default_rng(5))
        _, _, b = make_grotesque_design(params, rng=np.random.default_rng(5))
        assert np.array_equal(a.dense(), b.dense())


def test_expected_bundle_count_covers_edges():
    # each edge lands alone in a given bundle w.p. about 1/(2e m̄); b bundles leave it
    # uncovered w.p. exp(-b/(2e m̄)) which the union bound keeps small at the default δ
    params = ModelParams.from_theta(150, 2, 0.4)
    spec = grotesque_spec(params)
    m_bar = expected_edges(params)
    assert m_bar * math.exp(-spec.b / (4 * m_bar)) <= spec.delta_bundle + 1e-12
