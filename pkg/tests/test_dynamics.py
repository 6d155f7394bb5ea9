import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gainflow as gf
from gainflow.dynamics import DynamicsError, SelectionRule

UNIFORM3 = np.full(3, 1.0 / 3.0)
PI = np.array([0.0, 1.0, 2.0])


def random_case(seed, n):
    rng = np.random.default_rng(seed)
    return rng.dirichlet(np.ones(n)), rng.uniform(-5, 5, n)


class TestSelectionRule:
    def test_uniform_over_best(self):
        r = SelectionRule()
        y = r.select([0, 1, 2], np.array([1.0, 1.0, 0.0]))
        assert np.allclose(y, [0.5, 0.5, 0.0])

    def test_lowest_index(self):
        r = SelectionRule(mixing="lowest_index")
        y = r.select([0, 1, 2], np.array([1.0, 1.0, 0.0]))
        assert np.allclose(y, [1.0, 0.0, 0.0])

    def test_given_weights(self):
        r = SelectionRule(mixing="given_weights", weights=(1.0, 3.0, 0.0))
        y = r.select([0, 1], np.array([1.0, 1.0, 5.0]))
        assert np.allclose(y, [0.25, 0.75, 0.0])

    def test_tie_tolerance(self):
        r = SelectionRule(tie_tol=0.5)
        y = r.select([0, 1], np.array([1.0, 0.6]))
        assert np.allclose(y, [0.5, 0.5])

    def test_bad_mixing_rejected(self):
        with pytest.raises(DynamicsError):
            SelectionRule(mixing="coin_flip")


class TestPerActionTransition:
    def test_brd(self):
        dyn = gf.make_dynamic("brd", 3)
        assert np.allclose(dyn.per_action_transition(0, PI), [-1.0, 0.0, 1.0])

    def test_smith(self):
        dyn = gf.make_dynamic("smith:1.0", 3)
        assert np.allclose(dyn.per_action_transition(0, PI), [-1.5, 0.5, 1.0])

    def test_best_action_is_stationary(self):
        for spec in ("brd", "smith:1.0", "ordinal:0.5", "partitioned"):
            dyn = gf.make_dynamic(spec, 3)
            z = dyn.per_action_transition(2, PI)
            assert np.allclose(z, 0.0, atol=1e-12), spec

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=30, deadline=None)
    def test_transitions_sum_to_zero(self, seed):
        _, pi = random_case(seed, 4)
        for spec in ("brd", "tempered_brd", "smith:1.0", "pairwise", "ordinal:0.5"):
            dyn = gf.make_dynamic(spec, 4)
            for a in range(4):
                assert abs(dyn.per_action_transition(a, pi).sum()) < 1e-12


class TestVelocity:
    def test_brd_from_vertex(self):
        dyn = gf.make_dynamic("brd", 3)
        assert np.allclose(dyn.velocity([1.0, 0.0, 0.0], PI), [-1.0, 0.0, 1.0])

    def test_replicator(self):
        dyn = gf.make_dynamic("replicator", 3)
        v = dyn.velocity([0.5, 0.5, 0.0], [1.0, 0.0, 0.0])
        assert np.allclose(v, [0.25, -0.25, 0.0])

    def test_replicator_face_invariance(self):
        dyn = gf.make_dynamic("replicator", 3)
        v = dyn.velocity([0.0, 0.4, 0.6], np.array([100.0, 1.0, 0.0]))
        assert v[0] == 0.0

    def test_replicator_vertex_stationary(self):
        dyn = gf.make_dynamic("replicator", 3)
        assert np.allclose(dyn.velocity([1.0, 0.0, 0.0], PI), 0.0)

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=40, deadline=None)
    def test_mass_conservation_and_boundary(self, seed):
        x, pi = random_case(seed, 4)
        x[seed % 4] = 0.0
        x = x / x.sum()
        for spec in ("brd", "tempered_brd", "smith:1.0", "pairwise",
                     "ordinal:0.5", "replicator", "bnn"):
            dyn = gf.make_dynamic(spec, 4)
            v = dyn.velocity(x, pi)
            assert abs(v.sum()) < 1e-10, spec
            for a in range(4):
                if x[a] == 0.0:
                    assert v[a] >= -1e-12, spec

    def test_singleton_fast_path_matches_generic(self):
        # the same uniform-singleton distribution written as explicit tables
        # goes through the generic loop; the fields must agree
        rng = np.random.default_rng(1)
        fast = gf.make_dynamic("smith:1.0", 4)
        tables = {a: [((b,), 1.0 / 3) for b in range(4) if b != a] for a in range(4)}
        proto = gf.RevisionProtocol(
            gf.AvailabilityDistribution.explicit(4, tables),
            gf.CostDistribution.linear(1.0, cap=None))
        slow = gf.RationalizableDynamic(proto)
        for _ in range(20):
            x = rng.dirichlet(np.ones(4))
            pi = rng.uniform(-5, 5, 4)
            assert np.allclose(fast.velocity(x, pi), slow.velocity(x, pi), atol=1e-12)

    def test_bnn_velocity(self):
        dyn = gf.make_dynamic("bnn", 3)
        v = dyn.velocity(UNIFORM3, PI)
        # excess payoffs (-1, 0, 1); only action 2 flows in, at rate 1/3
        want = np.array([0.0, 0.0, 1.0 / 3]) - UNIFORM3 * (1.0 / 3)
        assert np.allclose(v, want)

    def test_stationary_at_equilibrium(self):
        game = gf.good_rps(1.0, 0.9)
        pi = gf.payoff(game, UNIFORM3)
        for spec in ("brd", "smith:1.0", "pairwise", "ordinal:0.5", "replicator", "bnn"):
            v = gf.make_dynamic(spec, 3).velocity(UNIFORM3, pi)
            assert np.abs(v).max() < 1e-9, spec


class TestConstruction:
    def test_invalid_protocol_rejected(self):
        with pytest.raises(DynamicsError):
            gf.RationalizableDynamic(gf.broken_fixture_i())

    def test_override_recorded(self):
        dyn = gf.RationalizableDynamic(gf.broken_fixture_i(), allow_invalid=True)
        assert dyn.validation_overridden
        assert not dyn.assumption_report.all_pass

    def test_valid_protocol_not_flagged(self):
        dyn = gf.RationalizableDynamic(gf.make_protocol("smith", 3))
        assert not dyn.validation_overridden

    def test_make_dynamic_kinds(self):
        assert gf.make_dynamic("replicator", 3).kind == "replicator"
        assert gf.make_dynamic("bnn", 3).kind == "birth_death"
        assert gf.make_dynamic("smith:1.0", 3).kind == "rationalizable"
        with pytest.raises(DynamicsError):
            gf.make_dynamic("replicator")

    def test_birth_death_requires_shared_availability(self):
        with pytest.raises(DynamicsError):
            gf.BirthDeathDynamic(
                gf.AvailabilityDistribution.uniform_singleton(3),
                gf.CostDistribution.zero_cost())
