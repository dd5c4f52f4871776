import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from credal_kinematics import (
    CredalSet,
    DomainError,
    Event,
    LowerUpperView,
    ProbMeasure,
    TransformationMap,
    check_subadditive_upper,
    check_superadditive_lower,
    choquet_integral,
    in_core,
    invariant_events,
    is_continuous_at_omega,
    is_convex,
    is_ergodic,
    is_invariant,
    is_strongly_invariant,
)

from conftest import all_subsets, credal_sets, member_weights, oracle_lower, oracle_prob, oracle_upper

SURVEY = CredalSet([
    ProbMeasure([0.2, 0.3, 0.4, 0.1]),
    ProbMeasure([0.4, 0.05, 0.45, 0.1]),
    ProbMeasure([0.45, 0.1, 0.35, 0.1]),
])


def _oracle_choquet(members, f, side="lower"):
    """Layer-cake integral by numerical quadrature of t -> nu({f >= t})."""
    n = len(f)
    nu = oracle_lower if side == "lower" else oracle_upper

    def level(t):
        return nu(members, [i for i in range(n) if f[i] >= t])

    def integrate(g, a, b):
        if b <= a:
            return 0.0
        inner = [x for x in sorted(set(f)) if a < x < b] or None
        return quad(g, a, b, points=inner, limit=200)[0]

    lo, hi = min(f), max(f)
    pos = integrate(level, 0.0, max(hi, 0.0))
    neg = integrate(lambda t: level(t) - 1.0, min(lo, 0.0), 0.0)
    return pos + neg


def _oracle_core(members, p):
    n = len(p)
    return all(oracle_prob(p, s) >= oracle_lower(members, s) - 1e-9 for s in all_subsets(n))


class TestLowerUpper:
    def test_survey_interval(self):
        v = LowerUpperView(SURVEY)
        assert v.lower(Event.of(0, 1)) == 0.45
        assert v.upper(Event.of(0, 1)) == 0.55

    def test_singleton(self):
        P = ProbMeasure([0.3, 0.7])
        v = LowerUpperView(CredalSet([P]))
        assert v.lower(Event.of(0)) == v.upper(Event.of(0)) == P(Event.of(0))

    def test_two_measures(self):
        v = LowerUpperView(CredalSet([ProbMeasure([0.2, 0.8]), ProbMeasure([0.6, 0.4])]))
        assert (v.lower(Event.of(0)), v.upper(Event.of(0))) == (0.2, 0.6)

    @given(credal_sets(max_size=6))
    def test_tables_match_oracle(self, cs):
        v = LowerUpperView(cs)
        members = member_weights(cs)
        lo, up = v.lower_table(), v.upper_table()
        for s in all_subsets(cs.size):
            m = Event(s).mask
            assert abs(lo[m] - oracle_lower(members, s)) <= 1e-12
            assert abs(up[m] - oracle_upper(members, s)) <= 1e-12
            assert lo[m] == v.lower(Event(s))

    @given(credal_sets(max_size=8))
    def test_axioms_and_conjugacy(self, cs):
        v = LowerUpperView(cs)
        n = cs.size
        full = (1 << n) - 1
        lo, up = v.lower_table(), v.upper_table()
        assert lo[0] == 0.0 and up[0] == 0.0
        assert abs(lo[full] - 1.0) <= 1e-9 and abs(up[full] - 1.0) <= 1e-9
        masks = np.arange(1 << n)
        assert np.all(np.abs(up - (1.0 - lo[full ^ masks])) <= 1e-9)
        assert np.all(lo <= up + 1e-12)

    def test_from_lower_rejects_non_monotone(self):
        table = np.array([0.0, 0.5, 0.2, 1.0])
        with pytest.raises(DomainError):
            LowerUpperView.from_lower(2, [0.0, 0.5, 0.6, 0.4])
        assert LowerUpperView.from_lower(2, table).upper(Event.of(0)) == pytest.approx(0.8)


class TestAdditivity:
    def test_singleton_equality(self):
        v = LowerUpperView(CredalSet([ProbMeasure([0.1, 0.2, 0.3, 0.4])]))
        assert check_superadditive_lower(v) and check_subadditive_upper(v)

    def test_survey(self):
        v = LowerUpperView(SURVEY)
        assert check_superadditive_lower(v) and check_subadditive_upper(v)

    def test_detects_violation(self):
        # a tabulated lower that is not superadditive
        table = np.array([0.0, 0.6, 0.6, 1.0])
        v = LowerUpperView.from_lower(2, table)
        assert not check_superadditive_lower(v)

    @given(credal_sets(max_size=8))
    def test_random_credal_sets(self, cs):
        v = LowerUpperView(cs)
        assert check_superadditive_lower(v) and check_subadditive_upper(v)


class TestCore:
    def test_members_in_core(self):
        v = LowerUpperView(SURVEY)
        assert all(in_core(P, v) for P in SURVEY)

    def test_point_mass_outside(self):
        cs = CredalSet([ProbMeasure([0.5, 0.3, 0.2]), ProbMeasure([0.4, 0.4, 0.2])])
        P = ProbMeasure.point_mass(3, 0)
        assert not _oracle_core(member_weights(cs), [1.0, 0.0, 0.0])
        assert not in_core(P, LowerUpperView(cs))

    def test_uniform_against_survey(self):
        u = [0.25] * 4
        assert in_core(ProbMeasure(u), LowerUpperView(SURVEY)) == _oracle_core(member_weights(SURVEY), u)

    @given(credal_sets(max_size=6), st.data())
    def test_mixtures_in_core(self, cs, data):
        lam = np.array(data.draw(st.lists(st.floats(0.0, 1.0), min_size=len(cs), max_size=len(cs))))
        if lam.sum() == 0:
            return
        lam /= lam.sum()
        P = ProbMeasure(lam @ cs.matrix)
        assert in_core(P, LowerUpperView(cs))


class TestInvariance:
    def test_uniform_cycle(self):
        assert is_invariant(ProbMeasure.uniform(5), TransformationMap.cycle(5))

    def test_point_mass_moves(self):
        assert not is_invariant(ProbMeasure.point_mass(3, 0), TransformationMap.cycle(3))

    def test_strong_equals_plain_for_measures(self, rng):
        for _ in range(1000):
            n = int(rng.integers(1, 7))
            T = TransformationMap(rng.permutation(n).tolist())
            if rng.random() < 0.5:
                P = ProbMeasure(rng.dirichlet(np.ones(n)))
            else:
                # invariant by construction: constant on the cycles of T
                w = np.zeros(n)
                for block in invariant_events(T).generator_blocks:
                    w[list(block.members)] = rng.random()
                P = ProbMeasure(w / w.sum())
            v = LowerUpperView(CredalSet([P]))
            assert is_invariant(v, T) == is_strongly_invariant(v, T)

    def test_identity_every_event(self):
        s = invariant_events(TransformationMap.identity(3))
        assert [b.members for b in s.generator_blocks] == [(0,), (1,), (2,)]
        assert len(s.invariant_events) == 8

    def test_single_cycle_trivial(self):
        s = invariant_events(TransformationMap.cycle(5))
        assert {e.members for e in s.invariant_events} == {(), (0, 1, 2, 3, 4)}

    def test_two_cycles(self):
        T = TransformationMap.from_cycles(5, [[0, 1], [2, 3, 4]])
        got = {e.members for e in invariant_events(T).invariant_events}
        brute = {s for s in all_subsets(5) if set(T.preimage(Event(s)).members) == set(s)}
        assert got == brute == {(), (0, 1), (2, 3, 4), (0, 1, 2, 3, 4)}

    @given(st.integers(1, 7).flatmap(lambda n: st.lists(st.integers(0, n - 1), min_size=n, max_size=n)))
    def test_invariant_events_brute_force(self, forward):
        T = TransformationMap(forward)
        got = {e.members for e in invariant_events(T).invariant_events}
        brute = {s for s in all_subsets(len(forward)) if set(T.preimage(Event(s)).members) == set(s)}
        assert got == brute


class TestErgodicity:
    def test_uniform_single_cycle(self):
        assert is_ergodic(ProbMeasure.uniform(4), TransformationMap.cycle(4))

    def test_uniform_two_cycles(self):
        T = TransformationMap.from_cycles(5, [[0, 1], [2, 3, 4]])
        assert not is_ergodic(ProbMeasure.uniform(5), T)

    def test_constructed_credal(self):
        T = TransformationMap.from_cycles(4, [[0, 1], [2, 3]])
        cs = CredalSet([ProbMeasure([0.5, 0.5, 0, 0]), ProbMeasure([0, 0, 0.5, 0.5])])
        assert is_ergodic(LowerUpperView(cs), T)


class TestConvexity:
    def test_singleton(self):
        assert is_convex(LowerUpperView(CredalSet([ProbMeasure([0.2, 0.3, 0.5])])))

    def test_two_measures_three_outcomes(self):
        cs = CredalSet([ProbMeasure([0.5, 0.5, 0.0]), ProbMeasure([0.0, 0.5, 0.5])])
        members = member_weights(cs)
        subsets = [set(s) for s in all_subsets(3)]

        def lo(s):
            return oracle_lower(members, sorted(s))

        brute = all(lo(a | b) + lo(a & b) >= lo(a) + lo(b) - 1e-9 for a in subsets for b in subsets)
        assert is_convex(LowerUpperView(cs)) == brute

    def test_continuity(self):
        assert is_continuous_at_omega(LowerUpperView(SURVEY))


class TestChoquet:
    def test_indicator(self):
        v = LowerUpperView(SURVEY)
        f = [1.0, 1.0, 0.0, 0.0]
        assert choquet_integral(v, f) == v.lower(Event.of(0, 1))
        assert choquet_integral(v, f, "upper") == v.upper(Event.of(0, 1))

    def test_additive_reduction(self):
        P = ProbMeasure([0.1, 0.2, 0.3, 0.4])
        f = [2.0, -1.0, 0.5, 3.0]
        assert choquet_integral(CredalSet([P]), f) == pytest.approx(P.expectation(f), abs=1e-12)

    def test_two_measures(self):
        cs = CredalSet([ProbMeasure([0.2, 0.8]), ProbMeasure([0.6, 0.4])])
        assert choquet_integral(cs, [1.0, 0.0]) == pytest.approx(0.2, abs=1e-15)
        assert choquet_integral(cs, [0.0, 1.0]) == pytest.approx(0.4, abs=1e-15)
        got = choquet_integral(cs, [2.0, -1.0])
        assert got == pytest.approx(_oracle_choquet(member_weights(cs), [2.0, -1.0]), abs=1e-9)
        assert got == pytest.approx(min(P.expectation([2.0, -1.0]) for P in cs), abs=1e-12)

    @given(credal_sets(max_size=6), st.data(), st.sampled_from(["lower", "upper"]))
    def test_against_quadrature(self, cs, data, side):
        f = data.draw(st.lists(st.floats(-5, 5, allow_nan=False), min_size=cs.size, max_size=cs.size))
        got = choquet_integral(cs, f, side)
        assert got == pytest.approx(_oracle_choquet(member_weights(cs), f, side), abs=1e-7)

    @given(credal_sets(max_size=6), st.data())
    def test_lower_below_member_expectations(self, cs, data):
        f = data.draw(st.lists(st.floats(-5, 5, allow_nan=False), min_size=cs.size, max_size=cs.size))
        lo, hi = choquet_integral(cs, f), choquet_integral(cs, f, "upper")
        exps = [P.expectation(f) for P in cs]
        assert lo <= min(exps) + 1e-9 and hi >= max(exps) - 1e-9
