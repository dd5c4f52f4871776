import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from credal_kinematics import (
    CredalSet,
    DomainError,
    Event,
    GeneratedAlgebra,
    NullConditioningError,
    ProbMeasure,
    ReweightPolicy,
    SampleSpace,
    StationarySequenceSpec,
    TransformationMap,
    choquet_integral,
    drive_updates_countable,
    empirical_average,
    ergodic_interval_check,
    finite_sigma_update,
    jeffrey_update,
    lemma2_bounds_check,
    run_orbit,
    slln_check,
    uniform_on_partition,
)
from credal_kinematics.ergodic import limit_function, orbit_cycle, tail_fluctuations
from credal_kinematics.jeffrey import PartitionReweight, block_masses, reassessed_measure

from conftest import random_credal


def _cycle_invariant_credal(rng, cycles, n, k):
    """Members constant on each cycle, hence invariant under the cycle map."""
    members = []
    for _ in range(k):
        w = np.zeros(n)
        for c in cycles:
            w[c] = rng.random() / len(c)
        members.append(ProbMeasure(w / w.sum()))
    return CredalSet(members)


def _direct_average(f, T, start, n):
    w, total = start, []
    for _ in range(n):
        total.append(f[w])
        w = T(w)
    return math.fsum(total) / n


class TestOrbit:
    def test_identity(self):
        run = run_orbit(SampleSpace.line(3), TransformationMap.identity(3), 1, 5)
        assert run.orbit == (1,) * 5 and not run.covers_space

    def test_identity_single_point_space(self):
        assert run_orbit(SampleSpace.line(1), TransformationMap.identity(1), 0, 5).covers_space

    def test_full_cycle(self):
        assert run_orbit(SampleSpace.line(5), TransformationMap.cycle(5), 0, 5).covers_space

    def test_two_cycles_never_cover(self):
        T = TransformationMap.from_cycles(5, [[0, 1], [2, 3, 4]])
        assert not any(run_orbit(SampleSpace.line(5), T, 0, n).covers_space for n in range(1, 30))

    def test_rejects_bad_start(self):
        with pytest.raises(DomainError):
            run_orbit(SampleSpace.line(3), TransformationMap.cycle(3), 3, 4)

    def test_cycle_structure(self):
        T = TransformationMap([1, 2, 3, 1])
        assert orbit_cycle(T, 0) == (1, (1, 2, 3))


class TestEmpiricalAverage:
    def test_constant(self):
        run = run_orbit(SampleSpace.line(4), TransformationMap.cycle(4), 0, 7)
        assert empirical_average([2.5] * 4, run) == 2.5

    def test_full_cycle_symmetry(self):
        run = run_orbit(SampleSpace.line(5), TransformationMap.cycle(5), 0, 5)
        assert empirical_average([0, 1, 2, 3, 4], run) == 2.0

    @given(st.integers(1, 8), st.integers(1, 60), st.data())
    def test_partial_cycles(self, n, steps, data):
        f = data.draw(st.lists(st.floats(-10, 10), min_size=n, max_size=n))
        T = TransformationMap.cycle(n)
        run = run_orbit(SampleSpace.line(n), T, 0, steps)
        assert empirical_average(f, run) == pytest.approx(_direct_average(f, T, 0, steps), abs=1e-12)

    @given(st.integers(1, 7).flatmap(lambda n: st.lists(st.integers(0, n - 1), min_size=n, max_size=n)),
           st.data())
    def test_limit_function_is_invariant(self, forward, data):
        T = TransformationMap(forward)
        f = data.draw(st.lists(st.floats(-5, 5), min_size=len(forward), max_size=len(forward)))
        fs = limit_function(f, T)
        assert all(fs[T(w)] == fs[w] for w in range(len(forward)))


class TestSandwich:
    def test_singleton_atomic_full_cycle(self):
        n = 4
        T = TransformationMap.cycle(n)
        space = SampleSpace.line(n)
        run = run_orbit(space, T, 0, n)
        r = lemma2_bounds_check([1.0, 0.0, 2.0, 1.0], run, CredalSet([ProbMeasure.uniform(n)]), T, space=space)
        assert r.lower_sum == r.average == r.upper_sum
        assert r.holds and r.asserted

    def test_doubled_uniform(self):
        T = TransformationMap.cycle(5)
        space = SampleSpace.ring(5)
        cs = CredalSet([ProbMeasure.uniform(5), ProbMeasure.uniform(5)])
        run = run_orbit(space, T, 2, 5)
        r = lemma2_bounds_check([3.0, 1.0, 4.0, 1.0, 5.0], run, cs, T, space=space)
        assert r.holds and r.lower_sum == pytest.approx(r.average, abs=1e-15)

    def test_gates_fail_for_moving_point_mass(self):
        T = TransformationMap.cycle(4)
        space = SampleSpace.line(4)
        cs = CredalSet([ProbMeasure.point_mass(4, 0), ProbMeasure.uniform(4)])
        r = lemma2_bounds_check([1.0, 0.0, 2.0, 1.0], run_orbit(space, T, 0, 4), cs, T, space=space)
        assert not r.asserted and not r.violation

    def test_needs_partition_or_space(self):
        T = TransformationMap.cycle(3)
        with pytest.raises(DomainError):
            lemma2_bounds_check([1.0] * 3, run_orbit(None, T, 0, 3), ProbMeasure.uniform(3), T)

    def test_containment_when_all_premises_hold(self, rng):
        # gates plus distinct observations and non-negative f: containment is guaranteed
        checked = 0
        for _ in range(300):
            n = int(rng.integers(2, 8))
            cycles = [list(range(n))] if rng.random() < 0.5 else [list(range(n // 2)), list(range(n // 2, n))]
            cycles = [c for c in cycles if c]
            T = TransformationMap.from_cycles(n, cycles)
            space = SampleSpace.from_points(sorted(rng.choice(50, n, replace=False).tolist()))
            cs = _cycle_invariant_credal(rng, cycles, n, int(rng.integers(1, 4)))
            f = rng.random(n) * 3
            start = int(rng.integers(n))
            for steps in range(1, n + 1):
                r = lemma2_bounds_check(f, run_orbit(space, T, start, steps), cs, T, space=space)
                if r.asserted and all(p.passed for p in r.premises):
                    checked += 1
                    assert r.holds
        assert checked > 50


class TestBlockUniform:
    def test_mass_per_block(self):
        from credal_kinematics import coarsest_partition
        p = coarsest_partition(SampleSpace.line(5), [0, 4])
        u = uniform_on_partition(p)
        assert [u(b) for b in p.blocks] == [0.5, 0.5]


class TestDriveUpdates:
    def test_atomic_fixed_point(self):
        cs = CredalSet([ProbMeasure([0.1, 0.2, 0.3, 0.4]), ProbMeasure.uniform(4)])
        trace = drive_updates_countable(cs, SampleSpace.line(4), TransformationMap.cycle(4), 0, [1, 1, 1],
                                        initial_observations=[0, 1, 2, 3])
        assert trace.convergence_index == 0
        assert all(s.credal_set.same_members(cs) for s in trace.steps)

    def test_singleton_matches_direct_updates(self, rng):
        space = SampleSpace.line(6)
        T = TransformationMap.cycle(6)
        P = ProbMeasure(rng.dirichlet(np.ones(6)))
        policy = ReweightPolicy("lrfj", pivot=0, pivot_mass=0.4)
        trace = drive_updates_countable(CredalSet([P]), space, T, 0, [1, 2, 2], policy)
        current = P
        for a, b in zip(trace.steps, trace.steps[1:]):
            reas = reassessed_measure(current, a.partition, b.partition)
            rw = policy.reweight(reas, b.partition)
            current = jeffrey_update(reas, rw)
            assert len(b.credal_set) == 1
            assert np.array_equal(b.credal_set[0].weights, current.weights)

    def test_worked_chain(self):
        space = SampleSpace.from_points([0, 10, 20, 21, 22, 23])
        T = TransformationMap([1, 2, 4, 0, 5, 3])
        cs = CredalSet([ProbMeasure([0.2, 0.2, 0.15, 0.15, 0.15, 0.15])])
        policy = ReweightPolicy("lrfj", pivot=2, pivot_mass=0.5)
        trace = drive_updates_countable(cs, space, T, 0, [2, 2], policy, initial_observations=[0])
        s1, s2 = trace.steps[1], trace.steps[2]
        assert s1.reassessed_masses[0] == pytest.approx((1 / 3, 1 / 3, 1 / 3), abs=1e-15)
        assert tuple(block_masses(s1.credal_set[0], s1.partition)) == pytest.approx((0.25, 0.25, 0.5), abs=1e-15)
        assert s2.reassessed_masses[0] == pytest.approx((0.25, 0.25, 0.5 / 3, 0.5 / 3, 0.5 / 3), abs=1e-15)

    def test_contracting_fixture(self):
        cs = CredalSet([ProbMeasure([0.1, 0.4, 0.5]), ProbMeasure([0.8, 0.1, 0.1])])
        trace = drive_updates_countable(cs, SampleSpace.line(3), TransformationMap.cycle(3), 0, [1, 1, 1, 1])
        labels = [s.behavior.label for s in trace.steps[1:]]
        assert labels[:2] == ["contraction", "contraction"]
        assert trace.convergence_index == 2
        assert trace.refines_until_atomic()

    def test_null_conditioning_reports_member(self):
        cs = CredalSet([ProbMeasure.uniform(3), ProbMeasure([1.0, 0.0, 0.0])])
        policy = ReweightPolicy("lrfj", pivot=2, pivot_mass=0.5)
        with pytest.raises(NullConditioningError) as info:
            drive_updates_countable(cs, SampleSpace.line(3), TransformationMap.cycle(3), 0, [2], policy,
                                    initial_observations=[0, 1])
        assert info.value.member == 1

    @given(st.integers(2, 6), st.integers(0, 2 ** 32 - 1))
    def test_partitions_nest_until_atomic_on_distinct_points(self, n, seed):
        rng = np.random.default_rng(seed)
        cs = random_credal(rng, n, 2)
        # observations walk outward from 0 along a line, so borders never move
        T = TransformationMap.cycle(n)
        trace = drive_updates_countable(cs, SampleSpace.line(n), T, 0, [1] * (n + 1))
        assert trace.refines_until_atomic()
        assert trace.steps[-1].partition.is_atomic()
        assert trace.convergence_index is not None


class TestFiniteSigma:
    def test_power_set(self):
        P = ProbMeasure([0.1, 0.2, 0.7])
        got = finite_sigma_update(P, GeneratedAlgebra.power_set(3), [0.3, 0.3, 0.4])
        assert list(got.weights) == [0.3, 0.3, 0.4]

    def test_old_masses(self):
        P = ProbMeasure([0.1, 0.3, 0.4, 0.2])
        alg = GeneratedAlgebra([Event.of(0, 1), Event.of(2, 3)], 4)
        got = finite_sigma_update(P, alg, [0.4, 0.6])
        assert np.allclose(got.weights, P.weights, atol=1e-15, rtol=0)

    def test_atomwise_scaling(self):
        P = ProbMeasure([0.1, 0.3, 0.4, 0.2])
        alg = GeneratedAlgebra([Event.of(0, 1), Event.of(2, 3)], 4)
        got = finite_sigma_update(P, alg, [0.5, 0.5])
        assert got.weights == pytest.approx([0.125, 0.375, 1 / 3, 1 / 6], abs=1e-15)

    def test_matches_partition_update(self, rng):
        P = ProbMeasure(rng.dirichlet(np.ones(5)))
        from credal_kinematics import Partition
        part = Partition.from_pairs([(0, [0, 1]), (2, [2, 3, 4])], 5)
        got = finite_sigma_update(P, part.algebra(), [0.7, 0.3])
        assert np.array_equal(got.weights, jeffrey_update(P, PartitionReweight(part, (0.7, 0.3))).weights)


class TestErgodicInterval:
    @pytest.mark.parametrize("n", [4, 5, 7])
    def test_singleton_uniform_cycle(self, n, rng):
        f = rng.uniform(-1, 2, n)
        r = ergodic_interval_check(f, TransformationMap.cycle(n), 0, CredalSet([ProbMeasure.uniform(n)]), 100 * n)
        assert r.verdict == "Birkhoff equality"
        assert abs(r.average - math.fsum(f) / n) <= 1e-9

    def test_invariant_ergodic_credal(self, rng):
        cycles = [[0, 1], [2, 3, 4, 5]]
        T = TransformationMap.from_cycles(6, cycles)
        cs = CredalSet([ProbMeasure([0.5, 0.5, 0, 0, 0, 0]), ProbMeasure([0, 0, 0.25, 0.25, 0.25, 0.25]),
                        ProbMeasure.uniform(6)])
        f = rng.uniform(-2, 2, 6)
        for start in range(6):
            r = ergodic_interval_check(f, T, start, cs, 10_000)
            fs = limit_function(f, T)
            lo = min(P.expectation(fs) for P in cs)
            assert r.verdict == "containment"
            assert r.bounds[0][1] == pytest.approx(choquet_integral(cs, fs), abs=1e-12)
            assert lo >= r.bounds[0][1] - 1e-12

    def test_identity_map_countable(self):
        f = [1.0, 3.0, 2.0]
        cs = CredalSet([ProbMeasure.point_mass(3, 1)])
        r = ergodic_interval_check(f, TransformationMap.identity(3), 1, cs, 50, mode="countable")
        assert r.limit == 3.0 and r.average == 3.0

    def test_gate_failure_no_claim(self):
        cs = CredalSet([ProbMeasure.point_mass(4, 0), ProbMeasure.uniform(4)])
        r = ergodic_interval_check([1.0, 0.0, 2.0, 1.0], TransformationMap.cycle(4), 0, cs, 100)
        assert r.verdict == "gates failed, no claim" and r.contained is None

    def test_unknown_mode(self):
        with pytest.raises(DomainError):
            ergodic_interval_check([1.0], TransformationMap.identity(1), 0, ProbMeasure([1.0]), 5, mode="other")

    def test_tail_fluctuation_aligned_vs_raw(self):
        f = [1.0, 0.0, 2.0]
        aligned, raw = tail_fluctuations(f, TransformationMap.cycle(3), 0, 3000)
        assert aligned <= 1e-12 < raw


class TestSlln:
    def test_singleton_exact(self):
        f = [2.0, -1.0, 0.5, 4.0]
        spec = StationarySequenceSpec(f, TransformationMap.cycle(4), 400)
        r = slln_check(spec, CredalSet([ProbMeasure.uniform(4)]))
        assert r.verdict == "equality"
        assert all(abs(a - 1.375) <= 1e-9 for a in r.averages)

    def test_constant(self):
        spec = StationarySequenceSpec([2.0] * 5, TransformationMap.cycle(5), 7)
        r = slln_check(spec, CredalSet([ProbMeasure.uniform(5)]))
        assert r.lower_integral == r.upper_integral == 2.0
        assert all(a == pytest.approx(2.0, abs=1e-15) for a in r.averages)

    def test_contamination_containment(self):
        n, eps = 5, 0.2
        cs = CredalSet([ProbMeasure((1 - eps) / n + eps * np.eye(n)[i]) for i in range(n)])
        f = [3.0, -1.0, 0.5, 2.0, 0.0]
        r = slln_check(StationarySequenceSpec(f, TransformationMap.cycle(n), 1000), cs)
        assert r.verdict == "containment"
        # brute force: contamination lower integral = (1 - eps) mean + eps min
        assert r.lower_integral == pytest.approx((1 - eps) * np.mean(f) + eps * min(f), abs=1e-12)
        assert r.upper_integral == pytest.approx((1 - eps) * np.mean(f) + eps * max(f), abs=1e-12)

    def test_non_invariant_gated(self):
        cs = CredalSet([ProbMeasure.point_mass(3, 0), ProbMeasure.uniform(3)])
        r = slln_check(StationarySequenceSpec([1.0, 2.0, 3.0], TransformationMap.cycle(3), 30), cs)
        assert r.verdict == "gates failed, no claim"

    def test_terms_follow_shift(self):
        T = TransformationMap.cycle(4)
        spec = StationarySequenceSpec([0.0, 1.0, 2.0, 3.0], T, 4)
        assert list(spec.term(2)) == [1.0, 2.0, 3.0, 0.0]
        with pytest.raises(DomainError):
            spec.term(0)
