"""Orbits, the update sequence along an orbit, and ergodic-average checks.

Every check that rests on hypotheses (invariance, ergodicity, core
membership, convexity) evaluates them first and lists them as gates in its
report.  A bound is only claimed when its gates pass; otherwise the verdict
says so and no containment is asserted.

On a finite space every orbit is eventually periodic, so the long-run
average ``f_star(w)`` is computed exactly as the mean of ``f`` over the cycle
that ``w`` falls into.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .capacities import (
    LowerUpperView,
    TransformationMap,
    as_view,
    choquet_integral,
    in_core,
    is_continuous_at_omega,
    is_convex,
    is_ergodic,
    is_invariant,
    is_strongly_invariant,
)
from .errors import DomainError, NullConditioningError
from .geometric import BehaviorLabel, classify_behavior
from .jeffrey import (
    LikelihoodSpec,
    PartitionReweight,
    block_masses,
    extended_jeffrey_pivot_mass,
    jeffrey_update,
    lrfj,
    reassessed_measure,
)
from .measures import (
    BoundedFunction,
    CredalSet,
    Event,
    ProbMeasure,
    SampleSpace,
    dtilde_step,
)
from .partitions import GeneratedAlgebra, Partition, coarsest_partition, refine

CONVERGENCE_TOL = 1e-12
VERDICT_TOL = 1e-6
SANDWICH_TOL = 1e-9


@dataclass(frozen=True)
class Gate:
    name: str
    passed: bool
    detail: str = ""

    def to_record(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _gates_pass(gates, names=None):
    return all(g.passed for g in gates if names is None or g.name in names)


# -- orbits -----------------------------------------------------------------


@dataclass(frozen=True)
class OrbitRun:
    start: int
    steps: int
    orbit: tuple[int, ...]
    covers_space: bool


def run_orbit(space, T: TransformationMap, start: int, n: int) -> OrbitRun:
    size = space.size if isinstance(space, SampleSpace) else T.size
    if size != T.size:
        raise DomainError(f"space has {size} outcomes, map has {T.size}")
    if n < 1:
        raise DomainError("an orbit run needs n >= 1")
    if not 0 <= start < size:
        raise DomainError(f"start {start} outside a space of size {size}")
    orbit = tuple(T.iterate(start, n))
    return OrbitRun(start, n, orbit, len(set(orbit)) == size)


def empirical_average(f, orbit: OrbitRun) -> float:
    values = BoundedFunction.coerce(f).values
    return math.fsum(values[list(orbit.orbit)]) / orbit.steps


def orbit_cycle(T: TransformationMap, start: int):
    """``(pre_period, cycle)`` of the orbit of ``start``."""
    seen = {}
    path = []
    w = start
    while w not in seen:
        seen[w] = len(path)
        path.append(w)
        w = T(w)
    return seen[w], tuple(path[seen[w]:])


def limit_function(f, T: TransformationMap) -> np.ndarray:
    """Exact long-run average of ``f`` along the orbit of every outcome."""
    values = BoundedFunction.coerce(f, T.size).values
    out = np.empty(T.size)
    for w in range(T.size):
        _, cycle = orbit_cycle(T, w)
        out[w] = math.fsum(values[list(cycle)]) / len(cycle)
    return out


def running_averages(f, T: TransformationMap, start: int, n: int) -> np.ndarray:
    """``(1/m) sum_{j<m} f(T^j start)`` for ``m = 1..n``."""
    values = BoundedFunction.coerce(f, T.size).values
    orbit = np.array(T.iterate(start, n))
    return np.cumsum(values[orbit]) / np.arange(1, n + 1)


def tail_fluctuations(f, T: TransformationMap, start: int, n_max: int):
    """Stability of the running average over the last 10% of ``n``.

    Returns ``(aligned, raw)``: the largest deviation from the value at
    ``n_max`` over all ``n`` in the window (``raw``), and over the ``n`` in
    the window that differ from ``n_max`` by a whole number of periods of the
    orbit (``aligned``).  A periodic orbit keeps ``raw`` of order
    ``period / n`` forever; ``aligned`` measures convergence of the average
    along full periods.
    """
    avgs = running_averages(f, T, start, n_max)
    window = np.arange(max(1, n_max - n_max // 10), n_max + 1)
    ref = avgs[n_max - 1]
    raw = float(np.max(np.abs(avgs[window - 1] - ref)))
    pre, cycle = orbit_cycle(T, start)
    aligned_n = window[((n_max - window) % len(cycle) == 0) & (window > pre)]
    aligned = float(np.max(np.abs(avgs[aligned_n - 1] - ref))) if aligned_n.size else raw
    return aligned, raw


def uniform_on_partition(partition: Partition) -> ProbMeasure:
    """Mass ``1/l`` on each of the ``l`` blocks, spread evenly inside a block."""
    w = np.zeros(partition.size)
    ell = len(partition)
    for block in partition.blocks:
        w[list(block.members)] = 1.0 / ell / len(block)
    return ProbMeasure(w)


# -- averaging bounds ------------------------------------------------------


@dataclass(frozen=True)
class SandwichReport:
    n: int
    lower_sum: float
    average: float
    upper_sum: float
    holds: bool
    gates: tuple[Gate, ...]
    premises: tuple[Gate, ...]

    @property
    def asserted(self):
        """The containment is a claim only when the gates pass."""
        return _gates_pass(self.gates)

    @property
    def violation(self):
        return self.asserted and not self.holds

    def to_record(self):
        return {
            "n": self.n, "lower_sum": self.lower_sum, "average": self.average,
            "upper_sum": self.upper_sum, "holds": self.holds, "asserted": self.asserted,
            "gates": [g.to_record() for g in self.gates],
            "premises": [g.to_record() for g in self.premises],
        }


def lemma2_bounds_check(f, orbit: OrbitRun, view, T: TransformationMap, partition: Partition = None,
                        space: SampleSpace = None, tol=SANDWICH_TOL) -> SandwichReport:
    """Partition-weighted sums around the empirical average.

    ``sum_j f(T^j w) lower(E_{T^j w}) <= (1/n) sum_j f(T^j w) <= sum_j f(T^j w) upper(E_{T^j w})``

    with ``j`` running over the ``n`` orbit steps and ``E_x`` the block of
    ``partition`` containing ``x`` (by default the coarsest partition
    generated by the orbit points, which needs ``space``).

    Gates: the lower probability is invariant and the block-uniform measure
    is in its core.  The report also lists two premises the averaging step
    relies on: the ``n`` observations are distinct (so each block gets weight
    ``1/n``) and ``f`` is non-negative on the orbit (so multiplying the
    block-wise bounds by ``f`` keeps their direction).
    """
    view = as_view(view)
    values = BoundedFunction.coerce(f, view.size).values
    if partition is None:
        if space is None:
            raise DomainError("pass either a partition or the sample space")
        partition = coarsest_partition(space, orbit.orbit)
    labels = partition.labels
    lowers = np.array([view.lower(b) for b in partition.blocks])
    uppers = np.array([view.upper(b) for b in partition.blocks])
    fo = values[list(orbit.orbit)]
    blocks = labels[list(orbit.orbit)]
    lower_sum = math.fsum(fo * lowers[blocks])
    upper_sum = math.fsum(fo * uppers[blocks])
    average = math.fsum(fo) / orbit.steps
    p_u = uniform_on_partition(partition)
    gates = (
        Gate("lower invariant", is_invariant(view, T)),
        Gate("block-uniform measure in core", in_core(p_u, view)),
    )
    distinct = len(set(orbit.orbit))
    premises = (
        Gate("distinct observations", distinct == orbit.steps,
             f"{distinct} distinct points in {orbit.steps} steps"),
        Gate("f non-negative on orbit", bool(np.all(fo >= 0.0))),
    )
    holds = lower_sum <= average + tol and average <= upper_sum + tol
    return SandwichReport(orbit.steps, lower_sum, average, upper_sum, holds, gates, premises)


# -- the update sequence ----------------------------------------------------


@dataclass(frozen=True)
class ReweightPolicy:
    """How each step chooses the new block masses.

    ``keep-block-masses``: the 1/l-reassessed masses.
    ``lrfj``: the block of outcome ``pivot`` gets ``pivot_mass``, the rest scale.
    ``likelihood``: as ``lrfj`` with the pivot mass proportional to
    ``likelihood[generator] * mass`` (``likelihood`` is indexed by outcome).
    """

    kind: str = "keep-block-masses"
    pivot: int | None = None
    pivot_mass: float | None = None
    likelihood: tuple[float, ...] | None = None

    KINDS = ("keep-block-masses", "lrfj", "likelihood")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise DomainError(f"unknown reweight policy {self.kind!r}; use one of {self.KINDS}")
        if self.kind in ("lrfj", "likelihood") and self.pivot is None:
            raise DomainError(f"policy {self.kind!r} needs a pivot outcome")
        if self.kind == "lrfj" and self.pivot_mass is None:
            raise DomainError("policy 'lrfj' needs a pivot mass")
        if self.kind == "likelihood":
            if self.likelihood is None:
                raise DomainError("policy 'likelihood' needs per-outcome likelihoods")
            object.__setattr__(self, "likelihood", tuple(float(x) for x in self.likelihood))

    def reweight(self, P_reas: ProbMeasure, partition: Partition) -> PartitionReweight:
        if self.kind == "keep-block-masses" or len(partition) == 1:
            return PartitionReweight.unchanged(P_reas, partition)
        pivot_block = partition.block_of(self.pivot)
        if self.kind == "lrfj":
            mass = self.pivot_mass
        else:
            if len(self.likelihood) != partition.size:
                raise DomainError(f"{len(self.likelihood)} likelihoods for {partition.size} outcomes")
            lik = LikelihoodSpec(tuple(self.likelihood[g] for g in partition.generators))
            mass = extended_jeffrey_pivot_mass(P_reas, partition, pivot_block, lik)
        return lrfj(P_reas, partition, pivot_block, mass, allow_degenerate=True)


@dataclass(frozen=True)
class TraceStep:
    k: int
    observations: tuple[int, ...]
    partition: Partition
    credal_set: CredalSet
    reassessed_masses: tuple[tuple[float, ...], ...]
    behavior: BehaviorLabel | None


@dataclass(frozen=True)
class UpdateTrace:
    steps: tuple[TraceStep, ...]
    dtilde: tuple[float, ...]
    convergence_index: int | None
    metric: str = "uniform"

    @property
    def final(self) -> CredalSet:
        return self.steps[-1].credal_set

    def refines_until_atomic(self) -> bool:
        """Each partition refines the previous one, strictly until atomic."""
        for a, b in zip(self.steps, self.steps[1:]):
            if not b.partition.is_refinement_of(a.partition):
                return False
            if not a.partition.is_atomic() and b.observations and len(b.partition) <= len(a.partition):
                return False
        return True


def _convergence_index(dtilde, tol=CONVERGENCE_TOL):
    k = len(dtilde)
    while k > 0 and dtilde[k - 1] < tol:
        k -= 1
    return k if len(dtilde) - k >= 2 else None


def drive_updates_countable(initial: CredalSet, space: SampleSpace, T: TransformationMap, start: int,
                            schedule: Sequence[int], policy: ReweightPolicy = ReweightPolicy(),
                            initial_observations: Sequence[int] | None = None,
                            metric="uniform") -> UpdateTrace:
    """Refine along the orbit batch by batch and Jeffrey-update every member.

    The orbit of ``start`` is cut into consecutive batches of the sizes in
    ``schedule``.  The starting partition is generated by
    ``initial_observations`` (default: ``[start]``).  Orbit points that are
    already generators add nothing; a batch of them leaves the partition as
    it is and the step only applies the reweight.
    """
    if initial.size != space.size or T.size != space.size:
        raise DomainError("credal set, space and map must have the same size")
    if any(b < 0 for b in schedule):
        raise DomainError("batch sizes must be non-negative")
    first = list(initial_observations) if initial_observations is not None else [start]
    partition = coarsest_partition(space, first)
    orbit = T.iterate(start, 1 + sum(schedule))[1:]
    steps = [TraceStep(0, tuple(first), partition, initial,
                       tuple(tuple(block_masses(P, partition)) for P in initial), None)]
    current = initial
    pos = 0
    for k, size in enumerate(schedule, start=1):
        batch = orbit[pos:pos + size]
        pos += size
        new = [w for w in dict.fromkeys(batch) if w not in partition.generators]
        refined = refine(space, partition, new)
        updated, masses = [], []
        for i, P in enumerate(current):
            try:
                P_reas = reassessed_measure(P, partition, refined)
                rw = policy.reweight(P_reas, refined)
                updated.append(jeffrey_update(P_reas, rw))
            except NullConditioningError as exc:
                raise NullConditioningError(f"step {k}, member {i}: {exc}", block=exc.block, member=i) from exc
            masses.append(tuple(block_masses(P_reas, refined)))
        nxt = CredalSet(updated)
        label = classify_behavior(LowerUpperView(current), LowerUpperView(nxt))
        steps.append(TraceStep(k, tuple(batch), refined, nxt, tuple(masses), label))
        partition, current = refined, nxt
    limit = current
    dtilde = tuple(dtilde_step(a.credal_set, b.credal_set, limit, metric) for a, b in zip(steps, steps[1:]))
    return UpdateTrace(tuple(steps), dtilde, _convergence_index(dtilde), metric)


def finite_sigma_update(P: ProbMeasure, algebra: GeneratedAlgebra, new_masses_on_atoms) -> ProbMeasure:
    """Jeffrey update on the atoms of a finite algebra (absolute continuity enforced)."""
    masses = [float(m) for m in new_masses_on_atoms]
    if len(masses) != len(algebra.atoms):
        raise DomainError(f"{len(algebra.atoms)} atoms but {len(masses)} masses")
    if any(m < 0 for m in masses) or abs(sum(masses) - 1.0) > 1e-9:
        raise DomainError(f"atom masses must be a probability vector: {masses}")
    if P.size != algebra.size:
        raise DomainError("measure and algebra over different spaces")
    out = np.zeros(P.size)
    for j, (atom, m) in enumerate(zip(algebra.atoms, masses)):
        if m == 0.0:
            continue
        idx = list(atom.members)
        prior = math.fsum(P.weights[idx])
        if prior <= 0.0:
            raise NullConditioningError(f"atom {atom} has probability 0 but new mass {m!r}", block=j)
        out[idx] = P.weights[idx] / prior * m
    return ProbMeasure(out)


# -- ergodic bounds ---------------------------------------------------------


@dataclass(frozen=True)
class ErgodicReport:
    mode: str
    start: int
    n_max: int
    average: float
    limit: float
    tail_fluctuation: float
    raw_tail_fluctuation: float
    gates: tuple[Gate, ...]
    bounds: tuple[tuple[str, float, float], ...]
    contained: bool | None
    success_set: Event | None = None
    success_lower: float | None = None
    singleton_value: float | None = None
    extra: tuple[tuple[str, object], ...] = ()
    tol: float = VERDICT_TOL

    @property
    def verdict(self):
        if self.contained is None:
            return "gates failed, no claim"
        if not self.contained:
            return "violation"
        if self.singleton_value is not None:
            return "Birkhoff equality"
        return "containment"

    def to_record(self):
        return {
            "mode": self.mode, "start": self.start, "n_max": self.n_max,
            "average": self.average, "limit": self.limit,
            "tail_fluctuation": self.tail_fluctuation,
            "raw_tail_fluctuation": self.raw_tail_fluctuation,
            "gates": [g.to_record() for g in self.gates],
            "bounds": [{"name": n, "lower": lo, "upper": hi} for n, lo, hi in self.bounds],
            "contained": self.contained, "verdict": self.verdict,
            "success_set": None if self.success_set is None else list(self.success_set.members),
            "success_lower": self.success_lower, "singleton_value": self.singleton_value,
            "extra": {k: v for k, v in self.extra},
        }


def _inside(x, lo, hi, tol):
    return lo - tol <= x <= hi + tol


def _singleton(view):
    if view.source is None:
        return None
    canon = view.source.canonical()
    return canon[0] if len(canon) == 1 else None


def ergodic_interval_check(f, T: TransformationMap, start: int, view_infinity, n_max: int,
                           mode="choquet", space: SampleSpace = None, tol=VERDICT_TOL) -> ErgodicReport:
    """Compare the long-run average from ``start`` with the ergodic bounds.

    ``choquet`` mode brackets the limit by the Choquet integrals of the limit
    function against the lower and upper probabilities (gates: invariant and
    ergodic lower).  ``countable`` mode uses block sums over the distinct
    orbit points, ``sum f(x) lower(E_x)`` with ``f`` itself when the
    block-uniform measure is in the core, and with the limit function when
    the lower is ergodic (gate: invariant lower, plus either of those).

    The containment is also evaluated from every start, and the report gives
    the lower probability of the set of starts where it holds; the
    almost-sure form of the claim is that this is 1.
    """
    view = as_view(view_infinity)
    values = BoundedFunction.coerce(f, view.size).values
    if T.size != view.size:
        raise DomainError("map and view over different spaces")
    if n_max < 1:
        raise DomainError("n_max must be positive")
    f_star = limit_function(values, T)
    avg = float(running_averages(values, T, start, n_max)[-1])
    aligned, raw = tail_fluctuations(values, T, start, n_max)
    invariant = is_invariant(view, T)
    ergodic = is_ergodic(view, T)
    singleton = _singleton(view)
    extra = []

    if mode == "choquet":
        gates = (Gate("lower invariant", invariant), Gate("lower ergodic", ergodic))
        lo = choquet_integral(view, f_star, "lower")
        hi = choquet_integral(view, f_star, "upper")
        bounds = (("choquet of limit function", lo, hi),)
        active = _gates_pass(gates)
        # sharper form: convex and strongly invariant lower
        if view.size <= 10 and is_convex(view) and is_strongly_invariant(view, T):
            flo, fhi = choquet_integral(view, values, "lower"), choquet_integral(view, values, "upper")
            extra.append(("convex strongly invariant", True))
            extra.append(("choquet of f", (flo, fhi)))
            extra.append(("limit function integral matches", abs(flo - lo) <= tol))
            if ergodic:
                extra.append(("f bounds contain average", _inside(avg, flo, fhi, tol)))
    elif mode == "countable":
        if space is None:
            space = SampleSpace.discrete(view.size)
        pre, cycle = orbit_cycle(T, start)
        points = T.iterate(start, pre + len(cycle))
        partition = coarsest_partition(space, points)
        p_u = uniform_on_partition(partition)
        pu_core = in_core(p_u, view)
        gates = (Gate("lower invariant", invariant),
                 Gate("block-uniform measure in core", pu_core),
                 Gate("lower ergodic", ergodic))
        lowers = np.array([view.lower(b) for b in partition.blocks])
        uppers = np.array([view.upper(b) for b in partition.blocks])
        gens = list(partition.generators)
        bounds = []
        if pu_core:
            bounds.append(("block sums of f", math.fsum(values[gens] * lowers), math.fsum(values[gens] * uppers)))
        if ergodic:
            bounds.append(("block sums of limit function",
                           math.fsum(f_star[gens] * lowers), math.fsum(f_star[gens] * uppers)))
        bounds = tuple(bounds)
        active = invariant and (pu_core or ergodic)
    else:
        raise DomainError(f"mode must be 'choquet' or 'countable', got {mode!r}")

    contained = None
    success, success_lower = None, None
    if active:
        contained = all(_inside(avg, lo, hi, tol) for _, lo, hi in bounds)
        if mode == "choquet":
            ok = [w for w in range(view.size) if all(_inside(f_star[w], lo, hi, tol) for _, lo, hi in bounds)]
            success = Event(tuple(ok))
            success_lower = view.lower(success)
    singleton_value = None
    if singleton is not None and active:
        singleton_value = singleton.expectation(f_star)
        contained = contained and abs(avg - singleton_value) <= tol
    return ErgodicReport(mode, start, n_max, avg, float(f_star[start]), aligned, raw, gates, bounds,
                         contained, success, success_lower, singleton_value, tuple(extra), tol)


# -- strong law for f o T^(k-1) ----------------------------------------------


@dataclass(frozen=True)
class StationarySequenceSpec:
    """The sequence ``f_k = f o T^(k-1)``, observed up to ``horizon`` terms."""

    f: BoundedFunction
    T: TransformationMap
    horizon: int

    def __post_init__(self):
        object.__setattr__(self, "f", BoundedFunction.coerce(self.f, self.T.size))
        if self.horizon < 1:
            raise DomainError("horizon must be positive")

    def term(self, k) -> np.ndarray:
        """Values of ``f_k`` (``k >= 1``) at every outcome."""
        if k < 1:
            raise DomainError("terms are numbered from 1")
        idx = np.arange(self.T.size)
        for _ in range(k - 1):
            idx = np.array([self.T(int(w)) for w in idx])
        return self.f.values[idx]

    def averages(self) -> np.ndarray:
        """``(1/N) sum_{k=1}^N f_k(w)`` for every outcome ``w``."""
        total = np.zeros(self.T.size)
        idx = np.arange(self.T.size)
        forward = np.array(self.T.forward)
        for _ in range(self.horizon):
            total += self.f.values[idx]
            idx = forward[idx]
        return total / self.horizon


def is_stationary(view, spec: StationarySequenceSpec, depth=3, tol=1e-9) -> bool:
    """Cylinder-set check of stationarity up to ``depth`` coordinates.

    A cylinder fixes which value tuples ``(f_1, ..., f_d)`` are allowed; its
    preimage is a union of level sets of ``w -> (f_1(w), ..., f_d(w))``, and
    shifting the cylinder pulls that union back through ``T``.  The lower
    probability must agree on each such union and its shift.
    """
    view = as_view(view)
    for d in range(1, depth + 1):
        cols = np.vstack([spec.term(k) for k in range(1, d + 1)]).T
        _, labels = np.unique(cols, axis=0, return_inverse=True)
        labels = labels.ravel()
        k = labels.max() + 1
        if k > 16:
            raise DomainError("too many distinct value tuples for an exhaustive cylinder check")
        for sel in range(1 << k):
            members = tuple(int(w) for w in np.flatnonzero((sel >> labels) & 1))
            A = Event(members)
            if abs(view.lower(spec.T.preimage(A)) - view.lower(A)) > tol:
                return False
    return True


@dataclass(frozen=True)
class SllnReport:
    horizon: int
    averages: tuple[float, ...]
    lower_integral: float
    upper_integral: float
    gates: tuple[Gate, ...]
    contained: bool | None
    success_set: Event | None
    success_lower: float | None
    member_expectations: tuple[float, ...]
    singleton_value: float | None
    tol: float = VERDICT_TOL

    @property
    def verdict(self):
        if self.contained is None:
            return "gates failed, no claim"
        if not self.contained:
            return "violation"
        return "equality" if self.singleton_value is not None else "containment"

    def to_record(self):
        return {
            "horizon": self.horizon, "averages": list(self.averages),
            "lower_integral": self.lower_integral, "upper_integral": self.upper_integral,
            "gates": [g.to_record() for g in self.gates], "contained": self.contained,
            "verdict": self.verdict,
            "success_set": None if self.success_set is None else list(self.success_set.members),
            "success_lower": self.success_lower,
            "member_expectations": list(self.member_expectations),
            "singleton_value": self.singleton_value,
        }


def slln_check(spec: StationarySequenceSpec, view, tol=VERDICT_TOL, exact_tol=1e-9) -> SllnReport:
    """Averages of ``f_1..f_N`` against ``[choquet lower, choquet upper]`` of ``f_1``.

    Containment must hold on a set of starts of lower probability one.  For a
    singleton view the average must equal the expectation on that set, within
    ``exact_tol``.
    """
    view = as_view(view)
    T = spec.T
    if T.size != view.size:
        raise DomainError("sequence and view over different spaces")
    stationary = is_invariant(view, T) and is_stationary(view, spec)
    gates = (
        Gate("lower convex", is_convex(view)),
        Gate("continuous at the space", is_continuous_at_omega(view)),
        Gate("sequence stationary", stationary),
        Gate("sequence ergodic", is_ergodic(view, T)),
    )
    f1 = spec.term(1)
    lo = choquet_integral(view, f1, "lower")
    hi = choquet_integral(view, f1, "upper")
    avgs = spec.averages()
    singleton = _singleton(view)
    members = tuple(float(x) for x in view.expectations(avgs)) if view.source is not None else ()
    singleton_value = None
    contained = success = success_lower = None
    if _gates_pass(gates):
        if singleton is not None:
            singleton_value = singleton.expectation(f1)
            ok = [w for w in range(T.size) if abs(avgs[w] - singleton_value) <= exact_tol]
        else:
            ok = [w for w in range(T.size) if _inside(avgs[w], lo, hi, tol)]
        success = Event(tuple(ok))
        success_lower = view.lower(success)
        contained = success_lower >= 1.0 - 1e-9
    return SllnReport(spec.horizon, tuple(float(a) for a in avgs), lo, hi, gates, contained,
                      success, success_lower, members, singleton_value, tol)
