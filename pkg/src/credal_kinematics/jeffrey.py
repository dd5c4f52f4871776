"""Jeffrey conditioning of a single measure on a partition.

The update keeps every within-block conditional of the prior and only moves
mass between blocks:

    P*(A) = sum_j P(A | E_j) * m_j

for the new block masses ``m_j``.  Mass ``(1, 0)`` on ``{E, E^c}`` is ordinary
Bayes conditioning on ``E``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, NullConditioningError
from .measures import PROB_TOL, ProbMeasure, SampleSpace, event_table, probability_of
from .partitions import Partition, containing_blocks, reassess, refine

EXHAUSTIVE_J_LIMIT = 16


def block_masses(P: ProbMeasure, partition: Partition) -> np.ndarray:
    if P.size != partition.size:
        raise DomainError(f"measure has {P.size} outcomes, partition covers {partition.size}")
    return np.array([probability_of(P, b) for b in partition.blocks])


@dataclass(frozen=True)
class PartitionReweight:
    """New masses ``P*(E_j)``, one per block of ``partition``."""

    partition: Partition
    new_masses: tuple[float, ...]

    def __post_init__(self):
        masses = tuple(float(m) for m in self.new_masses)
        object.__setattr__(self, "new_masses", masses)
        if len(masses) != len(self.partition):
            raise DomainError(f"{len(self.partition)} blocks but {len(masses)} masses")
        if any(not np.isfinite(m) or m < 0.0 for m in masses):
            raise DomainError(f"block masses must be finite and non-negative: {masses}")
        if abs(sum(masses) - 1.0) > PROB_TOL:
            raise DomainError(f"block masses sum to {sum(masses)!r}, not 1")

    @classmethod
    def unchanged(cls, P: ProbMeasure, partition: Partition):
        """Reweight that gives every block its current mass under ``P``."""
        return cls(partition, tuple(block_masses(P, partition)))


@dataclass(frozen=True)
class LikelihoodSpec:
    """Likelihood of the observed data given each block."""

    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if any(not np.isfinite(v) or v < 0.0 for v in values):
            raise DomainError(f"likelihoods must be finite and non-negative: {values}")
        if not any(v > 0.0 for v in values):
            raise DomainError("at least one likelihood must be positive")


def jeffrey_update(P: ProbMeasure, rw: PartitionReweight) -> ProbMeasure:
    prior = block_masses(P, rw.partition)
    out = np.zeros(P.size)
    for j, (block, m) in enumerate(zip(rw.partition.blocks, rw.new_masses)):
        if m == 0.0:
            continue
        if prior[j] <= 0.0:
            raise NullConditioningError(
                f"block {j} {block} has prior probability 0 but new mass {m!r}", block=j)
        idx = list(block.members)
        out[idx] = P.weights[idx] / prior[j] * m
    return ProbMeasure(out)


def check_condition_J(P: ProbMeasure, Pstar: ProbMeasure, partition: Partition,
                      tol: float = 1e-9, exhaustive: bool = False) -> bool:
    """Are the within-block conditionals of ``P`` and ``Pstar`` the same?

    Blocks where either conditional is undefined are skipped.  Checking
    singletons is enough on a finite space; ``exhaustive=True`` compares the
    conditionals on every event instead.
    """
    if not P.size == Pstar.size == partition.size:
        raise DomainError("measures and partition over different spaces")
    before, after = block_masses(P, partition), block_masses(Pstar, partition)
    for j, block in enumerate(partition.blocks):
        if before[j] <= 0.0 or after[j] <= 0.0:
            continue
        inside = np.zeros(P.size)
        inside[list(block.members)] = 1.0
        c0 = P.weights * inside / before[j]
        c1 = Pstar.weights * inside / after[j]
        if exhaustive:
            if P.size > EXHAUSTIVE_J_LIMIT:
                raise DomainError(f"exhaustive check limited to {EXHAUSTIVE_J_LIMIT} outcomes")
            diff = np.abs(event_table(c0) - event_table(c1))
        else:
            diff = np.abs(c0 - c1)
        if diff.max() > tol:
            return False
    return True


def lrfj(P: ProbMeasure, partition: Partition, pivot_block: int, pivot_mass: float,
         allow_degenerate: bool = False) -> PartitionReweight:
    """Likelihood-ratio form: fix one block's new mass, scale the rest by a common factor."""
    if not 0 <= pivot_block < len(partition):
        raise DomainError(f"pivot block {pivot_block} out of range")
    pivot_mass = float(pivot_mass)
    if not 0.0 <= pivot_mass <= 1.0:
        raise DomainError(f"pivot mass {pivot_mass!r} is not a probability")
    if pivot_mass in (0.0, 1.0) and not allow_degenerate:
        raise DomainError("pivot mass 0 or 1 is a degenerate reweight; pass allow_degenerate=True")
    prior = block_masses(P, partition)
    if prior[pivot_block] <= 0.0 and pivot_mass > 0.0:
        raise NullConditioningError(f"pivot block {pivot_block} has prior probability 0",
                                    block=pivot_block)
    rest = sum(m for s, m in enumerate(prior) if s != pivot_block)
    if rest <= 0.0 and pivot_mass < 1.0:
        raise DomainError(f"pivot block {pivot_block} carries all the mass; "
                          "there is nothing to scale up proportionally")
    masses = []
    for s, m in enumerate(prior):
        if s == pivot_block:
            masses.append(pivot_mass)
        elif pivot_mass == 1.0:
            masses.append(0.0)
        else:
            masses.append(m * (1.0 - pivot_mass) / rest)
    return PartitionReweight(partition, tuple(masses))


def reassessed_measure(P: ProbMeasure, previous: Partition, refined: Partition) -> ProbMeasure:
    """``P`` with refined block masses set by the 1/l rule.

    Within a refined block the shape of ``P`` is kept; a refined block that
    ``P`` gives no mass but the rule does is filled uniformly.
    """
    masses = reassess(block_masses(P, previous), previous, refined)
    inner = block_masses(P, refined)
    out = np.zeros(P.size)
    for j, block in enumerate(refined.blocks):
        idx = list(block.members)
        if masses[j] == 0.0:
            continue
        if inner[j] > 0.0:
            out[idx] = P.weights[idx] / inner[j] * masses[j]
        else:
            out[idx] = masses[j] / len(idx)
    return ProbMeasure(out)


def dynamic_update(P: ProbMeasure, space: SampleSpace, previous: Partition,
                   new_observations: Sequence[int], rw_for_refined: PartitionReweight):
    """Refine, reassess by 1/l, then Jeffrey-update onto the given masses.

    Returns ``(refined, Pstar)``.
    """
    refined = refine(space, previous, new_observations)
    if not rw_for_refined.partition.same_blocks(refined):
        raise DomainError("the reweight is not defined on the refined partition")
    containing_blocks(previous, refined)
    reassessed = reassessed_measure(P, previous, refined)
    return refined, jeffrey_update(reassessed, rw_for_refined)


def extended_jeffrey_masses(P_reas: ProbMeasure, partition: Partition, lik: LikelihoodSpec) -> np.ndarray:
    """Block masses proportional to likelihood times current mass."""
    if len(lik.values) != len(partition):
        raise DomainError(f"{len(partition)} blocks but {len(lik.values)} likelihoods")
    weighted = np.array(lik.values) * block_masses(P_reas, partition)
    total = weighted.sum()
    if total <= 0.0:
        raise DomainError("likelihood times block mass is zero on every block")
    return weighted / total


def extended_jeffrey_pivot_mass(P_reas: ProbMeasure, partition: Partition, block: int,
                                lik: LikelihoodSpec) -> float:
    if not 0 <= block < len(partition):
        raise DomainError(f"block {block} out of range")
    return float(extended_jeffrey_masses(P_reas, partition, lik)[block])


def domination_constant(P: ProbMeasure, rw: PartitionReweight) -> float:
    """Smallest ``B`` with ``P*(A) <= B * P(A)`` for all events, where ``P*`` is the update."""
    prior = block_masses(P, rw.partition)
    ratios = [m / p for m, p in zip(rw.new_masses, prior) if p > 0.0]
    return max(ratios)
