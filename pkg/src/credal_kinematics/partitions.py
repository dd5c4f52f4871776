"""Partitions generated by observations, their refinement, and 1/l reassessment.

A partition is built from a list of observed outcomes ("generators"): every
outcome joins the block of its nearest generator, ties going to the generator
with the smaller outcome index.  Refining adds generators and recomputes the
assignment globally, so refining by ``a`` then ``b`` is the same as refining
by ``[a, b]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, NotARefinementError
from .measures import Event, SampleSpace, as_event

MAX_MATERIALIZED_ATOMS = 20


def _check_cover(blocks, size):
    seen = 0
    for b in blocks:
        if not b.members:
            raise DomainError("partition blocks must be non-empty")
        b.check(size)
        if seen & b.mask:
            raise DomainError(f"block {b} overlaps an earlier block")
        seen |= b.mask
    if seen != (1 << size) - 1:
        missing = Event.from_mask(((1 << size) - 1) & ~seen)
        raise DomainError(f"blocks do not cover the space; missing {missing}")


@dataclass(frozen=True)
class Partition:
    """Disjoint, exhaustive blocks, each tagged with the outcome that generated it."""

    blocks: tuple[Event, ...]
    generators: tuple[int, ...]
    size: int

    def __post_init__(self):
        blocks = tuple(as_event(b) for b in self.blocks)
        generators = tuple(int(g) for g in self.generators)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "generators", generators)
        if len(blocks) != len(generators):
            raise DomainError(f"{len(blocks)} blocks but {len(generators)} generators")
        if len(set(generators)) != len(generators):
            raise DomainError("generators must be distinct")
        _check_cover(blocks, self.size)
        for g, b in zip(generators, blocks):
            if g not in b:
                raise DomainError(f"generator {g} is not in its block {b}")

    @classmethod
    def from_pairs(cls, pairs, size):
        """Build from ``(generator, members)`` pairs, the serialized form."""
        pairs = list(pairs)
        return cls(tuple(Event(tuple(m)) for _, m in pairs), tuple(g for g, _ in pairs), size)

    def to_pairs(self):
        return [(g, list(b.members)) for g, b in zip(self.generators, self.blocks)]

    @classmethod
    def atomic(cls, size):
        return cls(tuple(Event.of(i) for i in range(size)), tuple(range(size)), size)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __getitem__(self, j):
        return self.blocks[j]

    @property
    def labels(self):
        """Block index of every outcome."""
        out = np.empty(self.size, dtype=int)
        for j, b in enumerate(self.blocks):
            out[list(b.members)] = j
        return out

    def block_of(self, outcome):
        for j, b in enumerate(self.blocks):
            if outcome in b:
                return j
        raise DomainError(f"outcome {outcome} outside a space of size {self.size}")

    def block_of_generator(self, generator):
        try:
            return self.generators.index(generator)
        except ValueError:
            raise DomainError(f"{generator} is not a generator of this partition") from None

    def is_atomic(self):
        return len(self.blocks) == self.size

    def is_refinement_of(self, coarser: "Partition"):
        if self.size != coarser.size:
            return False
        return all(any(b.issubset(c) for c in coarser.blocks) for b in self.blocks)

    def same_blocks(self, other: "Partition"):
        return self.size == other.size and set(self.blocks) == set(other.blocks)

    def algebra(self) -> "GeneratedAlgebra":
        return GeneratedAlgebra(self.blocks, self.size)


def _unique(observations):
    seen, out = set(), []
    for o in observations:
        o = int(o)
        if o not in seen:
            seen.add(o)
            out.append(o)
    return out


def coarsest_partition(space: SampleSpace, observations: Sequence[int]) -> Partition:
    gens = _unique(observations)
    if not gens:
        raise DomainError("at least one observation is needed to build a partition")
    for g in gens:
        if not 0 <= g < space.size:
            raise DomainError(f"observation {g} outside a space of size {space.size}")
    d = space.distances[:, gens]
    best = d.min(axis=1, keepdims=True)
    # among the nearest generators pick the one with the smallest outcome index
    gen_index = np.array(gens)
    candidates = np.where(d == best, gen_index[None, :], space.size)
    winner = candidates.min(axis=1)
    position = {g: j for j, g in enumerate(gens)}
    members = [[] for _ in gens]
    for omega, g in enumerate(winner):
        members[position[int(g)]].append(omega)
    return Partition(tuple(Event(tuple(m)) for m in members), tuple(gens), space.size)


def refine(space: SampleSpace, previous: Partition, new_observations: Sequence[int]) -> Partition:
    new = _unique(new_observations)
    clash = [o for o in new if o in previous.generators]
    if clash:
        raise DomainError(f"observations {clash} are already generators")
    if not new:
        return previous
    return coarsest_partition(space, list(previous.generators) + new)


def containing_blocks(previous: Partition, refined: Partition) -> list[int]:
    """Index of the previous block holding each refined block."""
    out = []
    for b in refined.blocks:
        for s, e in enumerate(previous.blocks):
            if b.issubset(e):
                out.append(s)
                break
        else:
            raise NotARefinementError(f"refined block {b} is not inside any previous block")
    return out


def reassess(masses: Sequence[float], previous: Partition, refined: Partition) -> np.ndarray:
    """Split each previous block's mass evenly over the refined blocks inside it."""
    masses = np.asarray(masses, dtype=float)
    if masses.shape != (len(previous),):
        raise DomainError(f"expected {len(previous)} block masses, got {masses.shape}")
    if refined.size != previous.size:
        raise DomainError("partitions over different spaces")
    parent = containing_blocks(previous, refined)
    ell = np.bincount(parent, minlength=len(previous))
    out = np.array([masses[s] / ell[s] for s in parent])
    out.flags.writeable = False
    return out


def element_hausdorff(space: SampleSpace, coarse_block, fine_block) -> float:
    coarse, fine = as_event(coarse_block), as_event(fine_block)
    if not fine.members:
        raise DomainError("fine block must be non-empty")
    if not fine.issubset(coarse):
        raise DomainError(f"{fine} is not a subset of {coarse}")
    d = space.distances[np.ix_(list(coarse.members), list(fine.members))]
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


class GeneratedAlgebra:
    """The finite algebra of unions of a partition's atoms."""

    __slots__ = ("atoms", "size", "_atom_masks")

    def __init__(self, atoms, size):
        atoms = tuple(as_event(a) for a in atoms)
        _check_cover(atoms, size)
        self.atoms = atoms
        self.size = size
        self._atom_masks = tuple(a.mask for a in atoms)

    @classmethod
    def power_set(cls, size):
        return cls(tuple(Event.of(i) for i in range(size)), size)

    @classmethod
    def trivial(cls, size):
        return cls((Event.full(size),), size)

    def __len__(self):
        return len(self.atoms)

    def contains(self, A) -> bool:
        m = as_event(A).mask
        return all(m & a in (0, a) for a in self._atom_masks)

    __contains__ = contains

    def smallest_superset(self, A) -> Event:
        m = as_event(A).check(self.size).mask
        return Event.from_mask(sum(a for a in self._atom_masks if a & m))

    def event_masks(self) -> list[int]:
        k = len(self.atoms)
        if k > MAX_MATERIALIZED_ATOMS:
            raise DomainError(f"{k} atoms is too many to materialize; use contains()")
        out = []
        for sel in range(1 << k):
            out.append(sum(a for j, a in enumerate(self._atom_masks) if sel >> j & 1))
        return out

    def events(self) -> list[Event]:
        return [Event.from_mask(m) for m in self.event_masks()]

    def __repr__(self):
        return f"GeneratedAlgebra(atoms={[list(a.members) for a in self.atoms]})"
