"""Lower and upper probabilities of a credal set, and the checks built on them.

Event-indexed tables use bitmasks: entry ``m`` of a table is the value on the
event whose members are the set bits of ``m``.  Exhaustive checks go through
these tables and are therefore limited to small spaces (``MAX_TABLE_SIZE``
outcomes, fewer for pairwise checks).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .measures import (
    MAX_TABLE_SIZE,
    BoundedFunction,
    CredalSet,
    Event,
    ProbMeasure,
    as_event,
    event_table,
    probability_of,
)
from .partitions import GeneratedAlgebra

TOL = 1e-9
EXHAUSTIVE_PAIR_LIMIT = 12
CONVEXITY_LIMIT = 10


class LowerUpperView:
    """Lower/upper envelope of a finite credal set.

    ``lower(A)`` is the minimum and ``upper(A)`` the maximum of ``P(A)`` over
    the members.  A view can also be built directly from a table of lower
    values (:meth:`from_lower`); its upper values are then the conjugate
    ``1 - lower(A^c)``.

    Full event tables are computed on first use and cached.  Filling the
    cache is idempotent, so concurrent readers at worst repeat the work.
    """

    def __init__(self, source: CredalSet):
        if isinstance(source, ProbMeasure):
            source = CredalSet([source])
        self.source = source
        self.size = source.size
        self._lower = None
        self._upper = None

    @classmethod
    def from_lower(cls, size, table, tol=1e-12, check_monotone=True):
        """A view given by its lower values on all ``2**size`` events.

        Set ``check_monotone=False`` to tabulate the output of an update rule
        whose monotonicity is itself under test.
        """
        table = np.array(table, dtype=float)
        if table.shape != (1 << size,):
            raise DomainError(f"expected {1 << size} lower values, got {table.shape}")
        if abs(table[0]) > tol or abs(table[-1] - 1.0) > tol:
            raise DomainError("a lower probability must be 0 on the empty event and 1 on the space")
        masks = np.arange(1 << size)
        for i in range(size if check_monotone else 0):
            without = masks[(masks >> i & 1) == 0]
            if np.any(table[without | (1 << i)] < table[without] - tol):
                raise DomainError("lower values are not monotone")
        view = cls.__new__(cls)
        view.source = None
        view.size = size
        table.flags.writeable = False
        view._lower = table
        full = (1 << size) - 1
        upper = 1.0 - table[full ^ masks]
        upper.flags.writeable = False
        view._upper = upper
        return view

    @property
    def is_tabulated(self):
        return self.source is None

    @property
    def full_mask(self):
        return (1 << self.size) - 1

    def lower(self, A) -> float:
        A = as_event(A).check(self.size)
        if self.source is None:
            return float(self._lower[A.mask])
        return min(probability_of(P, A) for P in self.source)

    def upper(self, A) -> float:
        A = as_event(A).check(self.size)
        if self.source is None:
            return float(self._upper[A.mask])
        return max(probability_of(P, A) for P in self.source)

    def value(self, A, side="lower") -> float:
        if side == "lower":
            return self.lower(A)
        if side == "upper":
            return self.upper(A)
        raise DomainError(f"side must be 'lower' or 'upper', got {side!r}")

    def _tables(self):
        if self._lower is None:
            if self.size > MAX_TABLE_SIZE:
                raise DomainError(f"event tables are limited to {MAX_TABLE_SIZE} outcomes")
            tables = np.vstack([event_table(P) for P in self.source])
            lower, upper = tables.min(axis=0), tables.max(axis=0)
            lower.flags.writeable = False
            upper.flags.writeable = False
            self._upper = upper
            self._lower = lower
        return self._lower, self._upper

    def lower_table(self) -> np.ndarray:
        return self._tables()[0]

    def upper_table(self) -> np.ndarray:
        return self._tables()[1]

    def table(self, side="lower") -> np.ndarray:
        if side not in ("lower", "upper"):
            raise DomainError(f"side must be 'lower' or 'upper', got {side!r}")
        return self.lower_table() if side == "lower" else self.upper_table()

    def expectations(self, f) -> np.ndarray:
        """Expectation of ``f`` under every member (credal views only)."""
        if self.source is None:
            raise DomainError("a tabulated view has no member measures")
        values = BoundedFunction.coerce(f, self.size).values
        return self.source.matrix @ values

    def __repr__(self):
        if self.source is None:
            return f"LowerUpperView(tabulated, size={self.size})"
        return f"LowerUpperView({len(self.source)} measures, size={self.size})"


def as_view(obj) -> LowerUpperView:
    if isinstance(obj, LowerUpperView):
        return obj
    if isinstance(obj, (ProbMeasure, CredalSet)):
        return LowerUpperView(obj)
    raise DomainError(f"cannot build a lower/upper view from {type(obj).__name__}")


def disjoint_pairs(size, samples=20000, seed=0, exhaustive_limit=EXHAUSTIVE_PAIR_LIMIT):
    """Mask arrays ``(A, B)`` of disjoint event pairs.

    Every ordered pair for ``size <= exhaustive_limit`` (``3**size`` of them),
    otherwise ``samples`` pairs drawn with a seeded generator.
    """
    if size <= exhaustive_limit:
        a = np.zeros(1, dtype=np.int64)
        b = np.zeros(1, dtype=np.int64)
        for i in range(size):
            bit = np.int64(1 << i)
            a = np.concatenate([a, a | bit, a])
            b = np.concatenate([b, b, b | bit])
        return a, b
    rng = np.random.default_rng(seed)
    digits = rng.integers(0, 3, size=(samples, size))
    weights = np.int64(1) << np.arange(size, dtype=np.int64)
    return (digits == 1) @ weights, (digits == 2) @ weights


def check_superadditive_lower(view, tol=TOL, samples=20000, seed=0) -> bool:
    view = as_view(view)
    lo = view.lower_table()
    a, b = disjoint_pairs(view.size, samples, seed)
    return bool(np.all(lo[a | b] >= lo[a] + lo[b] - tol))


def check_subadditive_upper(view, tol=TOL, samples=20000, seed=0) -> bool:
    view = as_view(view)
    up = view.upper_table()
    a, b = disjoint_pairs(view.size, samples, seed)
    return bool(np.all(up[a | b] <= up[a] + up[b] + tol))


def in_core(P: ProbMeasure, view, tol=TOL) -> bool:
    """Does ``P`` dominate the lower probability on every event?"""
    view = as_view(view)
    if P.size != view.size:
        raise DomainError(f"measure has {P.size} outcomes, view has {view.size}")
    return bool(np.all(event_table(P) >= view.lower_table() - tol))


class TransformationMap:
    """A total self-map of ``range(size)``."""

    __slots__ = ("forward",)

    def __init__(self, forward):
        forward = tuple(int(x) for x in forward)
        n = len(forward)
        if n == 0:
            raise DomainError("a transformation needs at least one outcome")
        bad = [x for x in forward if not 0 <= x < n]
        if bad:
            raise DomainError(f"images {bad} outside a space of size {n}")
        self.forward = forward

    @classmethod
    def identity(cls, size):
        return cls(range(size))

    @classmethod
    def cycle(cls, size, step=1):
        """``w -> w + step (mod size)``."""
        return cls((i + step) % size for i in range(size))

    @classmethod
    def from_cycles(cls, size, cycles):
        """Permutation given in cycle notation; unlisted outcomes are fixed."""
        forward = list(range(size))
        seen = set()
        for c in cycles:
            for i, x in enumerate(c):
                if x in seen or not 0 <= x < size:
                    raise DomainError(f"outcome {x} repeated or out of range in cycles")
                seen.add(x)
                forward[x] = c[(i + 1) % len(c)]
        return cls(forward)

    @property
    def size(self):
        return len(self.forward)

    def __call__(self, outcome):
        return self.forward[outcome]

    def __len__(self):
        return self.size

    def __eq__(self, other):
        return isinstance(other, TransformationMap) and self.forward == other.forward

    def __hash__(self):
        return hash(self.forward)

    def __repr__(self):
        return f"TransformationMap({list(self.forward)})"

    def is_permutation(self):
        return len(set(self.forward)) == self.size

    def preimage(self, A) -> Event:
        A = as_event(A).check(self.size)
        return Event(tuple(w for w, t in enumerate(self.forward) if t in A))

    def preimage_masks(self, masks) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.int64)
        out = np.zeros_like(masks)
        for w, t in enumerate(self.forward):
            out |= ((masks >> t) & 1) << w
        return out

    def pushforward(self, P: ProbMeasure) -> ProbMeasure:
        out = np.zeros(self.size)
        np.add.at(out, list(self.forward), P.weights)
        return ProbMeasure(out)

    def iterate(self, start, n):
        """``[start, T(start), ..., T^(n-1)(start)]``."""
        out = [start]
        for _ in range(n - 1):
            out.append(self.forward[out[-1]])
        return out


def _check_same(view, T):
    if view.size != T.size:
        raise DomainError(f"view over {view.size} outcomes, map over {T.size}")


def is_invariant(obj, T: TransformationMap, tol=TOL) -> bool:
    """``nu(T^-1 A) = nu(A)`` for every event; ``nu`` is the lower probability of a view."""
    view = as_view(obj)
    _check_same(view, T)
    lo = view.lower_table()
    masks = np.arange(lo.size, dtype=np.int64)
    return bool(np.all(np.abs(lo[T.preimage_masks(masks)] - lo) <= tol))


def is_strongly_invariant(obj, T: TransformationMap, tol=TOL) -> bool:
    """``nu(A - T^-1 A) = upper(T^-1 A - A)`` and ``nu(T^-1 A - A) = upper(A - T^-1 A)``."""
    view = as_view(obj)
    _check_same(view, T)
    lo, up = view.lower_table(), view.upper_table()
    masks = np.arange(lo.size, dtype=np.int64)
    pre = T.preimage_masks(masks)
    a_minus = masks & ~pre
    pre_minus = pre & ~masks
    return bool(np.all(np.abs(lo[a_minus] - up[pre_minus]) <= tol)
                and np.all(np.abs(lo[pre_minus] - up[a_minus]) <= tol))


@dataclass(frozen=True)
class InvariantStructure:
    """Invariant events of a map: exactly the unions of ``generator_blocks``."""

    generator_blocks: tuple[Event, ...]
    size: int

    def algebra(self) -> GeneratedAlgebra:
        return GeneratedAlgebra(self.generator_blocks, self.size)

    @property
    def invariant_events(self) -> list[Event]:
        return self.algebra().events()

    def contains(self, A) -> bool:
        return self.algebra().contains(A)

    def block_of(self, outcome) -> Event:
        for b in self.generator_blocks:
            if outcome in b:
                return b
        raise DomainError(f"outcome {outcome} out of range")


def invariant_events(T: TransformationMap) -> InvariantStructure:
    """Weakly connected components of the functional graph of ``T``.

    ``T^-1 A = A`` forces ``A`` to be closed under both ``T`` and ``T^-1``,
    so the invariant events are the unions of these components.
    """
    parent = list(range(T.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for w, t in enumerate(T.forward):
        rw, rt = find(w), find(t)
        if rw != rt:
            parent[max(rw, rt)] = min(rw, rt)
    groups = {}
    for w in range(T.size):
        groups.setdefault(find(w), []).append(w)
    blocks = tuple(Event(tuple(g)) for _, g in sorted(groups.items()))
    return InvariantStructure(blocks, T.size)


def is_ergodic(obj, T: TransformationMap, tol=TOL) -> bool:
    """Lower probability (or the measure) is 0 or 1 on every invariant event."""
    view = as_view(obj)
    _check_same(view, T)
    for A in invariant_events(T).invariant_events:
        v = view.lower(A)
        if min(abs(v), abs(v - 1.0)) > tol:
            return False
    return True


def is_convex(view, tol=TOL) -> bool:
    """Supermodularity of the lower probability over all event pairs."""
    view = as_view(view)
    if view.size > CONVEXITY_LIMIT:
        raise DomainError(f"pairwise convexity check limited to {CONVEXITY_LIMIT} outcomes")
    lo = view.lower_table()
    masks = np.arange(lo.size, dtype=np.int64)
    for a in range(lo.size):
        if np.any(lo[a | masks] + lo[a & masks] < lo[a] + lo - tol):
            return False
    return True


def is_continuous_at_omega(view) -> bool:
    """Always true: on a finite space an increasing sequence reaching the
    space is eventually equal to it."""
    as_view(view)
    return True


def choquet_integral(view, f, side="lower") -> float:
    """Layer-cake integral of ``f`` against the lower or upper probability.

    With the distinct values of ``f`` sorted as ``v_1 > ... > v_m``:

        v_m * nu(space) + sum_{i<m} (v_i - v_{i+1}) * nu({f >= v_i})

    which is the finite form of splitting the integral at zero into the
    positive part and the ``nu({f >= t}) - nu(space)`` negative part.
    """
    view = as_view(view)
    values = BoundedFunction.coerce(f, view.size).values
    levels = np.unique(values)[::-1]
    total = float(levels[-1]) * view.value(Event.full(view.size), side)
    for i in range(len(levels) - 1):
        upper_set = Event(tuple(np.flatnonzero(values >= levels[i])))
        total += float(levels[i] - levels[i + 1]) * view.value(upper_set, side)
    return total
