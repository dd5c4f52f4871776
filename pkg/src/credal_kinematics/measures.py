"""Finite sample spaces, events, probability measures and credal sets.

Everything here is immutable.  Probability vectors are stored as read-only
numpy arrays; events are canonical sorted tuples of outcome indices that also
carry their bitmask, which is what the exhaustive (all ``2**n`` events)
routines elsewhere in the package index by.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DomainError

PROB_TOL = 1e-9
NORMALIZE_TOL = 1e-6
CANONICAL_TOL = 1e-12

__all__ = [
    "SampleSpace",
    "Event",
    "ProbMeasure",
    "CredalSet",
    "BoundedFunction",
    "as_event",
    "probability_of",
    "uniform_distance",
    "weak_distance",
    "hausdorff_distance",
    "dtilde_step",
    "event_masks",
    "indicator_matrix",
    "event_table",
]


def _frozen(array):
    array = np.array(array, dtype=float)
    array.flags.writeable = False
    return array


class SampleSpace:
    """A finite metric space of outcomes.

    ``distances`` must be a metric: symmetric, zero on the diagonal, strictly
    positive off it, and satisfying the triangle inequality.
    """

    __slots__ = ("_distances", "_labels")

    def __init__(self, distances, labels=None):
        d = np.asarray(distances, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
            raise DomainError(f"distance matrix must be square and non-empty, got shape {d.shape}")
        n = d.shape[0]
        if not np.all(np.isfinite(d)):
            raise DomainError("distances must be finite")
        if not np.allclose(d, d.T, rtol=0.0, atol=1e-12):
            raise DomainError("distance matrix is not symmetric")
        if np.any(np.diag(d) != 0.0):
            raise DomainError("distance matrix must have a zero diagonal")
        off = d[~np.eye(n, dtype=bool)]
        if np.any(off <= 0.0):
            raise DomainError("distinct outcomes must be at positive distance")
        # d[i, k] <= d[i, j] + d[j, k] for all triples
        if n > 2 and np.any(d[:, None, :] > d[:, :, None] + d[None, :, :] + 1e-12):
            raise DomainError("distance matrix violates the triangle inequality")
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise DomainError(f"expected {n} labels, got {len(labels)}")
        self._distances = _frozen(d)
        self._labels = labels

    @classmethod
    def discrete(cls, n, labels=None):
        """Every pair of distinct outcomes at distance 1."""
        return cls(1.0 - np.eye(n), labels)

    @classmethod
    def line(cls, n, labels=None):
        """Outcomes ``0..n-1`` on the integer line, ``d(i, j) = |i - j|``."""
        idx = np.arange(n, dtype=float)
        return cls(np.abs(idx[:, None] - idx[None, :]), labels)

    @classmethod
    def ring(cls, n, labels=None):
        """Outcomes on a cycle of length ``n`` with the shortest-arc distance."""
        idx = np.arange(n)
        diff = np.abs(idx[:, None] - idx[None, :])
        return cls(np.minimum(diff, n - diff).astype(float), labels)

    @classmethod
    def from_points(cls, points, labels=None):
        """Euclidean distances between the given coordinates."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        diff = pts[:, None, :] - pts[None, :, :]
        return cls(np.sqrt((diff**2).sum(axis=-1)), labels)

    @property
    def size(self):
        return self._distances.shape[0]

    @property
    def labels(self):
        return self._labels

    @property
    def distances(self):
        return self._distances

    def distance(self, i, j):
        return float(self._distances[i, j])

    def __len__(self):
        return self.size

    def __eq__(self, other):
        if not isinstance(other, SampleSpace):
            return NotImplemented
        return self._labels == other._labels and np.array_equal(self._distances, other._distances)

    def __hash__(self):
        return hash((self._labels, self._distances.tobytes()))

    def __repr__(self):
        return f"SampleSpace(size={self.size}, labels={list(self._labels)})"


@dataclass(frozen=True)
class Event:
    """A subset of outcome indices, stored sorted and deduplicated."""

    members: tuple[int, ...] = ()
    mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        members = tuple(sorted({int(m) for m in self.members}))
        if members and members[0] < 0:
            raise DomainError(f"negative outcome index {members[0]}")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "mask", sum(1 << m for m in members))

    @classmethod
    def of(cls, *members):
        return cls(tuple(members))

    @classmethod
    def from_mask(cls, mask):
        members = []
        i = 0
        while mask:
            if mask & 1:
                members.append(i)
            mask >>= 1
            i += 1
        return cls(tuple(members))

    @classmethod
    def full(cls, size):
        return cls(tuple(range(size)))

    def check(self, size):
        if self.members and self.members[-1] >= size:
            raise DomainError(f"event {list(self.members)} references outcome {self.members[-1]} "
                              f"outside a space of size {size}")
        return self

    def complement(self, size):
        return Event.from_mask(((1 << size) - 1) & ~self.mask)

    def __or__(self, other):
        return Event.from_mask(self.mask | as_event(other).mask)

    def __and__(self, other):
        return Event.from_mask(self.mask & as_event(other).mask)

    def __sub__(self, other):
        return Event.from_mask(self.mask & ~as_event(other).mask)

    def issubset(self, other):
        return self.mask & ~as_event(other).mask == 0

    def isdisjoint(self, other):
        return self.mask & as_event(other).mask == 0

    def __contains__(self, outcome):
        return outcome >= 0 and bool(self.mask >> outcome & 1)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __bool__(self):
        return bool(self.members)

    def __str__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


def as_event(obj) -> Event:
    if isinstance(obj, Event):
        return obj
    return Event(tuple(obj))


class ProbMeasure:
    """A probability vector over ``range(size)``.

    Weights whose total is within ``PROB_TOL`` of one are stored as given, so
    exact inputs stay exact; totals off by up to ``NORMALIZE_TOL`` are
    renormalized and anything further off is rejected as a modelling error.
    """

    __slots__ = ("_weights",)

    def __init__(self, weights):
        w = np.array(weights, dtype=float).ravel()
        if w.size == 0:
            raise DomainError("a probability measure needs at least one outcome")
        if not np.all(np.isfinite(w)):
            raise DomainError("weights must be finite")
        if np.any(w < -CANONICAL_TOL):
            raise DomainError(f"negative weight {w.min()!r}")
        w = np.clip(w, 0.0, None)
        total = math.fsum(w)
        if abs(total - 1.0) > NORMALIZE_TOL:
            raise DomainError(f"weights sum to {total!r}, not 1")
        if abs(total - 1.0) > PROB_TOL:
            w = w / total
        self._weights = _frozen(w)

    @classmethod
    def uniform(cls, size):
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def point_mass(cls, size, outcome):
        w = np.zeros(size)
        w[outcome] = 1.0
        return cls(w)

    @property
    def weights(self):
        return self._weights

    @property
    def size(self):
        return self._weights.size

    def __len__(self):
        return self.size

    def __call__(self, event):
        return probability_of(self, event)

    def expectation(self, f):
        values = BoundedFunction.coerce(f, self.size).values
        return math.fsum(values * self._weights)

    def conditional(self, event, given):
        """``P(event | given)``; raises on a null conditioning event."""
        from .errors import NullConditioningError

        denom = self(given)
        if denom <= 0.0:
            raise NullConditioningError(f"P({as_event(given)}) = 0")
        return self(as_event(event) & as_event(given)) / denom

    def __eq__(self, other):
        if not isinstance(other, ProbMeasure):
            return NotImplemented
        return np.array_equal(self._weights, other._weights)

    def __hash__(self):
        return hash(self._weights.tobytes())

    def __repr__(self):
        return "ProbMeasure([" + ", ".join(repr(float(x)) for x in self._weights) + "])"


class CredalSet:
    """A non-empty finite list of measures over one sample space."""

    __slots__ = ("_measures", "_matrix")

    def __init__(self, measures: Iterable):
        ms = tuple(m if isinstance(m, ProbMeasure) else ProbMeasure(m) for m in measures)
        if not ms:
            raise DomainError("a credal set must contain at least one measure")
        sizes = {m.size for m in ms}
        if len(sizes) != 1:
            raise DomainError(f"measures over different sample spaces (sizes {sorted(sizes)})")
        self._measures = ms
        self._matrix = _frozen(np.vstack([m.weights for m in ms]))

    @property
    def measures(self):
        return self._measures

    @property
    def matrix(self):
        """``len(self) x size`` array with one measure per row."""
        return self._matrix

    @property
    def size(self):
        return self._matrix.shape[1]

    def __len__(self):
        return len(self._measures)

    def __iter__(self):
        return iter(self._measures)

    def __getitem__(self, i):
        return self._measures[i]

    def canonical(self, tol=CANONICAL_TOL):
        """Drop measures equal (component-wise within ``tol``) to an earlier one."""
        kept = []
        for m in self._measures:
            if not any(np.max(np.abs(m.weights - k.weights)) <= tol for k in kept):
                kept.append(m)
        return CredalSet(kept)

    def same_members(self, other, tol=CANONICAL_TOL):
        a, b = self.canonical(tol), other.canonical(tol)

        def covered(xs, ys):
            return all(any(np.max(np.abs(x.weights - y.weights)) <= tol for y in ys) for x in xs)

        return covered(a, b) and covered(b, a)

    def __eq__(self, other):
        if not isinstance(other, CredalSet):
            return NotImplemented
        return np.array_equal(self._matrix, other._matrix)

    def __hash__(self):
        return hash(self._matrix.tobytes())

    def __repr__(self):
        return f"CredalSet({list(self._measures)!r})"


class BoundedFunction:
    """Finite real payoffs indexed by outcome."""

    __slots__ = ("_values",)

    def __init__(self, values):
        v = np.array(values, dtype=float).ravel()
        if not np.all(np.isfinite(v)):
            raise DomainError("function values must be finite (no NaN or infinity)")
        self._values = _frozen(v)

    @classmethod
    def coerce(cls, f, size=None):
        if not isinstance(f, BoundedFunction):
            f = cls(f)
        if size is not None and f.size != size:
            raise DomainError(f"function has {f.size} values, space has {size} outcomes")
        return f

    @property
    def values(self):
        return self._values

    @property
    def size(self):
        return self._values.size

    def __len__(self):
        return self.size

    def __getitem__(self, i):
        return float(self._values[i])

    def __repr__(self):
        return f"BoundedFunction({self._values.tolist()})"


def event_masks(size):
    """All ``2**size`` event bitmasks, in increasing order."""
    return np.arange(1 << size, dtype=np.int64)


def indicator_matrix(size):
    """``size x 2**size`` 0/1 matrix; column ``m`` is the indicator of mask ``m``."""
    masks = event_masks(size)
    return ((masks[None, :] >> np.arange(size)[:, None]) & 1).astype(float)


def probability_of(P: ProbMeasure, A) -> float:
    A = as_event(A).check(P.size)
    return _left_sum(P.weights, A.members)


def _left_sum(weights, members):
    # Ascending-index left fold: the same summation order as the bulk event
    # tables in ``capacities``, so single queries and tables agree bit for bit.
    total = 0.0
    for m in members:
        total += float(weights[m])
    return total


def _same_space(P, Q):
    if P.size != Q.size:
        raise DomainError(f"measures over different spaces (sizes {P.size} and {Q.size})")


def uniform_distance(P: ProbMeasure, Q: ProbMeasure) -> float:
    """``max_A |P(A) - Q(A)|``, computed as the positive part of ``P - Q``."""
    _same_space(P, Q)
    diff = P.weights - Q.weights
    return math.fsum(diff[diff > 0])


def weak_distance(P: ProbMeasure, Q: ProbMeasure) -> float:
    """``sup |E_P f - E_Q f|`` over ``f`` with values in ``[-1, 1]``: the L1 distance."""
    _same_space(P, Q)
    return math.fsum(np.abs(P.weights - Q.weights))


_METRICS = {"uniform": uniform_distance, "weak": weak_distance}


def hausdorff_distance(first: CredalSet, second: CredalSet, metric="uniform") -> float:
    try:
        d = _METRICS[metric]
    except KeyError:
        raise DomainError(f"unknown metric {metric!r}; use 'uniform' or 'weak'") from None
    if first.size != second.size:
        raise DomainError(f"credal sets over different spaces (sizes {first.size} and {second.size})")
    table = np.array([[d(p, q) for q in second] for p in first])
    return float(max(table.min(axis=1).max(), table.min(axis=0).max()))


def dtilde_step(current: CredalSet, following: CredalSet, limit: CredalSet, metric="uniform") -> float:
    """``|d_H(current, limit) - d_H(following, limit)|``."""
    if not current.size == following.size == limit.size:
        raise DomainError("credal sets over different spaces")
    return abs(hausdorff_distance(current, limit, metric) - hausdorff_distance(following, limit, metric))


MAX_TABLE_SIZE = 20


def event_table(weights) -> np.ndarray:
    """``P(A)`` for every event mask ``A`` in ``range(2**n)``.

    Built by doubling, so the sum for each mask is an ascending-index left
    fold, identical to :func:`probability_of`.
    """
    w = np.asarray(weights.weights if isinstance(weights, ProbMeasure) else weights, dtype=float)
    if w.size > MAX_TABLE_SIZE:
        raise DomainError(f"event tables are limited to {MAX_TABLE_SIZE} outcomes, got {w.size}")
    table = np.zeros(1, dtype=float)
    for x in w:
        table = np.concatenate([table, table + x])
    return table
