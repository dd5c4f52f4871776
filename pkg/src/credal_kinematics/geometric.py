"""Conditioning and updating of lower probabilities.

The geometric conditional is ``lower(A & B) / lower(B)``.  The Jeffrey-geometric
update carries new lower values given on a finite algebra over to every event:

    new_lower(A) = lower(A | B_A) * assessed(B_A)

with ``B_A`` the smallest algebra event containing ``A``.  The behaviour
classifier compares two views event by event.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .capacities import TOL, LowerUpperView, as_view
from .errors import DomainError, NullConditioningError
from .measures import Event, as_event
from .partitions import GeneratedAlgebra


def geometric_conditional(view, A, B) -> float:
    view = as_view(view)
    A, B = as_event(A), as_event(B)
    denom = view.lower(B)
    if denom <= 0.0:
        raise NullConditioningError(f"lower probability of {B} is {denom!r}")
    return view.lower(A & B) / denom


def smallest_superset(algebra: GeneratedAlgebra, A) -> Event:
    return algebra.smallest_superset(A)


def _assessed_table(algebra: GeneratedAlgebra, new_lower: Mapping, tol=1e-12) -> dict:
    """Validate the assessed lowers and return them keyed by event mask."""
    table = {}
    for key, value in new_lower.items():
        ev = as_event(key).check(algebra.size)
        if not algebra.contains(ev):
            raise DomainError(f"{ev} is not an event of the algebra")
        value = float(value)
        if not 0.0 - tol <= value <= 1.0 + tol:
            raise DomainError(f"assessed lower {value!r} on {ev} is not a probability")
        table[ev.mask] = value
    full = (1 << algebra.size) - 1
    if abs(table.get(0, 0.0)) > tol:
        raise DomainError("assessed lower of the empty event must be 0")
    table.setdefault(0, 0.0)
    if full in table and abs(table[full] - 1.0) > tol:
        raise DomainError("assessed lower of the whole space must be 1")
    # monotone on the listed algebra events
    items = sorted(table.items())
    for m1, v1 in items:
        for m2, v2 in items:
            if m1 & ~m2 == 0 and v1 > v2 + tol:
                raise DomainError(f"assessed lowers not monotone: {Event.from_mask(m1)} "
                                  f"has {v1!r} > {v2!r} on {Event.from_mask(m2)}")
    return table


def _jg_value(view, table, B_A, A):
    if B_A.mask not in table:
        raise DomainError(f"no assessed lower for the smallest algebra superset {B_A} of {A}")
    assessed = table[B_A.mask]
    if A.mask == B_A.mask:
        return assessed
    return geometric_conditional(view, A, B_A) * assessed


def jg_update(view_k, algebra: GeneratedAlgebra, new_lower_on_algebra: Mapping, A) -> float:
    view_k = as_view(view_k)
    if view_k.size != algebra.size:
        raise DomainError("view and algebra over different spaces")
    A = as_event(A).check(view_k.size)
    table = _assessed_table(algebra, new_lower_on_algebra)
    return _jg_value(view_k, table, algebra.smallest_superset(A), A)


def jg_value_via(view_k, new_lower_on_algebra: Mapping, A, B) -> float:
    """``lower_k(A | B) * assessed(B)`` for a chosen algebra superset ``B`` of ``A``.

    The update itself always uses the smallest superset; this exposes the
    value a larger superset would give, to measure how much the choice matters.
    """
    A, B = as_event(A), as_event(B)
    if not A.issubset(B):
        raise DomainError(f"{B} does not contain {A}")
    assessed = {as_event(k).mask: float(v) for k, v in new_lower_on_algebra.items()}
    if B.mask not in assessed:
        raise DomainError(f"no assessed lower for {B}")
    return geometric_conditional(view_k, A, B) * assessed[B.mask]


def jg_updated_view(view_k, algebra: GeneratedAlgebra, new_lower_on_algebra: Mapping) -> LowerUpperView:
    """Tabulate the update on every event of the space."""
    view_k = as_view(view_k)
    n = view_k.size
    if n != algebra.size:
        raise DomainError("view and algebra over different spaces")
    table = _assessed_table(algebra, new_lower_on_algebra)
    masks = np.arange(1 << n, dtype=np.int64)
    ba = np.zeros_like(masks)
    for atom in algebra.atoms:
        ba |= np.where(masks & atom.mask, atom.mask, 0)
    missing = sorted({int(b) for b in np.unique(ba)} - set(table))
    if missing:
        raise DomainError(f"no assessed lower for algebra event {Event.from_mask(missing[0])}")
    assessed = np.zeros(1 << n)
    for m, v in table.items():
        assessed[m] = v
    lo = view_k.lower_table()
    own = masks == ba
    null = ~own & (lo[ba] <= 0.0)
    if np.any(null):
        bad = Event.from_mask(int(ba[np.argmax(null)]))
        raise NullConditioningError(f"lower probability of {bad} is 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(own, assessed[ba], lo[masks] / lo[ba] * assessed[ba])
    return LowerUpperView.from_lower(n, out, check_monotone=False)


@dataclass(frozen=True)
class BehaviorLabel:
    """How one view relates to the next: contraction, dilation, sure-loss or none."""

    label: str
    witness: Event | None = None

    def __str__(self):
        return self.label if self.witness is None else f"{self.label} {self.witness}"


def _tables(view_k, view_k1):
    view_k, view_k1 = as_view(view_k), as_view(view_k1)
    if view_k.size != view_k1.size:
        raise DomainError(f"views over different spaces ({view_k.size} and {view_k1.size})")
    return view_k.lower_table(), view_k.upper_table(), view_k1.lower_table(), view_k1.upper_table()


def weak_relations(view_k, view_k1, tol=TOL) -> dict:
    """Weak, event-wise relations between consecutive lower probabilities."""
    lo0, _, lo1, _ = _tables(view_k, view_k1)
    return {
        "weak_contraction": bool(np.all(lo1 >= lo0 - tol)),
        "weak_dilation": bool(np.all(lo1 <= lo0 + tol)),
    }


def classify_behavior(view_k, view_k1, tol=TOL) -> BehaviorLabel:
    """Sure loss takes precedence; otherwise contraction or dilation needs a
    weak inequality on every event and a strict one on the witness."""
    lo0, up0, lo1, up1 = _tables(view_k, view_k1)
    loss = (lo1 > up0 + tol) | (up1 < lo0 - tol)
    if np.any(loss):
        return BehaviorLabel("sure-loss", Event.from_mask(int(np.argmax(loss))))
    up_steps = lo1 > lo0 + tol
    down_steps = lo1 < lo0 - tol
    if np.any(up_steps) and not np.any(down_steps):
        return BehaviorLabel("contraction", Event.from_mask(int(np.argmax(up_steps))))
    if np.any(down_steps) and not np.any(up_steps):
        return BehaviorLabel("dilation", Event.from_mask(int(np.argmax(down_steps))))
    return BehaviorLabel("none")


@dataclass(frozen=True)
class ContractionCheck:
    holds: bool
    offending: Event | None = None

    def __bool__(self):
        return self.holds


def contraction_condition(view_k, view_k1, algebra: GeneratedAlgebra, tol=TOL) -> ContractionCheck:
    """Every algebra event containing some ``A`` keeps or raises its lower value.

    Every algebra event contains the empty event, so this is a check over all
    algebra events.
    """
    view_k, view_k1 = as_view(view_k), as_view(view_k1)
    if not view_k.size == view_k1.size == algebra.size:
        raise DomainError("views and algebra over different spaces")
    for m in algebra.event_masks():
        B = Event.from_mask(m)
        if view_k1.lower(B) < view_k.lower(B) - tol:
            return ContractionCheck(False, B)
    return ContractionCheck(True)
