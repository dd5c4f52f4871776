"""Scenario files: YAML documents describing one run.

Only ``schema``, ``name``, ``space`` and ``credal_set`` are required; each
command checks for the sections it needs.  Every validation failure raises
:class:`ScenarioError` naming the offending field, e.g.
``credal_set[1]: weights sum to 0.9, not 1``.

Example::

    schema: 1
    name: survey
    space: {labels: [a, b, c], metric: discrete}
    credal_set: [[0.2, 0.3, 0.5], [0.3, 0.3, 0.4]]
    events: {first: [0]}
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .capacities import TransformationMap
from .errors import DomainError, ScenarioError
from .ergodic import ReweightPolicy
from .measures import BoundedFunction, CredalSet, Event, ProbMeasure, SampleSpace
from .partitions import GeneratedAlgebra, Partition, coarsest_partition

SCHEMA_VERSION = 1
DEFAULT_TOLERANCES = {"probability": 1e-9, "verdict": 1e-6}
COMMANDS = ("update", "kinematics", "ergodic", "slln", "classify")


@dataclass
class Scenario:
    name: str
    path: Path | None
    space: SampleSpace
    credal_set: CredalSet
    events: dict[str, Event] = field(default_factory=dict)
    transformation: TransformationMap | None = None
    function: BoundedFunction | None = None
    update: dict[str, Any] | None = None
    schedule: dict[str, Any] | None = None
    run: dict[str, Any] = field(default_factory=dict)
    compare_to: dict[str, Any] | None = None
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    commands: tuple[str, ...] = ()
    seed: int = 0

    @property
    def size(self):
        return self.space.size


def _require(doc, key, where):
    if key not in doc:
        raise ScenarioError(f"{where}{key}" if where else key, "missing required field")
    return doc[key]


def _wrap(path, fn, *args):
    try:
        return fn(*args)
    except ScenarioError:
        raise
    except (DomainError, ValueError, TypeError, KeyError, IndexError) as exc:
        raise ScenarioError(path, str(exc)) from exc


def _int_list(value, path, size=None):
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise ScenarioError(path, "expected a list of outcome indices")
    if size is not None:
        bad = [x for x in value if not 0 <= x < size]
        if bad:
            raise ScenarioError(path, f"indices {bad} outside 0..{size - 1}")
    return value


def _number_list(value, path):
    if not isinstance(value, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
        raise ScenarioError(path, "expected a list of numbers")
    return [float(x) for x in value]


def parse_space(doc):
    if not isinstance(doc, dict):
        raise ScenarioError("space", "expected a mapping")
    labels = doc.get("labels")
    size = doc.get("size", len(labels) if isinstance(labels, list) else None)
    if not isinstance(size, int) or size < 1:
        raise ScenarioError("space.size", "give a positive size or a list of labels")
    metric = doc.get("metric", "discrete")
    if metric == "discrete":
        return _wrap("space", SampleSpace.discrete, size, labels)
    if metric == "line":
        return _wrap("space", SampleSpace.line, size, labels)
    if metric == "ring":
        return _wrap("space", SampleSpace.ring, size, labels)
    if metric == "points":
        pts = _require(doc, "points", "space.")
        return _wrap("space.points", SampleSpace.from_points, pts, labels)
    if metric == "matrix":
        d = _require(doc, "distances", "space.")
        return _wrap("space.distances", SampleSpace, d, labels)
    raise ScenarioError("space.metric", f"unknown metric {metric!r}; use discrete, line, ring, points or matrix")


def parse_credal_set(doc, size, path="credal_set"):
    if not isinstance(doc, list) or not doc:
        raise ScenarioError(path, "expected a non-empty list of weight lists")
    measures = []
    for i, w in enumerate(doc):
        w = _number_list(w, f"{path}[{i}]")
        if len(w) != size:
            raise ScenarioError(f"{path}[{i}]", f"has {len(w)} weights, space has {size} outcomes")
        measures.append(_wrap(f"{path}[{i}]", ProbMeasure, w))
    return CredalSet(measures)


def parse_transformation(doc, size):
    path = "transformation"
    if isinstance(doc, list):
        doc = {"map": doc}
    if not isinstance(doc, dict) or len(doc) != 1:
        raise ScenarioError(path, "expected exactly one of map, cycle, identity, cycles")
    (kind, value), = doc.items()
    if kind == "map":
        _int_list(value, f"{path}.map", size)
        if len(value) != size:
            raise ScenarioError(f"{path}.map", f"has {len(value)} entries, space has {size} outcomes")
        return TransformationMap(value)
    if kind == "cycle":
        step = 1 if value is True else value
        if not isinstance(step, int):
            raise ScenarioError(f"{path}.cycle", "expected true or an integer step")
        return TransformationMap.cycle(size, step)
    if kind == "identity":
        return TransformationMap.identity(size)
    if kind == "cycles":
        if not isinstance(value, list):
            raise ScenarioError(f"{path}.cycles", "expected a list of cycles")
        for i, c in enumerate(value):
            _int_list(c, f"{path}.cycles[{i}]", size)
        return _wrap(f"{path}.cycles", TransformationMap.from_cycles, size, value)
    raise ScenarioError(path, f"unknown transformation kind {kind!r}")


def parse_function(doc, size, seed):
    path = "function"
    if isinstance(doc, dict) and "random" in doc:
        spec = doc["random"] or {}
        low, high = float(spec.get("low", -1.0)), float(spec.get("high", 1.0))
        if not low < high:
            raise ScenarioError(f"{path}.random", "needs low < high")
        rng = np.random.default_rng(seed)
        return BoundedFunction(rng.uniform(low, high, size))
    values = _number_list(doc, path)
    if len(values) != size:
        raise ScenarioError(path, f"has {len(values)} values, space has {size} outcomes")
    return _wrap(path, BoundedFunction, values)


def parse_partition(doc, space, path):
    if isinstance(doc, dict) and "observations" in doc:
        obs = _int_list(doc["observations"], f"{path}.observations", space.size)
        return _wrap(path, coarsest_partition, space, obs)
    if not isinstance(doc, list):
        raise ScenarioError(path, "expected (generator, members) pairs or {observations: [...]}")
    pairs = []
    for i, item in enumerate(doc):
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], int)):
            raise ScenarioError(f"{path}[{i}]", "expected [generator, [members...]]")
        pairs.append((item[0], _int_list(item[1], f"{path}[{i}][1]", space.size)))
    return _wrap(path, Partition.from_pairs, pairs, space.size)


def parse_policy(doc, size, path="schedule.policy"):
    if doc is None:
        return ReweightPolicy()
    if isinstance(doc, str):
        doc = {"kind": doc}
    if not isinstance(doc, dict):
        raise ScenarioError(path, "expected a policy mapping")
    lik = doc.get("likelihood")
    if lik is not None:
        lik = _number_list(lik, f"{path}.likelihood")
        if len(lik) != size:
            raise ScenarioError(f"{path}.likelihood", f"has {len(lik)} values, space has {size} outcomes")
    pivot = doc.get("pivot")
    if pivot is not None and not (isinstance(pivot, int) and 0 <= pivot < size):
        raise ScenarioError(f"{path}.pivot", "expected an outcome index")
    return _wrap(path, ReweightPolicy, doc.get("kind", "keep-block-masses"), pivot,
                 doc.get("pivot_mass"), lik)


def parse_algebra(doc, size, path):
    if not isinstance(doc, list):
        raise ScenarioError(path, "expected a list of atoms")
    atoms = [Event(tuple(_int_list(a, f"{path}[{i}]", size))) for i, a in enumerate(doc)]
    return _wrap(path, GeneratedAlgebra, atoms, size)


def load_document(doc, path=None, seed=None) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("<root>", "expected a mapping at the top level")
    version = _require(doc, "schema", "")
    if version != SCHEMA_VERSION:
        raise ScenarioError("schema", f"unsupported schema version {version!r}; expected {SCHEMA_VERSION}")
    name = _require(doc, "name", "")
    if not isinstance(name, str) or not name:
        raise ScenarioError("name", "expected a non-empty string")
    known = {"schema", "name", "description", "space", "credal_set", "events", "transformation",
             "function", "update", "schedule", "run", "compare_to", "tolerances", "commands"}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ScenarioError(unknown[0], "unknown field")
    space = parse_space(_require(doc, "space", ""))
    credal = parse_credal_set(_require(doc, "credal_set", ""), space.size)
    run = doc.get("run") or {}
    if not isinstance(run, dict):
        raise ScenarioError("run", "expected a mapping")
    if seed is None:
        seed = run.get("seed", 0)
    if not isinstance(seed, int):
        raise ScenarioError("run.seed", "expected an integer")
    events = {}
    for key, members in (doc.get("events") or {}).items():
        events[str(key)] = Event(tuple(_int_list(members, f"events.{key}", space.size)))
    tolerances = dict(DEFAULT_TOLERANCES)
    for key, value in (doc.get("tolerances") or {}).items():
        if key not in DEFAULT_TOLERANCES:
            raise ScenarioError(f"tolerances.{key}", f"unknown tolerance; use one of {sorted(DEFAULT_TOLERANCES)}")
        if not isinstance(value, (int, float)) or value < 0:
            raise ScenarioError(f"tolerances.{key}", "expected a non-negative number")
        tolerances[key] = float(value)
    commands = doc.get("commands") or []
    for i, c in enumerate(commands):
        if c not in COMMANDS:
            raise ScenarioError(f"commands[{i}]", f"unknown command {c!r}")
    scenario = Scenario(
        name=name,
        path=Path(path) if path else None,
        space=space,
        credal_set=credal,
        events=events,
        transformation=parse_transformation(doc["transformation"], space.size) if "transformation" in doc else None,
        function=parse_function(doc["function"], space.size, seed) if "function" in doc else None,
        update=doc.get("update"),
        schedule=doc.get("schedule"),
        run=run,
        compare_to=doc.get("compare_to"),
        tolerances=tolerances,
        commands=tuple(commands),
        seed=seed,
    )
    return scenario


def load_scenario(path, seed=None) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(str(path), f"cannot read: {exc.strerror}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else str(path)
        raise ScenarioError(where, f"invalid YAML: {getattr(exc, 'problem', exc)}") from exc
    return load_document(doc, path, seed)
