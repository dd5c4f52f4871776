"""Command-line entry point: ``credal-kinematics <command> --scenario FILE``.

Exit status: 0 on success, 1 when a scenario fails validation (or an
operation rejects its inputs), 2 when ``--require-gates`` is given and some
hypothesis gate failed.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .capacities import LowerUpperView
from .errors import DomainError, ScenarioError
from .ergodic import (
    StationarySequenceSpec,
    drive_updates_countable,
    ergodic_interval_check,
    lemma2_bounds_check,
    run_orbit,
    slln_check,
)
from .geometric import classify_behavior, contraction_condition, jg_updated_view, weak_relations
from .jeffrey import (
    LikelihoodSpec,
    PartitionReweight,
    block_masses,
    check_condition_J,
    domination_constant,
    extended_jeffrey_pivot_mass,
    jeffrey_update,
    lrfj,
    reassessed_measure,
)
from .measures import CredalSet, Event
from .partitions import refine
from .report import RunReport
from .scenario import (
    COMMANDS,
    Scenario,
    load_scenario,
    parse_algebra,
    parse_credal_set,
    parse_partition,
    parse_policy,
)

EXIT_OK, EXIT_INVALID, EXIT_GATES = 0, 1, 2


def _need(sc: Scenario, attr, command):
    value = getattr(sc, attr)
    if value is None:
        raise ScenarioError(attr, f"required by the {command} command")
    return value


def _events(sc: Scenario):
    if sc.events:
        return list(sc.events.items())
    return [(sc.space.labels[i], Event.of(i)) for i in range(sc.size)]


def _blocks(partition):
    return [list(b.members) for b in partition.blocks]


def _event_table(report, name, events, before, after=None):
    cols = ["event", "members", "lower", "upper"]
    if after is not None:
        cols += ["lower_after", "upper_after"]
    t = report.table(name, cols)
    for label, ev in events:
        row = [label, list(ev.members), before.lower(ev), before.upper(ev)]
        if after is not None:
            row += [after.lower(ev), after.upper(ev)]
        t.add(*row)


def _reweight(spec, P, partition, path="update"):
    """Reweight for one member, from the ``update`` section."""
    if "masses" in spec:
        return PartitionReweight(partition, tuple(spec["masses"]))
    if "lrfj" in spec:
        s = spec["lrfj"]
        return lrfj(P, partition, s["pivot_block"], s["pivot_mass"], s.get("allow_degenerate", False))
    if "likelihood" in spec:
        s = spec["likelihood"]
        lik = LikelihoodSpec(tuple(s["values"]))
        mass = extended_jeffrey_pivot_mass(P, partition, s["pivot_block"], lik)
        return lrfj(P, partition, s["pivot_block"], mass, allow_degenerate=True)
    raise ScenarioError(path, "give one of masses, lrfj or likelihood")


def cmd_update(sc: Scenario, tol) -> RunReport:
    report = RunReport("update", sc.name)
    before = LowerUpperView(sc.credal_set)
    events = _events(sc)
    if not sc.update:
        report.add("update", "none")
        _event_table(report, "events", events, before)
        return report
    spec = sc.update
    if "partition" not in spec:
        raise ScenarioError("update.partition", "missing required field")
    partition = parse_partition(spec["partition"], sc.space, "update.partition")
    target = partition
    if spec.get("refine"):
        target = refine(sc.space, partition, spec["refine"])
    report.add("partition", _blocks(partition))
    if target is not partition:
        report.add("refined partition", _blocks(target))
    masses = report.table("block masses", ["member", "before", "reassessed", "after"])
    updated = []
    j_ok, bounds = True, []
    for i, P in enumerate(sc.credal_set):
        P_reas = reassessed_measure(P, partition, target) if target is not partition else P
        rw = _reweight(spec, P_reas, target)
        Pstar = jeffrey_update(P_reas, rw)
        updated.append(Pstar)
        masses.add(i, list(block_masses(P, partition)), list(block_masses(P_reas, target)), list(rw.new_masses))
        j_ok &= check_condition_J(P_reas, Pstar, target, sc.tolerances["probability"])
        bounds.append(domination_constant(P_reas, rw))
    after = LowerUpperView(CredalSet(updated))
    report.add("domination constants", bounds)
    _event_table(report, "events", events, before, after)
    members = report.table("updated members", ["member", "weights"])
    for i, P in enumerate(updated):
        members.add(i, [float(x) for x in P.weights])
    report.verdict("within-block conditionals preserved", j_ok)
    return report


def cmd_kinematics(sc: Scenario, tol) -> RunReport:
    report = RunReport("kinematics", sc.name)
    T = _need(sc, "transformation", "kinematics")
    sched = _need(sc, "schedule", "kinematics")
    policy = parse_policy(sched.get("policy"), sc.size)
    batches = sched.get("batches")
    if not isinstance(batches, list) or not all(isinstance(b, int) and b >= 0 for b in batches):
        raise ScenarioError("schedule.batches", "expected a list of non-negative batch sizes")
    start = sc.run.get("start", 0)
    trace = drive_updates_countable(sc.credal_set, sc.space, T, start, batches, policy,
                                    sched.get("initial_observations"), sched.get("metric", "uniform"))
    report.add("policy", policy.kind)
    report.add("start", start)
    steps = report.table("trace", ["k", "observations", "blocks", "behavior", "witness", "dtilde"])
    for s in trace.steps:
        d = trace.dtilde[s.k - 1] if s.k > 0 else None
        label = s.behavior.label if s.behavior else None
        witness = list(s.behavior.witness.members) if s.behavior and s.behavior.witness else None
        steps.add(s.k, list(s.observations), _blocks(s.partition), label, witness, d)
    masses = report.table("reassessed block masses", ["k", "member", "masses"])
    for s in trace.steps:
        for i, m in enumerate(s.reassessed_masses):
            masses.add(s.k, i, list(m))
    events = _events(sc)
    t = report.table("lower/upper by step", ["k", "event", "lower", "upper"])
    for s in trace.steps:
        view = LowerUpperView(s.credal_set)
        for label, ev in events:
            t.add(s.k, label, view.lower(ev), view.upper(ev))
    final = report.table("final members", ["member", "weights"])
    for i, P in enumerate(trace.final):
        final.add(i, [float(x) for x in P.weights])
    report.add("convergence index", trace.convergence_index)
    report.verdict("partitions refine until atomic", trace.refines_until_atomic())
    return report


def cmd_ergodic(sc: Scenario, tol) -> RunReport:
    report = RunReport("ergodic", sc.name)
    T = _need(sc, "transformation", "ergodic")
    f = _need(sc, "function", "ergodic")
    start = sc.run.get("start", 0)
    n_max = sc.run.get("n_max", 10000)
    mode = sc.run.get("mode", "choquet")
    view = LowerUpperView(sc.credal_set)
    r = ergodic_interval_check(f, T, start, view, n_max, mode, sc.space, tol)
    report.gates.extend(r.gates)
    report.add("function", [float(x) for x in f.values])
    report.add("mode", mode)
    report.add("start", start)
    report.add("n_max", n_max)
    report.add("empirical average", r.average)
    report.add("limit function at start", r.limit)
    report.add("tail fluctuation (period-aligned)", r.tail_fluctuation)
    report.add("tail fluctuation (raw)", r.raw_tail_fluctuation)
    b = report.table("bounds", ["name", "lower", "upper"])
    for name, lo, hi in r.bounds:
        b.add(name, lo, hi)
    if r.success_set is not None:
        report.add("starts where contained", list(r.success_set.members))
        report.add("lower probability of those starts", r.success_lower)
    if r.singleton_value is not None:
        report.add("singleton expectation of limit function", r.singleton_value)
    for k, v in r.extra:
        report.add(k, v)
    if sc.run.get("sandwich"):
        s = report.table("averaging sandwich", ["n", "lower_sum", "average", "upper_sum", "holds",
                                                "asserted", "distinct observations", "f non-negative"])
        for n in range(1, 10 * sc.size + 1):
            lr = lemma2_bounds_check(f, run_orbit(sc.space, T, start, n), view, T, space=sc.space)
            s.add(n, lr.lower_sum, lr.average, lr.upper_sum, lr.holds, lr.asserted,
                  lr.premises[0].passed, lr.premises[1].passed)
    report.verdict("ergodic bounds", r.verdict)
    return report


def cmd_slln(sc: Scenario, tol) -> RunReport:
    report = RunReport("slln", sc.name)
    T = _need(sc, "transformation", "slln")
    f = _need(sc, "function", "slln")
    horizon = sc.run.get("horizon", sc.run.get("n_max", 1000))
    spec = StationarySequenceSpec(f, T, horizon)
    r = slln_check(spec, LowerUpperView(sc.credal_set), tol, sc.tolerances["probability"])
    report.gates.extend(r.gates)
    report.add("function", [float(x) for x in f.values])
    report.add("horizon", horizon)
    report.add("choquet lower of f1", r.lower_integral)
    report.add("choquet upper of f1", r.upper_integral)
    t = report.table("averages by start", ["start", "average"])
    for w, a in enumerate(r.averages):
        t.add(w, a)
    report.add("member expectations of the average", list(r.member_expectations))
    if r.success_set is not None:
        report.add("starts where the claim holds", list(r.success_set.members))
        report.add("lower probability of those starts", r.success_lower)
    if r.singleton_value is not None:
        report.add("singleton expectation of f1", r.singleton_value)
    report.verdict("strong law", r.verdict)
    return report


def cmd_classify(sc: Scenario, tol) -> RunReport:
    report = RunReport("classify", sc.name)
    cmp = _need(sc, "compare_to", "classify")
    before = LowerUpperView(sc.credal_set)
    algebra = None
    if "credal_set" in cmp:
        after = LowerUpperView(parse_credal_set(cmp["credal_set"], sc.size, "compare_to.credal_set"))
    elif "jg" in cmp:
        jg = cmp["jg"]
        algebra = parse_algebra(jg.get("atoms"), sc.size, "compare_to.jg.atoms")
        lowers = {}
        for i, item in enumerate(jg.get("lowers") or []):
            if not (isinstance(item, list) and len(item) == 2):
                raise ScenarioError(f"compare_to.jg.lowers[{i}]", "expected [[members...], value]")
            lowers[Event(tuple(item[0]))] = item[1]
        after = jg_updated_view(before, algebra, lowers)
    else:
        raise ScenarioError("compare_to", "give credal_set or jg")
    label = classify_behavior(before, after, sc.tolerances["probability"])
    report.add("behavior", label.label)
    if label.witness is not None:
        w = label.witness
        report.add("witness", list(w.members))
        report.add("witness before", [before.lower(w), before.upper(w)])
        report.add("witness after", [after.lower(w), after.upper(w)])
    for k, v in weak_relations(before, after, sc.tolerances["probability"]).items():
        report.add(k, v)
    if algebra is not None:
        cc = contraction_condition(before, after, algebra, sc.tolerances["probability"])
        report.add("algebra contraction condition", cc.holds)
        if cc.offending is not None:
            report.add("offending algebra event", list(cc.offending.members))
    _event_table(report, "events", _events(sc), before, after)
    report.verdict("behavior", label.label)
    return report


HANDLERS = {
    "update": cmd_update,
    "kinematics": cmd_kinematics,
    "ergodic": cmd_ergodic,
    "slln": cmd_slln,
    "classify": cmd_classify,
}


def run_scenario(command, path, seed=None, tolerance=None, timing=False) -> RunReport:
    sc = load_scenario(path, seed)
    tol = sc.tolerances["verdict"] if tolerance is None else tolerance
    t0 = time.perf_counter()
    try:
        report = HANDLERS[command](sc, tol)
    except ScenarioError:
        raise
    except (DomainError, KeyError, TypeError) as exc:
        raise ScenarioError(sc.name, f"{type(exc).__name__}: {exc}") from exc
    if timing:
        report.timing = time.perf_counter() - t0
    return report


def _job(args):
    command, path, seed, tolerance, timing, fmt_name = args
    try:
        report = run_scenario(command, path, seed, tolerance, timing)
        return report.scenario, report.render(fmt_name), report.gates_failed, None
    except ScenarioError as exc:
        return str(path), "", False, str(exc)


def build_parser():
    p = argparse.ArgumentParser(prog="credal-kinematics", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--scenario", action="append", required=True, type=Path,
                   help="scenario file (repeatable)")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("text", "csv", "records"), default="text")
    p.add_argument("--seed", type=int, help="override the scenario seed")
    p.add_argument("--tolerance", type=float, help="override the verdict tolerance")
    p.add_argument("--require-gates", action="store_true",
                   help="exit with status 2 if any hypothesis gate fails")
    p.add_argument("--jobs", type=int, default=1, help="run scenarios in parallel worker processes")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock timing (makes reports non-reproducible)")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    jobs = [(args.command, path, args.seed, args.tolerance, args.timing, args.format)
            for path in args.scenario]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]
    errors = [err for _, _, _, err in results if err]
    for err in errors:
        print(f"error: {err}", file=sys.stderr)
    if errors:
        return EXIT_INVALID
    results.sort(key=lambda r: r[0])
    text = "".join(body for _, body, _, _ in results)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    if args.require_gates and any(failed for _, _, failed, _ in results):
        return EXIT_GATES
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
