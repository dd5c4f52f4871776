import itertools
import math

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from credal_kinematics import CredalSet, ProbMeasure

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


# -- strategies ---------------------------------------------------------------


@st.composite
def weight_vectors(draw, size=None, min_size=1, max_size=8, allow_zero=True):
    n = draw(st.integers(min_size, max_size)) if size is None else size
    lo = 0 if allow_zero else 1
    raw = draw(st.lists(st.integers(lo, 20), min_size=n, max_size=n).filter(lambda r: sum(r) > 0))
    total = sum(raw)
    return [r / total for r in raw]


@st.composite
def measures(draw, size=None, **kw):
    return ProbMeasure(draw(weight_vectors(size=size, **kw)))


@st.composite
def credal_sets(draw, size=None, min_members=1, max_members=4, max_size=8):
    n = draw(st.integers(1, max_size)) if size is None else size
    k = draw(st.integers(min_members, max_members))
    return CredalSet([draw(measures(size=n)) for _ in range(k)])


def random_measure(rng, n, sparsity=0.0):
    w = rng.random(n)
    if sparsity:
        w[rng.random(n) < sparsity] = 0.0
        if w.sum() == 0:
            w[rng.integers(n)] = 1.0
    return ProbMeasure(w / w.sum())


def random_credal(rng, n, k):
    return CredalSet([random_measure(rng, n) for _ in range(k)])


# -- independent oracles: plain Python over explicit subsets ------------------


def all_subsets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(n), r)


def oracle_prob(weights, subset):
    return math.fsum(weights[i] for i in subset)


def oracle_lower(members, subset):
    return min(oracle_prob(w, subset) for w in members)


def oracle_upper(members, subset):
    return max(oracle_prob(w, subset) for w in members)


def member_weights(cs):
    return [list(map(float, P.weights)) for P in cs]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE = {}


def record_criterion(number, title, passed, detail=""):
    ACCEPTANCE[number] = (title, bool(passed), detail)
    line = f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {title}" + (f": {detail}" if detail else "")
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        tail = f": {detail}" if detail else ""
        terminalreporter.write_line(f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {title}{tail}")
