"""Hypothesis property suites over random small linear schemes."""

import random
from fractions import Fraction as F

from hypothesis import HealthCheck, given, settings, strategies as st

from conftest import random_scheme
from srr.combin import (
    FULL,
    achievable_via_matching,
    build_graph,
    fractional_matching_number,
    is_bipartite,
    matching_number,
    vertex_cover_number,
)
from srr.recovery import enumerate_recovery_sets
from srr.region import is_achievable, support_point

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

schemes = st.integers(0, 2**32 - 1).map(lambda seed: random_scheme(random.Random(seed)))
rationals = st.fractions(min_value=0, max_value=4, max_denominator=6)


def demand_for(s, data):
    return tuple(data.draw(rationals) for _ in range(s.k))


@SETTINGS
@given(schemes, st.data())
def test_downward_closed(s, data):
    cat = enumerate_recovery_sets(s)
    c = tuple(data.draw(st.integers(0, 3)) for _ in range(s.k))
    if not any(c):
        c = (1,) * s.k
    _, top = support_point(cat, c)
    shrink = tuple(x * data.draw(st.fractions(0, 1, max_denominator=5)) for x in top)
    assert is_achievable(cat, shrink)[0]


@SETTINGS
@given(schemes, st.data())
def test_midpoint_convex(s, data):
    cat = enumerate_recovery_sets(s)
    pts = []
    for _ in range(2):
        c = tuple(data.draw(st.integers(0, 3)) for _ in range(s.k))
        pts.append(support_point(cat, c if any(c) else (1,) * s.k)[1])
    mid = tuple((a + b) / 2 for a, b in zip(*pts))
    assert is_achievable(cat, mid)[0]


@SETTINGS
@given(schemes, st.fractions(min_value=F(1, 4), max_value=5, max_denominator=4), st.data())
def test_mu_scaling(s, c, data):
    lam = demand_for(s, data)
    a = is_achievable(enumerate_recovery_sets(s), lam)[0]
    b = is_achievable(enumerate_recovery_sets(s.with_mu(c)), tuple(c * x for x in lam))[0]
    assert a == b


@SETTINGS
@given(schemes, st.randoms(use_true_random=False), st.data())
def test_permutation_and_scaling_invariance(s, rnd, data):
    lam = demand_for(s, data)
    want = is_achievable(enumerate_recovery_sets(s), lam)[0]
    perm = list(range(s.n))
    rnd.shuffle(perm)
    scal = [rnd.randrange(1, s.spec.p) for _ in range(s.n)]
    assert is_achievable(enumerate_recovery_sets(s.permuted(perm)), lam)[0] == want
    assert is_achievable(enumerate_recovery_sets(s.scaled(scal)), lam)[0] == want


@SETTINGS
@given(schemes)
def test_matching_sandwich(s):
    g = build_graph(s, enumerate_recovery_sets(s))
    nu, nuf, tau = matching_number(g), fractional_matching_number(g), vertex_cover_number(g)
    assert nu <= nuf <= tau
    if is_bipartite(g):
        assert nu == nuf == tau


@SETTINGS
@given(schemes, st.data())
def test_hypergraph_matching_equals_lp(s, data):
    cat = enumerate_recovery_sets(s)
    lam = demand_for(s, data)
    assert achievable_via_matching(build_graph(s, cat, FULL), lam, s.mu) == is_achievable(cat, lam)[0]
