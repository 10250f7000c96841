"""The twelve acceptance criteria, one test each, at their stated tolerances.

A PASS/FAIL line per criterion is printed in the terminal summary (see conftest).
"""

import itertools
import random
import time
from fractions import Fraction as F

import pytest

from conftest import random_demand, random_scheme
from srr.combin import (
    FULL,
    achievable_via_matching,
    build_graph,
    fractional_matching_number,
    integral_achievable,
    is_batch_code,
    is_bipartite,
    matching_number,
    uniform_split,
    vertex_cover_number,
)
from srr.codebook import make_mds, make_replication, make_simplex
from srr.fixtures import FIG1, FIG3, fixture
from srr.galois import FieldSpec
from srr.geometry import outer_polytope
from srr.recovery import enumerate_recovery_sets
from srr.region import (
    is_achievable,
    max_along,
    polytope,
    polytope_from_halfspaces,
    support,
)
from srr.simq import SimConfig, scaled, simulate
from srr.waterfill import mds_bound_halfspaces, mds_bound_holds, mds_waterfill


def cat_of(name):
    return enumerate_recovery_sets(fixture(name))


def vset(p):
    return set(p.vertices)


def test_ac01_simplex_support_and_polytope():
    for k, want in [(2, 2), (3, 4), (4, 8)]:
        cat = enumerate_recovery_sets(make_simplex(k))
        t0 = time.perf_counter()
        assert support(cat, [1] * k) == want
        assert time.perf_counter() - t0 <= 60
    p = polytope(enumerate_recovery_sets(make_simplex(3)))
    assert vset(p) == {(0, 0, 0), (4, 0, 0), (0, 4, 0), (0, 0, 4)}
    assert p.facet_set() == {
        ((-1, 0, 0), 0), ((0, -1, 0), 0), ((0, 0, -1), 0), ((1, 1, 1), 4),
    }


def test_ac02_nonsystematic_mds_triangle():
    cat = cat_of("mds82-nonsys")
    assert cat.scheme.spec.p == 11
    assert support(cat, [1, 1]) == 4
    assert vset(polytope(cat)) == {(0, 0), (4, 0), (0, 4)}


def test_ac03_systematic_pentagon():
    cat = cat_of("mds42")
    assert max_along(cat, [0, 0], 0) == F(5, 2)
    p = polytope(cat)
    assert p.ordered_vertices() == [(0, 0), (F(5, 2), 0), (2, 1), (1, 2), (0, F(5, 2))]
    closed_form = polytope_from_halfspaces(mds_bound_halfspaces(4, 2, 1), 2, exact=True)
    assert p.facet_set() == closed_form.facet_set()


def _grid_lambdas(k, mu):
    axis = [2 * mu * F(i, 8) for i in range(9)]
    for i, j, l in itertools.product(range(9), repeat=3):
        lam = (axis[i], axis[j], axis[l])
        if k == 4:
            lam += (axis[(i + j + l) % 9],)
        yield lam


@pytest.mark.parametrize("n,k,p", [(6, 3, 7), (8, 3, 11), (10, 4, 13)])
def test_ac04_waterfill_bound_lp_agree(n, k, p):
    s = make_mds(n, k, FieldSpec(p))
    cat = enumerate_recovery_sets(s)
    disagreements = 0
    for lam in _grid_lambdas(k, s.mu):
        wf = mds_waterfill(n, k, s.mu, lam, cat)
        answers = {wf.feasible, mds_bound_holds(n, k, s.mu, lam), is_achievable(cat, lam)[0]}
        disagreements += len(answers) > 1
        if wf.feasible:
            assert wf.allocation.is_valid(cat, lam)
    assert disagreements == 0


def test_ac05_reed_muller_slice_and_counting_rows():
    s = fixture("rm4")
    cat = enumerate_recovery_sets(s)
    assert vset(polytope(cat.restrict([0, 3]))) == {(0, 0), (4, 0), (2, 2), (0, F(10, 3))}
    rows = {(h.a, h.b) for h in outer_polytope(s, include_counting=True, catalog=cat).halfspaces}
    for a, b in [((1, 1, 1, 1), 4), ((2, 2, 2, 1), 8), ((2, 2, 2, 3), 10)]:
        assert (a, b) in rows


OUTER_FIXTURES = list(FIG1) + list(FIG3) + ["simplex2", "simplex3", "simplex4", "rm4", "lrc-example1"]


@pytest.mark.parametrize("name", OUTER_FIXTURES)
def test_ac06_outer_bound_contains_exact(name):
    s = fixture(name)
    cat = enumerate_recovery_sets(s)
    outer = outer_polytope(s)
    rng = random.Random(6)
    dirs = [tuple([1] * s.k)] + [tuple(F(i == j) for j in range(s.k)) for i in range(s.k)]
    while len(dirs) < 32:
        d = tuple(rng.randint(0, 5) for _ in range(s.k))
        if any(d):
            dirs.append(d)
    for c in dirs:
        exact, bound = support(cat, c), outer.support(c)
        assert bound >= exact
        if name.startswith("simplex"):
            assert bound == exact


def test_ac07_matching_equals_lp():
    rng = random.Random(7)
    for _ in range(200):
        s = random_scheme(rng, n_max=8, q_choices=(2, 3))
        cat = enumerate_recovery_sets(s)
        g = build_graph(s, cat, FULL)
        lam = random_demand(rng, s.k, hi=3)
        assert achievable_via_matching(g, lam, s.mu) == is_achievable(cat, lam)[0]


def test_ac08_batch_codes():
    s = make_simplex(3)
    cat = enumerate_recovery_sets(s)
    assert is_batch_code(cat, 1, 4)
    assert not is_batch_code(cat, 1, 5)

    ok, alloc = integral_achievable(cat, 1, (1, 3, 0))
    assert ok
    used = [cat.sets[i][j].servers for (i, j), v in alloc.rates.items() for _ in range(int(v))]
    names = s.describe()
    labelled = {frozenset(names[x] for x in srv) for srv in used}
    assert labelled == {
        frozenset({"a"}), frozenset({"b"}), frozenset({"c", "b+c"}), frozenset({"a+c", "a+b+c"}),
    }
    flat = [x for srv in used for x in srv]
    assert len(flat) == len(set(flat)) == 6
    frac = uniform_split(cat, (1, 3, 0))
    assert sorted(set(frac.rates.values())) == [F(1, 4), F(3, 4)]
    assert frac.is_valid(cat, (1, 3, 0))

    assert is_batch_code(enumerate_recovery_sets(make_replication(2, [2, 2])), 1, 2)


def test_ac09_hybrid_area_largest():
    areas = {name: polytope(cat_of(name)).area() for name in FIG3}
    hybrid = areas.pop("hybrid-fig3")
    assert all(hybrid > a for a in areas.values())


def test_ac10_unbalanced_replication_region():
    p = polytope(cat_of("fig4d"))
    for v in [(0, 0), (1, 0), (1, 3), (0, 4)]:
        assert p.contains(v)


def test_ac11_simulation_stability():
    cat = enumerate_recovery_sets(make_simplex(3))
    base = (F(4, 3),) * 3
    t0 = time.perf_counter()

    lam = scaled(base, F(9, 10))
    rep = simulate(SimConfig(cat, uniform_split(cat, lam), lam, seed=11))
    assert rep.all_stable
    assert max(rep.utilization) <= 0.92

    lam = scaled(base, F(11, 10))
    rep = simulate(SimConfig(cat, uniform_split(cat, lam), lam, seed=11))
    hot = [s for s, u in enumerate(rep.utilization) if u > 1]
    assert hot
    assert any(rep.drift[s] > 0 for s in hot)
    assert time.perf_counter() - t0 <= 120


def test_ac12_property_suites():
    rng = random.Random(12)
    N = 50
    # downward closure and midpoint convexity
    for _ in range(N):
        s = random_scheme(rng)
        cat = enumerate_recovery_sets(s)
        _, w1 = support_witness(cat, rng)
        _, w2 = support_witness(cat, rng)
        shrink = tuple(x * F(rng.randint(0, 4), 4) for x in w1)
        assert is_achievable(cat, shrink)[0]
        assert is_achievable(cat, tuple((a + b) / 2 for a, b in zip(w1, w2)))[0]
    # μ-scaling
    for _ in range(N):
        s = random_scheme(rng)
        c = F(rng.randint(1, 5), rng.randint(1, 3))
        lam = random_demand(rng, s.k)
        a = is_achievable(enumerate_recovery_sets(s), lam)[0]
        b = is_achievable(enumerate_recovery_sets(s.with_mu(c)), tuple(c * x for x in lam))[0]
        assert a == b
    # server permutation and nonzero column scaling
    for _ in range(N):
        s = random_scheme(rng)
        perm = list(range(s.n))
        rng.shuffle(perm)
        scal = [rng.randrange(1, s.spec.p) for _ in range(s.n)]
        lam = random_demand(rng, s.k)
        want = is_achievable(enumerate_recovery_sets(s), lam)[0]
        assert is_achievable(enumerate_recovery_sets(s.permuted(perm)), lam)[0] == want
        assert is_achievable(enumerate_recovery_sets(s.scaled(scal)), lam)[0] == want
    # ν <= ν_f <= τ, with equality on bipartite recovery graphs
    bipartite_seen = 0
    for _ in range(N):
        s = random_scheme(rng, n_max=7)
        g = build_graph(s, enumerate_recovery_sets(s))
        nu, nuf, tau = matching_number(g), fractional_matching_number(g), vertex_cover_number(g)
        assert nu <= nuf <= tau
        if is_bipartite(g):
            bipartite_seen += 1
            assert nu == nuf == tau
    assert bipartite_seen > 0


def support_witness(cat, rng):
    from srr.region import support_point

    c = tuple(rng.randint(0, 4) for _ in range(cat.k))
    if not any(c):
        c = (1,) * cat.k
    return support_point(cat, c)
