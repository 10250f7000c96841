import random
from fractions import Fraction as F

import pytest

from conftest import random_demand, random_scheme
from srr.codebook import make_replication, make_simplex
from srr.combin import (
    FULL,
    PAIRS,
    SearchBudgetExceeded,
    achievable_via_matching,
    build_graph,
    collapse_parallel,
    compositions,
    first_batch_failure,
    fractional_matching,
    fractional_matching_number,
    integral_achievable,
    is_bipartite,
    is_pir_code,
    matching_number,
    matching_stats,
    vertex_cover_number,
)
from srr.fixtures import fixture
from srr.recovery import enumerate_recovery_sets
from srr.region import is_achievable


def test_simplex_pairs_graph():
    s = make_simplex(3)
    g = build_graph(s, enumerate_recovery_sets(s), PAIRS)
    assert [g.degree(v) for v in range(s.n)] == [3] * 7
    assert [g.degree(v) for v in range(s.n, g.n_vertices)] == [1, 1, 1]
    stats = matching_stats(g)
    assert stats["nu"] == 4 and stats["nu_f"] == "4" and stats["tau"] == 4 and stats["bipartite"]


def test_nonsystematic_mds_matching():
    s = fixture("mds82-nonsys")
    g = build_graph(s, enumerate_recovery_sets(s), PAIRS)
    assert fractional_matching_number(g) == 4


def test_full_mode_mds_uniform_edges():
    s = fixture("mds42")
    g = build_graph(s, enumerate_recovery_sets(s), FULL)
    assert {len(e.vertices) for e in g.edges} == {2}
    assert collapse_parallel(g).edges


def test_matching_lp_equivalence_small():
    rng = random.Random(17)
    for _ in range(60):
        s = random_scheme(rng, n_max=6)
        cat = enumerate_recovery_sets(s)
        g = build_graph(s, cat, FULL)
        lam = random_demand(rng, s.k, hi=2)
        w = fractional_matching(g, lam, s.mu)
        assert (w is not None) == is_achievable(cat, lam)[0]
        if w is not None:
            for v in range(g.n_vertices):
                assert sum(x for e, x in w.items() if v in g.edges[e].vertices) <= s.mu


def test_exact_search_brute_force():
    # triangle: ν = 1, ν_f = 3/2, τ = 2, not bipartite
    s = make_replication(1, [3])
    from srr.combin import Hyperedge, RecoveryHypergraph

    g = RecoveryHypergraph(3, (), tuple(Hyperedge(e, 0, i) for i, e in enumerate([(0, 1), (1, 2), (0, 2)])), PAIRS)
    assert matching_number(g) == 1
    assert fractional_matching_number(g) == F(3, 2)
    assert vertex_cover_number(g) == 2
    assert not is_bipartite(g)
    assert achievable_via_matching(g, [F(3, 2)])
    assert not achievable_via_matching(g, [F(3, 2) + F(1, 100)])
    assert s.n == 3


def test_integral_and_pir():
    cat = enumerate_recovery_sets(make_simplex(3))
    assert first_batch_failure(cat, 1, 5) is not None
    assert is_pir_code(cat, 1, 4)
    assert not is_pir_code(cat, 1, 5)
    with pytest.raises(ValueError):
        integral_achievable(cat, 1, (F(1, 2), 0, 0))
    with pytest.raises(SearchBudgetExceeded):
        integral_achievable(cat, 1, (1, 1, 1), budget=1)


def test_compositions_count():
    from math import comb

    assert len(list(compositions(4, 3))) == comb(6, 2)
    assert all(sum(c) == 4 for c in compositions(4, 3))


def test_integral_gap_survey(capsys):
    """Look for integer region points without an integral allocation; report only."""
    import itertools
    import random

    rng = random.Random(31)
    found = []
    for _ in range(30):
        s = random_scheme(rng, n_max=6)
        cat = enumerate_recovery_sets(s)
        for lam in itertools.product(range(4), repeat=s.k):
            if is_achievable(cat, lam)[0] and not integral_achievable(cat, s.mu, lam)[0]:
                found.append((s.describe(), lam))
    with capsys.disabled():
        print(f"\nintegral-gap candidates: {len(found)}" + (f", first {found[0]}" if found else ""))
