import random
from fractions import Fraction as F

import pytest

from conftest import random_scheme
from srr.codebook import make_simplex
from srr.fixtures import fixture
from srr.galois import FieldSpec
from srr.geometry import (
    GeometryError,
    counting_halfspaces,
    hyperplane_bounds,
    hyperplanes,
    normalize,
    outer_polytope,
    point_multiset,
    prune_redundant,
    slice_polytope,
)
from srr.recovery import enumerate_recovery_sets
from srr.region import polytope, support


def test_projective_counts():
    for p, k in [(2, 3), (3, 2), (5, 3)]:
        assert len(hyperplanes(FieldSpec(p), k)) == (p**k - 1) // (p - 1)
    assert normalize(FieldSpec(5), (0, 3, 1)) == (0, 1, 2)
    with pytest.raises(GeometryError):
        normalize(FieldSpec(5), (0, 0))
    assert point_multiset(fixture("rep22"))[(1, 0)] == 2


def test_simplex_outer_is_the_region():
    p = outer_polytope(make_simplex(3))
    assert set(p.vertices) == {(0, 0, 0), (4, 0, 0), (0, 4, 0), (0, 0, 4)}


def test_outer_contains_exact_random():
    rng = random.Random(2)
    for _ in range(25):
        s = random_scheme(rng, n_max=7)
        cat = enumerate_recovery_sets(s)
        outer = outer_polytope(s, include_counting=True, catalog=cat)
        for c in [(1,) * s.k] + [tuple(rng.randint(0, 4) for _ in range(s.k)) for _ in range(6)]:
            if any(c):
                assert outer.support(c) >= support(cat, c)


def test_counting_rows_for_rm():
    cat = enumerate_recovery_sets(fixture("rm4"))
    rows = counting_halfspaces(cat)
    assert len(rows) <= 16
    assert any(h.a == (2, 2, 2, 1) and h.b == 8 for h in rows)


def test_slice_and_prune():
    s = fixture("rm4")
    outer = outer_polytope(s, include_counting=True)
    sl = slice_polytope(outer, [0, 3])
    assert set(sl.vertices) == {(0, 0), (4, 0), (2, 2), (0, F(10, 3))}
    hs = hyperplane_bounds(s)
    pruned = prune_redundant(hs)
    assert len(pruned) <= len(hs)
    # pruning never changes the support function
    full = outer_polytope(s)
    lean = outer_polytope(s, prune=True)
    for c in [(1, 1, 1, 1), (1, 0, 0, 2), (3, 1, 0, 1)]:
        assert full.support(c) == lean.support(c)


def test_exact_region_inside_outer_fig3():
    for name in ["rep44", "hybrid-fig3"]:
        s = fixture(name)
        outer = outer_polytope(s)
        for v in polytope(enumerate_recovery_sets(s)).vertices:
            assert outer.contains(v)
