import itertools

import pytest
from hypothesis import given, settings, strategies as st

from srr.galois import FieldError, FieldSpec, Matrix, get_field, in_span, is_irreducible, rank, solve

SMALL_FIELDS = [FieldSpec(2), FieldSpec(3), FieldSpec(5), FieldSpec(2, 2), FieldSpec(2, 3), FieldSpec(3, 2)]


@pytest.mark.parametrize("spec", SMALL_FIELDS, ids=str)
def test_field_axioms_exhaustive(spec):
    F = get_field(spec)
    els = range(F.q)
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in els:
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.pow(a, F.q - 1) == 1
    assert F.order(F.primitive) == F.q - 1


def test_prime_field_matches_modular_arithmetic():
    F = get_field(FieldSpec(11))
    for a, b in itertools.product(range(11), repeat=2):
        assert F.mul(a, b) == a * b % 11
        assert F.add(a, b) == (a + b) % 11


def test_bad_specs():
    with pytest.raises(FieldError):
        FieldSpec(4)
    with pytest.raises(FieldError):
        FieldSpec(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over GF(2)
    assert is_irreducible((1, 1, 1), 2)


def test_field_element_operators():
    F = get_field(FieldSpec(7))
    a, b = F.elem(3), F.elem(5)
    assert int(a + b) == 1 and int(a * b) == 1 and int(a / b) == int(a * b.inv())
    assert a ** 6 == 1


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_solve_returns_consistent_solution(data):
    spec = data.draw(st.sampled_from(SMALL_FIELDS))
    F = get_field(spec)
    r = data.draw(st.integers(1, 4))
    c = data.draw(st.integers(1, 4))
    rows = data.draw(st.lists(st.lists(st.integers(0, F.q - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    x0 = data.draw(st.lists(st.integers(0, F.q - 1), min_size=c, max_size=c))
    m = Matrix.from_rows(spec, rows)
    rhs = [F.dot(row, x0) for row in rows]
    x = solve(m, rhs)
    assert x is not None
    assert [F.dot(row, x) for row in rows] == rhs
    assert rank(m) <= min(r, c)
    cols = [m.column(j) for j in range(c)]
    assert in_span(spec, cols, rhs)
