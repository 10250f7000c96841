import random
from fractions import Fraction as F

import pytest

from conftest import random_demand
from srr.codebook import example1_profile, make_mds
from srr.fixtures import fixture
from srr.galois import FieldSpec
from srr.recovery import enumerate_recovery_sets
from srr.region import is_achievable
from srr.waterfill import (
    WaterfillError,
    capacity_usage,
    epsilon_fill,
    lrc_waterfill,
    mds_bound_holds,
    mds_waterfill,
    wraparound,
)

EPS = F(1, 1 << 12)


def test_known_example_loads():
    res = mds_waterfill(6, 3, 1, (2, 1, 0))
    assert res.feasible
    assert sorted(res.loads, reverse=True) == [1, 1, F(3, 4), F(3, 4), F(3, 4), F(3, 4)]


def test_boundary_of_pentagon():
    assert mds_waterfill(4, 2, 1, (F(5, 2), 0)).feasible
    assert not mds_waterfill(4, 2, 1, (F(5, 2) + EPS, 0)).feasible


@pytest.mark.parametrize("n,k", [(5, 2), (6, 3), (7, 3), (8, 4)])
def test_event_fill_agrees_with_epsilon_steps(n, k):
    rng = random.Random(n * 10 + k)
    for _ in range(15):
        lam = random_demand(rng, k, hi=2, den=8)
        exact = mds_waterfill(n, k, 1, lam)
        approx, residual = epsilon_fill(n, k, 1, lam)
        # the ε-fill is a discretisation: it loses at most one step per server
        assert abs(sum(exact.loads) - sum(approx)) <= n * EPS
        assert sorted(exact.loads) == pytest.approx(sorted(approx), abs=float(k * EPS))
        if residual == 0:
            assert exact.feasible


def test_wraparound_is_a_valid_split():
    rates = {0: F(1), 1: F(1, 2), 2: F(1, 2), 3: F(1)}
    ev = wraparound(F(1), rates, 3)
    per_server = {}
    for r, servers in ev:
        assert len(servers) == 3 and len(set(servers)) == 3
        for s in servers:
            per_server[s] = per_server.get(s, 0) + r
    assert per_server == rates


def test_allocation_valid_when_feasible():
    s = make_mds(7, 3, FieldSpec(11))
    cat = enumerate_recovery_sets(s)
    rng = random.Random(5)
    for _ in range(40):
        lam = random_demand(rng, 3, hi=2)
        res = mds_waterfill(7, 3, 1, lam, cat)
        assert res.feasible == mds_bound_holds(7, 3, 1, lam) == is_achievable(cat, lam)[0]
        if res.feasible:
            assert res.allocation.is_valid(cat, lam)


def test_lrc_waterfill_is_sound():
    s = fixture("lrc-example1")
    prof = example1_profile()
    cat = enumerate_recovery_sets(s)
    rng = random.Random(9)
    hits = 0
    for _ in range(40):
        lam = random_demand(rng, 4, hi=3)
        res = lrc_waterfill(s, prof, lam, cat)
        if res.feasible:
            hits += 1
            assert res.allocation.is_valid(cat, lam)
            assert is_achievable(cat, lam)[0]
    assert hits > 5
    res = lrc_waterfill(s, prof, (F(3, 2), 1, 1, 1), cat)
    assert res.feasible and res.loads[4] > 0  # local parity a+b is used


def test_lrc_rejects_mismatch():
    with pytest.raises(WaterfillError):
        lrc_waterfill(fixture("lrc-example1"), example1_profile(), (1, 1))


def test_capacity_usage():
    assert capacity_usage([[1, 2, 2]], 1, (F(2),)) == 3
    assert capacity_usage([[1]], 1, (F(2),)) == float("inf")
