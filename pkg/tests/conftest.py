import random
from fractions import Fraction

import pytest

from srr.codebook import SchemeError, make_explicit
from srr.galois import FieldSpec, get_field, rank_of_columns

ACCEPTANCE: dict[str, str] = {}


def random_scheme(rng: random.Random, n_max: int = 8, q_choices=(2, 3), k_choices=(2, 3), mu=1):
    """Full-rank scheme with random nonzero columns (duplicates allowed)."""
    p = rng.choice(q_choices)
    k = rng.choice(k_choices)
    spec = FieldSpec(p)
    F = get_field(spec)
    while True:
        n = rng.randint(k, n_max)
        cols = []
        while len(cols) < n:
            c = tuple(rng.randrange(p) for _ in range(k))
            if any(c):
                cols.append(c)
        if rank_of_columns(F, cols) == k:
            try:
                return make_explicit(spec, k, cols, mu)
            except SchemeError:  # pragma: no cover
                continue


def random_demand(rng: random.Random, k: int, hi: int = 3, den: int = 4):
    return tuple(Fraction(rng.randint(0, hi * den), den) for _ in range(k))


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        ACCEPTANCE[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in ACCEPTANCE.items():
        terminalreporter.write_line(f"{verdict}  {name}")
