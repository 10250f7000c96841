"""Named schemes used by the figure reproductions, tests and CLI."""

from __future__ import annotations

from typing import Callable

from .codebook import (
    StorageScheme,
    example1_profile,
    make_explicit,
    make_lrc,
    make_mds,
    make_replication,
    make_rm1,
    make_simplex,
)
from .galois import FieldSpec, primitive_element


def fig3_hybrid() -> StorageScheme:
    """Three copies each of a and b plus a+b and a+αb over GF(11), α primitive."""
    spec = FieldSpec(11)
    alpha = int(primitive_element(spec))
    cols = [(1, 0)] * 3 + [(0, 1)] * 3 + [(1, 1), (1, alpha)]
    return make_explicit(spec, 2, cols, 1, "hybrid-3+3+2")


FIXTURES: dict[str, Callable[[], StorageScheme]] = {
    "rep22": lambda: make_replication(2, [2, 2]),
    "mds42": lambda: make_mds(4, 2, FieldSpec(3)),
    "hybrid-fig1": lambda: make_explicit(FieldSpec(2), 2, [(1, 0), (1, 0), (0, 1), (1, 1)], 1, "hybrid-a-a-b-ab"),
    "rep44": lambda: make_replication(2, [4, 4]),
    "mds82-nonsys": lambda: make_mds(8, 2, FieldSpec(11), systematic=False),
    "mds82-sys": lambda: make_mds(8, 2, FieldSpec(11)),
    "hybrid-fig3": fig3_hybrid,
    "fig4d": lambda: make_replication(2, [1, 4]),
    "simplex2": lambda: make_simplex(2),
    "simplex3": lambda: make_simplex(3),
    "simplex4": lambda: make_simplex(4),
    "rm4": lambda: make_rm1(4),
    "rm4-sys": lambda: make_rm1(4, systematic=True),
    "lrc-example1": lambda: make_lrc(example1_profile(), FieldSpec(5)),
}

FIG1 = ("rep22", "mds42", "hybrid-fig1")
FIG3 = ("rep44", "mds82-nonsys", "mds82-sys", "hybrid-fig3")


def fixture(name: str) -> StorageScheme:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}") from None
