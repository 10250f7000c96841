"""Projective-geometry outer bounds on the service rate region."""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from typing import Sequence

from . import lp
from .codebook import StorageScheme
from .galois import FieldSpec, get_field
from .rational import q
from .recovery import RecoveryCatalog, enumerate_recovery_sets, size_profile
from .region import HalfSpace, RegionPolytope, polytope_from_halfspaces

MAX_ENUMERATION = 1 << 20

ProjPoint = tuple[int, ...]


class GeometryError(ValueError):
    pass


def normalize(spec: FieldSpec, v: Sequence[int]) -> ProjPoint:
    """Scale so the first nonzero coordinate is 1."""
    F = get_field(spec)
    lead = next((x for x in v if x), None)
    if lead is None:
        raise GeometryError("the zero vector is not a projective point")
    inv = F.inv(lead)
    return tuple(F.mul(inv, x) for x in v)


def point_multiset(s: StorageScheme) -> Counter:
    return Counter(normalize(s.spec, c) for c in s.columns)


def hyperplanes(spec: FieldSpec, k: int) -> list[ProjPoint]:
    """Canonical normals of all hyperplanes of PG(k-1, q), i.e. all projective points."""
    qq = spec.q
    if qq**k > MAX_ENUMERATION:
        raise GeometryError(f"q^k = {qq}^{k} exceeds the enumeration cap")
    out = []
    for lead in range(k):
        for tail in itertools.product(range(qq), repeat=k - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    return out


def hyperplane_bounds(s: StorageScheme, mu=None) -> list[HalfSpace]:
    """Σ_{i∈I(h)} λ_i ≤ μ·#{columns off the hyperplane h}, tightest bound per index set."""
    mu = s.mu if mu is None else q(mu)
    F = s.field
    best: dict[tuple[int, ...], int] = {}
    for h in hyperplanes(s.spec, s.k):
        support = tuple(1 if x else 0 for x in h)
        off = sum(1 for c in s.columns if F.dot(h, c))
        if support not in best or off < best[support]:
            best[support] = off
    return [
        HalfSpace(tuple(Fraction(x) for x in a), mu * off) for a, off in sorted(best.items())
    ]


def counting_halfspaces(cat: RecoveryCatalog, mu=None) -> list[HalfSpace]:
    """Linear pieces of Σ_i usage_i(λ_i) ≤ nμ.

    usage_i is convex and piecewise linear with slopes equal to the sorted
    recovery-set sizes. Each object contributes its first piece (slope =
    smallest size) and the piece where the slope first increases, giving at
    most 2^k constraints.
    """
    mu = cat.mu if mu is None else q(mu)
    pieces = []
    for i in range(cat.k):
        prof = size_profile(cat, i)
        opts = [(Fraction(prof[0]), Fraction(0))]
        m = next((m for m, p in enumerate(prof) if p > prof[0]), None)
        if m is not None:
            slope = prof[m]
            opts.append((Fraction(slope), -sum((slope - p) * mu for p in prof[:m])))
        pieces.append(opts)
    out = []
    for combo in itertools.product(*pieces):
        a = tuple(sl for sl, _ in combo)
        b = cat.n * mu - sum((c for _, c in combo), Fraction(0))
        out.append(HalfSpace(a, b))
    return out


def prune_redundant(halfspaces: Sequence[HalfSpace]) -> list[HalfSpace]:
    """Drop rows implied by the others together with λ >= 0 (one exact LP per row)."""
    rows = list(dict.fromkeys(halfspaces))
    i = 0
    while i < len(rows):
        h = rows[i]
        others = rows[:i] + rows[i + 1:]
        if others:
            res = lp.solve_rows(
                list(h.a), [dict(enumerate(o.a)) for o in others], [lp.LE] * len(others),
                [o.b for o in others], len(h.a),
            )
            if res.ok and res.objective <= h.b:
                rows.pop(i)
                continue
        i += 1
    return rows


def outer_polytope(
    s: StorageScheme,
    mu=None,
    include_counting: bool = False,
    catalog: RecoveryCatalog | None = None,
    prune: bool = False,
) -> RegionPolytope:
    """Intersection of the hyperplane bounds (and optionally the counting pieces).

    For k <= 3 only facet-defining rows survive vertex enumeration. For larger
    k every generated row is kept unless ``prune`` asks for LP-based removal
    of implied rows.
    """
    mu = s.mu if mu is None else q(mu)
    hs = hyperplane_bounds(s, mu)
    if include_counting:
        cat = catalog or enumerate_recovery_sets(s)
        hs += counting_halfspaces(cat, mu)
    hs = list(dict.fromkeys(hs))
    if prune:
        hs = prune_redundant(hs)
    return polytope_from_halfspaces([(h.a, h.b) for h in hs], s.k, exact=False)


def slice_polytope(p: RegionPolytope, keep: Sequence[int]) -> RegionPolytope:
    """Intersect with {λ_i = 0 for i not in keep} and project onto ``keep``."""
    hs = [(tuple(h.a[i] for i in keep), h.b) for h in p.halfspaces if any(h.a[i] for i in keep)]
    hs = [(a, b) for a, b in hs if not all(x <= 0 for x in a) or b < 0]
    return polytope_from_halfspaces(hs, len(keep), p.exact)
