"""Exact convex-hull helpers for low dimension (d <= 3), rational coordinates.

Brute force over d-subsets is plenty at the sizes involved (tens of points).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]


def primitive(a: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on the same ray."""
    den = 1
    for x in a:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in a]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return tuple(v // g for v in ints)


def _det(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def normal_through(points: Sequence[Vec]) -> tuple[Fraction, ...] | None:
    """Normal of the affine hyperplane through d points in R^d (None if degenerate)."""
    d = len(points[0])
    base = points[0]
    diffs = [[p[i] - base[i] for i in range(d)] for p in points[1:]]
    if d == 1:
        return (Fraction(1),)
    normal = []
    for i in range(d):
        minor = [[row[j] for j in range(d) if j != i] for row in diffs]
        normal.append((-1) ** i * _det(minor))
    if not any(normal):
        return None
    return tuple(normal)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def hull_facets(points: Sequence[Vec]) -> list[tuple[tuple[int, ...], Fraction]]:
    """Facets (primitive integer normal a, bound b) with a.x <= b on all points.

    Points must affinely span R^d."""
    pts = list(dict.fromkeys(points))
    d = len(pts[0])
    seen: dict[tuple[int, ...], Fraction] = {}
    for sub in itertools.combinations(pts, d):
        nrm = normal_through(sub)
        if nrm is None:
            continue
        a = primitive(nrm)
        b = dot(a, sub[0])
        vals = [dot(a, p) for p in pts]
        if all(v <= b for v in vals):
            seen[a] = b
        elif all(v >= b for v in vals):
            na = tuple(-x for x in a)
            seen[na] = -b
    return sorted(seen.items())


def _rank(rows: list[list[Fraction]]) -> int:
    m = [r[:] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def extreme_points(points: Iterable[Vec], facets) -> list[Vec]:
    """Points lying on facets whose normals have full rank."""
    pts = list(dict.fromkeys(points))
    d = len(pts[0])
    out = []
    for p in pts:
        tight = [[Fraction(x) for x in a] for a, b in facets if dot(a, p) == b]
        if len(tight) >= d and _rank(tight) == d:
            out.append(p)
    return sorted(out)


def solve_square(a: list[list[Fraction]], b: list[Fraction]) -> Vec | None:
    n = len(a)
    m = [list(a[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(m[i][n] for i in range(n))


def vertices_of(halfspaces: Sequence[tuple[Sequence, Fraction]], d: int) -> list[Vec]:
    """H-to-V enumeration by intersecting every d-subset of bounding hyperplanes."""
    hs = [([Fraction(x) for x in a], Fraction(b)) for a, b in halfspaces]
    out = set()
    for sub in itertools.combinations(hs, d):
        p = solve_square([a for a, _ in sub], [b for _, b in sub])
        if p is None:
            continue
        if all(dot(a, p) <= b for a, b in hs):
            out.add(p)
    return sorted(out)


def irredundant(halfspaces, vertices: Sequence[Vec]):
    """Halfspaces that are tight on at least d affinely independent vertices."""
    if not vertices:
        return []
    d = len(vertices[0])
    out = {}
    for a, b in halfspaces:
        tight = [v for v in vertices if dot(a, v) == b]
        if len(tight) < d:
            continue
        diffs = [[x - y for x, y in zip(v, tight[0])] for v in tight[1:]]
        if d == 1 or (diffs and _rank(diffs) == d - 1):
            pa = primitive([Fraction(x) for x in a])
            scale = Fraction(pa[next(i for i, x in enumerate(pa) if x)]) / Fraction(
                a[next(i for i, x in enumerate(a) if x)]
            )
            out[pa] = Fraction(b) * scale
    return sorted(out.items())


def polygon_order(vertices: Sequence[Vec]) -> list[Vec]:
    """Counter-clockwise order of the vertices of a convex polygon."""
    if len(vertices) < 3:
        return list(vertices)
    cx = sum(float(v[0]) for v in vertices) / len(vertices)
    cy = sum(float(v[1]) for v in vertices) / len(vertices)
    return sorted(vertices, key=lambda v: math.atan2(float(v[1]) - cy, float(v[0]) - cx))


def polygon_area(vertices: Sequence[Vec]) -> Fraction:
    ring = polygon_order(vertices)
    s = Fraction(0)
    for (x1, y1), (x2, y2) in zip(ring, ring[1:] + ring[:1]):
        s += x1 * y2 - x2 * y1
    return abs(s) / 2
