"""Service rate region: achievability, directional maxima, exact polytopes, min-cost allocation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import hull, lp
from .rational import fmt, fmtvec, q, qvec
from .recovery import RecoveryCatalog

Demand = tuple[Fraction, ...]


class RegionError(ValueError):
    pass


# -- allocations ---------------------------------------------------------------

@dataclass(frozen=True)
class Allocation:
    """Rates λ_{i,j} keyed by (object coordinate i, recovery-set index j)."""

    rates: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def demand(self, k: int) -> Demand:
        out = [Fraction(0)] * k
        for (i, _), v in self.rates.items():
            out[i] += v
        return tuple(out)

    def loads(self, cat: RecoveryCatalog) -> list[Fraction]:
        out = [Fraction(0)] * cat.n
        for (i, j), v in self.rates.items():
            for s in cat.sets[i][j].servers:
                out[s] += v
        return out

    def violations(self, cat: RecoveryCatalog, lam: Sequence) -> list[str]:
        """Every broken constraint, empty when the allocation is valid for λ."""
        lam = qvec(lam)
        errs = []
        for (i, j), v in self.rates.items():
            if not (0 <= i < cat.k and 0 <= j < cat.t(i)):
                errs.append(f"unknown recovery set ({i},{j})")
            elif v < 0:
                errs.append(f"negative rate on ({i},{j})")
        if errs:
            return errs
        for i, (got, want) in enumerate(zip(self.demand(cat.k), lam)):
            if got != want:
                errs.append(f"object {i}: allocated {got}, demand {want}")
        for s, load in enumerate(self.loads(cat)):
            if load > cat.mu:
                errs.append(f"server {s}: load {load} exceeds {cat.mu}")
        return errs

    def is_valid(self, cat: RecoveryCatalog, lam: Sequence) -> bool:
        return not self.violations(cat, lam)

    def to_json(self, cat: RecoveryCatalog) -> dict:
        entries = [
            {"object": i, "set": j, "servers": list(cat.sets[i][j].servers), "rate": fmt(v)}
            for (i, j), v in sorted(self.rates.items())
            if v
        ]
        return {"entries": entries}

    @classmethod
    def from_json(cls, cat: RecoveryCatalog, obj: dict) -> "Allocation":
        rates: dict[tuple[int, int], Fraction] = {}
        for e in obj["entries"]:
            i = int(e["object"])
            if "servers" in e:
                target = tuple(int(x) for x in e["servers"])
                j = next((j for j, r in enumerate(cat.sets[i]) if r.servers == target), None)
                if j is None:
                    raise RegionError(f"{target} is not a recovery set of object {i}")
            else:
                j = int(e["set"])
            rates[(i, j)] = rates.get((i, j), Fraction(0)) + q(e["rate"])
        return cls(rates)


def _variables(cat: RecoveryCatalog, objects=None):
    """(i, j) pairs and their LP columns: demand row i, capacity rows k + server."""
    keys, cols = [], []
    k = cat.k
    for i in objects if objects is not None else range(k):
        for j, r in enumerate(cat.sets[i]):
            col = {i: 1}
            for s in r.servers:
                col[k + s] = 1
            keys.append((i, j))
            cols.append(col)
    return keys, cols


def _check_dim(cat: RecoveryCatalog, v: Sequence, what="demand") -> Demand:
    v = qvec(v)
    if len(v) != cat.k:
        raise RegionError(f"{what} has length {len(v)}, expected {cat.k}")
    return v


def is_achievable(cat: RecoveryCatalog, lam: Sequence) -> tuple[bool, Allocation | None]:
    lam = _check_dim(cat, lam)
    if any(x < 0 for x in lam):
        return False, None
    if not any(lam):
        return True, Allocation({})
    if any(x > 0 and cat.t(i) == 0 for i, x in enumerate(lam)):
        return False, None
    active = [i for i in range(cat.k) if lam[i] > 0]
    keys, cols = _variables(cat, active)
    k = cat.k
    senses = [lp.EQ] * k + [lp.LE] * cat.n
    rhs = list(lam) + [cat.mu] * cat.n
    res = lp.solve([0] * len(cols), cols, senses, rhs)
    if not res.ok:
        return False, None
    return True, Allocation({key: v for key, v in zip(keys, res.x) if v})


def support_point(cat: RecoveryCatalog, c: Sequence) -> tuple[Fraction, Demand]:
    """max c.λ over the region and a maximizing λ."""
    c = _check_dim(cat, c, "direction")
    active = [i for i in range(cat.k) if c[i] > 0]
    if not active:
        return Fraction(0), tuple(Fraction(0) for _ in c)
    keys, cols = _variables(cat, active)
    # demand rows are unused here: shift capacity rows to start at 0
    cols = [{r - cat.k: v for r, v in col.items() if r >= cat.k} for col in cols]
    obj = [c[i] for i, _ in keys]
    res = lp.solve(obj, cols, [lp.LE] * cat.n, [cat.mu] * cat.n)
    if not res.ok:
        raise RegionError(f"support LP ended with status {res.status}")
    lam = [Fraction(0)] * cat.k
    for (i, _), v in zip(keys, res.x):
        lam[i] += v
    return res.objective, tuple(lam)


def support(cat: RecoveryCatalog, c: Sequence) -> Fraction:
    return support_point(cat, c)[0]


def max_along(cat: RecoveryCatalog, fixed: Sequence, free_index: int) -> Fraction:
    """Largest λ_free with the other coordinates pinned to ``fixed`` (its free entry is ignored)."""
    if not 0 <= free_index < cat.k:
        raise RegionError("free index out of range")
    if len(fixed) != cat.k:
        raise RegionError(f"fixed vector has length {len(fixed)}, expected {cat.k}")
    pinned = [Fraction(0) if i == free_index or fixed[i] is None else q(fixed[i]) for i in range(cat.k)]
    if any(x < 0 for x in pinned):
        raise RegionError("negative demand")
    active = [i for i in range(cat.k) if i == free_index or pinned[i] > 0]
    keys, cols = _variables(cat, active)
    obj = [1 if i == free_index else 0 for i, _ in keys]
    senses = [lp.EQ] * cat.k + [lp.LE] * cat.n
    senses[free_index] = lp.GE
    rhs = pinned + [cat.mu] * cat.n
    res = lp.solve(obj, cols, senses, rhs)
    if res.status == "infeasible":
        raise RegionError("fixed demands are not achievable on their own")
    if not res.ok:
        raise RegionError(f"LP ended with status {res.status}")
    return res.objective


def min_cost_allocation(cat: RecoveryCatalog, lam: Sequence) -> tuple[Allocation, Fraction]:
    """Allocation minimising total transfer Σ|R|λ_{i,j}; returns it with C(λ) = transfer / Σλ."""
    lam = _check_dim(cat, lam)
    total = sum(lam)
    if total == 0:
        return Allocation({}), Fraction(1)
    if any(x < 0 for x in lam):
        raise RegionError("negative demand")
    active = [i for i in range(cat.k) if lam[i] > 0]
    keys, cols = _variables(cat, active)
    obj = [cat.sets[i][j].size for i, j in keys]
    senses = [lp.EQ] * cat.k + [lp.LE] * cat.n
    res = lp.solve(obj, cols, senses, list(lam) + [cat.mu] * cat.n, maximize=False)
    if not res.ok:
        raise RegionError("demand is not achievable")
    alloc = Allocation({key: v for key, v in zip(keys, res.x) if v})
    return alloc, res.objective / total


def transfer_cost(cat: RecoveryCatalog, alloc: Allocation) -> Fraction:
    """Normalised cost Σ|R|λ_{i,j} / Σλ_{i,j} of a given allocation (1 for the empty one)."""
    tot = sum(alloc.rates.values(), Fraction(0))
    if tot == 0:
        return Fraction(1)
    return sum((cat.sets[i][j].size * v for (i, j), v in alloc.rates.items()), Fraction(0)) / tot


# -- polytopes -----------------------------------------------------------------

@dataclass(frozen=True)
class HalfSpace:
    a: tuple[Fraction, ...]
    b: Fraction

    def holds(self, x: Sequence) -> bool:
        return hull.dot(self.a, x) <= self.b

    def to_json(self) -> dict:
        return {"a": fmtvec(self.a), "b": fmt(self.b)}

    @classmethod
    def from_json(cls, obj) -> "HalfSpace":
        return cls(qvec(obj["a"]), q(obj["b"]))


@dataclass(frozen=True)
class RegionPolytope:
    halfspaces: tuple[HalfSpace, ...]
    vertices: tuple[Demand, ...] | None
    exact: bool

    @property
    def dim(self) -> int:
        return len(self.halfspaces[0].a)

    def contains(self, x: Sequence) -> bool:
        x = qvec(x)
        return all(h.holds(x) for h in self.halfspaces)

    def support(self, c: Sequence) -> Fraction:
        c = qvec(c)
        if self.vertices:
            return max(hull.dot(c, v) for v in self.vertices)
        res = lp.solve_rows(
            c,
            [dict(enumerate(h.a)) for h in self.halfspaces],
            [lp.LE] * len(self.halfspaces),
            [h.b for h in self.halfspaces],
            len(c),
        )
        # variables are nonnegative in the LP, which matches the region's orthant
        if res.status == "unbounded":
            raise RegionError("polytope is unbounded")
        return res.objective

    def area(self) -> Fraction:
        if self.dim != 2 or self.vertices is None:
            raise RegionError("area needs a 2-D polytope with vertices")
        return hull.polygon_area(self.vertices)

    def ordered_vertices(self) -> list[Demand]:
        if self.vertices is None:
            return []
        return hull.polygon_order(self.vertices) if self.dim == 2 else list(self.vertices)

    def facet_set(self) -> set[tuple[tuple[int, ...], Fraction]]:
        return set(hull.irredundant([(h.a, h.b) for h in self.halfspaces], self.vertices or []))

    def to_json(self) -> dict:
        return {
            "halfspaces": [h.to_json() for h in self.halfspaces],
            "vertices": [fmtvec(v) for v in self.vertices] if self.vertices is not None else None,
            "exact": self.exact,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RegionPolytope":
        verts = obj.get("vertices")
        return cls(
            tuple(HalfSpace.from_json(h) for h in obj["halfspaces"]),
            tuple(qvec(v) for v in verts) if verts is not None else None,
            bool(obj.get("exact", False)),
        )


def polytope_from_halfspaces(halfspaces, d: int, exact: bool) -> RegionPolytope:
    """Add nonnegativity, enumerate vertices (d <= 3) and keep only facet-defining rows."""
    rows = [(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in halfspaces]
    for i in range(d):
        rows.append((tuple(Fraction(-1 if j == i else 0) for j in range(d)), Fraction(0)))
    if d > 3:
        hs = sorted({(hull.primitive(a), b * _scale(a)) for a, b in rows})
        return RegionPolytope(tuple(HalfSpace(qvec(a), b) for a, b in hs), None, exact)
    verts = hull.vertices_of(rows, d)
    facets = hull.irredundant(rows, verts)
    return RegionPolytope(tuple(HalfSpace(qvec(a), b) for a, b in facets), tuple(verts), exact)


def _scale(a) -> Fraction:
    pa = hull.primitive(a)
    i = next(i for i, x in enumerate(a) if x)
    return Fraction(pa[i]) / Fraction(a[i])


def polytope(cat: RecoveryCatalog, max_rounds: int = 500) -> RegionPolytope:
    """Exact region for k <= 3 by support-oracle refinement of an inner hull.

    Every hull facet of the witness points is tested with one support query;
    a facet whose support exceeds its bound yields a new witness point, and
    the loop stops when all facets are confirmed as region facets.
    """
    d = cat.k
    if d > 3:
        raise RegionError("vertex extraction is limited to k <= 3")
    zero = tuple(Fraction(0) for _ in range(d))
    points = [zero]
    for i in range(d):
        e = tuple(Fraction(1 if j == i else 0) for j in range(d))
        _, w = support_point(cat, e)
        points.append(w)
    confirmed: set[tuple[tuple[int, ...], Fraction]] = set()
    for _ in range(max_rounds):
        facets = hull.hull_facets(points)
        grew = False
        for a, b in facets:
            if (a, b) in confirmed:
                continue
            if all(x <= 0 for x in a):
                confirmed.add((a, b))
                continue
            s, w = support_point(cat, [Fraction(x) for x in a])
            if s > b:
                points.append(w)
                grew = True
            else:
                confirmed.add((a, b))
        if not grew:
            verts = hull.extreme_points(points, facets)
            return RegionPolytope(tuple(HalfSpace(qvec(a), b) for a, b in facets), tuple(verts), True)
    raise RegionError("hull refinement did not converge")
