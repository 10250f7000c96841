"""Storage schemes: k data objects stored as n coded symbols, one per server."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .galois import FieldSpec, GF, get_field, rank_of_columns
from .rational import fmt, q as as_fraction


class SchemeError(ValueError):
    pass


@dataclass(frozen=True)
class StorageScheme:
    """Columns of a k x n generator matrix plus the per-server service rate."""

    spec: FieldSpec
    k: int
    columns: tuple[tuple[int, ...], ...]
    mu: Fraction = Fraction(1)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        cols = tuple(tuple(int(x) for x in c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "mu", as_fraction(self.mu))
        if self.k < 1:
            raise SchemeError("k must be >= 1")
        if len(cols) < self.k:
            raise SchemeError(f"need n >= k, got n={len(cols)} < k={self.k}")
        if self.mu <= 0:
            raise SchemeError("mu must be positive")
        q = self.spec.q
        for j, c in enumerate(cols):
            if len(c) != self.k:
                raise SchemeError(f"column {j} has length {len(c)}, expected {self.k}")
            if any(not 0 <= x < q for x in c):
                raise SchemeError(f"column {j} has entries outside GF({q})")
            if not any(c):
                raise SchemeError(f"column {j} is the zero vector")
        if rank_of_columns(self.field, cols) != self.k:
            raise SchemeError("generator matrix does not have rank k")

    @property
    def n(self) -> int:
        return len(self.columns)

    @property
    def field(self) -> GF:
        return get_field(self.spec)

    def to_json(self) -> dict:
        out = {
            "field": self.spec.to_json(),
            "k": self.k,
            "n": self.n,
            "mu": fmt(self.mu),
            "columns": [list(c) for c in self.columns],
        }
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "StorageScheme":
        try:
            spec = FieldSpec.from_json(obj["field"])
            k = int(obj["k"])
            cols = tuple(tuple(int(x) for x in c) for c in obj["columns"])
            mu = as_fraction(obj.get("mu", 1))
        except (KeyError, TypeError, ValueError) as e:
            raise SchemeError(f"malformed scheme: {e}") from e
        if "n" in obj and int(obj["n"]) != len(cols):
            raise SchemeError("n does not match the number of columns")
        return cls(spec, k, cols, mu, obj.get("name", ""))

    def rows(self) -> list[list[int]]:
        return [[c[i] for c in self.columns] for i in range(self.k)]

    def with_mu(self, mu) -> "StorageScheme":
        return StorageScheme(self.spec, self.k, self.columns, mu, self.name)

    def permuted(self, perm: Sequence[int]) -> "StorageScheme":
        """Scheme whose server j stores the old column perm[j]."""
        return StorageScheme(self.spec, self.k, tuple(self.columns[p] for p in perm), self.mu, self.name)

    def scaled(self, scalars: Sequence[int]) -> "StorageScheme":
        F = self.field
        cols = tuple(tuple(F.mul(s, x) for x in c) for s, c in zip(scalars, self.columns))
        return StorageScheme(self.spec, self.k, cols, self.mu, self.name)

    def appended(self, column: Sequence[int]) -> "StorageScheme":
        return StorageScheme(self.spec, self.k, self.columns + (tuple(column),), self.mu, self.name)

    def systematic_servers(self) -> dict[int, list[int]]:
        """Object index -> servers storing a nonzero multiple of that object alone."""
        out: dict[int, list[int]] = {}
        for j, c in enumerate(self.columns):
            nz = [i for i, x in enumerate(c) if x]
            if len(nz) == 1:
                out.setdefault(nz[0], []).append(j)
        return out

    def encode(self, data: Sequence[int]) -> list[int]:
        F = self.field
        return [F.dot(data, c) for c in self.columns]

    def describe(self, names: str = "abcdefghijklmnop") -> list[str]:
        """Columns as linear combinations, e.g. ``a+2b``."""
        out = []
        for c in self.columns:
            terms = []
            for i, x in enumerate(c):
                if x:
                    terms.append(names[i] if x == 1 else f"{x}{names[i]}")
            out.append("+".join(terms))
        return out


def make_explicit(spec: FieldSpec, k: int, columns: Sequence[Sequence[int]], mu=1, name: str = "") -> StorageScheme:
    return StorageScheme(spec, k, tuple(tuple(c) for c in columns), as_fraction(mu), name)


def is_mds(s: StorageScheme) -> bool:
    """Every k-subset of columns has rank k."""
    F = s.field
    return all(rank_of_columns(F, sub) == s.k for sub in itertools.combinations(s.columns, s.k))


def _unit(k: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(k))


def make_replication(k: int, replicas_per_object: Sequence[int], mu=1, spec: FieldSpec | None = None) -> StorageScheme:
    if len(replicas_per_object) != k:
        raise SchemeError("need one replica count per object")
    if any(r < 1 for r in replicas_per_object):
        raise SchemeError("replica counts must be >= 1")
    cols = [_unit(k, i) for i, r in enumerate(replicas_per_object) for _ in range(r)]
    return make_explicit(spec or FieldSpec(2), k, cols, mu, f"replication{tuple(replicas_per_object)}")


def _vandermonde_column(F: GF, x: int, k: int) -> tuple[int, ...]:
    return tuple(F.pow(x, e) if x else (1 if e == 0 else 0) for e in range(k))


def _cauchy_parity(F: GF, n: int, k: int) -> list[tuple[int, ...]]:
    # x_i = 0..k-1 and y_j = k..n-1 are distinct field elements
    xs = list(range(k))
    ys = list(range(k, n))
    return [tuple(F.inv(F.sub(x, y)) for x in xs) for y in ys]


def make_mds(n: int, k: int, spec: FieldSpec, systematic: bool = True, mu=1) -> StorageScheme:
    """[n, k] MDS scheme, verified exhaustively before returning.

    Systematic layouts try Vandermonde parity columns (1, y, ..., y^(k-1)) for
    y = 1..n-k first and fall back to a Cauchy parity block (needs q >= n).
    Non-systematic layouts evaluate on the nonzero points 1..n when q > n.
    """
    if not 1 <= k <= n:
        raise SchemeError("need 1 <= k <= n")
    F = get_field(spec)
    q = spec.q
    name = f"mds[{n},{k}]" + ("" if systematic else "-nonsys")
    if n == k:
        return make_explicit(spec, k, [_unit(k, i) for i in range(k)], mu, name)
    candidates = []
    if systematic:
        ident = [_unit(k, i) for i in range(k)]
        if q - 1 >= n - k:
            candidates.append(ident + [_vandermonde_column(F, y, k) for y in range(1, n - k + 1)])
        if q >= n:
            candidates.append(ident + _cauchy_parity(F, n, k))
    else:
        if q > n:
            candidates.append([_vandermonde_column(F, x, k) for x in range(1, n + 1)])
        elif q == n:
            candidates.append([_vandermonde_column(F, x, k) for x in range(n)])
    if not candidates:
        raise SchemeError(f"GF({q}) too small for an [{n},{k}] MDS layout")
    for cols in candidates:
        s = make_explicit(spec, k, cols, mu, name)
        if is_mds(s):
            return s
    raise SchemeError(f"MDS verification failed for [{n},{k}] over GF({q})")


def make_simplex(k: int, mu=1) -> StorageScheme:
    """Binary [2^k - 1, k] Simplex: all nonzero vectors, numeric order, first coordinate = LSB."""
    if not 2 <= k <= 4:
        raise SchemeError("simplex supported for 2 <= k <= 4")
    cols = [tuple((v >> i) & 1 for i in range(k)) for v in range(1, 1 << k)]
    return make_explicit(FieldSpec(2), k, cols, mu, f"simplex[{(1 << k) - 1},{k}]")


def make_rm1(k: int, systematic: bool = False, mu=1) -> StorageScheme:
    """Binary first-order Reed-Muller [2^(k-1), k] scheme.

    Rows are r_{k-1}, ..., r_1, r_0 where r_0 is all-ones and r_j indicates the
    points with coordinate x_j = 0; the points of F_2^(k-1) are enumerated in
    binary counting order with x_1 as the least significant bit. The
    systematic variant replaces r_0 by the sum of all rows.
    """
    if k < 2:
        raise SchemeError("Reed-Muller needs k >= 2")
    n = 1 << (k - 1)
    rows = []
    for j in range(k - 1, 0, -1):
        rows.append([1 if ((i >> (j - 1)) & 1) == 0 else 0 for i in range(n)])
    r0 = [1] * n
    if systematic:
        r0 = [(sum(r[i] for r in rows) + 1) % 2 for i in range(n)]
    rows.append(r0)
    cols = [tuple(rows[r][i] for r in range(k)) for i in range(n)]
    return make_explicit(FieldSpec(2), k, cols, mu, f"rm1[{n},{k}]" + ("-sys" if systematic else ""))


# -- Pyramid-style locally repairable codes -----------------------------------

@dataclass(frozen=True)
class LocalGroup:
    objects: tuple[int, ...]
    parities: tuple[tuple[int, ...], ...]  # coefficient vectors over ``objects``


@dataclass(frozen=True)
class LrcProfile:
    k: int
    ell: int
    r: int
    groups: tuple[LocalGroup, ...]
    p: int

    def __post_init__(self):
        if self.ell <= self.r:
            raise SchemeError("locality needs ell > r")
        seen = sorted(o for g in self.groups for o in g.objects)
        if seen != list(range(self.k)):
            raise SchemeError("groups must partition the k objects")
        for g in self.groups:
            if len(g.objects) != self.r:
                raise SchemeError("each local group must hold exactly r objects")
            if len(g.parities) != self.ell - self.r:
                raise SchemeError("each local group needs ell - r local parities")
            if any(len(c) != self.r for c in g.parities):
                raise SchemeError("local parity coefficient vectors must have length r")
        if self.p < 0:
            raise SchemeError("global parity count must be >= 0")

    def to_json(self) -> dict:
        return {
            "k": self.k, "ell": self.ell, "r": self.r, "p": self.p,
            "groups": [{"objects": list(g.objects), "parities": [list(c) for c in g.parities]} for g in self.groups],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LrcProfile":
        groups = tuple(
            LocalGroup(tuple(g["objects"]), tuple(tuple(c) for c in g["parities"])) for g in obj["groups"]
        )
        return cls(int(obj["k"]), int(obj["ell"]), int(obj["r"]), groups, int(obj["p"]))


@dataclass(frozen=True)
class LrcLayout:
    """Server indices of each role in a scheme built by :func:`make_lrc`."""

    systematic: dict[int, int]  # object -> server
    local: tuple[tuple[int, ...], ...]  # group -> local parity servers
    group_servers: tuple[tuple[int, ...], ...]  # group -> systematic + local parity servers
    global_parities: tuple[int, ...]


def pyramid_profile(k: int, ell: int, r: int, p: int, spec: FieldSpec) -> LrcProfile:
    """Consecutive groups of r objects with Vandermonde local parities y = 1..ell-r."""
    if k % r:
        raise SchemeError("r must divide k")
    if ell - r > spec.q - 1:
        raise SchemeError("field too small for the local parities")
    F = get_field(spec)
    groups = []
    for g in range(k // r):
        objs = tuple(range(g * r, (g + 1) * r))
        groups.append(LocalGroup(objs, tuple(_vandermonde_column(F, y, r) for y in range(1, ell - r + 1))))
    return LrcProfile(k, ell, r, tuple(groups), p)


def example1_profile() -> LrcProfile:
    """(12,4) LRC with (4,2) locality: parities a+b, a+2b and c+d, 3c+4d."""
    return LrcProfile(
        4, 4, 2,
        (LocalGroup((0, 1), ((1, 1), (1, 2))), LocalGroup((2, 3), ((1, 1), (3, 4)))),
        4,
    )


def lrc_layout(profile: LrcProfile) -> LrcLayout:
    systematic = {}
    pos = 0
    for g in profile.groups:
        for o in g.objects:
            systematic[o] = pos
            pos += 1
    nloc = profile.ell - profile.r
    ng = len(profile.groups)
    local = [[] for _ in profile.groups]
    for j in range(nloc):
        for gi in range(ng):
            local[gi].append(pos)
            pos += 1
    glob = tuple(range(pos, pos + profile.p))
    group_servers = tuple(
        tuple(systematic[o] for o in g.objects) + tuple(local[gi]) for gi, g in enumerate(profile.groups)
    )
    return LrcLayout(systematic, tuple(tuple(x) for x in local), group_servers, glob)


def local_min_distance(F: GF, generator_cols: Sequence[Sequence[int]]) -> int:
    """Minimum Hamming weight over all nonzero codewords (exhaustive)."""
    r = len(generator_cols[0])
    best = len(generator_cols)
    for msg in itertools.product(range(F.q), repeat=r):
        if not any(msg):
            continue
        w = sum(1 for c in generator_cols if F.dot(msg, c))
        best = min(best, w)
    return best


def make_lrc(profile: LrcProfile, spec: FieldSpec, mu=1) -> StorageScheme:
    """Pyramid layout: systematic columns group by group, then local parities
    (first parity of every group, then the second, ...), then p global
    parities as Vandermonde columns (1, y, ..., y^(k-1)) for y = 1..p."""
    F = get_field(spec)
    if profile.p > spec.q - 1:
        raise SchemeError(f"GF({spec.q}) too small for {profile.p} global parities")
    k = profile.k
    for g in profile.groups:
        local_cols = [_unit(profile.r, i) for i in range(profile.r)] + [tuple(c) for c in g.parities]
        if any(x >= spec.q for c in local_cols for x in c):
            raise SchemeError("local parity coefficient outside the field")
        if local_min_distance(F, local_cols) < profile.ell - profile.r + 1:
            raise SchemeError(f"local group {g.objects} has distance below ell - r + 1")
    layout = lrc_layout(profile)
    n = len(layout.systematic) + sum(len(x) for x in layout.local) + profile.p
    cols: list[tuple[int, ...] | None] = [None] * n
    for o, s in layout.systematic.items():
        cols[s] = _unit(k, o)
    for gi, g in enumerate(profile.groups):
        for pi, srv in enumerate(layout.local[gi]):
            vec = [0] * k
            for o, coef in zip(g.objects, g.parities[pi]):
                vec[o] = coef
            cols[srv] = tuple(vec)
    for y, srv in zip(range(1, profile.p + 1), layout.global_parities):
        cols[srv] = _vandermonde_column(F, y, k)
    name = f"lrc({n},{k})"
    return make_explicit(spec, k, cols, mu, name)
