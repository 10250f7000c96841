"""Recovery hypergraphs, matching numbers, integral allocations, batch and PIR checks."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import lp
from .codebook import StorageScheme, is_mds
from .rational import fmt, q, qvec
from .recovery import RecoveryCatalog
from .region import Allocation, is_achievable

MAX_EXACT_VERTICES = 24
DEFAULT_NODE_BUDGET = 10_000_000

PAIRS, FULL = "pairs", "full"


class GraphTooLarge(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Hyperedge:
    vertices: tuple[int, ...]
    label: int
    set_index: int  # index into the catalog list of ``label``


@dataclass(frozen=True)
class RecoveryHypergraph:
    """Vertices 0..n-1 are servers; n.. are dummies attached to systematic columns."""

    n_servers: int
    dummies: tuple[int, ...]  # dummies[d] = server the (n + d)-th vertex belongs to
    edges: tuple[Hyperedge, ...]
    mode: str

    @property
    def n_vertices(self) -> int:
        return self.n_servers + len(self.dummies)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e.vertices)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "servers": self.n_servers,
            "dummies": [{"vertex": self.n_servers + d, "server": s} for d, s in enumerate(self.dummies)],
            "edges": [{"vertices": list(e.vertices), "object": e.label, "set": e.set_index} for e in self.edges],
        }


def build_graph(s: StorageScheme, cat: RecoveryCatalog, mode: str = PAIRS) -> RecoveryHypergraph:
    """Pairs mode keeps recovery sets of size <= 2 and gives each systematic
    column one dummy; full mode keeps every set and gives each systematic
    column k-1 dummies when the scheme is MDS (so all hyperedges have k
    vertices), otherwise one."""
    if mode not in (PAIRS, FULL):
        raise ValueError(f"unknown graph mode {mode!r}")
    per_column = (s.k - 1 if is_mds(s) else 1) if mode == FULL else 1
    per_column = max(per_column, 1)
    dummies: list[int] = []
    first_dummy: dict[int, int] = {}
    for j, col in enumerate(s.columns):
        if sum(1 for x in col if x) == 1:
            first_dummy[j] = s.n + len(dummies)
            dummies.extend([j] * per_column)
    edges = []
    for i, per in enumerate(cat.sets):
        for jj, r in enumerate(per):
            if mode == PAIRS and r.size > 2:
                continue
            verts = r.servers
            if r.size == 1 and r.servers[0] in first_dummy:
                d0 = first_dummy[r.servers[0]]
                verts = verts + tuple(range(d0, d0 + per_column))
            edges.append(Hyperedge(verts, i, jj))
    return RecoveryHypergraph(s.n, tuple(dummies), tuple(edges), mode)


def collapse_parallel(g: RecoveryHypergraph) -> RecoveryHypergraph:
    """Merge hyperedges with identical vertex sets (keeping the first label)."""
    seen = {}
    for e in g.edges:
        seen.setdefault(e.vertices, e)
    return RecoveryHypergraph(g.n_servers, g.dummies, tuple(seen.values()), g.mode)


def fractional_matching_number(g: RecoveryHypergraph) -> Fraction:
    if not g.edges:
        return Fraction(0)
    cols = [{v: 1 for v in e.vertices} for e in g.edges]
    res = lp.solve([1] * len(cols), cols, [lp.LE] * g.n_vertices, [1] * g.n_vertices)
    return res.objective


def _masks(g: RecoveryHypergraph) -> list[int]:
    if g.n_vertices > MAX_EXACT_VERTICES:
        raise GraphTooLarge(f"{g.n_vertices} vertices exceed the exact-search cap of {MAX_EXACT_VERTICES}")
    return sorted({sum(1 << v for v in e.vertices) for e in g.edges})


def matching_number(g: RecoveryHypergraph) -> int:
    masks = _masks(g)
    best = 0

    def rec(idx: int, used: int, count: int):
        nonlocal best
        if count + (len(masks) - idx) <= best:
            return
        if idx == len(masks):
            best = max(best, count)
            return
        m = masks[idx]
        if not m & used:
            rec(idx + 1, used | m, count + 1)
        rec(idx + 1, used, count)

    rec(0, 0, 0)
    return best


def vertex_cover_number(g: RecoveryHypergraph) -> int:
    masks = _masks(g)
    best = g.n_vertices

    def rec(cover: int, size: int):
        nonlocal best
        if size >= best:
            return
        open_edge = next((m for m in masks if not m & cover), None)
        if open_edge is None:
            best = size
            return
        v = 0
        while open_edge:
            if open_edge & 1:
                rec(cover | (1 << v), size + 1)
            open_edge >>= 1
            v += 1

    rec(0, 0)
    return best


def is_bipartite(g: RecoveryHypergraph) -> bool:
    if any(len(e.vertices) != 2 for e in g.edges):
        raise ValueError("bipartiteness is defined here for graphs whose edges all have two vertices")
    adj: dict[int, list[int]] = {v: [] for v in range(g.n_vertices)}
    for e in g.edges:
        a, b = e.vertices
        adj[a].append(b)
        adj[b].append(a)
    color: dict[int, int] = {}
    for start in adj:
        if start in color:
            continue
        color[start] = 0
        dq = deque([start])
        while dq:
            v = dq.popleft()
            for w in adj[v]:
                if w not in color:
                    color[w] = 1 - color[v]
                    dq.append(w)
                elif color[w] == color[v]:
                    return False
    return True


def fractional_matching(g: RecoveryHypergraph, lam: Sequence, mu=1) -> dict[int, Fraction] | None:
    """Edge weights with vertex sums <= μ and label sums = λ, or None if impossible."""
    lam = qvec(lam)
    k = len(lam)
    if any(x < 0 for x in lam):
        return None
    if not any(lam):
        return {}
    cols = []
    for e in g.edges:
        if e.label >= k:
            raise ValueError("edge label outside the demand vector")
        col = {e.label: 1}
        for v in e.vertices:
            col[k + v] = 1
        cols.append(col)
    senses = [lp.EQ] * k + [lp.LE] * g.n_vertices
    rhs = list(lam) + [q(mu)] * g.n_vertices
    res = lp.solve([0] * len(cols), cols, senses, rhs)
    if not res.ok:
        return None
    return {idx: v for idx, v in enumerate(res.x) if v}


def achievable_via_matching(g: RecoveryHypergraph, lam: Sequence, mu=1) -> bool:
    return fractional_matching(g, lam, mu) is not None


# -- integral allocations ----------------------------------------------------------

def integral_achievable(
    cat: RecoveryCatalog, mu, lam: Sequence, budget: int = DEFAULT_NODE_BUDGET
) -> tuple[bool, Allocation | None]:
    """Depth-first search for an all-integer allocation.

    Objects are handled in order; each object's units go to recovery sets
    with non-decreasing catalog index, so every multiset is visited once.
    """
    mu = q(mu)
    lam = qvec(lam)
    if mu.denominator != 1 or any(x.denominator != 1 or x < 0 for x in lam):
        raise ValueError("integral search needs integral μ and nonnegative integral λ")
    if len(lam) != cat.k:
        raise ValueError("demand dimension mismatch")
    if not is_achievable(cat, lam)[0]:
        return False, None
    need = [int(x) for x in lam]
    cap = [int(mu)] * cat.n
    chosen: list[tuple[int, int]] = []
    nodes = 0
    sets = [[r.servers for r in per] for per in cat.sets]

    def rec(i: int, left: int, start: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"integral search exceeded {budget} nodes")
        while i < len(need) and left == 0:
            i += 1
            if i == len(need):
                return True
            left, start = need[i], 0
        if i >= len(need):
            return True
        for j in range(start, len(sets[i])):
            srv = sets[i][j]
            if all(cap[s] > 0 for s in srv):
                for s in srv:
                    cap[s] -= 1
                chosen.append((i, j))
                if rec(i, left - 1, j):
                    return True
                chosen.pop()
                for s in srv:
                    cap[s] += 1
        return False

    first = next((i for i, x in enumerate(need) if x), None)
    if first is None:
        return True, Allocation({})
    if rec(first, need[first], 0):
        rates: dict[tuple[int, int], Fraction] = {}
        for key in chosen:
            rates[key] = rates.get(key, Fraction(0)) + 1
        return True, Allocation(rates)
    return False, None


def compositions(t: int, k: int):
    """All k-tuples of nonnegative integers summing to t."""
    for cuts in itertools.combinations(range(t + k - 1), k - 1):
        prev, out = -1, []
        for c in cuts:
            out.append(c - prev - 1)
            prev = c
        out.append(t + k - 2 - prev)
        yield tuple(out)


def is_batch_code(cat: RecoveryCatalog, mu, t: int, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    if t < 1:
        raise ValueError("t must be >= 1")
    return all(integral_achievable(cat, mu, lam, budget)[0] for lam in compositions(t, cat.k))


def first_batch_failure(cat: RecoveryCatalog, mu, t: int) -> tuple[int, ...] | None:
    for lam in compositions(t, cat.k):
        if not integral_achievable(cat, mu, lam)[0]:
            return lam
    return None


def is_pir_code(cat: RecoveryCatalog, mu, t: int, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    if t < 1:
        raise ValueError("t must be >= 1")
    for i in range(cat.k):
        lam = [0] * cat.k
        lam[i] = t
        if not integral_achievable(cat, mu, lam, budget)[0]:
            return False
    return True


def matching_stats(g: RecoveryHypergraph) -> dict:
    out = {"vertices": g.n_vertices, "edges": len(g.edges), "nu_f": fmt(fractional_matching_number(g))}
    if g.n_vertices <= MAX_EXACT_VERTICES:
        out["nu"] = matching_number(g)
        out["tau"] = vertex_cover_number(g)
    if all(len(e.vertices) == 2 for e in g.edges):
        out["bipartite"] = is_bipartite(g)
    return out


def uniform_split(cat: RecoveryCatalog, lam: Sequence, max_size: int = 2) -> Allocation:
    """Split each λ_i evenly over a greedy pairwise-disjoint family of its small recovery sets."""
    from .recovery import disjoint_family

    lam = qvec(lam)
    rates: dict[tuple[int, int], Fraction] = {}
    for i, x in enumerate(lam):
        if not x:
            continue
        fam = disjoint_family(cat, i, max_size)
        index = {r.servers: j for j, r in enumerate(cat.sets[i])}
        for r in fam:
            rates[(i, index[r.servers])] = x / len(fam)
    return Allocation(rates)
