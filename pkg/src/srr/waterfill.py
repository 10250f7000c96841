"""Waterfilling allocators for systematic MDS and Pyramid LRC schemes, plus counting bounds.

The fill is event driven. Residual demand is poured into the k least-loaded
unsaturated servers; with ties the pour is spread evenly over a tier, so
each server rises at a speed in [0, 1] and the speeds sum to k. The state
only changes character when a tier catches the next one, a tier saturates,
or the residual runs out, and we jump straight between those events.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lp
from .codebook import LrcProfile, StorageScheme, lrc_layout
from .rational import fmt, fmtvec, q, qvec
from .recovery import RecoveryCatalog, enumerate_recovery_sets
from .region import Allocation

Event = tuple[Fraction, tuple[int, ...]]


class WaterfillError(ValueError):
    pass


@dataclass
class WaterfillResult:
    loads: tuple[Fraction, ...]
    residual: Fraction
    feasible: bool
    events: list[Event] = field(default_factory=list)
    allocation: Allocation | None = None

    def to_json(self, cat: RecoveryCatalog | None = None) -> dict:
        out = {
            "loads": fmtvec(self.loads),
            "residual": fmt(self.residual),
            "feasible": self.feasible,
            "events": [{"rate": fmt(r), "servers": list(s)} for r, s in self.events],
        }
        if self.allocation is not None and cat is not None:
            out["allocation"] = self.allocation.to_json(cat)
        return out


def _fill(loads: list[Fraction], pool: Sequence[int], k: int, mu: Fraction, amount: Fraction):
    """Pour ``amount`` into ``pool`` k servers at a time; returns (poured, [(dt, speeds)])."""
    steps = []
    remaining = amount
    while remaining > 0:
        active = [s for s in pool if loads[s] < mu]
        if len(active) < k:
            break
        levels = sorted({loads[s] for s in active})
        tiers = [[s for s in active if loads[s] == lv] for lv in levels]
        speeds: list[Fraction] = []
        need = k
        for tier in tiers:
            if need >= len(tier):
                speeds.append(Fraction(1))
                need -= len(tier)
            else:
                speeds.append(Fraction(need, len(tier)))
                need = 0
        dt = remaining
        for t, v in enumerate(speeds):
            if v == 0:
                break
            dt = min(dt, (mu - levels[t]) / v)
            if t + 1 < len(tiers) and v > speeds[t + 1]:
                dt = min(dt, (levels[t + 1] - levels[t]) / (v - speeds[t + 1]))
        rates = {}
        for tier, v in zip(tiers, speeds):
            if v:
                for s in tier:
                    loads[s] += v * dt
                    rates[s] = v
        steps.append((dt, rates))
        remaining -= dt
    return amount - remaining, steps


def wraparound(dt: Fraction, rates: dict[int, Fraction], k: int) -> list[Event]:
    """Split per-server loads rates[s]*dt (each <= dt, summing to k*dt) into k-sets."""
    pieces = []  # (machine, start, end, server)
    m, t = 0, Fraction(0)
    for s in sorted(rates):
        w = rates[s] * dt
        while w > 0:
            room = dt - t
            take = min(w, room)
            pieces.append((m, t, t + take, s))
            t += take
            w -= take
            if t == dt:
                m, t = m + 1, Fraction(0)
    cuts = sorted({p[1] for p in pieces} | {p[2] for p in pieces})
    out = []
    for a, b in zip(cuts, cuts[1:]):
        servers = tuple(sorted(s for (_, st, en, s) in pieces if st <= a and en >= b))
        if len(servers) != k:
            raise WaterfillError("wrap-around produced a set of the wrong size")
        out.append((b - a, servers))
    return out


def _events(steps, k) -> list[Event]:
    out: list[Event] = []
    for dt, rates in steps:
        out.extend(wraparound(dt, rates, k))
    return out


class _Index:
    def __init__(self, cat: RecoveryCatalog):
        self.cat = cat
        self.where = {(r.obj, r.servers): j for i, per in enumerate(cat.sets) for j, r in enumerate(per)}

    def __call__(self, i: int, servers: tuple[int, ...]) -> tuple[int, int]:
        j = self.where.get((i, servers))
        if j is None:
            raise WaterfillError(f"{servers} is not a minimal recovery set of object {i}")
        return i, j


def _assign(events: list[Event], owners: list[tuple[int, Fraction]], index: _Index, rates: dict):
    """Hand the pieces of ``events`` to objects in order of ``owners`` (object, amount)."""
    owners = [[i, a] for i, a in owners if a > 0]
    o = 0
    for amt, servers in events:
        while amt > 0 and o < len(owners):
            i, need = owners[o]
            take = min(amt, need)
            key = index(i, servers)
            rates[key] = rates.get(key, Fraction(0)) + take
            owners[o][1] -= take
            amt -= take
            if owners[o][1] == 0:
                o += 1


def mds_waterfill(n: int, k: int, mu, lam: Sequence, catalog: RecoveryCatalog | None = None) -> WaterfillResult:
    """Waterfilling on a systematic [n, k] MDS layout (servers 0..k-1 systematic).

    Passing the scheme's catalog additionally decomposes the result into an
    explicit allocation over recovery sets.
    """
    mu = q(mu)
    lam = qvec(lam)
    if len(lam) != k:
        raise WaterfillError(f"demand has length {len(lam)}, expected {k}")
    if any(x < 0 for x in lam):
        raise WaterfillError("negative demand")
    loads = [min(x, mu) for x in lam] + [Fraction(0)] * (n - k)
    overflow = [max(x - mu, Fraction(0)) for x in lam]
    residual = sum(overflow, Fraction(0))
    poured, steps = _fill(loads, range(n), k, mu, residual)
    events = _events(steps, k)
    left = residual - poured
    alloc = None
    if catalog is not None and left == 0:
        index = _Index(catalog)
        rates = {index(i, (i,)): min(x, mu) for i, x in enumerate(lam) if x > 0}
        _assign(events, list(enumerate(overflow)), index, rates)
        alloc = Allocation(rates)
    return WaterfillResult(tuple(loads), left, left == 0, events, alloc)


def mds_bound_holds(n: int, k: int, mu, lam: Sequence) -> bool:
    """Σ(min(λ_i, μ) + k(λ_i − μ)^+) ≤ nμ."""
    mu = q(mu)
    lam = qvec(lam)
    total = sum((min(x, mu) + k * max(x - mu, Fraction(0)) for x in lam), Fraction(0))
    return total <= n * mu


def mds_bound_halfspaces(n: int, k: int, mu) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Linear pieces of the MDS bound: one per subset T of objects in overflow."""
    mu = q(mu)
    out = []
    for mask in range(1 << k):
        a = tuple(Fraction(k) if mask >> i & 1 else Fraction(1) for i in range(k))
        b = n * mu + sum(((k - 1) * mu for i in range(k) if mask >> i & 1), Fraction(0))
        out.append((a, b))
    return out


def capacity_usage(profiles: Sequence[Sequence[int]], mu, lam: Sequence) -> Fraction | float:
    """Least server capacity consumed if each object fills its recovery sets by
    ascending size at rate μ per set; ``math.inf`` when a profile runs out."""
    mu = q(mu)
    total = Fraction(0)
    for prof, x in zip(profiles, qvec(lam)):
        left = x
        for size in sorted(prof):
            if left <= 0:
                break
            take = min(left, mu)
            total += size * take
            left -= take
        if left > 0:
            return math.inf
    return total


# -- LRC -----------------------------------------------------------------------

def _admissible(servers: Sequence[int], group_of: dict[int, int], parity_group: dict[int, int], r: int) -> bool:
    for s in servers:
        g = parity_group.get(s)
        if g is not None and sum(1 for t in servers if group_of.get(t) == g) < r:
            return False
    return True


def lrc_waterfill(
    scheme: StorageScheme,
    profile: LrcProfile,
    lam: Sequence,
    catalog: RecoveryCatalog | None = None,
) -> WaterfillResult:
    """Two-step waterfilling for a scheme built by ``make_lrc``.

    Step 1 waterfills each local group as an [ℓ, r] MDS code. Step 2 routes
    what is left over admissible k-server recovery sets (a set touching a
    group's local parity must hold r servers of that group), choosing the
    split that minimises the largest resulting server load.
    """
    lam = qvec(lam)
    k, mu, r = profile.k, scheme.mu, profile.r
    if len(lam) != k or scheme.k != k:
        raise WaterfillError("demand, scheme and profile disagree on k")
    if any(x < 0 for x in lam):
        raise WaterfillError("negative demand")
    layout = lrc_layout(profile)
    if len(layout.systematic) + sum(map(len, layout.local)) + len(layout.global_parities) != scheme.n:
        raise WaterfillError("scheme does not match the profile layout")
    cat = catalog or enumerate_recovery_sets(scheme)
    index = _Index(cat)
    loads = [Fraction(0)] * scheme.n
    rates: dict[tuple[int, int], Fraction] = {}
    events: list[Event] = []
    leftover = [Fraction(0)] * k

    for gi, g in enumerate(profile.groups):
        for o in g.objects:
            take = min(lam[o], mu)
            loads[layout.systematic[o]] = take
            if take:
                rates[index(o, (layout.systematic[o],))] = take
        owners = [(o, max(lam[o] - mu, Fraction(0))) for o in g.objects]
        need = sum((a for _, a in owners), Fraction(0))
        poured, steps = _fill(loads, layout.group_servers[gi], r, mu, need)
        ev = _events(steps, r)
        events.extend(ev)
        served = []
        rest = poured
        for o, a in owners:
            s = min(a, rest)
            served.append((o, s))
            leftover[o] = a - s
            rest -= s
        _assign(ev, served, index, rates)

    total_left = sum(leftover, Fraction(0))
    if total_left:
        group_of = {}
        parity_group = {}
        for gi, srv in enumerate(layout.group_servers):
            for s in srv:
                group_of[s] = gi
            for s in layout.local[gi]:
                parity_group[s] = gi
        spare = [mu - x for x in loads]
        keys, cols = [], []
        nvars_rows = k + scheme.n
        for o in range(k):
            if not leftover[o]:
                continue
            for j, rs in enumerate(cat.sets[o]):
                if rs.size != k or not _admissible(rs.servers, group_of, parity_group, r):
                    continue
                if any(spare[s] <= 0 for s in rs.servers):
                    continue
                col = {o: 1}
                for s in rs.servers:
                    col[k + s] = 1
                keys.append((o, j))
                cols.append(col)
        # minimise the peak load z: loads[s] + flow_s <= z, z <= mu
        zcol = {k + s: -1 for s in range(scheme.n)}
        zcol[nvars_rows] = 1
        senses = [lp.EQ] * k + [lp.LE] * scheme.n + [lp.LE]
        rhs = list(leftover) + [-x for x in loads] + [mu]
        res = lp.solve([0] * len(cols) + [1], cols + [zcol], senses, rhs, maximize=False)
        if res.ok:
            for (o, j), v in zip(keys, res.x):
                if v:
                    rates[(o, j)] = rates.get((o, j), Fraction(0)) + v
                    servers = cat.sets[o][j].servers
                    events.append((v, servers))
                    for s in servers:
                        loads[s] += v
            total_left = Fraction(0)
    feasible = total_left == 0
    return WaterfillResult(tuple(loads), total_left, feasible, events, Allocation(rates) if feasible else None)


def epsilon_fill(n: int, k: int, mu, lam: Sequence, eps: Fraction = Fraction(1, 1 << 12)) -> tuple[list[Fraction], Fraction]:
    """Literal ε-step waterfilling (ties broken by lowest server index); a test oracle."""
    mu = q(mu)
    lam = qvec(lam)
    loads = [min(x, mu) for x in lam] + [Fraction(0)] * (n - k)
    residual = sum((max(x - mu, Fraction(0)) for x in lam), Fraction(0))
    while residual > 0:
        cand = sorted((loads[s], s) for s in range(n) if loads[s] + min(eps, residual) <= mu)
        if len(cand) < k:
            break
        step = min(eps, residual)
        for _, s in cand[:k]:
            loads[s] += step
        residual -= step
    return loads, residual


def grid_points(lo, hi, steps: int, dim: int):
    """Rational grid with ``steps`` points per axis over [lo, hi]^dim."""
    lo, hi = q(lo), q(hi)
    axis = [lo + (hi - lo) * Fraction(i, steps - 1) for i in range(steps)]
    return itertools.product(axis, repeat=dim)
