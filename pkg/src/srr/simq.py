"""Fork-join queueing simulation of a static allocation.

Each server is an FCFS queue with exponential service, so its departure
times follow the Lindley recursion d_n = max(a_n, d_{n-1}) + S_n. The
recursion is evaluated in closed form, d_n = C_n + max_{m<=n}(a_m - C_{m-1})
with C the running sum of service times, which vectorises cleanly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .rational import fmtvec, q, qvec
from .recovery import RecoveryCatalog
from .region import Allocation


class SimError(ValueError):
    pass


@dataclass
class SimConfig:
    catalog: RecoveryCatalog
    allocation: Allocation
    lam: tuple[Fraction, ...]
    mu: Fraction | None = None  # defaults to the scheme's μ
    horizon: float = 1e5
    warmup: float = 0.2
    seed: int = 0
    margin: float = 0.05
    samples: int = 2000  # queue-length snapshots over the horizon

    def __post_init__(self):
        self.lam = qvec(self.lam)
        self.mu = self.catalog.mu if self.mu is None else q(self.mu)
        if self.horizon <= 0:
            raise SimError("horizon must be positive")
        if not 0 <= self.warmup < 1:
            raise SimError("warmup fraction must lie in [0, 1)")
        if len(self.lam) != self.catalog.k:
            raise SimError("demand dimension mismatch")
        got = self.allocation.demand(self.catalog.k)
        if got != self.lam:
            raise SimError(f"allocation rows sum to {fmtvec(got)}, demand is {fmtvec(self.lam)}")
        if any(v < 0 for v in self.allocation.rates.values()):
            raise SimError("negative allocation entry")


@dataclass
class SimReport:
    arrival_rate: list[float]
    offered_load: list[Fraction]
    utilization: list[float]
    mean_queue: list[float]
    drift: list[float]
    stable: list[bool]
    mean_response: float
    requests: int
    subtasks: int
    snapshot_times: np.ndarray = field(repr=False)
    snapshots: np.ndarray = field(repr=False)  # shape (samples, n)

    @property
    def all_stable(self) -> bool:
        return all(self.stable)

    def to_json(self) -> dict:
        return {
            "arrival_rate": self.arrival_rate,
            "offered_load": fmtvec(self.offered_load),
            "utilization": self.utilization,
            "mean_queue": self.mean_queue,
            "drift": self.drift,
            "stable": self.stable,
            "all_stable": self.all_stable,
            "mean_response": self.mean_response,
            "requests": self.requests,
            "subtasks": self.subtasks,
        }

    def write_queue_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["time"] + [f"server{s}" for s in range(self.snapshots.shape[1])])
            for t, row in zip(self.snapshot_times, self.snapshots):
                w.writerow([f"{t:.6f}"] + [int(x) for x in row])


def _departures(arrivals: np.ndarray, service: np.ndarray) -> np.ndarray:
    c = np.cumsum(service)
    prev = np.concatenate(([0.0], c[:-1]))
    return c + np.maximum.accumulate(arrivals - prev)


def simulate(cfg: SimConfig) -> SimReport:
    cat = cfg.catalog
    n, k = cat.n, cat.k
    mu = float(cfg.mu)
    T = float(cfg.horizon)
    rng = np.random.Generator(np.random.Philox(key=cfg.seed % (1 << 64)))

    times, routes = [], []
    route_sets: list[tuple[int, ...]] = []
    for i in range(k):
        li = float(cfg.lam[i])
        if li <= 0:
            continue
        entries = [(j, v) for (o, j), v in sorted(cfg.allocation.rates.items()) if o == i and v > 0]
        probs = np.array([float(v / cfg.lam[i]) for _, v in entries])
        count = rng.poisson(li * T)
        t = np.sort(rng.random(count) * T)
        choice = rng.choice(len(entries), size=count, p=probs / probs.sum())
        base = len(route_sets)
        route_sets.extend(cat.sets[i][j].servers for j, _ in entries)
        times.append(t)
        routes.append(choice + base)
    if times:
        t_all = np.concatenate(times)
        r_all = np.concatenate(routes)
        order = np.argsort(t_all, kind="stable")
        t_all, r_all = t_all[order], r_all[order]
    else:
        t_all = np.zeros(0)
        r_all = np.zeros(0, dtype=np.int64)

    done = t_all.copy()
    w0 = cfg.warmup * T
    span = T - w0
    snap_t = np.linspace(w0, T, cfg.samples)
    snaps = np.zeros((cfg.samples, n), dtype=np.int64)
    arrival_rate, utilization, mean_queue, drift, stable = [], [], [], [], []
    offered = [Fraction(0)] * n
    for (i, j), v in cfg.allocation.rates.items():
        for s in cat.sets[i][j].servers:
            offered[s] += v
    subtasks = 0
    membership = [[] for _ in range(n)]
    for rid, servers in enumerate(route_sets):
        for s in servers:
            membership[s].append(rid)
    for s in range(n):
        mask = np.isin(r_all, membership[s]) if membership[s] else np.zeros(len(r_all), dtype=bool)
        req = np.nonzero(mask)[0]
        a = t_all[req]
        svc = rng.exponential(1.0 / mu, size=len(a))
        d = _departures(a, svc)
        np.maximum.at(done, req, d)
        subtasks += len(a)
        post = a >= w0
        rate = float(post.sum()) / span
        mean_s = float(svc[post].mean()) if post.any() else 1.0 / mu
        util = rate * mean_s
        qlen = np.searchsorted(a, snap_t, side="right") - np.searchsorted(d, snap_t, side="right")
        snaps[:, s] = qlen
        slope = float(np.polyfit(snap_t, qlen, 1)[0]) if len(snap_t) > 1 else 0.0
        arrival_rate.append(rate)
        utilization.append(util)
        mean_queue.append(float(qlen.mean()))
        drift.append(slope)
        stable.append(util < 1.0 - cfg.margin)
    post_req = t_all >= w0
    resp = float((done[post_req] - t_all[post_req]).mean()) if post_req.any() else 0.0
    return SimReport(
        arrival_rate, offered, utilization, mean_queue, drift, stable, resp,
        int(len(t_all)), subtasks, snap_t, snaps,
    )


def stability_summary(report: SimReport) -> dict:
    worst = int(np.argmax(report.utilization)) if report.utilization else -1
    return {
        "all_stable": report.all_stable,
        "max_utilization": max(report.utilization) if report.utilization else 0.0,
        "worst_server": worst,
        "worst_drift": report.drift[worst] if worst >= 0 else 0.0,
    }


def scaled(lam: Sequence, factor) -> tuple[Fraction, ...]:
    f = q(factor)
    return tuple(f * x for x in qvec(lam))

