"""Exact rational linear programming (two-phase revised simplex over gmpy2.mpq).

Problems are stated as::

    maximize c.x  subject to  A_i.x (<=, =, >=) b_i,  x >= 0

with sparse rows or columns. Pricing uses Dantzig's rule and switches to
Bland's rule permanently after a run of degenerate pivots, so the method
always terminates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from gmpy2 import mpq

LE, EQ, GE = "<=", "==", ">="
_DEGENERATE_SWITCH = 30


class LPError(RuntimeError):
    pass


def to_mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        f = Fraction(x)
        return mpq(f.numerator, f.denominator)
    return mpq(x)


def to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list[Fraction] | None = None
    objective: Fraction | None = None
    duals: list[Fraction] | None = None
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


def solve(
    c: Sequence,
    columns: Sequence[Mapping[int, object]],
    senses: Sequence[str],
    rhs: Sequence,
    maximize: bool = True,
    max_iter: int = 100_000,
) -> LPResult:
    """Solve an LP given column-wise (``columns[j]`` maps row -> coefficient)."""
    m = len(rhs)
    if len(senses) != m:
        raise LPError("senses and rhs differ in length")
    if len(c) != len(columns):
        raise LPError("objective and columns differ in length")
    return _Simplex(c, columns, senses, rhs, maximize, max_iter).run()


def solve_rows(c, rows: Sequence[Mapping[int, object]], senses, rhs, nvars: int, maximize=True) -> LPResult:
    """Row-wise convenience front end to :func:`solve`."""
    cols: list[dict[int, object]] = [dict() for _ in range(nvars)]
    for i, row in enumerate(rows):
        for j, v in row.items():
            if v:
                cols[j][i] = v
    return solve(c, cols, senses, rhs, maximize)


class _Simplex:
    def __init__(self, c, columns, senses, rhs, maximize, max_iter):
        self.m = m = len(rhs)
        self.nx = len(columns)
        self.max_iter = max_iter
        sign = 1 if maximize else -1
        self.maximize = maximize
        self.flip = [False] * m
        b = [to_mpq(v) for v in rhs]
        senses = list(senses)
        for i in range(m):
            if senses[i] not in (LE, EQ, GE):
                raise LPError(f"unknown constraint sense {senses[i]!r}")
            if b[i] < 0:
                b[i] = -b[i]
                self.flip[i] = True
                senses[i] = {LE: GE, GE: LE, EQ: EQ}[senses[i]]
        cols: list[list[tuple[int, mpq]]] = []
        for col in columns:
            entries = []
            for i, v in col.items():
                v = to_mpq(v)
                if v:
                    entries.append((i, -v if self.flip[i] else v))
            cols.append(entries)
        cost = [sign * to_mpq(v) for v in c]
        # slacks / surpluses
        basis = [-1] * m
        for i in range(m):
            if senses[i] == LE:
                cols.append([(i, mpq(1))])
                cost.append(mpq(0))
                basis[i] = len(cols) - 1
            elif senses[i] == GE:
                cols.append([(i, mpq(-1))])
                cost.append(mpq(0))
        self.n_real = len(cols)
        for i in range(m):
            if basis[i] < 0:
                cols.append([(i, mpq(1))])
                cost.append(mpq(0))
                basis[i] = len(cols) - 1
        self.cols = cols
        self.cost = cost
        self.basis = basis
        self.b = b
        self.binv = [[mpq(1) if i == j else mpq(0) for j in range(m)] for i in range(m)]
        self.xb = list(b)
        self.iterations = 0

    def _column(self, j):
        binv = self.binv
        u = [mpq(0)] * self.m
        for i, v in self.cols[j]:
            for r in range(self.m):
                a = binv[r][i]
                if a:
                    u[r] += a * v
        return u

    def _duals(self, cost):
        m = self.m
        y = [mpq(0)] * m
        for r in range(m):
            cb = cost[self.basis[r]]
            if cb:
                row = self.binv[r]
                for i in range(m):
                    if row[i]:
                        y[i] += cb * row[i]
        return y

    def _pivot(self, r, j, u):
        m = self.m
        piv = u[r]
        binv = self.binv
        prow = [v / piv for v in binv[r]]
        binv[r] = prow
        xr = self.xb[r] / piv
        self.xb[r] = xr
        for i in range(m):
            if i != r and u[i]:
                f = u[i]
                row = binv[i]
                for t in range(m):
                    if prow[t]:
                        row[t] -= f * prow[t]
                self.xb[i] -= f * xr
        self.basis[r] = j

    def _optimize(self, cost, allowed: int, phase2: bool) -> str:
        bland = False
        degenerate_run = 0
        in_basis = set(self.basis)
        while True:
            if self.iterations >= self.max_iter:
                raise LPError("iteration limit reached")
            y = self._duals(cost)
            enter, best = -1, mpq(0)
            for j in range(allowed):
                if j in in_basis:
                    continue
                d = cost[j]
                for i, v in self.cols[j]:
                    d -= y[i] * v
                if d > 0:
                    if bland:
                        enter = j
                        break
                    if d > best:
                        enter, best = j, d
            if enter < 0:
                return "optimal"
            u = self._column(enter)
            leave, ratio = -1, None
            for r in range(self.m):
                if u[r] > 0:
                    t = self.xb[r] / u[r]
                    if ratio is None or t < ratio or (t == ratio and self.basis[r] < self.basis[leave]):
                        leave, ratio = r, t
                elif phase2 and u[r] and self.basis[r] >= self.n_real:
                    # a zero-valued artificial must not become nonzero
                    leave, ratio = r, mpq(0)
                    break
            if leave < 0:
                return "unbounded"
            degenerate_run = degenerate_run + 1 if ratio == 0 else 0
            if degenerate_run >= _DEGENERATE_SWITCH:
                bland = True
            in_basis.discard(self.basis[leave])
            self._pivot(leave, enter, u)
            in_basis.add(enter)
            self.iterations += 1

    def run(self) -> LPResult:
        m = self.m
        artificial = [r for r in range(m) if self.basis[r] >= self.n_real]
        if artificial:
            phase1 = [mpq(0)] * len(self.cols)
            for j in range(self.n_real, len(self.cols)):
                phase1[j] = mpq(-1)
            self._optimize(phase1, self.n_real, False)
            infeas = sum((self.xb[r] for r in range(m) if self.basis[r] >= self.n_real), mpq(0))
            if infeas > 0:
                return LPResult("infeasible", iterations=self.iterations)
            # drive zero-valued artificials out where possible
            for r in range(m):
                if self.basis[r] < self.n_real:
                    continue
                in_basis = set(self.basis)
                for j in range(self.n_real):
                    if j in in_basis:
                        continue
                    u = self._column(j)
                    if u[r]:
                        self._pivot(r, j, u)
                        break
        status = self._optimize(self.cost, self.n_real, True)
        if status == "unbounded":
            return LPResult("unbounded", iterations=self.iterations)
        x = [mpq(0)] * self.nx
        for r, j in enumerate(self.basis):
            if j < self.nx:
                x[j] = self.xb[r]
        obj = sum((self.cost[j] * x[j] for j in range(self.nx)), mpq(0))
        y = self._duals(self.cost)
        if not self.maximize:
            obj = -obj
            y = [-v for v in y]
        y = [-v if self.flip[i] else v for i, v in enumerate(y)]
        return LPResult(
            "optimal",
            [to_fraction(v) for v in x],
            to_fraction(obj),
            [to_fraction(v) for v in y],
            self.iterations,
        )
