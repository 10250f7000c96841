"""Coverage of demand distributions and normalised download cost."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .rational import fmt, fmtvec, qvec
from .recovery import RecoveryCatalog
from .region import Allocation, RegionPolytope, is_achievable, min_cost_allocation, transfer_cost

BLOCK = 4096


class DistributionError(ValueError):
    pass


# -- distributions -------------------------------------------------------------

@dataclass(frozen=True)
class UniformBox:
    bounds: tuple[float, ...]
    kind: str = field(default="uniform_box", init=False)

    @property
    def k(self) -> int:
        return len(self.bounds)

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.random((size, self.k)) * np.asarray(self.bounds, dtype=float)

    def to_json(self) -> dict:
        return {"kind": self.kind, "bounds": list(self.bounds)}


@dataclass(frozen=True)
class TruncatedExponential:
    """Independent marginals with density ∝ r·exp(−r x) on [0, B]."""

    rates: tuple[float, ...]
    bounds: tuple[float, ...]
    kind: str = field(default="truncated_exponential", init=False)

    @property
    def k(self) -> int:
        return len(self.rates)

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random((size, self.k))
        r = np.asarray(self.rates, dtype=float)
        b = np.asarray(self.bounds, dtype=float)
        return -np.log1p(-u * (1.0 - np.exp(-r * b))) / r

    def to_json(self) -> dict:
        return {"kind": self.kind, "rates": list(self.rates), "bounds": list(self.bounds)}


@dataclass(frozen=True)
class DiscreteGrid:
    """Finitely many demand points with exact rational probabilities."""

    points: tuple[tuple[Fraction, ...], ...]
    probs: tuple[Fraction, ...]
    kind: str = field(default="discrete_grid", init=False)

    def __post_init__(self):
        if len(self.points) != len(self.probs):
            raise DistributionError("points and probabilities differ in length")
        if any(p < 0 for p in self.probs) or sum(self.probs) != 1:
            raise DistributionError("probabilities must be nonnegative and sum to 1")
        if any(x < 0 for pt in self.points for x in pt):
            raise DistributionError("points must lie in the nonnegative orthant")

    @property
    def k(self) -> int:
        return len(self.points[0])

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        pts = np.array([[float(x) for x in p] for p in self.points])
        idx = rng.choice(len(self.points), size=size, p=np.array([float(p) for p in self.probs]))
        return pts[idx]

    def to_json(self) -> dict:
        return {"kind": self.kind, "points": [fmtvec(p) for p in self.points], "probs": fmtvec(self.probs)}


Distribution = UniformBox | TruncatedExponential | DiscreteGrid


def distribution_from_json(obj: dict) -> Distribution:
    kind = obj.get("kind")
    try:
        if kind == "uniform_box":
            return UniformBox(tuple(float(b) for b in obj["bounds"]))
        if kind == "truncated_exponential":
            return TruncatedExponential(tuple(float(r) for r in obj["rates"]), tuple(float(b) for b in obj["bounds"]))
        if kind == "discrete_grid":
            return DiscreteGrid(tuple(qvec(p) for p in obj["points"]), qvec(obj["probs"]))
        if kind == "gaussian_mixture_grid":
            return gaussian_mixture_grid(
                [tuple(p) for p in obj["peaks"]], float(obj["sd"]), float(obj["box"]), int(obj["steps"])
            )
    except (KeyError, TypeError) as e:
        raise DistributionError(f"malformed distribution: {e}") from e
    raise DistributionError(f"unsupported distribution kind {kind!r}")


def gaussian_mixture_grid(peaks: Sequence[Sequence[float]], sd: float, box: float, steps: int) -> DiscreteGrid:
    """Equal-weight isotropic Gaussian bumps evaluated on a regular grid over [0, box]^k.

    Weights are rounded to integers out of 10^9 and normalised exactly.
    """
    k = len(peaks[0])
    axis = [Fraction(box).limit_denominator(1000) * Fraction(i, steps - 1) for i in range(steps)]
    grid = np.array(np.meshgrid(*[[float(a) for a in axis]] * k, indexing="ij")).reshape(k, -1).T
    dens = np.zeros(len(grid))
    for pk in peaks:
        d2 = ((grid - np.asarray(pk, dtype=float)) ** 2).sum(axis=1)
        dens += np.exp(-d2 / (2 * sd * sd))
    w = np.rint(dens / dens.sum() * 1e9).astype(np.int64)
    idx = np.nonzero(w)[0]
    total = int(w[idx].sum())
    flat = [tuple(axis[j] for j in np.unravel_index(i, (steps,) * k)) for i in idx]
    return DiscreteGrid(tuple(flat), tuple(Fraction(int(w[i]), total) for i in idx))


def anti_correlated_grid(box: float = 4.0, steps: int = 41) -> DiscreteGrid:
    """Two-object demand concentrated where one object is hot and the other cold."""
    return gaussian_mixture_grid([(2.1, 0.3), (0.3, 2.1)], 0.3, box, steps)


# -- sampling ------------------------------------------------------------------

def block_rng(seed: int, block: int) -> np.random.Generator:
    """Counter-based stream keyed by (seed, block) so any index range is reproducible."""
    return np.random.Generator(np.random.Philox(key=[seed % (1 << 64), block]))


def sample(d: Distribution, n: int, seed: int) -> np.ndarray:
    parts = []
    for b in range((n + BLOCK - 1) // BLOCK):
        size = min(BLOCK, n - b * BLOCK)
        parts.append(d.draw(block_rng(seed, b), size))
    return np.concatenate(parts) if parts else np.zeros((0, d.k))


# -- region oracles ------------------------------------------------------------

class PolytopeOracle:
    """Membership through an exact H-representation; floats are tested with a 1e-12 slack."""

    def __init__(self, p: RegionPolytope):
        self.p = p
        self.a = np.array([[float(x) for x in h.a] for h in p.halfspaces])
        self.b = np.array([float(h.b) for h in p.halfspaces])

    def contains(self, x: Sequence) -> bool:
        return self.p.contains(x)

    def contains_many(self, xs: np.ndarray) -> np.ndarray:
        return np.all(xs @ self.a.T <= self.b + 1e-12, axis=1)


class LPOracle:
    """Membership by the exact achievability LP (one solve per point)."""

    def __init__(self, cat: RecoveryCatalog):
        self.cat = cat

    def contains(self, x: Sequence) -> bool:
        return is_achievable(self.cat, qvec(x))[0]

    def contains_many(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self.contains([Fraction(float(v)) for v in row]) for row in xs], dtype=bool)


Oracle = PolytopeOracle | LPOracle


def coverage(oracle: Oracle, d: Distribution, samples: int = 100_000, seed: int = 0):
    """(estimate, 95% CI half-width). Discrete grids are summed exactly (half-width 0)."""
    if isinstance(d, DiscreteGrid):
        mass = sum((p for pt, p in zip(d.points, d.probs) if oracle.contains(pt)), Fraction(0))
        return mass, Fraction(0)
    if samples < 1000:
        raise DistributionError("need at least 1000 samples")
    xs = sample(d, samples, seed)
    hits = oracle.contains_many(xs)
    p = float(hits.mean())
    return p, 1.96 * math.sqrt(max(p * (1 - p), 0.0) / samples)


# -- cost ----------------------------------------------------------------------

def cost_of(cat: RecoveryCatalog, alloc: Allocation) -> Fraction:
    errs = alloc.violations(cat, alloc.demand(cat.k))
    if errs:
        raise ValueError("invalid allocation: " + "; ".join(errs))
    return transfer_cost(cat, alloc)


@dataclass
class CostEstimate:
    mean_cost: float | Fraction | None  # over covered demand only
    covered_mass: float | Fraction
    uncovered_mass: float | Fraction
    samples: int

    def to_json(self) -> dict:
        def f(x):
            return None if x is None else (fmt(x) if isinstance(x, Fraction) else x)

        return {
            "mean_cost": f(self.mean_cost),
            "covered_mass": f(self.covered_mass),
            "uncovered_mass": f(self.uncovered_mass),
            "samples": self.samples,
        }


def expected_min_cost(cat: RecoveryCatalog, d: Distribution, samples: int = 2000, seed: int = 0) -> CostEstimate:
    """Mean of the LP-minimal C(λ) over demand that falls inside the region."""
    oracle = LPOracle(cat)
    if isinstance(d, DiscreteGrid):
        covered = Fraction(0)
        acc = Fraction(0)
        for pt, p in zip(d.points, d.probs):
            if p and oracle.contains(pt):
                covered += p
                acc += p * min_cost_allocation(cat, pt)[1]
        return CostEstimate(acc / covered if covered else None, covered, 1 - covered, len(d.points))
    xs = sample(d, samples, seed)
    costs = []
    for row in xs:
        lam = [Fraction(float(v)) for v in row]
        if oracle.contains(lam):
            costs.append(float(min_cost_allocation(cat, lam)[1]))
    covered = len(costs) / samples
    return CostEstimate(float(np.mean(costs)) if costs else None, covered, 1 - covered, samples)


def oracle_for(cat: RecoveryCatalog) -> Oracle:
    """Polytope oracle when the exact region is cheap to build (k <= 3), LP otherwise."""
    from .region import polytope

    if cat.k <= 3:
        return PolytopeOracle(polytope(cat))
    return LPOracle(cat)

