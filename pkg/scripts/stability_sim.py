"""Queue stability of the [7,3] Simplex code just inside and just outside its region.

Demand is a multiple of (4/3, 4/3, 4/3), a point on the boundary, split
uniformly over the small disjoint recovery sets of each object.
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from srr.codebook import make_simplex
from srr.combin import uniform_split
from srr.recovery import enumerate_recovery_sets
from srr.simq import SimConfig, scaled, simulate, stability_summary


@dataclass
class Experiment:
    factors: tuple[str, ...] = ("0.9", "1.1")
    horizon: float = 1e5
    seed: int = 11


def run(exp: Experiment) -> list[dict]:
    cat = enumerate_recovery_sets(make_simplex(3))
    base = (Fraction(4, 3),) * 3
    rows = []
    for f in exp.factors:
        lam = scaled(base, f)
        t0 = time.perf_counter()
        rep = simulate(SimConfig(cat, uniform_split(cat, lam), lam, horizon=exp.horizon, seed=exp.seed))
        rows.append({"factor": f, **stability_summary(rep), "seconds": round(time.perf_counter() - t0, 3)})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--horizon", type=float, default=Experiment.horizon)
    ap.add_argument("--seed", type=int, default=Experiment.seed)
    args = ap.parse_args()
    exp = Experiment(horizon=args.horizon, seed=args.seed)
    print(json.dumps({"config": asdict(exp), "results": run(exp)}, indent=2))


if __name__ == "__main__":
    main()
