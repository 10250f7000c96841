"""Compare waterfilling, the closed-form MDS bound and the LP on a rational grid."""

import argparse
import itertools
import json
import time
from dataclasses import dataclass
from fractions import Fraction

from srr.codebook import make_mds
from srr.galois import FieldSpec
from srr.recovery import enumerate_recovery_sets
from srr.region import is_achievable
from srr.waterfill import mds_bound_holds, mds_waterfill


@dataclass
class GridSpec:
    n: int
    k: int
    p: int
    steps: int = 9


CASES = (GridSpec(6, 3, 7), GridSpec(8, 3, 11), GridSpec(10, 4, 13))


def sweep(g: GridSpec) -> dict:
    s = make_mds(g.n, g.k, FieldSpec(g.p))
    cat = enumerate_recovery_sets(s)
    axis = [2 * s.mu * Fraction(i, g.steps - 1) for i in range(g.steps)]
    counts = {"points": 0, "feasible": 0, "disagreements": 0}
    t0 = time.perf_counter()
    for idx in itertools.product(range(g.steps), repeat=3):
        lam = tuple(axis[i] for i in idx)
        if g.k == 4:
            # fourth coordinate rides along a diagonal of the 3-D grid
            lam += (axis[sum(idx) % g.steps],)
        answers = {
            mds_waterfill(g.n, g.k, s.mu, lam, cat).feasible,
            mds_bound_holds(g.n, g.k, s.mu, lam),
            is_achievable(cat, lam)[0],
        }
        counts["points"] += 1
        counts["feasible"] += True in answers
        counts["disagreements"] += len(answers) > 1
    counts["seconds"] = round(time.perf_counter() - t0, 2)
    return {"n": g.n, "k": g.k, "q": g.p, **counts}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=9)
    args = ap.parse_args()
    print(json.dumps([sweep(GridSpec(c.n, c.k, c.p, args.steps)) for c in CASES], indent=2))


if __name__ == "__main__":
    main()
