#!/usr/bin/env python3
"""Monte Carlo validation sweep: empirical failure rates against analytic values.

    python scripts/mc_validation.py --trials 100000 --seed 0
"""
from __future__ import annotations

import argparse
import sys

from ensemble_qcrit import EnsembleSpec, estimate_failure_rate, pfail_general
from ensemble_qcrit.simulator import consistency_z


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--eps", type=float, nargs="+", default=[0.2, 0.5, 0.8])
    parser.add_argument("--m", type=int, nargs="+", default=[3, 11, 50, 101])
    parser.add_argument("--r", type=float, default=2.0)
    args = parser.parse_args()

    print(f"{'eps':>5} {'M':>5} {'R':>6} {'analytic':>12} {'empirical':>12} "
          f"{'z':>7}")
    worst = 0.0
    for eps in args.eps:
        for M in args.m:
            spec = EnsembleSpec(M, args.r)
            analytic = pfail_general(eps, spec).value
            rate, _ = estimate_failure_rate(eps, spec, args.trials, args.seed)
            z = consistency_z(rate, analytic, args.trials)
            worst = max(worst, abs(z))
            print(f"{eps:5.2f} {M:5d} {args.r:6.2f} {analytic:12.5e} "
                  f"{rate:12.5e} {z:7.2f}")
    print(f"\nworst |z| = {worst:.2f} over {args.trials} trials per cell")
    return 0 if worst < 5.0 else 1


if __name__ == "__main__":
    sys.exit(main())
