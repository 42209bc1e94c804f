#!/usr/bin/env python3
"""Generate the critical-polarization-vs-ensemble-size dataset.

Sweeps M over a log grid and emits, per M: the numeric solve at best
resolution, the numeric solve at R = sqrt(M), the two closed forms and the
asymptote.  Writes a CSV and (optionally) a log-x plot.

    python scripts/critical_curve.py --m-max 1000000 --points 25 -o curve.csv
    python scripts/critical_curve.py --plot curve.png
"""
from __future__ import annotations

import argparse
import math
import sys

from ensemble_qcrit import (SQRT_RESOLUTION, DeutschJozsaApprox, curve,
                            solve_critical)
from ensemble_qcrit.cli import render_value, write_output
from ensemble_qcrit.solver import (METHOD_BESTRES, METHOD_LIMIT,
                                   METHOD_MODERATE, METHOD_NUMERIC)


def log_grid(m_max: int, points: int) -> list[int]:
    values = {round(math.exp(math.log(m_max) * i / (points - 1)))
              for i in range(points)}
    values.update((1, m_max))
    return sorted(values)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m-max", type=int, default=1_000_000)
    parser.add_argument("--points", type=int, default=25)
    parser.add_argument("-o", "--output", default="critical_curve.csv")
    parser.add_argument("--plot", default=None, help="also write a PNG")
    args = parser.parse_args()

    model = DeutschJozsaApprox()
    ms = log_grid(args.m_max, args.points)
    base = curve(model, 1, ms,
                 methods=(METHOD_NUMERIC, METHOD_BESTRES, METHOD_MODERATE,
                          METHOD_LIMIT))
    by_method: dict[str, dict[int, float]] = {}
    for point in base:
        by_method.setdefault(point.method, {})[point.M] = point.eps
    sqrt_res = {M: solve_critical(model, 1, M, SQRT_RESOLUTION).eps for M in ms}

    header = ["M", "numeric_best", "numeric_sqrt", "bestres", "moderate", "limit"]
    lines = [",".join(header)]
    for M in ms:
        lines.append(",".join(render_value(v) for v in (
            M, by_method[METHOD_NUMERIC][M], sqrt_res[M],
            by_method[METHOD_BESTRES][M], by_method[METHOD_MODERATE][M],
            by_method[METHOD_LIMIT][M])))
    write_output("\n".join(lines) + "\n", args.output)
    print(f"wrote {len(ms)} rows to {args.output}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(7, 4.5))
        ax.semilogx(ms, [by_method[METHOD_MODERATE][M] for M in ms],
                    "-", label="moderate-M form")
        ax.semilogx(ms, [by_method[METHOD_BESTRES][M] for M in ms],
                    "--", label="best-resolution form")
        ax.semilogx(ms, [by_method[METHOD_NUMERIC][M] for M in ms],
                    "s", ms=4, label="numeric, R = 2")
        ax.semilogx(ms, [sqrt_res[M] for M in ms],
                    "*", ms=6, label="numeric, R = sqrt(M)")
        ax.axhline(math.sqrt(3) / 2, color="gray", lw=0.8,
                   label="limit sqrt(3)/2")
        ax.set_xlabel("ensemble size M")
        ax.set_ylabel("critical polarization")
        ax.set_ylim(0, 1)
        ax.legend(loc="lower right", fontsize=8)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote plot to {args.plot}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
