#!/usr/bin/env python3
"""Map the admissible region of the quantum parameter tau for D_n.

The validity region near tau = 0 depends on the stability point and on t;
this prints an angular histogram over a few radii so the dependence is
visible at a glance.
"""

import argparse

from conifoldrh.cli import parse_complex
from conifoldrh.rhsolver import default_tau_grid, region_neighborhood_tau


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--v", type=parse_complex, default=0.30 + 0.40j)
    ap.add_argument("--w", type=parse_complex, default=1.0 + 0j)
    ap.add_argument("--t", type=parse_complex, default=0.20 + 0.70j)
    ap.add_argument("--n", type=int, default=0)
    ap.add_argument("--nangles", type=int, default=36)
    args = ap.parse_args()

    radii = (0.4, 0.2, 0.1, 0.05)
    grid = default_tau_grid(radii=radii, nangles=args.nangles)
    rep = region_neighborhood_tau(args.v, args.w, args.t, args.n, grid)
    by_radius: dict[float, list] = {r: [] for r in radii}
    for row in rep["grid"]:
        by_radius[round(abs(row["tau"]), 6)].append(row["ok"])

    print(f"# v={args.v} w={args.w} t={args.t} n={args.n}")
    print(f"# admissible tau points: {rep['n_admissible']} / {rep['n_total']}")
    for r in radii:
        marks = "".join("#" if ok else "." for ok in by_radius[round(r, 6)])
        print(f"|tau|={r:5.2f}  arg 0..pi: {marks}")


if __name__ == "__main__":
    main()
