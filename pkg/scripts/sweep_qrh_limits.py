#!/usr/bin/env python3
"""Trace the t -> 0 approach of the solution functions to 1 and the
|t| -> infinity polynomial growth, along an admissible ray."""

import argparse
import cmath
import math

from conifoldrh.rhsolver import (SolutionPoint, B_n, D_n, check_qrh3_growth,
                                 log_B_n)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=0, help="sector index")
    ap.add_argument("--points", type=int, default=10)
    args = ap.parse_args()

    v, w = 0.30 + 0.40j, 1.0 + 0j
    t_dir = cmath.exp(1j * (math.pi - 0.5))
    tau = 0.15 * cmath.exp(1.2j)

    print(f"# n = {args.n}, t along arg = {cmath.phase(t_dir):.3f}, "
          f"tau = {tau:.4f}")
    print(f"{'|t|':>12} {'|B_n - 1|':>14} {'|D_n - 1|':>14}")
    for j in range(args.points):
        t = t_dir * 0.8 * 0.5**j
        p = SolutionPoint(v, w, t, tau, args.n)
        b = B_n(p, enforce=False)
        d = D_n(p, enforce=False)
        print(f"{abs(t):12.6f} {abs(b - 1):14.6e} {abs(d - 1):14.6e}")

    for which in ("B", "D"):
        g = check_qrh3_growth(SolutionPoint(v, w, t_dir, tau, args.n), which)
        print(f"growth exponent ({which}_n): k = {g['exponent']:+.4f} "
              f"(max fit deviation {g['max_fit_deviation']:.3f})")


if __name__ == "__main__":
    main()
