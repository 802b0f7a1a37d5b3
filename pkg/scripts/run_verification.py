#!/usr/bin/env python3
"""Run every verification suite and print a per-check summary table."""

import argparse
import sys

from conifoldrh.cli import run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", default="all")
    ap.add_argument("--tol", type=float, default=1e-8)
    ap.add_argument("--order-N", type=int, default=4, dest="order_n")
    args = ap.parse_args()

    rows = run_suite(args.suite, order_n=args.order_n, tol=args.tol)
    width = max(len(r.name) for _, r in rows)
    failed = 0
    for suite, r in rows:
        status = "ok" if r.passed else "FAIL"
        failed += not r.passed
        print(f"[{suite:>12}] {r.name:<{width}}  rel={r.rel_err:.2e}  {status}")
    print(f"\n{len(rows)} checks, {failed} failed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
