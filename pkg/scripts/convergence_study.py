#!/usr/bin/env python3
"""Hull convergence of inverse-iteration samples.

For a chosen polynomial, compares the convex hull at increasing sample
counts against a high-n reference hull and prints the Hausdorff drift as
a fraction of the diameter.  This is the empirical backing for the
default tolerance tol_rel = 1e-3.

Usage: python scripts/convergence_study.py [--poly quad:-1+0i] [--seed 31]
"""
import argparse

from juliahull import convex_hull, parse_polynomial, polygon_hausdorff, sample_julia


def run(poly_text: str, seed: int, reference_n: int) -> None:
    p = parse_polynomial(poly_text).polynomial
    reference = convex_hull(sample_julia(p, reference_n, seed))
    diam = reference.diameter
    print(f"polynomial {poly_text}, reference n = {reference_n}, "
          f"diameter {diam:.6f}")
    print(f"{'n':>9}  {'hausdorff':>12}  {'fraction of diam':>17}")
    for n in (1_000, 3_000, 10_000, 30_000, 100_000, 300_000):
        hull = convex_hull(sample_julia(p, n, seed))
        gap = polygon_hausdorff(hull, reference)
        print(f"{n:>9}  {gap:>12.3e}  {gap / diam:>17.3e}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--poly", default="quad:-1+0i")
    parser.add_argument("--seed", type=int, default=31)
    parser.add_argument("--reference-n", type=int, default=1_000_000)
    args = parser.parse_args()
    run(args.poly, args.seed, args.reference_n)


if __name__ == "__main__":
    main()
