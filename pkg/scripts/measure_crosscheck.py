#!/usr/bin/env python3
"""Compare the three invertible-fraction routes on a (d, n) grid.

For each dimension, three n values inside the intermediate interval are
checked: closed form vs nested quadrature (should agree to rounding) and
vs Monte Carlo (should agree within a few standard errors).

    python scripts/measure_crosscheck.py --samples 1000000 --seed 7
"""

import argparse
import math

from paulimix.measure import delta_closed_form, delta_monte_carlo, delta_quadrature


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=10**6)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    print(f"{'d':>3} {'n':>8} {'closed':>13} {'quadrature':>13} {'monte carlo':>13} {'|mc z|':>7}")
    for d in (2, 3, 4, 5, 7):
        lower, upper = d * d / (d * d - 1), d / (d - 1)
        for frac in (0.25, 0.5, 0.75):
            n = lower + frac * (upper - lower)
            closed = delta_closed_form(d, n).delta
            quad = delta_quadrature(d, n).delta
            mc = delta_monte_carlo(d, n, samples=args.samples, seed=args.seed)
            sigma = math.sqrt(max(closed * (1 - closed), 1e-300) / args.samples)
            z = abs(mc.delta - closed) / sigma
            print(f"{d:>3} {n:>8.4f} {closed:>13.6e} {quad:>13.6e} {mc.delta:>13.6e} {z:>7.2f}")
            assert abs(closed - quad) < 1e-9


if __name__ == "__main__":
    main()
