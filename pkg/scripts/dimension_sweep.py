#!/usr/bin/env python3
"""Sweep the invertible fraction over prime-power dimensions at fixed n.

Writes the d / delta / log10(delta) table as CSV and prints it, showing the
superexponential growth of the invertible fraction with dimension.

    python scripts/dimension_sweep.py --lo 7 --hi 32 --n 1.03 --out sweep.csv
"""

import argparse

from paulimix.measure import prime_powers_in, sweep


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lo", type=int, default=7)
    parser.add_argument("--hi", type=int, default=32)
    parser.add_argument("--n", type=float, default=1.03)
    parser.add_argument("--out", type=str, default=None, help="CSV output path")
    args = parser.parse_args()

    dims = prime_powers_in(args.lo, args.hi)
    rows = sweep(dims, args.n)
    print(f"invertible fraction at n = {args.n} over {len(rows)} prime powers")
    print(f"{'d':>4} {'delta':>24} {'log10(delta)':>14}")
    for row in rows:
        print(f"{row.d:>4} {row.delta:>24.17g} {row.log10_delta:>14.6f}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("d,delta,log10_delta\n")
            for row in rows:
                fh.write(f"{row.d},{row.delta:.17g},{row.log10_delta:.17g}\n")
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
