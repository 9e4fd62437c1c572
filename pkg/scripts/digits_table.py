"""Digit requirement N*log2(2N*10^d) beside the largest operand actually seen.

    python scripts/digits_table.py --digits 1
"""

from __future__ import annotations

import argparse

from packmm import RunProbe, measure_digits, mm_flat, mm_recursive, random_matrix, required_digits


def measured(n: int, d: int, seed: int) -> tuple[int, int | str]:
    a, b = random_matrix(n, n, d, seed), random_matrix(n, n, d, seed + 1)
    flat = RunProbe()
    mm_flat(a, b, probe=flat)
    rec: int | str = ""
    if n & (n - 1) == 0 and n <= 256:
        probe = RunProbe()
        mm_recursive(a, b, probe=probe)
        rec = measure_digits(probe)
    return measure_digits(flat), rec


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--digits", type=int, default=1)
    parser.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 8, 16, 32, 48, 64, 96, 128, 144, 192, 256])
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'N':>5} {'required':>9} {'flat max':>9} {'recursive max':>14}")
    for n in args.sizes:
        flat, rec = measured(n, args.digits, args.seed)
        print(f"{n:>5} {required_digits(n, args.digits):>9} {flat:>9} {rec!s:>14}")


if __name__ == "__main__":
    main()
