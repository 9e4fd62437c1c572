"""Print the recursive engine's op counts: measured runs next to the closed form.

    python scripts/op_count_table.py --run-max 256 --formula-max 8192
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

from packmm import RunProbe, mm_recursive, predict_ops_closed, random_matrix
from packmm.costmodel import binet_table_cost


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--run-max", type=int, default=256, help="largest N to actually multiply")
    parser.add_argument("--formula-max", type=int, default=8192)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'N':>6} {'measured':>12} {'closed form':>14} {'ops/N^2':>8} {'2N^3':>14} {'seconds':>8}")
    n = 4
    while n <= args.formula_max:
        measured, secs = "", ""
        if n <= args.run_max:
            probe = RunProbe()
            start = time.perf_counter()
            mm_recursive(random_matrix(n, n, 1, args.seed), random_matrix(n, n, 1, args.seed + 1), probe=probe)
            secs = f"{time.perf_counter() - start:.2f}"
            measured = probe.ops.total()
        closed = predict_ops_closed(n)
        print(f"{n:>6} {measured:>12} {closed:>14} {str(Fraction(closed, n * n)):>8} {binet_table_cost(n):>14} {secs:>8}")
        n *= 2


if __name__ == "__main__":
    main()
