"""Benchmark sweep over engines and sizes, written as CSV (thin wrapper over `packmm bench`).

    python scripts/bench_sweep.py --out bench.csv --trials 5
"""

from __future__ import annotations

import argparse

from packmm.cli import main as packmm_main


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="bench.csv")
    parser.add_argument("--trials", type=int, default=5)
    parser.add_argument("--digits", type=int, default=1)
    parser.add_argument("--max-n", type=int, default=128)
    parser.add_argument("--engines", default="recursive,flat,classical,binet,strassen")
    args = parser.parse_args()

    sizes = []
    n = 2
    while n <= args.max_n:
        sizes.append(str(n))
        n *= 2
    raise SystemExit(
        packmm_main(
            ["bench", "--n", *sizes, "--engine", args.engines, "--digits", str(args.digits),
             "--trials", str(args.trials), "--csv", args.out]
        )
    )


if __name__ == "__main__":
    main()
