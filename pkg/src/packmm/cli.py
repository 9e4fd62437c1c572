"""Command-line front end: ``packmm gen|mul|verify|bench|predict``."""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from . import baselines
from .costmodel import (
    CostReport,
    CostRow,
    MachineModel,
    OpCount,
    RunProbe,
    binet_table_cost,
    classical_ops,
    machine_cost,
    predict_ops_closed,
    predict_ops_flat,
    predict_ops_recursive,
    required_digits,
    strassen_ops,
)
from .matrix import IntMatrix, SignedMatrix, next_power_of_two, random_matrix, read_matrix, write_matrix
from .packmul import EpsilonSchedule, mm_flat, mm_recursive, mm_signed, multiply_fixed_point, verify_exact

ENGINES = ("flat", "recursive", "fixedpoint", "signed", "classical", "binet", "strassen")
PACKED = ("flat", "recursive", "fixedpoint", "signed")
# engines whose recursion needs equal square power-of-two operands
POWER_OF_TWO = ("recursive", "binet", "strassen")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    engines: tuple[str, ...] = ("flat",)
    ns: tuple[int, ...] = ()
    digits: int = 1
    seed: int = 0
    a: Path | None = None
    b: Path | None = None
    c: Path | None = None
    out: Path | None = None
    csv: Path | None = None
    trials: int = 1
    pad: bool = False
    force_e: int | None = None
    model: str = "unit_cost"
    verify: bool = True

    @property
    def engine(self) -> str:
        return self.engines[0]

    def validate(self) -> RunConfig:
        for eng in self.engines:
            if eng not in ENGINES:
                raise ConfigError(f"unknown engine {eng!r}")
        if any(n < 1 for n in self.ns):
            raise ConfigError("matrix sizes must be positive")
        if not 1 <= self.digits <= 18:
            raise ConfigError("--digits must lie in 1..18")
        if self.trials < 1:
            raise ConfigError("--trials must be at least 1")
        if self.force_e is not None:
            if self.force_e < 1:
                raise ConfigError("--force-e must be positive")
            if any(eng not in PACKED for eng in self.engines):
                raise ConfigError("--force-e only applies to packed engines")
        if self.subcommand in ("mul", "verify") and (self.a is None or self.b is None):
            raise ConfigError(f"{self.subcommand} needs --a and --b")
        if self.subcommand == "verify" and self.c is None:
            raise ConfigError("verify needs --c")
        if self.subcommand == "gen" and len(self.ns) != 1:
            raise ConfigError("gen needs exactly one --n")
        if self.subcommand == "bench" and not self.pad:
            for eng in self.engines:
                if eng in POWER_OF_TWO and any(n & (n - 1) for n in self.ns):
                    raise ConfigError(f"engine {eng} needs power-of-two sizes; pass --pad to zero-pad")
        if self.subcommand == "predict":
            if not self.ns:
                raise ConfigError("predict needs --n")
            if any(n < 2 or n & (n - 1) for n in self.ns):
                raise ConfigError("predict needs power-of-two sizes >= 2")
            MachineModel(self.model)
        return self


def check_operands(config: RunConfig, a: SignedMatrix, b: SignedMatrix) -> None:
    """Engine preconditions that depend on the loaded matrices."""
    if a.cols != b.rows:
        raise ConfigError(f"dimension mismatch: {a.shape} x {b.shape}")
    eng = config.engine
    if eng in POWER_OF_TWO and not config.pad:
        n = a.rows
        if not (a.shape == b.shape == (n, n) and n & (n - 1) == 0):
            raise ConfigError(f"engine {eng} needs equal square power-of-two inputs; pass --pad to zero-pad")
    if eng not in ("signed", "classical", "strassen", "binet"):
        if not (a.is_nonnegative() and b.is_nonnegative()):
            raise ConfigError(f"engine {eng} needs nonnegative inputs; use --engine signed")


def run_engine(
    engine: str,
    a: SignedMatrix,
    b: SignedMatrix,
    *,
    pad: bool = False,
    force_e: int | None = None,
    probe: RunProbe | None = None,
) -> tuple[SignedMatrix, OpCount]:
    """Dispatch one product; returns the product and its operation tally."""
    probe = RunProbe() if probe is None else probe
    if engine == "flat":
        c = mm_flat(IntMatrix(a), IntMatrix(b), force_e, probe=probe)
        return c, probe.ops
    if engine == "recursive":
        schedule = None
        if force_e is not None:
            schedule = EpsilonSchedule.build(force_e, next_power_of_two(max(a.rows, a.cols, b.cols)))
        return mm_recursive(IntMatrix(a), IntMatrix(b), schedule, pad=pad, probe=probe)
    if engine == "fixedpoint":
        c = multiply_fixed_point(IntMatrix(a), IntMatrix(b), e=force_e, probe=probe)
        return c.entries, probe.ops
    if engine == "signed":
        c = mm_signed(a, b, force_e, probe=probe)
        return c, probe.ops
    if engine == "classical":
        return baselines.classical(a, b)
    if engine == "binet":
        return baselines.binet_recursive(a, b, pad=pad)
    if engine == "strassen":
        return baselines.strassen(a, b, pad=pad)
    raise ConfigError(f"unknown engine {engine!r}")


def predicted_ops(engine: str, n: int) -> int | None:
    """Analytic op count for an ``n x n`` product, where one exists."""
    size = next_power_of_two(n)
    if engine == "recursive":
        return predict_ops_closed(size) if size >= 2 else 1
    if engine == "flat":
        return predict_ops_flat(n, n, n).total()
    if engine == "classical":
        return classical_ops(n, n, n).total()
    if engine == "binet":
        return binet_table_cost(size)
    if engine == "strassen":
        return strassen_ops(size).total()
    return None


def cmd_gen(config: RunConfig, stdout) -> int:
    m = random_matrix(config.ns[0], config.ns[0], config.digits, config.seed)
    write_matrix(m, config.out if config.out is not None else stdout)
    return EXIT_OK


def cmd_mul(config: RunConfig, stdout) -> int:
    a, b = read_matrix(config.a), read_matrix(config.b)
    check_operands(config, a, b)
    c, ops = run_engine(config.engine, a, b, pad=config.pad, force_e=config.force_e)
    if config.out is not None:
        write_matrix(c, config.out)
    report = f"count={ops.total()}"
    status = EXIT_OK
    if config.verify:
        ok, diff = verify_exact(a, b, c)
        report += ", verified" if ok else f", MISMATCH max_abs_diff={diff}"
        status = EXIT_OK if ok else EXIT_MISMATCH
    print(report, file=stdout)
    return status


def cmd_verify(config: RunConfig, stdout) -> int:
    a, b, c = read_matrix(config.a), read_matrix(config.b), read_matrix(config.c)
    if a.cols != b.rows:
        raise ConfigError(f"dimension mismatch: {a.shape} x {b.shape}")
    ok, diff = verify_exact(a, b, c)
    print(f"{'verified' if ok else 'MISMATCH'} max_abs_diff={diff}", file=stdout)
    return EXIT_OK if ok else EXIT_MISMATCH


def bench_cell(config: RunConfig, engine: str, n: int, log: Callable[[str], None]) -> CostRow:
    signed = engine == "signed"
    a = random_matrix(n, n, config.digits, config.seed, signed=signed)
    b = random_matrix(n, n, config.digits, config.seed + 1, signed=signed)
    times = []
    ops = digits = None
    try:
        for _ in range(config.trials):
            probe = RunProbe()
            start = time.perf_counter_ns()
            c, tally = run_engine(engine, a, b, pad=config.pad, force_e=config.force_e, probe=probe)
            times.append(time.perf_counter_ns() - start)
        ok, diff = verify_exact(a, b, c) if config.verify else (True, 0)
        if not ok:
            log(f"N={n} {engine}: product mismatch, max_abs_diff={diff}")
        else:
            ops = tally.total()
            digits = probe.max_digits if probe.observed else None
    except (ValueError, ArithmeticError) as exc:
        log(f"N={n} {engine}: failed: {exc}")
    if ops is None:
        # failed cell: no measured columns
        return CostRow(n, engine, None, predicted_ops(engine, n), None, None)
    return CostRow(n, engine, ops, predicted_ops(engine, n), digits, int(statistics.median(times)))


def cmd_bench(config: RunConfig, stdout) -> int:
    report = CostReport()
    log = lambda msg: print(msg, file=sys.stderr)  # noqa: E731
    for n in config.ns:
        for engine in config.engines:
            report.add(bench_cell(config, engine, n, log))
    if config.csv is not None:
        with open(config.csv, "w", newline="") as fh:
            report.write_csv(fh)
    else:
        report.write_csv(stdout)
    return EXIT_OK


def _format_cost(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.6g}"


def cmd_predict(config: RunConfig, stdout) -> int:
    model = MachineModel(config.model)
    for n in config.ns:
        print(f"N={n}", file=stdout)
        print(f"  closed_form={predict_ops_closed(n)}", file=stdout)
        print(f"  recurrence={predict_ops_recursive(n)}", file=stdout)
        print(f"  required_digits={required_digits(n, config.digits)}", file=stdout)
        print(f"  machine_cost[{model.value}]={_format_cost(machine_cost(n, model, digits=config.digits))}", file=stdout)
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "mul": cmd_mul,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "predict": cmd_predict,
}


def _engine_list(text: str) -> list[str]:
    return [t for t in text.split(",") if t]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="packmm", description="Exact matrix multiplication by epsilon packing.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--engine", type=_engine_list, default=["flat"], help=f"one or more of {','.join(ENGINES)}")
    common.add_argument("--digits", type=int, default=1, help="digit budget d of random entries")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--pad", action="store_true", help="zero-pad to a power of two where needed")
    common.add_argument("--force-e", type=int, default=None, help="override the packing exponent")
    common.add_argument("--no-verify", dest="verify", action="store_false")

    p = sub.add_parser("gen", parents=[common], help="write a seeded random matrix")
    p.add_argument("--n", type=int, nargs=1, required=True)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("mul", parents=[common], help="multiply two matrix files")
    p.add_argument("--a", type=Path, required=True)
    p.add_argument("--b", type=Path, required=True)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("verify", parents=[common], help="check a candidate product against the classical one")
    p.add_argument("--a", type=Path, required=True)
    p.add_argument("--b", type=Path, required=True)
    p.add_argument("--c", type=Path, required=True)

    p = sub.add_parser("bench", parents=[common], help="op-count and timing sweep as CSV")
    p.add_argument("--n", type=int, nargs="*", default=[])
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--csv", type=Path)

    p = sub.add_parser("predict", parents=[common], help="analytic cost predictions")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--model", default="unit_cost", choices=[m.value for m in MachineModel])
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    fields["engines"] = tuple(ns.engine) or ("flat",)
    fields["ns"] = tuple(getattr(ns, "n", None) or ())
    return RunConfig(**fields).validate()


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        return COMMANDS[config.subcommand](config, stdout)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"packmm {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
