"""Operation tallies, analytic cost predictors and digit requirements."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, fields
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, TextIO

if TYPE_CHECKING:
    from .packmul import EpsilonSchedule

CSV_HEADER = ("N", "algorithm", "ops", "predicted", "digits", "wall_ns", "coefficient")


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def _log2_exact(n: int) -> int:
    if not _is_power_of_two(n):
        raise ValueError(f"{n} is not a power of two")
    return n.bit_length() - 1


@dataclass(frozen=True)
class OpCount:
    """Tally of scalar operations; ``+`` merges two tallies."""

    scalar_mul: int = 0
    scalar_add: int = 0
    scale_by_eps: int = 0
    floor_ops: int = 0
    mod_ops: int = 0

    def total(self) -> int:
        return sum(getattr(self, f.name) for f in fields(self))

    def merge(self, other: OpCount) -> OpCount:
        return OpCount(
            self.scalar_mul + other.scalar_mul,
            self.scalar_add + other.scalar_add,
            self.scale_by_eps + other.scale_by_eps,
            self.floor_ops + other.floor_ops,
            self.mod_ops + other.mod_ops,
        )

    def scaled(self, factor: int) -> OpCount:
        """Tally of ``factor`` independent repetitions."""
        return OpCount(*(factor * getattr(self, f.name) for f in fields(self)))

    __add__ = merge

    @classmethod
    def sum(cls, counts: Iterable[OpCount]) -> OpCount:
        out = cls()
        for c in counts:
            out = out + c
        return out


@dataclass
class RunProbe:
    """Instrumentation attached to one engine run.

    Collects the operation tally and the largest operand size, counted in
    decimal digits of the stored fixed-point string.  Probes from
    independent sub-runs combine with :meth:`merge`.
    """

    ops: OpCount = field(default_factory=OpCount)
    max_digits: int = 0
    observed: bool = False

    def count(self, ops: OpCount) -> None:
        self.ops = self.ops + ops

    def observe(self, digits: int) -> None:
        self.observed = True
        self.max_digits = max(self.max_digits, digits)

    def merge(self, other: RunProbe) -> RunProbe:
        return RunProbe(
            self.ops + other.ops,
            max(self.max_digits, other.max_digits),
            self.observed or other.observed,
        )


def measure_digits(probe: RunProbe | None) -> int:
    """Largest operand digit count seen by an instrumented run."""
    if probe is None or not probe.observed:
        raise ValueError("no instrumentation data: pass a RunProbe to the engine")
    return probe.max_digits


class MachineModel(Enum):
    """Assumed cost of one arithmetic operation on ``d``-digit operands."""

    UNIT_COST = "unit_cost"
    LOG_D = "log_d"
    D_LOG_D = "d_log_d"
    KARATSUBA = "karatsuba"

    def cost(self, d: int) -> float:
        if d < 1:
            raise ValueError("digit count must be positive")
        if self is MachineModel.UNIT_COST:
            return 1.0
        if self is MachineModel.LOG_D:
            return math.log2(d)
        if self is MachineModel.D_LOG_D:
            return d * math.log2(d)
        return d**1.58


def predict_ops_closed(n: int) -> int:
    """Exact op count ``(4 log2 n + 1) n**2`` of the recursive packed engine."""
    k = _log2_exact(n)
    if n < 2:
        raise ValueError("closed form needs n >= 2")
    return (4 * k + 1) * n * n


def predict_ops_recursive(n: int) -> int:
    """Evaluate the cost recurrence level by level.

    ``T(n) = 4(n/2)^2 + 4(n/2)^2 + 2n^2 + 4 T(n/2)`` for the packing scalings,
    packing additions, floor+mod and the four sub-products, with ``T(2) = 20``:
    eight packing ops, eight floor/mod ops and four leaf multiplies.
    """
    _log2_exact(n)
    if n < 2:
        raise ValueError("recurrence needs n >= 2")
    if n == 2:
        return 20
    h = n // 2
    return 4 * h * h + 4 * h * h + 2 * n * n + 4 * predict_ops_recursive(h)


def predict_ops_flat(m: int, k: int, p: int) -> OpCount:
    """Op tally of the flattened rank-1 engine for an ``m x k`` by ``k x p`` product."""
    return OpCount(
        scalar_mul=m * p,
        scalar_add=m * (k - 1) + (k - 1) * p,
        scale_by_eps=m * k + k * p,
        floor_ops=m * p,
        mod_ops=m * p,
    )


def recursive_level_ops(n: int) -> list[OpCount]:
    """Per-level tallies of the recursive engine, top level first.

    The last entry also carries the ``n**2`` leaf multiplications.
    """
    depth = _log2_exact(n)
    out = []
    for level in range(depth):
        calls = 4**level
        size = n >> level
        half = size // 2
        out.append(
            OpCount(
                scalar_add=calls * 4 * half * half,
                scale_by_eps=calls * 4 * half * half,
                floor_ops=calls * size * size,
                mod_ops=calls * size * size,
            )
        )
    if out:
        out[-1] = out[-1] + OpCount(scalar_mul=n * n)
    return out


def classical_ops(m: int, k: int, p: int) -> OpCount:
    return OpCount(scalar_mul=m * k * p, scalar_add=m * (k - 1) * p)


def binet_table_cost(n: int) -> int:
    """The ``2 N^3`` comparison column of the op-count table."""
    return 2 * n**3


def strassen_ops(n: int, crossover: int = 1) -> OpCount:
    """Tally of the seven-product recursion with classical leaves of size ``crossover``."""
    _log2_exact(n)
    if n <= crossover:
        return classical_ops(n, n, n)
    h = n // 2
    sub = strassen_ops(h, crossover)
    return OpCount(scalar_mul=7 * sub.scalar_mul, scalar_add=7 * sub.scalar_add + 18 * h * h)


def required_digits(n: int, d: int) -> int:
    """``floor(n * log2(2 n 10**d))``, computed exactly in integers."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    return ((2 * n * 10**d) ** n).bit_length() - 1


def machine_cost(
    n: int,
    model: MachineModel | str,
    schedule: EpsilonSchedule | None = None,
    digits: int = 1,
) -> float:
    """Predicted cost of the recursive engine under a machine model.

    Every counted operation at recursion level ``k`` is charged
    ``model.cost(p_k)`` where ``p_k`` is that level's working precision from
    the epsilon schedule.  Under ``unit_cost`` this is the closed-form count.
    """
    model = MachineModel(model)
    if schedule is None:
        from .packmul import EpsilonSchedule, epsilon_exponent

        amax = 10**digits - 1
        schedule = EpsilonSchedule.build(epsilon_exponent(amax, amax, n), n)
    per_level = recursive_level_ops(n)
    if len(schedule.levels) < len(per_level):
        raise ValueError("schedule too short for n")
    total = 0.0
    for ops, (_, prec) in zip(per_level, schedule.levels):
        total += ops.total() * model.cost(prec)
    return total


def _format_coefficient(ops: int, n: int) -> str:
    c = Fraction(ops, n * n)
    return str(c.numerator) if c.denominator == 1 else f"{float(c):.6g}"


@dataclass(frozen=True)
class CostRow:
    n: int
    algorithm: str
    ops: int | None
    predicted: int | None
    digits: int | None
    wall_ns: int | None = None

    @property
    def coefficient(self) -> str:
        if self.ops is None:
            return ""
        return _format_coefficient(self.ops, self.n)

    def as_record(self) -> tuple:
        blank = lambda v: "" if v is None else v  # noqa: E731
        return (
            self.n,
            self.algorithm,
            blank(self.ops),
            blank(self.predicted),
            blank(self.digits),
            blank(self.wall_ns),
            self.coefficient,
        )


@dataclass
class CostReport:
    rows: list[CostRow] = field(default_factory=list)

    def add(self, row: CostRow) -> None:
        if any(r.n == row.n and r.algorithm == row.algorithm for r in self.rows):
            raise ValueError(f"duplicate row for N={row.n}, algorithm={row.algorithm}")
        self.rows.append(row)

    def write_csv(self, out: TextIO) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            writer.writerow(row.as_record())

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()

    @classmethod
    def read_csv(cls, text: str) -> CostReport:
        reader = csv.DictReader(io.StringIO(text))
        report = cls()
        opt = lambda v: int(v) if v else None  # noqa: E731
        for rec in reader:
            report.add(
                CostRow(
                    int(rec["N"]),
                    rec["algorithm"],
                    opt(rec["ops"]),
                    opt(rec["predicted"]),
                    opt(rec["digits"]),
                    opt(rec["wall_ns"]),
                )
            )
        return report
