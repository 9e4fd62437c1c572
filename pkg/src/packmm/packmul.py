"""Packed-operand matrix multiplication.

Rows of ``A`` are packed with powers of ``eps = 10**-e`` and columns of ``B``
with powers of ``1/eps``.  The product of two packed scalars holds the wanted
dot product at the ``eps**0`` position; terms with positive powers of eps sum
to less than one and are dropped by ``floor``, terms with negative powers are
multiples of ``10**e`` and are dropped by ``mod 10**e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import apfixed
from .apfixed import BigUint, PackedArray, PackedNumber, decimal_digits, mod_pow10_array
from .costmodel import OpCount, RunProbe, predict_ops_flat
from .matrix import IntMatrix, SignedMatrix, crop, next_power_of_two, pad_square


def epsilon_exponent(a_max: int, b_max: int, n: int) -> int:
    """Smallest safe packing exponent ``e`` (``eps = 10**-e``).

    ``e = floor(log10(max(1, a_max * b_max * n))) + 2``, so each dot product
    stays below ``10**(e-1)`` and the sub-unit tail
    ``n * a_max * b_max * eps / (1 - eps)`` stays below one.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if a_max < 0 or b_max < 0:
        raise ValueError("entry maxima must be nonnegative")
    return decimal_digits(max(1, a_max * b_max * n)) - 1 + 2


@dataclass(frozen=True)
class EpsilonSchedule:
    """Per-level packing exponents and working precisions for the recursive engine.

    Level ``k`` (1-based) packs with ``eps_k = 10**-e_k`` and computes at
    ``p_k`` fractional digits, where ``e_1 = e``, ``p_1 = 2e`` and both
    double from one level to the next.
    """

    e: int
    levels: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("base exponent must be positive")
        for k, (ek, pk) in enumerate(self.levels):
            if ek != self.e << k or pk != (2 * self.e) << k:
                raise ValueError(f"level {k + 1} breaks the doubling ladder: {(ek, pk)}")

    @classmethod
    def build(cls, e: int, n: int) -> EpsilonSchedule:
        """Schedule for an ``n x n`` product, ``n`` a power of two."""
        if n < 1 or n & (n - 1):
            raise ValueError(f"{n} is not a power of two")
        depth = n.bit_length() - 1
        return cls(e, tuple((e << k, (2 * e) << k) for k in range(depth)))

    @classmethod
    def for_inputs(cls, a: IntMatrix, b: IntMatrix) -> EpsilonSchedule:
        n = next_power_of_two(max(a.rows, a.cols, b.cols))
        return cls.build(epsilon_exponent(a.max_entry(), b.max_entry(), a.cols), n)

    @property
    def depth(self) -> int:
        return len(self.levels)


def pack_dot(a: PackedNumber, b: PackedNumber, c: PackedNumber, d: PackedNumber, e: int) -> BigUint:
    """``a*c + b*d`` from the single product ``(a + eps*b)(c + d/eps)``.

    Raw kernel: the caller guarantees ``a*c + b*d < 10**e`` and ``b*c*eps < 1``.
    """
    row = apfixed.add(a, apfixed.shift_pow10(b, -e))
    col = apfixed.add(c, apfixed.shift_pow10(d, e))
    return apfixed.mod_pow10(apfixed.floor(apfixed.mul(row, col)), e)


def _require_nonnegative(*ms: SignedMatrix) -> None:
    for m in ms:
        if not m.is_nonnegative():
            raise ValueError("packed engines need nonnegative entries; use mm_signed")


def _check_conformable(a: SignedMatrix, b: SignedMatrix) -> None:
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")


# upper bound on digits held by one batch of packed operands
_BATCH_DIGITS = 20_000_000


def _solve(rows: PackedArray, cols: PackedArray, k: int, schedule: EpsilonSchedule, probe: RunProbe | None):
    """Run a batch of independent level-``k`` products, splitting it if too large."""
    batch, n, _ = rows.shape
    per_problem = n * n * schedule.levels[k - 1][1]
    chunk = max(1, _BATCH_DIGITS // per_problem)
    if batch <= chunk:
        return _mm_level(rows, cols, k, schedule, probe)
    parts = [_mm_level(rows[i : i + chunk], cols[i : i + chunk], k, schedule, probe) for i in range(0, batch, chunk)]
    return np.concatenate([v for v, _ in parts]), OpCount.sum(o for _, o in parts)


def _mm_level(
    rows: PackedArray,
    cols: PackedArray,
    k: int,
    schedule: EpsilonSchedule,
    probe: RunProbe | None,
) -> tuple[np.ndarray, OpCount]:
    """One recursion level for a batch of problems ``rows[b] @ cols[b]``.

    ``rows`` and ``cols`` have shape ``(batch, n, n)``; the four sub-products
    of every problem form the next level's batch.  Returns the exact integer
    products with shape ``(batch, n, n)``.
    """
    ek, pk = schedule.levels[k - 1]
    batch, n, _ = rows.shape
    h = n // 2

    # move to this level's precision and scale the second block by eps or 1/eps
    r1 = rows[:, :h, :h].rescale(pk) + rows[:, :h, h:].rescale(pk, -ek)
    r2 = rows[:, h:, :h].rescale(pk) + rows[:, h:, h:].rescale(pk, -ek)
    c1 = cols[:, :h, :h].rescale(pk) + cols[:, h:, :h].rescale(pk, ek)
    c2 = cols[:, :h, h:].rescale(pk) + cols[:, h:, h:].rescale(pk, ek)
    ops = OpCount(scalar_add=4 * h * h, scale_by_eps=4 * h * h)

    if h > 1:
        sub_rows = PackedArray.stack([r1, r1, r2, r2], axis=1).reshape(4 * batch, h, h)
        sub_cols = PackedArray.stack([c1, c2, c1, c2], axis=1).reshape(4 * batch, h, h)
        sub, sub_ops = _solve(sub_rows, sub_cols, k + 1, schedule, probe)
        # [M11, M12, M21, M22] per problem -> 2x2 block matrix
        values = sub.reshape(batch, 2, 2, h, h).transpose(0, 1, 3, 2, 4).reshape(batch, n, n)
        # sub-results are already integers, so floor is the identity here
        total = ops.scaled(batch) + sub_ops
    else:
        left = PackedArray.concatenate([r1, r2], axis=1)
        right = PackedArray.concatenate([c1, c2], axis=2)
        prod = left * right
        if probe is not None:
            probe.observe(max(left.max_digit_count(), right.max_digit_count()))
            probe.observe(prod.max_digit_count())
        values = prod.floor()
        total = (ops + OpCount(scalar_mul=4)).scaled(batch)

    out = mod_pow10_array(values, schedule.e)
    return out, total + OpCount(floor_ops=n * n, mod_ops=n * n).scaled(batch)


def mm_recursive(
    a: IntMatrix,
    b: IntMatrix,
    schedule: EpsilonSchedule | None = None,
    *,
    pad: bool = False,
    probe: RunProbe | None = None,
) -> tuple[IntMatrix, OpCount]:
    """Recursive 2x2-block packed product with four sub-products per level.

    ``a`` and ``b`` must be square of equal power-of-two size unless ``pad``
    is set, in which case both are zero-padded and the result cropped.
    The default schedule is sized from the actual entry maxima.
    """
    _check_conformable(a, b)
    _require_nonnegative(a, b)
    n = max(a.rows, a.cols, b.cols)
    size = next_power_of_two(n)
    if a.shape != (size, size) or b.shape != (size, size):
        if not pad:
            raise ValueError(f"recursive engine needs equal square power-of-two inputs, got {a.shape} x {b.shape}")
        c, ops = mm_recursive(pad_square(a, size), pad_square(b, size), schedule, probe=probe)
        return crop(c, a.rows, b.cols), ops
    if schedule is None:
        schedule = EpsilonSchedule.for_inputs(a, b)
    if schedule.depth < size.bit_length() - 1:
        raise ValueError(f"schedule has {schedule.depth} levels, size {size} needs {size.bit_length() - 1}")

    if size == 1:
        x, y = PackedArray.from_ints(a.as_object(), 0), PackedArray.from_ints(b.as_object(), 0)
        prod = x * y
        if probe is not None:
            probe.observe(max(x.max_digit_count(), y.max_digit_count(), prod.max_digit_count()))
        ops = OpCount(scalar_mul=1)
        values = prod.floor()
    else:
        x = PackedArray.from_ints(a.as_object()[np.newaxis], schedule.levels[0][1])
        y = PackedArray.from_ints(b.as_object()[np.newaxis], schedule.levels[0][1])
        values, ops = _solve(x, y, 1, schedule, probe)
        values = values[0]
    if probe is not None:
        probe.count(ops)
    return IntMatrix(values), ops


def mm_flat(a: IntMatrix, b: IntMatrix, e: int | None = None, *, probe: RunProbe | None = None) -> IntMatrix:
    """Flattened packed product: ``M + P`` packed scalars, one rank-1 outer product.

    Column ``k`` of ``a`` (1-based) is scaled by ``eps**k`` and each row summed;
    row ``k`` of ``b`` by ``eps**-k`` and each column summed.  Works for
    rectangular ``M x K`` by ``K x P`` inputs.  An undersized explicit ``e``
    yields a wrong product silently; :func:`verify_exact` is the guard.
    """
    _check_conformable(a, b)
    _require_nonnegative(a, b)
    m, kdim = a.shape
    p = b.cols
    if e is None:
        e = epsilon_exponent(a.max_entry(), b.max_entry(), kdim)
    f = (kdim + 1) * e
    exps = e * np.arange(1, kdim + 1)

    a_scaled = PackedArray.from_ints(a.as_object(), f, -exps[np.newaxis, :])
    b_scaled = PackedArray.from_ints(b.as_object(), f, exps[:, np.newaxis])
    a_packed = a_scaled.sum(axis=1)
    b_packed = b_scaled.sum(axis=0)
    prod = a_packed.outer(b_packed)
    values = mod_pow10_array(prod.floor(), e)

    if probe is not None:
        probe.observe(max(a_packed.max_digit_count(), b_packed.max_digit_count(), prod.max_digit_count()))
        probe.count(predict_ops_flat(m, kdim, p))
    return IntMatrix(values)


@dataclass(frozen=True)
class FixedPointMatrix:
    """Matrix of fixed-point values ``entries / 10**frac``."""

    entries: SignedMatrix
    frac: int = 0

    def value(self, i: int, j: int) -> Fraction:
        return Fraction(self.entries[i, j], 10**self.frac)


def digit_planes(m: IntMatrix, digits: int | None = None) -> list[IntMatrix]:
    """Split ``m`` into single-digit matrices ``m = sum_i 10**i * planes[i]``."""
    digits = m.digits if digits is None else digits
    vals = m.as_object()
    planes = []
    for _ in range(digits):
        planes.append(IntMatrix(vals % 10, 1))
        vals = vals // 10
    return planes


def multiply_fixed_point(
    a: FixedPointMatrix | IntMatrix,
    b: FixedPointMatrix | IntMatrix,
    *,
    e: int | None = None,
    probe: RunProbe | None = None,
) -> FixedPointMatrix:
    """Exact product of multi-digit (optionally fixed-point) matrices.

    Each input is decomposed into single-digit planes and every plane pair
    is multiplied with :func:`mm_flat`; the ``d_a * d_b`` partial products are
    recombined with their powers of ten.
    """
    if isinstance(a, SignedMatrix):
        a = FixedPointMatrix(a)
    if isinstance(b, SignedMatrix):
        b = FixedPointMatrix(b)
    _check_conformable(a.entries, b.entries)
    _require_nonnegative(a.entries, b.entries)
    pa, pb = digit_planes(a.entries), digit_planes(b.entries)
    m, p = a.entries.rows, b.entries.cols
    if len(pa) == 1 and len(pb) == 1:
        return FixedPointMatrix(mm_flat(pa[0], pb[0], e, probe=probe), a.frac + b.frac)

    acc = np.zeros((m, p), dtype=object)
    for i, ai in enumerate(pa):
        for j, bj in enumerate(pb):
            acc = acc + mm_flat(ai, bj, e, probe=probe).as_object() * 10 ** (i + j)
    if probe is not None:
        probe.count(OpCount(scalar_add=len(pa) * len(pb) * m * p, scale_by_eps=len(pa) * len(pb) * m * p))
    return FixedPointMatrix(IntMatrix(acc), a.frac + b.frac)


def mm_signed(a: SignedMatrix, b: SignedMatrix, e: int | None = None, *, probe: RunProbe | None = None) -> SignedMatrix:
    """Signed product through an offset to nonnegative inputs.

    With ``A' = A + alpha J`` and ``B' = B + beta J`` (``J`` all ones),
    ``AB = A'B' - beta A'J - alpha J B' + alpha beta J J``: one packed
    product plus row and column sums.
    """
    _check_conformable(a, b)
    alpha = max(0, -a.min_entry())
    beta = max(0, -b.min_entry())
    if alpha == 0 and beta == 0:
        return mm_flat(IntMatrix(a), IntMatrix(b), e, probe=probe)
    m, kdim = a.shape
    p = b.cols
    ap = a.as_object() + alpha
    bp = b.as_object() + beta
    prod = mm_flat(IntMatrix(ap), IntMatrix(bp), e, probe=probe).as_object()
    row_sums = ap.sum(axis=1)[:, np.newaxis]
    col_sums = bp.sum(axis=0)[np.newaxis, :]
    result = prod - beta * row_sums - alpha * col_sums + alpha * beta * kdim
    if probe is not None:
        probe.count(
            OpCount(
                scalar_add=m * kdim + kdim * p + m * (kdim - 1) + (kdim - 1) * p + 3 * m * p,
                scalar_mul=m + p,
            )
        )
    return SignedMatrix(result)


def verify_exact(a: SignedMatrix, b: SignedMatrix, candidate: SignedMatrix) -> tuple[bool, int]:
    """Compare ``candidate`` with the classical product.

    Returns ``(equal, max_abs_difference)``; the difference is zero exactly
    when the Euclidean norm of ``A*B - C`` is zero.
    """
    from .baselines import classical

    expected, _ = classical(a, b)
    if candidate.shape != expected.shape:
        raise ValueError(f"candidate shape {candidate.shape} != product shape {expected.shape}")
    diff = int(abs(expected.as_object() - candidate.as_object()).max())
    return diff == 0, diff
