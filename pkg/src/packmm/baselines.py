"""Reference engines: classical triple loop, recursive Binet and Strassen.

All three return ``(product, OpCount)``.  Products are exact: native
``int64`` arithmetic is used only when the worst-case dot product provably
fits, otherwise entries are Python integers.
"""

from __future__ import annotations

import numpy as np

from .costmodel import OpCount, classical_ops
from .matrix import INT64_MAX, SignedMatrix, as_result, crop, next_power_of_two, pad_square


def _conformable(a: SignedMatrix, b: SignedMatrix) -> None:
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")


def _fits_int64(a: SignedMatrix, b: SignedMatrix) -> bool:
    return a.cols * a.max_abs() * b.max_abs() <= INT64_MAX


def _operands(a: SignedMatrix, b: SignedMatrix, bound: int) -> tuple[np.ndarray, np.ndarray]:
    """Native operands if every intermediate stays below ``bound * max|a| * max|b|``."""
    if bound * a.max_abs() * b.max_abs() <= INT64_MAX:
        return a.entries.astype(np.int64), b.entries.astype(np.int64)
    return a.as_object(), b.as_object()


def classical(a: SignedMatrix, b: SignedMatrix) -> tuple[SignedMatrix, OpCount]:
    """Row-by-column product; ``M*K*P`` multiplies and ``M*(K-1)*P`` adds."""
    _conformable(a, b)
    if _fits_int64(a, b):
        prod = a.entries.astype(np.int64) @ b.entries.astype(np.int64)
    else:
        prod = a.as_object().dot(b.as_object())
    return as_result(prod, a, b), classical_ops(a.rows, a.cols, b.cols)


def _square_power_of_two(a: SignedMatrix, b: SignedMatrix, pad: bool) -> int | None:
    """Padded size if padding is needed, None if inputs are already valid."""
    _conformable(a, b)
    size = next_power_of_two(max(a.rows, a.cols, b.cols))
    if a.shape == (size, size) and b.shape == (size, size):
        return None
    if not pad:
        raise ValueError(f"need equal square power-of-two inputs, got {a.shape} x {b.shape}")
    return size


def _binet(x: np.ndarray, y: np.ndarray, crossover: int) -> tuple[np.ndarray, OpCount]:
    n = x.shape[0]
    if n <= crossover:
        return x.dot(y), classical_ops(n, n, n)
    h = n // 2
    x11, x12, x21, x22 = x[:h, :h], x[:h, h:], x[h:, :h], x[h:, h:]
    y11, y12, y21, y22 = y[:h, :h], y[:h, h:], y[h:, :h], y[h:, h:]
    parts = [
        _binet(x11, y11, crossover), _binet(x12, y21, crossover),
        _binet(x11, y12, crossover), _binet(x12, y22, crossover),
        _binet(x21, y11, crossover), _binet(x22, y21, crossover),
        _binet(x21, y12, crossover), _binet(x22, y22, crossover),
    ]
    p = [m for m, _ in parts]
    c = np.block([[p[0] + p[1], p[2] + p[3]], [p[4] + p[5], p[6] + p[7]]])
    ops = OpCount.sum(o for _, o in parts) + OpCount(scalar_add=4 * h * h)
    return c, ops


def binet_recursive(
    a: SignedMatrix, b: SignedMatrix, *, pad: bool = False, crossover: int = 16
) -> tuple[SignedMatrix, OpCount]:
    """Eight block products and four block additions per level.

    Blocks of size ``<= crossover`` use the classical product; the tally
    ``N^3`` multiplies plus ``N^3 - N^2`` adds does not depend on the crossover.
    """
    size = _square_power_of_two(a, b, pad)
    if size is not None:
        c, ops = binet_recursive(pad_square(a, size), pad_square(b, size), crossover=crossover)
        return crop(c, a.rows, b.cols), ops
    x, y = _operands(a, b, a.cols)
    c, ops = _binet(x, y, max(1, crossover))
    return as_result(c, a, b), ops


def _strassen(x: np.ndarray, y: np.ndarray, crossover: int) -> tuple[np.ndarray, OpCount]:
    n = x.shape[0]
    if n <= crossover:
        return x.dot(y), classical_ops(n, n, n)
    h = n // 2
    a11, a12, a21, a22 = x[:h, :h], x[:h, h:], x[h:, :h], x[h:, h:]
    b11, b12, b21, b22 = y[:h, :h], y[:h, h:], y[h:, :h], y[h:, h:]
    if h == 1 and crossover <= 1:
        # scalar step inlined; same seven products and eighteen add/sub
        a11, a12, a21, a22 = a11[0, 0], a12[0, 0], a21[0, 0], a22[0, 0]
        b11, b12, b21, b22 = b11[0, 0], b12[0, 0], b21[0, 0], b22[0, 0]
        m1 = (a11 + a22) * (b11 + b22)
        m2 = (a21 + a22) * b11
        m3 = a11 * (b12 - b22)
        m4 = a22 * (b21 - b11)
        m5 = (a11 + a12) * b22
        m6 = (a21 - a11) * (b11 + b12)
        m7 = (a12 - a22) * (b21 + b22)
        c = np.array([[m1 + m4 - m5 + m7, m3 + m5], [m2 + m4, m1 - m2 + m3 + m6]], dtype=x.dtype)
        return c, OpCount(scalar_mul=7, scalar_add=18)
    m1, o1 = _strassen(a11 + a22, b11 + b22, crossover)
    m2, o2 = _strassen(a21 + a22, b11, crossover)
    m3, o3 = _strassen(a11, b12 - b22, crossover)
    m4, o4 = _strassen(a22, b21 - b11, crossover)
    m5, o5 = _strassen(a11 + a12, b22, crossover)
    m6, o6 = _strassen(a21 - a11, b11 + b12, crossover)
    m7, o7 = _strassen(a12 - a22, b21 + b22, crossover)
    c = np.block([[m1 + m4 - m5 + m7, m3 + m5], [m2 + m4, m1 - m2 + m3 + m6]])
    ops = o1 + o2 + o3 + o4 + o5 + o6 + o7 + OpCount(scalar_add=18 * h * h)
    return c, ops


def strassen(
    a: SignedMatrix, b: SignedMatrix, *, pad: bool = False, crossover: int = 1
) -> tuple[SignedMatrix, OpCount]:
    """Seven-product block recursion, bottoming out at ``crossover`` (default 1x1).

    At the 1x1 default the tally is ``7**log2(N)`` multiplies; each level
    adds ``18 (N/2)^2`` additions/subtractions.
    """
    size = _square_power_of_two(a, b, pad)
    if size is not None:
        c, ops = strassen(pad_square(a, size), pad_square(b, size), crossover=crossover)
        return crop(c, a.rows, b.cols), ops
    # Strassen block sums grow by 2 per level: intermediates <= 4 N^2 max|a| max|b|
    x, y = _operands(a, b, 8 * a.cols**2)
    c, ops = _strassen(x, y, max(1, crossover))
    return as_result(c, a, b), ops
