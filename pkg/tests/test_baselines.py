from __future__ import annotations

import numpy as np
import pytest

from packmm import IntMatrix, SignedMatrix, binet_recursive, classical, random_matrix, strassen
from packmm.costmodel import binet_table_cost, strassen_ops


def brute(a, b):
    a, b = a.tolist(), b.tolist()
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def test_classical_golden(golden):
    a, b, c = golden
    got, ops = classical(a, b)
    assert got == c
    assert ops.total() == 2 * 8**3 - 8**2 == 960


def test_classical_counts():
    _, ops = classical(IntMatrix([[3]]), IntMatrix([[4]]))
    assert (ops.scalar_mul, ops.scalar_add) == (1, 0)
    for n in (2, 3, 7, 16):
        _, ops = classical(random_matrix(n, n, 1, n), random_matrix(n, n, 1, n + 1))
        assert ops.total() == 2 * n**3 - n**2
    with pytest.raises(ValueError):
        classical(random_matrix(2, 3, 1, 0), random_matrix(2, 3, 1, 0))


def test_classical_escalates_beyond_int64():
    big = 10**18 - 1
    a = IntMatrix([[big, big], [big, big]])
    got, _ = classical(a, a)
    assert got.tolist() == [[2 * big * big] * 2] * 2


@pytest.mark.parametrize("crossover", [1, 2, 16])
def test_binet_matches_and_counts(crossover):
    for n in (1, 2, 4, 16, 32):
        a, b = random_matrix(n, n, 2, n), random_matrix(n, n, 2, n + 3)
        got, ops = binet_recursive(a, b, crossover=crossover)
        assert got.tolist() == brute(a, b)
        assert (ops.scalar_mul, ops.scalar_add) == (n**3, n**3 - n**2)


def test_binet_table_column():
    assert binet_table_cost(8) == 1024
    assert binet_table_cost(4) == 128


def test_binet_requires_power_of_two():
    a = random_matrix(6, 6, 1, 0)
    with pytest.raises(ValueError):
        binet_recursive(a, a)
    assert binet_recursive(a, a, pad=True)[0].tolist() == brute(a, a)


def test_strassen_two_by_two():
    a = IntMatrix([[1, 2], [3, 4]])
    b = IntMatrix([[5, 6], [7, 8]])
    got, ops = strassen(a, b)
    assert got.tolist() == [[19, 22], [43, 50]]
    assert (ops.scalar_mul, ops.scalar_add) == (7, 18)
    assert ops.scalar_add == 6 * (2**2 - 1)


def test_strassen_identity():
    eye = IntMatrix(np.eye(8, dtype=np.int64))
    assert strassen(eye, eye)[0] == eye


@pytest.mark.parametrize("n", [1, 2, 4, 8, 32])
def test_strassen_signed_and_counts(n):
    a = random_matrix(n, n, 3, n, signed=True)
    b = random_matrix(n, n, 3, n + 1, signed=True)
    got, ops = strassen(a, b)
    assert got.tolist() == brute(a, b)
    assert ops.scalar_mul == 7 ** (n.bit_length() - 1)
    assert ops == strassen_ops(n)


def test_strassen_crossover_keeps_product():
    a, b = random_matrix(16, 16, 2, 1), random_matrix(16, 16, 2, 2)
    assert strassen(a, b, crossover=4)[0] == strassen(a, b)[0]
    assert strassen(a, b, crossover=4)[1] == strassen_ops(16, 4)


def test_strassen_bignum_path():
    a = SignedMatrix(np.full((4, 4), 10**17), 18)
    assert strassen(a, a)[0].tolist() == brute(a, a)


def test_baselines_agree_on_random_mix():
    rng = np.random.default_rng(5)
    for trial in range(40):
        n = int(2 ** rng.integers(0, 6))
        signed = bool(trial % 2)
        a = random_matrix(n, n, 2, trial, signed=signed)
        b = random_matrix(n, n, 2, trial + 500, signed=signed)
        c = classical(a, b)[0]
        assert binet_recursive(a, b)[0] == c
        assert strassen(a, b)[0] == c
