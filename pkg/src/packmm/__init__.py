"""Exact integer and fixed-point matrix multiplication by epsilon packing.

A row of ``A`` and a column of ``B`` are packed into single long decimal
fixed-point numbers, multiplied once, and the dot product is recovered with
a floor and a modulo by a power of ten.
"""

from .apfixed import BigUint, PackedArray, PackedNumber, ScaleMismatchError
from .baselines import binet_recursive, classical, strassen
from .costmodel import (
    CostReport,
    MachineModel,
    OpCount,
    RunProbe,
    machine_cost,
    measure_digits,
    predict_ops_closed,
    predict_ops_recursive,
    required_digits,
)
from .matrix import IntMatrix, SignedMatrix, random_matrix, read_matrix, write_matrix
from .packmul import (
    EpsilonSchedule,
    FixedPointMatrix,
    epsilon_exponent,
    mm_flat,
    mm_recursive,
    mm_signed,
    multiply_fixed_point,
    pack_dot,
    verify_exact,
)

__all__ = [
    "BigUint",
    "CostReport",
    "EpsilonSchedule",
    "FixedPointMatrix",
    "IntMatrix",
    "MachineModel",
    "OpCount",
    "PackedArray",
    "PackedNumber",
    "RunProbe",
    "ScaleMismatchError",
    "SignedMatrix",
    "binet_recursive",
    "classical",
    "epsilon_exponent",
    "machine_cost",
    "measure_digits",
    "mm_flat",
    "mm_recursive",
    "mm_signed",
    "multiply_fixed_point",
    "pack_dot",
    "predict_ops_closed",
    "predict_ops_recursive",
    "random_matrix",
    "read_matrix",
    "required_digits",
    "strassen",
    "verify_exact",
    "write_matrix",
]
