"""Dense exact integer matrices, their text format and seeded generation.

Text format::

    rows cols digits
    e11 e12 ...
    ...

Entries are decimal integers separated by whitespace, one matrix row per
line.  ``digits`` is the declared budget ``d``: every ``|entry| < 10**d``.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import IO, Union

import numpy as np

from .apfixed import decimal_digits, int_array

INT64_MAX = np.iinfo(np.int64).max

PathLike = Union[str, os.PathLike]


def _normalize(entries) -> np.ndarray:
    if isinstance(entries, np.ndarray) and entries.dtype.kind == "i":
        arr = entries.astype(np.int64, copy=True)
        if arr.ndim != 2 or 0 in arr.shape:
            raise ValueError(f"matrix entries must be a non-empty 2-d array, got shape {arr.shape}")
        arr.setflags(write=False)
        return arr
    arr = np.array(entries, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"matrix entries must be 2-d, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("matrix must have at least one row and one column")
    if arr.dtype == object:
        for x in arr.flat:
            if isinstance(x, (bool, float)) or not hasattr(x, "__index__"):
                raise TypeError(f"matrix entries must be integers, got {type(x).__name__}")
        arr = int_array(arr)
    lo, hi = arr.min(), arr.max()
    if -INT64_MAX <= lo and hi <= INT64_MAX:
        arr = arr.astype(np.int64)
    arr.setflags(write=False)
    return arr


class SignedMatrix:
    """Immutable integer matrix with a declared magnitude budget ``|a| < 10**digits``.

    Entries are stored as ``int64`` when they fit, else as Python ints.
    """

    __slots__ = ("_entries", "digits")

    def __init__(self, entries, digits: int | None = None):
        arr = entries._entries if isinstance(entries, SignedMatrix) else _normalize(entries)
        self._check_entries(arr)
        need = decimal_digits(int(abs(arr).max()))
        if digits is None:
            digits = need
        if digits < need:
            raise ValueError(f"entry magnitude needs {need} digits, budget is {digits}")
        object.__setattr__(self, "_entries", arr)
        object.__setattr__(self, "digits", int(digits))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def _check_entries(self, arr: np.ndarray) -> None:
        pass

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def rows(self) -> int:
        return self._entries.shape[0]

    @property
    def cols(self) -> int:
        return self._entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._entries.shape

    def max_entry(self) -> int:
        return int(self._entries.max())

    def min_entry(self) -> int:
        return int(self._entries.min())

    def max_abs(self) -> int:
        return int(abs(self._entries).max())

    def is_nonnegative(self) -> bool:
        return self.min_entry() >= 0

    def as_object(self) -> np.ndarray:
        """Entries as a writable object array of Python ints."""
        return int_array(self._entries)

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self._entries]

    def __getitem__(self, idx):
        return int(self._entries[idx])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignedMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self._entries == other._entries))

    def __hash__(self):
        return hash((self.shape, tuple(int(x) for x in self._entries.flat)))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.tolist()}, digits={self.digits})"


class IntMatrix(SignedMatrix):
    """Nonnegative integer matrix, ``0 <= a < 10**digits``."""

    __slots__ = ()

    def _check_entries(self, arr: np.ndarray) -> None:
        if arr.min() < 0:
            raise ValueError("IntMatrix entries must be nonnegative")


def as_result(entries, *operands: SignedMatrix) -> SignedMatrix:
    """Wrap engine output as IntMatrix when every operand was nonnegative."""
    if all(isinstance(m, IntMatrix) for m in operands):
        return IntMatrix(entries)
    return SignedMatrix(entries)


def next_power_of_two(n: int) -> int:
    return 1 << (n - 1).bit_length() if n > 1 else 1


def pad_square(m: SignedMatrix, size: int) -> SignedMatrix:
    """Zero-pad ``m`` into the top-left corner of a ``size x size`` matrix."""
    if m.rows > size or m.cols > size:
        raise ValueError("cannot pad to a smaller size")
    if m.shape == (size, size):
        return m
    out = np.zeros((size, size), dtype=object)
    out[: m.rows, : m.cols] = m.as_object()
    return type(m)(out, m.digits)


def crop(m: SignedMatrix, rows: int, cols: int) -> SignedMatrix:
    return as_result(m.entries[:rows, :cols], m)


def format_matrix(m: SignedMatrix) -> str:
    lines = [f"{m.rows} {m.cols} {m.digits}"]
    lines.extend(" ".join(str(int(x)) for x in row) for row in m.entries)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> SignedMatrix:
    tokens = text.split()
    if len(tokens) < 3:
        raise ValueError("matrix header must be 'rows cols digits'")
    rows, cols, digits = (int(t) for t in tokens[:3])
    values = tokens[3:]
    if len(values) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, found {len(values)}")
    lines = text.strip().splitlines()[1:]
    if len(lines) != rows or any(len(line.split()) != cols for line in lines):
        raise ValueError("each matrix row must sit on its own line with 'cols' entries")
    entries = np.array([int(v) for v in values], dtype=object).reshape(rows, cols)
    cls = IntMatrix if min(entries.flat) >= 0 else SignedMatrix
    return cls(entries, digits)


def write_matrix(m: SignedMatrix, target: PathLike | IO[str]) -> None:
    text = format_matrix(m)
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text)


def read_matrix(source: PathLike | IO[str]) -> SignedMatrix:
    if hasattr(source, "read"):
        return parse_matrix(source.read())
    return parse_matrix(Path(source).read_text())


def _uniform_below(bitgen: np.random.PCG64, bound: int, count: int) -> np.ndarray:
    # unbiased: reject raw draws from the incomplete top band of [0, 2**64)
    limit = 2**64 - (2**64 % bound)
    out = np.empty(0, dtype=np.uint64)
    while out.size < count:
        raw = bitgen.random_raw(count - out.size)
        if limit < 2**64:
            raw = raw[raw < np.uint64(limit)]
        out = np.concatenate([out, raw % np.uint64(bound)])
    return out


def random_matrix(rows: int, cols: int, digits: int, seed: int, *, signed: bool = False) -> SignedMatrix:
    """Uniform entries in ``[0, 10**digits)`` (or ``(-10**digits, 10**digits)`` if signed).

    The generator is PCG64 driven through its raw 64-bit output with
    rejection sampling, so a given seed yields the same matrix on every
    platform and NumPy version.
    """
    if not 1 <= digits <= 18:
        raise ValueError("digits must lie in 1..18")
    bitgen = np.random.PCG64(seed)
    top = 10**digits
    if signed:
        vals = _uniform_below(bitgen, 2 * top - 1, rows * cols).astype(np.int64) - (top - 1)
        return SignedMatrix(vals.reshape(rows, cols), digits)
    vals = _uniform_below(bitgen, top, rows * cols).astype(np.int64)
    return IntMatrix(vals.reshape(rows, cols), digits)
