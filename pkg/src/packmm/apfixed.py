"""Arbitrary-precision decimal fixed-point numbers.

A :class:`PackedNumber` is a pair ``(S, W)`` with value ``S + W / Q`` where
``Q = 10**f`` and ``0 <= W < Q``.  Every binary operation requires both
operands to carry the same ``f``; rescaling is always explicit.

The digit strings are held by :class:`BigUint`, an unsigned integer that
exposes a little-endian radix ``10**9`` limb view.  Arithmetic is delegated
to GMP, so multiplying or slicing by powers of ten costs one exact integer
operation rather than a Python-level loop over limbs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable

import gmpy2
import numpy as np
from gmpy2 import mpz

LIMB_DIGITS = 9
LIMB_RADIX = 10**LIMB_DIGITS

_NUMBER_RE = re.compile(r"^\s*\+?(\d+)(?:\.(\d*))?\s*$")


class ScaleMismatchError(ValueError):
    """Operands carry different scales; rescale one of them first."""


@lru_cache(maxsize=4096)
def pow10(k: int) -> mpz:
    if k < 0:
        raise ValueError("negative power of ten")
    return mpz(10) ** k


def decimal_digits(n) -> int:
    """Number of decimal digits of a nonnegative integer (``0`` has one)."""
    n = mpz(n)
    if n < 0:
        raise ValueError("decimal_digits expects a nonnegative integer")
    if n == 0:
        return 1
    # num_digits may overshoot by one
    k = gmpy2.num_digits(n, 10)
    return k - 1 if n < pow10(k - 1) else k


@total_ordering
class BigUint:
    """Immutable unsigned integer with a canonical decimal-limb view.

    Zero is canonically represented by the empty limb sequence.
    """

    __slots__ = ("_v",)

    def __init__(self, value=0):
        if isinstance(value, BigUint):
            v = value._v
        else:
            if isinstance(value, (float, Fraction)) or not hasattr(value, "__index__"):
                raise TypeError(f"BigUint requires an integer, got {type(value).__name__}")
            v = mpz(value)
        if v < 0:
            raise ValueError(f"BigUint requires a nonnegative value, got {v}")
        object.__setattr__(self, "_v", v)

    def __setattr__(self, name, value):
        raise AttributeError("BigUint is immutable")

    @classmethod
    def from_limbs(cls, limbs: Iterable[int]) -> BigUint:
        limbs = tuple(int(x) for x in limbs)
        if limbs and limbs[-1] == 0:
            raise ValueError("non-canonical limbs: most significant limb is zero")
        v = mpz(0)
        for limb in reversed(limbs):
            if not 0 <= limb < LIMB_RADIX:
                raise ValueError(f"limb {limb} outside [0, 10**{LIMB_DIGITS})")
            v = v * LIMB_RADIX + limb
        return cls(v)

    @property
    def limbs(self) -> tuple[int, ...]:
        out = []
        v = self._v
        while v:
            v, r = gmpy2.f_divmod(v, LIMB_RADIX)
            out.append(int(r))
        return tuple(out)

    @property
    def value(self) -> mpz:
        return self._v

    def digit_count(self) -> int:
        return decimal_digits(self._v)

    def __int__(self) -> int:
        return int(self._v)

    __index__ = __int__

    def __bool__(self) -> bool:
        return bool(self._v)

    def __hash__(self) -> int:
        return hash(int(self._v))

    def __eq__(self, other) -> bool:
        if isinstance(other, BigUint):
            return self._v == other._v
        if isinstance(other, int) or type(other) is type(self._v):
            return self._v == other
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, BigUint):
            return self._v < other._v
        if isinstance(other, int):
            return self._v < other
        return NotImplemented

    def __add__(self, other) -> BigUint:
        return BigUint(self._v + BigUint(other)._v)

    __radd__ = __add__

    def __mul__(self, other) -> BigUint:
        return BigUint(self._v * BigUint(other)._v)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return self._v.digits(10)

    def __repr__(self) -> str:
        return f"BigUint({self})"


def _as_biguint(x) -> BigUint:
    return x if isinstance(x, BigUint) else BigUint(x)


@dataclass(frozen=True)
class PackedNumber:
    """Nonnegative fixed-point number ``s + w / 10**f``."""

    s: BigUint
    w: BigUint
    f: int

    def __post_init__(self):
        object.__setattr__(self, "s", _as_biguint(self.s))
        object.__setattr__(self, "w", _as_biguint(self.w))
        if not isinstance(self.f, int) or self.f < 0:
            raise ValueError(f"scale exponent must be a nonnegative int, got {self.f!r}")
        if self.w.value >= pow10(self.f):
            raise ValueError(f"fractional numerator {self.w} not below 10**{self.f}")

    @classmethod
    def from_scaled(cls, z, f: int) -> PackedNumber:
        """Build from the scaled integer ``S*Q + W``."""
        s, w = gmpy2.f_divmod(mpz(z), pow10(f))
        return cls(BigUint(s), BigUint(w), f)

    @classmethod
    def from_int(cls, n, f: int = 0) -> PackedNumber:
        return cls(BigUint(n), BigUint(0), f)

    @classmethod
    def parse(cls, text: str, f: int | None = None) -> PackedNumber:
        """Parse ``"123.0045"``; ``f`` defaults to the number of fractional digits given."""
        m = _NUMBER_RE.match(text)
        if not m:
            raise ValueError(f"not a nonnegative decimal number: {text!r}")
        int_part, frac = m.group(1), m.group(2) or ""
        if f is None:
            f = len(frac)
        elif len(frac) > f:
            # dropping digits would be a silent rounding
            if frac[f:].strip("0"):
                raise ValueError(f"{text!r} has more than {f} fractional digits")
            frac = frac[:f]
        w = int(frac.ljust(f, "0")) if f else 0
        return cls(BigUint(int(int_part)), BigUint(w), f)

    @property
    def scaled(self) -> mpz:
        return self.s.value * pow10(self.f) + self.w.value

    def digit_count(self) -> int:
        """Digits stored: those of ``s`` plus the ``f`` fractional ones."""
        return self.s.digit_count() + self.f

    def as_fraction(self) -> Fraction:
        return Fraction(int(self.scaled), 10**self.f)

    def rescale(self, f: int) -> PackedNumber:
        """Change the scale; lowering it truncates digits below the new ``1/Q``."""
        if f >= self.f:
            return PackedNumber.from_scaled(self.scaled * pow10(f - self.f), f)
        return PackedNumber.from_scaled(self.scaled // pow10(self.f - f), f)

    def __str__(self) -> str:
        if self.f == 0:
            return str(self.s)
        return f"{self.s}.{self.w.value.digits(10).rjust(self.f, '0')}"

    def __add__(self, other: PackedNumber) -> PackedNumber:
        return add(self, other)

    def __mul__(self, other: PackedNumber) -> PackedNumber:
        return mul(self, other)

    def __mod__(self, other: PackedNumber) -> PackedNumber:
        return mod_general(self, other)

    def __floor__(self) -> BigUint:
        return floor(self)


def _check_scale(x: PackedNumber, y: PackedNumber) -> None:
    if x.f != y.f:
        raise ScaleMismatchError(f"scale mismatch: f={x.f} vs f={y.f}")


def add(x: PackedNumber, y: PackedNumber) -> PackedNumber:
    _check_scale(x, y)
    carry, w = gmpy2.f_divmod(x.w.value + y.w.value, pow10(x.f))
    return PackedNumber(BigUint(x.s.value + y.s.value + carry), BigUint(w), x.f)


def mul(x: PackedNumber, y: PackedNumber) -> PackedNumber:
    """Product truncated to the common ``1/Q`` grid."""
    _check_scale(x, y)
    q = pow10(x.f)
    z = (x.scaled * y.scaled) // q
    s, w = gmpy2.f_divmod(z, q)
    return PackedNumber(BigUint(s), BigUint(w), x.f)


def floor(x: PackedNumber) -> BigUint:
    return x.s


def mod_pow10(x: BigUint, e: int) -> BigUint:
    """``x mod 10**e``: keep the low ``e`` decimal digits."""
    return BigUint(gmpy2.f_mod(_as_biguint(x).value, pow10(e)))


def mod_general(x: PackedNumber, y: PackedNumber) -> PackedNumber:
    _check_scale(x, y)
    divisor = y.scaled
    if divisor == 0:
        raise ZeroDivisionError("PackedNumber modulo by zero")
    return PackedNumber.from_scaled(gmpy2.f_mod(x.scaled, divisor), x.f)


def shift_pow10(x: PackedNumber, k: int) -> PackedNumber:
    """Multiply by ``10**k``; digits pushed below ``1/Q`` are dropped."""
    if k >= 0:
        return PackedNumber.from_scaled(x.scaled * pow10(k), x.f)
    return PackedNumber.from_scaled(x.scaled // pow10(-k), x.f)


_to_mpz = np.frompyfunc(mpz, 1, 1)
_divexact_ufunc = np.frompyfunc(gmpy2.divexact, 2, 1)


def _divexact(data: np.ndarray, q: mpz) -> np.ndarray:
    return np.asarray(_divexact_ufunc(data, q), dtype=object)
_to_int = np.frompyfunc(int, 1, 1)


def mpz_array(values) -> np.ndarray:
    """Object array of ``mpz`` built from any integer array-like."""
    arr = np.asarray(values, dtype=object)
    return np.asarray(_to_mpz(arr), dtype=object)


def int_array(values) -> np.ndarray:
    return np.asarray(_to_int(np.asarray(values, dtype=object)), dtype=object)


class PackedArray:
    """N-d array of PackedNumbers sharing one scale ``f``.

    Entries are stored as scaled integers ``S*Q + W``; each method is the
    elementwise counterpart of the scalar operation of the same name.
    ``integral`` records that every ``W`` is known to be zero, which lets a
    product skip the truncating division (it is exact).
    """

    __slots__ = ("data", "f", "integral")

    def __init__(self, data: np.ndarray, f: int, integral: bool = False):
        if f < 0:
            raise ValueError("scale exponent must be nonnegative")
        self.data = data
        self.f = f
        self.integral = integral or f == 0

    @classmethod
    def from_ints(cls, values, f: int, exponents=None) -> PackedArray:
        """Entries ``values * 10**exponents`` at scale ``f``.

        ``exponents`` (broadcastable, default 0) may be negative down to ``-f``,
        so the result is always exact.
        """
        arr = mpz_array(values)
        if arr.size and arr.min() < 0:
            raise ValueError("PackedArray entries must be nonnegative")
        if exponents is None:
            return cls(arr * pow10(f) if f else arr, f, integral=True)
        ks = np.asarray(exponents) + f
        if ks.min() < 0:
            raise ValueError("exponent below -f would lose digits")
        return cls(arr * _pow10_array(ks), f, integral=bool(np.asarray(exponents).min() >= 0))

    @classmethod
    def from_numbers(cls, numbers) -> PackedArray:
        nums = np.asarray(numbers, dtype=object)
        scales = {x.f for x in nums.flat}
        if len(scales) > 1:
            raise ScaleMismatchError(f"mixed scales {sorted(scales)}")
        f = scales.pop() if scales else 0
        data = np.empty(nums.shape, dtype=object)
        for idx, x in np.ndenumerate(nums):
            data[idx] = x.scaled
        return cls(data, f, integral=all(x.w == 0 for x in nums.flat))

    def to_numbers(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        for idx, z in np.ndenumerate(self.data):
            out[idx] = PackedNumber.from_scaled(z, self.f)
        return out

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return self.data.size

    def __getitem__(self, key) -> PackedArray:
        return PackedArray(self.data[key], self.f, self.integral)

    def reshape(self, *shape) -> PackedArray:
        return PackedArray(self.data.reshape(*shape), self.f, self.integral)

    @staticmethod
    def concatenate(arrays: list[PackedArray], axis: int = 0) -> PackedArray:
        return _join(np.concatenate, arrays, axis)

    @staticmethod
    def stack(arrays: list[PackedArray], axis: int = 0) -> PackedArray:
        return _join(np.stack, arrays, axis)

    def _check(self, other: PackedArray) -> None:
        if self.f != other.f:
            raise ScaleMismatchError(f"scale mismatch: f={self.f} vs f={other.f}")

    def __add__(self, other: PackedArray) -> PackedArray:
        self._check(other)
        return PackedArray(self.data + other.data, self.f, self.integral and other.integral)

    def _product(self, other: PackedArray, prod) -> PackedArray:
        q = pow10(self.f)
        if other.integral:
            # (S1 Q + W1)(S2 Q) / Q is exact
            return PackedArray(prod(self.data, _divexact(other.data, q)), self.f, self.integral)
        if self.integral:
            return PackedArray(prod(_divexact(self.data, q), other.data), self.f, other.integral)
        return PackedArray(prod(self.data, other.data) // q, self.f)

    def __mul__(self, other: PackedArray) -> PackedArray:
        self._check(other)
        return self._product(other, np.multiply)

    def outer(self, other: PackedArray) -> PackedArray:
        """Rank-1 product of two 1-d arrays, truncated like :func:`mul`."""
        self._check(other)
        return self._product(other, np.multiply.outer)

    def sum(self, axis: int) -> PackedArray:
        return PackedArray(self.data.sum(axis=axis), self.f, self.integral)

    def shift(self, k) -> PackedArray:
        """Multiply by ``10**k``; ``k`` may be an int or an integer array broadcastable to the shape."""
        return self.rescale(self.f, k)

    def rescale(self, f: int, shift=0) -> PackedArray:
        """Move to scale ``f`` and multiply by ``10**shift`` in one step.

        Digits that fall below the new ``1/Q`` are truncated.
        """
        if isinstance(shift, int):
            k = shift + f - self.f
            integral = self.integral and shift >= 0
            if k == 0:
                return PackedArray(self.data, f, integral)
            if k > 0:
                return PackedArray(self.data * pow10(k), f, integral)
            return PackedArray(self.data // pow10(-k), f, integral)
        ks = np.asarray(shift) + (f - self.f)
        up = bool(np.asarray(shift).min() >= 0)
        integral = self.integral and up
        if ks.ndim == 0:
            k = int(ks)
            if k == 0:
                return PackedArray(self.data, f, integral)
            if k > 0:
                return PackedArray(self.data * pow10(k), f, integral)
            return PackedArray(self.data // pow10(-k), f, integral)
        if ks.min() >= 0:
            return PackedArray(self.data * _pow10_array(ks), f, integral)
        if ks.max() <= 0:
            return PackedArray(self.data // _pow10_array(-ks), f, integral)
        ks = np.broadcast_to(ks, self.shape)
        out = np.empty(self.shape, dtype=object)
        for idx, z in np.ndenumerate(self.data):
            kk = int(ks[idx])
            out[idx] = z * pow10(kk) if kk >= 0 else z // pow10(-kk)
        return PackedArray(out, f, integral)

    def floor(self) -> np.ndarray:
        """Integer parts as an object array of ``mpz``."""
        if self.f == 0:
            return self.data.copy()
        return self.data // pow10(self.f)

    def max_digit_count(self) -> int:
        """Largest :meth:`PackedNumber.digit_count` over the entries."""
        if not self.size:
            return 0
        return decimal_digits(self.data.max() // pow10(self.f)) + self.f


def _join(fn, arrays: list[PackedArray], axis: int) -> PackedArray:
    scales = {x.f for x in arrays}
    if len(scales) != 1:
        raise ScaleMismatchError(f"cannot join arrays with scales {sorted(scales)}")
    return PackedArray(fn([x.data for x in arrays], axis=axis), scales.pop(), all(x.integral for x in arrays))


def _pow10_array(ks: np.ndarray) -> np.ndarray:
    out = np.empty(ks.shape, dtype=object)
    for idx, k in np.ndenumerate(ks):
        out[idx] = pow10(int(k))
    return out


def mod_pow10_array(values: np.ndarray, e: int) -> np.ndarray:
    return values % pow10(e)
