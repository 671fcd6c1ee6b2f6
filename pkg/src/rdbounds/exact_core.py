"""Exact integer/rational kernels and a small interval-backed real type.

Naturals are plain Python ints and rationals are ``fractions.Fraction``;
both are arbitrary precision and immutable, which is all the bounds code
needs.  ``HighPrecisionReal`` wraps an mpmath interval so transcendental
comparisons either come out certain or raise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC

from mpmath import libmp, mp, mpf
from mpmath.ctx_iv import MPIntervalContext

DEFAULT_PRECISION = 256


class UndecidableComparison(ArithmeticError):
    """Raised when an interval comparison cannot be settled at the current precision."""


def _check_natural(name, x):
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {x!r}")


def binom(n: int, k: int) -> int:
    _check_natural("n", n)
    _check_natural("k", k)
    return math.comb(n, k)


def ceil_div(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError("ceil_div by zero")
    return -(-a // b)


def factorial_ratio(a: int, b: int) -> int:
    """a!/b! as the falling product (b+1)(b+2)...a."""
    _check_natural("a", a)
    _check_natural("b", b)
    if a < b:
        raise ValueError(f"factorial_ratio needs a >= b, got a={a}, b={b}")
    return math.prod(range(b + 1, a + 1))


def checked_sub(a: int, b: int) -> int:
    """Natural subtraction; refuses to go negative."""
    if b > a:
        raise ValueError(f"natural subtraction underflow: {a} - {b}")
    return a - b


def round_rational(x: Fraction, places: int = 3) -> str:
    """Decimal string of ``x`` rounded half-to-even at ``places`` digits."""
    x = Fraction(x)
    scale = 10 ** places
    num, den = x.numerator * scale, x.denominator
    q, rem = divmod(abs(num), den)
    if 2 * rem > den or (2 * rem == den and q % 2 == 1):
        q += 1
    sign = "-" if num < 0 and q != 0 else ""
    whole, frac = divmod(q, scale)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"


def rank_exact(rows) -> int:
    """Rank of a matrix of rationals by fraction-exact Gaussian elimination."""
    m = [[Fraction(v) for v in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, len(m)):
            f = m[i][col] / p
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


@lru_cache(maxsize=None)
def _ctx(prec: int) -> MPIntervalContext:
    c = MPIntervalContext()
    c.prec = prec
    return c


@dataclass(frozen=True)
class HighPrecisionReal:
    """A real number known to lie in a closed interval.

    Arithmetic is outward-rounded.  ``<``/``<=`` and friends return a bool
    when the answer is certain and raise ``UndecidableComparison`` otherwise.
    """

    iv: object
    prec: int = DEFAULT_PRECISION

    @classmethod
    def of(cls, x, prec: int = DEFAULT_PRECISION) -> "HighPrecisionReal":
        if isinstance(x, HighPrecisionReal):
            return x if x.prec == prec else cls(_ctx(prec).mpf([x.lower, x.upper]), prec)
        c = _ctx(prec)
        if isinstance(x, int):
            return cls(c.mpf(x), prec)
        if isinstance(x, _RationalABC):
            return cls(c.mpf(x.numerator) / c.mpf(x.denominator), prec)
        if isinstance(x, float):
            return cls(c.mpf(x), prec)
        raise TypeError(f"cannot lift {type(x).__name__} to HighPrecisionReal")

    @classmethod
    def pi(cls, prec: int = DEFAULT_PRECISION) -> "HighPrecisionReal":
        return cls(_ctx(prec).pi, prec)

    @property
    def lower(self):
        with mp.workprec(self.prec):
            return +mpf(self.iv._mpi_[0])

    @property
    def upper(self):
        with mp.workprec(self.prec):
            return +mpf(self.iv._mpi_[1])

    @property
    def value(self):
        with mp.workprec(self.prec + 2):
            return (self.lower + self.upper) / 2

    @property
    def error_radius(self):
        with mp.workprec(self.prec + 2):
            return (self.upper - self.lower) / 2

    def __float__(self):
        return float(self.value)

    def _lift(self, other):
        if isinstance(other, HighPrecisionReal):
            return other.iv
        return HighPrecisionReal.of(other, self.prec).iv

    def _new(self, iv):
        return HighPrecisionReal(iv, self.prec)

    def __add__(self, o):
        return self._new(self.iv + self._lift(o))

    __radd__ = __add__

    def __sub__(self, o):
        return self._new(self.iv - self._lift(o))

    def __rsub__(self, o):
        return self._new(self._lift(o) - self.iv)

    def __mul__(self, o):
        return self._new(self.iv * self._lift(o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self._new(self.iv / self._lift(o))

    def __rtruediv__(self, o):
        return self._new(self._lift(o) / self.iv)

    def __neg__(self):
        return self._new(-self.iv)

    def log(self):
        return self._new(_ctx(self.prec).log(self.iv))

    def exp(self):
        return self._new(_ctx(self.prec).exp(self.iv))

    def sqrt(self):
        return self._new(_ctx(self.prec).sqrt(self.iv))

    def _cmp(self, o):
        (alo, ahi), (blo, bhi) = self.iv._mpi_, self._lift(o)._mpi_
        if libmp.mpf_lt(ahi, blo):
            return -1
        if libmp.mpf_gt(alo, bhi):
            return 1
        if alo == ahi == blo == bhi:
            return 0
        raise UndecidableComparison(
            f"intervals overlap at {self.prec} bits: "
            f"[{mpf(alo)}, {mpf(ahi)}] vs [{mpf(blo)}, {mpf(bhi)}]"
        )

    def __lt__(self, o):
        return self._cmp(o) < 0

    def __le__(self, o):
        return self._cmp(o) <= 0

    def __gt__(self, o):
        return self._cmp(o) > 0

    def __ge__(self, o):
        return self._cmp(o) >= 0

    def __repr__(self):
        return f"HighPrecisionReal({float(self)!r} ± {float(self.error_radius):.2e})"


def hp_log(x, prec: int = DEFAULT_PRECISION) -> HighPrecisionReal:
    return HighPrecisionReal.of(x, prec).log()
