"""Tschirnhaus hypersurfaces b_1, ..., b_m for a specialised general polynomial.

With M the companion matrix of p and W(w) = sum_j w_j M^j, all powers of M
commute, so

    trace(W^k) = sum_{|alpha| = k} k!/alpha! * w^alpha * s_{sum_j j*alpha_j}

where s_e = trace(M^e) is the e-th power sum of the roots of p.  Newton's
identities turn these traces into the elementary symmetric functions e_m
of the eigenvalues of W, and b_m = (-1)^m e_m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .poly import FieldTag, HPoly, coerce, compositions, evaluate, render, residual_ok


class SizeGuardExceeded(ValueError):
    pass


class ExcludedLocus(ValueError):
    pass


@dataclass(frozen=True)
class GeneralPoly:
    """Monic z^n + a_1 z^(n-1) + ... + a_n."""

    n: int
    a: tuple
    field: FieldTag = FieldTag.EXACT

    def __post_init__(self):
        if len(self.a) != self.n:
            raise ValueError(f"need {self.n} coefficients, got {len(self.a)}")
        object.__setattr__(self, "a", tuple(coerce(x, self.field) for x in self.a))

    def coefficients(self) -> list:
        """Full coefficient list, leading 1 first."""
        return [coerce(1, self.field)] + list(self.a)

    def roots(self) -> np.ndarray:
        return np.roots(np.array([complex(c) for c in self.coefficients()]))


def random_general_poly(n: int, seed: int, field=FieldTag.EXACT, scale: int = 2) -> GeneralPoly:
    """Seeded coefficients; rationals p/q with |p/q| <= 1/2 keep the roots near the unit circle."""
    rng = np.random.default_rng(seed)
    if FieldTag(field) is FieldTag.EXACT:
        a = [Fraction(int(rng.integers(-8, 9)), 8 * scale) for _ in range(n)]
    else:
        a = [complex(rng.normal(), rng.normal()) / (2 * scale) for _ in range(n)]
    return GeneralPoly(n, tuple(a), FieldTag(field))


def companion_matrix(p: GeneralPoly) -> list:
    n = p.n
    if n < 2:
        raise ValueError("companion matrix needs n >= 2")
    zero, one = coerce(0, p.field), coerce(1, p.field)
    M = [[zero] * n for _ in range(n)]
    for i in range(1, n):
        M[i][i - 1] = one
    for i in range(n):
        M[i][n - 1] = -p.a[n - 1 - i]
    return M


def power_sums(p: GeneralPoly, upto: int) -> list:
    """s_0..s_upto of the roots, via Newton's identities on the coefficients."""
    n, a = p.n, p.a
    s = [coerce(n, p.field)]
    for e in range(1, upto + 1):
        acc = coerce(0, p.field)
        for i in range(1, min(e - 1, n) + 1):
            acc += a[i - 1] * s[e - i]
        if e <= n:
            acc += e * a[e - 1]
        s.append(-acc)
    return s


@dataclass(frozen=True)
class TschirnhausSystem:
    n: int
    b: tuple  # b[0] is b_1
    poly: GeneralPoly
    seed: int | None = None

    @property
    def m_max(self) -> int:
        return len(self.b)

    def __getitem__(self, m: int) -> HPoly:
        return self.b[m - 1]

    def to_json(self) -> dict:
        return {
            "n": str(self.n),
            "m_max": str(self.m_max),
            "seed": None if self.seed is None else str(self.seed),
            "field": self.poly.field.value,
            "coefficients": [str(c) if not isinstance(c, complex) else repr(c) for c in self.poly.a],
            "b": [render(f) for f in self.b],
        }


def _power_trace(n: int, k: int, s: list, field) -> HPoly:
    terms = {}
    kf = math.factorial(k)
    for alpha in compositions(k, n):
        mult = kf
        e = 0
        for j, aj in enumerate(alpha):
            if aj:
                mult //= math.factorial(aj)
                e += j * aj
        terms[alpha] = mult * s[e]
    return HPoly(n, k, terms, field)


def build_tschirnhaus(p: GeneralPoly, m_max: int, allow_large: bool = False, seed=None) -> TschirnhausSystem:
    n = p.n
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    if not allow_large and not 2 <= m_max <= min(n, 4):
        raise SizeGuardExceeded(f"m_max={m_max} outside 2..min(n, 4)={min(n, 4)}; pass allow_large")
    if m_max > n:
        raise SizeGuardExceeded("m_max cannot exceed n")
    s = power_sums(p, m_max * (n - 1))
    traces = [None] + [_power_trace(n, k, s, p.field) for k in range(1, m_max + 1)]
    e = [HPoly.constant(n, 1, p.field)]
    for m in range(1, m_max + 1):
        acc = HPoly.zero(n, m, p.field)
        for i in range(1, m + 1):
            term = e[m - i] * traces[i]
            acc = acc + (term if i % 2 == 1 else -term)
        e.append(acc.scale(Fraction(1, m) if p.field is FieldTag.EXACT else 1.0 / m))
    b = tuple(e[m] if m % 2 == 0 else -e[m] for m in range(1, m_max + 1))
    return TschirnhausSystem(n, b, p, seed)


def transformed_matrix(p: GeneralPoly, w: Sequence) -> np.ndarray:
    M = np.array([[complex(x) for x in row] for row in companion_matrix(p)])
    W = np.zeros_like(M)
    Mj = np.eye(p.n, dtype=complex)
    for wj in w:
        W = W + complex(wj) * Mj
        Mj = Mj @ M
    return W


def transformed_coefficients(p: GeneralPoly, w: Sequence) -> np.ndarray:
    """Coefficients (leading 1 first) of the characteristic polynomial of W(w)."""
    return np.poly(transformed_matrix(p, w))


def tau_point_check(system: TschirnhausSystem, w: Sequence, tol: float = 1e-9, cross_tol: float = 1e-6) -> bool:
    vals = list(w)
    if len(vals) != system.n:
        raise ValueError("w has the wrong length")
    mags = [abs(complex(x)) for x in vals]
    if max(mags) == 0:
        raise ExcludedLocus("w = 0 is not a projective point")
    if max(mags[1:], default=0) <= 1e-14 * mags[0]:
        raise ExcludedLocus("w lies on the excluded point [1:0:...:0]")
    ok = all(residual_ok(f, vals, tol) for f in system.b)
    if ok:
        coeffs = transformed_coefficients(system.poly, vals)
        scale = max(1.0, float(np.max(np.abs(coeffs))))
        if np.max(np.abs(coeffs[1:system.m_max + 1])) > cross_tol * scale:
            return False
    return ok


__all__ = [
    "GeneralPoly", "TschirnhausSystem", "random_general_poly", "companion_matrix", "power_sums",
    "build_tschirnhaus", "tau_point_check", "transformed_coefficients", "transformed_matrix",
    "SizeGuardExceeded", "ExcludedLocus", "evaluate",
]
