"""Sparse homogeneous polynomials over Q (exact) or C (double precision)."""
from __future__ import annotations

import math
import re
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exact_core import rank_exact


class FieldTag(str, Enum):
    EXACT = "ExactRational"
    COMPLEX = "ComplexDouble"


class FieldMismatch(TypeError):
    pass


class NormalizationError(ValueError):
    pass


class DependentPoints(ValueError):
    pass


DEFAULT_TOL = 1e-9
SPAN_SV_TOL = 1e-7


def coerce(x, field: FieldTag):
    if field is FieldTag.EXACT:
        if isinstance(x, (complex, float, np.floating, np.complexfloating)):
            raise FieldMismatch(f"{x!r} is not an exact rational")
        return Fraction(x)
    if isinstance(x, Fraction):
        return complex(x.numerator / x.denominator)
    return complex(x)


def _field_of(values) -> FieldTag:
    for v in values:
        if isinstance(v, (complex, float, np.floating, np.complexfloating)):
            return FieldTag.COMPLEX
    return FieldTag.EXACT


def compositions(total: int, parts: int):
    """All exponent vectors of length ``parts`` summing to ``total`` (lex descending)."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _sub_exponents(a: tuple, order: int):
    """Exponent vectors i <= a componentwise with |i| = order."""
    n = len(a)

    def rec(j, left):
        if j == n - 1:
            if left <= a[j]:
                yield (left,)
            return
        tail_cap = sum(a[j + 1:])
        for v in range(min(a[j], left), max(0, left - tail_cap) - 1, -1):
            for rest in rec(j + 1, left - v):
                yield (v,) + rest

    if order > sum(a):
        return
    yield from rec(0, order)


class HPoly:
    """Homogeneous polynomial in x_0..x_{nvars-1} of a fixed degree.

    Immutable by convention: every operation returns a new object.  Terms
    iterate in graded-lex order (x_0 heaviest).
    """

    __slots__ = ("nvars", "degree", "field", "_terms", "_numeric")

    def __init__(self, nvars: int, degree: int, terms=None, field: FieldTag = FieldTag.EXACT, _trusted=False):
        self.nvars = nvars
        self.degree = degree
        self.field = FieldTag(field)
        self._numeric = None
        if _trusted:
            self._terms = terms
            return
        clean = {}
        for exp, c in dict(terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} has wrong length for {nvars} variables")
            if sum(exp) != degree or min(exp, default=0) < 0:
                raise ValueError(f"exponent {exp} is not of degree {degree}")
            c = coerce(c, self.field)
            if c != 0:
                clean[exp] = clean.get(exp, 0) + c
                if clean[exp] == 0:
                    del clean[exp]
        self._terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars, degree, field=FieldTag.EXACT):
        return cls(nvars, degree, {}, field, _trusted=True)

    @classmethod
    def constant(cls, nvars, c, field=FieldTag.EXACT):
        return cls(nvars, 0, {(0,) * nvars: c}, field)

    @classmethod
    def variable(cls, nvars, j, field=FieldTag.EXACT):
        e = [0] * nvars
        e[j] = 1
        return cls(nvars, 1, {tuple(e): 1}, field)

    @classmethod
    def linear(cls, coeffs: Sequence, field=None):
        field = field or _field_of(coeffs)
        n = len(coeffs)
        return cls(n, 1, {tuple(int(i == j) for i in range(n)): c for j, c in enumerate(coeffs)}, field)

    # -- basic protocol ----------------------------------------------------
    def terms(self):
        """(exponent, coefficient) pairs in canonical graded-lex order."""
        return sorted(self._terms.items(), reverse=True)

    def coeff(self, exp) -> object:
        return self._terms.get(tuple(exp), 0)

    def __len__(self):
        return len(self._terms)

    def is_zero(self, tol: float | None = None) -> bool:
        if self.field is FieldTag.EXACT or tol is None:
            return not self._terms
        return all(abs(c) <= tol for c in self._terms.values())

    def norm1(self) -> float:
        return float(sum(abs(c) for c in self._terms.values()))

    def __eq__(self, other):
        if not isinstance(other, HPoly):
            return NotImplemented
        return (self.nvars, self.degree, self.field, self._terms) == (
            other.nvars, other.degree, other.field, other._terms)

    def __hash__(self):
        return hash((self.nvars, self.degree, self.field, tuple(self.terms())))

    def __repr__(self):
        return f"HPoly({render(self)!r}, nvars={self.nvars}, degree={self.degree})"

    def to_field(self, field: FieldTag) -> "HPoly":
        field = FieldTag(field)
        if field is self.field:
            return self
        return HPoly(self.nvars, self.degree, self._terms, field)

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "HPoly"):
        if self.field is not other.field:
            raise FieldMismatch(f"{self.field.value} vs {other.field.value}")
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other: "HPoly") -> "HPoly":
        self._check(other)
        if other.degree != self.degree:
            if not other._terms:
                return self
            if not self._terms:
                return other
            raise ValueError("cannot add homogeneous polynomials of different degree")
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return HPoly(self.nvars, self.degree, out, self.field, _trusted=True)

    def __neg__(self):
        return HPoly(self.nvars, self.degree, {e: -c for e, c in self._terms.items()}, self.field, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HPoly":
        c = coerce(c, self.field)
        if c == 0:
            return HPoly.zero(self.nvars, self.degree, self.field)
        return HPoly(self.nvars, self.degree, {e: v * c for e, v in self._terms.items()}, self.field, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, HPoly):
            return self.scale(other)
        self._check(other)
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        out = {e: c for e, c in out.items() if c != 0}
        return HPoly(self.nvars, self.degree + other.degree, out, self.field, _trusted=True)

    def __rmul__(self, c):
        return self.scale(c)

    def __pow__(self, n: int):
        out = HPoly.constant(self.nvars, 1, self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # -- calculus ----------------------------------------------------------
    def partial(self, j: int) -> "HPoly":
        if not 0 <= j < self.nvars:
            raise IndexError(f"variable index {j} out of range 0..{self.nvars - 1}")
        out = {}
        for e, c in self._terms.items():
            if e[j]:
                ne = e[:j] + (e[j] - 1,) + e[j + 1:]
                out[ne] = c * e[j]
        return HPoly(self.nvars, max(self.degree - 1, 0), out, self.field, _trusted=True)

    def evaluate(self, v: Sequence):
        return evaluate(self, v)

    def numeric(self):
        """(exponent matrix, complex coefficient vector) for vectorised evaluation."""
        if self._numeric is None:
            items = self.terms()
            E = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), self.nvars)
            c = np.array([coerce(c, FieldTag.COMPLEX) for _, c in items], dtype=complex)
            self._numeric = (E, c)
        return self._numeric


def evaluate(f: HPoly, v: Sequence):
    if len(v) != f.nvars:
        raise ValueError(f"point has {len(v)} coordinates, polynomial has {f.nvars} variables")
    if f.field is FieldTag.EXACT:
        v = [coerce(x, FieldTag.EXACT) for x in v]
        total = Fraction(0)
        for e, c in f._terms.items():
            t = c
            for x, a in zip(v, e):
                if a:
                    t *= x ** a
            total += t
        return total
    if not f._terms:
        return 0j
    E, c = f.numeric()
    x = np.asarray([coerce(t, FieldTag.COMPLEX) for t in v], dtype=complex)
    return complex(np.prod(x[None, :] ** E, axis=1) @ c)


def residual_ok(f: HPoly, v: Sequence, tol: float = DEFAULT_TOL) -> bool:
    """Scale-aware zero test |f(v)| <= tol * (1 + |f|_1 |v|_inf^d)."""
    inexact = any(isinstance(x, (complex, float, np.complexfloating, np.floating)) for x in v)
    if f.field is FieldTag.EXACT and not inexact:
        return evaluate(f, v) == 0
    val = evaluate(f.to_field(FieldTag.COMPLEX), v)
    vmax = max((abs(complex(x)) for x in v), default=0.0)
    return abs(val) <= tol * (1 + f.norm1() * vmax ** f.degree)


def scaled_residual(f: HPoly, v: Sequence) -> float:
    val = evaluate(f.to_field(FieldTag.COMPLEX), v)
    vmax = max((abs(complex(x)) for x in v), default=0.0)
    return abs(val) / (1 + f.norm1() * vmax ** f.degree)


# -- projective points ---------------------------------------------------------


class PPoint:
    """Projective point with a normalised coordinate vector.

    Exact points have first nonzero coordinate 1.  Complex points are scaled
    so the largest-modulus coordinate is 1, which keeps them well conditioned.
    """

    __slots__ = ("coords", "field")

    def __init__(self, coords: Iterable, field: FieldTag | None = None):
        coords = list(coords)
        field = FieldTag(field) if field else _field_of(coords)
        vals = [coerce(c, field) for c in coords]
        if field is FieldTag.EXACT:
            piv = next((c for c in vals if c != 0), None)
        else:
            mags = [abs(c) for c in vals]
            top = max(mags, default=0.0)
            piv = vals[mags.index(top)] if top > 0 else None
        if piv is None:
            raise NormalizationError("the zero vector is not a projective point")
        self.coords = tuple(c / piv for c in vals)
        self.field = field

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __eq__(self, other):
        return isinstance(other, PPoint) and self.field is other.field and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        inner = ":".join(str(c) for c in self.coords)
        return f"PPoint[{inner}]"

    def affine(self) -> tuple:
        """Representative with first coordinate exactly 1."""
        c0 = self.coords[0]
        if (c0 == 0) if self.field is FieldTag.EXACT else abs(c0) < 1e-300:
            raise NormalizationError("point lies on x_0 = 0, no affine representative")
        return tuple(c / c0 for c in self.coords)

    def to_field(self, field) -> "PPoint":
        return PPoint(self.coords, field)

    def array(self) -> np.ndarray:
        return np.array([coerce(c, FieldTag.COMPLEX) for c in self.coords], dtype=complex)


# -- polars ------------------------------------------------------------------


def polar(f: HPoly, P, k: int) -> HPoly:
    """t(k, f, P): sum over |i| = d-k of (d-k)!/i! * (d^i f)(P) * y^i.

    For a term c x^a, (d^i x^a)(P) = a!/(a-i)! P^(a-i), so the weight is
    (d-k)! * prod binom(a_j, i_j) * P^(a-i).
    """
    d = f.degree
    if not 0 <= k <= d:
        raise ValueError(f"polar order k={k} outside 0..{d}")
    p = list(P.coords) if isinstance(P, PPoint) else [coerce(x, f.field) for x in P]
    if len(p) != f.nvars:
        raise ValueError("point dimension mismatch")
    if f.field is FieldTag.EXACT:
        p = [coerce(x, FieldTag.EXACT) for x in p]
    else:
        p = [coerce(x, FieldTag.COMPLEX) for x in p]
    order = d - k
    lead = math.factorial(order)
    out = {}
    for a, c in f._terms.items():
        for i in _sub_exponents(a, order):
            w = c * lead
            for aj, ij, pj in zip(a, i, p):
                if ij:
                    w *= math.comb(aj, ij)
                if aj - ij:
                    w *= pj ** (aj - ij)
            if w != 0:
                out[i] = out.get(i, 0) + w
    out = {e: c for e, c in out.items() if c != 0}
    return HPoly(f.nvars, order, out, f.field, _trusted=True)


def technical_identity_check(f: HPoly, P: PPoint, Q: PPoint, lam, mu) -> bool:
    """f(lP+mQ) = f(lP) + f(mQ) + sum_{k=1}^{d-1} t(d-k, f, lP)(mQ) / k!."""
    p, q = P.affine(), Q.affine()
    lam, mu = coerce(lam, f.field), coerce(mu, f.field)
    lp = [lam * x for x in p]
    mq = [mu * x for x in q]
    lhs = evaluate(f, [a + b for a, b in zip(lp, mq)])
    rhs = evaluate(f, lp) + evaluate(f, mq)
    d = f.degree
    for k in range(1, d):
        rhs += evaluate(polar(f, lp, d - k), mq) / math.factorial(k)
    if f.field is FieldTag.EXACT:
        return lhs == rhs
    return abs(lhs - rhs) <= DEFAULT_TOL * (1 + abs(lhs) + abs(rhs))


# -- substitution ------------------------------------------------------------


def substitute_linear(f: HPoly, columns: Sequence[Sequence]) -> HPoly:
    """f(x = sum_i s_i * columns[i]) as a polynomial in s_0..s_{len(columns)-1}."""
    npar = len(columns)
    field = f.field
    if field is FieldTag.EXACT and _field_of([c for col in columns for c in col]) is FieldTag.COMPLEX:
        f = f.to_field(FieldTag.COMPLEX)
        field = FieldTag.COMPLEX
    lin = []
    for j in range(f.nvars):
        lin.append(HPoly(npar, 1, {tuple(int(t == i) for t in range(npar)): columns[i][j]
                                   for i in range(npar)}, field))
    cache = {}

    def lpow(j, e):
        key = (j, e)
        if key not in cache:
            cache[key] = lin[j] if e == 1 else lpow(j, e - 1) * lin[j]
        return cache[key]

    acc = {}
    for a, c in f._terms.items():
        t = None
        for j, e in enumerate(a):
            if e:
                t = lpow(j, e) if t is None else t * lpow(j, e)
        if t is None:
            t = HPoly.constant(npar, 1, field)
        for e2, c2 in t._terms.items():
            acc[e2] = acc.get(e2, 0) + c * c2
    acc = {e: c for e, c in acc.items() if c != 0}
    return HPoly(npar, f.degree, acc, field, _trusted=True)


def points_independent(points: Sequence) -> bool:
    vecs = [list(p.coords) if isinstance(p, PPoint) else list(p) for p in points]
    if _field_of([c for v in vecs for c in v]) is FieldTag.EXACT:
        return rank_exact(vecs) == len(vecs)
    return smallest_singular_ratio(vecs) > SPAN_SV_TOL


def smallest_singular_ratio(vecs) -> float:
    A = np.array([[coerce(c, FieldTag.COMPLEX) for c in v] for v in vecs], dtype=complex)
    A = A / np.linalg.norm(A, axis=1, keepdims=True)
    s = np.linalg.svd(A, compute_uv=False)
    return float(s[-1] / s[0]) if s[0] > 0 else 0.0


def restrict_to_span(f: HPoly, points: Sequence) -> HPoly:
    if not points_independent(points):
        raise DependentPoints("points do not span a plane of the expected dimension")
    cols = [list(p.coords) if isinstance(p, PPoint) else list(p) for p in points]
    return substitute_linear(f, cols)


# -- text format -------------------------------------------------------------


def _render_coeff(c, field) -> str:
    if field is FieldTag.EXACT:
        return str(c)
    c = complex(c)
    return f"({c.real!r}{'+' if c.imag >= 0 or math.isnan(c.imag) else '-'}{abs(c.imag)!r}j)"


def render(f: HPoly) -> str:
    items = f.terms()
    if not items:
        return "0"
    parts = []
    for e, c in items:
        mono = "*".join(f"x{j}" if a == 1 else f"x{j}^{a}" for j, a in enumerate(e) if a)
        coeff = _render_coeff(c, f.field)
        parts.append(f"{coeff}*{mono}" if mono else coeff)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coeff>\([^()]*\)|\d+(?:/\d+)?(?:\.\d*)?(?:[eE][+-]?\d+)?)?
        \s*(?P<mono>(?:\*?\s*x\d+(?:\^\d+)?\s*)*)""",
    re.VERBOSE,
)
_FACTOR = re.compile(r"x(\d+)(?:\^(\d+))?")


def parse(text: str, nvars: int | None = None, degree: int | None = None,
          field: FieldTag | None = None) -> HPoly:
    text = text.strip()
    raw = []
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:pos + 20]!r}")
        pos = m.end()
        coeff_txt, mono = m.group("coeff"), m.group("mono")
        if coeff_txt is None and not mono.strip():
            raise ValueError(f"empty term near {text[m.start():m.start() + 20]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        if coeff_txt is None:
            c = Fraction(1)
        elif coeff_txt.startswith("("):
            c = complex(coeff_txt.replace(" ", ""))
        elif "." in coeff_txt or "e" in coeff_txt.lower():
            c = Fraction(coeff_txt)
        else:
            c = Fraction(coeff_txt)
        exps = {}
        for fm in _FACTOR.finditer(mono):
            j, a = int(fm.group(1)), int(fm.group(2) or 1)
            exps[j] = exps.get(j, 0) + a
        raw.append((sign * c, exps))
    if text == "0":
        raw = []
    top = max((max(e) for _, e in raw if e), default=-1)
    nvars = nvars if nvars is not None else top + 1
    if top >= nvars:
        raise ValueError(f"variable x{top} exceeds nvars={nvars}")
    field = FieldTag(field) if field else _field_of([c for c, _ in raw])
    degs = {sum(e.values()) for _, e in raw}
    if len(degs) > 1:
        raise ValueError(f"polynomial is not homogeneous: degrees {sorted(degs)}")
    deg = degs.pop() if degs else (degree if degree is not None else 0)
    if degree is not None and deg != degree:
        raise ValueError(f"expected degree {degree}, parsed degree {deg}")
    terms = {}
    for c, e in raw:
        exp = tuple(e.get(j, 0) for j in range(nvars))
        terms[exp] = terms.get(exp, 0) + coerce(c, field)
    return HPoly(nvars, deg, terms, field)


def random_hpoly(rng, nvars: int, degree: int, field=FieldTag.EXACT, density: float = 1.0,
                 bound: int = 9) -> HPoly:
    """Seeded random polynomial; ``rng`` is a numpy Generator."""
    terms = {}
    for e in compositions(degree, nvars):
        if density < 1.0 and rng.random() > density:
            continue
        if field is FieldTag.EXACT:
            num = int(rng.integers(-bound, bound + 1))
            den = int(rng.integers(1, 4))
            terms[e] = Fraction(num, den)
        else:
            terms[e] = complex(rng.normal(), rng.normal())
    return HPoly(nvars, degree, terms, field)


__all__ = [
    "FieldTag", "HPoly", "PPoint", "polar", "evaluate", "technical_identity_check",
    "restrict_to_span", "substitute_linear", "render", "parse", "compositions",
    "residual_ok", "scaled_residual", "points_independent", "smallest_singular_ratio",
    "random_hpoly", "NormalizationError", "DependentPoints", "FieldMismatch",
]
