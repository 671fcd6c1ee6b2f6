import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from rdbounds.poly import (
    DependentPoints,
    FieldMismatch,
    FieldTag,
    HPoly,
    NormalizationError,
    PPoint,
    evaluate,
    parse,
    polar,
    random_hpoly,
    render,
    residual_ok,
    restrict_to_span,
    substitute_linear,
    technical_identity_check,
)


def to_sympy(f: HPoly, syms):
    return sum((sp.Rational(c.numerator, c.denominator) * sp.Mul(*[s ** a for s, a in zip(syms, e)])
                for e, c in f.terms()), sp.Integer(0))


def from_sympy(expr, syms, degree):
    poly = sp.Poly(sp.expand(expr), *syms)
    terms = {e: Fraction(int(c.p), int(c.q)) for e, c in zip(poly.monoms(), poly.coeffs()) if c != 0}
    return HPoly(len(syms), degree, terms)


@st.composite
def exact_polys(draw, max_vars=4, max_deg=4):
    n = draw(st.integers(1, max_vars))
    d = draw(st.integers(0, max_deg))
    seed = draw(st.integers(0, 2**31 - 1))
    dens = draw(st.sampled_from([0.3, 0.7, 1.0]))
    return random_hpoly(np.random.default_rng(seed), n, d, FieldTag.EXACT, density=dens)


def small_fracs(n):
    return st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=n, max_size=n)


# -- evaluation and arithmetic against sympy ---------------------------------

def test_evaluate_examples():
    x0sq = HPoly(2, 2, {(2, 0): 1})
    assert evaluate(x0sq, [3, 7]) == 9
    assert evaluate(HPoly.zero(3, 2), [1, 2, 3]) == 0
    lam, mu, p, q = map(Fraction, (2, -3, 5, 7))
    f = HPoly(2, 2, {(1, 1): 1})
    got = evaluate(f, [lam + mu, lam * p + mu * q])
    assert got == lam**2 * p + lam * mu * (p + q) + mu**2 * q


@given(exact_polys(), st.data())
def test_evaluate_matches_sympy(f, data):
    syms = sp.symbols(f"x0:{f.nvars}")
    v = data.draw(small_fracs(f.nvars))
    want = to_sympy(f, syms).subs({s: sp.Rational(x.numerator, x.denominator) for s, x in zip(syms, v)})
    assert evaluate(f, v) == Fraction(int(sp.numer(want)), int(sp.denom(want)))


@given(exact_polys(max_vars=3, max_deg=3), st.integers(0, 2**31 - 1))
def test_product_matches_sympy(f, seed):
    g = random_hpoly(np.random.default_rng(seed), f.nvars, 2, FieldTag.EXACT, density=0.6)
    syms = sp.symbols(f"x0:{f.nvars}")
    assert f * g == from_sympy(to_sympy(f, syms) * to_sympy(g, syms), syms, f.degree + 2)


@given(exact_polys())
def test_sum_and_negation(f):
    assert (f - f).is_zero()
    assert f + HPoly.zero(f.nvars, f.degree) == f


def test_mixed_degree_sum_rejected():
    with pytest.raises(Exception):
        HPoly.variable(2, 0) + HPoly(2, 2, {(2, 0): 1})


def test_field_mismatch():
    a = HPoly.variable(2, 0)
    b = HPoly.variable(2, 1, FieldTag.COMPLEX)
    with pytest.raises(FieldMismatch):
        a + b


def test_partials():
    assert HPoly(1, 3, {(3,): 1}).partial(0) == HPoly(1, 2, {(2,): 3})
    assert HPoly(3, 3, {(1, 1, 1): 1}).partial(1) == HPoly(3, 2, {(1, 0, 1): 1})


@given(exact_polys(max_deg=5), st.data())
def test_partial_matches_sympy(f, data):
    syms = sp.symbols(f"x0:{f.nvars}")
    j = data.draw(st.integers(0, f.nvars - 1))
    d = max(f.degree - 1, 0)
    assert f.partial(j) == from_sympy(sp.diff(to_sympy(f, syms), syms[j]), syms, d)


def test_partial_finite_difference_complex():
    rng = np.random.default_rng(5)
    f = random_hpoly(rng, 4, 4, FieldTag.COMPLEX)
    x = rng.normal(size=4) + 1j * rng.normal(size=4)
    h = 1e-5
    for j in range(4):
        e = np.zeros(4)
        e[j] = h
        fd = (evaluate(f, list(x + e)) - evaluate(f, list(x - e))) / (2 * h)
        an = evaluate(f.partial(j), list(x))
        assert abs(fd - an) <= 1e-6 * max(1.0, abs(an))


# -- polars ------------------------------------------------------------------

def test_tangent_hyperplane_polar():
    f = parse("x0^2 + x1^2 - 2*x2^2")
    assert polar(f, PPoint([1, 1, 1]), 1) == parse("2*x0 + 2*x1 - 4*x2")


def test_polar_of_product():
    p = Fraction(3, 4)
    t = polar(HPoly(2, 2, {(1, 1): 1}), PPoint([1, p]), 1)
    assert t == HPoly(2, 1, {(1, 0): p, (0, 1): 1})


def test_polar_extremes():
    f = parse("x0^3 + 2*x0*x1^2")
    assert polar(f, [1, 2], 3) == HPoly.constant(2, 9)  # order 0: f(P) = 1 + 2*4
    assert polar(f, [1, 2], 0) == f.scale(6)
    with pytest.raises(ValueError):
        polar(f, [1, 2], 4)


@given(exact_polys(max_vars=3, max_deg=4), st.data())
def test_polar_is_taylor_component(f, data):
    """order! times the degree-order part of f(P + y) in y."""
    syms = sp.symbols(f"x0:{f.nvars}")
    ys = sp.symbols(f"y0:{f.nvars}")
    P = data.draw(small_fracs(f.nvars))
    k = data.draw(st.integers(0, f.degree))
    order = f.degree - k
    shifted = sp.expand(to_sympy(f, syms).subs(
        {s: sp.Rational(p.numerator, p.denominator) + y for s, p, y in zip(syms, P, ys)}, simultaneous=True))
    part = sp.Integer(0)
    if shifted != 0:
        poly = sp.Poly(shifted, *ys)
        part = sum((c * sp.Mul(*[y ** a for y, a in zip(ys, e)]) for e, c in zip(poly.monoms(), poly.coeffs())
                    if sum(e) == order), sp.Integer(0))
    want = from_sympy(math.factorial(order) * part, ys, order)
    assert polar(f, P, k) == want


def test_technical_identity_examples():
    f = HPoly.linear([2, -1, 3])
    assert technical_identity_check(f, PPoint([1, 2, 3]), PPoint([1, 0, 5]), 2, 7)
    g = HPoly(2, 2, {(1, 1): 1})
    assert technical_identity_check(g, PPoint([1, 3]), PPoint([1, -2]), Fraction(1, 2), 5)


@given(exact_polys(max_vars=5, max_deg=5), st.data())
def test_technical_identity_property(f, data):
    if f.nvars < 2 or f.degree < 1:
        return
    P = PPoint([1] + data.draw(small_fracs(f.nvars - 1)))
    Q = PPoint([1] + data.draw(small_fracs(f.nvars - 1)))
    lam, mu = data.draw(small_fracs(2))
    assert technical_identity_check(f, P, Q, lam, mu)


# -- points, restriction, text --------------------------------------------------

def test_point_normalisation():
    assert PPoint([0, 2, 4]).coords == (0, 1, 2)
    z = PPoint([1j, 2, 0.5])
    assert max(abs(c) for c in z.coords) == pytest.approx(1.0)
    with pytest.raises(NormalizationError):
        PPoint([0, 0])
    with pytest.raises(NormalizationError):
        PPoint([0, 1]).affine()


def test_restriction_examples():
    assert restrict_to_span(parse("x0 + x1"), [PPoint([1, -1])]).is_zero()
    fermat = parse("x0^3 + x1^3 + x2^3 + x3^3")
    assert restrict_to_span(fermat, [PPoint([1, -1, 0, 0]), PPoint([0, 0, 1, -1])]).is_zero()
    with pytest.raises(DependentPoints):
        restrict_to_span(fermat, [PPoint([1, -1, 0, 0]), PPoint([2, -2, 0, 0])])


def test_generic_quadric_on_line_is_nonzero():
    rng = np.random.default_rng(11)
    q = random_hpoly(rng, 4, 2)
    r = restrict_to_span(q, [PPoint([1, 2, 0, 1]), PPoint([0, 1, 1, 3])])
    assert r.degree == 2 and r.nvars == 2 and not r.is_zero()


@given(exact_polys(max_vars=3, max_deg=3), st.data())
def test_substitute_linear_commutes_with_evaluation(f, data):
    cols = [data.draw(small_fracs(f.nvars)) for _ in range(2)]
    s = data.draw(small_fracs(2))
    g = substitute_linear(f, cols)
    x = [s[0] * a + s[1] * b for a, b in zip(*cols)]
    assert evaluate(g, s) == evaluate(f, x)


@given(exact_polys())
def test_render_parse_roundtrip(f):
    assert parse(render(f), nvars=f.nvars, degree=f.degree) == f


def test_complex_roundtrip():
    f = random_hpoly(np.random.default_rng(2), 3, 2, FieldTag.COMPLEX)
    g = parse(render(f), nvars=3, degree=2)
    assert g.field is FieldTag.COMPLEX and (g - f).is_zero(1e-12)


def test_parse_rejects_inhomogeneous():
    with pytest.raises(ValueError):
        parse("x0^2 + x1")


def test_residual_ok_mixed_inputs():
    f = parse("x0^2 - x1^2")
    assert residual_ok(f, [1.0 + 0j, -1.0 + 0j])
    assert residual_ok(f, [np.complex128(1), np.float64(1)])
    assert not residual_ok(f, [1.0, 0.5])


@given(exact_polys(max_vars=4, max_deg=5), st.data())
def test_polar_scales_with_point(f, data):
    P = data.draw(small_fracs(f.nvars))
    c = data.draw(st.fractions(min_value=-4, max_value=4, max_denominator=5).filter(lambda x: x != 0))
    k = data.draw(st.integers(0, f.degree))
    assert polar(f, [c * p for p in P], k) == polar(f, P, k).scale(c ** k)


@given(exact_polys(max_vars=4, max_deg=5), st.data())
def test_euler_identity_for_first_polar(f, data):
    if f.degree < 1:
        return
    P = data.draw(small_fracs(f.nvars))
    assert evaluate(polar(f, P, f.degree - 1), P) == f.degree * evaluate(f, P)
