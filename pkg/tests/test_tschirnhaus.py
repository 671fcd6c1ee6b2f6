from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from rdbounds.poly import FieldTag, evaluate
from rdbounds.polar import HSystem
from rdbounds.planes import SliceConfig, find_point
from rdbounds.tschirnhaus import (
    ExcludedLocus,
    GeneralPoly,
    SizeGuardExceeded,
    build_tschirnhaus,
    companion_matrix,
    power_sums,
    random_general_poly,
    tau_point_check,
    transformed_coefficients,
)


def test_companion_quadratic():
    a1, a2 = Fraction(3), Fraction(-5, 2)
    M = companion_matrix(GeneralPoly(2, (a1, a2)))
    assert M == [[0, -a2], [1, -a1]]


@pytest.mark.parametrize("seed", range(3))
def test_charpoly_of_companion(seed):
    p = random_general_poly(5, seed)
    M = sp.Matrix([[sp.Rational(c.numerator, c.denominator) for c in row] for row in companion_matrix(p)])
    z = sp.Symbol("z")
    cp = sp.Poly(M.charpoly(z).as_expr(), z).all_coeffs()
    assert [Fraction(int(c.p), int(c.q)) for c in cp] == p.coefficients()


def test_eigenvalues_match_roots():
    p = random_general_poly(6, 3, FieldTag.COMPLEX)
    M = np.array(companion_matrix(p), dtype=complex)
    ev = np.sort_complex(np.linalg.eigvals(M))
    rt = np.sort_complex(p.roots())
    assert np.allclose(ev, rt, atol=1e-8)


def test_power_sums_match_roots():
    p = random_general_poly(5, 8)
    lam = p.roots()
    s = power_sums(p, 12)
    for e in range(13):
        assert abs(complex(s[e]) - np.sum(lam ** e)) < 1e-8 * max(1, abs(complex(s[e])))


def test_b1_is_negative_trace_form():
    p = random_general_poly(5, 1)
    T = build_tschirnhaus(p, 2)
    s = power_sums(p, 4)
    assert T[1].degree == 1
    for j in range(5):
        e = tuple(int(i == j) for i in range(5))
        assert T[1].coeff(e) == -s[j]


@pytest.mark.parametrize("n,seed", [(4, 0), (5, 1), (6, 2)])
def test_root_transport(n, seed):
    p = random_general_poly(n, seed)
    T = build_tschirnhaus(p, n, allow_large=True)
    rng = np.random.default_rng(seed + 50)
    w = list(rng.normal(size=n) + 1j * rng.normal(size=n))
    coeffs = [1] + [evaluate(f.to_field(FieldTag.COMPLEX), w) for f in T.b]
    got = np.sort_complex(np.roots(coeffs))
    lam = p.roots()
    want = np.sort_complex(np.array([sum(wj * l ** j for j, wj in enumerate(w)) for l in lam]))
    assert np.allclose(got, want, atol=1e-7)
    # the same coefficients as the characteristic polynomial of W(w)
    assert np.allclose(transformed_coefficients(p, w), coeffs, atol=1e-7)


def test_degrees_and_guard():
    T = build_tschirnhaus(random_general_poly(9, 0), 3)
    assert [f.degree for f in T.b] == [1, 2, 3]
    with pytest.raises(SizeGuardExceeded):
        build_tschirnhaus(random_general_poly(9, 0), 5)
    with pytest.raises(SizeGuardExceeded):
        build_tschirnhaus(random_general_poly(3, 0), 4, allow_large=True)


def test_to_json_strings():
    doc = build_tschirnhaus(random_general_poly(4, 7), 2, seed=7).to_json()
    assert doc["n"] == "4" and doc["seed"] == "7" and len(doc["b"]) == 2


def test_tau_check_excluded_points():
    T = build_tschirnhaus(random_general_poly(5, 0), 2)
    with pytest.raises(ExcludedLocus):
        tau_point_check(T, [1, 0, 0, 0, 0])
    with pytest.raises(ExcludedLocus):
        tau_point_check(T, [0, 0, 0, 0, 0])


def test_tau_check_random_point_fails():
    T = build_tschirnhaus(random_general_poly(5, 0), 2)
    assert not tau_point_check(T, [1, 2, 3, 4, 5])


def test_tau_point_from_solver_kills_b1_b2():
    p = random_general_poly(5, 4)
    T = build_tschirnhaus(p, 2)
    V = HSystem(4, [f.to_field(FieldTag.COMPLEX) for f in T.b])
    w = find_point(V, SliceConfig(seed=12))
    assert tau_point_check(T, list(w.coords), tol=1e-8)
    c = transformed_coefficients(p, list(w.coords))
    assert abs(c[1]) < 1e-8 * np.abs(c).max() and abs(c[2]) < 1e-8 * np.abs(c).max()
