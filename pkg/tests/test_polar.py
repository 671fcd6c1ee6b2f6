from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rdbounds.poly import FieldTag, HPoly, PPoint, parse, polar, random_hpoly
from rdbounds.polar import (
    HSystem,
    IntersectionType,
    NotOnVariety,
    PolarChainError,
    cone_system,
    cone_type,
    cone_type_chain,
    contains_plane,
    is_k_polar_point,
    iterated_cone,
    on_variety,
    plane_residual,
)

FERMAT = HSystem(3, [parse("x0^3 + x1^3 + x2^3 + x3^3")])
P0, Q0 = PPoint([1, -1, 0, 0]), PPoint([0, 0, 1, -1])


def test_type_parse_and_render():
    t = IntersectionType.parse("[3:1, 2:3, 1:7]")
    assert str(t) == "[3:1, 2:3, 1:7]"
    assert t.degree_product == 3 * 8
    assert t.total == 11
    assert IntersectionType.of((1, 2, 3)) == IntersectionType.of({3: 1, 2: 1, 1: 1})


def test_cone_type_examples():
    assert str(cone_type((1, 2, 3), 1)) == "[3:1, 2:2, 1:3]"
    assert str(cone_type_chain(4, 2)) == "[4:1, 3:3, 2:6, 1:10]"
    assert cone_type((2, 3), 0) == IntersectionType.of((2, 3))
    # the displayed [3:1, 2:3, 1:7] is the second cone of tau_{1,2,3} cut by one more hyperplane
    assert str(cone_type((1, 1, 2, 3), 2)) == "[3:1, 2:3, 1:7]"
    assert str(cone_type_chain(3, 2)) == "[3:1, 2:3, 1:6]"


@given(st.integers(1, 7), st.integers(0, 8))
def test_chain_closed_form_matches_iteration(d, k):
    assert cone_type_chain(d, k) == cone_type(tuple(range(1, d + 1)), k)


def test_single_quadric_cone():
    q = parse("x0*x1 - x2^2")
    P = PPoint([1, 1, 1])
    C = cone_system(HSystem(2, [q]), P)
    assert [f.degree for f in C.polys] == [2, 1]
    assert C.polys[0] == q.scale(2)
    assert C.polys[1] == polar(q, P, 1)


def test_cone_system_type_follows_type_rule():
    rng = np.random.default_rng(4)
    # plant P = e0 on a type (1, 2, 3) system by killing the x0^d coefficient
    polys = []
    for d in (1, 2, 3):
        f = random_hpoly(rng, 6, d)
        terms = dict(f.terms())
        terms.pop((d, 0, 0, 0, 0, 0), None)
        polys.append(HPoly(6, d, terms))
    V = HSystem(5, polys)
    C = cone_system(V, PPoint([1, 0, 0, 0, 0, 0]))
    assert C.type() == cone_type(V.type(), 1)


def test_cone_system_off_variety():
    with pytest.raises(NotOnVariety):
        cone_system(FERMAT, PPoint([1, 0, 0, 0]))


def test_fermat_cone_contains_second_point():
    C = cone_system(FERMAT, P0)
    assert on_variety(C, Q0)
    assert contains_plane(FERMAT, [P0, Q0])
    assert plane_residual(FERMAT, [P0, Q0]) == 0.0


def test_iterated_cone_k0_and_fermat():
    chain = iterated_cone(FERMAT, [])
    assert chain.systems == [FERMAT]
    chain = iterated_cone(FERMAT, [P0, Q0])
    assert chain.nested
    assert len(chain.systems) == 3
    assert is_k_polar_point(FERMAT, [P0, Q0])


def test_iterated_cone_rejects_dependent_point():
    with pytest.raises(PolarChainError) as err:
        iterated_cone(FERMAT, [P0, PPoint([2, -2, 0, 0])])
    assert err.value.step == 1


def test_generic_line_not_contained():
    assert not contains_plane(FERMAT, [P0, PPoint([0, 1, 0, 0])])


def test_quadric_line_through_cone_point():
    # x0*x1 - x2*x3 contains the line {x0 = x2 = 0}
    V = HSystem(3, [parse("x0*x1 - x2*x3")])
    P = PPoint([0, 1, 0, 0])
    C = cone_system(V, P)
    Q = PPoint([0, 0, 0, 1])
    assert on_variety(C, Q)
    assert contains_plane(V, [P, Q])


def test_contains_plane_numeric():
    V = FERMAT.to_field(FieldTag.COMPLEX)
    rot = np.exp(2j * np.pi / 3)
    P = PPoint([1, -rot, 0, 0], FieldTag.COMPLEX)
    Q = PPoint([0, 0, 1, -1], FieldTag.COMPLEX)
    assert contains_plane(V, [P, Q], tol=1e-10)
