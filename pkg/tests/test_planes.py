import numpy as np
import pytest

from rdbounds.planes import (
    ConvergenceFailure,
    DegreeCapExceeded,
    DimensionPrecondition,
    ResourceGuard,
    SliceConfig,
    find_point,
    find_point_info,
    full_residual,
    quadric_k_plane,
    run_pipeline,
    solve_sliced,
)
from rdbounds.poly import FieldTag, HPoly, PPoint, parse, random_hpoly
from rdbounds.polar import HSystem, contains_plane, is_k_polar_point


def random_system(r, degs, seed):
    rng = np.random.default_rng(seed)
    return HSystem(r, [random_hpoly(rng, r + 1, d, FieldTag.COMPLEX) for d in degs])


def test_single_quadric_point():
    V = random_system(3, (2,), 0)
    P = find_point(V, SliceConfig(seed=1))
    assert full_residual(V, P.array()) < 1e-12


@pytest.mark.parametrize("degs,count", [((2,), 2), ((2, 2), 4), ((2, 3), 6), ((3, 3), 9), ((2, 2, 2), 8),
                                        ((1, 2, 3), 6)])
def test_solution_count_equals_degree_product(degs, count):
    V = random_system(len(degs) + 1, degs, 3)
    sols, degree = solve_sliced(V, SliceConfig(), np.random.default_rng(0))
    assert degree == count
    assert len(sols) == count
    assert max(full_residual(V, x) for x in sols) < 1e-10


def test_type_123_in_p3_slice_has_at_most_six_points():
    V = random_system(3, (1, 2, 3), 9)
    info = find_point_info(V, SliceConfig(seed=2))
    assert info.degree == 6 and info.solutions <= 6
    assert info.residual < 1e-10


def test_inconsistent_system_fails():
    # x0 = x1 = x2 = 0 in P^2 leaves no point; a quadric on top changes nothing
    V = HSystem(2, [parse(t, nvars=3) for t in ("x0", "x1", "x2", "x0^2 + x1^2 + x2^2")])
    with pytest.raises((ConvergenceFailure, DimensionPrecondition)):
        find_point(V)


def test_overdetermined_generic_system_fails():
    V = random_system(2, (2, 2, 2), 5)
    with pytest.raises((ConvergenceFailure, DimensionPrecondition)):
        find_point(V, SliceConfig(max_retries=2))


def test_constant_generator_rejected():
    V = HSystem(2, [HPoly.constant(3, 1)])
    with pytest.raises(ConvergenceFailure):
        find_point(V)


def test_degree_cap():
    with pytest.raises(DegreeCapExceeded):
        find_point(random_system(4, (4, 4, 5), 0))
    with pytest.raises(DegreeCapExceeded):
        find_point(random_system(5, (2, 2, 2, 2), 0))


def test_avoid_excludes_span():
    V = random_system(3, (2, 2), 1)
    cfg = SliceConfig(seed=4)
    P = find_point(V, cfg)
    Q = find_point(V, cfg, avoid=[P])
    assert np.linalg.matrix_rank(np.array([P.array(), Q.array()]), tol=1e-6) == 2


def test_seed_reproducible():
    V = random_system(4, (2, 3), 2)
    a = find_point(V, SliceConfig(seed=77))
    b = find_point(V, SliceConfig(seed=77))
    assert np.allclose(a.array(), b.array())


@pytest.mark.parametrize("ell,k,r", [(1, 5, 11), (2, 2, 8), (1, 2, 5), (3, 1, 7)])
def test_quadric_k_plane(ell, k, r):
    Q = random_system(r, (2,) * ell, 100 + r)
    plane = quadric_k_plane(Q, k, cfg=SliceConfig(seed=3))
    assert len(plane) == k + 1
    assert plane.residual < 1e-6
    assert all(d == 2 ** ell for d in plane.degrees)
    assert contains_plane(Q, list(plane), tol=1e-6)
    assert is_k_polar_point(Q, list(plane), tol=1e-7)


def test_quadric_plane_with_base_point():
    Q = random_system(5, (2,), 8)
    P = find_point(Q, SliceConfig(seed=1))
    plane = quadric_k_plane(Q, 2, base=P, cfg=SliceConfig(seed=2))
    assert plane[0] is P and plane.residual < 1e-6


def test_quadric_plane_preconditions():
    with pytest.raises(DimensionPrecondition):
        quadric_k_plane(random_system(10, (2,), 0), 5)  # r = (k+1)l + k - 1
    with pytest.raises(ResourceGuard):
        quadric_k_plane(random_system(30, (2,) * 4, 0), 1)
    with pytest.raises(ValueError):
        quadric_k_plane(random_system(7, (3,), 0), 1)


def test_pipeline_guards():
    with pytest.raises(ResourceGuard):
        run_pipeline(25, 2)
    with pytest.raises(ResourceGuard):
        run_pipeline(19, 3)
    with pytest.raises(DimensionPrecondition):
        run_pipeline(8, 1)


def test_pipeline_depth_one():
    rep = run_pipeline(9, 1, SliceConfig(seed=0))
    assert rep.solve_degrees == [6, 12]
    assert rep.certified and rep.chain_certified and rep.tau_checks
    assert rep.plane_residual < 1e-6
    rec = rep.as_record()
    assert rec["solve_degrees"] == ["6", "12"] and rec["certified"] is True
