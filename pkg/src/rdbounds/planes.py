"""Numeric point and plane finding on intersections of hypersurfaces.

A system is sliced by seeded random hyperplanes down to expected dimension
zero, its linear part is eliminated by a null-space basis, and the
remaining (at most three) equations are solved in a random affine chart by
iterated Sylvester resultants.  Candidates are polished by Newton's method
and finally re-checked against the original generators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .polar import HSystem, cone_system, contains_plane, iterated_cone, plane_residual
from .poly import (
    SPAN_SV_TOL,
    FieldTag,
    HPoly,
    PPoint,
    scaled_residual,
    smallest_singular_ratio,
    substitute_linear,
)


class DegreeCapExceeded(ValueError):
    pass


class ConvergenceFailure(RuntimeError):
    def __init__(self, msg, stage: str | None = None):
        super().__init__(msg if stage is None else f"[{stage}] {msg}")
        self.stage = stage


class DimensionPrecondition(ValueError):
    pass


class ResourceGuard(ValueError):
    pass


@dataclass(frozen=True)
class SliceConfig:
    seed: int = 0
    residual_tol: float = 1e-8
    newton_iters: int = 40
    max_retries: int = 5
    degree_cap: int = 64

    def with_seed(self, seed: int) -> "SliceConfig":
        return SliceConfig(seed, self.residual_tol, self.newton_iters, self.max_retries, self.degree_cap)


@dataclass
class PointInfo:
    point: PPoint
    degree: int
    residual: float
    seed: int
    solutions: int


# ---------------------------------------------------------------------------
# affine polynomial helpers (dense numpy evaluation)


class _Aff:
    """Affine polynomial sum c_i t^E_i with vectorised value and gradient."""

    def __init__(self, E: np.ndarray, c: np.ndarray):
        keep = c != 0
        self.E = E[keep].astype(np.int64)
        self.c = c[keep].astype(complex)
        self.nv = E.shape[1]
        self.deg = int(self.E.sum(axis=1).max()) if len(self.c) else 0
        self._grad = []
        for j in range(self.nv):
            m = self.E[:, j] > 0
            Ej = self.E[m].copy()
            Ej[:, j] -= 1
            self._grad.append((Ej, self.c[m] * self.E[m, j]))

    def __call__(self, t) -> complex:
        if not len(self.c):
            return 0j
        return complex(np.prod(np.asarray(t)[None, :] ** self.E, axis=1) @ self.c)

    def grad(self, t) -> np.ndarray:
        t = np.asarray(t)
        out = np.zeros(self.nv, dtype=complex)
        for j, (Ej, cj) in enumerate(self._grad):
            if len(cj):
                out[j] = np.prod(t[None, :] ** Ej, axis=1) @ cj
        return out

    def scale_norm(self) -> float:
        return float(np.abs(self.c).sum()) if len(self.c) else 1.0

    def univariate_last(self, x) -> np.ndarray:
        """Coefficients in the last variable (highest power first) at fixed earlier vars."""
        x = np.asarray(x, dtype=complex)
        d = int(self.E[:, -1].max()) if len(self.c) else 0
        coeffs = np.zeros(d + 1, dtype=complex)
        if not len(self.c):
            return coeffs
        head = np.prod(x[None, :] ** self.E[:, :-1], axis=1) * self.c if self.nv > 1 else self.c
        np.add.at(coeffs, d - self.E[:, -1], head)
        return coeffs


def _dehomogenize(f: HPoly) -> _Aff:
    E, c = f.numeric()
    return _Aff(E[:, 1:], c)


def _sylvester_det(p: np.ndarray, q: np.ndarray, dp: int, dq: int) -> complex:
    p = np.concatenate([np.zeros(dp + 1 - len(p), complex), p])[-(dp + 1):]
    q = np.concatenate([np.zeros(dq + 1 - len(q), complex), q])[-(dq + 1):]
    n = dp + dq
    if n == 0:
        return 1.0 + 0j
    S = np.zeros((n, n), dtype=complex)
    for i in range(dq):
        S[i, i:i + dp + 1] = p
    for i in range(dp):
        S[dq + i, i:i + dq + 1] = q
    return complex(np.linalg.det(S))


def _resultant_last(f: _Aff, g: _Aff) -> _Aff:
    """Res_{t_last}(f, g) as a polynomial in the remaining variables.

    Evaluated on a grid of roots of unity and interpolated by FFT; the
    total degree is at most deg f * deg g.
    """
    nv = f.nv - 1
    dp, dq = int(f.E[:, -1].max()), int(g.E[:, -1].max())
    D = f.deg * g.deg
    N = D + 1
    w = np.exp(2j * np.pi * np.arange(N) / N)
    if nv == 1:
        vals = np.array([_sylvester_det(f.univariate_last([a]), g.univariate_last([a]), dp, dq) for a in w])
        coef = np.fft.fft(vals) / N
        E = np.arange(N).reshape(N, 1)
        R = _Aff(E, coef)
    elif nv == 2:
        vals = np.empty((N, N), dtype=complex)
        for i, a in enumerate(w):
            for j, b in enumerate(w):
                vals[i, j] = _sylvester_det(f.univariate_last([a, b]), g.univariate_last([a, b]), dp, dq)
        coef = np.fft.fft2(vals) / (N * N)
        idx = [(i, j) for i in range(N) for j in range(N) if i + j <= D]
        E = np.array(idx, dtype=np.int64)
        R = _Aff(E, np.array([coef[i, j] for i, j in idx]))
    else:
        raise DegreeCapExceeded("resultant elimination supports at most three unknowns")
    top = np.abs(R.c).max() if len(R.c) else 0.0
    if top == 0:
        return R
    keep = np.abs(R.c) > 1e-13 * top
    return _Aff(R.E[keep], R.c[keep] / top)


def _roots(coeffs: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    if not len(c):
        return np.zeros(0, complex)
    top = np.abs(c).max()
    if top == 0:
        return np.zeros(0, complex)
    nz = np.nonzero(np.abs(c) > 1e-12 * top)[0]
    c = c[nz[0]:]
    if len(c) <= 1:
        return np.zeros(0, complex)
    return np.roots(c)


def _solve_affine(polys: list) -> list:
    nv = polys[0].nv
    if nv == 1:
        return [np.array([t]) for t in _roots(polys[0].univariate_last(np.zeros(0)))]
    f1 = polys[0]
    reduced = [_resultant_last(f1, g) for g in polys[1:]]
    out = []
    for x in _solve_affine(reduced):
        for t in _roots(f1.univariate_last(x)):
            out.append(np.concatenate([x, [t]]))
    return out


def _newton_affine(polys: list, t: np.ndarray, iters: int) -> tuple:
    t = np.array(t, dtype=complex)
    scales = np.array([p.scale_norm() for p in polys])
    for _ in range(iters):
        F = np.array([p(t) for p in polys])
        if not np.all(np.isfinite(F)):
            return t, np.inf
        J = np.array([p.grad(t) for p in polys])
        try:
            step = np.linalg.lstsq(J, -F, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        t = t + step
        if np.linalg.norm(step) <= 1e-15 * (1 + np.linalg.norm(t)):
            break
    F = np.array([p(t) for p in polys])
    tn = 1 + np.abs(t).max()
    res = float(np.max(np.abs(F) / (scales * tn ** np.array([p.deg for p in polys])))) if len(F) else 0.0
    return t, res


# ---------------------------------------------------------------------------
# full-space helpers


def _split(V: HSystem):
    lin, nonlin = [], []
    for f in V.polys:
        f = f.to_field(FieldTag.COMPLEX)
        if f.is_zero(1e-300):
            continue
        if f.degree == 0:
            raise ConvergenceFailure("system contains a nonzero constant; it has no points")
        (lin if f.degree == 1 else nonlin).append(f)
    return lin, nonlin


def _linear_row(f: HPoly) -> np.ndarray:
    E, c = f.numeric()
    row = np.zeros(f.nvars, dtype=complex)
    row[np.argmax(E, axis=1)] = c
    return row


def _null_space(A: np.ndarray, n: int) -> tuple:
    if A.shape[0] == 0:
        return np.eye(n, dtype=complex), 0
    An = A / np.maximum(np.linalg.norm(A, axis=1, keepdims=True), 1e-300)
    U, s, Vh = np.linalg.svd(An)
    rank = int(np.sum(s > 1e-9 * max(s[0], 1e-300)))
    return Vh[rank:].conj().T, rank


def _random_unitary(rng, n: int) -> np.ndarray:
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def full_residual(V: HSystem, x) -> float:
    x = list(np.asarray(x))
    return max((scaled_residual(f, x) for f in V.polys), default=0.0)


def _newton_full(nonlin, lin_rows, x, iters):
    """Gauss-Newton on generators + linear rows + a normalisation row."""
    x = np.array(x, dtype=complex)
    grads = [[f.partial(j) for j in range(f.nvars)] for f in nonlin]
    for _ in range(iters):
        x = x / np.abs(x).max()
        a = x.conj()
        F = [complex(np.prod(x[None, :] ** f.numeric()[0], axis=1) @ f.numeric()[1]) for f in nonlin]
        J = []
        for gs in grads:
            J.append([complex(np.prod(x[None, :] ** g.numeric()[0], axis=1) @ g.numeric()[1]) if len(g) else 0j
                      for g in gs])
        F += list(lin_rows @ x) if len(lin_rows) else []
        J += list(lin_rows) if len(lin_rows) else []
        F.append(a @ x - a @ x)  # normalisation: stay on the affine slice a.y = a.x
        J.append(a)
        step = np.linalg.lstsq(np.array(J), -np.array(F), rcond=None)[0]
        x = x + step
        if np.linalg.norm(step) <= 1e-16 * np.linalg.norm(x):
            break
    return x / np.abs(x).max()


def _cluster(points: list, tol: float = 1e-6) -> list:
    reps = []
    for p in points:
        if not any(np.linalg.norm(p - q) <= tol * (1 + np.linalg.norm(q)) for q in reps):
            reps.append(p)
    return reps


def solve_sliced(V: HSystem, cfg: SliceConfig, rng) -> tuple:
    """All solutions of V cut by random hyperplanes to expected dimension 0.

    Returns (list of coordinate vectors in P^r, degree product).
    """
    r = V.r
    lin, nonlin = _split(V)
    degree = math.prod(f.degree for f in nonlin)
    if degree > cfg.degree_cap:
        raise DegreeCapExceeded(f"degree product {degree} exceeds cap {cfg.degree_cap}")
    if len(nonlin) > 3:
        raise DegreeCapExceeded(f"{len(nonlin)} nonlinear generators after linear elimination (max 3)")
    A = np.array([_linear_row(f) for f in lin]) if lin else np.zeros((0, r + 1), complex)
    _, rank = _null_space(A, r + 1)
    extra = r - rank - len(nonlin)
    if extra < 0:
        raise DimensionPrecondition(f"expected dimension {extra} < 0")
    slices = rng.normal(size=(extra, r + 1)) + 1j * rng.normal(size=(extra, r + 1))
    rows = np.vstack([A, slices]) if extra else A
    B, rank2 = _null_space(rows, r + 1)
    q = B.shape[1]
    if q != len(nonlin) + 1:
        raise ConvergenceFailure("slicing did not reach expected dimension zero")
    if not nonlin:
        return [B[:, 0] / np.abs(B[:, 0]).max()], 1
    U = _random_unitary(rng, q)
    BU = B @ U
    cols = [list(BU[:, i]) for i in range(q)]
    red = []
    for f in nonlin:
        g = substitute_linear(f, cols)
        gn = g.norm1() or 1.0
        red.append(_dehomogenize(g.scale(1.0 / gn)))
    cands = _solve_affine(red)
    sols = []
    for t in cands:
        t2, res = _newton_affine(red, t, cfg.newton_iters)
        if res < 1e-8 and np.all(np.isfinite(t2)):
            x = BU @ np.concatenate([[1.0], t2])
            sols.append(x / np.abs(x).max())
    polished = []
    for x in _cluster(sols):
        if full_residual(V, x) > cfg.residual_tol * 1e-2:
            x = _newton_full(nonlin, rows, x, cfg.newton_iters)
        polished.append(x)
    return _cluster(polished), degree


def _not_in_span(x, avoid) -> bool:
    if not avoid:
        return True
    vecs = [np.asarray(p.coords if isinstance(p, PPoint) else p, dtype=complex) for p in avoid] + [x]
    return smallest_singular_ratio(vecs) > SPAN_SV_TOL


def find_point_info(V: HSystem, cfg: SliceConfig = SliceConfig(), avoid: Sequence = ()) -> PointInfo:
    last = None
    for attempt in range(cfg.max_retries):
        seed = cfg.seed + 7919 * attempt
        rng = np.random.default_rng(seed)
        sols, degree = solve_sliced(V, cfg, rng)
        good = []
        for x in sols:
            res = full_residual(V, x)
            if res <= cfg.residual_tol and _not_in_span(x, list(avoid)):
                good.append((res, x))
        if good:
            res, x = min(good, key=lambda t: t[0])
            return PointInfo(PPoint(list(x), FieldTag.COMPLEX), degree, res, seed, len(sols))
        last = f"no converged root off the excluded span (seed {seed}, {len(sols)} solutions)"
    raise ConvergenceFailure(last or "no root converged")


def find_point(V: HSystem, cfg: SliceConfig = SliceConfig(), avoid: Sequence = ()) -> PPoint:
    return find_point_info(V, cfg, avoid).point


# ---------------------------------------------------------------------------
# k-polar points on quadrics


@dataclass
class PlaneResult:
    points: list
    degrees: list
    residual: float
    seeds: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]


def quadric_k_plane(quadrics: HSystem, k: int, base: Optional[PPoint] = None,
                    cfg: SliceConfig = SliceConfig()) -> PlaneResult:
    ell = len(quadrics.polys)
    if any(f.degree != 2 for f in quadrics.polys):
        raise ValueError("quadric_k_plane takes a system of quadrics only")
    if ell > 3 or k > 5:
        raise ResourceGuard(f"desk-scale limits are l <= 3, k <= 5 (got l={ell}, k={k})")
    if quadrics.r < (k + 1) * ell + k:
        raise DimensionPrecondition(f"need r >= (k+1)l+k = {(k + 1) * ell + k}, got r={quadrics.r}")
    S = quadrics.to_field(FieldTag.COMPLEX)
    pts, degrees, seeds = [], [], []
    for j in range(k + 1):
        if j == 0 and base is not None:
            P = base
        else:
            info = find_point_info(S, cfg.with_seed(cfg.seed + 101 * j), avoid=pts)
            P = info.point
            degrees.append(info.degree)
            seeds.append(info.seed)
        pts.append(P)
        if j < k:
            S = cone_system(S, P, tol=max(cfg.residual_tol, 1e-9))
    res = plane_residual(quadrics.to_field(FieldTag.COMPLEX), pts)
    return PlaneResult(pts, degrees, res, seeds)


# ---------------------------------------------------------------------------
# desk-scale rehearsal of the tau constructions


@dataclass
class Stage:
    name: str
    degree: int
    expected: int
    residual: float

    def as_record(self):
        return {"stage": self.name, "degree": str(self.degree), "expected_degree": str(self.expected),
                "residual": f"{self.residual:.3e}"}


@dataclass
class PipelineReport:
    n: int
    depth: int
    seed: int
    stages: list
    plane_residual: float
    certified: bool
    chain_certified: bool
    tau_checks: bool
    points: list

    @property
    def solve_degrees(self) -> list:
        return [s.degree for s in self.stages]

    def as_record(self) -> dict:
        return {
            "n": str(self.n),
            "depth": str(self.depth),
            "seed": str(self.seed),
            "stages": [s.as_record() for s in self.stages],
            "solve_degrees": [str(d) for d in self.solve_degrees],
            "plane_residual": f"{self.plane_residual:.3e}",
            "certified": self.certified,
            "chain_certified": self.chain_certified,
            "tau_checks": self.tau_checks,
        }


def _lift(B: np.ndarray, P: PPoint) -> PPoint:
    return PPoint(list(B @ P.array()), FieldTag.COMPLEX)


def run_pipeline(n: int, depth: int, cfg: SliceConfig = SliceConfig()) -> PipelineReport:
    from .tschirnhaus import build_tschirnhaus, random_general_poly, tau_point_check

    if n > 19 or depth > 2:
        raise ResourceGuard(f"pipeline limited to n <= 19 and depth <= 2 (got n={n}, depth={depth})")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    need = 9 if depth == 1 else 19
    if n < need:
        raise DimensionPrecondition(f"depth {depth} needs n >= {need}")
    tol = max(cfg.residual_tol, 1e-9)
    p = random_general_poly(n, cfg.seed)
    T = build_tschirnhaus(p, 3)
    rng = np.random.default_rng(cfg.seed + 17)
    h = rng.normal(size=n) + 1j * rng.normal(size=n)
    h[0] = 1.0 + abs(h[0])  # H must miss [1:0:...:0]
    H = HPoly.linear(list(h), FieldTag.COMPLEX)
    V = HSystem(n - 1, [f.to_field(FieldTag.COMPLEX) for f in T.b] + [H])
    stages = []

    def stage(name, expected, fn):
        try:
            return fn()
        except (ConvergenceFailure, DimensionPrecondition, DegreeCapExceeded) as exc:
            raise ConvergenceFailure(str(exc), stage=name) from exc

    i0 = stage("P0 on tau_123 cap H", 6, lambda: find_point_info(V, cfg.with_seed(cfg.seed + 1)))
    stages.append(Stage("P0 on tau_123 cap H", i0.degree, 6, i0.residual))
    C1 = cone_system(V, i0.point, tol)
    i1 = stage("P1 on first cone", 12, lambda: find_point_info(C1, cfg.with_seed(cfg.seed + 2), avoid=[i0.point]))
    stages.append(Stage("P1 on first cone", i1.degree, 12, i1.residual))
    pts = [i0.point, i1.point]
    if depth == 2:
        C2 = cone_system(C1, i1.point, tol)
        lin = [f for f in C2.polys if f.degree == 1]
        quads = [f for f in C2.polys if f.degree == 2]
        A = np.array([_linear_row(f) for f in lin])
        B, _ = _null_space(A, n)
        cols = [list(B[:, i]) for i in range(B.shape[1])]
        U = substitute_linear(quads[0], cols)
        U = U.scale(1.0 / U.norm1())
        plane = stage("5-plane on a quadric of the second cone", 2,
                      lambda: quadric_k_plane(HSystem(B.shape[1] - 1, [U]), 5, cfg=cfg.with_seed(cfg.seed + 3)))
        for j, d in enumerate(plane.degrees):
            stages.append(Stage(f"quadric point {j}", d, 2, plane.residual))
        lam = [_lift(B, P) for P in plane.points]
        restricted = []
        for f in C2.polys:
            g = substitute_linear(f, [list(P.coords) for P in lam])
            scale = f.norm1() * len(lam) ** f.degree
            if max((abs(c) for _, c in g.terms()), default=0.0) > 1e-9 * (1 + scale):
                restricted.append(g.scale(1.0 / g.norm1()))
        W = HSystem(len(lam) - 1, restricted)
        Bl = np.array([P.array() for P in lam]).T

        def p2():
            for attempt in range(cfg.max_retries):
                info = find_point_info(W, cfg.with_seed(cfg.seed + 4 + 31 * attempt))
                P = _lift(Bl, info.point)
                if _not_in_span(P.array(), pts):
                    return info, P
            raise ConvergenceFailure("every P2 candidate fell in L(P0, P1)")

        i2, P2 = stage("P2 on second cone inside the 5-plane", 12, p2)
        stages.append(Stage("P2 on second cone inside the 5-plane", i2.degree, 12, full_residual(C2, P2.array())))
        pts.append(P2)
    try:
        iterated_cone(V, pts, tol=1e-7, build_last=False)
        chain_ok = True
    except Exception:
        chain_ok = False
    res = plane_residual(V, pts)
    certified = res <= max(cfg.residual_tol, 1e-8) * 100 and contains_plane(V, pts, tol=1e-6)
    # a few points of the plane should satisfy the tau check
    tau_ok = True
    combo_rng = np.random.default_rng(cfg.seed + 99)
    for _ in range(3):
        s = combo_rng.normal(size=len(pts)) + 1j * combo_rng.normal(size=len(pts))
        w = sum(si * P.array() for si, P in zip(s, pts))
        tau_ok = tau_ok and tau_point_check(T, list(w), tol=1e-7)
    return PipelineReport(n, depth, cfg.seed, stages, res, certified, chain_ok, tau_ok, pts)


__all__ = [
    "SliceConfig", "PointInfo", "find_point", "find_point_info", "quadric_k_plane", "PlaneResult",
    "run_pipeline", "PipelineReport", "solve_sliced", "full_residual",
    "DegreeCapExceeded", "ConvergenceFailure", "DimensionPrecondition", "ResourceGuard",
]
