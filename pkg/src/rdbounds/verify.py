"""Seeded property suites behind ``verify polar-identity`` and ``verify bertini``."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .polar import HSystem, cone_system, contains_plane, on_variety
from .poly import FieldTag, HPoly, PPoint, random_hpoly, technical_identity_check


@dataclass
class SuiteResult:
    name: str
    trials: int
    seed: int
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_record(self) -> dict:
        return {
            "name": self.name,
            "trials": str(self.trials),
            "seed": str(self.seed),
            "passed": self.passed,
            "failures": [str(f) for f in self.failures],
            "details": {k: str(v) for k, v in self.details.items()},
        }


def _rand_frac(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def polar_identity_suite(trials: int = 1000, seed: int = 0, d_max: int = 5, r_max: int = 4) -> SuiteResult:
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    res = SuiteResult("polar-identity", trials, seed)
    for t in range(trials):
        d = rng.randint(1, d_max)
        r = rng.randint(1, r_max)
        f = random_hpoly(nrng, r + 1, d, FieldTag.EXACT, density=rng.choice((0.3, 0.6, 1.0)))
        P = PPoint([1] + [_rand_frac(rng) for _ in range(r)])
        Q = PPoint([1] + [_rand_frac(rng) for _ in range(r)])
        lam, mu = _rand_frac(rng), _rand_frac(rng)
        if not technical_identity_check(f, P, Q, lam, mu):
            res.failures.append(f"trial {t}: d={d} r={r}")
    return res


def _line_ideal(P, Q, r, rng):
    """r-1 rational linear forms vanishing on the line through P and Q."""
    from .exact_core import rank_exact

    forms = []
    while len(forms) < r - 1:
        a = [Fraction(rng.randint(-5, 5)) for _ in range(r + 1)]
        # project a onto the annihilator of span(P, Q) by fixing two coordinates
        # (solve for the last two coefficients)
        p, q = P, Q
        det = p[r - 1] * q[r] - p[r] * q[r - 1]
        if det == 0:
            return None
        sp = sum(a[j] * p[j] for j in range(r - 1))
        sq = sum(a[j] * q[j] for j in range(r - 1))
        a[r - 1] = (-sp * q[r] + sq * p[r]) / det
        a[r] = (-sq * p[r - 1] + sp * q[r - 1]) / det
        if rank_exact(forms + [a]) == len(forms) + 1:
            forms.append(a)
    return [HPoly.linear(f, FieldTag.EXACT) for f in forms]


def _planted_instance(rng: random.Random, nrng):
    r = rng.randint(2, 6)
    P = [Fraction(1)] + [Fraction(rng.randint(-4, 4)) for _ in range(r)]
    Q = [Fraction(0)] + [Fraction(rng.randint(-4, 4)) for _ in range(r)]
    if all(x == 0 for x in Q[1:]):
        Q[1] = Fraction(1)
    ideal = _line_ideal(P, Q, r, rng)
    if ideal is None:
        return None
    polys = []
    for _ in range(rng.randint(1, 2)):
        d = rng.randint(1, 3)
        f = HPoly.zero(r + 1, d)
        for g in ideal:
            h = random_hpoly(nrng, r + 1, d - 1, FieldTag.EXACT, density=0.5) if d > 1 else \
                HPoly.constant(r + 1, Fraction(rng.randint(-3, 3)))
            f = f + g * h
        if not f.is_zero():
            polys.append(f)
    if not polys:
        return None
    return HSystem(r, polys), PPoint(P), PPoint(Q)


_NUMERIC_TYPES = ((2,), (3,), (2, 2), (2, 3), (1, 2), (1, 3), (1, 2, 2))


def bertini_suite(trials: int = 200, seed: int = 0, tol: float = 1e-7) -> SuiteResult:
    """Every point Q != P of the polar cone C(V;P) spans a line inside V.

    Even trials plant a rational line in an exact system; odd trials find P and
    Q numerically on a random complex system with ``planes.find_point``.
    """
    from .planes import SliceConfig, find_point

    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    res = SuiteResult("bertini", trials, seed)
    exact = numeric = 0
    for t in range(trials):
        try:
            if t % 2 == 0:
                inst = None
                while inst is None:
                    inst = _planted_instance(rng, nrng)
                V, P, Q = inst
                C = cone_system(V, P)
                if not on_variety(C, Q):
                    res.failures.append(f"trial {t}: planted Q not in the cone")
                elif not contains_plane(V, [P, Q]):
                    res.failures.append(f"trial {t}: exact line containment failed")
                exact += 1
            else:
                degs = rng.choice(_NUMERIC_TYPES)
                r = rng.randint(sum(degs) + 1, 6) if sum(degs) + 1 <= 6 else 6
                V = HSystem(r, [random_hpoly(nrng, r + 1, d, FieldTag.COMPLEX) for d in degs])
                cfg = SliceConfig(seed=seed * 100003 + t)
                P = find_point(V, cfg)
                C = cone_system(V, P, tol=1e-8)
                Q = find_point(C, cfg.with_seed(cfg.seed + 1), avoid=[P])
                if not contains_plane(V, [P, Q], tol=tol):
                    res.failures.append(f"trial {t}: numeric line containment failed")
                numeric += 1
        except Exception as exc:  # a failure of the suite, not a crash of the caller
            res.failures.append(f"trial {t}: {type(exc).__name__}: {exc}")
    res.details = {"exact": exact, "numeric": numeric, "fermat": fermat_line_check()}
    if not res.details["fermat"]:
        res.failures.append("Fermat cubic line check failed")
    return res


def fermat_line_check() -> bool:
    f = HPoly(4, 3, {(3, 0, 0, 0): 1, (0, 3, 0, 0): 1, (0, 0, 3, 0): 1, (0, 0, 0, 3): 1})
    V = HSystem(3, [f])
    P, Q = PPoint([1, -1, 0, 0]), PPoint([0, 0, 1, -1])
    return on_variety(cone_system(V, P), Q) and contains_plane(V, [P, Q])


__all__ = ["SuiteResult", "polar_identity_suite", "bertini_suite", "fermat_line_check"]
