"""Polar cones, iterated cones and plane containment, all as generator systems."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .exact_core import binom
from .poly import (
    DEFAULT_TOL,
    FieldTag,
    HPoly,
    PPoint,
    points_independent,
    polar,
    residual_ok,
    restrict_to_span,
)


class NotOnVariety(ValueError):
    pass


class PolarChainError(ValueError):
    def __init__(self, step: int, reason: str):
        super().__init__(f"step {step}: {reason}")
        self.step = step
        self.reason = reason


@dataclass(frozen=True)
class IntersectionType:
    """Degree -> multiplicity map, rendered as "[d:l_d, ..., 1:l_1]"."""

    counts: tuple  # sorted ((degree, mult), ...) descending, zero mults dropped

    @classmethod
    def of(cls, counts) -> "IntersectionType":
        if isinstance(counts, IntersectionType):
            return counts
        if not isinstance(counts, Mapping):
            # a sequence of degrees, e.g. (1, 2, 3)
            m = {}
            for deg in counts:
                m[deg] = m.get(deg, 0) + 1
            counts = m
        for deg, mult in counts.items():
            if deg < 1 or mult < 0:
                raise ValueError(f"bad type entry {deg}:{mult}")
        return cls(tuple(sorted(((int(d), int(l)) for d, l in counts.items() if l), reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "IntersectionType":
        body = text.strip().strip("[]")
        pairs = [p for p in body.replace(",", " ").split() if p]
        return cls.of({int(a): int(b) for a, b in (p.split(":") for p in pairs)})

    def as_dict(self) -> dict:
        return dict(self.counts)

    def __getitem__(self, deg) -> int:
        return self.as_dict().get(deg, 0)

    @property
    def max_degree(self) -> int:
        return self.counts[0][0] if self.counts else 0

    @property
    def total(self) -> int:
        return sum(l for _, l in self.counts)

    @property
    def degree_product(self) -> int:
        p = 1
        for d, l in self.counts:
            p *= d ** l
        return p

    def __str__(self):
        return "[" + ", ".join(f"{d}:{l}" for d, l in self.counts) + "]"


def cone_type_step(t: IntersectionType) -> IntersectionType:
    c = t.as_dict()
    top = t.max_degree
    return IntersectionType.of({j: sum(c.get(i, 0) for i in range(j, top + 1)) for j in range(1, top + 1)})


def cone_type(t, k: int) -> IntersectionType:
    if k < 0:
        raise ValueError("k must be nonnegative")
    t = IntersectionType.of(t)
    for _ in range(k):
        t = cone_type_step(t)
    return t


def cone_type_chain(d: int, k: int) -> IntersectionType:
    """Closed form for the k-th cone of a type (1, ..., d) intersection."""
    return IntersectionType.of({j: binom(k + d - j, d - j) for j in range(1, d + 1)})


@dataclass(frozen=True)
class HSystem:
    r: int
    polys: tuple

    def __init__(self, r: int, polys: Sequence[HPoly]):
        polys = tuple(polys)
        for f in polys:
            if f.nvars != r + 1:
                raise ValueError(f"generator in {f.nvars} variables, ambient P^{r} needs {r + 1}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "polys", polys)

    @property
    def field(self) -> FieldTag:
        if any(f.field is FieldTag.COMPLEX for f in self.polys):
            return FieldTag.COMPLEX
        return FieldTag.EXACT

    def type(self) -> IntersectionType:
        return IntersectionType.of([f.degree for f in self.polys if f.degree > 0])

    def to_field(self, field) -> "HSystem":
        return HSystem(self.r, [f.to_field(field) for f in self.polys])

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)


def _coords(P):
    return list(P.coords) if isinstance(P, PPoint) else list(P)


def on_variety(V: HSystem, P, tol: float = DEFAULT_TOL) -> bool:
    v = _coords(P)
    return all(residual_ok(f, v, tol) for f in V.polys)


def cone_system(V: HSystem, P, tol: float = DEFAULT_TOL) -> HSystem:
    if not on_variety(V, P, tol):
        raise NotOnVariety("P does not lie on V")
    v = _coords(P)
    out = []
    for f in V.polys:
        for k in range(f.degree):
            out.append(polar(f, v, k))
    return HSystem(V.r, out)


def _span_ok(points, new) -> bool:
    vecs = [_coords(p) for p in points] + [_coords(new)]
    return points_independent(vecs)


@dataclass
class PolarChain:
    base: HSystem
    points: list = field(default_factory=list)
    systems: list = field(default_factory=list)
    nested: bool = True

    def step_records(self) -> list:
        recs = []
        for i, P in enumerate(self.points):
            recs.append({
                "index": i,
                "point": [_num_text(c) for c in _coords(P)],
                "system_degrees": [f.degree for f in self.systems[i].polys],
                "type": str(self.systems[i].type()),
                "certified": True,
            })
        return recs


def _num_text(c) -> str:
    if isinstance(c, complex):
        return repr(c)
    return str(c)


def _nested(prev: HSystem, nxt: HSystem) -> bool:
    """Each generator g of prev appears (as deg(g)! * g) among nxt's generators."""
    have = set(nxt.polys)
    return all(g.scale(math.factorial(g.degree)) in have for g in prev.polys)


def iterated_cone(V: HSystem, points: Sequence, tol: float = DEFAULT_TOL, build_last: bool = True) -> PolarChain:
    chain = PolarChain(V, [], [V])
    for step, P in enumerate(points):
        S = chain.systems[-1]
        if not on_variety(S, P, tol):
            raise PolarChainError(step, "point does not lie on the current cone")
        if chain.points and not _span_ok(chain.points, P):
            raise PolarChainError(step, "point lies in the span of its predecessors")
        chain.points.append(P)
        if build_last or step < len(points) - 1:
            nxt = cone_system(S, P, tol)
            chain.nested = chain.nested and _nested(S, nxt)
            chain.systems.append(nxt)
    return chain


def is_k_polar_point(V: HSystem, points: Sequence, tol: float = DEFAULT_TOL) -> bool:
    try:
        iterated_cone(V, points, tol, build_last=False)
    except PolarChainError:
        return False
    return True


def plane_residual(V: HSystem, points: Sequence) -> float:
    """Largest scale-relative coefficient of the generators restricted to the span."""
    worst = 0.0
    for f in V.polys:
        g = restrict_to_span(f, points)
        if not len(g):
            continue
        if g.field is FieldTag.EXACT and f.field is FieldTag.EXACT:
            return float("inf")
        scale = 1.0 + f.norm1() * len(points) ** f.degree
        worst = max(worst, max(abs(complex(c)) for _, c in g.terms()) / scale)
    return worst


def contains_plane(V: HSystem, points: Sequence, tol: float = 1e-8) -> bool:
    pts = list(points)
    for i in range(len(pts)):
        for j in range(i):
            if not _span_ok([pts[j]], pts[i]):
                raise ValueError("points are not pairwise distinct")
    exact = V.field is FieldTag.EXACT and all(
        not isinstance(c, complex) for p in pts for c in _coords(p))
    if exact:
        return all(restrict_to_span(f, pts).is_zero() for f in V.polys)
    return plane_residual(V, pts) <= tol


def chain_to_json(chain: PolarChain) -> list:
    return chain.step_records()


__all__ = [
    "IntersectionType", "HSystem", "PolarChain", "cone_system", "iterated_cone", "cone_type",
    "cone_type_chain", "contains_plane", "is_k_polar_point", "plane_residual", "on_variety",
    "NotOnVariety", "PolarChainError", "chain_to_json",
]
