"""Arithmetic audit of the polar-cone constructions for the n-6 .. n-14 bounds.

Every case is a declarative record of the numbers printed in its argument:
the working dimension, the cone type, the quadric split, each displayed
identity ``r = (a+1)(l)+c``, the plane sizes and extension degrees.  The
auditor recomputes the whole chain from the cone-type formula and the
quadric threshold ``r >= (k+1)l + k`` and compares entry by entry.

A disagreement is a *flag* when it is a listed misprint (the recomputed
chain still closes), and a *fail* otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .bounds import G, dim_moduli_hyp, dim_param_hyp, psi, waldron_ok
from .polar import IntersectionType, cone_type, cone_type_chain

RHO = {1: 25, 2: 60, 3: 264, 4: 806, 5: 1773, 6: 8905, 7: 34546, 8: 77040, 9: 612581}
ETA = {1: 36, 2: 108, 3: 324, 4: 972, 5: 2916, 6: 8748, 7: 26244, 8: 78732, 9: 236196}

PASS, FLAG, FAIL = "pass", "flag", "fail"


@dataclass
class LedgerCheck:
    description: str
    expected: tuple
    computed: tuple
    status: str
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def as_record(self) -> dict:
        return {
            "description": self.description,
            "expected": [str(x) for x in self.expected],
            "computed": [str(x) for x in self.computed],
            "status": self.status,
            "note": self.note,
        }


@dataclass
class LedgerReport:
    case: str
    checks: list = field(default_factory=list)
    max_extension_degree: int = 0
    expected_max_degree: Optional[int] = None
    final_point_degree: Optional[int] = None
    residuals: list = field(default_factory=list)
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        deg_ok = self.expected_max_degree is None or self.max_extension_degree == self.expected_max_degree
        return deg_ok and all(c.passed for c in self.checks)

    @property
    def flags(self) -> list:
        return [c for c in self.checks if c.status == FLAG]

    @property
    def failures(self) -> list:
        return [c for c in self.checks if c.status == FAIL]

    def as_record(self) -> dict:
        return {
            "case": self.case,
            "passed": self.passed,
            "checks": [c.as_record() for c in self.checks],
            "max_extension_degree": str(self.max_extension_degree),
            "expected_max_degree": None if self.expected_max_degree is None else str(self.expected_max_degree),
            "final_point_degree": None if self.final_point_degree is None else str(self.final_point_degree),
            "residuals": [f"{r:.3e}" for r in self.residuals],
            "seed": None if self.seed is None else str(self.seed),
        }


class _Builder:
    def __init__(self, report: LedgerReport, misprints: frozenset):
        self.report = report
        self.misprints = misprints

    def compare(self, key: str, description: str, printed, computed, note: str = ""):
        p = printed if isinstance(printed, tuple) else (printed,)
        c = computed if isinstance(computed, tuple) else (computed,)
        if p == c:
            status = PASS
        elif key in self.misprints:
            status = FLAG
        else:
            status = FAIL
        self.report.checks.append(LedgerCheck(description, p, c, status, note))
        return status

    def holds(self, description: str, ok: bool, values=(), note: str = ""):
        v = tuple(values)
        self.report.checks.append(LedgerCheck(description, v, v, PASS if ok else FAIL, note))
        return ok


# ---------------------------------------------------------------------------
# case data, transcribed as printed


@dataclass(frozen=True)
class QuadricStep:
    identity: tuple      # (lhs, a, l, c) for "lhs = (a+1)(l)+c"
    annotation: tuple    # (k, l) quoted when the quadric proposition is applied
    plane: int           # dimension of the plane produced
    degree: int          # quoted extension degree bound


@dataclass(frozen=True)
class TauCase:
    k: int
    ambient: int
    cone_type: str
    hyperplanes: int
    c1_dim: int
    quadrics: int
    power_of_two: Optional[int]
    split: tuple
    steps: tuple
    remaining: str
    dim_bound: tuple     # (D, codim, k) in "D - codim >= k"
    final_degree: int
    first_point_degree: Optional[int] = None
    misprints: frozenset = frozenset()


def _q(identity, annotation, plane, degree):
    return QuadricStep(tuple(identity), tuple(annotation), plane, degree)


CASES = {
    1: TauCase(1, 23, "[4:1, 3:2, 2:3, 1:4]", 4, 19, 3, None, (3,),
               (_q((19, 4, 3, 4), (4, 3), 4, 8),),
               "[4:1, 1:2]", (4, 3, 1), 36, first_point_degree=24,
               misprints=frozenset({"remaining type"})),
    2: TauCase(2, 58, "[4:1, 3:3, 2:6, 1:10]", 10, 48, 6, None, (6,),
               (_q((48, 5, 6, 5), (5, 6), 5, 64),),
               "[4:1, 3:3]", (6, 4, 2), 108,
               misprints=frozenset({"identity 1", "annotation 1", "plane 1"})),
    3: TauCase(3, 262, "[4:1, 3:4, 2:10, 1:20]", 35, 242, 10, 8, (2, 8),
               (_q((242, 80, 2, 80), (75, 2), 80, 4),
                _q((80, 8, 8, 8), (8, 8), 8, 256)),
               "[4:1, 3:4]", (8, 5, 3), 324,
               misprints=frozenset({"hyperplanes", "annotation 1"})),
    4: TauCase(4, 804, "[4:1, 3:5, 2:15, 1:35]", 35, 769, 15, 9, (6, 9),
               (_q((769, 109, 6, 109), (109, 6), 109, 64),
                _q((109, 10, 9, 10), (10, 9), 8, 512)),
               "[4:1, 3:5]", (10, 6, 4), 972,
               misprints=frozenset({"plane 2"})),
    5: TauCase(5, 1771, "[4:1, 3:6, 2:21, 1:56]", 56, 1715, 21, 11, (10, 11),
               (_q((1715, 155, 10, 155), (155, 10), 155, 1024),
                _q((155, 12, 11, 12), (12, 11), 10, 2048)),
               "[4:1, 3:6]", (12, 7, 5), 2916,
               misprints=frozenset({"plane 2"})),
    6: TauCase(6, 8903, "[4:1, 3:7, 2:28, 1:84]", 84, 8819, 28, 13, (2, 13, 13),
               (_q((8819, 2939, 2, 2939), (2939, 2), 2939, 4),
                _q((2939, 209, 13, 209), (209, 13), 209, 8192),
                _q((209, 14, 13, 14), (14, 13), 14, 8192)),
               "[4:1, 3:7]", (14, 8, 6), 8748),
    7: TauCase(7, 34544, "[4:1, 3:8, 2:36, 1:120]", 120, 34424, 36, 14, (8, 14, 14),
               (_q((34424, 3824, 8, 3824), (3824, 8), 3824, 256),
                _q((3824, 254, 14, 254), (254, 14), 254, 16384),
                _q((254, 16, 14, 16), (16, 14), 16, 16384)),
               "[4:1, 3:8]", (16, 9, 7), 26244),
    8: TauCase(8, 77038, "[4:1, 3:9, 2:45, 1:165]", 165, 76873, 45, 16, (13, 16, 16),
               (_q((76873, 5490, 13, 5490), (5490, 13), 5490, 8192),
                _q((5490, 322, 16, 322), (322, 16), 322, 65536),
                _q((322, 18, 16, 18), (18, 16), 18, 65536)),
               "[4:1, 3:9]", (18, 10, 8), 78732),
    9: TauCase(9, 612579, "[4:1, 3:10, 2:55, 1:220]", 220, 612359, 55, 17, (4, 17, 17, 17),
               (_q((612359, 122471, 4, 122471), (122471, 4), 122471, 16),
                _q((122471, 6803, 17, 6805), (6805, 17), 6805, 131072),
                _q((6803, 377, 17, 377), (18, 16), 18, 65536),
                _q((377, 20, 17, 20), (18, 16), 20, 131072)),
               "[4:1, 3:10]", (20, 11, 9), 236196,
               misprints=frozenset({"identity 2", "annotation 2", "plane 2", "annotation 3",
                                    "plane 3", "degree 3", "annotation 4"})),
}


def _largest_power_below(n: int) -> int:
    """Exponent e with 2^e < n <= 2^(e+1)."""
    return (n - 1).bit_length() - 1


def _audit_tau_case(c: TauCase) -> LedgerReport:
    k = c.k
    rep = LedgerReport(f"k{k}", expected_max_degree=ETA[k])
    b = _Builder(rep, c.misprints)

    b.compare("ambient", "working dimension rho(k) - 2", c.ambient, RHO[k] - 2)
    t = cone_type_chain(4, k)
    b.compare("cone type", f"type of the {k}-th polar cone of a (1,2,3,4) intersection",
              c.cone_type, str(t))
    b.holds("cone type agrees with iterating the cone-type step",
            t == cone_type({4: 1, 3: 1, 2: 1, 1: 1}, k), (str(cone_type({4: 1, 3: 1, 2: 1, 1: 1}, k)),))
    b.compare("hyperplanes", "number of hyperplanes in the cone", c.hyperplanes, t[1])
    c1 = RHO[k] - 2 - t[1]
    b.compare("c1 dim", "dimension of the linear part of the cone", c.c1_dim, c1)
    b.compare("quadrics", "number of quadrics in the cone", c.quadrics, t[2])

    # recompute the quadric chain backward from the plane the final step needs
    final_plane = 2 * k + 2          # D - (1 + #cubics) >= k with #cubics = k + 1
    need = [final_plane]
    for ell in reversed(c.split):
        D = need[0]
        need.insert(0, (D + 1) * ell + D)
    planes = need[1:]
    b.compare("rho", "rho(k) recomputed from the chain", RHO[k], need[0] + t[1] + 2,
              note="top of the chain + hyperplanes + 2")
    b.compare("split", "split sizes sum to the quadric count", c.quadrics, sum(c.split))

    degrees = [2 ** ell for ell in c.split]
    if c.power_of_two is not None:
        e = _largest_power_below(ETA[k])
        b.compare("power of two", f"largest power of 2 below eta({k}) = {ETA[k]}", c.power_of_two, e)
        b.holds("every split piece solves within degree 2^e", max(c.split) <= e, (max(c.split), e))
    b.holds("every quadric step degree is below eta(k)", max(degrees) < ETA[k], (max(degrees), ETA[k]))

    r = c1
    for i, (st, ell, kp) in enumerate(zip(c.steps, c.split, planes), start=1):
        lhs, a, l_pr, cc = st.identity
        printed_value = (a + 1) * l_pr + cc
        status = b.compare(f"identity {i}",
                           f"displayed identity {lhs} = ({a}+1)({l_pr})+{cc}",
                           (lhs, a, l_pr, cc), (r, kp, ell, kp),
                           note=f"printed right side evaluates to {printed_value}")
        if status != PASS:
            rep.checks[-1].note += f"; recomputed {r} = ({kp}+1)({ell})+{kp}"
        b.holds(f"quadric threshold at step {i}: r >= (k+1)l+k", r >= (kp + 1) * ell + kp,
                (r, (kp + 1) * ell + kp))
        b.compare(f"annotation {i}", f"(k, l) quoted at step {i}", st.annotation, (kp, ell))
        b.compare(f"plane {i}", f"dimension of the plane from step {i}", st.plane, kp)
        b.compare(f"degree {i}", f"extension degree at step {i}", st.degree, 2 ** ell)
        r = kp

    remaining = IntersectionType.of({4: t[4], 3: t[3]})
    b.compare("remaining type", "type of the cone restricted to the last plane", c.remaining, str(remaining))
    D, codim, kk = c.dim_bound
    b.compare("dim bound", "dimension bound D - codim >= k", (D, codim, kk),
              (r, remaining.total, k))
    b.holds("dimension bound holds", r - remaining.total >= k, (r - remaining.total, k))
    final = remaining.degree_product
    b.compare("final degree", "degree of the last point solve", c.final_degree, final)
    b.compare("eta", "final degree equals eta(k) = 4*3^(k+1)", ETA[k], 4 * 3 ** (k + 1))

    all_degrees = degrees + [final]
    if c.first_point_degree is not None:
        b.compare("first point", "degree of the first point on the (1,2,3,4) intersection",
                  c.first_point_degree, math.prod((1, 2, 3, 4)))
        all_degrees.append(c.first_point_degree)
    else:
        b.holds("inherited extension is no larger", ETA[k - 1] <= ETA[k], (ETA[k - 1], ETA[k]))
    rep.max_extension_degree = max(all_degrees)

    slice_deg = math.factorial(k + 4) // 24
    b.compare("slice degree", "degree of the plane-slice solve (k+4)!/24", slice_deg,
              math.prod(range(5, k + 5)))
    rep.final_point_degree = slice_deg
    if k in (2, 3):
        b.holds("eta(k) >= (k+4)!/24", ETA[k] >= slice_deg, (ETA[k], slice_deg))
    if k >= 2:
        b.compare("threshold", f"1 + max(eta, (k+4)!/24) equals G({k + 5})",
                  1 + max(ETA[k], slice_deg), G(k + 5).value)
        b.holds("rho(k) is within the threshold", RHO[k] <= 1 + max(ETA[k], slice_deg),
                (RHO[k], 1 + max(ETA[k], slice_deg)))
    return rep


def _audit_n6() -> LedgerReport:
    rep = LedgerReport("n6", expected_max_degree=12)
    b = _Builder(rep, frozenset())
    base = {3: 1, 2: 1, 1: 2}            # tau_{1,2,3} cut by the hyperplane H
    b.compare("ambient", "working dimension for n = 19", 18, 19 - 1)
    base_t = IntersectionType.of(base)
    b.compare("P0 degree", "degree of the first point", 6, base_t.degree_product)
    t1 = cone_type(base, 1)
    b.compare("cone 1", "type of the first cone", "[3:1, 2:2, 1:4]", str(t1))
    b.compare("dim 1", "dimension bound 18 - 7 = 11", (18, 7, 11), (18, t1.total, 18 - t1.total))
    b.compare("P1 degree", "degree of the second point", 12, IntersectionType.of({3: t1[3], 2: t1[2]}).degree_product)
    t2 = cone_type(base, 2)
    b.compare("cone 2", "type of the second cone", "[3:1, 2:3, 1:7]", str(t2))
    b.holds("closed-form chain type differs only by the extra hyperplane",
            str(cone_type_chain(3, 2)) == "[3:1, 2:3, 1:6]", (str(cone_type_chain(3, 2)),))
    lin_dim = 18 - t2[1]
    b.compare("linear part", "7 hyperplanes leave P^11", 11, lin_dim)
    ell = 1
    kp = (lin_dim - ell) // (ell + 1)    # largest plane the quadric threshold allows
    b.compare("identity", "11 = (5+1)(1)+5", (11, 5, 1, 5), (lin_dim, kp, ell, kp))
    b.holds("quadric threshold r >= (k+1)l+k", lin_dim >= (kp + 1) * ell + kp, (lin_dim, (kp + 1) * ell + kp))
    rem = IntersectionType.of({3: t2[3], 2: t2[2] - 1})
    b.compare("remaining type", "type inside the 5-plane", "[3:1, 2:2]", str(rem))
    b.compare("dim 2", "dimension bound 5 - 3 >= 2", (5, 3, 2), (kp, rem.total, 2))
    b.holds("dimension bound holds", kp - rem.total >= 2, (kp - rem.total, 2))
    b.compare("P2 degree", "degree 3*2^2 = 12", 12, rem.degree_product)
    degrees = [base_t.degree_product, IntersectionType.of({3: t1[3], 2: t1[2]}).degree_product,
               2 ** ell, rem.degree_product]
    rep.max_extension_degree = max(degrees)
    slice_deg = math.prod(range(4, 6))
    b.compare("slice degree", "degree of tau_{1..5} on the plane", 20, slice_deg)
    rep.final_point_degree = slice_deg
    b.compare("threshold", "1 + max(12, 20) equals G(6)", 1 + max(rep.max_extension_degree, slice_deg), G(6).value)
    return rep


CASE_IDS = ("n6",) + tuple(f"k{k}" for k in range(1, 10))


def audit_ledger(case: str) -> LedgerReport:
    case = case.strip().lower()
    if case == "n6":
        return _audit_n6()
    if case.startswith("k") and case[1:].isdigit() and int(case[1:]) in CASES:
        return _audit_tau_case(CASES[int(case[1:])])
    if case == "wolfson":
        return wolfson_pipeline_audit()
    raise ValueError(f"unknown ledger case {case!r}; expected one of {', '.join(CASE_IDS)} or wolfson")


def wolfson_pipeline_audit() -> LedgerReport:
    rep = LedgerReport("wolfson")
    b = _Builder(rep, frozenset())
    chain = psi(4, 8)
    b.compare("psi(4,8)", "psi(4,8) chain", (8, 63, 778, 1557), chain.entries)
    b.compare("n threshold", "n >= psi(4,8)_3 + 2", 1559, chain[3] + 2)
    ok1, s1 = waldron_ok(3, 778, 63)
    ok2, s2 = waldron_ok(4, 63, 8)
    b.compare("slack 1", "Waldron slack (3, 778, 63)", 0, s1)
    b.compare("slack 2", "Waldron slack (4, 63, 8)", 0, s2)
    b.compare("dim M(3;778)", "dim M(3;778)", 78485029, dim_moduli_hyp(3, 778))
    b.compare("dim H(4;63)", "dim H(4;63)", 766479, dim_param_hyp(4, 63))
    p5 = psi(5, 9)
    b.compare("psi(5,9)_4+1", "psi(5,9)_4 + 1", 54097786526, p5[4] + 1)
    big = dim_moduli_hyp(3, p5[3])
    b.compare("dim M(3;psi_3)", "dim M(3; psi(5,9)_3)", 3298353885918738132194252727911, big)
    t9 = cone_type_chain(5, 9)
    b.compare("cone 9 type", "type of the 9-th cone of a (1,..,5) intersection",
              "[5:1, 4:10, 3:55, 2:220, 1:715]", str(t9))
    prod = 5 * 4 ** 10 * 3 ** 55
    b.compare("degree product", "5*4^10*3^55", 914616279415496004448658427740160, prod)
    b.compare("degree from type", "degree of the cubic-and-up part", prod,
              IntersectionType.of({5: t9[5], 4: t9[4], 3: t9[3]}).degree_product)
    b.holds("degree exceeds the moduli dimension", prod > big, (prod, big))
    rep.max_extension_degree = 0
    return rep


def audit_all() -> list:
    return [audit_ledger(c) for c in CASE_IDS]


__all__ = ["LedgerCheck", "LedgerReport", "TauCase", "QuadricStep", "CASES", "CASE_IDS", "RHO", "ETA",
           "audit_ledger", "audit_all", "wolfson_pipeline_audit"]
