"""Exact bounding functions: theta, phi, G, psi, Phi, F and their condition checks.

Everything here is integer or rational arithmetic.  The only floating
point lives in ``HighPrecisionReal`` (interval arithmetic) for the few
inequalities that involve logarithms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Optional

from .exact_core import (
    DEFAULT_PRECISION,
    HighPrecisionReal,
    UndecidableComparison,
    binom,
    ceil_div,
    factorial_ratio,
    round_rational,
)


class DomainError(ValueError):
    pass


class EmptyModuliSpace(ValueError):
    pass


class Source(str, Enum):
    FACTORIAL = "factorial"
    MODULI = "moduli"


@dataclass(frozen=True)
class Sourced:
    """An exact value together with the branch of the max that produced it."""

    value: int
    source: Source


# ---------------------------------------------------------------------------
# theta and dimension counts


def theta(d: int, k: int) -> int:
    if d < 3 or k < 1:
        raise DomainError(f"theta needs d >= 3 and k >= 1, got d={d}, k={k}")
    return _theta_formula(d, k)


def _theta_formula(d: int, k: int) -> int:
    return k + ceil_div(binom(k + d + 1, d) - (k + 2), k + 1)


def dim_param_hyp(d: int, r: int) -> int:
    return binom(r + d, d) - 1


def dim_moduli_hyp(d: int, r: int) -> int:
    v = binom(r + d, d) - (r + 1) ** 2
    if v < 0:
        raise EmptyModuliSpace(f"moduli space of degree-{d} hypersurfaces in P^{r} is empty")
    return v


def dim_param_chain(d: int, r: int) -> int:
    v = binom(r + d + 1, d) - (r + d + 1)
    if v < 0:
        raise EmptyModuliSpace(f"parameter space for type (2..{d}) in P^{r} is empty")
    return v


def dim_moduli_chain(d: int, r: int) -> int:
    v = binom(r + d + 1, d) - (r + 1) ** 2 - (r + d)
    if v < 0:
        raise EmptyModuliSpace(f"moduli space for type (2..{d}) in P^{r} is empty")
    return v


def _binom_capped(n: int, k: int, cap: int) -> Optional[int]:
    """binom(n, k), or None as soon as a partial product already exceeds cap.

    The partial products binom(n-k+j, j) increase with j, so an early
    overshoot proves the final value overshoots too.
    """
    k = min(k, n - k) if n >= k else k
    if k < 0 or n < k:
        return 0
    c = 1
    base = n - k
    for j in range(1, k + 1):
        c = c * (base + j) // j
        if c > cap:
            return None
    return c


def waldron_ok(d: int, r: int, k: int) -> tuple[bool, int]:
    if d < 3:
        raise DomainError("the Waldron criterion is stated for d >= 3")
    slack = (k + 1) * (r - k) - binom(k + d, d)
    return slack >= 0, slack


def _type_counts(t) -> dict[int, int]:
    counts = getattr(t, "counts", t)
    return {int(deg): int(mult) for deg, mult in dict(counts).items() if mult}


def debarre_manivel_ok(t, r: int, k: int) -> tuple[bool, int]:
    counts = _type_counts(t)
    if counts == {2: 1}:
        raise DomainError("a single quadric is excluded from the Debarre-Manivel criterion")
    need = sum(mult * binom(k + deg, deg) for deg, mult in counts.items())
    slack = (k + 1) * (r - k) - need
    return slack >= 0, slack


def chain_type(d: int) -> dict[int, int]:
    """Type (2, 3, ..., d) as a degree -> multiplicity map."""
    return {i: 1 for i in range(2, d + 1)}


# ---------------------------------------------------------------------------
# phi and G


G_SMALL = {
    1: 2, 2: 3, 3: 4, 4: 5, 5: 9, 6: 21, 7: 109, 8: 325, 9: 1681,
    10: 15121, 11: 151201, 12: 1663201, 13: 19958401, 14: 259459201,
}


def phi(d: int, k: int) -> Sourced:
    if d < 4 or k < 1:
        raise DomainError(f"phi needs d >= 4 and k >= 1, got d={d}, k={k}")
    fact = factorial_ratio(d + k, d)
    mod = dim_moduli_chain(d, theta(d, k))
    if fact >= mod:
        return Sourced(fact, Source.FACTORIAL)
    return Sourced(mod, Source.MODULI)


def _phi_below(d: int, k: int, cap: Optional[int]) -> Optional[Sourced]:
    """phi(d, k) if it is strictly below cap, else None (cheap early exit)."""
    if cap is None:
        return phi(d, k)
    fact = factorial_ratio(d + k, d)
    if fact >= cap:
        return None
    r = theta(d, k)
    extra = (r + 1) ** 2 + (r + d)
    b = _binom_capped(r + d + 1, d, cap + extra)
    if b is None:
        return None
    mod = b - extra
    if mod < 0:
        raise EmptyModuliSpace(f"moduli space for type (2..{d}) in P^{r} is empty")
    val = Sourced(fact, Source.FACTORIAL) if fact >= mod else Sourced(mod, Source.MODULI)
    return val if val.value < cap else None


@dataclass(frozen=True)
class Witnessed:
    value: int
    witness: Optional[int] = None
    source: Optional[Source] = None


def G(m: int) -> Witnessed:
    if m < 1:
        raise DomainError("G is defined for m >= 1")
    if m in G_SMALL:
        return Witnessed(G_SMALL[m])
    best: Optional[Sourced] = None
    best_d = None
    for d in range(4, m - 1):
        cand = _phi_below(d, m - d - 1, None if best is None else best.value)
        if cand is not None:
            best, best_d = cand, d
    return Witnessed(best.value + 1, best_d, best.source)


# ---------------------------------------------------------------------------
# psi, Phi and F


@dataclass(frozen=True)
class PsiVector:
    d: int
    k: int
    entries: tuple

    def __getitem__(self, i):
        return self.entries[i]

    def __len__(self):
        return len(self.entries)


def psi_step(x: int, j: int) -> int:
    """x + ceil(binom(x+j, j)/(x+1)); strictly increasing in x."""
    return x + ceil_div(binom(x + j, j), x + 1)


def psi(d: int, k: int) -> PsiVector:
    if d < 3 or k < 1:
        raise DomainError(f"psi needs d >= 3 and k >= 1, got d={d}, k={k}")
    out = [k]
    for i in range(d - 2):
        out.append(psi_step(out[-1], d - i))
    out.append(2 * out[-1] + 1)
    return PsiVector(d, k, tuple(out))


def _psi_top(d: int, k: int, cap: Optional[int] = None) -> Optional[int]:
    """psi(d,k)_{d-2}; None once an intermediate entry passes cap."""
    x = k
    for i in range(d - 2):
        x = psi_step(x, d - i)
        if cap is not None and x > cap:
            return None
    return x


def Phi(d: int, k: int) -> Sourced:
    if d < 1 or k < 0:
        raise DomainError(f"Phi needs d >= 1 and k >= 0, got d={d}, k={k}")
    fact = factorial_ratio(d + k, d)
    if d <= 2:
        mod = d + k + 1
    else:
        mod = dim_moduli_hyp(3, _psi_top(d, k)) + d + k + 1
    if fact >= mod:
        return Sourced(fact, Source.FACTORIAL)
    return Sourced(mod, Source.MODULI)


def _Phi_below(d: int, k: int, cap: Optional[int]) -> Optional[Sourced]:
    if cap is None:
        return Phi(d, k)
    fact = factorial_ratio(d + k, d)
    if fact >= cap:
        return None
    if d >= 3:
        # dim M(3; x) >= x - 2, so psi_{d-2} > cap + 2 already loses.
        if _psi_top(d, k, cap + 2) is None:
            return None
    val = Phi(d, k)
    return val if val.value < cap else None


def F(m: int) -> Witnessed:
    if m < 1:
        raise DomainError("F is defined for m >= 1")
    if m <= 3:
        return Witnessed(m + 1)
    best: Optional[Sourced] = None
    best_d = None
    for d in range(1, m - 1):
        cand = _Phi_below(d, m - d - 1, None if best is None else best.value)
        if cand is not None:
            best, best_d = cand, d
    return Witnessed(2 * (best.value // 2) + 1, best_d, best.source)


def brauer(m: int) -> int:
    if m < 2:
        raise DomainError("brauer needs m >= 2")
    return math.factorial(m - 1) + 1


# ---------------------------------------------------------------------------
# tables


def plane_witness(m: int, d: Optional[int]) -> Optional[str]:
    if d is None:
        return None
    idx = ",".join(str(i) for i in range(1, d + 1)) if d <= 4 else f"1,…,{d}"
    return f"(m−{d + 1})-plane on τ_{{{idx}}}"


@dataclass(frozen=True)
class BoundsRow:
    m: int
    G_value: int
    F_value: int
    G_witness: Optional[tuple] = None
    F_witness: Optional[tuple] = None
    G_source: Optional[Source] = None
    F_source: Optional[Source] = None

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.F_value, self.G_value)

    @property
    def ratio_text(self) -> str:
        return round_rational(self.ratio, 3)

    @property
    def G_plane(self) -> Optional[str]:
        return plane_witness(self.m, self.G_witness[0] if self.G_witness else None)

    @property
    def F_plane(self) -> Optional[str]:
        return plane_witness(self.m, self.F_witness[0] if self.F_witness else None)

    def as_record(self) -> dict:
        def wit(w):
            return None if w is None else {"d": str(w[0]), "k": str(w[1])}

        return {
            "m": str(self.m),
            "G": str(self.G_value),
            "F": str(self.F_value),
            "ratio": self.ratio_text,
            "G_witness": wit(self.G_witness),
            "F_witness": wit(self.F_witness),
            "G_source": None if self.G_source is None else self.G_source.value,
            "F_source": None if self.F_source is None else self.F_source.value,
            "G_plane": self.G_plane,
            "F_plane": self.F_plane,
        }


TABLE_CAP = 200


def bounds_row(m: int) -> BoundsRow:
    g, f = G(m), F(m)
    gw = None if g.witness is None else (g.witness, m - g.witness - 1)
    fw = None if f.witness is None else (f.witness, m - f.witness - 1)
    return BoundsRow(m, g.value, f.value, gw, fw, g.source, f.source)


def _rows(ms, cap):
    ms = list(ms)
    for m in ms:
        if not 1 <= m <= cap:
            raise DomainError(f"table rows must lie in 1..{cap}, got {m}")
    return [bounds_row(m) for m in ms]


def table1(ms=range(2, 19), cap: int = TABLE_CAP) -> list[BoundsRow]:
    return _rows(ms, cap)


def table2(ms=range(19, 60), cap: int = TABLE_CAP) -> list[BoundsRow]:
    return _rows(ms, cap)


# ---------------------------------------------------------------------------
# condition checks


def theta_upper_bound_check(d: int, m: int) -> bool:
    if not m > d >= 4:
        raise DomainError(f"need m > d >= 4, got d={d}, m={m}")
    # m = d+1 gives k = 0; the closed form still makes sense there.
    return _theta_formula(d, m - d - 1) <= m - d - 2 + binom(m, d)


def varphi_condition_check(d: int, m: int) -> bool:
    if d < 4 or m < 2 * d * d + 7 * d + 6:
        raise DomainError(f"need d >= 4 and m >= 2d^2+7d+6, got d={d}, m={m}")
    return phi(d + 1, m - d - 2).value < phi(d, m - d - 1).value


_EXACT_BITS_CAP = 1 << 16


def frak_c_log(d: int, prec: int = DEFAULT_PRECISION) -> HighPrecisionReal:
    if d < 4:
        raise DomainError("frak_c_log needs d >= 4")
    acc = HighPrecisionReal.of(0, prec)
    for i in range(3, d):
        acc = acc - math.factorial(i - 2) * HighPrecisionReal.of(math.factorial(i), prec).log()
    return acc


@dataclass(frozen=True)
class OmegaValue:
    log: HighPrecisionReal
    exact: Optional[Fraction] = None

    def __float__(self):
        if self.exact is not None:
            return float(self.exact)
        return float(self.log.exp())


def omega(d: int, m: int, prec: int = DEFAULT_PRECISION) -> OmegaValue:
    if d < 4 or m < d + 2:
        raise DomainError(f"omega needs d >= 4 and m >= d+2, got d={d}, m={m}")
    e = math.factorial(d - 2)
    base = m - d - 1
    lg = frak_c_log(d, prec) + e * HighPrecisionReal.of(base, prec).log()
    bits = sum(math.factorial(i - 2) * math.factorial(i).bit_length() for i in range(3, d))
    bits += e * base.bit_length()
    exact = None
    if bits <= _EXACT_BITS_CAP:
        den = math.prod(math.factorial(i) ** math.factorial(i - 2) for i in range(3, d))
        exact = Fraction(base ** e, den)
    return OmegaValue(lg, exact)


def _decide(fn, prec: int, max_prec: int = 1 << 13):
    p = prec
    while True:
        try:
            return fn(p)
        except UndecidableComparison:
            if p >= max_prec:
                raise
            p *= 2


def omega_condition_check(d: int, m: int, prec: int = DEFAULT_PRECISION) -> bool:
    if d < 6 or m < d * d - d + 4:
        raise DomainError(f"need d >= 6 and m >= d^2-d+4, got d={d}, m={m}")
    lhs = Fraction(m * m) - Fraction(5, 2) * m + Fraction(1, 2)

    def go(p):
        H = lambda x: HighPrecisionReal.of(x, p)  # noqa: E731
        rhs = (d + 1) + H(d).log() * Fraction(2 * d + 1, 2)
        rhs = rhs + 6 * math.factorial(d - 3) * (H(d - 2) - H(d - 1).log())
        return H(lhs) < rhs

    return _decide(go, prec)


def simplified_omega_check(d: int, m: int) -> bool:
    if d < 6 or m < d * d - d + 4:
        raise DomainError(f"need d >= 6 and m >= d^2-d+4, got d={d}, m={m}")
    return Fraction(m * m) - Fraction(5, 2) * m <= 6 * math.factorial(d - 3) + 2 * d + 1


@dataclass
class CheckLine:
    name: str
    param: str
    ok: bool
    detail: str = ""


@dataclass
class SuiteReport:
    lines: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(x.ok for x in self.lines)

    def add(self, name, param, ok, detail=""):
        self.lines.append(CheckLine(name, str(param), bool(ok), detail))

    def failures(self):
        return [x for x in self.lines if not x.ok]


def log_C_bound(d: int, prec: int) -> bool:
    C = max(binom(d + 1, i) for i in range(d + 2))
    return HighPrecisionReal.of(Fraction(C, d + 1), prec).log() <= Fraction(2 * d + 3, 2)


def frak_c_lower_bound(d: int, prec: int) -> bool:
    H = lambda x: HighPrecisionReal.of(x, prec)  # noqa: E731
    f2, f3 = math.factorial(d - 2), math.factorial(d - 3)
    lg = H(d - 1).log()
    bound = 2 * f2 - 2 * f2 * lg - 2 * f3 * lg
    return bound <= frak_c_log(d, prec)


def stirling_bounds(a: int, prec: int) -> bool:
    """sqrt(2 pi) a^(a+1/2) e^(-a) <= a! <= a^(a+1/2) e^(1-a), compared in logs."""
    H = lambda x: HighPrecisionReal.of(x, prec)  # noqa: E731
    log_fact = H(math.factorial(a)).log()
    la = H(a).log()
    half = Fraction(2 * a + 1, 2)
    lower = (2 * HighPrecisionReal.pi(prec)).log() / 2 + half * la - a
    upper = half * la + (1 - a)
    return lower <= log_fact and log_fact <= upper


def analytic_inequality_suite(
    d_range=range(4, 41), a_range=range(1, 501), prec: int = DEFAULT_PRECISION
) -> SuiteReport:
    rep = SuiteReport()
    for d in d_range:
        rep.add("log(C_d/(d+1)) <= d+3/2", d, _decide(lambda p: log_C_bound(d, p), prec))
        rep.add("log c_d lower bound", d, _decide(lambda p: frak_c_lower_bound(d, p), prec))
    for a in a_range:
        rep.add("Stirling bounds", a, _decide(lambda p: stirling_bounds(a, p), prec))
    return rep


_PSI_EXACT_CAP = 1 << 14


def _psi_chain_entry(d: int, m: int) -> Optional[int]:
    """psi(d, m-d-1)_{d-2} if its bit length stays under the cap."""
    k = m - d - 1
    x = k
    for i in range(d - 2):
        x = psi_step(x, d - i)
        if x.bit_length() > _PSI_EXACT_CAP:
            return None
    return x


def psi_monotonicity_check(m: int) -> bool:
    """psi(2,m-3)_0 <= psi(3,m-4)_1 <= ... <= psi(m-2,1)_{m-4}.

    Neighbours d and d+1 share the tail of step maps S_d, ..., S_3, and
    every S_j is increasing, so the comparison reduces to the first step
    S_{d+1}(k-1) >= k.  That reduction is always checked; where the
    entries are small enough they are also compared outright.
    """
    if m < 4:
        raise DomainError("psi_monotonicity_check needs m >= 4")
    prev = None
    for d in range(2, m - 1):
        cur = _psi_chain_entry(d, m)
        if d + 1 <= m - 2:
            k = m - d - 1
            if psi_step(k - 1, d + 1) < k:
                return False
        if prev is not None and cur is not None and prev > cur:
            return False
        prev = cur
    return True


@dataclass
class ComparisonReport:
    m_max: int
    rows: list
    equality_set: frozenset
    all_le: bool
    nondecreasing: bool

    def ratio_at(self, m: int) -> str:
        r = self.rows[m - 1]
        return round_rational(Fraction(r[2], r[1]), 3)


EXPECTED_EQUALITY_SET = frozenset({1, 2, 3, 4, 5, 15, 16})


def comparison_check(m_max: int) -> ComparisonReport:
    if m_max < 16:
        raise DomainError("comparison_check needs m_max >= 16")
    rows = [(m, G(m).value, F(m).value) for m in range(1, m_max + 1)]
    eq = frozenset(m for m, g, f in rows if g == f)
    all_le = all(g <= f for _, g, f in rows)
    nondec = all(a[1] <= b[1] and a[2] <= b[2] for a, b in zip(rows, rows[1:]))
    return ComparisonReport(m_max, rows, eq, all_le, nondec)


def ratio_checkpoint(d: int) -> tuple[int, Fraction, bool]:
    """F(m)/G(m) against d+1 at m = 2d^2 + 11d + 15."""
    m = 2 * d * d + 11 * d + 15
    r = Fraction(F(m).value, G(m).value)
    return m, r, r > d + 1


def combinatorial_identity(r: int, d: int) -> bool:
    return sum(binom(r + i, i) for i in range(2, d + 1)) == binom(r + d + 1, d) - (r + 2)


def theta_is_minimal(d: int, k: int) -> bool:
    t = theta(d, k)
    ct = chain_type(d)
    return debarre_manivel_ok(ct, t, k)[0] and not debarre_manivel_ok(ct, t - 1, k)[0]


def identities_suite(max_rd: int = 60, max_d: int = 8, max_k: int = 30, max_m: int = 60) -> SuiteReport:
    rep = SuiteReport()
    bad = [(r, d) for r in range(1, max_rd + 1) for d in range(1, max_rd + 1)
           if not combinatorial_identity(r, d)]
    rep.add("sum_{i=2}^d binom(r+i,i) = binom(r+d+1,d)-(r+2)", f"r,d<={max_rd}", not bad, str(bad[:5]))
    bad = [(d, k) for d in range(3, max_d + 1) for k in range(1, max_k + 1) if not theta_is_minimal(d, k)]
    rep.add("theta is the least r with nonnegative slack", f"d<={max_d},k<={max_k}", not bad, str(bad[:5]))
    bad = [(d, m) for m in range(5, max_m + 1) for d in range(4, m) if not theta_upper_bound_check(d, m)]
    rep.add("theta(d,m-d-1) <= m-d-2+binom(m,d)", f"4<=d<m<={max_m}", not bad, str(bad[:5]))
    bad = [(d, r) for d in range(2, 12) for r in range(d, 40)
           if dim_moduli_chain_or_none(d, r) not in (None, dim_param_chain(d, r) - (r + 1) ** 2 + 1)]
    rep.add("moduli = parameter - (r+1)^2 + 1", "2<=d<12", not bad, str(bad[:5]))
    bad = [m for m in range(9, 15) if G_SMALL[m] != math.factorial(m - 1) // 24 + 1]
    rep.add("G(m) = (m-1)!/24 + 1 for 9<=m<=14", "", not bad, str(bad))
    return rep


def dim_moduli_chain_or_none(d: int, r: int) -> Optional[int]:
    try:
        return dim_moduli_chain(d, r)
    except EmptyModuliSpace:
        return None
