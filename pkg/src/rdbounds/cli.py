"""Command-line front end: ``rdbounds <group> <command> [options]``.

Exit status is 0 when every requested check passes, 1 when a check fails and
2 for usage or domain errors (reported on stderr).
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import __version__
from .exact_core import DEFAULT_PRECISION, round_rational

SEED_ENV = "RDBOUNDS_SEED"


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    seed: Optional[int]
    precision: int
    tolerances: dict
    version: str
    timestamp: str

    def as_record(self) -> dict:
        return {
            "command": self.command,
            "seed": None if self.seed is None else str(self.seed),
            "precision": str(self.precision),
            "tolerances": {k: repr(v) for k, v in sorted(self.tolerances.items())},
            "version": self.version,
            "timestamp": self.timestamp,
        }


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        t = _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc)
    else:
        t = _dt.datetime.now(tz=_dt.timezone.utc).replace(microsecond=0)
    return t.isoformat().replace("+00:00", "Z")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


@dataclass
class Outcome:
    """What a command produced: table rows or check records, plus text lines."""

    rows: Optional[list] = None
    checks: Optional[list] = None
    text: list = field(default_factory=list)
    ok: bool = True
    columns: Optional[list] = None
    seed: Optional[int] = None
    tolerances: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# bounds


def _cmd_bounds_value(args) -> Outcome:
    from . import bounds as B

    what = args.what
    if what == "g":
        w = B.G(args.m)
        rec = {"m": str(args.m), "G": str(w.value), "witness_d": None if w.witness is None else str(w.witness),
               "source": None if w.source is None else w.source.value}
        return Outcome(rows=[rec], text=[str(w.value)])
    if what == "f":
        w = B.F(args.m)
        rec = {"m": str(args.m), "F": str(w.value), "witness_d": None if w.witness is None else str(w.witness),
               "source": None if w.source is None else w.source.value}
        return Outcome(rows=[rec], text=[str(w.value)])
    if what == "theta":
        v = B.theta(args.d, args.k)
        return Outcome(rows=[{"d": str(args.d), "k": str(args.k), "theta": str(v)}], text=[str(v)])
    if what == "phi":
        s = B.phi(args.d, args.k)
        return Outcome(rows=[{"d": str(args.d), "k": str(args.k), "phi": str(s.value), "source": s.source.value}],
                       text=[f"{s.value} ({s.source.value})"])
    if what == "Phi":
        s = B.Phi(args.d, args.k)
        return Outcome(rows=[{"d": str(args.d), "k": str(args.k), "Phi": str(s.value), "source": s.source.value}],
                       text=[f"{s.value} ({s.source.value})"])
    if what == "psi":
        p = B.psi(args.d, args.k)
        return Outcome(rows=[{"d": str(args.d), "k": str(args.k), "psi": [str(x) for x in p.entries]}],
                       text=["[" + ", ".join(str(x) for x in p.entries) + "]"])
    if what == "dims":
        d, r = args.d, args.r
        rec = {"d": str(d), "r": str(r),
               "param_hyp": str(B.dim_param_hyp(d, r)),
               "moduli_hyp": _maybe(lambda: B.dim_moduli_hyp(d, r)),
               "param_chain": str(B.dim_param_chain(d, r)),
               "moduli_chain": _maybe(lambda: B.dim_moduli_chain(d, r))}
        text = [f"{k}: {v}" for k, v in rec.items() if k not in ("d", "r")]
        return Outcome(rows=[rec], text=text)
    raise UsageError(f"unknown bounds quantity {what!r}")


def _maybe(fn):
    from .bounds import EmptyModuliSpace

    try:
        return str(fn())
    except EmptyModuliSpace:
        return None


_TABLE_COLUMNS = ["m", "G", "F", "ratio", "G_plane", "F_plane", "G_source", "F_source"]


def _table_record(row) -> dict:
    rec = row.as_record()
    return {k: rec[k] for k in _TABLE_COLUMNS}


def _cmd_table(args, which: int) -> Outcome:
    from .bounds import table1, table2

    lo = args.lo if args.lo is not None else (2 if which == 1 else 19)
    hi = args.hi if args.hi is not None else (18 if which == 1 else 59)
    if lo > hi:
        raise UsageError("--from must not exceed --to")
    rows = (table1 if which == 1 else table2)(range(lo, hi + 1))
    recs = [_table_record(r) for r in rows]
    text = [f"{'m':>3}  {'G':>22}  {'F':>22}  {'F/G':>10}"]
    text += [f"{r['m']:>3}  {r['G']:>22}  {r['F']:>22}  {r['ratio']:>10}" for r in recs]
    out = Outcome(rows=recs, text=text, columns=_TABLE_COLUMNS)
    if args.regress:
        from .reference import table1_regression, table2_regression

        rep = (table1_regression if which == 1 else table2_regression)(range(lo, hi + 1))
        out.checks = [dict(e.as_record(), name=f"table{e.table} m={e.m} {e.field}",
                           passed=e.status != "mismatch", m=str(e.m), table=str(e.table))
                      for e in rep.entries]
        out.ok = rep.ok
        out.text += [f"{c['name']}: expected {c['expected']} computed {c['computed']} [{c['status']}]"
                     for c in out.checks if c["status"] != "match"]
        out.text.append("regression: " + ("PASS" if rep.ok else "FAIL"))
    return out


# ---------------------------------------------------------------------------
# check


def _suite_checks(rep) -> list:
    return [{"name": f"{l.name} [{l.param}]", "passed": l.ok, "detail": l.detail} for l in rep.lines]


def _cmd_check(args) -> Outcome:
    from . import bounds as B

    kind = args.kind
    if kind == "identities":
        m = args.max or 60
        rep = B.identities_suite(max_rd=m, max_m=m)
        checks = _suite_checks(rep)
    elif kind == "analytic":
        m = args.max or 500
        rep = B.analytic_inequality_suite(a_range=range(1, m + 1), prec=args.precision)
        checks = [{"name": name, "passed": all(l.ok for l in rep.lines if l.name == name),
                   "detail": f"{sum(1 for l in rep.lines if l.name == name)} cases"}
                  for name in dict.fromkeys(l.name for l in rep.lines)]
    elif kind == "monotone":
        m = args.max or 40
        checks = [{"name": f"psi chain monotone at m={mm}", "passed": B.psi_monotonicity_check(mm), "detail": ""}
                  for mm in range(4, m + 1)]
    elif kind == "comparison":
        m = args.max or 200
        rep = B.comparison_check(m)
        checks = [
            {"name": "G <= F", "passed": rep.all_le, "detail": f"m <= {m}"},
            {"name": "G and F nondecreasing", "passed": rep.nondecreasing, "detail": ""},
            {"name": "equality set", "passed": rep.equality_set == B.EXPECTED_EQUALITY_SET,
             "detail": ",".join(str(x) for x in sorted(rep.equality_set))},
        ]
        for d in args.checkpoints:
            mm, ratio, ok = B.ratio_checkpoint(d)
            checks.append({"name": f"F/G > {d + 1} at m={mm}", "passed": ok,
                           "detail": round_rational(ratio, 3)})
    else:
        raise UsageError(f"unknown check {kind!r}")
    ok = all(c["passed"] for c in checks)
    text = [f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}  {c['detail']}".rstrip() for c in checks]
    return Outcome(checks=checks, text=text, ok=ok)


# ---------------------------------------------------------------------------
# verify / audit / find / tschirnhaus / pipeline


def _cmd_verify(args) -> Outcome:
    from .verify import bertini_suite, polar_identity_suite

    if args.kind == "polar-identity":
        res = polar_identity_suite(args.trials or 1000, args.seed)
    else:
        res = bertini_suite(args.trials or 200, args.seed, tol=args.tol)
    rec = dict(res.as_record())
    text = [f"{'PASS' if res.passed else 'FAIL'}  {res.name}: {res.trials} trials, {len(res.failures)} failures"]
    text += [f"  {f}" for f in res.failures[:20]]
    return Outcome(checks=[rec], text=text, ok=res.passed, seed=args.seed)


def _ledger_text(rep) -> list:
    lines = [f"case {rep.case}"]
    for c in rep.checks:
        mark = {"pass": "ok  ", "flag": "FLAG", "fail": "FAIL"}[c.status]
        exp = ", ".join(str(x) for x in c.expected)
        got = ", ".join(str(x) for x in c.computed)
        tail = f"  ({c.note})" if c.note and c.status != "pass" else ""
        lines.append(f"  {mark}  {c.description}: printed {exp} | computed {got}{tail}")
    if rep.expected_max_degree is not None:
        lines.append(f"  max extension degree {rep.max_extension_degree} (eta = {rep.expected_max_degree})")
    lines.append(f"  {'PASS' if rep.passed else 'FAIL'} {rep.case}"
                 + (f" with eta = {rep.expected_max_degree}" if rep.expected_max_degree else ""))
    return lines


def _cmd_audit(args) -> Outcome:
    from .ledger import CASE_IDS, audit_ledger

    cases = list(CASE_IDS) + ["wolfson"] if args.case == "all" else [args.case]
    reports = []
    for c in cases:
        try:
            reports.append(audit_ledger(c))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    checks = [dict(r.as_record(), name=r.case) for r in reports]
    text = [line for r in reports for line in _ledger_text(r)]
    return Outcome(checks=checks, text=text, ok=all(r.passed for r in reports))


def _slice_cfg(args):
    from .planes import SliceConfig

    return SliceConfig(seed=args.seed, residual_tol=args.tol)


def _cmd_find_plane(args) -> Outcome:
    import numpy as np

    from .planes import quadric_k_plane
    from .polar import HSystem, contains_plane
    from .poly import FieldTag, random_hpoly, render

    rng = np.random.default_rng(args.seed)
    Q = HSystem(args.dim, [random_hpoly(rng, args.dim + 1, 2, FieldTag.COMPLEX) for _ in range(args.quadrics)])
    res = quadric_k_plane(Q, args.k, cfg=_slice_cfg(args))
    ok = contains_plane(Q, res.points, tol=1e-6)
    rec = {
        "name": f"{args.k}-plane on {args.quadrics} quadric(s) in P^{args.dim}",
        "passed": ok,
        "residual": f"{res.residual:.3e}",
        "degrees": [str(d) for d in res.degrees],
        "points": [[repr(complex(c)) for c in P.coords] for P in res.points],
        "quadrics": [render(f) for f in Q.polys],
    }
    text = [f"{'PASS' if ok else 'FAIL'}  {rec['name']}",
            f"  solve degrees: {', '.join(rec['degrees'])}",
            f"  plane residual: {rec['residual']}"]
    return Outcome(checks=[rec], text=text, ok=ok, seed=args.seed, tolerances={"residual_tol": args.tol})


def _cmd_tschirnhaus(args) -> Outcome:
    from .tschirnhaus import build_tschirnhaus, random_general_poly

    p = random_general_poly(args.n, args.seed)
    T = build_tschirnhaus(p, args.upto, allow_large=args.allow_large, seed=args.seed)
    rec = T.to_json()
    text = [f"n = {T.n}, coefficients a_1..a_n = {', '.join(rec['coefficients'])}"]
    text += [f"b_{i}: {len(f)} terms" for i, f in enumerate(T.b, start=1)]
    if args.show:
        text += [f"b_{i} = {s}" for i, s in enumerate(rec["b"], start=1)]
    return Outcome(rows=[rec], text=text, seed=args.seed)


def _cmd_pipeline(args) -> Outcome:
    from .planes import run_pipeline

    rep = run_pipeline(args.n, args.depth, _slice_cfg(args))
    ok = rep.certified and rep.chain_certified and rep.tau_checks
    rec = dict(rep.as_record(), name=f"pipeline n={args.n} depth={args.depth}", passed=ok)
    text = [f"{'PASS' if ok else 'FAIL'}  {rec['name']}"]
    text += [f"  {s.name}: degree {s.degree} (ledger {s.expected}), residual {s.residual:.2e}" for s in rep.stages]
    text.append(f"  plane residual {rep.plane_residual:.2e}, chain certified {rep.chain_certified}, "
                f"tau check {rep.tau_checks}")
    return Outcome(checks=[rec], text=text, ok=ok, seed=args.seed, tolerances={"residual_tol": args.tol})


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_format(p, choices=("text", "json")):
    p.add_argument("--format", choices=choices, default="text")


def _add_seed(p):
    p.add_argument("--seed", type=int, default=None, help=f"defaults to ${SEED_ENV} or 0")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rdbounds", description="Resolvent-degree bounding functions and polar-cone tools.")
    ap.add_argument("--version", action="version", version=f"rdbounds {__version__}")
    ap.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="interval precision in bits")
    groups = ap.add_subparsers(dest="group", required=True, parser_class=_Parser)

    b = groups.add_parser("bounds", help="bounding functions and tables")
    bsub = b.add_subparsers(dest="what", required=True, parser_class=_Parser)
    for name in ("g", "f"):
        p = bsub.add_parser(name)
        p.add_argument("--m", type=int, required=True)
        _add_format(p)
    for name in ("theta", "phi", "Phi", "psi"):
        p = bsub.add_parser(name)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        _add_format(p)
    p = bsub.add_parser("dims")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    _add_format(p)
    for name in ("table1", "table2"):
        p = bsub.add_parser(name)
        p.add_argument("--from", dest="lo", type=int, default=None)
        p.add_argument("--to", dest="hi", type=int, default=None)
        p.add_argument("--regress", action="store_true", help="compare against the published values")
        _add_format(p, ("text", "csv", "json"))

    c = groups.add_parser("check", help="identity and inequality sweeps")
    c.add_argument("kind", choices=("identities", "analytic", "monotone", "comparison"))
    c.add_argument("--max", type=int, default=None)
    c.add_argument("--checkpoints", type=int, nargs="*", default=[11, 12, 13],
                   help="d values for the F/G ratio checkpoints (comparison only)")
    _add_format(c)

    v = groups.add_parser("verify", help="seeded property suites")
    v.add_argument("kind", choices=("polar-identity", "bertini"))
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--tol", type=float, default=1e-7)
    _add_seed(v)
    _add_format(v)

    a = groups.add_parser("audit", help="arithmetic audit of the construction ledgers")
    a.add_argument("what", choices=("ledger",))
    a.add_argument("--case", default="all", help="n6, k1..k9, wolfson or all")
    _add_format(a)

    f = groups.add_parser("find", help="numeric plane finding")
    f.add_argument("what", choices=("plane",))
    f.add_argument("--quadrics", type=int, required=True)
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--dim", type=int, required=True)
    f.add_argument("--tol", type=float, default=1e-8)
    _add_seed(f)
    _add_format(f)

    t = groups.add_parser("tschirnhaus", help="Tschirnhaus hypersurfaces")
    t.add_argument("what", choices=("build",))
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--upto", type=int, required=True)
    t.add_argument("--allow-large", action="store_true")
    t.add_argument("--show", action="store_true", help="print the polynomials in text mode")
    _add_seed(t)
    _add_format(t)

    pl = groups.add_parser("pipeline", help="desk-scale numeric rehearsal")
    pl.add_argument("what", choices=("run",))
    pl.add_argument("--n", type=int, required=True)
    pl.add_argument("--depth", type=int, required=True)
    pl.add_argument("--tol", type=float, default=1e-8)
    _add_seed(pl)
    _add_format(pl)
    return ap


_DISPATCH: dict = {
    "check": _cmd_check,
    "verify": _cmd_verify,
    "audit": _cmd_audit,
    "find": _cmd_find_plane,
    "tschirnhaus": _cmd_tschirnhaus,
    "pipeline": _cmd_pipeline,
}


def _run(args) -> Outcome:
    if args.group == "bounds":
        if args.what in ("table1", "table2"):
            return _cmd_table(args, 1 if args.what == "table1" else 2)
        return _cmd_bounds_value(args)
    fn: Callable = _DISPATCH[args.group]
    return fn(args)


def _render(out: Outcome, fmt: str, manifest: RunManifest) -> str:
    if fmt == "json":
        doc = {"manifest": manifest.as_record()}
        if out.checks is not None:
            doc["checks"] = out.checks
        if out.rows is not None:
            doc["rows"] = out.rows
        return json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=out.columns, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in out.rows:
            w.writerow({k: ("" if r.get(k) is None else r[k]) for k in out.columns})
        return buf.getvalue()
    return "\n".join(out.text) + "\n"


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    from .bounds import DomainError
    from .planes import ConvergenceFailure, DegreeCapExceeded, DimensionPrecondition, ResourceGuard
    from .tschirnhaus import SizeGuardExceeded

    try:
        args = build_parser().parse_args(argv)
        if hasattr(args, "seed") and args.seed is None:
            args.seed = _default_seed()
        out = _run(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (DomainError, ResourceGuard, SizeGuardExceeded, DimensionPrecondition, DegreeCapExceeded,
            ValueError) as exc:
        print(f"rdbounds: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ConvergenceFailure as exc:
        print(f"rdbounds: convergence failure: {exc}", file=sys.stderr)
        return 1
    tol = dict(out.tolerances)
    manifest = RunManifest(
        command=" ".join(["rdbounds"] + argv),
        seed=out.seed if out.seed is not None else getattr(args, "seed", None),
        precision=args.precision,
        tolerances=tol,
        version=__version__,
        timestamp=_timestamp(),
    )
    sys.stdout.write(_render(out, args.format, manifest))
    sys.stdout.flush()
    return 0 if out.ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
