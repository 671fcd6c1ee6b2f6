"""Audit every construction ledger and summarise flags per case."""
import json
import sys

from rdbounds.ledger import CASE_IDS, audit_ledger


def main(argv):
    as_json = "--json" in argv
    reports = [audit_ledger(c) for c in list(CASE_IDS) + ["wolfson"]]
    if as_json:
        json.dump([r.as_record() for r in reports], sys.stdout, indent=2, ensure_ascii=False)
        print()
    else:
        print(f"{'case':<8} {'checks':>6} {'flags':>5} {'max degree':>12} {'eta':>8}  status")
        for r in reports:
            eta = "" if r.expected_max_degree is None else str(r.expected_max_degree)
            mx = "" if r.expected_max_degree is None else str(r.max_extension_degree)
            print(f"{r.case:<8} {len(r.checks):>6} {len(r.flags):>5} {mx:>12} {eta:>8}  "
                  f"{'PASS' if r.passed else 'FAIL'}")
            for c in r.flags:
                print(f"           flag: {c.description} ({c.note})" if c.note else f"           flag: {c.description}")
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
