"""Seed sweep of the desk-scale numeric constructions.

Runs the quadric plane finder at its two reference sizes and the tau
pipeline at depth 1 (n=9) and, with --deep, depth 2 (n=19).  Prints the
worst residual, the solve degrees and wall time per configuration.
"""
import argparse
import time

import numpy as np

from rdbounds.planes import ConvergenceFailure, SliceConfig, quadric_k_plane, run_pipeline
from rdbounds.polar import HSystem
from rdbounds.poly import FieldTag, random_hpoly


def sweep_quadrics(ell, k, r, seeds):
    worst, fails = 0.0, 0
    t0 = time.perf_counter()
    for s in seeds:
        rng = np.random.default_rng(1000 + s)
        Q = HSystem(r, [random_hpoly(rng, r + 1, 2, FieldTag.COMPLEX) for _ in range(ell)])
        try:
            worst = max(worst, quadric_k_plane(Q, k, cfg=SliceConfig(seed=s)).residual)
        except ConvergenceFailure:
            fails += 1
    print(f"quadric planes l={ell} k={k} r={r}: {len(seeds)} seeds, worst residual {worst:.2e}, "
          f"{fails} failures, {time.perf_counter() - t0:.1f}s")


def sweep_pipeline(n, depth, seeds):
    for s in seeds:
        t0 = time.perf_counter()
        try:
            rep = run_pipeline(n, depth, SliceConfig(seed=s))
        except ConvergenceFailure as exc:
            print(f"pipeline n={n} depth={depth} seed={s}: failed at {exc.stage}")
            continue
        ok = rep.certified and rep.chain_certified and rep.tau_checks
        print(f"pipeline n={n} depth={depth} seed={s}: {'certified' if ok else 'NOT certified'}, "
              f"degrees {rep.solve_degrees}, residual {rep.plane_residual:.1e}, {time.perf_counter() - t0:.1f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--pipeline-seeds", type=int, default=3)
    ap.add_argument("--deep", action="store_true", help="also run n=19 at depth 2")
    args = ap.parse_args()
    seeds = range(args.seeds)
    sweep_quadrics(1, 5, 11, seeds)
    sweep_quadrics(2, 2, 8, seeds)
    sweep_pipeline(9, 1, range(args.pipeline_seeds))
    if args.deep:
        sweep_pipeline(19, 2, range(args.pipeline_seeds))


if __name__ == "__main__":
    main()
