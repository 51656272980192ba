#!/usr/bin/env python3
"""Time the compiled kernels against the pure-python fallback.

Runs the same workload twice in subprocesses (default env, then
HGSPARSE_NO_NUMBA=1), checks that both modes produce bit-identical
results, and prints a timing table.  Usage: python bench_kernels.py
"""

import argparse
import hashlib
import json
import os
import subprocess
import sys
import time


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:16]


def run_workload() -> dict:
    import hgsparse as hg

    timings = {}
    digests = {}

    spec = hg.pubmed_like_spec(seed=0, alpha=1.0)
    g = hg.generate(spec)

    for method in (hg.PER_TYPE, hg.ALL_TYPES):
        params = hg.SparsifyParams(k=3, method=method, seed=7)
        hg.sparsify(g, params)  # warm-up (jit compile on the compiled path)
        started = time.perf_counter()
        result = hg.sparsify(g, params)
        timings[f"sparsify {method} k=3 (236k edges)"] = time.perf_counter() - started
        digests[f"sparsify {method}"] = _digest(result.mask.tobytes())

    eval_spec = hg.GenSpec(
        (700, 600, 500, 200),
        tuple(hg.EdgeTypeSpec(s, d, c, 0.6)
              for s, d, c in ((0, 1, 6000), (1, 0, 5000),
                              (0, 2, 4000), (2, 1, 5000))),
        seed=1000)
    eg = hg.generate(eval_spec)
    hg.evaluate(eg, 0.2, seed=0, negatives_per_positive=19)  # warm-up
    for scorer in (hg.COMMON_NEIGHBORS, hg.ADAMIC_ADAR):
        started = time.perf_counter()
        report = hg.evaluate(eg, 0.2, seed=0, scorer=scorer,
                             negatives_per_positive=19)
        timings[f"evaluate {scorer} (20k edges)"] = time.perf_counter() - started
        digests[f"evaluate {scorer}"] = _digest(
            repr((report.auc, report.mrr)).encode())

    return {"numba": hg.NUMBA_ENABLED, "timings": timings, "digests": digests}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--worker", action="store_true",
                        help="run the workload and emit JSON (internal)")
    args = parser.parse_args()

    if args.worker:
        json.dump(run_workload(), sys.stdout)
        return 0

    results = {}
    for label, extra_env in (("compiled", {}), ("pure", {"HGSPARSE_NO_NUMBA": "1"})):
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker"],
            capture_output=True, text=True, env=dict(os.environ, **extra_env))
        if proc.returncode != 0:
            print(proc.stderr, file=sys.stderr)
            return 1
        results[label] = json.loads(proc.stdout)

    if not results["compiled"]["numba"]:
        print("note: numba unavailable, both runs used the pure path")
    if results["pure"]["numba"]:
        print("error: HGSPARSE_NO_NUMBA=1 run still compiled", file=sys.stderr)
        return 1

    mismatches = [key for key in results["compiled"]["digests"]
                  if results["compiled"]["digests"][key]
                  != results["pure"]["digests"][key]]
    if mismatches:
        print(f"error: modes disagree on {mismatches}", file=sys.stderr)
        return 1
    print("both modes produced bit-identical selections and scores\n")

    width = max(map(len, results["compiled"]["timings"]))
    print(f"{'workload'.ljust(width)}  compiled      pure     speedup")
    for key, fast in results["compiled"]["timings"].items():
        slow = results["pure"]["timings"][key]
        print(f"{key.ljust(width)}  {fast:7.3f}s  {slow:7.3f}s  {slow / fast:6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
