"""Compare the compiled (numba) kernels with the pure-numpy fallback.

Each backend runs in its own interpreter because the backend is chosen at
import time from ``EXTRICAT_NUMBA``.  Usage::

    python benchmarks/bench_kernels.py [--repeat 3] [--json]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from extricat import _accel, kernels
from extricat.algebra import a2, path_algebra
from extricat.morphcat import triangular_matrix_algebra
from extricat.repcat.catalog import enumerate_indecomposables, scan_dimension_vector
from extricat.repcat.homext import clear_caches

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
mats = [rng.integers(0, 5, size=(24, 24)).astype(np.int64) for _ in range(200)]
bases = [rng.integers(0, 2, size=(6, 3, 3)).astype(np.int64) for _ in range(200)]
a3 = path_algebra("123", [("a", "1", "2"), ("b", "2", "3")])
t2 = triangular_matrix_algebra(a2())

def best(fn):
    fn()                      # warm-up (includes JIT compilation)
    out = []
    for _ in range(repeat):
        t = time.perf_counter(); fn(); out.append(time.perf_counter() - t)
    return min(out)

def catalog(alg, bounds):
    def go():
        clear_caches()
        enumerate_indecomposables(alg, bounds)
    return go

res = {
    "backend": _accel.backend_name(),
    "rref 200 x (24x24) mod 5": best(lambda: [kernels.rref(m, 5) for m in mats]),
    "find_invertible 200 x dim-6 End": best(
        lambda: [kernels.find_invertible(b, 2, 1 << 20) for b in bases]),
    "catalog kA3, bounds 2": best(catalog(a3, 2)),
    "catalog T2(kA2), bounds 1": best(catalog(t2, 1)),
    "scan kA3, dims (3,2,3)": best(lambda: scan_dimension_vector(a3, (3, 2, 3))),
}
print(json.dumps(res))
"""


def run_backend(flag: str, repeat: int) -> dict:
    env = dict(os.environ, EXTRICAT_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    fast, slow = run_backend("1", args.repeat), run_backend("0", args.repeat)
    if args.json:
        print(json.dumps({"numba": fast, "numpy": slow}, indent=2))
        return 0
    keys = [k for k in fast if k != "backend"]
    w = max(map(len, keys))
    print(f"{'case':<{w}}  {fast['backend']:>10}  {slow['backend']:>10}  speedup")
    for k in keys:
        print(f"{k:<{w}}  {fast[k]:>9.4f}s  {slow[k]:>9.4f}s  {slow[k] / fast[k]:>6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
