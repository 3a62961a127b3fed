"""Compare the numba kernels with the pure-Python fallback.

Each backend runs in a fresh interpreter because ``FASTPCST_DISABLE_NUMBA`` is
read at import time::

    python benchmarks/bench_backends.py --sizes 200:600,2000:6000
"""
import argparse
import json
import os
import subprocess
import sys

_CHILD = r"""
import json, sys, time
from fastpcst import GeneratorParams, generate_instance, mstg, fgw_prime
from fastpcst._jit import NUMBA_ENABLED

n, m, repeat = map(int, sys.argv[1:4])
g = generate_instance(GeneratorParams(n, m, seed=7))
mstg(g); fgw_prime(g)  # warm-up (JIT compile or cache load)
row = {"numba": NUMBA_ENABLED, "nodes": n, "edges": m}
for name, fn in (("mstg", mstg), ("fgw", fgw_prime)):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(g)
        best = min(best, time.perf_counter() - t0)
    row[name + "_s"] = best
print(json.dumps(row))
"""


def run_backend(disable, n, m, repeat):
    env = dict(os.environ, FASTPCST_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", _CHILD, str(n), str(m), str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="200:600,2000:6000", help="comma-separated nodes:edges pairs")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'nodes':>8} {'edges':>8} {'algo':>5} {'numba_s':>10} {'python_s':>10} {'speedup':>8}")
    for pair in args.sizes.split(","):
        n, m = map(int, pair.split(":"))
        fast = run_backend(False, n, m, args.repeat)
        slow = run_backend(True, n, m, args.repeat)
        for algo in ("mstg", "fgw"):
            a, b = fast[algo + "_s"], slow[algo + "_s"]
            print(f"{n:>8} {m:>8} {algo:>5} {a:>10.4f} {b:>10.4f} {b / a:>8.1f}")


if __name__ == "__main__":
    main()
