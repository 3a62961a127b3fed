"""Time MSTG and FGW' on one generated instance; print a JSON line.

Run in its own process so ``ru_maxrss`` reflects this instance only::

    python benchmarks/scale_probe.py --nodes 1000000 --edges 10000000 --algos mstg,fgw
"""
import argparse
import json
import resource
import time

from fastpcst import GeneratorParams, generate_instance, mstg, run_fgw


def _warm_up():
    # compile (or load cached) kernels outside the measurement
    g = generate_instance(GeneratorParams(50, 120, seed=1))
    mstg(g)
    run_fgw(g)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, required=True)
    ap.add_argument("--edges", type=int, required=True)
    ap.add_argument("--prized-frac", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--algos", default="mstg,fgw")
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args()

    _warm_up()
    t0 = time.perf_counter()
    g = generate_instance(GeneratorParams(args.nodes, args.edges, args.prized_frac, seed=args.seed))
    out = {"nodes": g.n, "edges": g.m, "generate_s": time.perf_counter() - t0}
    for algo in args.algos.split(","):
        times = []
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            if algo == "mstg":
                tree = mstg(g)
            else:
                res = run_fgw(g)
                tree = res.tree
                out["fgw_edge_events"] = res.stats.edge_events
            times.append(time.perf_counter() - t0)
        out[f"{algo}_s"] = min(times)
        out[f"{algo}_vertices"] = len(tree)
    out["peak_rss_gb"] = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 2**20
    print(json.dumps(out))


if __name__ == "__main__":
    main()
