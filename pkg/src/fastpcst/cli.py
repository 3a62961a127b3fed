"""Command-line interface: ``fastpcst {solve,postprocess,generate,verify,bench}``.

Exit status: 0 success, 1 invalid input or infeasible solution, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import glob
import io
import json
import os
import resource
import sys
from multiprocessing import Pool

from . import stp
from .errors import PCSTError
from .graph import net_cost
from .pipeline import P3Config, p3
from .solve import ALGORITHMS, POST_MODES, solve
from .verify import MAX_EXACT_PCST, certify, exact_pcst


def _real_ge1(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x >= 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return x


def _mu(text):
    if text == "auto":
        return None
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if x < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return x


def _pos_int(text):
    try:
        x = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if x < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return x


def _u64(text):
    try:
        x = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= x < 2**64:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return x


def _range(text):
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    return lo, hi


def build_parser():
    parser = argparse.ArgumentParser(prog="fastpcst", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("--algo", choices=ALGORITHMS, required=True)
    p.add_argument("--s", type=_real_ge1, default=2.0, help="edge splitting ratio (fgw)")
    p.add_argument("--mu", type=_mu, default=None, help="merge tolerance or 'auto'")
    p.add_argument("--post", choices=POST_MODES, default="p3")
    p.add_argument("--n", type=_pos_int, default=None, help="TGA path length bound")
    p.add_argument("--report", choices=("text", "json"), default="text")
    p.add_argument("--timing", action="store_true", help="include wall time in the report")
    p.add_argument("-i", dest="instance", required=True)
    p.add_argument("-o", dest="output")

    p = sub.add_parser("postprocess", help="run P3 on an existing solution")
    p.add_argument("--n", type=_pos_int, required=True)
    p.add_argument("-i", dest="instance", required=True)
    p.add_argument("-t", dest="solution", required=True)
    p.add_argument("-o", dest="output")

    p = sub.add_parser("generate", help="write a random instance")
    p.add_argument("--nodes", type=_pos_int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--prized-frac", type=float, default=1.0)
    p.add_argument("--prize-range", type=_range, default=(1.0, 100.0))
    p.add_argument("--cost-range", type=_range, default=(1.0, 100.0))
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("-o", dest="output", required=True)

    p = sub.add_parser("verify", help="check a solution file")
    p.add_argument("-i", dest="instance", required=True)
    p.add_argument("-t", dest="solution", required=True)
    p.add_argument("--exact", action="store_true", help=f"compare with the exact optimum (<= {MAX_EXACT_PCST} vertices)")

    p = sub.add_parser("bench", help="time solvers over a set of instances")
    p.add_argument("--algos", required=True, help="comma-separated list of " + ",".join(ALGORITHMS))
    p.add_argument("--instances", required=True, help="glob pattern")
    p.add_argument("--repeat", type=_pos_int, default=10)
    p.add_argument("--jobs", type=_pos_int, default=1)
    p.add_argument("--post", choices=POST_MODES, default="none")
    p.add_argument("--n", type=_pos_int, default=None)
    p.add_argument("--s", type=_real_ge1, default=2.0)
    p.add_argument("--report", choices=("text", "json", "csv"), default="text")
    return parser


def _instance_id(path):
    return os.path.splitext(os.path.basename(path))[0]


def _write(path, text):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def _read_solution(path, g):
    with open(path, "rb") as fh:
        return stp.parse_solution(fh.read(), g, source=path)


def cmd_solve(args, out):
    g = stp.read_stp(args.instance)
    tree, report = solve(g, args.algo, s=args.s, mu=args.mu, post=args.post, n=args.n,
                         instance_id=_instance_id(args.instance))
    text = stp.write_solution(g, tree, report)
    if args.output:
        _write(args.output, text)
    else:
        out.write(text)
    if args.report == "json":
        out.write(report.to_json(timing=args.timing) + "\n")
    else:
        out.write(report.to_text(timing=args.timing) + "\n")
    return 0


def cmd_postprocess(args, out):
    g = stp.read_stp(args.instance)
    tree, info = _read_solution(args.solution, g)
    before = net_cost(g, tree)
    improved = p3(g, tree, P3Config(n=args.n))
    algo = f"{info['algorithm'] or 'unknown'}+p3"
    text = stp.write_solution(g, improved, lower_bound=info["lower_bound"], algorithm=algo)
    if args.output:
        _write(args.output, text)
    else:
        out.write(text)
    out.write(f"instance={_instance_id(args.instance)} before={before:.9g} "
              f"after={net_cost(g, improved, check=False):.9g} n={args.n}\n")
    return 0


def cmd_generate(args, out):
    params = stp.GeneratorParams(args.nodes, args.edges, args.prized_frac,
                                 tuple(args.prize_range), tuple(args.cost_range), args.seed)
    g = stp.generate_instance(params)
    _write(args.output, stp.write_graph(g, stp.generator_comment(params)))
    out.write(f"wrote {args.output} nodes={g.n} edges={g.m} prized={int((g.prizes > 0).sum())}\n")
    return 0


def cmd_verify(args, out):
    g = stp.read_stp(args.instance)
    tree, info = _read_solution(args.solution, g)
    cert = certify(g, tree, info["lower_bound"])
    if cert.feasible and info["netcost"] is not None:
        if f"{info['netcost']:.9g}" != f"{cert.net_cost:.9g}":
            cert.violations.append(f"NETCOST {info['netcost']:.9g} differs from recomputed {cert.net_cost:.9g}")
            cert.feasible = False
    out.write(f"feasible {'yes' if cert.feasible else 'no'}\n")
    out.write(f"netcost {cert.net_cost:.9g}\n")
    out.write("lowerbound " + ("NA" if cert.lower_bound is None else f"{cert.lower_bound:.9g}") + "\n")
    if cert.ratio_bound is not None:
        out.write(f"ratio_bound {cert.ratio_bound:.9g}\n")
    for v in cert.violations:
        out.write(f"violation {v}\n")
    if args.exact:
        _, opt = exact_pcst(g, return_value=True)
        out.write(f"optimum {opt:.9g}\n")
        out.write(f"gap {cert.net_cost - opt:.9g}\n")
    return 0 if cert.feasible else 1


def _bench_cell(job):
    path, algo, repeat, post, n, s = job
    g = stp.read_stp(path)
    # untimed warm-up run: triggers JIT compilation outside the measurement
    solve(g, algo, s=s, post=post, n=n)
    times = []
    report = None
    for _ in range(repeat):
        _, report = solve(g, algo, s=s, post=post, n=n, instance_id=_instance_id(path))
        times.append(report.wall_time_ms)
    peak_kb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    return {
        "instance": _instance_id(path),
        "algorithm": algo,
        "post": post,
        "nodes": g.n,
        "edges": g.m,
        "net_cost": float(f"{report.net_cost:.9g}"),
        "lower_bound": None if report.lower_bound is None else float(f"{report.lower_bound:.9g}"),
        "events": report.peak_event_count,
        "repeat": repeat,
        "mean_ms": sum(times) / len(times),
        "min_ms": min(times),
        "peak_rss_mb": peak_kb / 1024.0,
    }


def cmd_bench(args, out):
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGORITHMS]
    if bad:
        raise PCSTError(f"unknown algorithm(s): {', '.join(bad)}")
    paths = sorted(glob.glob(args.instances))
    if not paths:
        raise PCSTError(f"no instance matches {args.instances!r}")
    jobs = [(p, a, args.repeat, args.post, args.n, args.s) for p in paths for a in algos]
    if args.jobs > 1:
        with Pool(args.jobs) as pool:
            rows = pool.map(_bench_cell, jobs)
    else:
        rows = [_bench_cell(j) for j in jobs]
    if args.report == "json":
        out.write(json.dumps(rows, indent=1) + "\n")
    elif args.report == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        for r in rows:
            lb = "NA" if r["lower_bound"] is None else f"{r['lower_bound']:.9g}"
            out.write(f"{r['instance']} {r['algorithm']} post={r['post']} net_cost={r['net_cost']:.9g} "
                      f"lower_bound={lb} mean_ms={r['mean_ms']:.3f} min_ms={r['min_ms']:.3f} "
                      f"peak_rss_mb={r['peak_rss_mb']:.1f}\n")
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "postprocess": cmd_postprocess,
    "generate": cmd_generate,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def run(argv, out=None, err=None):
    """Execute one subcommand; returns the exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (PCSTError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
