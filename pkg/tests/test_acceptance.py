"""Acceptance criteria 1-9.

Each test records one ``PASS``/``FAIL`` line (printed immediately and again in
the terminal summary) before asserting, so a failing criterion is still
reported alongside the others.
"""
import filecmp
import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from fastpcst import (GeneratorParams, Graph, P3Config, exact_nwstpt, exact_pcst, fgw_prime,
                      generate_instance, gpra, minimum_spanning_tree, mstg, net_cost, p3, parse_solution,
                      parse_stp, strong_prune, write_graph, write_solution)
from fastpcst.verify import certify, gw_lower_bound

from instances import ACCEPTANCE, tie_triangle, random_tree, mstg_trap_triangle

ROOT = Path(__file__).resolve().parents[1]
TOL = 1e-9


def record(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


def _tree_suite(seed=101, count=1000):
    rng = np.random.default_rng(seed)
    return [random_tree(rng, int(rng.integers(1, 15)), weight_range=(-10.0, 20.0),
                        n_compulsory=int(rng.integers(0, 4)), cost_range=(1.0, 10.0))
            for _ in range(count)]


def test_criterion_1_gpra_optimal():
    t0 = time.perf_counter()
    bad = 0
    for inst in _tree_suite():
        t = gpra(inst)
        if abs(inst.net_weight(t) - exact_nwstpt(inst)) > TOL:
            bad += 1
        elif not set(inst.compulsory.tolist()) <= set(t.vertices.tolist()):
            bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 30
    assert record(1, ok, f"GPrA optimal with C kept on 1000 trees, {bad} mismatches, {elapsed:.1f} s (limit 30 s)")


def test_criterion_2_gpra_dominates_strong_pruning():
    t0 = time.perf_counter()
    bad = 0
    for inst in _tree_suite():
        inst.compulsory = inst.compulsory[:0]
        best = inst.net_weight(gpra(inst))
        vals = np.array([inst.net_weight(strong_prune(inst, r)) for r in range(inst.n)])
        if np.any(vals > best + TOL) or not np.any(np.abs(vals - best) <= TOL):
            bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 60
    assert record(2, ok, f"GPrA >= Strong Pruning for every root, equal for one, {bad} violations, "
                         f"{elapsed:.1f} s (limit 60 s)")


def _gw_lhs(g, t):
    inside = np.zeros(g.n, dtype=bool)
    inside[t.vertices] = True
    return float(g.cost[t.edges].sum() + 2 * g.prizes[~inside].sum())


def test_criterion_3_fgw_doubled_prize_bound():
    t0 = time.perf_counter()
    rng = np.random.default_rng(303)
    bad = runs = 0
    for i in range(500):
        n = int(rng.integers(1, 13))
        m = int(rng.integers(n - 1, min(20, n * (n - 1) // 2) + 1))
        base = generate_instance(GeneratorParams(n, m, seed=i))
        comp = rng.choice(n, min(int(rng.integers(0, 3)), n), replace=False)
        g = Graph(n, base.edge_u, base.edge_v, base.cost, base.prizes, comp)
        _, opt = exact_pcst(g, return_value=True)
        for s in (1.5, 2.0, 3.0):
            runs += 1
            t = fgw_prime(g, s=s)
            if _gw_lhs(g, t) > 2 * opt + TOL or not set(comp.tolist()) <= set(t.vertices.tolist()):
                bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 120
    assert record(3, ok, f"c(T) + 2w(out) <= 2 OPT on {runs} FGW' runs (500 graphs x 3 s), {bad} violations, "
                         f"{elapsed:.1f} s (limit 120 s)")


def test_criterion_4_micro_instances():
    checks = []
    g = mstg_trap_triangle()
    t, val = exact_pcst(g, return_value=True)
    checks.append(("oracle optimum {(j,k)} = 14", t.edges.tolist() == [g.edge_index(1, 2)] and val == 14.0))
    checks.append(("MSTG = 16", net_cost(g, mstg(g)) == 16.0))
    g = tie_triangle()
    _, opt = exact_pcst(g, return_value=True)
    checks.append(("tie triangle optimum = 8", opt == 8.0))
    t = fgw_prime(g)
    cost = net_cost(g, t)
    checks.append((f"FGW' result {cost:g} in {{8, 9}}", cost in (8.0, 9.0)))
    checks.append((f"c(T) + 2w(out) <= 2 OPT ({_gw_lhs(g, t):g} <= {2 * opt:g})", _gw_lhs(g, t) <= 2 * opt + TOL))
    checks.append(("certificate consistent", certify(g, t, gw_lower_bound(g, t)).feasible))
    failed = [name for name, ok in checks if not ok]
    detail = "micro-instances: " + "; ".join(f"{name} {'ok' if ok else 'FAILED'}" for name, ok in checks)
    assert record(4, not failed, detail)


def test_criterion_5_p3_monotone_fixed_point():
    t0 = time.perf_counter()
    rng = np.random.default_rng(505)
    increases = drifts = 0
    for i in range(1000):
        n = int(rng.integers(2, 31))
        m = int(rng.integers(n - 1, min(3 * n, n * (n - 1) // 2) + 1))
        frac = float(rng.choice([1.0, 0.5, 0.2]))
        base = generate_instance(GeneratorParams(n, m, frac, seed=10_000 + i))
        comp = rng.choice(n, int(rng.integers(0, 3)), replace=False)
        g = Graph(n, base.edge_u, base.edge_v, base.cost, base.prizes, comp)
        start = mstg(g) if i % 2 == 0 else fgw_prime(g)
        cfg = P3Config(n=int(rng.integers(1, 4)))
        once = p3(g, start, cfg)
        c0, c1 = net_cost(g, start), net_cost(g, once)
        increases += c1 > c0
        drifts += abs(net_cost(g, p3(g, once, cfg)) - c1) > cfg.epsilon_for(g)
    elapsed = time.perf_counter() - t0
    ok = increases == 0 and drifts == 0 and elapsed < 60
    assert record(5, ok, f"P3 on 1000 instances: {increases} increases, {drifts} second-pass changes > epsilon, "
                         f"{elapsed:.1f} s (limit 60 s)")


def _random_mst_subtree(rng, g, mst):
    adj = {v: [] for v in range(g.n)}
    for e in mst.edges.tolist():
        a, b = int(g.edge_u[e]), int(g.edge_v[e])
        adj[a].append((b, e))
        adj[b].append((a, e))
    start = int(rng.integers(0, g.n))
    verts, edges = {start}, []
    target = int(rng.integers(1, g.n + 1))
    frontier = list(adj[start])
    while frontier and len(verts) < target:
        b, e = frontier.pop(int(rng.integers(0, len(frontier))))
        if b not in verts:
            verts.add(b)
            edges.append(e)
            frontier.extend(adj[b])
    return np.array(sorted(verts)), sorted(edges)


def test_criterion_6_mst_subtree_is_induced_mst():
    t0 = time.perf_counter()
    rng = np.random.default_rng(606)
    bad = 0
    for i in range(500):
        n = int(rng.integers(2, 11))
        m = int(rng.integers(n - 1, n * (n - 1) // 2 + 1))
        g = generate_instance(GeneratorParams(n, m, seed=20_000 + i))
        assert np.unique(g.cost).shape[0] == g.m
        verts, edges = _random_mst_subtree(rng, g, minimum_spanning_tree(g))
        sub, _, emap = g.induced(verts)
        if np.sort(emap[minimum_spanning_tree(sub).edges]).tolist() != edges:
            bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 30
    assert record(6, ok, f"MST subtree equals induced MST on 500 graphs, {bad} mismatches, "
                         f"{elapsed:.1f} s (limit 30 s)")


def _probe(*args):
    proc = subprocess.run([sys.executable, str(ROOT / "benchmarks" / "scale_probe.py"), *map(str, args)],
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


@pytest.mark.slow
def test_criterion_7_scale():
    big = _probe("--nodes", 1_000_000, "--edges", 10_000_000, "--algos", "mstg,fgw")
    small_e = _probe("--nodes", 10_000, "--edges", 100_000, "--algos", "mstg", "--repeat", 7)
    large_e = _probe("--nodes", 100_000, "--edges", 1_000_000, "--algos", "mstg", "--repeat", 5)
    ratio = large_e["mstg_s"] / small_e["mstg_s"]
    ok = (big["mstg_s"] < 60 and big["fgw_s"] < 180 and big["peak_rss_gb"] < 8 and ratio <= 15)
    assert record(7, ok, f"|V|=1e6 |E|=1e7: MSTG {big['mstg_s']:.1f} s (limit 60), FGW' {big['fgw_s']:.1f} s "
                         f"(limit 180), peak RSS {big['peak_rss_gb']:.2f} GB (limit 8); MSTG time ratio "
                         f"|E|=1e6 / 1e5 = {ratio:.2f} (limit 15)")


def _cli(args, cwd):
    proc = subprocess.run([sys.executable, "-m", "fastpcst", *args], cwd=cwd, capture_output=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_criterion_8_cli_determinism(tmp_path):
    runs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        d.mkdir()
        (d / "tri.stp").write_text(write_graph(mstg_trap_triangle()))
        g = generate_instance(GeneratorParams(10, 16, 0.7, seed=8))
        (d / "g.stp").write_text(write_graph(g))
        (d / "g.sol").write_text(write_solution(g, exact_pcst(g), algorithm="exact"))
        outs = [
            _cli(["solve", "--algo", "mstg", "-i", "tri.stp", "-o", "tri.sol"], d),
            _cli(["solve", "--algo", "fgw", "--post", "p3", "--n", "2", "-i", "tri.stp"], d),
            _cli(["solve", "--algo", "fgw", "--post", "p3", "--n", "2", "-i", "tri.stp", "--report", "json"], d),
            _cli(["verify", "-i", "g.stp", "-t", "g.sol", "--exact"], d),
            _cli(["generate", "--nodes", "40", "--edges", "90", "--seed", "3", "-o", "gen.stp"], d),
            _cli(["postprocess", "--n", "2", "-i", "g.stp", "-t", "g.sol"], d),
        ]
        runs.append((d, outs))
    (d0, a), (d1, b) = runs
    same_streams = a == b
    same_files = all(filecmp.cmp(d0 / f, d1 / f, shallow=False) for f in ("tri.sol", "gen.stp"))
    codes_ok = all(code == 0 for code, _, _ in a)
    gap_zero = b"gap 0\n" in a[3][1]
    mstg_16 = (d0 / "tri.sol").read_text().startswith("NETCOST 16\n")
    ok = same_streams and same_files and codes_ok and gap_zero and mstg_16
    assert record(8, ok, f"6 CLI invocations run twice: identical streams {same_streams}, identical files "
                         f"{same_files}, exit 0 {codes_ok}, oracle gap 0 {gap_zero}, MSTG NETCOST 16 {mstg_16}")


def test_criterion_9_round_trip():
    rng = np.random.default_rng(909)
    bad_graph = bad_cost = 0
    for i in range(200):
        n = int(rng.integers(1, 200))
        m = int(rng.integers(n - 1, min(4 * n, n * (n - 1) // 2) + 1))
        g = generate_instance(GeneratorParams(n, m, float(rng.choice([1.0, 0.3, 0.01])), seed=30_000 + i))
        if parse_stp(write_graph(g)) != g:
            bad_graph += 1
        t = mstg(g) if i % 2 else fgw_prime(g)
        text = write_solution(g, t, algorithm="x")
        back, info = parse_solution(text, g)
        if back != t or text.splitlines()[0] != f"NETCOST {net_cost(g, t):.9g}" \
                or info["netcost"] != float(f"{net_cost(g, back):.9g}"):
            bad_cost += 1
    ok = bad_graph == 0 and bad_cost == 0
    assert record(9, ok, f"200 instances: {bad_graph} graph round-trip mismatches, {bad_cost} NETCOST mismatches "
                         f"(9 significant digits)")
