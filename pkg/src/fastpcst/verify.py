"""Solution checks, lower-bound certificates and brute-force oracles."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._jit import njit
from .errors import DomainError, StructuralError
from .graph import SolutionTree, _STATUS_TEXT, _tree_status

__all__ = [
    "Certificate",
    "validate_solution",
    "gw_lower_bound",
    "certify",
    "exact_pcst",
    "exact_nwstpt",
    "MAX_EXACT_PCST",
    "MAX_EXACT_NWSTPT",
]

MAX_EXACT_PCST = 18
MAX_EXACT_NWSTPT = 16


@dataclass
class Certificate:
    net_cost: float
    lower_bound: float | None = None
    ratio_bound: float | None = None
    feasible: bool = True
    violations: list = field(default_factory=list)


def validate_solution(g, t):
    """Feasibility report for ``t``; problems are listed, never raised."""
    violations = []
    status = _tree_status(g.n, g.m, g.edge_u, g.edge_v,
                          t.vertices.astype(np.int64), t.edges.astype(np.int64))
    if status:
        violations.append(_STATUS_TEXT[status])
    in_range = (t.vertices.size == 0 or (t.vertices.min() >= 0 and t.vertices.max() < g.n)) and \
        (t.edges.size == 0 or (t.edges.min() >= 0 and t.edges.max() < g.m))
    if in_range:
        inside = np.zeros(g.n, dtype=bool)
        inside[t.vertices] = True
        missing = g.compulsory[~inside[g.compulsory]]
        if missing.size:
            violations.append(f"missing compulsory vertices: {missing.tolist()}")
        cost = float(g.prizes[~inside].sum() + g.cost[t.edges].sum())
    else:
        cost = float("nan")
    return Certificate(net_cost=cost, feasible=not violations, violations=violations)


def gw_lower_bound(g, t):
    """``c(T)/2 + w(outside T)``: a lower bound on the optimum for GW-family trees."""
    inside = np.zeros(g.n, dtype=bool)
    inside[t.vertices] = True
    return float(g.cost[t.edges].sum() / 2.0 + g.prizes[~inside].sum())


def certify(g, t, lower_bound=None):
    """:func:`validate_solution` plus lower bound and ratio fields."""
    cert = validate_solution(g, t)
    if lower_bound is not None:
        cert.lower_bound = float(lower_bound)
        if cert.lower_bound > 0:
            cert.ratio_bound = cert.net_cost / cert.lower_bound
        if cert.lower_bound > cert.net_cost * (1 + 1e-12) + 1e-12:
            cert.violations.append("lower bound exceeds net cost")
            cert.feasible = False
    return cert


@njit
def _uf_find(uf, x):
    while uf[x] != x:
        uf[x] = uf[uf[x]]
        x = uf[x]
    return x


@njit
def _kruskal_mask(n, mask, eu, ev, cost, order, uf, chosen):
    """Kruskal over the edges inside ``mask``; returns (unions, total cost)."""
    for v in range(n):
        uf[v] = v
    unions = 0
    total = 0.0
    for k in range(order.shape[0]):
        e = order[k]
        a = eu[e]
        b = ev[e]
        if (mask >> a) & 1 and (mask >> b) & 1:
            ra = _uf_find(uf, a)
            rb = _uf_find(uf, b)
            if ra != rb:
                uf[ra] = rb
                chosen[unions] = e
                unions += 1
                total += cost[e]
    return unions, total


@njit
def _lex_smaller(a, b):
    """Is the sorted vertex list of mask ``a`` lexicographically below that of ``b``?"""
    x = a ^ b
    if x == 0:
        return False
    low = x & -x
    if a & low:
        # a has the smaller element here; b wins only if it has nothing above it
        return (b & ~(low | (low - 1))) != 0
    return (a & ~(low | (low - 1))) == 0


@njit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit
def _exact_pcst_kernel(n, eu, ev, cost, prizes, order, cmask):
    uf = np.empty(n, dtype=np.int64)
    chosen = np.empty(max(n - 1, 1), dtype=np.int64)
    best = np.inf
    best_mask = np.int64(0)
    full = (np.int64(1) << n) - 1
    for mask in range(1, full + 1):
        if mask & cmask != cmask:
            continue
        k = _popcount(mask)
        unions, total = _kruskal_mask(n, mask, eu, ev, cost, order, uf, chosen)
        if unions != k - 1:
            continue
        missed = 0.0
        for v in range(n):
            if not (mask >> v) & 1:
                missed += prizes[v]
        obj = missed + total
        if obj < best or (obj == best and _lex_smaller(mask, best_mask)):
            best = obj
            best_mask = mask
    return best_mask, best


def exact_pcst(g, *, return_value=False):
    """Optimal PCSTP solution by enumerating connected vertex subsets.

    For each subset containing the compulsory vertices whose induced subgraph
    is connected, the cheapest tree on exactly that vertex set is the induced
    MST. Ties go to the lexicographically smallest vertex list.
    """
    if g.n > MAX_EXACT_PCST:
        raise DomainError(f"exact_pcst is limited to {MAX_EXACT_PCST} vertices")
    order = np.lexsort((np.arange(g.m), g.cost)).astype(np.int64)
    cmask = 0
    for v in g.compulsory.tolist():
        cmask |= 1 << v
    eu = g.edge_u.astype(np.int64)
    ev = g.edge_v.astype(np.int64)
    mask, value = _exact_pcst_kernel(g.n, eu, ev, g.cost, g.prizes, order, np.int64(cmask))
    mask = int(mask)
    uf = np.empty(g.n, dtype=np.int64)
    chosen = np.empty(max(g.n - 1, 1), dtype=np.int64)
    unions, _ = _kruskal_mask(g.n, np.int64(mask), eu, ev, g.cost, order, uf, chosen)
    verts = [v for v in range(g.n) if (mask >> v) & 1]
    tree = SolutionTree(verts, chosen[:unions])
    if return_value:
        return tree, float(value)
    return tree


@njit
def _exact_nwstpt_kernel(n, tu, tv, cost, weight, cmask):
    best = -np.inf
    best_mask = np.int64(0)
    full = (np.int64(1) << n) - 1
    m = tu.shape[0]
    for mask in range(1, full + 1):
        if mask & cmask != cmask:
            continue
        inner = 0
        total = 0.0
        for v in range(n):
            if (mask >> v) & 1:
                total += weight[v]
        for e in range(m):
            if (mask >> tu[e]) & 1 and (mask >> tv[e]) & 1:
                inner += 1
                total -= cost[e]
        if inner != _popcount(mask) - 1:
            continue
        if total > best or (total == best and _lex_smaller(mask, best_mask)):
            best = total
            best_mask = mask
    return best_mask, best


def exact_nwstpt(inst, *, return_tree=False):
    """Best net-weight over all subtrees of a tree instance containing its compulsory set."""
    if inst.n > MAX_EXACT_NWSTPT:
        raise DomainError(f"exact_nwstpt is limited to {MAX_EXACT_NWSTPT} vertices")
    if inst.u.shape[0] != inst.n - 1:
        raise StructuralError("input is not a tree")
    cmask = 0
    for v in inst.compulsory.tolist():
        cmask |= 1 << v
    mask, value = _exact_nwstpt_kernel(inst.n, inst.u.astype(np.int64), inst.v.astype(np.int64),
                                       inst.cost, inst.weight, np.int64(cmask))
    if not return_tree:
        return float(value)
    mask = int(mask)
    verts = [v for v in range(inst.n) if (mask >> v) & 1]
    edges = [e for e in range(inst.u.shape[0])
             if (mask >> int(inst.u[e])) & 1 and (mask >> int(inst.v[e])) & 1]
    return float(value), SolutionTree(verts, edges)
