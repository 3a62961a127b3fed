"""Post-processing loop (P3) and the MSTG heuristic."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .graph import SolutionTree, _prim, check_tree, minimum_spanning_tree, net_cost
from .grow import tga
from .prune import prune_solution

__all__ = ["P3Config", "mst_technique", "p3", "mstg", "default_epsilon"]


@dataclass(frozen=True)
class P3Config:
    """Loop parameters for :func:`p3`.

    ``epsilon_improve=None`` means ``1e-12 * (sum of costs + sum of prizes)``.
    """

    n: int = 2
    epsilon_improve: float | None = None
    max_rounds: int = 100

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be >= 1")
        if self.epsilon_improve is not None and self.epsilon_improve < 0:
            raise DomainError("epsilon_improve must be >= 0")
        if self.max_rounds < 1:
            raise DomainError("max_rounds must be >= 1")

    def epsilon_for(self, g):
        if self.epsilon_improve is None:
            return default_epsilon(g)
        return self.epsilon_improve


def default_epsilon(g):
    return 1e-12 * (float(g.cost.sum()) + float(g.prizes.sum()))


def mst_technique(g, t):
    """Replace ``t`` by the MST of the subgraph induced on its vertices if strictly cheaper."""
    if len(t) <= 2:
        return t
    sub, verts, edge_map = g.induced(t.vertices)
    parent = _prim(sub.n, sub.indptr, sub.adj_vertex, sub.adj_edge, sub.adj_cost, 0)
    mst_edges = np.sort(edge_map[parent[parent >= 0]]).astype(np.int32)
    if np.array_equal(mst_edges, t.edges):
        return t
    if g.cost[mst_edges].sum() < g.cost[t.edges].sum():
        return SolutionTree(t.vertices, mst_edges)
    return t


def p3(g, t, cfg=None, *, return_trace=False):
    """Iterate TGA -> MST technique -> GPrA until a round gains at most epsilon.

    Returns the cheapest tree seen (plus the per-round net-costs when
    ``return_trace``).
    """
    cfg = cfg or P3Config()
    check_tree(g, t)
    eps = cfg.epsilon_for(g)
    best = cur = t
    best_cost = cur_cost = net_cost(g, t, check=False)
    trace = [cur_cost]
    for _ in range(cfg.max_rounds):
        cur = tga(g, cur, cfg.n, check=False)
        cur = mst_technique(g, cur)
        cur = prune_solution(g, cur)
        new_cost = net_cost(g, cur, check=False)
        trace.append(new_cost)
        if new_cost < best_cost:
            best, best_cost = cur, new_cost
        gain = cur_cost - new_cost
        cur_cost = new_cost
        if gain <= eps:
            break
    if return_trace:
        return best, trace
    return best


def mstg(g):
    """Global MST followed by GPrA with the graph's compulsory vertices."""
    return prune_solution(g, minimum_spanning_tree(g))
