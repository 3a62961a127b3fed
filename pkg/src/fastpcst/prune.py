"""Optimal pruning of a tree: the General Pruning Algorithm (GPrA).

Given a tree with real vertex weights, positive edge costs and an optional set
of compulsory vertices, GPrA returns the subtree of maximum net-weight that
contains every compulsory vertex. With no compulsory vertex a first leaf-peeling
sweep picks a pseudo-root whose accumulated value equals the optimum; the
second sweep then prunes towards that root.

:func:`strong_prune` is the classic single-root dynamic program, kept as a
baseline: it is optimal only for the root it is given.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._jit import njit
from .errors import DomainError, StructuralError
from .graph import SolutionTree, _build_csr, _tree_status

__all__ = [
    "TreeInstance",
    "PruneState",
    "first_sweep",
    "select_pseudo_root",
    "gpra",
    "strong_prune",
    "prune_solution",
]


class TreeInstance:
    """A node-weighted tree ``T(V, E, C, w, c)`` over local ids ``0..n-1``.

    Weights may be any real; costs must be positive. When built with
    :meth:`from_solution`, ``vertex_ids``/``edge_ids`` map local ids back to
    the parent graph.
    """

    __slots__ = ("n", "u", "v", "cost", "weight", "compulsory",
                 "indptr", "adj_vertex", "adj_edge", "vertex_ids", "edge_ids")

    def __init__(self, n, u, v, cost, weight, compulsory=(), *, _checked=False):
        self.n = int(n)
        self.u = np.ascontiguousarray(u, dtype=np.int32)
        self.v = np.ascontiguousarray(v, dtype=np.int32)
        self.cost = np.ascontiguousarray(cost, dtype=np.float64)
        self.weight = np.ascontiguousarray(weight, dtype=np.float64)
        self.compulsory = np.unique(np.asarray(compulsory, dtype=np.int32))
        self.vertex_ids = None
        self.edge_ids = None
        if not _checked:
            self._validate()
        self.indptr, self.adj_vertex, self.adj_edge = _build_csr(self.n, self.u, self.v)

    def _validate(self):
        if self.n < 1:
            raise StructuralError("tree has no vertices")
        if not (self.u.shape == self.v.shape == self.cost.shape):
            raise DomainError("u, v and cost must have the same length")
        if self.weight.shape != (self.n,):
            raise DomainError(f"expected {self.n} weights")
        if np.any(self.cost <= 0):
            raise DomainError("edge costs must be > 0")
        if self.compulsory.size and (self.compulsory[0] < 0 or self.compulsory[-1] >= self.n):
            raise DomainError("compulsory vertex out of range")
        if self.u.shape[0] != self.n - 1:
            raise StructuralError("input is not a tree (|E| != |V| - 1)")
        if self.u.size and (min(self.u.min(), self.v.min()) < 0 or max(self.u.max(), self.v.max()) >= self.n):
            raise StructuralError("edge endpoint out of range")
        status = _tree_status(self.n, self.u.shape[0], self.u, self.v,
                              np.arange(self.n, dtype=np.int64),
                              np.arange(self.u.shape[0], dtype=np.int64))
        if status:
            raise StructuralError("input is not a tree")

    @classmethod
    def from_solution(cls, g, t, weights=None, compulsory=None):
        """Relabel tree ``t`` of graph ``g`` as a standalone instance.

        ``compulsory`` defaults to the graph's compulsory vertices that lie in
        ``t``; ``weights`` defaults to the graph's prizes.
        """
        verts = t.vertices.astype(np.int64)
        edges = t.edges.astype(np.int64)
        if verts.size == 0:
            raise StructuralError("tree has no vertices")
        local = np.full(g.n, -1, dtype=np.int64)
        local[verts] = np.arange(verts.shape[0])
        a = local[g.edge_u[edges]]
        b = local[g.edge_v[edges]]
        if np.any(a < 0) or np.any(b < 0) or edges.shape[0] != verts.shape[0] - 1:
            raise StructuralError("solution is not a tree")
        w = g.prizes if weights is None else np.asarray(weights, dtype=np.float64)
        comp = g.compulsory if compulsory is None else np.asarray(compulsory, dtype=np.int64)
        comp = local[comp]
        inst = cls(verts.shape[0], a, b, g.cost[edges], w[verts], comp[comp >= 0], _checked=True)
        status = _tree_status(inst.n, inst.u.shape[0], inst.u, inst.v,
                              np.arange(inst.n, dtype=np.int64),
                              np.arange(inst.u.shape[0], dtype=np.int64))
        if status:
            raise StructuralError("solution is not a tree")
        inst.vertex_ids = verts
        inst.edge_ids = edges
        return inst

    def big_b(self):
        return float(np.abs(self.cost).sum() + np.abs(self.weight).sum())

    def net_weight(self, t):
        return float(self.weight[t.vertices].sum() - self.cost[t.edges].sum())

    def to_parent(self, t):
        """Map a local :class:`SolutionTree` back to parent-graph ids."""
        if self.vertex_ids is None:
            return t
        return SolutionTree(self.vertex_ids[t.vertices], self.edge_ids[t.edges])


@dataclass
class PruneState:
    nw: np.ndarray
    processed: np.ndarray
    xi: np.ndarray
    big_b: float
    order: np.ndarray          # vertices in processing order
    last: int = -1             # vertex left unprocessed by the first sweep


@njit
def _first_sweep(n, indptr, adj_v, adj_e, cost, nw, xi, processed, order):
    """Leaf peeling in rounds; each round handles its leaves by ascending id.

    Returns the number of processed vertices; exactly one vertex is left.
    """
    remaining = n
    leaves = np.empty(n, dtype=np.int32)
    nxt = np.empty(n, dtype=np.int32)
    k = 0
    for i in range(n):
        if xi[i] == 1:
            leaves[k] = i
            k += 1
    done = 0
    while remaining > 1 and k > 0:
        kn = 0
        for a in range(k):
            if remaining <= 1:
                break
            i = leaves[a]
            if processed[i] or xi[i] != 1:
                continue
            j = -1
            c = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                y = adj_v[p]
                if not processed[y]:
                    j = y
                    c = cost[adj_e[p]]
                    break
            if c < nw[i]:
                nw[j] += nw[i] - c
            processed[i] = True
            order[done] = i
            done += 1
            remaining -= 1
            xi[j] -= 1
            if xi[j] == 1:
                nxt[kn] = j
                kn += 1
        leaves[:kn] = np.sort(nxt[:kn])
        k = kn
    return done


@njit
def _root_sweep(n, indptr, adj_v, adj_e, cost, nw, root):
    """Process every non-root vertex after all of its descendants.

    A branch whose value is below its connecting edge cost is cut, otherwise
    its value minus the edge cost is added to the parent (ties keep the
    branch). Returns the alive mask, the parent edge of each vertex and the
    number of processed vertices.
    """
    parent = np.full(n, -1, dtype=np.int32)
    pedge = np.full(n, -1, dtype=np.int32)
    order = np.empty(n, dtype=np.int32)
    seen = np.zeros(n, dtype=np.bool_)
    order[0] = root
    seen[root] = True
    head = 0
    tail = 1
    while head < tail:
        x = order[head]
        head += 1
        for p in range(indptr[x], indptr[x + 1]):
            y = adj_v[p]
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                pedge[y] = adj_e[p]
                order[tail] = y
                tail += 1
    cut = np.zeros(n, dtype=np.bool_)
    for a in range(tail - 1, 0, -1):
        i = order[a]
        j = parent[i]
        c = cost[pedge[i]]
        if nw[i] < c:
            cut[i] = True
        else:
            nw[j] += nw[i] - c
    alive = np.zeros(n, dtype=np.bool_)
    alive[root] = True
    for a in range(1, tail):
        i = order[a]
        alive[i] = alive[parent[i]] and not cut[i]
    return alive, pedge, tail - 1


def _as_tree(alive, pedge, root):
    verts = np.flatnonzero(alive)
    edges = pedge[verts]
    edges = edges[edges >= 0]
    return SolutionTree(verts, edges)


def first_sweep(inst):
    """Run the pseudo-root sweep and return its :class:`PruneState`."""
    nw = inst.weight.copy()
    xi = np.diff(inst.indptr).astype(np.int64)
    processed = np.zeros(inst.n, dtype=np.bool_)
    order = np.full(inst.n, -1, dtype=np.int32)
    done = _first_sweep(inst.n, inst.indptr, inst.adj_vertex, inst.adj_edge,
                        inst.cost, nw, xi, processed, order)
    last = int(np.flatnonzero(~processed)[0])
    return PruneState(nw=nw, processed=processed, xi=xi, big_b=inst.big_b(),
                      order=order[:done], last=last)


def select_pseudo_root(inst):
    """Vertex with the largest value after the first sweep (lowest id on ties).

    Its value equals the optimal net-weight of the unconstrained problem.
    """
    state = first_sweep(inst)
    return int(np.argmax(state.nw))


def gpra(inst, *, return_state=False):
    """Maximum net-weight subtree of ``inst`` containing all compulsory vertices.

    With no compulsory vertex the pseudo-root is used as the only one (the
    instance itself is not modified). Among compulsory vertices the lowest id
    is the root; the optimum value does not depend on that choice.
    """
    comp = inst.compulsory
    if comp.size == 0:
        comp = np.array([select_pseudo_root(inst)], dtype=np.int32)
    big_b = inst.big_b()
    nw = inst.weight.copy()
    nw[comp] = big_b
    root = int(comp[0])
    alive, pedge, processed = _root_sweep(inst.n, inst.indptr, inst.adj_vertex, inst.adj_edge,
                                          inst.cost, nw, root)
    tree = _as_tree(alive, pedge, root)
    if return_state:
        return tree, {"root": root, "nw": nw, "processed": int(processed), "big_b": big_b}
    return tree


def strong_prune(inst, root):
    """Best subtree containing ``root``; compulsory vertices are ignored."""
    root = int(root)
    if not 0 <= root < inst.n:
        raise DomainError(f"root {root} is not a vertex of the tree")
    nw = inst.weight.copy()
    alive, pedge, _ = _root_sweep(inst.n, inst.indptr, inst.adj_vertex, inst.adj_edge,
                                  inst.cost, nw, root)
    return _as_tree(alive, pedge, root)


def prune_solution(g, t):
    """GPrA applied to solution tree ``t`` of graph ``g`` (compulsory = C ∩ t)."""
    inst = TreeInstance.from_solution(g, t)
    return inst.to_parent(gpra(inst))
