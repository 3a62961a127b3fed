"""Tree Growing Algorithm (TGA).

A *path candidate* is a simple path that meets the current tree in exactly one
vertex (its root). Its length is the number of new vertices and its value is
the prize of the new vertices minus the cost of the path edges. TGA keeps
attaching the best candidate of value >= 0 and length <= n until no tree
vertex has one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._jit import njit
from .errors import DomainError
from .graph import SolutionTree, check_tree

__all__ = ["PathCandidate", "enumerate_path_candidates", "best_path_candidate", "tga"]


@dataclass(frozen=True)
class PathCandidate:
    root_vertex: int
    new_vertices: tuple
    edges: tuple
    value: float

    @property
    def length(self):
        return len(self.new_vertices)

    def sort_key(self):
        return (-self.value, self.new_vertices)


def enumerate_path_candidates(g, t, i, n):
    """All path candidates rooted at ``i`` with 1..n new vertices.

    Sorted by descending value, then by the new-vertex sequence.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    in_tree = np.zeros(g.n, dtype=bool)
    in_tree[t.vertices] = True
    if not in_tree[i]:
        raise DomainError(f"vertex {i} is not in the tree")
    prizes = g.prizes
    cost = g.cost
    out = []

    def extend(x, verts, edges, value):
        nbrs, eids = g.neighbors(x)
        for y, e in zip(nbrs.tolist(), eids.tolist()):
            if in_tree[y] or y in verts:
                continue
            val = value + prizes[y] - cost[e]
            path_v = verts + (y,)
            path_e = edges + (e,)
            out.append(PathCandidate(int(i), path_v, path_e, float(val)))
            if len(path_v) < n:
                extend(y, path_v, path_e, val)

    extend(int(i), (), (), 0.0)
    out.sort(key=PathCandidate.sort_key)
    return out


@njit
def _lex_less(a, la, b, lb):
    k = min(la, lb)
    for q in range(k):
        if a[q] != b[q]:
            return a[q] < b[q]
    return la < lb


@njit
def _best_candidate(root, cap, indptr, adj_v, adj_e, cost, w, blocked,
                    path_v, path_e, ptr, vals, best_v, best_e):
    """Depth-limited DFS for the best candidate at ``root``.

    ``blocked`` marks tree vertices; vertices on the current path are blocked
    temporarily. Returns ``(length, value)`` with length 0 if none exists.
    """
    best_len = 0
    best_val = -np.inf
    d = 0
    ptr[0] = indptr[root]
    vals[0] = 0.0
    while d >= 0:
        x = root if d == 0 else path_v[d - 1]
        if ptr[d] < indptr[x + 1]:
            p = ptr[d]
            ptr[d] += 1
            y = adj_v[p]
            if blocked[y]:
                continue
            e = adj_e[p]
            val = vals[d] + w[y] - cost[e]
            path_v[d] = y
            path_e[d] = e
            length = d + 1
            if val > best_val or (val == best_val and _lex_less(path_v, length, best_v, best_len)):
                best_val = val
                best_len = length
                for q in range(length):
                    best_v[q] = path_v[q]
                    best_e[q] = path_e[q]
            if length < cap:
                blocked[y] = True
                vals[length] = val
                d = length
                ptr[d] = indptr[y]
        else:
            if d > 0:
                blocked[path_v[d - 1]] = False
            d -= 1
    return best_len, best_val


@njit
def _tga(cap, indptr, adj_v, adj_e, cost, w, in_tree, start):
    n = in_tree.shape[0]
    path_v = np.empty(cap, dtype=np.int32)
    path_e = np.empty(cap, dtype=np.int32)
    best_v = np.empty(cap, dtype=np.int32)
    best_e = np.empty(cap, dtype=np.int32)
    ptr = np.empty(cap + 1, dtype=np.int64)
    vals = np.empty(cap + 1)
    added_e = np.empty(n, dtype=np.int32)
    n_added = 0
    cur = np.sort(start.astype(np.int32))
    nxt = np.empty(n, dtype=np.int32)
    while cur.shape[0] > 0:
        k = 0
        for a in range(cur.shape[0]):
            i = cur[a]
            length, val = _best_candidate(i, cap, indptr, adj_v, adj_e, cost, w, in_tree,
                                          path_v, path_e, ptr, vals, best_v, best_e)
            if length > 0 and val >= 0.0:
                for q in range(length):
                    in_tree[best_v[q]] = True
                    added_e[n_added] = best_e[q]
                    n_added += 1
                    nxt[k] = best_v[q]
                    k += 1
                nxt[k] = i
                k += 1
        cur = np.sort(nxt[:k])
    return added_e[:n_added]


def best_path_candidate(g, t, i, n):
    """Best candidate at ``i`` (any value) as found by the compiled search, or None."""
    in_tree = np.zeros(g.n, dtype=np.bool_)
    in_tree[t.vertices] = True
    if not in_tree[i]:
        raise DomainError(f"vertex {i} is not in the tree")
    bufs = [np.empty(n, dtype=np.int32) for _ in range(4)]
    ptr = np.empty(n + 1, dtype=np.int64)
    vals = np.empty(n + 1)
    length, val = _best_candidate(int(i), int(n), g.indptr, g.adj_vertex, g.adj_edge, g.cost,
                                  g.prizes, in_tree, bufs[0], bufs[1], ptr, vals, bufs[2], bufs[3])
    if length == 0:
        return None
    return PathCandidate(int(i), tuple(bufs[2][:length].tolist()),
                         tuple(bufs[3][:length].tolist()), float(val))


def tga(g, t, n, *, check=True):
    """Grow ``t`` by non-negative path candidates of length at most ``n``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if check:
        check_tree(g, t)
    in_tree = np.zeros(g.n, dtype=np.bool_)
    in_tree[t.vertices] = True
    added = _tga(int(n), g.indptr, g.adj_vertex, g.adj_edge, g.cost, g.prizes, in_tree, t.vertices)
    if added.shape[0] == 0:
        return t
    return SolutionTree(np.flatnonzero(in_tree), np.concatenate([t.edges, added]))
