"""Instance and solution data model.

Vertices are the integers ``0..n-1``. Edges are stored once per unordered pair
with ``u < v`` and sorted by ``(u, v)``, so an edge index doubles as the MST
tie-break key. Trees refer to edges by index into the parent graph.
"""
from __future__ import annotations

import numpy as np

from ._jit import njit
from .errors import ConnectivityError, DomainError, StructuralError
from .heaps import NIL

__all__ = [
    "Graph",
    "SolutionTree",
    "net_cost",
    "net_weight",
    "is_connected",
    "minimum_spanning_tree",
    "check_tree",
]


@njit
def _build_csr(n, eu, ev):
    m = eu.shape[0]
    deg = np.zeros(n + 1, dtype=np.int64)
    for e in range(m):
        deg[eu[e] + 1] += 1
        deg[ev[e] + 1] += 1
    for i in range(n):
        deg[i + 1] += deg[i]
    indptr = deg.copy()
    fill = deg[:n].copy()
    adj_v = np.empty(2 * m, dtype=np.int32)
    adj_e = np.empty(2 * m, dtype=np.int32)
    # edges are sorted by (u, v) so each neighbour list comes out sorted by edge id
    for e in range(m):
        a = eu[e]
        b = ev[e]
        adj_v[fill[a]] = b
        adj_e[fill[a]] = e
        fill[a] += 1
        adj_v[fill[b]] = a
        adj_e[fill[b]] = e
        fill[b] += 1
    return indptr, adj_v, adj_e


@njit
def _reach_count(n, indptr, adj_v, start):
    seen = np.zeros(n, dtype=np.bool_)
    stack = np.empty(n, dtype=np.int32)
    stack[0] = start
    seen[start] = True
    top = 1
    count = 1
    while top > 0:
        top -= 1
        x = stack[top]
        for k in range(indptr[x], indptr[x + 1]):
            y = adj_v[k]
            if not seen[y]:
                seen[y] = True
                stack[top] = y
                top += 1
                count += 1
    return count


@njit
def _prim(n, indptr, adj_v, adj_e, adj_c, start):
    """Prim's algorithm on a 4-ary heap ordered by (cost, edge id).

    ``adj_c`` is the edge cost laid out in adjacency order, so the scan over a
    vertex's neighbours reads memory sequentially. Heap slots hold their own
    key copies; only ``pos`` is indexed by vertex. Returns the parent edge of
    every vertex (-1 for ``start`` and for vertices not reachable from it).
    """
    hk = np.empty(max(n, 1))
    ht = np.empty(max(n, 1), dtype=np.int64)
    hv = np.empty(max(n, 1), dtype=np.int32)
    pos = np.full(n, NIL, dtype=np.int32)
    done = np.zeros(n, dtype=np.bool_)
    parent_edge = np.full(n, NIL, dtype=np.int32)
    hk[0] = 0.0
    ht[0] = -1
    hv[0] = start
    pos[start] = 0
    size = 1
    while size > 0:
        x = hv[0]
        pos[x] = NIL
        done[x] = True
        size -= 1
        if size > 0:
            k = hk[size]
            t = ht[size]
            v = hv[size]
            i = 0
            while True:
                c = 4 * i + 1
                if c >= size:
                    break
                b = c
                for d in range(c + 1, min(c + 4, size)):
                    if hk[d] < hk[b] or (hk[d] == hk[b] and ht[d] < ht[b]):
                        b = d
                if hk[b] < k or (hk[b] == k and ht[b] < t):
                    hk[i] = hk[b]
                    ht[i] = ht[b]
                    hv[i] = hv[b]
                    pos[hv[i]] = i
                    i = b
                else:
                    break
            hk[i] = k
            ht[i] = t
            hv[i] = v
            pos[v] = i
        for j in range(indptr[x], indptr[x + 1]):
            y = adj_v[j]
            if done[y]:
                continue
            c = adj_c[j]
            e = adj_e[j]
            i = pos[y]
            if i < 0:
                i = size
                size += 1
            elif not (c < hk[i] or (c == hk[i] and e < ht[i])):
                continue
            parent_edge[y] = e
            while i > 0:
                p = (i - 1) >> 2
                if c < hk[p] or (c == hk[p] and e < ht[p]):
                    hk[i] = hk[p]
                    ht[i] = ht[p]
                    hv[i] = hv[p]
                    pos[hv[i]] = i
                    i = p
                else:
                    break
            hk[i] = c
            ht[i] = e
            hv[i] = y
            pos[y] = i
    return parent_edge


@njit
def _tree_status(n, m, eu, ev, verts, edges):
    """0 ok, 1 vertex out of range, 2 edge out of range, 3 endpoint outside,
    4 cycle, 5 disconnected, 6 empty, 7 duplicate vertex/edge."""
    k = verts.shape[0]
    if k == 0:
        return 6
    local = np.full(n, -1, dtype=np.int32)
    for i in range(k):
        x = verts[i]
        if x < 0 or x >= n:
            return 1
        if local[x] >= 0:
            return 7
        local[x] = i
    uf = np.arange(k)
    used = edges.shape[0]
    for j in range(used):
        e = edges[j]
        if e < 0 or e >= m:
            return 2
        a = local[eu[e]]
        b = local[ev[e]]
        if a < 0 or b < 0:
            return 3
        while uf[a] != a:
            uf[a] = uf[uf[a]]
            a = uf[a]
        while uf[b] != b:
            uf[b] = uf[uf[b]]
            b = uf[b]
        if a == b:
            return 4
        uf[a] = b
    if used != k - 1:
        return 5
    return 0


_STATUS_TEXT = {
    1: "vertex id out of range",
    2: "edge index out of range",
    3: "edge endpoint not among the tree's vertices",
    4: "edges contain a cycle (or a repeated edge)",
    5: "subgraph is disconnected",
    6: "tree has no vertices",
    7: "repeated vertex",
}


class Graph:
    """Undirected PCSTP instance ``G(V, E, C, w, c)``.

    Parameters
    ----------
    n : int
        Number of vertices, ids ``0..n-1``.
    u, v, cost : array_like
        Edge endpoints and costs. Parallel edges collapse to the cheapest one;
        self-loops and non-positive costs raise :class:`DomainError`.
    prizes : array_like, optional
        Vertex prizes, default all zero.
    compulsory : iterable of int, optional
        Vertices every feasible solution must contain.
    require_connected : bool
        Raise :class:`ConnectivityError` for a disconnected graph.
    allow_negative_prizes : bool
        Accept negative prizes (node-weighted tree instances).
    """

    __slots__ = (
        "n", "edge_u", "edge_v", "cost", "prizes", "compulsory",
        "indptr", "adj_vertex", "adj_edge", "adj_cost", "_keys", "__weakref__",
    )

    def __init__(self, n, u=(), v=(), cost=(), prizes=None, compulsory=(),
                 *, require_connected=True, allow_negative_prizes=False):
        n = int(n)
        if n < 1:
            raise DomainError("graph needs at least one vertex")
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        cost = np.asarray(cost, dtype=np.float64).ravel()
        if not (u.shape == v.shape == cost.shape):
            raise DomainError("u, v and cost must have the same length")
        if u.size:
            if u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n:
                raise DomainError("edge endpoint out of range")
            if np.any(u == v):
                raise DomainError("self-loops are not allowed")
            if not np.all(np.isfinite(cost)) or np.any(cost <= 0):
                raise DomainError("edge costs must be finite and > 0")
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        keys = lo * n + hi
        # sort by pair, then by cost, and keep the first (cheapest) of each pair
        order = np.lexsort((cost, keys))
        keys = keys[order]
        first = np.ones(keys.shape[0], dtype=bool)
        first[1:] = keys[1:] != keys[:-1]
        order = order[first]
        keys = keys[first]
        if prizes is None:
            prizes = np.zeros(n)
        prizes = np.array(prizes, dtype=np.float64).ravel()
        if prizes.shape[0] != n:
            raise DomainError(f"expected {n} prizes, got {prizes.shape[0]}")
        if not np.all(np.isfinite(prizes)):
            raise DomainError("prizes must be finite")
        if not allow_negative_prizes and np.any(prizes < 0):
            raise DomainError("prizes must be >= 0")
        self._init_arrays(n, lo[order], hi[order], cost[order], prizes, compulsory, keys)
        if require_connected and not is_connected(self):
            raise ConnectivityError("graph is not connected")

    def _init_arrays(self, n, lo, hi, cost, prizes, compulsory, keys):
        comp = np.unique(np.asarray(list(compulsory) if not isinstance(compulsory, np.ndarray)
                                    else compulsory, dtype=np.int64))
        if comp.size and (comp[0] < 0 or comp[-1] >= n):
            raise DomainError("compulsory vertex out of range")
        self.n = n
        self.edge_u = np.ascontiguousarray(lo, dtype=np.int32)
        self.edge_v = np.ascontiguousarray(hi, dtype=np.int32)
        self.cost = np.ascontiguousarray(cost, dtype=np.float64)
        self.prizes = np.ascontiguousarray(prizes, dtype=np.float64)
        self.compulsory = comp.astype(np.int32)
        self._keys = keys
        self.indptr, self.adj_vertex, self.adj_edge = _build_csr(n, self.edge_u, self.edge_v)
        self.adj_cost = self.cost[self.adj_edge]
        for arr in (self.edge_u, self.edge_v, self.cost, self.prizes, self.compulsory,
                    self.indptr, self.adj_vertex, self.adj_edge, self.adj_cost, self._keys):
            arr.flags.writeable = False

    @classmethod
    def _from_normalized(cls, n, lo, hi, cost, prizes, compulsory):
        """Build from edges already in canonical sorted form (no validation)."""
        g = cls.__new__(cls)
        lo = np.asarray(lo, dtype=np.int64)
        g._init_arrays(n, lo, hi, cost, prizes, compulsory, lo * n + np.asarray(hi, dtype=np.int64))
        return g

    @classmethod
    def from_edges(cls, n, edges, prizes=None, compulsory=(), **kwargs):
        """Build from an iterable of ``(u, v, cost)`` triples."""
        edges = list(edges)
        if edges:
            u, v, c = zip(*edges)
        else:
            u = v = c = ()
        return cls(n, u, v, c, prizes, compulsory, **kwargs)

    @property
    def m(self):
        return int(self.edge_u.shape[0])

    def edge_index(self, a, b):
        """Index of edge ``{a, b}`` or -1."""
        a, b = (a, b) if a < b else (b, a)
        key = int(a) * self.n + int(b)
        i = int(np.searchsorted(self._keys, key))
        if i < self._keys.shape[0] and self._keys[i] == key:
            return i
        return -1

    def edge_indices(self, a, b):
        """Vectorised :meth:`edge_index` (``-1`` where absent)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        key = np.minimum(a, b) * self.n + np.maximum(a, b)
        if self._keys.shape[0] == 0:
            return np.full(key.shape, -1, dtype=np.int64)
        i = np.minimum(np.searchsorted(self._keys, key), self._keys.shape[0] - 1)
        return np.where(self._keys[i] == key, i, -1)

    def neighbors(self, x):
        lo, hi = self.indptr[x], self.indptr[x + 1]
        return self.adj_vertex[lo:hi], self.adj_edge[lo:hi]

    def induced(self, vertices):
        """Subgraph induced by ``vertices``.

        Returns ``(sub, vertices, edge_map)`` where ``sub`` is a :class:`Graph`
        over ``0..k-1`` (local id ``i`` is ``vertices[i]``, sorted ascending) and
        ``edge_map[j]`` is the parent edge of local edge ``j``. Connectivity is
        not checked.
        """
        vertices = np.unique(np.asarray(vertices, dtype=np.int64))
        local = np.full(self.n, -1, dtype=np.int64)
        local[vertices] = np.arange(vertices.shape[0])
        a = local[self.edge_u]
        b = local[self.edge_v]
        edge_map = np.flatnonzero((a >= 0) & (b >= 0))
        comp = local[self.compulsory]
        sub = Graph._from_normalized(
            int(vertices.shape[0]), a[edge_map], b[edge_map], self.cost[edge_map],
            self.prizes[vertices], comp[comp >= 0],
        )
        return sub, vertices, edge_map

    def total_prize(self):
        return float(self.prizes.sum())

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.edge_u, other.edge_u)
            and np.array_equal(self.edge_v, other.edge_v)
            and np.array_equal(self.cost, other.cost)
            and np.array_equal(self.prizes, other.prizes)
            and np.array_equal(self.compulsory, other.compulsory)
        )

    __hash__ = None

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, |C|={self.compulsory.shape[0]})"


class SolutionTree:
    """Vertex set plus edge indices into a parent :class:`Graph`.

    Both arrays are kept sorted; shape is only checked by :func:`check_tree`.
    """

    __slots__ = ("vertices", "edges")

    def __init__(self, vertices, edges=()):
        self.vertices = np.unique(np.asarray(vertices, dtype=np.int32))
        self.edges = np.unique(np.asarray(edges, dtype=np.int32))
        if self.vertices.ndim != 1 or self.edges.ndim != 1:
            raise StructuralError("vertices and edges must be 1-d")

    @classmethod
    def from_edges(cls, g, edges):
        """Tree spanned by ``edges``; vertices are the edge endpoints."""
        edges = np.asarray(edges, dtype=np.int64)
        if edges.size == 0:
            raise StructuralError("an edge-less tree needs an explicit vertex")
        return cls(np.concatenate([g.edge_u[edges], g.edge_v[edges]]), edges)

    @classmethod
    def single(cls, v):
        return cls([v], [])

    def __len__(self):
        return int(self.vertices.shape[0])

    def __eq__(self, other):
        if not isinstance(other, SolutionTree):
            return NotImplemented
        return np.array_equal(self.vertices, other.vertices) and np.array_equal(self.edges, other.edges)

    __hash__ = None

    def __repr__(self):
        if len(self) <= 8:
            return f"SolutionTree(vertices={self.vertices.tolist()}, edges={self.edges.tolist()})"
        return f"SolutionTree(|V|={len(self)}, |E|={self.edges.shape[0]})"


def check_tree(g, t):
    """Raise :class:`StructuralError` unless ``t`` is a tree inside ``g``."""
    status = _tree_status(g.n, g.m, g.edge_u, g.edge_v,
                          t.vertices.astype(np.int64), t.edges.astype(np.int64))
    if status:
        raise StructuralError(_STATUS_TEXT[status])


def net_cost(g, t, *, check=True):
    """Missed prizes plus included edge costs."""
    if check:
        check_tree(g, t)
    inside = np.zeros(g.n, dtype=bool)
    inside[t.vertices] = True
    return float(g.prizes[~inside].sum() + g.cost[t.edges].sum())


def net_weight(t, weights, costs):
    """Included vertex weights minus included edge costs.

    ``weights``/``costs`` are indexed by the tree's vertex ids and edge indices;
    weights may be negative.
    """
    weights = np.asarray(weights, dtype=np.float64)
    costs = np.asarray(costs, dtype=np.float64)
    if t.vertices.size == 0:
        raise StructuralError("tree has no vertices")
    if t.vertices.max() >= weights.shape[0] or (t.edges.size and t.edges.max() >= costs.shape[0]):
        raise StructuralError("tree refers to vertices/edges outside the weight arrays")
    return float(weights[t.vertices].sum() - costs[t.edges].sum())


def is_connected(g):
    return bool(_reach_count(g.n, g.indptr, g.adj_vertex, 0) == g.n)


def minimum_spanning_tree(g):
    """Minimum spanning tree by Prim's algorithm.

    Equal costs are broken by edge index, i.e. by the ``(min, max)`` endpoint
    pair, which makes the result unique.
    """
    parent = _prim(g.n, g.indptr, g.adj_vertex, g.adj_edge, g.adj_cost, 0)
    edges = parent[parent >= 0]
    if edges.shape[0] != g.n - 1:
        raise ConnectivityError("graph is not connected; no spanning tree")
    return SolutionTree(np.arange(g.n), edges)
