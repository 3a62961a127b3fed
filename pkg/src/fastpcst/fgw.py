"""FGW' solver: event-driven unrooted Goemans-Williamson growth + GPrA.

Each edge is split into two *edge parts*, one per endpoint, whose slacks share
the edge cost at ratio ``1 : (s - 1)`` (the part at the lower-id endpoint gets
``c / s``). Every vertex starts as a cluster whose slack is its prize
(compulsory vertices get a large sentinel and never deactivate). Time runs
forward; an active cluster consumes its own slack and the slack of its edge
parts at unit rate.

Events are processed in time order, edge events before cluster events on ties,
then by lowest edge-part / cluster id:

* cluster event: the cluster runs out of slack and becomes inactive;
* edge event on part ``p``: look at the opposite part ``q``. If both lie in
  the same cluster the event is dropped. Otherwise ``r`` is the remaining slack
  of ``q``; for ``r > mu`` both parts are rescheduled so they would meet at the
  next event, else the edge joins the forest and the clusters merge (slacks
  add up; an inactive side has its parts' times shifted by its idle gap).

Growth stops when at most one active cluster remains; the tree inside the last
active cluster is then pruned with GPrA.

Data layout: edge part ``2e`` belongs to the lower endpoint of edge ``e`` and
``2e + 1`` to the higher one. Each cluster owns a pairing heap of its parts'
event times. Clusters merged into a new cluster keep pointing to it through a
weighted union-find whose node weights are the time shifts, which gives the
exact event time of any part in near-constant time.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._jit import njit
from .errors import DomainError
from .graph import SolutionTree
from .heaps import (
    NIL,
    ih_push,
    ih_remove,
    ih_update,
    ph_add_all,
    ph_decrease_key,
    ph_delete_min,
    ph_insert,
    ph_link,
)
from .prune import prune_solution

__all__ = [
    "FgwStats",
    "FgwResult",
    "split_edges",
    "default_mu",
    "run_fgw",
    "fgw_growth",
    "fgw_prime",
]

DEFAULT_S = 2.0
DEFAULT_SPLIT_CAP = 64

# indices into the kernel's stats array
# rounding below this (relative to t_g) is not reported as a time regression
_TIME_TOL = 1e-12

_EDGE_EVENTS, _CLUSTER_EVENTS, _MERGES, _SPLITS, _DISCARDED, _TIME_REGRESSIONS, _FORCED = range(7)


@dataclass(frozen=True)
class FgwStats:
    edge_events: int
    cluster_events: int
    merges: int
    splits: int
    discarded: int
    time_regressions: int
    forced_merges: int
    final_time: float

    @property
    def events(self):
        return self.edge_events + self.cluster_events


@dataclass(frozen=True)
class FgwResult:
    raw: SolutionTree
    tree: SolutionTree
    stats: FgwStats
    s: float
    mu: float


def split_edges(g, s=DEFAULT_S):
    """Initial slacks ``(lower-endpoint part, higher-endpoint part)`` per edge."""
    s = float(s)
    if not s >= 1.0:
        raise DomainError("splitting ratio s must be >= 1")
    low = g.cost / s
    high = (s - 1.0) * g.cost / s
    return low, high


def default_mu(g):
    return 1e-9 * float(g.cost.max()) if g.m else 0.0


@njit
def _find(uf_parent, uf_shift, x, path):
    """Root of ``x`` and the total shift accumulated on the way (root included)."""
    r = x
    k = 0
    while uf_parent[r] != r:
        path[k] = r
        k += 1
        r = uf_parent[r]
    running = 0.0
    for i in range(k - 1, -1, -1):
        y = path[i]
        running += uf_shift[y]
        uf_shift[y] = running
        uf_parent[y] = r
    if k == 0:
        return r, uf_shift[r]
    return r, uf_shift[x] + uf_shift[r]


@njit
def _refresh_edge_queue(c, active, heap_root, val, eq_heap, eq_pos, eq_key, eq_tie, eq_size):
    root = heap_root[c]
    if active[c] and root != NIL:
        eq_key[c] = val[root]
        eq_tie[c] = root
        ih_update(eq_heap, eq_pos, eq_key, eq_tie, eq_size, c)
    else:
        ih_remove(eq_heap, eq_pos, eq_key, eq_tie, eq_size, c)


@njit
def _fgw_kernel(n, eu, ev, cost, prizes, pinned_init, s, mu, split_cap, big_b):
    m = eu.shape[0]
    parts = 2 * m
    ncl = 2 * n
    # edge parts: pairing-heap nodes plus exact time bookkeeping
    val = np.zeros(parts)
    off = np.zeros(parts)
    child = np.full(parts, NIL, dtype=np.int32)
    sib = np.full(parts, NIL, dtype=np.int32)
    prev = np.full(parts, NIL, dtype=np.int32)
    stored = np.zeros(parts)
    splits = np.zeros(m, dtype=np.int32)
    scratch = np.empty(max(parts, 1), dtype=np.int32)
    # clusters
    uf_parent = np.arange(ncl).astype(np.int32)
    uf_shift = np.zeros(ncl)
    path = np.empty(ncl, dtype=np.int32)
    active = np.zeros(ncl, dtype=np.bool_)
    pinned = np.zeros(ncl, dtype=np.bool_)
    alive = np.zeros(ncl, dtype=np.bool_)
    event_time = np.zeros(ncl)
    deact_time = np.zeros(ncl)
    heap_root = np.full(ncl, NIL, dtype=np.int32)
    # queues over clusters
    eq_heap = np.empty(ncl, dtype=np.int32)
    eq_pos = np.full(ncl, NIL, dtype=np.int32)
    eq_key = np.full(ncl, np.inf)
    eq_tie = np.zeros(ncl, dtype=np.int64)
    eq_size = np.zeros(1, dtype=np.int64)
    cq_heap = np.empty(ncl, dtype=np.int32)
    cq_pos = np.full(ncl, NIL, dtype=np.int32)
    cq_key = np.full(ncl, np.inf)
    cq_tie = np.arange(ncl).astype(np.int64)
    cq_size = np.zeros(1, dtype=np.int64)

    forest = np.empty(max(n - 1, 1), dtype=np.int32)
    n_forest = 0
    stats = np.zeros(7, dtype=np.int64)

    active_count = 0
    for v in range(n):
        alive[v] = True
        if pinned_init[v]:
            pinned[v] = True
            active[v] = True
            event_time[v] = big_b
            active_count += 1
        elif prizes[v] > 0.0:
            active[v] = True
            event_time[v] = prizes[v]
            active_count += 1
        else:
            deact_time[v] = 0.0
    for e in range(m):
        c = cost[e]
        lo_slack = c / s
        hi_slack = (s - 1.0) * c / s
        p = 2 * e
        stored[p] = lo_slack
        heap_root[eu[e]] = ph_insert(val, off, child, sib, prev, heap_root[eu[e]], p, lo_slack)
        stored[p + 1] = hi_slack
        heap_root[ev[e]] = ph_insert(val, off, child, sib, prev, heap_root[ev[e]], p + 1, hi_slack)
    for v in range(n):
        if active[v]:
            if not pinned[v]:
                cq_key[v] = event_time[v]
                ih_push(cq_heap, cq_pos, cq_key, cq_tie, cq_size, v)
            _refresh_edge_queue(v, active, heap_root, val, eq_heap, eq_pos, eq_key, eq_tie, eq_size)

    next_id = n
    t_g = 0.0
    while active_count > 1:
        te = eq_key[eq_heap[0]] if eq_size[0] > 0 else np.inf
        tc = cq_key[cq_heap[0]] if cq_size[0] > 0 else np.inf
        if eq_size[0] == 0 and cq_size[0] == 0:
            break
        if eq_size[0] > 0 and te <= tc:
            c = eq_heap[0]
            p = heap_root[c]
            if te < t_g:
                if t_g - te > _TIME_TOL * max(1.0, t_g):
                    stats[_TIME_REGRESSIONS] += 1
            else:
                t_g = te
            stats[_EDGE_EVENTS] += 1
            heap_root[c] = ph_delete_min(val, off, child, sib, prev, p, scratch)
            _refresh_edge_queue(c, active, heap_root, val, eq_heap, eq_pos, eq_key, eq_tie, eq_size)
            e = p >> 1
            q = p ^ 1
            vq = ev[e] if (q & 1) else eu[e]
            vp = eu[e] if (q & 1) else ev[e]
            c2, acc_q = _find(uf_parent, uf_shift, vq, path)
            if c2 == c:
                stats[_DISCARDED] += 1
                continue
            q_time = stored[q] + acc_q
            if active[c2]:
                r = q_time - t_g
            else:
                r = q_time - deact_time[c2]
            if r > mu and splits[e] < split_cap:
                splits[e] += 1
                stats[_SPLITS] += 1
                _, acc_p = _find(uf_parent, uf_shift, vp, path)
                if active[c2]:
                    new_t = t_g + r / 2.0
                    q_new = new_t
                else:
                    new_t = t_g + r
                    q_new = deact_time[c2]
                stored[p] = new_t - acc_p
                heap_root[c] = ph_insert(val, off, child, sib, prev, heap_root[c], p, new_t)
                stored[q] = q_new - acc_q
                heap_root[c2] = ph_decrease_key(val, off, child, sib, prev, heap_root[c2], q, q_time, q_new)
                _refresh_edge_queue(c, active, heap_root, val, eq_heap, eq_pos, eq_key, eq_tie, eq_size)
                _refresh_edge_queue(c2, active, heap_root, val, eq_heap, eq_pos, eq_key, eq_tie, eq_size)
                continue
            if r > mu:
                stats[_FORCED] += 1
            # merge c (active) and c2 through edge e
            stats[_MERGES] += 1
            forest[n_forest] = e
            n_forest += 1
            slack = event_time[c] - t_g
            if active[c2]:
                slack += event_time[c2] - t_g
                active_count -= 1
            else:
                gap = t_g - deact_time[c2]
                uf_shift[c2] += gap
                ph_add_all(val, off, heap_root[c2], gap)
            k = next_id
            next_id += 1
            for old in (c, c2):
                alive[old] = False
                uf_parent[old] = k
                ih_remove(eq_heap, eq_pos, eq_key, eq_tie, eq_size, old)
                ih_remove(cq_heap, cq_pos, cq_key, cq_tie, cq_size, old)
            alive[k] = True
            pinned[k] = pinned[c] or pinned[c2]
            heap_root[k] = ph_link(val, off, child, sib, prev, heap_root[c], heap_root[c2])
            event_time[k] = t_g + slack
            if slack > 0.0 or pinned[k]:
                active[k] = True
                if not pinned[k]:
                    cq_key[k] = event_time[k]
                    ih_push(cq_heap, cq_pos, cq_key, cq_tie, cq_size, k)
                _refresh_edge_queue(k, active, heap_root, val, eq_heap, eq_pos, eq_key, eq_tie, eq_size)
            else:
                deact_time[k] = t_g
                active_count -= 1
        else:
            c = cq_heap[0]
            ih_remove(cq_heap, cq_pos, cq_key, cq_tie, cq_size, c)
            if tc < t_g:
                if t_g - tc > _TIME_TOL * max(1.0, t_g):
                    stats[_TIME_REGRESSIONS] += 1
            else:
                t_g = tc
            stats[_CLUSTER_EVENTS] += 1
            active[c] = False
            deact_time[c] = t_g
            ih_remove(eq_heap, eq_pos, eq_key, eq_tie, eq_size, c)
            active_count -= 1

    # the last active cluster, else the one that deactivated last (lowest id on ties)
    final = -1
    for c in range(next_id):
        if alive[c] and active[c]:
            final = c
            break
    if final < 0:
        best_t = -np.inf
        for c in range(next_id):
            if alive[c] and deact_time[c] > best_t:
                best_t = deact_time[c]
                final = c
    owner = np.empty(n, dtype=np.int32)
    for v in range(n):
        owner[v], _ = _find(uf_parent, uf_shift, v, path)
    return owner, final, forest[:n_forest], stats, t_g


def run_fgw(g, s=DEFAULT_S, mu=None, split_cap=DEFAULT_SPLIT_CAP):
    """Run growth and pruning; returns an :class:`FgwResult`."""
    s = float(s)
    if not s >= 1.0:
        raise DomainError("splitting ratio s must be >= 1")
    mu = default_mu(g) if mu is None else float(mu)
    if mu < 0:
        raise DomainError("mu must be >= 0")
    if split_cap < 1:
        raise DomainError("split cap must be >= 1")
    pinned = np.zeros(g.n, dtype=np.bool_)
    pinned[g.compulsory] = True
    big_b = float(np.abs(g.cost).sum() + np.abs(g.prizes).sum())
    owner, final, forest, stats, t_final = _fgw_kernel(
        g.n, g.edge_u, g.edge_v, g.cost, g.prizes, pinned, s, mu, int(split_cap), big_b)
    verts = np.flatnonzero(owner == final)
    forest = forest[owner[g.edge_u[forest]] == final]
    raw = SolutionTree(verts, forest)
    tree = prune_solution(g, raw)
    st = FgwStats(*(int(x) for x in stats), final_time=float(t_final))
    return FgwResult(raw=raw, tree=tree, stats=st, s=s, mu=mu)


def fgw_growth(g, s=DEFAULT_S, mu=None, split_cap=DEFAULT_SPLIT_CAP):
    """Raw growth tree (the tree in the last active cluster), unpruned."""
    return run_fgw(g, s, mu, split_cap).raw


def fgw_prime(g, s=DEFAULT_S, mu=None, split_cap=DEFAULT_SPLIT_CAP):
    """FGW' solution: growth followed by GPrA."""
    return run_fgw(g, s, mu, split_cap).tree
