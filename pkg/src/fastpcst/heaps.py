"""Array-backed priority queues used inside the numba kernels.

Two structures live here:

* an indexed binary min-heap over a fixed item universe (per-cluster
  event queues), ordered by ``(key[item], tie[item])``;
* a pairing heap over a fixed node universe with a lazy additive offset on every
  subtree, so a whole heap can be shifted in O(1) and two heaps melded in O(1).

All functions operate on plain numpy arrays so they compile under ``njit`` and
still run as ordinary Python when numba is disabled.
"""
import numpy as np

from ._jit import njit

NIL = -1


# --------------------------------------------------------------------------
# indexed binary heap
# --------------------------------------------------------------------------


def ih_new(universe, capacity=None):
    """Allocate ``(heap, pos, key, tie, size)`` for items ``0..universe-1``."""
    if capacity is None:
        capacity = universe
    heap = np.empty(max(capacity, 1), dtype=np.int32)
    pos = np.full(universe, NIL, dtype=np.int32)
    key = np.full(universe, np.inf)
    tie = np.zeros(universe, dtype=np.int64)
    size = np.zeros(1, dtype=np.int64)
    return heap, pos, key, tie, size


@njit
def ih_less(key, tie, a, b):
    ka = key[a]
    kb = key[b]
    if ka < kb:
        return True
    if ka > kb:
        return False
    return tie[a] < tie[b]


@njit
def ih_sift_up(heap, pos, key, tie, i):
    item = heap[i]
    while i > 0:
        p = (i - 1) >> 1
        other = heap[p]
        if ih_less(key, tie, item, other):
            heap[i] = other
            pos[other] = i
            i = p
        else:
            break
    heap[i] = item
    pos[item] = i


@njit
def ih_sift_down(heap, pos, key, tie, i, n):
    item = heap[i]
    while True:
        c = 2 * i + 1
        if c >= n:
            break
        if c + 1 < n and ih_less(key, tie, heap[c + 1], heap[c]):
            c += 1
        child = heap[c]
        if ih_less(key, tie, child, item):
            heap[i] = child
            pos[child] = i
            i = c
        else:
            break
    heap[i] = item
    pos[item] = i


@njit
def ih_push(heap, pos, key, tie, size, item):
    n = size[0]
    heap[n] = item
    pos[item] = n
    size[0] = n + 1
    ih_sift_up(heap, pos, key, tie, n)


@njit
def ih_remove(heap, pos, key, tie, size, item):
    i = pos[item]
    if i < 0:
        return
    n = size[0] - 1
    size[0] = n
    pos[item] = NIL
    if i == n:
        return
    last = heap[n]
    heap[i] = last
    pos[last] = i
    ih_sift_up(heap, pos, key, tie, i)
    ih_sift_down(heap, pos, key, tie, pos[last], n)


@njit
def ih_pop(heap, pos, key, tie, size):
    top = heap[0]
    ih_remove(heap, pos, key, tie, size, top)
    return top


@njit
def ih_update(heap, pos, key, tie, size, item):
    """Restore heap order after ``key[item]``/``tie[item]`` changed (push if absent)."""
    i = pos[item]
    if i < 0:
        ih_push(heap, pos, key, tie, size, item)
        return
    ih_sift_up(heap, pos, key, tie, i)
    ih_sift_down(heap, pos, key, tie, pos[item], size[0])


# --------------------------------------------------------------------------
# pairing heap with lazy offsets
#
# actual key of a node = val[node] + sum(off[a] for every strict ancestor a).
# off[node] is pending for the node's descendants only; a root's val is exact.
# prev[node] is the parent for a leftmost child, otherwise the left sibling.
# --------------------------------------------------------------------------


def ph_new(nodes):
    """Allocate ``(val, off, child, sib, prev)`` for ``nodes`` heap nodes."""
    val = np.zeros(nodes)
    off = np.zeros(nodes)
    child = np.full(nodes, NIL, dtype=np.int32)
    sib = np.full(nodes, NIL, dtype=np.int32)
    prev = np.full(nodes, NIL, dtype=np.int32)
    return val, off, child, sib, prev


@njit
def ph_link(val, off, child, sib, prev, a, b):
    """Meld two roots; the smaller ``(val, id)`` stays on top."""
    if a == NIL:
        return b
    if b == NIL:
        return a
    if val[b] < val[a] or (val[b] == val[a] and b < a):
        a, b = b, a
    shift = off[a]
    val[b] -= shift
    off[b] -= shift
    first = child[a]
    sib[b] = first
    if first != NIL:
        prev[first] = b
    prev[b] = a
    child[a] = b
    return a


@njit
def ph_insert(val, off, child, sib, prev, root, node, key):
    val[node] = key
    off[node] = 0.0
    child[node] = NIL
    sib[node] = NIL
    prev[node] = NIL
    return ph_link(val, off, child, sib, prev, root, node)


@njit
def ph_add_all(val, off, root, delta):
    """Add ``delta`` to every key in the heap rooted at ``root``."""
    if root != NIL:
        val[root] += delta
        off[root] += delta


@njit
def ph_delete_min(val, off, child, sib, prev, root, scratch):
    """Remove ``root`` and return the new root. ``scratch`` is an int32 work array."""
    shift = off[root]
    k = 0
    c = child[root]
    while c != NIL:
        nxt = sib[c]
        val[c] += shift
        off[c] += shift
        sib[c] = NIL
        prev[c] = NIL
        scratch[k] = c
        k += 1
        c = nxt
    child[root] = NIL
    off[root] = 0.0
    if k == 0:
        return NIL
    # left-to-right pairing
    m = 0
    i = 0
    while i + 1 < k:
        scratch[m] = ph_link(val, off, child, sib, prev, scratch[i], scratch[i + 1])
        m += 1
        i += 2
    if i < k:
        scratch[m] = scratch[i]
        m += 1
    # right-to-left accumulation
    res = scratch[m - 1]
    j = m - 2
    while j >= 0:
        res = ph_link(val, off, child, sib, prev, scratch[j], res)
        j -= 1
    return res


@njit
def ph_decrease_key(val, off, child, sib, prev, root, node, old_key, new_key):
    """Lower the actual key of ``node`` from ``old_key`` to ``new_key``; return the root."""
    if node == root:
        val[node] = new_key
        return root
    ancestors = old_key - val[node]
    # detach node (with its subtree) from its parent/sibling chain
    p = prev[node]
    if child[p] == node:
        child[p] = sib[node]
    else:
        sib[p] = sib[node]
    if sib[node] != NIL:
        prev[sib[node]] = p
    sib[node] = NIL
    prev[node] = NIL
    val[node] = new_key
    off[node] += ancestors
    return ph_link(val, off, child, sib, prev, root, node)
