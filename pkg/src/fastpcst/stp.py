"""DIMACS STP (prize-collecting dialect) reader/writer and the random instance generator.

Files use 1-based vertex ids; in memory vertices are 0-based.

Instance layout::

    33D32945 STP File, STP Format Version 1.0
    SECTION Comment ... END            (optional)
    SECTION Graph
    Nodes <n>
    Edges <m>
    E <u> <v> <cost>                   (m lines)
    END
    SECTION Terminals                  (optional)
    Terminals <k>
    TP <v> <prize>  |  T <v>           (k lines; T marks a compulsory vertex)
    END
    EOF

Solution layout::

    NETCOST <value>
    VERTICES <k>
    V <id>                             (k lines)
    EDGES <m>
    E <u> <v>                          (m lines)
    LOWERBOUND <value|NA>
    ALGO <name>
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from ._jit import njit
from .errors import DomainError, ParseError, StructuralError
from .graph import Graph, SolutionTree, check_tree, net_cost

__all__ = [
    "MAGIC",
    "parse_stp",
    "read_stp",
    "write_graph",
    "write_solution",
    "parse_solution",
    "format_number",
    "GeneratorParams",
    "generate_instance",
    "generator_comment",
]

MAGIC = "33D32945 STP File, STP Format Version 1.0"
PRNG_NAME = "numpy PCG64"


def format_number(x):
    """Shortest decimal string that reads back as the same float."""
    s = repr(float(x))
    if s.endswith(".0"):
        s = s[:-2]
    return s


def _decode(data):
    if isinstance(data, (bytes, bytearray, memoryview)):
        return bytes(data).decode("ascii")
    return data


def _int(tok, lineno, source, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"bad {what} {tok!r}", lineno, source) from None


def _float(tok, lineno, source, what):
    try:
        x = float(tok)
    except ValueError:
        raise ParseError(f"bad {what} {tok!r}", lineno, source) from None
    if not math.isfinite(x):
        raise ParseError(f"non-finite {what} {tok!r}", lineno, source)
    return x


def parse_stp(data, source=None):
    """Parse an instance (``str`` or ``bytes``) into a :class:`Graph`."""
    lines = _decode(data).splitlines()
    pos = 0
    total = len(lines)

    def next_line():
        nonlocal pos
        while pos < total:
            raw = lines[pos]
            pos += 1
            text = raw.split("#", 1)[0].strip()
            if text:
                return pos, text
        return None, None

    lineno, text = next_line()
    if text is None or not text.startswith("33D32945"):
        raise ParseError("missing STP header line", lineno or 1, source)

    n = None
    eu, ev, ec = [], [], []
    declared_edges = None
    prizes = {}
    compulsory = []
    saw_graph = False
    saw_eof = False
    while True:
        lineno, text = next_line()
        if text is None:
            break
        tok = text.split()
        if tok[0] == "EOF":
            saw_eof = True
            break
        if tok[0] != "SECTION" or len(tok) != 2:
            raise ParseError(f"expected 'SECTION <name>', got {text!r}", lineno, source)
        name = tok[1]
        if name == "Graph":
            if saw_graph:
                raise ParseError("duplicate Graph section", lineno, source)
            saw_graph = True
            while True:
                lineno, text = next_line()
                if text is None:
                    raise ParseError("unterminated Graph section", total, source)
                tok = text.split()
                key = tok[0]
                if key == "END":
                    break
                if key == "Nodes" and len(tok) == 2:
                    n = _int(tok[1], lineno, source, "node count")
                    if n < 1:
                        raise ParseError("Nodes must be >= 1", lineno, source)
                elif key == "Edges" and len(tok) == 2:
                    declared_edges = _int(tok[1], lineno, source, "edge count")
                elif key == "E" and len(tok) == 4:
                    if n is None:
                        raise ParseError("E line before Nodes", lineno, source)
                    a = _int(tok[1], lineno, source, "vertex")
                    b = _int(tok[2], lineno, source, "vertex")
                    c = _float(tok[3], lineno, source, "cost")
                    if not (1 <= a <= n and 1 <= b <= n):
                        raise ParseError(f"vertex out of range in {text!r}", lineno, source)
                    if a == b:
                        raise ParseError(f"self-loop {text!r}", lineno, source)
                    if c <= 0:
                        raise DomainError(f"{source or '<input>'}:{lineno}: edge cost must be > 0, got {tok[3]}")
                    eu.append(a - 1)
                    ev.append(b - 1)
                    ec.append(c)
                else:
                    raise ParseError(f"unexpected line in Graph section: {text!r}", lineno, source)
            if n is None:
                raise ParseError("Graph section without Nodes", lineno, source)
            if declared_edges is not None and declared_edges != len(eu):
                raise ParseError(f"Edges {declared_edges} declared but {len(eu)} E lines found",
                                 lineno, source)
        elif name == "Terminals":
            if n is None:
                raise ParseError("Terminals section before Graph section", lineno, source)
            declared = None
            seen = 0
            while True:
                lineno, text = next_line()
                if text is None:
                    raise ParseError("unterminated Terminals section", total, source)
                tok = text.split()
                key = tok[0]
                if key == "END":
                    break
                if key == "Terminals" and len(tok) == 2:
                    declared = _int(tok[1], lineno, source, "terminal count")
                elif key == "TP" and len(tok) == 3:
                    v = _int(tok[1], lineno, source, "vertex")
                    if not 1 <= v <= n:
                        raise ParseError(f"vertex out of range in {text!r}", lineno, source)
                    if v in prizes:
                        raise ParseError(f"duplicate TP for vertex {v}", lineno, source)
                    p = _float(tok[2], lineno, source, "prize")
                    if p < 0:
                        raise DomainError(f"{source or '<input>'}:{lineno}: prize must be >= 0, got {tok[2]}")
                    prizes[v] = p
                    seen += 1
                elif key == "T" and len(tok) == 2:
                    v = _int(tok[1], lineno, source, "vertex")
                    if not 1 <= v <= n:
                        raise ParseError(f"vertex out of range in {text!r}", lineno, source)
                    compulsory.append(v - 1)
                    seen += 1
                else:
                    raise ParseError(f"unexpected line in Terminals section: {text!r}", lineno, source)
            if declared is not None and declared != seen:
                raise ParseError(f"Terminals {declared} declared but {seen} terminal lines found",
                                 lineno, source)
        else:
            # other sections (Comment, Coordinates, ...) carry nothing we use
            while True:
                lineno, text = next_line()
                if text is None:
                    raise ParseError(f"unterminated {name} section", total, source)
                if text.split()[0] == "END":
                    break
    if not saw_graph:
        raise ParseError("no Graph section", total, source)
    if not saw_eof:
        raise ParseError("missing EOF", total, source)
    w = np.zeros(n)
    if prizes:
        idx = np.fromiter(prizes.keys(), dtype=np.int64, count=len(prizes)) - 1
        w[idx] = np.fromiter(prizes.values(), dtype=np.float64, count=len(prizes))
    return Graph(n, np.array(eu, dtype=np.int64), np.array(ev, dtype=np.int64),
                 np.array(ec, dtype=np.float64), w, compulsory)


def read_stp(path):
    with open(path, "rb") as fh:
        return parse_stp(fh.read(), source=str(path))


def write_graph(g, comment=None):
    """Serialise ``g``; ``comment`` is an optional list of ``(key, value)`` pairs."""
    out = [MAGIC, ""]
    if comment:
        out.append("SECTION Comment")
        for key, value in comment:
            out.append(f'{key} "{value}"')
        out.extend(["END", ""])
    out.append("SECTION Graph")
    out.append(f"Nodes {g.n}")
    out.append(f"Edges {g.m}")
    eu = (g.edge_u + 1).tolist()
    ev = (g.edge_v + 1).tolist()
    out.extend(f"E {a} {b} {format_number(c)}" for a, b, c in zip(eu, ev, g.cost.tolist()))
    out.extend(["END", ""])
    prized = np.flatnonzero(g.prizes != 0)
    if prized.size or g.compulsory.size:
        out.append("SECTION Terminals")
        out.append(f"Terminals {prized.size + g.compulsory.size}")
        out.extend(f"T {v + 1}" for v in g.compulsory.tolist())
        out.extend(f"TP {v + 1} {format_number(p)}"
                   for v, p in zip(prized.tolist(), g.prizes[prized].tolist()))
        out.extend(["END", ""])
    out.append("EOF")
    return "\n".join(out) + "\n"


def write_solution(g, t, report=None, *, lower_bound=None, algorithm=None):
    """Serialise a solution; ``report`` (a ``SolveReport``) supplies the bound and name."""
    check_tree(g, t)
    if report is not None:
        lower_bound = report.lower_bound
        algorithm = report.algorithm
    out = [f"NETCOST {net_cost(g, t, check=False):.9g}", f"VERTICES {len(t)}"]
    out.extend(f"V {v + 1}" for v in t.vertices.tolist())
    out.append(f"EDGES {t.edges.shape[0]}")
    out.extend(f"E {a + 1} {b + 1}" for a, b in zip(g.edge_u[t.edges].tolist(), g.edge_v[t.edges].tolist()))
    out.append("LOWERBOUND " + ("NA" if lower_bound is None else f"{lower_bound:.9g}"))
    out.append(f"ALGO {algorithm or 'unknown'}")
    return "\n".join(out) + "\n"


def parse_solution(data, g, source=None):
    """Parse a solution for graph ``g``.

    Returns ``(tree, info)`` where ``info`` holds ``netcost``, ``lower_bound``
    (``None`` for NA) and ``algorithm`` as written in the file.
    """
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(_decode(data).splitlines()) if ln.strip()]
    verts, edges = [], []
    info = {"netcost": None, "lower_bound": None, "algorithm": None}
    n_vert = n_edge = None
    for lineno, text in lines:
        tok = text.split()
        key = tok[0]
        if key == "NETCOST" and len(tok) == 2:
            info["netcost"] = _float(tok[1], lineno, source, "net cost")
        elif key == "VERTICES" and len(tok) == 2:
            n_vert = _int(tok[1], lineno, source, "vertex count")
        elif key == "V" and len(tok) == 2:
            v = _int(tok[1], lineno, source, "vertex")
            if not 1 <= v <= g.n:
                raise ParseError(f"vertex {v} out of range", lineno, source)
            verts.append(v - 1)
        elif key == "EDGES" and len(tok) == 2:
            n_edge = _int(tok[1], lineno, source, "edge count")
        elif key == "E" and len(tok) == 3:
            a = _int(tok[1], lineno, source, "vertex")
            b = _int(tok[2], lineno, source, "vertex")
            e = g.edge_index(a - 1, b - 1) if 1 <= a <= g.n and 1 <= b <= g.n else -1
            if e < 0:
                raise ParseError(f"no edge {a}-{b} in the instance", lineno, source)
            edges.append(e)
        elif key == "LOWERBOUND" and len(tok) == 2:
            info["lower_bound"] = None if tok[1] == "NA" else _float(tok[1], lineno, source, "lower bound")
        elif key == "ALGO" and len(tok) >= 2:
            info["algorithm"] = " ".join(tok[1:])
        else:
            raise ParseError(f"unexpected line {text!r}", lineno, source)
    if n_vert is not None and n_vert != len(verts):
        raise ParseError(f"VERTICES {n_vert} declared but {len(verts)} V lines found", None, source)
    if n_edge is not None and n_edge != len(edges):
        raise ParseError(f"EDGES {n_edge} declared but {len(edges)} E lines found", None, source)
    if not verts:
        raise StructuralError("solution has no vertices")
    return SolutionTree(verts, edges), info


# --------------------------------------------------------------------------
# generator
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorParams:
    vertex_count: int
    edge_count: int
    prized_fraction: float = 1.0
    prize_range: tuple = (1.0, 100.0)
    cost_range: tuple = (1.0, 100.0)
    seed: int = 0

    def __post_init__(self):
        n, m = self.vertex_count, self.edge_count
        if n < 1:
            raise DomainError("vertex_count must be >= 1")
        if m < n - 1:
            raise DomainError("edge_count must be >= vertex_count - 1")
        if m > n * (n - 1) // 2:
            raise DomainError("edge_count exceeds the number of vertex pairs")
        if not 0 < self.prized_fraction <= 1:
            raise DomainError("prized_fraction must be in (0, 1]")
        plo, phi = self.prize_range
        if not (plo >= 0 and phi > plo):
            raise DomainError("prize_range must satisfy 0 <= low < high")
        clo, chi = self.cost_range
        if not (clo > 0 and chi > clo):
            raise DomainError("cost_range must satisfy 0 < low < high")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")


@njit
def _prufer_tree(n, seq):
    """Decode a Prufer sequence into the ``n - 1`` edges of a labelled tree."""
    degree = np.ones(n, dtype=np.int64)
    for x in seq:
        degree[x] += 1
    eu = np.empty(n - 1, dtype=np.int64)
    ev = np.empty(n - 1, dtype=np.int64)
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    k = 0
    for x in seq:
        eu[k] = leaf
        ev[k] = x
        k += 1
        degree[leaf] -= 1
        degree[x] -= 1
        if degree[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    eu[k] = leaf
    ev[k] = n - 1
    return eu, ev


def _extra_pairs(rng, n, need, taken):
    """``need`` distinct unordered pairs (as ``lo*n+hi`` keys) not in sorted ``taken``."""
    if need == 0:
        return np.empty(0, dtype=np.int64)
    total = n * (n - 1) // 2
    if 2 * need > total - taken.shape[0]:
        lo, hi = np.triu_indices(n, k=1)
        keys = lo.astype(np.int64) * n + hi
        keys = keys[~np.isin(keys, taken)]
        return keys[np.sort(rng.choice(keys.shape[0], need, replace=False))]
    chosen = []
    have = 0
    while have < need:
        k = int((need - have) * 1.05) + 16
        a = rng.integers(0, n, k)
        b = rng.integers(0, n, k)
        ok = a != b
        lo = np.minimum(a[ok], b[ok])
        hi = np.maximum(a[ok], b[ok])
        keys = lo * n + hi
        _, first = np.unique(keys, return_index=True)
        keys = keys[np.sort(first)]
        keys = keys[~np.isin(keys, taken)]
        keys = keys[: need - have]
        chosen.append(keys)
        have += keys.shape[0]
        taken = np.union1d(taken, keys)
    return np.concatenate(chosen)


def generate_instance(p):
    """Random connected instance: uniform labelled spanning tree plus random extra edges.

    The spanning tree comes from a uniformly random Prufer sequence; the
    remaining ``edge_count - (vertex_count - 1)`` edges are distinct uniformly
    random non-tree pairs. Costs are uniform in ``cost_range``; a random
    ``ceil(prized_fraction * n)``-subset of vertices gets prizes uniform in
    ``prize_range``. Everything is drawn from one PCG64 stream seeded with
    ``p.seed``.
    """
    n = p.vertex_count
    rng = np.random.Generator(np.random.PCG64(p.seed))
    if n >= 3:
        tu, tv = _prufer_tree(n, rng.integers(0, n, n - 2))
    elif n == 2:
        tu, tv = np.array([0], dtype=np.int64), np.array([1], dtype=np.int64)
    else:
        tu = tv = np.empty(0, dtype=np.int64)
    lo = np.minimum(tu, tv)
    hi = np.maximum(tu, tv)
    tree_keys = np.sort(lo * n + hi)
    extra = _extra_pairs(rng, n, p.edge_count - (n - 1), tree_keys)
    u = np.concatenate([lo, extra // n])
    v = np.concatenate([hi, extra % n])
    cost = rng.uniform(p.cost_range[0], p.cost_range[1], u.shape[0])
    k = math.ceil(p.prized_fraction * n)
    prized = rng.choice(n, k, replace=False) if k < n else np.arange(n)
    prizes = np.zeros(n)
    prizes[prized] = rng.uniform(p.prize_range[0], p.prize_range[1], k)
    return Graph(n, u, v, cost, prizes)


def generator_comment(p):
    """Comment-section pairs that make a generated file self-describing."""
    return [
        ("Name", f"gen-n{p.vertex_count}-m{p.edge_count}-seed{p.seed}"),
        ("Creator", f"fastpcst {__version__} generate_instance"),
        ("Problem", "Prize-Collecting Steiner Problem in Graphs"),
        ("Remark", f"PRNG {PRNG_NAME} seed {p.seed}; uniform Prufer spanning tree plus uniform extra pairs"),
        ("Remark", f"prized_fraction {format_number(p.prized_fraction)} "
                   f"prize_range {format_number(p.prize_range[0])}:{format_number(p.prize_range[1])} "
                   f"cost_range {format_number(p.cost_range[0])}:{format_number(p.cost_range[1])}"),
    ]
