"""One entry point for every solver plus the report it produces."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

from .errors import DomainError
from .fgw import DEFAULT_S, default_mu, run_fgw
from .graph import net_cost
from .pipeline import P3Config, mstg, p3
from .prune import prune_solution
from .verify import gw_lower_bound

__all__ = ["ALGORITHMS", "POST_MODES", "SolveReport", "solve", "default_n"]

ALGORITHMS = ("mstg", "fgw", "fgw-raw")
POST_MODES = ("none", "gpra", "p3")
LARGE_INSTANCE = 100_000


def default_n(g):
    """TGA depth used when none is given: 1 on large instances, 2 otherwise."""
    return 1 if g.n > LARGE_INSTANCE else 2


def _nine(x):
    return None if x is None else float(f"{x:.9g}")


@dataclass
class SolveReport:
    instance_id: str
    algorithm: str
    params: dict = field(default_factory=dict)
    net_cost: float = 0.0
    lower_bound: float | None = None
    wall_time_ms: float | None = None
    peak_event_count: int | None = None
    vertices_in_tree: int = 0
    edges_in_tree: int = 0

    def as_dict(self, timing=True):
        d = asdict(self)
        d["net_cost"] = _nine(self.net_cost)
        d["lower_bound"] = _nine(self.lower_bound)
        if not timing:
            d["wall_time_ms"] = None
        return d

    def to_json(self, timing=True):
        return json.dumps(self.as_dict(timing))

    def to_text(self, timing=True):
        p = self.params
        parts = [
            f"instance={self.instance_id}",
            f"algo={self.algorithm}",
            f"post={p.get('post')}",
            f"n={p.get('n')}",
            f"s={p.get('s')}",
            f"net_cost={self.net_cost:.9g}",
            "lower_bound=" + ("NA" if self.lower_bound is None else f"{self.lower_bound:.9g}"),
            f"vertices={self.vertices_in_tree}",
            f"edges={self.edges_in_tree}",
        ]
        if self.peak_event_count is not None:
            parts.append(f"events={self.peak_event_count}")
        if timing and self.wall_time_ms is not None:
            parts.append(f"time_ms={self.wall_time_ms:.3f}")
        return " ".join(parts)


def solve(g, algorithm="fgw", *, s=DEFAULT_S, mu=None, post="p3", n=None,
          instance_id="instance", seed=None):
    """Run ``algorithm`` then the ``post`` step; returns ``(tree, report)``.

    The lower bound is taken from the FGW' tree before post-processing, so it
    stays a valid bound on the optimum whatever ``post`` does.
    """
    if algorithm not in ALGORITHMS:
        raise DomainError(f"unknown algorithm {algorithm!r}")
    if post not in POST_MODES:
        raise DomainError(f"unknown post-processing mode {post!r}")
    if n is None:
        n = default_n(g)
    if mu is None and algorithm != "mstg":
        mu = default_mu(g)
    lower = None
    events = None
    start = time.perf_counter()
    if algorithm == "mstg":
        tree = mstg(g)
    else:
        res = run_fgw(g, s=s, mu=mu)
        events = res.stats.events
        if algorithm == "fgw":
            tree = res.tree
            lower = gw_lower_bound(g, tree)
        else:
            tree = res.raw
    if post == "gpra":
        tree = prune_solution(g, tree)
    elif post == "p3":
        tree = p3(g, tree, P3Config(n=n))
    elapsed = (time.perf_counter() - start) * 1000.0
    params = {"s": None if algorithm == "mstg" else float(s),
              "mu": None if mu is None else float(mu),
              "n": int(n) if post == "p3" else None,
              "post": post, "seed": seed}
    report = SolveReport(
        instance_id=instance_id, algorithm=algorithm, params=params,
        net_cost=net_cost(g, tree, check=False), lower_bound=lower,
        wall_time_ms=elapsed, peak_event_count=events,
        vertices_in_tree=len(tree), edges_in_tree=int(tree.edges.shape[0]),
    )
    return tree, report
