"""Routes on ER_q: minimal, Valiant, Compact Valiant, UGAL decisions, and
path-diversity counts."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ergraph import ErGraph, Graph, VertexClass, as_graph, distance_matrix
from .errors import AdjacentEndpoints, LengthOutOfRange, PolarFlyError, SameVertex

UGAL_PF_THRESHOLD = 2 / 3


@dataclass(frozen=True)
class Route:
    hops: tuple[int, ...]
    policy: str = "min"

    def __len__(self):
        return len(self.hops) - 1

    @property
    def length(self) -> int:
        return len(self.hops) - 1


class ShortestPaths:
    """BFS distance and next-hop tables for graphs without algebraic routing.

    Ties are broken toward the lowest-ID neighbour, so routes are deterministic.
    """

    def __init__(self, g):
        g = as_graph(g)
        self.graph = g
        self.dist = distance_matrix(g)
        n = g.n
        self.next_hop = np.full((n, n), -1, dtype=np.int64)
        for s in range(n):
            nb = g.adj[s]
            if len(nb) == 0:
                continue
            # for each target, the first neighbour (lowest ID) one step closer
            closer = self.dist[nb, :] == (self.dist[s, :] - 1)[None, :]
            has = closer.any(axis=0)
            first = np.argmax(closer, axis=0)
            self.next_hop[s, has] = nb[first[has]]

    def path(self, s: int, t: int) -> tuple[int, ...]:
        if not np.isfinite(self.dist[s, t]):
            raise PolarFlyError(f"{t} is unreachable from {s}")
        hops = [s]
        while hops[-1] != t:
            hops.append(int(self.next_hop[hops[-1], t]))
        return tuple(hops)


@lru_cache(maxsize=8)
def _tables(g) -> ShortestPaths:
    return ShortestPaths(g)


def shortest_paths(g) -> ShortestPaths:
    return _tables(as_graph(g))


def _check_pair(s, t):
    if s == t:
        raise SameVertex(f"source and destination are both {s}")


def min_path(g, s: int, t: int) -> tuple[int, ...]:
    _check_pair(s, t)
    if type(g) is ErGraph:
        if g.has_edge(s, t):
            return (s, t)
        return (s, g.midpoint(s, t), t)
    return shortest_paths(g).path(s, t)


def min_route(g, s: int, t: int) -> Route:
    """Direct hop when adjacent, otherwise through the cross-product midpoint.

    Graphs other than a pristine ER_q fall back to BFS shortest paths.
    """
    return Route(min_path(g, s, t), "min")


def simplify(hops) -> tuple[int, ...]:
    """Cut out any loop so that no vertex repeats."""
    out = []
    pos = {}
    for v in hops:
        if v in pos:
            for u in out[pos[v] + 1:]:
                del pos[u]
            del out[pos[v] + 1:]
        else:
            pos[v] = len(out)
            out.append(v)
    return tuple(out)


def valiant_route(g, s: int, t: int, rng: np.random.Generator) -> Route:
    """Minimal route to a uniformly random intermediate r not in {s, t}, then on to t."""
    _check_pair(s, t)
    n = as_graph(g).n
    r = int(rng.integers(n - 2))
    for x in sorted((s, t)):
        if r >= x:
            r += 1
    hops = min_path(g, s, r) + min_path(g, r, t)[1:]
    return Route(simplify(hops), "valiant")


def compact_candidates(g, s: int, t: int) -> list[int]:
    """Neighbours of s whose minimal route to t does not come back through s."""
    gg = as_graph(g)
    return [int(r) for r in gg.adj[s] if r != t and s not in min_path(g, int(r), t)]


def compact_valiant_route(g, s: int, t: int, rng: np.random.Generator) -> Route:
    """Valiant with the intermediate drawn from the neighbours of s."""
    _check_pair(s, t)
    gg = as_graph(g)
    if gg.has_edge(s, t):
        raise AdjacentEndpoints(f"{s} and {t} are adjacent")
    cands = compact_candidates(g, s, t)
    if not cands:
        raise PolarFlyError(f"no Compact Valiant intermediate for {(s, t)}")
    r = cands[int(rng.integers(len(cands)))]
    return Route((s,) + min_path(g, r, t), "compact_valiant")


def ugal_decide(min_queue: float, min_len: int, val_queue: float, val_len: int,
                variant: str = "ugal", buffer_capacity: float = 1.0) -> str:
    """Return "min" or "valiant".

    ``ugal`` compares queue x hops products, ties go minimal. ``ugal_pf`` leaves
    the minimal path only when its buffer is more than 2/3 full.
    """
    if variant == "ugal":
        return "min" if min_queue * min_len <= val_queue * val_len else "valiant"
    if variant == "ugal_pf":
        return "valiant" if min_queue > UGAL_PF_THRESHOLD * buffer_capacity else "min"
    raise PolarFlyError(f"unknown UGAL variant {variant!r}")


# -- path diversity --------------------------------------------------------

def count_paths(g, s: int, t: int, length: int) -> int:
    """Number of simple paths from s to t with exactly ``length`` edges (DFS)."""
    if not 1 <= length <= 4:
        raise LengthOutOfRange(f"length must be in 1..4, got {length}")
    _check_pair(s, t)
    gg = as_graph(g)
    adj = [set(a.tolist()) for a in gg.adj]

    def walk(v, depth, seen):
        if depth == length - 1:
            return 1 if t in adj[v] else 0
        total = 0
        for u in adj[v]:
            if u != t and u not in seen:
                seen.add(u)
                total += walk(u, depth + 1, seen)
                seen.discard(u)
        return total

    return walk(s, 0, {s})


def path_diversity_case(g: ErGraph, v: int, w: int, length: int) -> tuple[str, int]:
    """(condition label, closed-form path count) for a vertex pair of ER_q."""
    if not 1 <= length <= 4:
        raise LengthOutOfRange(f"length must be in 1..4, got {length}")
    _check_pair(v, w)
    q = g.q
    adj = g.has_edge(v, w)
    cv, cw = VertexClass(int(g.cls[v])), VertexClass(int(g.cls[w]))
    W, V1, V2 = VertexClass.W, VertexClass.V1, VertexClass.V2
    nq = (cv == W) + (cw == W)
    x = None if adj else g.midpoint(v, w)
    xq = x is not None and bool(g.self_loop[x])
    if length == 1:
        return ("adjacent", 1) if adj else ("not adjacent", 0)
    if length == 2:
        if adj and nq:
            return "adjacent, one quadric", 0
        return "all other cases", 1
    if length == 3:
        if adj:
            return "adjacent", 0
        return ("not adjacent, x quadric", q) if xq else ("not adjacent, x not quadric", q - 1)
    if adj:
        return ("adjacent, one quadric", q * q - q) if nq else ("adjacent, neither quadric", (q - 1) ** 2)
    pair = {cv, cw}
    if nq == 2:
        return "not adjacent, both quadric", q * q - q
    if pair == {V1}:
        return ("not adjacent, both V1, x quadric", q * q - 2) if xq else \
            ("not adjacent, both V1, x not quadric", q * q - 4)
    if pair == {W, V1}:
        return "not adjacent, quadric and V1", q * q - 3
    if pair == {V1, V2}:
        return "not adjacent, V1 and V2", q * q - 2
    if pair == {W, V2}:
        return "not adjacent, quadric and V2", q * q - 1
    return "not adjacent, both V2", q * q
