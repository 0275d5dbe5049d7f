"""Incremental expansion of ER_q by cluster replication.

Replicating a cluster C adds a copy v' of every v in C. Edges inside C are
copied among the replicas and every edge from v to a vertex outside C is also
attached to v'. Nothing already wired is removed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ergraph import ErGraph, Graph
from .errors import OddQRequired, PolarFlyError, TooManyReplications
from .layout import ClusterLayout, build_layout, unconnected_vertex


@dataclass
class ReplicaCluster:
    replica_of: int  # index of the original cluster
    index: int  # cluster index of the replica itself
    vertices: np.ndarray  # new vertex IDs, aligned with the original's members
    originals: np.ndarray


@dataclass(eq=False)
class ExpandedGraph:
    base: ErGraph
    layout: ClusterLayout
    method: str  # "quadric" or "nonquadric"
    graph: Graph
    added_clusters: list[ReplicaCluster] = field(default_factory=list)
    origin: np.ndarray = None  # base vertex each vertex descends from

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def adj(self):
        return self.graph.adj

    def cluster_of(self) -> np.ndarray:
        out = np.empty(self.n, dtype=np.int64)
        out[: self.base.n] = self.layout.cluster_of
        for rc in self.added_clusters:
            out[rc.vertices] = rc.index
        return out


def replicate(adj: list[set], self_loop: list[bool], members) -> list[int]:
    """Apply one cluster replication in place; return the new vertex IDs
    aligned with ``members``."""
    members = [int(v) for v in members]
    start = len(adj)
    image = {v: start + k for k, v in enumerate(members)}
    for v in members:
        adj.append(set())
        self_loop.append(self_loop[v])
    for v in members:
        vr = image[v]
        for w in list(adj[v]):
            if w in image:
                adj[vr].add(image[w])
            else:
                adj[vr].add(w)
                adj[w].add(vr)
    return [image[v] for v in members]


def _setup(g: ErGraph, layout: ClusterLayout | None):
    if g.q % 2 == 0:
        raise OddQRequired(f"expansion needs odd q (got q={g.q})")
    layout = build_layout(g) if layout is None else layout
    adj = [set(int(x) for x in a) for a in g.adj]
    loops = [bool(x) for x in g.self_loop]
    return layout, adj, loops


def _finish(g, layout, method, adj, loops, added, origin):
    graph = Graph([sorted(a) for a in adj], np.array(loops, dtype=bool))
    return ExpandedGraph(g, layout, method, graph, added, np.array(origin, dtype=np.int64))


def expand_quadric(g: ErGraph, layout: ClusterLayout | None = None, n_replications: int = 1) -> ExpandedGraph:
    """Replicate the quadric cluster C0 ``n_replications`` times; each quadric
    and all of its replicas are then joined into a clique."""
    if n_replications < 1:
        raise PolarFlyError("n_replications must be >= 1")
    layout, adj, loops = _setup(g, layout)
    C0 = layout.clusters[0]
    origin = list(range(g.n))
    families = {int(w): [int(w)] for w in C0}
    added = []
    for k in range(n_replications):
        new = replicate(adj, loops, C0)
        origin += [int(w) for w in C0]
        for w, wr in zip(C0, new):
            fam = families[int(w)]
            for u in fam:
                adj[u].add(wr)
                adj[wr].add(u)
            fam.append(wr)
        added.append(ReplicaCluster(0, layout.num_clusters + k, np.array(new), C0.copy()))
    return _finish(g, layout, "quadric", adj, loops, added, origin)


def expand_nonquadric(g: ErGraph, layout: ClusterLayout | None = None, n_replications: int = 1) -> ExpandedGraph:
    """Replicate C_1, C_2, ... in order; replica of C_i gets index q+i.

    For every other cluster C_j (and replica C_{q+j} if present) the replica of
    the one vertex of C_i with no edge into C_j is wired to that cluster's center.
    """
    q = g.q
    if not 1 <= n_replications:
        raise PolarFlyError("n_replications must be >= 1")
    if n_replications > q:
        raise TooManyReplications(f"at most q={q} non-quadric replications")
    layout, adj, loops = _setup(g, layout)
    origin = list(range(g.n))
    centers = dict(enumerate(layout.centers))
    added = []
    for i in range(1, n_replications + 1):
        members = layout.clusters[i]
        new = replicate(adj, loops, members)
        origin += [int(v) for v in members]
        image = dict(zip((int(v) for v in members), new))
        centers[q + i] = image[layout.centers[i]]
        for j in range(1, q + 1):
            if j == i:
                continue
            u_prime = image[unconnected_vertex(g, layout, i, j)]
            targets = [centers[j]]
            if q + j in centers:
                targets.append(centers[q + j])
            for c in targets:
                adj[u_prime].add(c)
                adj[c].add(u_prime)
        added.append(ReplicaCluster(i, q + i, np.array(new), members.copy()))
    return _finish(g, layout, "nonquadric", adj, loops, added, origin)


def degree_summary(eg: ExpandedGraph) -> dict:
    d = eg.graph.degrees()
    return {"min": int(d.min()), "max": int(d.max()), "base_max": int(eg.base.degrees().max()),
            "histogram": {int(k): int(v) for k, v in zip(*np.unique(d, return_counts=True))}}
