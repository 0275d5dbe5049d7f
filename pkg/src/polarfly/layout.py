"""Rack (cluster) layout of ER_q and the triangle structure it exposes."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import comb

import numpy as np

from .ergraph import ErGraph, Report, VertexClass
from .errors import NoAlternatePath, NotQuadric, OddQRequired, PolarFlyError

CLASS_NAMES = {VertexClass.W: "w", VertexClass.V1: "v1", VertexClass.V2: "v2"}


@dataclass
class ClusterLayout:
    starter: int
    clusters: list[np.ndarray]  # clusters[0] holds the quadrics
    centers: list[int]  # centers[0] is -1
    cluster_of: np.ndarray

    @property
    def num_clusters(self) -> int:
        return len(self.clusters)


@dataclass(frozen=True)
class TriangleRecord:
    vertices: tuple[int, int, int]
    kind: str  # "internal" or "inter"
    clusters: tuple[int, ...]
    shape: tuple[str, str, str]


def _require_odd(g: ErGraph):
    if g.q % 2 == 0:
        raise OddQRequired(f"the cluster layout is defined for odd q only (got q={g.q})")


def quadrics(g: ErGraph) -> np.ndarray:
    return np.flatnonzero(g.self_loop)


def build_layout(g: ErGraph, starter: int | None = None) -> ClusterLayout:
    """Cluster i >= 1 is a neighbour c_i of the starter quadric plus every
    non-quadric neighbour of c_i; cluster 0 holds all quadrics."""
    _require_odd(g)
    quads = quadrics(g)
    if starter is None:
        starter = int(quads[0])
    if not g.self_loop[starter]:
        raise NotQuadric(f"vertex {starter} is not a quadric")
    cluster_of = np.full(g.n, -1, dtype=np.int64)
    cluster_of[quads] = 0
    clusters = [quads]
    centers = [-1]
    for i, c in enumerate(g.adj[starter], start=1):
        members = [int(c)] + [int(u) for u in g.adj[c] if not g.self_loop[u]]
        if (cluster_of[members] != -1).any():
            raise PolarFlyError("clusters overlap; input is not a polarity graph")
        cluster_of[members] = i
        clusters.append(np.array(sorted(members), dtype=np.int64))
        centers.append(int(c))
    return ClusterLayout(int(starter), clusters, centers, cluster_of)


def verify_partition(g: ErGraph, lay: ClusterLayout) -> Report:
    q = g.q
    rep = Report(f"cluster partition, q={q}, starter={lay.starter}")
    allv = np.concatenate(lay.clusters)
    rep.add("covers_all_once", len(allv) == g.n and len(np.unique(allv)) == g.n)
    rep.add("num_clusters", lay.num_clusters == q + 1, lay.num_clusters)
    sizes = [len(c) for c in lay.clusters]
    rep.add("sizes", sizes[0] == q + 1 and all(s == q for s in sizes[1:]), sizes)
    rep.add("centers_adjacent_to_starter",
            all(g.has_edge(lay.starter, c) for c in lay.centers[1:]))
    return rep


def induced_edges(g: ErGraph, members) -> list[tuple[int, int]]:
    s = set(int(x) for x in members)
    return [(u, int(v)) for u in sorted(s) for v in g.adj[u] if u < v and int(v) in s]


def verify_intra(g: ErGraph, lay: ClusterLayout) -> Report:
    """Each non-quadric cluster is a fan of (q-1)/2 triangles on its center."""
    q = g.q
    rep = Report(f"intra-cluster structure, q={q}")
    rep.add("C0_independent", not induced_edges(g, lay.clusters[0]))
    bad = []
    for i in range(1, lay.num_clusters):
        c = lay.centers[i]
        E = induced_edges(g, lay.clusters[i])
        rest = [e for e in E if c not in e]
        spokes = [e for e in E if c in e]
        matched = Counter(v for e in rest for v in e)
        ok = (len(spokes) == q - 1 and len(rest) == (q - 1) // 2
              and len(matched) == q - 1 and set(matched.values()) <= {1})
        if not ok:
            bad.append(i)
    rep.add("fan_of_triangles", not bad, bad)
    return rep


def verify_inter(g: ErGraph, lay: ClusterLayout) -> Report:
    q = g.q
    rep = Report(f"inter-cluster structure, q={q}")
    cof, cls = lay.cluster_of, g.cls
    quads = lay.clusters[0]
    p3_1, p3_2, p3_3 = [], [], []
    for i in range(1, lay.num_clusters):
        members = lay.clusters[i]
        links = 0
        for v in members:
            nq = int((cof[g.adj[v]] == 0).sum())
            links += nq
            if cls[v] == VertexClass.V1 and nq != 2:
                p3_1.append(int(v))
        if links != q + 1:
            p3_2.append(i)
        for w in quads:
            if int((cof[g.adj[w]] == i).sum()) != 1:
                p3_3.append((int(w), i))
    rep.add("P3_1_v1_two_quadrics", not p3_1, p3_1[:5])
    rep.add("P3_2_q_plus_1_links_to_C0", not p3_2, p3_2)
    rep.add("P3_3_one_neighbour_per_quadric", not p3_3, p3_3[:5])

    p4_1, p4_2, p4_3 = [], [], []
    for i, j in itertools.permutations(range(1, lay.num_clusters), 2):
        Ci = lay.clusters[i]
        to_j = {int(v): [int(u) for u in g.adj[v] if cof[u] == j] for v in Ci}
        for v in Ci:
            if cls[v] == VertexClass.V2 and len(to_j[v]) != 1:
                p4_1.append((i, j, int(v)))
        if i < j:
            E = [(v, u) for v in Ci for u in to_j[int(v)]]
            ends = [x for e in E for x in e]
            if len(E) != q - 2 or len(set(ends)) != 2 * len(E):
                p4_2.append((i, j))
        ci, cj = lay.centers[i], lay.centers[j]
        cands = [int(v) for v in Ci if cls[v] == VertexClass.V1 and v != ci]
        silent = [v for v in cands if not to_j[v]]
        others_ok = all(len(to_j[v]) == 1 for v in cands if v not in silent)
        ok = len(silent) == 1 and others_ok
        if ok:
            shared = set(g.adj[silent[0]][g.self_loop[g.adj[silent[0]]]]) & \
                set(g.adj[cj][g.self_loop[g.adj[cj]]])
            ok = len(shared) >= 1
        if not ok:
            p4_3.append((i, j))
    rep.add("P4_1_v2_one_neighbour", not p4_1, p4_1[:5])
    rep.add("P4_2_q_minus_2_independent_edges", not p4_2, p4_2[:5])
    rep.add("P4_3_unique_silent_vertex", not p4_3, p4_3[:5])
    return rep


def unconnected_vertex(g: ErGraph, lay: ClusterLayout, i: int, j: int) -> int:
    """The non-center V1 vertex u' of C_i that has no neighbour in C_j."""
    cof = lay.cluster_of
    for v in lay.clusters[i]:
        if v != lay.centers[i] and g.cls[v] == VertexClass.V1 and not (cof[g.adj[v]] == j).any():
            return int(v)
    raise PolarFlyError(f"no unconnected vertex between clusters {i} and {j}")


def shape_of(g: ErGraph, verts) -> tuple[str, str, str]:
    return tuple(sorted(CLASS_NAMES[VertexClass(int(g.cls[v]))] for v in verts))


def enumerate_triangles(g: ErGraph, lay: ClusterLayout | None = None) -> list[TriangleRecord]:
    """Triangles found by taking, for each edge between non-quadrics, the
    cross-product midpoint as the third vertex."""
    seen = set()
    for u, v in g.edges():
        if g.self_loop[u] or g.self_loop[v]:
            continue
        w = g.midpoint(u, v)
        if not (g.has_edge(u, w) and g.has_edge(v, w)):
            raise PolarFlyError(f"edge {(u, v)} lies on no triangle")
        seen.add(tuple(sorted((u, v, w))))
    out = []
    for tri in sorted(seen):
        if lay is None:
            kind, cl = "unlabelled", ()
        else:
            cl = tuple(sorted({int(lay.cluster_of[x]) for x in tri}))
            kind = "internal" if len(cl) == 1 else "inter"
        out.append(TriangleRecord(tri, kind, cl, shape_of(g, tri)))
    return out


def verify_triangle_counts(g: ErGraph, lay: ClusterLayout, tris=None) -> Report:
    q = g.q
    tris = enumerate_triangles(g, lay) if tris is None else tris
    rep = Report(f"triangle counts, q={q}")
    inter = sum(t.kind == "inter" for t in tris)
    internal = sum(t.kind == "internal" for t in tris)
    rep.add("total", len(tris) == comb(q + 1, 3), len(tris))
    rep.add("inter", inter == comb(q, 3), inter)
    rep.add("internal", internal == comb(q, 2), internal)
    rep.add("only_internal_or_three_clusters",
            all(len(t.clusters) in (1, 3) and 0 not in t.clusters for t in tris))
    return rep


def verify_block_design(g: ErGraph, lay: ClusterLayout, tris=None) -> Report:
    """Every triple of non-quadric clusters is joined by exactly one triangle."""
    _require_odd(g)
    tris = enumerate_triangles(g, lay) if tris is None else tris
    rep = Report(f"cluster block design, q={g.q}")
    joined = Counter(t.clusters for t in tris if t.kind == "inter")
    rep.add("inter_spans_three_clusters", all(len(k) == 3 for k in joined))
    bad = [t for t in itertools.combinations(range(1, lay.num_clusters), 3) if joined.get(t, 0) != 1]
    rep.add("each_triple_once", not bad, bad[:5])
    return rep


SHAPES = [("v1", "v1", "v1"), ("v1", "v1", "v2"), ("v1", "v2", "v2"), ("v2", "v2", "v2")]


def triangle_distribution(g: ErGraph, lay: ClusterLayout, tris=None) -> dict:
    _require_odd(g)
    tris = enumerate_triangles(g, lay) if tris is None else tris
    cnt = Counter(t.shape for t in tris if t.kind == "inter")
    return {s: cnt.get(s, 0) for s in SHAPES}


def expected_triangle_distribution(q: int) -> dict:
    """Closed forms for inter-cluster triangle shapes by q mod 4."""
    if q % 4 == 1:
        vals = [q * (q - 1) * (q - 5) // 24, 0, q * (q - 1) ** 2 // 8, 0]
    elif q % 4 == 3:
        vals = [0, q * (q - 1) * (q - 3) // 8, 0, (q + 1) * q * (q - 1) // 24]
    else:
        raise OddQRequired(f"no distribution for even q={q}")
    return dict(zip(SHAPES, vals))


def intermediate_type(g: ErGraph, u: int, v: int) -> VertexClass:
    """Class of the third vertex on the triangle through edge (u, v)."""
    if g.self_loop[u] or g.self_loop[v]:
        raise NoAlternatePath("edges at a quadric lie on no triangle")
    if not g.has_edge(u, v):
        raise PolarFlyError(f"{u} and {v} are not adjacent")
    return VertexClass(int(g.cls[g.midpoint(u, v)]))


def expected_intermediate_type(q: int, cu: VertexClass, cv: VertexClass) -> VertexClass:
    same = cu == cv
    if q % 4 == 1:
        return VertexClass.V1 if same else VertexClass.V2
    if q % 4 == 3:
        return VertexClass.V1 if not same else VertexClass.V2
    raise OddQRequired(f"no table for even q={q}")


def verify_layout(g: ErGraph, starter: int | None = None) -> list[Report]:
    lay = build_layout(g, starter)
    tris = enumerate_triangles(g, lay)
    return [verify_partition(g, lay), verify_intra(g, lay), verify_inter(g, lay),
            verify_triangle_counts(g, lay, tris), verify_block_design(g, lay, tris)]
