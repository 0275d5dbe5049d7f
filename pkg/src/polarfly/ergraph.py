"""Erdős–Rényi polarity graphs ER_q and generic graph measurements."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import IntEnum
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import OddQRequired, PolarFlyError
from .gf import FieldSpec, field_for_order
from .projgeom import ProjectivePoint, cross_raw, dot_matrix, enumerate_raw, normalize_raw, point_array


class VertexClass(IntEnum):
    W = 0
    V1 = 1
    V2 = 2


@dataclass(eq=False)
class Graph:
    """Undirected simple graph with optional per-vertex self-loop flags.

    Self-loops never appear in ``adj``; they only matter for the 2-path
    counting convention of polarity graphs.
    """

    adj: list[np.ndarray]
    self_loop: np.ndarray = None

    def __post_init__(self):
        self.adj = [np.asarray(sorted(set(int(x) for x in a)), dtype=np.int64) for a in self.adj]
        if self.self_loop is None:
            self.self_loop = np.zeros(len(self.adj), dtype=bool)
        self.self_loop = np.asarray(self.self_loop, dtype=bool)

    @property
    def n(self) -> int:
        return len(self.adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adj], dtype=np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        i = np.searchsorted(a, v)
        return i < len(a) and a[i] == v

    def edges(self) -> list[tuple[int, int]]:
        return [(u, int(v)) for u in range(self.n) for v in self.adj[u] if u < v]

    @property
    def num_edges(self) -> int:
        return int(sum(len(a) for a in self.adj)) // 2

    def adjacency_matrix(self, dtype=np.int64) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=dtype)
        for u, a in enumerate(self.adj):
            A[u, a] = 1
        return A

    def sparse(self) -> csr_matrix:
        rows = np.repeat(np.arange(self.n), [len(a) for a in self.adj])
        cols = np.concatenate(self.adj) if self.n else np.zeros(0, dtype=np.int64)
        return csr_matrix((np.ones(len(cols)), (rows, cols)), shape=(self.n, self.n))

    def without_edges(self, removed) -> "Graph":
        drop = {(min(u, v), max(u, v)) for u, v in removed}
        adj = [[int(v) for v in a if (min(u, v), max(u, v)) not in drop] for u, a in enumerate(self.adj)]
        return Graph(adj, self.self_loop.copy())

    def with_edges(self, added) -> "Graph":
        adj = [set(a.tolist()) for a in self.adj]
        for u, v in added:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return Graph([sorted(a) for a in adj], self.self_loop.copy())


@dataclass(eq=False)
class ErGraph(Graph):
    """ER_q built from the points of PG(2, q); vertex IDs follow point order."""

    field: FieldSpec = None
    points: list = dc_field(default_factory=list)
    cls: np.ndarray = None

    def __post_init__(self):
        super().__post_init__()
        self.index = {p: i for i, p in enumerate(self.points)}
        if self.cls is None:
            self.cls = classify(self)

    @property
    def q(self) -> int:
        return self.field.q

    def point(self, v: int) -> ProjectivePoint:
        return ProjectivePoint(self.points[v], self.field)

    def vertex(self, coords) -> int:
        return self.index[normalize_raw(self.field, coords)]

    def class_members(self, c: VertexClass) -> np.ndarray:
        return np.flatnonzero(self.cls == c)

    def midpoint(self, s: int, t: int) -> int:
        """Vertex orthogonal to both ``s`` and ``t`` (their cross product)."""
        raw = cross_raw(self.field, self.points[s], self.points[t])
        return self.index[normalize_raw(self.field, raw)]


def classify(g: Graph) -> np.ndarray:
    """W for self-looped vertices, V1 for their neighbours, V2 for the rest."""
    cls = np.full(g.n, VertexClass.V2, dtype=np.int8)
    quads = np.flatnonzero(g.self_loop)
    for w in quads:
        cls[g.adj[w]] = VertexClass.V1
    cls[quads] = VertexClass.W
    return cls


def _as_field(spec) -> FieldSpec:
    return spec if isinstance(spec, FieldSpec) else field_for_order(int(spec))


def build_er(spec, chunk: int = 2048) -> ErGraph:
    """Dot-product construction: points adjacent iff orthogonal."""
    F = _as_field(spec)
    P = point_array(F)
    n = len(P)
    adj = []
    loops = np.zeros(n, dtype=bool)
    for lo in range(0, n, chunk):
        D = dot_matrix(F, P[lo:lo + chunk], P)
        for r, row in enumerate(D):
            u = lo + r
            nb = np.flatnonzero(row == 0)
            loops[u] = row[u] == 0
            adj.append(nb[nb != u])
    return ErGraph(adj, loops, field=F, points=[tuple(map(int, p)) for p in P])


def incidence_graph(spec) -> Graph:
    """The bipartite point-line incidence graph B(q).

    Vertices ``0..n-1`` are points, ``n..2n-1`` are lines; line ``n+i`` is the
    line with coordinate vector equal to point ``i``.
    """
    F = _as_field(spec)
    pts = enumerate_raw(F)
    n = len(pts)
    adj = [[] for _ in range(2 * n)]
    for li, line in enumerate(pts):
        for pi, pt in enumerate(pts):
            if _on_line(F, pt, line):
                adj[pi].append(n + li)
                adj[n + li].append(pi)
    return Graph(adj)


def _on_line(F: FieldSpec, pt, line) -> bool:
    acc = 0
    for b, x in zip(line, pt):
        acc = F.add(acc, F.mul(b, x))
    return acc == 0


def build_er_via_polarity(spec) -> ErGraph:
    """Glue every point of B(q) to its dual line."""
    F = _as_field(spec)
    B = incidence_graph(F)
    n = B.n // 2
    pts = enumerate_raw(F)
    # point i and line n+i are duals: same coordinate vector
    glue = np.concatenate([np.arange(n), np.arange(n)])
    adj = [set() for _ in range(n)]
    loops = np.zeros(n, dtype=bool)
    for u, v in B.edges():
        a, b = glue[u], glue[v]
        if a == b:
            loops[a] = True
        else:
            adj[a].add(int(b))
            adj[b].add(int(a))
    return ErGraph([sorted(s) for s in adj], loops, field=F, points=pts)


# -- distances -------------------------------------------------------------

def as_graph(g) -> Graph:
    if isinstance(g, Graph):
        return g
    if hasattr(g, "graph"):
        return g.graph
    return Graph(list(g))


def distance_matrix(g) -> np.ndarray:
    """All-pairs hop distances (float, ``inf`` when unreachable); loops ignored."""
    g = as_graph(g)
    return shortest_path(g.sparse(), method="D", unweighted=True, directed=False)


def diameter(g) -> float:
    """Exact diameter; ``math.inf`` for a disconnected graph."""
    D = distance_matrix(g)
    m = D.max() if D.size else 0
    return math.inf if np.isinf(m) else int(m)


def avg_shortest_path(g) -> Fraction | float:
    """Mean distance over ordered pairs of distinct vertices, as a Fraction."""
    D = distance_matrix(g)
    n = len(D)
    if np.isinf(D).any():
        return math.inf
    return Fraction(int(D.sum()), n * (n - 1))


# -- structural verifier ---------------------------------------------------

@dataclass
class Report:
    """Named pass/fail checks with optional details for failures."""

    title: str
    checks: dict = dc_field(default_factory=dict)
    details: dict = dc_field(default_factory=dict)

    def add(self, name: str, ok: bool, detail=None):
        self.checks[name] = bool(ok)
        if not ok and detail is not None:
            self.details[name] = detail

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def first_failure(self):
        return next((k for k, v in self.checks.items() if not v), None)

    def to_dict(self):
        return {"title": self.title, "ok": self.ok, "checks": dict(self.checks),
                "details": {k: str(v) for k, v in self.details.items()}}


def two_path_counts(g: Graph) -> np.ndarray:
    """Number of length-2 walks between vertex pairs, self-loops usable."""
    A = g.adjacency_matrix() + np.diag(g.self_loop.astype(np.int64))
    return A @ A


def verify_structure(g, q: int | None = None) -> Report:
    """Class sizes, neighbour counts per class, unique 2-paths and triangles
    through every non-quadric edge, each recorded as a separate check."""
    g = as_graph(g)
    q = q if q is not None else g.q
    if q % 2 == 0:
        raise OddQRequired(f"the structural checks hold for odd q only (got q={q})")
    cls = g.cls if isinstance(g, ErGraph) else classify(g)
    W, V1, V2 = (np.flatnonzero(cls == c) for c in VertexClass)
    rep = Report(f"vertex structure, q={q}")
    rep.add("sizes", (len(W), len(V1), len(V2)) == (q + 1, q * (q + 1) // 2, q * (q - 1) // 2),
            (len(W), len(V1), len(V2)))

    def ncount(v, members):
        return int(np.isin(g.adj[v], members).sum())

    bad = [w for w in W if ncount(w, W) != 0 or ncount(w, V1) != q or g.degree(w) != q]
    rep.add("1_quadrics", not bad, bad[:5])
    h = (q - 1) // 2
    bad = [v for v in V1 if (ncount(v, W), ncount(v, V1), ncount(v, V2)) != (2, h, h)]
    rep.add("2_v1_neighbours", not bad, bad[:5])
    h = (q + 1) // 2
    bad = [v for v in V2 if (ncount(v, V1), ncount(v, V2)) != (h, h)]
    rep.add("3_v2_neighbours", not bad, bad[:5])

    P2 = two_path_counts(g)
    off = ~np.eye(g.n, dtype=bool)
    bad_pairs = np.argwhere((P2 != 1) & off)
    rep.add("4_unique_2_path", len(bad_pairs) == 0, bad_pairs[:5].tolist())

    A = g.adjacency_matrix()
    common = A @ A
    quad = g.self_loop
    bad = []
    for u, v in g.edges():
        want = 0 if (quad[u] or quad[v]) else 1
        if common[u, v] != want:
            bad.append((u, v))
    rep.add("5_triangles", not bad, bad[:5])
    return rep


verify_property1 = verify_structure


def is_quadrangle_free(g) -> bool:
    """No 4-cycle: every pair of distinct vertices has at most one common neighbour."""
    g = as_graph(g)
    A = g.adjacency_matrix()
    C = A @ A
    np.fill_diagonal(C, 0)
    return bool((C <= 1).all())
