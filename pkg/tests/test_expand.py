import itertools

import networkx as nx
import numpy as np
import pytest

from polarfly.ergraph import VertexClass, avg_shortest_path, build_er, diameter, distance_matrix
from polarfly.errors import OddQRequired, PolarFlyError, TooManyReplications
from polarfly.expand import degree_summary, expand_nonquadric, expand_quadric, replicate
from polarfly.layout import build_layout, quadrics


def edge_set(g):
    return {tuple(sorted(e)) for e in g.edges()}


def test_replicate_definition_on_path():
    # 0-1-2 with cluster {1, 2}: replicas 3, 4 copy edge 1-2 and attach 3 to 0
    adj = [{1}, {0, 2}, {1}]
    loops = [False] * 3
    assert replicate(adj, loops, [1, 2]) == [3, 4]
    assert adj == [{1, 3}, {0, 2}, {1}, {0, 4}, {3}]


@pytest.mark.parametrize("q", [5, 7, 13])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_quadric_method_keeps_diameter_two(er_graph, q, n):
    g = er_graph(q)
    eg = expand_quadric(g, n_replications=n)
    assert eg.n == g.n + n * (q + 1)
    assert diameter(eg.graph) == 2


def test_er7_single_quadric_replication(er_graph):
    g = er_graph(7)
    eg = expand_quadric(g)
    assert eg.n == 65 and diameter(eg.graph) == 2
    deg = eg.graph.degrees()
    v1 = np.flatnonzero(g.cls == VertexClass.V1)
    assert set(deg[v1].tolist()) == {10}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_quadric_degree_growth(er_graph, n):
    g = er_graph(7)
    eg = expand_quadric(g, n_replications=n)
    deg = eg.graph.degrees()
    base = g.degrees()
    W = np.flatnonzero(g.self_loop)
    V1 = np.flatnonzero(g.cls == VertexClass.V1)
    V2 = np.flatnonzero(g.cls == VertexClass.V2)
    assert (deg[W] == base[W] + n).all()
    assert (deg[V1] == base[V1] + 2 * n).all()
    assert (deg[V2] == base[V2]).all()
    for rc in eg.added_clusters:
        assert (deg[rc.vertices] == base[rc.originals] + n).all()


def test_quadric_families_are_cliques(er_graph):
    g = er_graph(5)
    eg = expand_quadric(g, n_replications=3)
    for w in quadrics(g):
        fam = [int(w)] + [int(rc.vertices[list(rc.originals).index(w)]) for rc in eg.added_clusters]
        assert all(eg.graph.has_edge(a, b) for a, b in itertools.combinations(fam, 2))


def test_quadric_replica_links_to_other_clusters(er_graph):
    g = er_graph(7)
    eg = expand_quadric(g, n_replications=2)
    cof = eg.cluster_of()
    for rc in eg.added_clusters:
        for j in range(1, eg.layout.num_clusters):
            n = sum(1 for v in rc.vertices for u in eg.adj[v] if cof[u] == j)
            assert n == 8


@pytest.mark.parametrize("q", [5, 7])
def test_nonquadric_method(er_graph, q):
    g = er_graph(q)
    for n in range(1, q + 1):
        eg = expand_nonquadric(g, n_replications=n)
        assert eg.n == g.n + n * q
        assert diameter(eg.graph) == 3
        assert avg_shortest_path(eg.graph) < 2
        s = degree_summary(eg)
        assert s["max"] <= s["base_max"] + n + 1


def test_er5_two_replications_distance_three_pairs(er_graph):
    g = er_graph(5)
    eg = expand_nonquadric(g, n_replications=2)
    D = distance_matrix(eg.graph)
    assert D.max() == 3
    cof = eg.cluster_of()
    q = g.q
    for u, v in zip(*np.nonzero(D == 3)):
        a, b = sorted((int(cof[u]), int(cof[v])))
        assert b == a + q, (u, v, a, b)


def test_nonquadric_replica_ids_and_order(er_graph):
    g = er_graph(7)
    lay = build_layout(g)
    eg = expand_nonquadric(g, lay, 3)
    start = g.n
    for i, rc in enumerate(eg.added_clusters, 1):
        assert rc.replica_of == i and rc.index == 7 + i
        assert rc.vertices.tolist() == list(range(start, start + len(lay.clusters[i])))
        start += len(lay.clusters[i])
        assert (eg.origin[rc.vertices] == rc.originals).all()


@pytest.mark.parametrize("method", [expand_quadric, expand_nonquadric])
def test_no_rewiring(er_graph, method):
    g = er_graph(7)
    eg = method(g, n_replications=3)
    assert edge_set(g) <= edge_set(eg.graph)
    h = nx.Graph(eg.graph.edges())
    assert nx.is_connected(h)


def test_guards(er_graph):
    with pytest.raises(TooManyReplications):
        expand_nonquadric(er_graph(5), n_replications=6)
    with pytest.raises(OddQRequired):
        expand_quadric(build_er(4))
    with pytest.raises(PolarFlyError):
        expand_quadric(er_graph(5), n_replications=0)
