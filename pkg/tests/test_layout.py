import itertools
from math import comb

import networkx as nx
import numpy as np
import pytest

from polarfly.ergraph import VertexClass
from polarfly.errors import NoAlternatePath, NotQuadric, OddQRequired
from polarfly.layout import (build_layout, enumerate_triangles, expected_intermediate_type,
                             expected_triangle_distribution, induced_edges, intermediate_type, quadrics,
                             triangle_distribution, unconnected_vertex, verify_block_design, verify_inter,
                             verify_intra, verify_layout, verify_partition, verify_triangle_counts)
from polarfly.ergraph import build_er


def test_er7_cluster_sizes(er_graph):
    g = er_graph(7)
    for s in quadrics(g):
        lay = build_layout(g, int(s))
        assert sorted(len(c) for c in lay.clusters) == [7] * 7 + [8]


def test_er3_partition(er_graph):
    lay = build_layout(er_graph(3))
    assert lay.num_clusters == 4
    assert verify_partition(er_graph(3), lay).ok


def test_guards(er_graph):
    g = er_graph(7)
    with pytest.raises(NotQuadric):
        build_layout(g, int(np.flatnonzero(~g.self_loop)[0]))
    with pytest.raises(OddQRequired):
        build_layout(build_er(4))


def test_clusters_follow_center_order(er_graph):
    g = er_graph(7)
    lay = build_layout(g)
    assert lay.centers[1:] == sorted(lay.centers[1:])


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_partition_every_starter(er_graph, q):
    g = er_graph(q)
    for s in quadrics(g):
        assert verify_partition(g, build_layout(g, int(s))).ok


@pytest.mark.parametrize("q", [5, 7, 9, 11])
def test_intra_and_inter(er_graph, q):
    g = er_graph(q)
    for s in quadrics(g)[:3]:
        lay = build_layout(g, int(s))
        assert verify_intra(g, lay).ok
        rep = verify_inter(g, lay)
        assert rep.ok, rep.details


def test_er7_edge_counts_between_clusters(er_graph):
    g = er_graph(7)
    lay = build_layout(g)
    cof = lay.cluster_of
    for i, j in itertools.combinations(range(lay.num_clusters), 2):
        n = sum(1 for u, v in g.edges() if {cof[u], cof[v]} == {i, j})
        assert n == (8 if i == 0 else 5)
    assert not induced_edges(g, lay.clusters[0])


def test_unconnected_vertex_brute_force_er5(er_graph):
    g = er_graph(5)
    lay = build_layout(g)
    cof = lay.cluster_of
    for i, j in itertools.permutations(range(1, lay.num_clusters), 2):
        silent = [int(v) for v in lay.clusters[i]
                  if v != lay.centers[i] and not any(cof[u] == j for u in g.adj[v])]
        assert silent == [unconnected_vertex(g, lay, i, j)]
        u = silent[0]
        assert g.cls[u] == VertexClass.V1
        shared = set(g.adj[u]) & set(g.adj[lay.centers[j]])
        assert any(g.self_loop[w] for w in shared)


def test_racks_isomorphic(er_graph):
    g = er_graph(11)
    lay = build_layout(g)
    racks = []
    for c in lay.clusters[1:]:
        h = nx.Graph()
        h.add_nodes_from(c.tolist())
        h.add_edges_from(induced_edges(g, c))
        racks.append(h)
    assert all(nx.is_isomorphic(racks[0], h) for h in racks[1:])
    assert nx.is_isomorphic(racks[0], nx.windmill_graph(5, 3))


@pytest.mark.parametrize("q,total,inter,internal", [(3, 4, 1, 3), (5, 20, 10, 10), (7, 56, 35, 21),
                                                    (11, 220, 165, 55), (13, 364, 286, 78)])
def test_triangle_counts(er_graph, q, total, inter, internal):
    g = er_graph(q)
    lay = build_layout(g)
    tris = enumerate_triangles(g, lay)
    assert (len(tris), sum(t.kind == "inter" for t in tris), sum(t.kind == "internal" for t in tris)) \
        == (total, inter, internal)
    assert verify_triangle_counts(g, lay, tris).ok
    assert verify_block_design(g, lay, tris).ok


def test_triangles_match_networkx(er_graph):
    g = er_graph(7)
    h = nx.Graph(g.edges())
    cliques = sorted(tuple(sorted(c)) for c in nx.enumerate_all_cliques(h) if len(c) == 3)
    assert cliques == [t.vertices for t in enumerate_triangles(g)]


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_block_design_every_starter(er_graph, q):
    g = er_graph(q)
    for s in quadrics(g):
        assert verify_block_design(g, build_layout(g, int(s))).ok


def test_triangle_set_independent_of_starter(er_graph):
    g = er_graph(7)
    sets = {tuple(t.vertices for t in enumerate_triangles(g, build_layout(g, int(s)))) for s in quadrics(g)}
    assert len(sets) == 1


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13, 17])
def test_shape_distribution(er_graph, q):
    g = er_graph(q)
    dist = triangle_distribution(g, build_layout(g))
    assert dist == expected_triangle_distribution(q)
    assert sum(dist.values()) == comb(q, 3)


def test_shape_distribution_examples():
    assert expected_triangle_distribution(5)[("v1", "v2", "v2")] == 10
    assert expected_triangle_distribution(7)[("v1", "v1", "v2")] == 21
    assert expected_triangle_distribution(7)[("v2", "v2", "v2")] == 14
    d13 = expected_triangle_distribution(13)
    assert (d13[("v1", "v1", "v1")], d13[("v1", "v2", "v2")]) == (52, 234)


def test_er17_internal_triangles_pair_like_classes(er_graph):
    g = er_graph(17)
    for t in enumerate_triangles(g, build_layout(g)):
        if t.kind == "internal":
            assert t.shape in {("v1", "v1", "v1"), ("v1", "v2", "v2")}


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13])
def test_intermediate_types(er_graph, q):
    g = er_graph(q)
    for u, v in g.edges():
        if g.self_loop[u] or g.self_loop[v]:
            with pytest.raises(NoAlternatePath):
                intermediate_type(g, u, v)
            continue
        want = expected_intermediate_type(q, VertexClass(int(g.cls[u])), VertexClass(int(g.cls[v])))
        assert intermediate_type(g, u, v) == want


def test_intermediate_type_examples():
    assert expected_intermediate_type(5, VertexClass.V1, VertexClass.V1) == VertexClass.V1
    assert expected_intermediate_type(7, VertexClass.V1, VertexClass.V1) == VertexClass.V2


def test_verify_layout_all_reports(er_graph):
    assert all(r.ok for r in verify_layout(er_graph(7), int(quadrics(er_graph(7))[-1])))
