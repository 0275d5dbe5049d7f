"""Topology file formats: edge list (with a provenance header), DOT and JSON."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .ergraph import ErGraph, Graph, VertexClass, classify
from .errors import PolarFlyError
from .gf import FieldSpec
from .layout import CLASS_NAMES, ClusterLayout

DOT_COLORS = {VertexClass.W: "firebrick", VertexClass.V1: "steelblue", VertexClass.V2: "darkseagreen"}


def header_fields(g: Graph) -> dict:
    meta = {"n": g.n, "edges": g.num_edges}
    if isinstance(g, ErGraph):
        F = g.field
        meta.update(q=F.q, p=F.p, m=F.m,
                    modulus=",".join(map(str, F.modulus)) if F.modulus else "-",
                    order="left-normalized points, lexicographic")
    meta["quadrics"] = ",".join(map(str, np.flatnonzero(g.self_loop))) or "-"
    return meta


def edgelist_text(g: Graph) -> str:
    """One ``u v`` line per edge (u < v, sorted); self-loops live in the header only.

    ``m`` in the header is the extension degree of GF(p^m), ``edges`` the edge count.
    """
    lines = ["# polarfly edgelist"]
    lines += [f"# {k}={v}" for k, v in header_fields(g).items()]
    lines += [f"{u} {v}" for u, v in sorted(g.edges())]
    return "\n".join(lines) + "\n"


def write_edgelist(g: Graph, path) -> Path:
    path = Path(path)
    path.write_text(edgelist_text(g))
    return path


def parse_edgelist(text: str) -> tuple[Graph, dict]:
    meta, edges = {}, []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, val = line[1:].strip().partition("=")
            if sep:
                meta[key.strip()] = val.strip()
            continue
        parts = line.split()
        if len(parts) != 2:
            raise PolarFlyError(f"line {lineno}: expected 'u v', got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    n = int(meta["n"]) if "n" in meta else 1 + max((max(e) for e in edges), default=-1)
    adj = [[] for _ in range(n)]
    loops = np.zeros(n, dtype=bool)
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise PolarFlyError(f"edge {(u, v)} outside 0..{n - 1}")
        if u == v:
            loops[u] = True
            continue
        adj[u].append(v)
        adj[v].append(u)
    if meta.get("quadrics", "-") != "-":
        loops[[int(x) for x in meta["quadrics"].split(",")]] = True
    for key in ("q", "p", "m", "n", "edges"):
        if key in meta:
            meta[key] = int(meta[key])
    return Graph(adj, loops), meta


def load_edgelist(path) -> tuple[Graph, dict]:
    return parse_edgelist(Path(path).read_text())


def read_edgelist(path) -> Graph:
    return load_edgelist(path)[0]


def field_from_meta(meta: dict) -> FieldSpec | None:
    if "p" not in meta:
        return None
    mod = meta.get("modulus", "-")
    return FieldSpec(meta["p"], meta.get("m", 1),
                     None if mod == "-" else tuple(int(c) for c in mod.split(",")))


def dot_text(g: Graph, name: str = "polarfly") -> str:
    """Undirected DOT; vertices colored by class, quadrics drawn with a loop."""
    cls = g.cls if isinstance(g, ErGraph) else classify(g)
    out = [f"graph {name} {{", "  node [style=filled];"]
    for v in range(g.n):
        c = VertexClass(int(cls[v]))
        label = f"{v}"
        if isinstance(g, ErGraph):
            label += "\\n" + "".join(map(str, g.points[v]))
        out.append(f'  {v} [label="{label}", class="{CLASS_NAMES[c]}", fillcolor={DOT_COLORS[c]}];')
    for v in np.flatnonzero(g.self_loop):
        out.append(f"  {v} -- {v};")
    for u, v in sorted(g.edges()):
        out.append(f"  {u} -- {v};")
    out.append("}")
    return "\n".join(out) + "\n"


def graph_dict(g: Graph) -> dict:
    d = {"n": g.n, "edges": [list(e) for e in sorted(g.edges())],
         "quadrics": np.flatnonzero(g.self_loop).tolist()}
    if isinstance(g, ErGraph):
        d.update(q=g.q, points=[list(p) for p in g.points],
                 classes=[CLASS_NAMES[VertexClass(int(c))] for c in g.cls])
    return d


def layout_dict(lay: ClusterLayout, triangles=None) -> dict:
    d = {"starter": lay.starter, "centers": lay.centers,
         "clusters": [c.tolist() for c in lay.clusters]}
    if triangles is not None:
        d["triangles"] = [{"vertices": list(t.vertices), "kind": t.kind, "clusters": list(t.clusters),
                           "shape": list(t.shape)} for t in triangles]
    return d


def expansion_dict(eg) -> dict:
    """JSON view of an expanded graph with replica provenance."""
    d = graph_dict(eg.graph)
    d.update(method=eg.method, base_n=eg.base.n, q=eg.base.q, layout=layout_dict(eg.layout),
             replicas=[{"replica_of": rc.replica_of, "cluster": rc.index,
                        "vertices": rc.vertices.tolist(), "originals": rc.originals.tolist()}
                       for rc in eg.added_clusters],
             origin=eg.origin.tolist())
    return d


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"
