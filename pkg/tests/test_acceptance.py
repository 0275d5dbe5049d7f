"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS / SOFT-PASS / FAIL line in ``RESULTS``; the terminal
summary (see conftest) prints them after the run.
"""

import itertools
import math
import time
import warnings
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from polarfly.analysis import (bisection, er_moore_efficiency, feasible_radixes, resilience_campaign,
                               single_failure_diameters)
from polarfly.ergraph import VertexClass, avg_shortest_path, build_er, build_er_via_polarity, diameter
from polarfly.expand import expand_nonquadric, expand_quadric
from polarfly.layout import (build_layout, enumerate_triangles, quadrics, triangle_distribution,
                             verify_block_design, verify_inter, verify_intra, verify_partition)
from polarfly.netsim import SimConfig, find_saturation
from polarfly.routing import count_paths, min_route, path_diversity_case

RESULTS = {}


def record(key, ok, detail, soft=False):
    RESULTS[key] = ("SOFT-PASS" if soft else "PASS" if ok else "FAIL", detail)
    assert ok, detail


def test_c01_construction_counts():
    t0 = time.perf_counter()
    bad = []
    for q in (3, 5, 7, 9, 11, 13):
        g = build_er(q)
        sizes = [int((g.cls == c).sum()) for c in VertexClass]
        deg = g.degrees()[~g.self_loop]
        if (g.n, sizes, set(deg.tolist()), diameter(g)) != \
                (q * q + q + 1, [q + 1, q * (q + 1) // 2, q * (q - 1) // 2], {q + 1}, 2):
            bad.append(q)
    dt = time.perf_counter() - t0
    record("1", not bad and dt < 1.0, f"q in 3..13, mismatches={bad}, {dt:.2f}s (limit 1s)")


def test_c02_structure_checks():
    from polarfly.ergraph import verify_structure
    t0 = time.perf_counter()
    bad = [q for q in (3, 5, 7, 9, 11, 13) if not verify_structure(build_er(q)).ok]
    dt = time.perf_counter() - t0
    record("2", not bad and dt < 5.0, f"all five clauses, odd q <= 13, failures={bad}, {dt:.2f}s")


def test_c03_construction_equivalence():
    bad = [q for q in (3, 5, 7, 9)
           if sorted(build_er(q).edges()) != sorted(build_er_via_polarity(q).edges())]
    record("3", not bad, f"dot-product vs polarity edge sets, q in 3,5,7,9, mismatches={bad}")


def test_c04_layout_every_starter(er_graph):
    bad = []
    for q in (5, 7):
        g = er_graph(q)
        for s in quadrics(g):
            lay = build_layout(g, int(s))
            for rep in (verify_partition(g, lay), verify_intra(g, lay), verify_inter(g, lay)):
                if not rep.ok:
                    bad.append((q, int(s), rep.title, rep.first_failure()))
    record("4", not bad, f"ER_5 and ER_7, every starter, failures={bad[:3]}")


def test_c05_triangles(er_graph):
    bad = []
    for q in (3, 5, 7, 11, 13):
        g = er_graph(q)
        lay = build_layout(g)
        tris = enumerate_triangles(g, lay)
        got = (len(tris), sum(t.kind == "inter" for t in tris), sum(t.kind == "internal" for t in tris))
        if got != (math.comb(q + 1, 3), math.comb(q, 3), math.comb(q, 2)):
            bad.append(("counts", q, got))
        if not verify_block_design(g, lay, tris).ok:
            bad.append(("block design", q))
    shapes = {5: {("v1", "v1", "v1"): 0, ("v1", "v2", "v2"): 10},
              7: {("v1", "v1", "v2"): 21, ("v2", "v2", "v2"): 14},
              13: {("v1", "v1", "v1"): 52, ("v1", "v2", "v2"): 234}}
    for q, want in shapes.items():
        dist = triangle_distribution(er_graph(q), build_layout(er_graph(q)))
        if any(dist[k] != v for k, v in want.items()):
            bad.append(("shapes", q, dist))
    record("5", not bad, f"totals/inter/internal, block design, shape rows; failures={bad}")


def test_c06_path_diversity(er_graph):
    t0 = time.perf_counter()
    mismatched = {}
    for q in (5, 7):
        g = er_graph(q)
        for s, t in itertools.combinations(range(g.n), 2):
            for L in range(1, 5):
                label, want = path_diversity_case(g, s, t, L)
                got = count_paths(g, s, t, L)
                if got != want:
                    mismatched.setdefault((q, L, label), (want, set()))[1].add(got)
    dt = time.perf_counter() - t0
    rows = sorted({(L, label) for _, L, label in mismatched})
    detail = "; ".join(f"q={q} L={L} '{lab}': table {w}, observed {sorted(o)}"
                       for (q, L, lab), (w, o) in sorted(mismatched.items()))
    record("6", not mismatched and dt < 60, f"{len(rows)} table rows disagree with enumeration "
                                           f"({dt:.1f}s). {detail}")


def test_c07_routing(er_graph):
    g = er_graph(3)
    r = min_route(g, g.index[(0, 0, 1)], g.index[(1, 2, 2)])
    example = [g.points[v] for v in r.hops] == [(0, 0, 1), (1, 1, 0), (1, 2, 2)]
    bad = 0
    for q in (3, 4, 5, 7, 8, 9):
        h = er_graph(q)
        A = h.adjacency_matrix()
        common = A.astype(np.int64) @ A.astype(np.int64)
        for s, t in itertools.combinations(range(h.n), 2):
            if not A[s, t]:
                mid = min_route(h, s, t).hops[1]
                bad += not (common[s, t] == 1 and A[s, mid] and A[t, mid])
    record("7", example and bad == 0, f"worked example={'ok' if example else 'wrong'}, "
                                      f"midpoint mismatches (q <= 9)={bad}")


def test_c08_expansion(er_graph):
    bad = []
    for q in (5, 7, 13):
        g = er_graph(q)
        for n in range(1, 5):
            eg = expand_quadric(g, n_replications=n)
            if eg.n != g.n + n * (q + 1) or diameter(eg.graph) != 2:
                bad.append(("quadric", q, n))
    for q in (5, 7):
        g = er_graph(q)
        for n in range(1, q + 1):
            eg = expand_nonquadric(g, n_replications=n)
            if eg.n != g.n + n * q or diameter(eg.graph) != 3 or not avg_shortest_path(eg.graph) < 2:
                bad.append(("nonquadric", q, n))
    record("8", not bad, f"quadric q in 5,7,13 n<=4; non-quadric q in 5,7 n<=q; failures={bad}")


def test_c09_moore():
    e31 = er_moore_efficiency(31)
    effs = [er_moore_efficiency(q) for _, q, _ in feasible_radixes(3, 128)]
    mono = all(a < b for a, b in zip(effs, effs[1:]))
    ok = e31 == Fraction(993, 1025) and e31 > Fraction(96, 100) and mono
    record("9", ok, f"q=31 efficiency {e31} = {float(e31):.4f}, increasing up to q=127: {mono}")


@pytest.mark.slow
def test_c10_bisection(er_graph):
    t0 = time.perf_counter()
    fr = {q: bisection(er_graph(q), restarts=32, seed=0).fraction for q in (17, 31)}
    dt = time.perf_counter() - t0
    hard = all(f > 0.40 for f in fr.values())
    soft = not hard and all(f > 0.38 for f in fr.values())
    detail = ", ".join(f"ER_{q} {f:.4f}" for q, f in fr.items()) + f" ({dt:.1f}s)"
    if soft:
        warnings.warn(f"bisection below 0.40 but above 0.38: {detail}")
    record("10", (hard or soft) and dt < 120, detail, soft=soft and dt < 120)


def test_c11a_single_failures(er_graph):
    bad = []
    for q in (5, 7):
        g = er_graph(q)
        for (u, v), d in single_failure_diameters(g).items():
            if d != (4 if g.self_loop[u] or g.self_loop[v] else 3):
                bad.append((q, u, v, d))
    record("11a", not bad, f"exhaustive single-edge removal on ER_5/ER_7, mismatches={bad[:3]}")


@pytest.mark.slow
def test_c11b_resilience_campaign(er_graph):
    t0 = time.perf_counter()
    s = resilience_campaign(er_graph(13), runs=100, seed=0, probe_fraction=0.5, diameter_bound=4)
    dt = time.perf_counter() - t0
    d50 = sorted(t.diameter_at(0.5) for t in s.traces)
    record("11b", s.fraction_within >= 0.8 and dt < 180,
           f"ER_13, 100 runs: {s.fraction_within:.0%} with diameter <= 4 at 50% failed "
           f"(need >= 80%), median diameter there {d50[len(d50) // 2]}, "
           f"median disconnection ratio {s.median_disconnection_ratio:.3f}, {dt:.0f}s")


# -- simulator trends ----------------------------------------------------------

SIM = SimConfig(graph=13, endpoints_per_router=7, warmup_cycles=2000, measure_cycles=8000, seed=1)
_sat_cache = {}


def saturation(traffic, routing):
    key = (traffic, routing)
    if key not in _sat_cache:
        t0 = time.perf_counter()
        _sat_cache[key] = (find_saturation(replace(SIM, traffic=traffic, routing=routing), tol=0.01),
                           time.perf_counter() - t0)
    return _sat_cache[key]


def test_c12a_determinism():
    from polarfly.netsim import run_sim, stats_csv
    cfg = replace(SIM, injection_rate=0.2, routing="ugal", traffic="random_permutation",
                  warmup_cycles=500, measure_cycles=2000)
    a, b = run_sim(cfg), run_sim(cfg)
    same = stats_csv([a]) == stats_csv([b]) and np.array_equal(a.latency_histogram, b.latency_histogram) \
        and np.array_equal(a.link_utilization, b.link_utilization)
    record("12a", same, "identical config and seed give identical CSV bytes and histograms")


def test_c12b_conservation():
    from polarfly.netsim import run_sim
    for routing in ("min", "ugal", "ugal_pf"):
        run_sim(replace(SIM, injection_rate=0.5, routing=routing, traffic="random_permutation",
                        warmup_cycles=500, measure_cycles=1500, audit_interval=25))
    record("12b", True, "flit conservation audited every 25 cycles at load 0.5 (min, ugal, ugal_pf)")


@pytest.mark.slow
def test_c12c_permutation_min():
    s, dt = saturation("random_permutation", "min")
    record("12c", s <= 1 / 7 + 0.05 and dt < 300,
           f"ER_13 p=7 random permutation, min: saturation {s:.3f} (limit {1 / 7 + 0.05:.3f}), {dt:.0f}s")


@pytest.mark.slow
def test_c12d_permutation_adaptive():
    base, _ = saturation("random_permutation", "min")
    u, du = saturation("random_permutation", "ugal")
    pf, dpf = saturation("random_permutation", "ugal_pf")
    record("12d", u >= 3 * base and pf >= 3 * base and max(du, dpf) < 300,
           f"min {base:.3f}, ugal {u:.3f} ({u / base:.1f}x), ugal_pf {pf:.3f} ({pf / base:.1f}x); need >= 3x")


@pytest.mark.slow
def test_c12e_uniform_ugal_pf():
    m, dm = saturation("uniform", "min")
    pf, dpf = saturation("uniform", "ugal_pf")
    rel = abs(pf - m) / m
    record("12e", rel <= 0.10 and max(dm, dpf) < 300,
           f"uniform: min {m:.3f}, ugal_pf {pf:.3f}, relative gap {rel:.1%} (limit 10%)")
