"""Structural analyses: Moore efficiency, feasible radixes, bisection, resilience."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx
import numpy as np
from numba import njit

from .ergraph import Graph, as_graph, avg_shortest_path, build_er, diameter, distance_matrix
from .errors import InfeasibleDegree, PolarFlyError
from .gf import is_prime_power


# -- Moore bound -----------------------------------------------------------

def moore_bound(k: int, d: int) -> int:
    """Largest vertex count a graph of max degree k and diameter d could have."""
    if k < 2 or d < 1:
        raise PolarFlyError("need k >= 2 and d >= 1")
    return 1 + k * sum((k - 1) ** i for i in range(d))


def moore_efficiency(k: int, n: int, d: int = 2) -> Fraction:
    return Fraction(n, moore_bound(k, d))


def er_moore_efficiency(q: int) -> Fraction:
    return moore_efficiency(q + 1, q * q + q + 1, 2)


def feasible_radixes(k_min: int, k_max: int) -> list[tuple[int, int, int]]:
    """(radix k = q+1, q, N = q^2+q+1) for every prime power q in range."""
    if k_min > k_max:
        raise PolarFlyError(f"empty radix range [{k_min}, {k_max}]")
    return [(q + 1, q, q * q + q + 1) for q in range(max(2, k_min - 1), k_max) if is_prime_power(q)]


def moore_table_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "k", "N", "moore_fraction"])
    for k, q, n in rows:
        w.writerow([q, k, n, f"{float(moore_efficiency(k, n, 2)):.6f}"])
    return buf.getvalue()


# -- bisection ---------------------------------------------------------------

@dataclass
class BisectionResult:
    cut_edges: int
    total_edges: int
    fraction: float
    partition: tuple[np.ndarray, np.ndarray]
    restarts: int = 1
    cuts: list = field(default_factory=list)  # best cut of each restart


def _csr(g: Graph):
    ptr = np.zeros(g.n + 1, dtype=np.int64)
    ptr[1:] = np.cumsum(g.degrees())
    nbr = np.concatenate(g.adj).astype(np.int64) if g.n else np.zeros(0, dtype=np.int64)
    return ptr, nbr


@njit(cache=True)
def _cut_size(ptr, nbr, side):
    c = 0
    for v in range(len(side)):
        for a in range(ptr[v], ptr[v + 1]):
            if side[nbr[a]] != side[v]:
                c += 1
    return c // 2


@njit(cache=True)
def _fm_refine(ptr, nbr, side, max_passes):
    """Fiduccia-Mattheyses passes on a balanced 0/1 labelling; sizes may drift
    by one during a pass, the kept prefix is always balanced."""
    n = len(side)
    lo, hi = n // 2, n - n // 2
    cut = _cut_size(ptr, nbr, side)
    gain = np.zeros(n, dtype=np.int64)
    locked = np.zeros(n, dtype=np.bool_)
    order = np.zeros(n, dtype=np.int64)
    for _ in range(max_passes):
        ones = 0
        for v in range(n):
            ones += side[v]
            g_ = 0
            for a in range(ptr[v], ptr[v + 1]):
                g_ += 1 if side[nbr[a]] != side[v] else -1
            gain[v] = g_
            locked[v] = False
        cur = cut
        best = cut
        best_k = 0
        moved = 0
        for k in range(n):
            pick = -1
            for v in range(n):
                if locked[v]:
                    continue
                new_ones = ones - 1 if side[v] == 1 else ones + 1
                if new_ones < lo - 1 or new_ones > hi + 1:
                    continue
                if pick < 0 or gain[v] > gain[pick]:
                    pick = v
            if pick < 0:
                break
            v = pick
            cur -= gain[v]
            ones += -1 if side[v] == 1 else 1
            for a in range(ptr[v], ptr[v + 1]):
                u = nbr[a]
                gain[u] += 2 if side[u] == side[v] else -2
            side[v] = 1 - side[v]
            gain[v] = -gain[v]
            locked[v] = True
            order[k] = v
            moved = k + 1
            if (ones == lo or ones == hi) and cur < best:
                best = cur
                best_k = moved
        # roll back moves beyond the best balanced prefix
        for k in range(best_k, moved):
            v = order[k]
            side[v] = 1 - side[v]
        if best >= cut:
            break
        cut = best
    return cut


def bisection(g, restarts: int = 32, seed: int = 0, max_passes: int = 50) -> BisectionResult:
    """Best balanced cut over ``restarts`` random starts refined by FM passes.

    Self-loops are not edges here: they count neither in the cut nor the total.
    """
    g = as_graph(g)
    n = g.n
    if n < 2:
        raise PolarFlyError("bisection needs at least two vertices")
    ptr, nbr = _csr(g)
    rng = np.random.default_rng(seed)
    best_cut, best_side, cuts = None, None, []
    for _ in range(restarts):
        side = np.zeros(n, dtype=np.int64)
        side[rng.permutation(n)[: n // 2]] = 1
        c = _fm_refine(ptr, nbr, side, max_passes)
        cuts.append(int(c))
        if best_cut is None or c < best_cut:
            best_cut, best_side = int(c), side.copy()
    if best_side.sum() > n - best_side.sum():
        best_side = 1 - best_side
    total = g.num_edges
    part = (np.flatnonzero(best_side == 0), np.flatnonzero(best_side == 1))
    return BisectionResult(best_cut, total, best_cut / total if total else 0.0, part, restarts, cuts)


def cut_edges(g, part) -> int:
    g = as_graph(g)
    a = np.zeros(g.n, dtype=bool)
    a[part[0]] = True
    return sum(a[u] != a[v] for u, v in g.edges())


def bisection_csv(rows) -> str:
    """``rows`` holds (n, BisectionResult) pairs."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "cut_edges", "total_edges", "cut_fraction"])
    for n, res in rows:
        w.writerow([n, res.cut_edges, res.total_edges, f"{res.fraction:.6f}"])
    return buf.getvalue()


# -- resilience --------------------------------------------------------------

@dataclass
class ResilienceTrace:
    failed_fraction: list = field(default_factory=list)
    diameter: list = field(default_factory=list)  # math.inf once disconnected
    aspl: list = field(default_factory=list)
    total_edges: int = 0

    @property
    def disconnection_ratio(self) -> float:
        """Failed fraction at which the graph first fell apart (inf if never)."""
        for f, d in zip(self.failed_fraction, self.diameter):
            if math.isinf(d):
                return f
        return math.inf

    def diameter_at(self, fraction: float) -> float:
        """Diameter after the last step with failed fraction <= ``fraction``."""
        d = self.diameter[0] if self.diameter else math.inf
        for f, dd in zip(self.failed_fraction, self.diameter):
            if f > fraction + 1e-12:
                break
            d = dd
        return d


def resilience_run(g, rng: np.random.Generator, step: int = 1, max_fraction: float = 1.0) -> ResilienceTrace:
    """Remove uniformly random links ``step`` at a time until disconnection.

    The first entry is the intact graph (failed fraction 0). Self-loops are
    vertex flags, so they are never removed.
    """
    g = as_graph(g)
    edges = np.array(g.edges(), dtype=np.int64)
    m = len(edges)
    order = rng.permutation(m)
    tr = ResilienceTrace(total_edges=m)
    removed = 0
    cur = g
    while True:
        D = distance_matrix(cur)
        frac = removed / m
        tr.failed_fraction.append(frac)
        if np.isinf(D).any():
            tr.diameter.append(math.inf)
            tr.aspl.append(math.inf)
            break
        n = cur.n
        tr.diameter.append(int(D.max()))
        tr.aspl.append(float(D.sum()) / (n * (n - 1)))
        if removed >= m or frac >= max_fraction:
            break
        nxt = min(m, removed + step)
        cur = g.without_edges(map(tuple, edges[order[:nxt]]))
        removed = nxt
    return tr


@dataclass
class ResilienceSummary:
    traces: list
    median_disconnection_ratio: float
    fraction_within: float  # share of runs with diameter <= bound at the probe fraction
    probe_fraction: float
    diameter_bound: int


def resilience_campaign(g, runs: int = 100, seed: int = 0, step: int | None = None,
                        probe_fraction: float = 0.5, diameter_bound: int = 4) -> ResilienceSummary:
    """Seeded independent runs; the median is used because once any run
    disconnects its diameter is infinite and means stop making sense."""
    g = as_graph(g)
    step = max(1, g.num_edges // 100) if step is None else step
    seqs = np.random.SeedSequence(seed).spawn(runs)
    traces = [resilience_run(g, np.random.default_rng(s), step) for s in seqs]
    ratios = [t.disconnection_ratio for t in traces]
    ok = [t.diameter_at(probe_fraction) <= diameter_bound for t in traces]
    return ResilienceSummary(traces, float(np.median(ratios)), float(np.mean(ok)),
                             probe_fraction, diameter_bound)


def single_failure_diameters(g) -> dict:
    """Diameter after deleting each edge on its own."""
    g = as_graph(g)
    return {(u, v): diameter(g.without_edges([(u, v)])) for u, v in g.edges()}


def trace_csv(tr: ResilienceTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["failed_fraction", "diameter", "aspl"])
    for f, d, a in zip(tr.failed_fraction, tr.diameter, tr.aspl):
        w.writerow([f"{f:.6f}", "inf" if math.isinf(d) else d, "inf" if math.isinf(a) else f"{a:.6f}"])
    return buf.getvalue()


# -- random regular baseline -------------------------------------------------

def random_regular_baseline(n: int, k: int, seed: int = 0, max_tries: int = 100) -> Graph:
    """Connected random k-regular simple graph (pairing model with incremental
    rejection, via networkx); disconnected draws are redrawn."""
    if (n * k) % 2 or k >= n or k < 0:
        raise InfeasibleDegree(f"no simple {k}-regular graph on {n} vertices")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        h = nx.random_regular_graph(k, n, seed=int(rng.integers(2**31)))
        if k == 0 or nx.is_connected(h):
            return Graph([sorted(h.adj[v]) for v in range(n)])
    raise InfeasibleDegree(f"no connected {k}-regular graph on {n} vertices after {max_tries} draws")


def er_summary(q: int) -> dict:
    g = build_er(q)
    return {"q": q, "N": g.n, "diameter": diameter(g), "aspl": float(avg_shortest_path(g)),
            "moore_fraction": float(er_moore_efficiency(q))}
