"""Flit-level network simulator: traffic patterns, run configs, sweeps.

The router model is input-queued with credit-based flow control, virtual
channels chosen by hop index, wormhole VC ownership and a round-robin
separable input-first switch allocator. Every router traversal (including the
link) costs ``router_delay`` cycles. The hot loop lives in ``_simcore``.

``ugal_g`` is a reference-only policy: it reads queue state along the whole
candidate paths, which a real router cannot see.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import _simcore
from .ergraph import Graph, as_graph, build_er, distance_matrix
from .errors import ConfigError, InfeasiblePattern, PolarFlyError
from .routing import UGAL_PF_THRESHOLD, shortest_paths

TRAFFIC_KINDS = ("uniform", "random_permutation", "tornado", "perm1hop", "perm2hop")
POLICIES = tuple(_simcore.POLICY_CODES)
CSV_COLUMNS = ("offered_load", "accepted_throughput", "avg_latency_cycles", "p50", "p99")


class SimulationInvariantError(RuntimeError):
    """Flit conservation broke or the network stopped moving with flits inside."""


@dataclass(frozen=True)
class TrafficPattern:
    kind: str
    n_routers: int
    mapping: np.ndarray | None = None  # router -> destination router; None for uniform

    def destination_router(self, src: int, rng: np.random.Generator) -> int:
        if self.mapping is not None:
            return int(self.mapping[src])
        d = int(rng.integers(self.n_routers - 1))
        return d + (d >= src)


def _derangement(n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        perm = rng.permutation(n)
        if not (perm == np.arange(n)).any():
            return perm


def _random_matching(allowed: np.ndarray, rng: np.random.Generator) -> np.ndarray | None:
    """Random perfect matching of a boolean router x router relation, or None."""
    n = len(allowed)
    rows, cols = rng.permutation(n), rng.permutation(n)
    sub = csr_matrix(allowed[np.ix_(rows, cols)].astype(np.int8))
    match = maximum_bipartite_matching(sub, perm_type="column")
    if (match < 0).any():
        return None
    out = np.empty(n, dtype=np.int64)
    out[rows] = cols[match]
    return out


def make_traffic(kind: str, g, seed: int = 0, max_tries: int = 16) -> TrafficPattern:
    """Router-level traffic pattern. Permutation kinds never map a router to itself."""
    gg = as_graph(g)
    n = gg.n
    rng = np.random.default_rng(seed)
    if kind == "uniform":
        return TrafficPattern(kind, n)
    if kind == "random_permutation":
        return TrafficPattern(kind, n, _derangement(n, rng))
    if kind == "tornado":
        return TrafficPattern(kind, n, (np.arange(n) + n // 2) % n)
    if kind in ("perm1hop", "perm2hop"):
        D = distance_matrix(gg)
        allowed = D == (1 if kind == "perm1hop" else 2)
        for _ in range(max_tries):
            m = _random_matching(allowed, rng)
            if m is not None:
                return TrafficPattern(kind, n, m)
        raise InfeasiblePattern(f"no {kind} bijection found after {max_tries} tries")
    raise PolarFlyError(f"unknown traffic kind {kind!r}; expected one of {TRAFFIC_KINDS}")


@dataclass
class SimConfig:
    graph: object = 7  # Graph/ErGraph, or a prime power q meaning ER_q
    endpoints_per_router: int = 4
    packet_size: int = 4
    buffer_per_port: int = 128
    vcs: int = 4
    injection_rate: float = 0.1
    traffic: object = "uniform"  # kind name or a TrafficPattern
    routing: str = "min"
    warmup_cycles: int = 10_000
    measure_cycles: int = 50_000
    drain_cycles: int | None = None  # default: measure_cycles
    seed: int = 0
    router_delay: int = 3
    source_queue: int = 4096  # packets per endpoint before new ones are dropped
    audit_interval: int = 0  # 0 disables the conservation audit
    watchdog_cycles: int = 2000
    histogram_bins: int = 4096

    def resolved_graph(self) -> Graph:
        g = self.graph
        return build_er(g) if isinstance(g, (int, np.integer)) else as_graph(g)

    def pattern(self, g=None) -> TrafficPattern:
        if isinstance(self.traffic, TrafficPattern):
            return self.traffic
        return make_traffic(self.traffic, g if g is not None else self.resolved_graph(), self.seed)


@dataclass
class SimStats:
    offered_load: float
    accepted_throughput: float
    avg_latency: float  # nan when no measured packet arrived
    latency_histogram: np.ndarray
    link_utilization: np.ndarray
    p50: float
    p99: float
    packets_measured: int
    min_latency: float
    hop_histogram: np.ndarray
    undelivered: int  # measured packets still in flight when the drain bound hit
    dropped_packets: int
    cycles: int
    extra: dict = field(default_factory=dict)

    def row(self) -> dict:
        return {"offered_load": self.offered_load, "accepted_throughput": self.accepted_throughput,
                "avg_latency_cycles": self.avg_latency, "p50": self.p50, "p99": self.p99}


def _percentile(hist: np.ndarray, frac: float) -> float:
    total = hist.sum()
    if total == 0:
        return math.nan
    return float(np.searchsorted(np.cumsum(hist), frac * total))


def max_route_hops(g: Graph, routing: str) -> int:
    d = int(distance_matrix(g).max())
    return d if routing == "min" else 2 * d


def validate(cfg: SimConfig, g: Graph | None = None) -> Graph:
    g = cfg.resolved_graph() if g is None else g
    if not 0.0 <= cfg.injection_rate <= 1.0:
        raise ConfigError("injection_rate", f"must be in [0, 1], got {cfg.injection_rate}")
    if cfg.routing not in POLICIES:
        raise ConfigError("routing", f"unknown policy {cfg.routing!r}; expected one of {POLICIES}")
    for name in ("endpoints_per_router", "packet_size", "vcs", "router_delay", "source_queue"):
        if getattr(cfg, name) < 1:
            raise ConfigError(name, "must be >= 1")
    if cfg.buffer_per_port // cfg.vcs < 1:
        raise ConfigError("buffer_per_port", "needs at least one flit per virtual channel")
    if not np.isfinite(distance_matrix(g)).all():
        raise ConfigError("graph", "topology is disconnected")
    need = max_route_hops(g, cfg.routing)
    if need > cfg.vcs or need + 1 > _simcore.MAX_ROUTE:
        raise ConfigError("vcs", f"{cfg.routing} routes take up to {need} hops but only {cfg.vcs} VCs")
    return g


def _tables(g: Graph):
    sp = shortest_paths(g)
    ptr = np.zeros(g.n + 1, dtype=np.int64)
    ptr[1:] = np.cumsum(g.degrees())
    nbr = np.concatenate(g.adj).astype(np.int64)
    port_of = np.full((g.n, g.n), -1, dtype=np.int64)
    for r in range(g.n):
        port_of[r, g.adj[r]] = np.arange(len(g.adj[r]))
    src = np.repeat(np.arange(g.n), g.degrees())
    rev = ptr[nbr] + port_of[nbr, src]
    nxt = sp.next_hop.astype(np.int64)
    np.fill_diagonal(nxt, np.arange(g.n))
    return ptr, nbr, rev, port_of, nxt, sp.dist.astype(np.int64)


def endpoint_seeds(seed: int, n: int) -> np.ndarray:
    return np.random.SeedSequence(seed).generate_state(n, dtype=np.uint64)


def run_sim(cfg: SimConfig) -> SimStats:
    g = validate(cfg)
    pat = cfg.pattern(g)
    ptr, nbr, rev, port_of, nxt, dist = _tables(g)
    p = cfg.endpoints_per_router
    kind = 0 if pat.mapping is None else 1
    perm = np.zeros(1, dtype=np.int64) if pat.mapping is None else pat.mapping.astype(np.int64)
    drain = cfg.measure_cycles if cfg.drain_cycles is None else cfg.drain_cycles
    counters, hist, links, hops = _simcore.simulate(
        ptr, nbr, rev, port_of, nxt, dist, p, cfg.packet_size, cfg.vcs,
        cfg.buffer_per_port // cfg.vcs, cfg.router_delay, float(cfg.injection_rate), kind, perm,
        _simcore.POLICY_CODES[cfg.routing], UGAL_PF_THRESHOLD, cfg.warmup_cycles,
        cfg.measure_cycles, drain, cfg.source_queue, cfg.audit_interval, cfg.watchdog_cycles,
        endpoint_seeds(cfg.seed, g.n * p), cfg.histogram_bins)
    (gen, off, inj, dlv, acc, lat_sum, lat_n, outstanding, dropped, status, status_cycle,
     cycles, lat_min, in_buf) = (int(x) for x in counters)
    if status == _simcore.STATUS_AUDIT:
        raise SimulationInvariantError(f"flit conservation violated at cycle {status_cycle}")
    if status == _simcore.STATUS_DEADLOCK:
        raise SimulationInvariantError(f"no flit moved for {cfg.watchdog_cycles} cycles "
                                       f"with {in_buf} flits buffered (cycle {status_cycle})")
    if status == _simcore.STATUS_POOL:
        raise SimulationInvariantError("packet pool exhausted")
    denom = cfg.measure_cycles * g.n * p
    return SimStats(
        offered_load=off / denom if denom else 0.0,
        accepted_throughput=acc / denom if denom else 0.0,
        avg_latency=lat_sum / lat_n if lat_n else math.nan,
        latency_histogram=hist,
        link_utilization=links / cfg.measure_cycles if cfg.measure_cycles else links * 0.0,
        p50=_percentile(hist, 0.5),
        p99=_percentile(hist, 0.99),
        packets_measured=lat_n,
        min_latency=float(lat_min) if lat_n else math.nan,
        hop_histogram=hops,
        undelivered=outstanding,
        dropped_packets=dropped,
        cycles=cycles,
        extra={"generated_flits": gen, "injected_flits": inj, "delivered_flits": dlv},
    )


def zero_load_latency(cfg: SimConfig, g: Graph | None = None) -> float:
    """Latency of a lone packet on its minimal route, averaged over the pattern's
    source/destination distribution: one router delay per router visited plus
    serialization of the remaining flits."""
    g = cfg.resolved_graph() if g is None else g
    pat = cfg.pattern(g)
    D = distance_matrix(g)
    if pat.mapping is None:
        hops = D[~np.eye(g.n, dtype=bool)].mean()
    else:
        hops = D[np.arange(g.n), pat.mapping].mean()
    return (hops + 1) * cfg.router_delay + cfg.packet_size - 1


def sweep(cfg_base: SimConfig, rates) -> list[SimStats]:
    rates = list(rates)
    if rates != sorted(rates):
        raise PolarFlyError("rates must be sorted ascending")
    return [run_sim(replace(cfg_base, injection_rate=float(r))) for r in rates]


def is_saturated(stats: SimStats, zero_load: float, latency_factor: float = 4.0,
                 min_acceptance: float = 0.95) -> bool:
    if stats.offered_load == 0:
        return False
    if stats.accepted_throughput < min_acceptance * stats.offered_load:
        return True
    return not math.isfinite(stats.avg_latency) or stats.avg_latency > latency_factor * zero_load


def saturation_point(rates, stats: list[SimStats], zero_load: float) -> float | None:
    """Smallest swept rate that counts as saturated; None if none did."""
    for r, s in zip(rates, stats):
        if is_saturated(s, zero_load):
            return float(r)
    return None


def find_saturation(cfg: SimConfig, lo: float = 0.0, hi: float = 1.0, tol: float = 0.01) -> float:
    """Bisect the offered load for the saturation boundary (assumes monotonicity).

    Returns the smallest probed load found saturated, or ``hi`` if even ``hi``
    was not saturated.
    """
    g = validate(cfg)
    z = zero_load_latency(cfg, g)
    cfg = replace(cfg, graph=g, traffic=cfg.pattern(g))
    if not is_saturated(run_sim(replace(cfg, injection_rate=hi)), z):
        return hi
    while hi - lo > tol:
        mid = round((lo + hi) / 2, 6)
        if is_saturated(run_sim(replace(cfg, injection_rate=mid)), z):
            hi = mid
        else:
            lo = mid
    return hi


def stats_csv(stats: list[SimStats]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in stats:
        w.writerow([f"{s.row()[c]:.6f}" for c in CSV_COLUMNS])
    return buf.getvalue()


# -- config files ----------------------------------------------------------

_REQUIRED = ("topology", "traffic", "routing", "rates")
_SCALARS = {f.name: f.type for f in fields(SimConfig)}


def load_sim_config(source) -> tuple[SimConfig, list[float]]:
    """Parse a JSON sweep config (path, JSON text or dict).

    Schema: ``topology`` ({"q": int} or {"edgelist": path}), ``traffic`` (kind),
    ``routing`` (policy), ``rates`` (ascending list in [0, 1]) and optionally any
    scalar SimConfig field (``endpoints_per_router``, ``seed``, ...).
    """
    if isinstance(source, dict):
        doc = source
    else:
        text = Path(source).read_text() if Path(str(source)).exists() else str(source)
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("<root>", f"invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "expected a JSON object")
    for key in _REQUIRED:
        if key not in doc:
            raise ConfigError(key, "required key missing")
    unknown = set(doc) - set(_REQUIRED) - set(_SCALARS) - {"graph"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")

    topo = doc["topology"]
    if not isinstance(topo, dict) or not ({"q", "edgelist"} & set(topo)):
        raise ConfigError("topology", "expected {\"q\": int} or {\"edgelist\": path}")
    if "q" in topo:
        if not isinstance(topo["q"], int):
            raise ConfigError("topology.q", "must be an integer")
        try:
            graph = build_er(topo["q"])
        except PolarFlyError as exc:
            raise ConfigError("topology.q", str(exc)) from None
    else:
        from .exports import read_edgelist
        graph = read_edgelist(topo["edgelist"])

    if doc["traffic"] not in TRAFFIC_KINDS:
        raise ConfigError("traffic", f"unknown kind {doc['traffic']!r}")
    rates = doc["rates"]
    if not isinstance(rates, list) or not rates or not all(isinstance(r, (int, float)) for r in rates):
        raise ConfigError("rates", "expected a non-empty list of numbers")
    for i, r in enumerate(rates):
        if not 0 <= r <= 1:
            raise ConfigError(f"rates[{i}]", f"{r} outside [0, 1]")
    if rates != sorted(rates):
        raise ConfigError("rates", "must be sorted ascending")

    kw = {}
    for key, val in doc.items():
        if key in _REQUIRED:
            continue
        if key in ("graph", "traffic", "injection_rate"):
            raise ConfigError(key, "set via topology/rates instead")
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ConfigError(key, "must be a number")
        if _SCALARS[key].startswith("int"):
            if not float(val).is_integer():
                raise ConfigError(key, "must be an integer")
            val = int(val)
        kw[key] = val
    cfg = SimConfig(graph=graph, traffic=doc["traffic"], routing=doc["routing"], **kw)
    validate(cfg, graph)
    return cfg, [float(r) for r in rates]
