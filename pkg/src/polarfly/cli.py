"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 usage or config error.
Results go to stdout unless ``--out`` (or $POLARFLY_OUT_DIR) names a directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import analysis, exports, netsim
from .ergraph import ErGraph, Report, avg_shortest_path, build_er, diameter, verify_structure
from .errors import ConfigError, PolarFlyError
from .expand import degree_summary, expand_nonquadric, expand_quadric
from .layout import build_layout, enumerate_triangles, quadrics, verify_layout
from .routing import compact_valiant_route, min_route, valiant_route

OUT_ENV = "POLARFLY_OUT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, name: str, text: str):
    out = args.out or os.environ.get(OUT_ENV)
    if not out:
        sys.stdout.write(text)
        return None
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    path = path / name
    path.write_text(text)
    print(path)
    return path


def _graph_text(g, fmt: str) -> tuple[str, str]:
    if fmt == "edgelist":
        return "edgelist", exports.edgelist_text(g)
    if fmt == "dot":
        return "dot", exports.dot_text(g)
    return "json", exports.dumps(exports.graph_dict(g))


def _er(q):
    if q is None:
        raise UsageError("--q is required")
    return build_er(q)


def cmd_generate(args) -> int:
    g = _er(args.q)
    ext, text = _graph_text(g, args.format or "edgelist")
    _emit(args, f"er_q{args.q}.{ext}", text)
    return EXIT_OK


def _starter(g: ErGraph, k):
    """``--starter k`` picks the k-th quadric (0-based, by vertex ID)."""
    quads = quadrics(g)
    k = 0 if k is None else k
    if not 0 <= k < len(quads):
        raise UsageError(f"--starter must be in 0..{len(quads) - 1} (index among the quadrics)")
    return int(quads[k])


def _reports_for(g: ErGraph, k):
    return [verify_structure(g)] + verify_layout(g, _starter(g, k))


def cmd_verify(args) -> int:
    if args.file:
        loaded, meta = exports.load_edgelist(args.file)
        q = meta.get("q", args.q)
        if q is None:
            raise UsageError("edge list has no q in its header; pass --q")
        reports = [verify_structure(loaded, q)]
        ref = build_er(q)
        same = loaded.n == ref.n and sorted(loaded.edges()) == sorted(ref.edges()) \
            and (loaded.self_loop == ref.self_loop).all()
        if same:
            reports += verify_layout(ref, _starter(ref, args.starter))
        else:
            rep = Report(f"construction match, q={q}")
            rep.add("matches_construction", False)
            reports.append(rep)
    else:
        g = _er(args.q)
        reports = _reports_for(g, args.starter)
    doc = {"ok": all(r.ok for r in reports), "reports": [r.to_dict() for r in reports]}
    _emit(args, "verify.json", exports.dumps(doc))
    for r in reports:
        if not r.ok:
            print(f"FAIL {r.title}: {r.first_failure()}", file=sys.stderr)
            return EXIT_FAIL
    return EXIT_OK


def cmd_layout(args) -> int:
    g = _er(args.q)
    lay = build_layout(g, _starter(g, args.starter))
    doc = exports.layout_dict(lay, enumerate_triangles(g, lay))
    doc["reports"] = [r.to_dict() for r in verify_layout(g, lay.starter)]
    _emit(args, f"layout_q{args.q}_s{lay.starter}.json", exports.dumps(doc))
    return EXIT_OK


def cmd_expand(args) -> int:
    g = _er(args.q)
    lay = build_layout(g, _starter(g, args.starter))
    fn = expand_quadric if args.method == "quadric" else expand_nonquadric
    eg = fn(g, lay, args.n)
    summary = {"vertices": eg.n, "added": eg.n - g.n, "diameter": diameter(eg.graph),
               "aspl": float(avg_shortest_path(eg.graph)), "degrees": degree_summary(eg)}
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    if (args.format or "json") == "edgelist":
        text, ext = exports.edgelist_text(eg.graph), "edgelist"
    else:
        doc = exports.expansion_dict(eg)
        doc["summary"] = summary
        text, ext = exports.dumps(doc), "json"
    _emit(args, f"expand_{args.method}_q{args.q}_n{args.n}.{ext}", text)
    return EXIT_OK


def cmd_route(args) -> int:
    g = _er(args.q)
    rng = np.random.default_rng(args.seed)
    if args.policy == "min":
        r = min_route(g, args.src, args.dst)
    elif args.policy == "valiant":
        r = valiant_route(g, args.src, args.dst, rng)
    else:
        r = compact_valiant_route(g, args.src, args.dst, rng)
    doc = {"policy": r.policy, "hops": list(r.hops), "points": [list(g.points[v]) for v in r.hops]}
    _emit(args, f"route_q{args.q}_{args.src}_{args.dst}.json", exports.dumps(doc))
    return EXIT_OK


def cmd_simulate(args) -> int:
    if not args.config:
        raise UsageError("--config is required")
    cfg, rates = netsim.load_sim_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.p_endpoints is not None:
        cfg = replace(cfg, endpoints_per_router=args.p_endpoints)
    stats = netsim.sweep(cfg, rates)
    z = netsim.zero_load_latency(cfg)
    sat = netsim.saturation_point(rates, stats, z)
    _emit(args, "sweep.csv", netsim.stats_csv(stats))
    print(f"zero_load_latency={z:.3f} saturation={'none' if sat is None else sat}", file=sys.stderr)
    return EXIT_OK


def cmd_analyze(args) -> int:
    kind = args.kind
    if kind == "moore":
        rows = analysis.feasible_radixes(args.k_min, args.k_max)
        _emit(args, "moore.csv", analysis.moore_table_csv(rows))
    elif kind == "bisection":
        g = _er(args.q)
        res = analysis.bisection(g, restarts=args.restarts, seed=args.seed or 0)
        _emit(args, f"bisection_q{args.q}.csv", analysis.bisection_csv([(g.n, res)]))
    elif kind == "resilience":
        g = _er(args.q)
        tr = analysis.resilience_run(g, np.random.default_rng(args.seed or 0),
                                     step=args.step or max(1, g.num_edges // 100))
        _emit(args, f"resilience_q{args.q}.csv", analysis.trace_csv(tr))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int)
    common.add_argument("--p-endpoints", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help=f"output directory (default ${OUT_ENV}, else stdout)")
    common.add_argument("--format", choices=["edgelist", "dot", "json"])

    ap = argparse.ArgumentParser(prog="polarfly", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    sub.add_parser("generate", parents=[common]).set_defaults(fn=cmd_generate)
    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--file")
    p.add_argument("--starter", type=int)
    p.set_defaults(fn=cmd_verify)
    p = sub.add_parser("layout", parents=[common])
    p.add_argument("--starter", type=int)
    p.set_defaults(fn=cmd_layout)
    p = sub.add_parser("expand", parents=[common])
    p.add_argument("--method", choices=["quadric", "nonquadric"], default="quadric")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--starter", type=int)
    p.set_defaults(fn=cmd_expand)
    p = sub.add_parser("route", parents=[common])
    p.add_argument("--src", type=int, required=True)
    p.add_argument("--dst", type=int, required=True)
    p.add_argument("--policy", choices=["min", "valiant", "compact_valiant"], default="min")
    p.set_defaults(fn=cmd_route)
    p = sub.add_parser("simulate", parents=[common])
    p.add_argument("--config")
    p.set_defaults(fn=cmd_simulate)
    p = sub.add_parser("analyze", parents=[common])
    p.add_argument("kind", choices=["moore", "bisection", "resilience"])
    p.add_argument("--k-min", type=int, default=4)
    p.add_argument("--k-max", type=int, default=128)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--step", type=int)
    p.set_defaults(fn=cmd_analyze)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except (UsageError, ConfigError, PolarFlyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
