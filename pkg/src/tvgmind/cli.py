"""Command line: ``tvgmind analyze | journey | simulate | generate``.

Exit codes: 0 success, 2 usage or input error, 3 negative answer (no
journey).  Errors go to stderr as ``error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import ConfigError, SimConfig, generate_society, run
from .intervals import TimeInterval
from .io import (
    MindFormatError,
    TraceParseError,
    build_society,
    config_to_dict,
    dump_json,
    format_snapshots_csv,
    format_time,
    format_trajectory_csv,
    format_trace,
    load_config,
    parse_time,
    read_trace,
    write_manifest,
    write_minds,
)
from .journeys import foremost_journey, reachability_set
from .tvg import (
    UnknownNodeError,
    edge_characteristic_dates,
    footprint,
    graph_characteristic_dates,
    snapshots,
)

OUTPUT_DIR_ENV = "TVGMIND_OUTPUT_DIR"
EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE = 0, 2, 3


class CLIError(Exception):
    def __init__(self, kind: str, message: str) -> None:
        self.kind = kind
        super().__init__(message)


def _out_dir(arg: str | None) -> Path:
    path = Path(arg or os.environ.get(OUTPUT_DIR_ENV) or "tvgmind-out")
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load_trace(args):
    lifetime = None
    if args.lifetime:
        try:
            lifetime = TimeInterval(parse_time(args.lifetime[0]), parse_time(args.lifetime[1]))
        except (TypeError, ValueError) as exc:
            raise CLIError("usage", f"bad --lifetime: {exc}") from None
    try:
        return read_trace(args.trace, lifetime=lifetime,
                          directed=True if args.directed else None).freeze()
    except FileNotFoundError:
        raise CLIError("io", f"cannot read {args.trace}") from None
    except TraceParseError as exc:
        raise CLIError("parse", str(exc)) from None


def _time(token: str) -> float:
    try:
        return parse_time(token)
    except ValueError:
        raise CLIError("usage", f"bad time {token!r}") from None


# -- analyze ------------------------------------------------------------------

def cmd_analyze(args) -> int:
    g = _load_trace(args)
    fp = footprint(g)
    snaps = snapshots(g)
    report = {
        "nodes": g.n_nodes,
        "footprint_edges": len(fp.edges),
        "footprint_connected": fp.is_connected(),
        "lifetime": [format_time(g.lifetime.start), format_time(g.lifetime.end)],
        "characteristic_dates": [format_time(t) for t in graph_characteristic_dates(g)],
        "snapshot_count": len(snaps),
        "edges": [],
    }
    for e in g.edges:
        ad, dd, st = edge_characteristic_dates(e)
        a, b = e.endpoints
        report["edges"].append({
            "u": g.label(a), "v": g.label(b),
            "appearances": [format_time(t) for t in ad],
            "disappearances": [format_time(t) for t in dd],
        })
    if args.reach:
        node, t = args.reach
        try:
            reach = reachability_set(g, node, _time(t))
        except UnknownNodeError as exc:
            raise CLIError("node", str(exc)) from None
        except ValueError as exc:
            raise CLIError("usage", str(exc)) from None
        report["reach"] = {"source": node, "start": t,
                           "reachable": sorted(g.label(u) for u in reach),
                           "unreachable": sorted(g.label(u) for u in g.nodes if u not in reach)}
    if args.snapshots:
        Path(args.snapshots).write_text(format_snapshots_csv(g, snaps))

    if args.json:
        sys.stdout.write(dump_json(report))
        return EXIT_OK
    print(f"nodes: {report['nodes']}")
    print(f"footprint edges: {report['footprint_edges']}")
    print(f"footprint connected: {str(report['footprint_connected']).lower()}")
    print(f"lifetime: [{report['lifetime'][0]}, {report['lifetime'][1]})")
    print("characteristic dates: " + " ".join(report["characteristic_dates"]))
    print(f"snapshots: {report['snapshot_count']}")
    for e in report["edges"]:
        print(f"edge {e['u']} {e['v']}: AD=[{', '.join(e['appearances'])}] "
              f"DD=[{', '.join(e['disappearances'])}]")
    if "reach" in report:
        r = report["reach"]
        print(f"reachable from {r['source']} at {r['start']}: {' '.join(r['reachable'])}")
        print(f"unreachable from {r['source']} at {r['start']}: {' '.join(r['unreachable'])}")
    return EXIT_OK


# -- journey ------------------------------------------------------------------

def cmd_journey(args) -> int:
    g = _load_trace(args)
    start = g.lifetime.start if args.start is None else _time(args.start)
    try:
        j = foremost_journey(g, args.u, args.v, start)
    except UnknownNodeError as exc:
        raise CLIError("node", str(exc)) from None
    except ValueError as exc:
        raise CLIError("usage", str(exc)) from None
    if j is None:
        print("none")
        return EXIT_NEGATIVE
    nodes = j.nodes
    for k, hop in enumerate(j.hops):
        print(f"hop {g.label(nodes[k])} {g.label(nodes[k + 1])} @ {format_time(hop.departure)}")
    print(f"arrival {format_time(j.arrival)}")
    return EXIT_OK


# -- simulate -----------------------------------------------------------------

def cmd_simulate(args) -> int:
    try:
        cfg, block = load_config(args.config)
    except FileNotFoundError:
        raise CLIError("io", f"cannot read {args.config}") from None
    except ConfigError as exc:
        raise CLIError("config", "; ".join(exc.errors)) from None
    for key in ("trace", "minds"):
        if block.get(key) and not Path(block[key]).is_file():
            raise CLIError("io", f"missing {key} file {block[key]}")
    if args.seed is not None:
        cfg.seed = args.seed
    rng = np.random.default_rng(cfg.seed)
    try:
        society = build_society(block, rng)
    except TraceParseError as exc:
        raise CLIError("parse", str(exc)) from None
    except (MindFormatError, ValueError) as exc:
        raise CLIError("society", str(exc)) from None
    if not args.quiet:
        print(f"simulating {len(society.agents)} agents, mode={cfg.mode}, seed={cfg.seed}",
              file=sys.stderr)
    try:
        traj = run(society, cfg, rng)
    except KeyError as exc:
        raise CLIError("society", str(exc.args[0])) from None

    out = _out_dir(args.out)
    traj_path, summary_path = out / "trajectory.csv", out / "summary.json"
    traj_path.write_text(format_trajectory_csv(traj))
    summary = traj.summary(cfg.cluster_gap)
    summary["mode"] = cfg.mode
    summary["seed"] = cfg.seed
    summary_path.write_text(dump_json(summary))
    inputs = [args.config] + [block[k] for k in ("trace", "minds") if block.get(k)]
    write_manifest(out / "manifest.json", config_to_dict(cfg, block), cfg.seed, inputs,
                   [traj_path, summary_path])
    if not args.quiet:
        print(f"{len(traj)} events, {summary['cluster_count']} clusters, "
              f"converged_at={summary['converged_at']} -> {out}", file=sys.stderr)
    return EXIT_OK


# -- generate -----------------------------------------------------------------

def _param(text: str):
    key, sep, value = text.partition("=")
    if not sep:
        raise CLIError("usage", f"--param expects key=value, got {text!r}")
    try:
        return key, json.loads(value)
    except json.JSONDecodeError:
        return key, value


def cmd_generate(args) -> int:
    params = dict(_param(p) for p in args.param or [])
    rng = np.random.default_rng(args.seed)
    try:
        society = generate_society(args.kind, args.n, params, rng=rng)
    except (ValueError, TypeError) as exc:
        raise CLIError("params", str(exc)) from None
    out = _out_dir(args.out)
    (out / "trace.txt").write_text(format_trace(society.contacts))
    write_minds({a.label: a.mind for a in society.agents}, out / "minds.json")
    cfg = SimConfig(seed=args.seed, mode=args.mode,
                    topic_id=params.get("topic_id", "topic"))
    block = {"kind": "trace", "trace": "trace.txt", "minds": "minds.json",
             "sampling": society.sampling}
    (out / "config.json").write_text(dump_json(config_to_dict(cfg, block)))
    print(f"wrote {out / 'trace.txt'}, {out / 'minds.json'}, {out / 'config.json'}")
    return EXIT_OK


# -- entry point --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError("usage", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tvgmind", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tvgmind {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def trace_args(sp):
        sp.add_argument("trace", help="contact trace file")
        sp.add_argument("--lifetime", nargs=2, metavar=("START", "END"),
                        help="override the trace's lifetime")
        sp.add_argument("--directed", action="store_true", help="treat contacts as directed")

    a = sub.add_parser("analyze", help="footprint, characteristic dates and snapshots")
    trace_args(a)
    a.add_argument("--snapshots", metavar="CSV", help="export the snapshot sequence")
    a.add_argument("--reach", nargs=2, metavar=("NODE", "T"), help="reachability set from NODE at T")
    a.add_argument("--json", action="store_true", help="machine-readable report")
    a.set_defaults(func=cmd_analyze)

    j = sub.add_parser("journey", help="foremost journey between two nodes")
    trace_args(j)
    j.add_argument("u")
    j.add_argument("v")
    j.add_argument("--start", help="earliest departure (default: lifetime start)")
    j.set_defaults(func=cmd_journey)

    s = sub.add_parser("simulate", help="run opinion dynamics from a config file")
    s.add_argument("config")
    s.add_argument("--out", help=f"output directory (default ${OUTPUT_DIR_ENV} or ./tvgmind-out)")
    s.add_argument("--seed", type=int, help="override the config seed")
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(func=cmd_simulate)

    gsp = sub.add_parser("generate", help="write a synthetic society (trace, minds, config)")
    gsp.add_argument("kind", choices=["complete_static", "random_pairwise", "ring_static"])
    gsp.add_argument("--n", type=int, required=True)
    gsp.add_argument("--seed", type=int, default=0)
    gsp.add_argument("--mode", choices=["classic", "cognitive"], default="classic")
    gsp.add_argument("--param", action="append", metavar="KEY=VALUE",
                     help="society parameter, value parsed as JSON when possible")
    gsp.add_argument("--out")
    gsp.set_defaults(func=cmd_generate)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
