"""Readers and writers for contact traces, mind files, configs and run outputs.

Contact trace, one contact per line::

    #! lifetime 0 10      optional, default [0, inf)
    #! directed           optional
    #! nodes a b c        optional, declares nodes (and their order) up front
    a b 1 3               u v t_start t_end [label]
    b c 2 inf   # comment

Times are decimal numbers; ``inf`` is accepted for ``t_end``.  Node names
are mapped to dense indices in order of first appearance.
"""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
import math
import os
import re
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable

from . import __version__
from .dynamics import ConfigError, SimConfig, Trajectory
from .epistemic import EpistemicRep, Kind, MindGraph, Proposition
from .intervals import INF, Time, TimeInterval
from .tvg import StaticGraph, TimeVaryingGraph, iter_contacts

_INT_RE = re.compile(r"[+-]?\d+\Z")


class TraceParseError(ValueError):
    def __init__(self, line: int, message: str, source: str = "<trace>") -> None:
        self.line = line
        self.source = source
        super().__init__(f"{source}:{line}: {message}")


class MindFormatError(ValueError):
    pass


def parse_time(token: str) -> Time:
    t = token.strip()
    if t.lower() in ("inf", "+inf", "infinity"):
        return INF
    if _INT_RE.match(t):
        return int(t)
    value = float(t)
    if math.isnan(value):
        raise ValueError("NaN is not a time")
    return value


def format_time(t: Time) -> str:
    if isinstance(t, float) and math.isinf(t):
        return "inf"
    return repr(t)


# -- contact traces -----------------------------------------------------------

def parse_trace(text: str, source: str = "<trace>", lifetime: TimeInterval | None = None,
                directed: bool | None = None) -> TimeVaryingGraph:
    """Parse trace text; keyword arguments override the in-file directives."""
    declared: list[tuple[int, str]] = []
    contacts = []
    file_lifetime = None
    file_directed = False
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#!"):
            words = line[2:].split()
            if not words:
                continue
            key, args = words[0].lower(), words[1:]
            try:
                if key == "lifetime":
                    if len(args) != 2:
                        raise ValueError("expected '#! lifetime START END'")
                    file_lifetime = TimeInterval(parse_time(args[0]), parse_time(args[1]))
                elif key == "directed":
                    file_directed = True
                elif key == "nodes":
                    declared.extend((no, a) for a in args)
                else:
                    raise ValueError(f"unknown directive {key!r}")
            except (ValueError, TypeError) as exc:
                raise TraceParseError(no, str(exc), source) from None
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) not in (4, 5):
            raise TraceParseError(no, f"expected 'u v t_start t_end [label]', got {len(tok)} fields",
                                  source)
        try:
            t1, t2 = parse_time(tok[2]), parse_time(tok[3])
        except ValueError:
            raise TraceParseError(no, f"bad time in {line!r}", source) from None
        contacts.append((no, tok[0], tok[1], t1, t2, tok[4] if len(tok) == 5 else None))

    g = TimeVaryingGraph(directed=file_directed if directed is None else directed,
                         lifetime=lifetime or file_lifetime)
    for no, name in declared:
        g.ensure_node(name)
    for no, u, v, t1, t2, label in contacts:
        try:
            g.add_contact(g.ensure_node(u), g.ensure_node(v), t1, t2, label)
        except (ValueError, TypeError) as exc:
            raise TraceParseError(no, str(exc), source) from None
    return g


def read_trace(path, **kwargs) -> TimeVaryingGraph:
    path = Path(path)
    return parse_trace(path.read_text(), source=str(path), **kwargs)


def format_trace(graph: TimeVaryingGraph) -> str:
    lines = [f"#! lifetime {format_time(graph.lifetime.start)} {format_time(graph.lifetime.end)}"]
    if graph.directed:
        lines.append("#! directed")
    if graph.n_nodes:
        lines.append("#! nodes " + " ".join(graph.label(u) for u in graph.nodes))
    for u, v, t1, t2, label in iter_contacts(graph):
        row = [graph.label(u), graph.label(v), format_time(t1), format_time(t2)]
        if label is not None:
            row.append(label)
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def write_trace(graph: TimeVaryingGraph, path) -> None:
    Path(path).write_text(format_trace(graph))


# -- mind graphs --------------------------------------------------------------

def _json_time(t: Time):
    return None if isinstance(t, float) and math.isinf(t) else t


def _from_json_time(x) -> Time:
    if x is None:
        return INF
    if isinstance(x, str):
        return parse_time(x)
    return x


def mind_to_dict(mind: MindGraph) -> dict[str, Any]:
    g = mind.graph
    topics, nodes = [], []
    for u in g.nodes:
        rep = mind.reps[u]
        p = rep.proposition
        topics.append({"id": p.topic_id, "text": p.text, "kind_tag": p.kind_tag})
        nodes.append({
            "id": g.label(u), "topic": p.topic_id,
            "T_o": rep.objective, "T_s": rep.subjective, "d_c": rep.confidence,
            "designated_kind": rep.designated_kind.value if rep.designated_kind else None,
        })
    correlations = [{"u": g.label(u), "v": g.label(v), "t1": _json_time(t1), "t2": _json_time(t2)}
                    for u, v, t1, t2, _ in iter_contacts(g)]
    return {
        "lifetime": [_json_time(mind.lifetime.start), _json_time(mind.lifetime.end)],
        "topics": topics,
        "nodes": nodes,
        "correlations": correlations,
    }


def mind_from_dict(doc: dict[str, Any]) -> MindGraph:
    try:
        lifetime = None
        if doc.get("lifetime") is not None:
            lifetime = TimeInterval(*(_from_json_time(x) for x in doc["lifetime"]))
        props = {}
        for t in doc.get("topics", []):
            if t["id"] in props:
                raise MindFormatError(f"duplicate topic {t['id']!r}")
            props[t["id"]] = Proposition(t["id"], t.get("text"), t.get("kind_tag"))
        mind = MindGraph(lifetime)
        for nd in doc["nodes"]:
            topic = nd["topic"]
            prop = props.get(topic) or Proposition(topic)
            kind = nd.get("designated_kind")
            rep = EpistemicRep(prop, nd["T_o"], nd["T_s"], nd["d_c"], Kind(kind) if kind else None)
            mind.add_rep(rep, nd.get("id", topic))
        for c in doc.get("correlations", []):
            mind.correlate(c["u"], c["v"], _from_json_time(c["t1"]), _from_json_time(c["t2"]))
    except MindFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MindFormatError(f"invalid mind document: {exc}") from None
    mind.graph.freeze()
    return mind


def read_mind(path) -> MindGraph:
    return mind_from_dict(json.loads(Path(path).read_text()))


def write_mind(mind: MindGraph, path) -> None:
    Path(path).write_text(dump_json(mind_to_dict(mind)))


def read_minds(path) -> dict[str, MindGraph]:
    """Society mind file: ``{"agents": [{"id": label, "mind": {...}}, ...]}``."""
    doc = json.loads(Path(path).read_text())
    try:
        entries = doc["agents"]
    except (KeyError, TypeError):
        raise MindFormatError(f"{path}: expected an object with an 'agents' list") from None
    out = {}
    for entry in entries:
        out[str(entry["id"])] = mind_from_dict(entry["mind"])
    return out


def write_minds(minds: dict[str, MindGraph], path) -> None:
    doc = {"agents": [{"id": label, "mind": mind_to_dict(m)} for label, m in minds.items()]}
    Path(path).write_text(dump_json(doc))


# -- config -------------------------------------------------------------------

SOCIETY_FIELDS = {"kind", "n", "params", "trace", "minds", "sampling"}


def load_config(path) -> tuple[SimConfig, dict[str, Any]]:
    """Read a simulation config; returns the validated SimConfig and the society block.

    Relative ``trace``/``minds`` paths are resolved against the config's
    directory.  Every violated field is reported in one :class:`ConfigError`.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{path}: not valid JSON ({exc})"]) from None
    if not isinstance(data, dict):
        raise ConfigError([f"{path}: top level must be an object"])
    society = data.pop("society", None)
    known = {f for f in SimConfig.__dataclass_fields__}
    errors = [f"{k}: unknown field" for k in sorted(set(data) - known)]
    try:
        cfg = SimConfig.from_dict({k: v for k, v in data.items() if k in known})
        errors.extend(cfg.problems())
    except ConfigError as exc:
        errors.extend(exc.errors)
        cfg = None
    except TypeError as exc:
        errors.append(str(exc))
        cfg = None
    errors.extend(_society_problems(society))
    if errors:
        raise ConfigError(errors)
    society = dict(society)
    for key in ("trace", "minds"):
        if society.get(key) is not None:
            p = Path(society[key])
            society[key] = str(p if p.is_absolute() else path.parent / p)
    return cfg, society


def _society_problems(society) -> list[str]:
    from .dynamics import SAMPLING, SOCIETY_KINDS

    if not isinstance(society, dict):
        return ["society: required object with at least 'kind'"]
    errs = [f"society.{k}: unknown field" for k in sorted(set(society) - SOCIETY_FIELDS)]
    kind = society.get("kind")
    if kind not in SOCIETY_KINDS:
        errs.append(f"society.kind: must be one of {SOCIETY_KINDS}, got {kind!r}")
    if kind == "trace":
        if not society.get("trace"):
            errs.append("society.trace: required for kind 'trace'")
    elif kind is not None:
        n = society.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 2:
            errs.append(f"society.n: must be an integer >= 2, got {n!r}")
    if society.get("sampling") not in (None,) + SAMPLING:
        errs.append(f"society.sampling: must be one of {SAMPLING}")
    if not isinstance(society.get("params", {}), dict):
        errs.append("society.params: must be an object")
    return errs


def config_to_dict(cfg: SimConfig, society: dict[str, Any]) -> dict[str, Any]:
    d = cfg.to_dict()
    d["society"] = society
    return d


# -- run outputs --------------------------------------------------------------

TRAJECTORY_COLUMNS = ["event", "time", "agent_i", "agent_j", "x_i_pre", "x_j_pre",
                      "x_i_post", "x_j_post", "eps_i", "eps_j", "updated_i", "updated_j"]


def format_trajectory_csv(traj: Trajectory) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAJECTORY_COLUMNS)
    lab = traj.labels
    for r in traj.records:
        w.writerow([r.index, format_time(r.time), lab[r.i], lab[r.j],
                    repr(r.x_i_pre), repr(r.x_j_pre), repr(r.x_i_post), repr(r.x_j_post),
                    repr(r.eps_i), repr(r.eps_j), int(r.updated_i), int(r.updated_j)])
    return buf.getvalue()


def read_trajectory_csv(path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def format_snapshots_csv(graph: TimeVaryingGraph, snaps: list[tuple[TimeInterval, StaticGraph]]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["start", "end", "n_edges", "edges"])
    sep = ">" if graph.directed else "-"
    for iv, g in snaps:
        edges = sorted(g.edges)
        w.writerow([format_time(iv.start), format_time(iv.end), len(edges),
                    ";".join(f"{graph.label(a)}{sep}{graph.label(b)}" for a, b in edges)])
    return buf.getvalue()


# -- manifests ----------------------------------------------------------------

def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def config_digest(config: dict[str, Any]) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(canon.encode()).hexdigest()


def write_manifest(path, config: dict[str, Any], seed: int, inputs: Iterable,
                   outputs: Iterable) -> dict[str, Any]:
    """Record digests of the config, inputs and outputs; ``created`` is not digested."""
    doc = {
        "tool_version": __version__,
        "seed": seed,
        "config_digest": config_digest(config),
        "inputs": {str(p): file_digest(p) for p in inputs},
        "outputs": {str(p): file_digest(p) for p in outputs},
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    Path(path).write_text(dump_json(doc))
    return doc


def verify_manifest(path, config: dict[str, Any] | None = None) -> list[str]:
    """Recompute every digest in a manifest; returns a list of mismatches (empty if clean)."""
    doc = json.loads(Path(path).read_text())
    bad = []
    if config is not None and config_digest(config) != doc["config_digest"]:
        bad.append("config")
    for section in ("inputs", "outputs"):
        for p, digest in doc[section].items():
            if not os.path.exists(p) or file_digest(p) != digest:
                bad.append(p)
    return bad


def build_society(block: dict[str, Any], rng):
    """Society from a config's ``society`` block, drawing from ``rng``."""
    from .dynamics import generate_society

    params = dict(block.get("params") or {})
    kind = block["kind"]
    if kind == "trace":
        params["graph"] = read_trace(block["trace"])
        if block.get("minds"):
            params["minds"] = read_minds(block["minds"])
        if block.get("sampling"):
            params["sampling"] = block["sampling"]
        return generate_society("trace", params=params, rng=rng)
    society = generate_society(kind, block["n"], params, rng=rng)
    if block.get("sampling"):
        society.sampling = block["sampling"]
    return society
