"""Bounded-confidence opinion dynamics over a social time-varying graph.

Each agent owns a :class:`~tvgmind.epistemic.MindGraph`; its opinion on the
simulated topic is the subjective truth value of the topic representation.
Two agents meeting at time ``t`` compare opinions, and each one moves toward
the other by ``mu`` times the difference when the difference is strictly
below its own tolerance.  In ``classic`` mode the tolerance is the fixed
``eps``; in ``cognitive`` mode it is recomputed at every interaction from
the agent's activated mind (see :func:`~tvgmind.epistemic.tolerance_of`).

Randomness comes from one ``numpy.random.Generator``.  Society generation
draws from it first (initial opinions, then support representations, then
random contacts), and per-tick contact sampling draws from it afterwards.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace
from itertools import combinations
from typing import Any, Iterator

import numpy as np

from . import metrics
from .epistemic import (
    DEFAULT_K,
    EpistemicRep,
    ExternalEvent,
    Kind,
    MindGraph,
    Proposition,
    confidence_update,
    tolerance_of,
)
from .intervals import INF, Time, TimeInterval
from .tvg import TimeVaryingGraph, edge_characteristic_dates, snapshots

MODES = ("classic", "cognitive")
SAMPLING = ("appearance", "per_tick")
SOCIETY_KINDS = ("complete_static", "random_pairwise", "ring_static", "trace")


class ConfigError(ValueError):
    """Invalid simulation configuration; ``errors`` lists every violation."""

    def __init__(self, errors: list[str]) -> None:
        self.errors = errors
        super().__init__("; ".join(errors))


@dataclass
class Agent:
    id: int
    label: str
    mind: MindGraph

    def opinion(self, topic_id: str) -> float:
        return self.mind.rep_for_topic(topic_id).subjective

    def confidence(self, topic_id: str) -> float:
        return self.mind.rep_for_topic(topic_id).confidence


@dataclass
class Society:
    agents: list[Agent]
    contacts: TimeVaryingGraph
    sampling: str = "appearance"

    def __post_init__(self) -> None:
        if self.contacts.n_nodes != len(self.agents):
            raise ValueError("contact graph nodes must match agents one to one")
        if self.sampling not in SAMPLING:
            raise ValueError(f"sampling must be one of {SAMPLING}, got {self.sampling!r}")

    def opinions(self, topic_id: str) -> list[float]:
        return [a.opinion(topic_id) for a in self.agents]


@dataclass
class SimConfig:
    topic_id: str = "topic"
    mode: str = "classic"
    eps: float = 0.2
    eps_max: float = 0.2
    k: float = DEFAULT_K
    activation_window: tuple[Time, Time] | None = None
    mu: float = 0.5
    delta_plus: float = 0.1
    delta_minus: float = 0.0
    seed: int = 0
    max_events: int = 100_000
    conv_tol: float = 1e-9
    conv_window: int | None = 1000
    cluster_gap: float = 0.01

    def problems(self) -> list[str]:
        errs = []
        if self.mode not in MODES:
            errs.append(f"mode: must be one of {MODES}, got {self.mode!r}")
        for name in ("eps", "eps_max", "mu", "delta_plus", "delta_minus"):
            v = getattr(self, name)
            if not _is_real(v) or not 0 <= v <= 1:
                errs.append(f"{name}: must lie in [0, 1], got {v!r}")
        if not _is_real(self.k) or self.k < 0:
            errs.append(f"k: must be a non-negative real, got {self.k!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            errs.append(f"seed: must be a non-negative integer, got {self.seed!r}")
        if not isinstance(self.max_events, int) or self.max_events < 0:
            errs.append(f"max_events: must be a non-negative integer, got {self.max_events!r}")
        if not _is_real(self.conv_tol) or self.conv_tol <= 0:
            errs.append(f"conv_tol: must be positive, got {self.conv_tol!r}")
        if self.conv_window is not None and (not isinstance(self.conv_window, int)
                                             or self.conv_window < 1):
            errs.append(f"conv_window: must be a positive integer or null, got {self.conv_window!r}")
        if not _is_real(self.cluster_gap) or self.cluster_gap <= 0:
            errs.append(f"cluster_gap: must be positive, got {self.cluster_gap!r}")
        if self.activation_window is not None:
            try:
                TimeInterval(*self.activation_window)
            except (TypeError, ValueError) as exc:
                errs.append(f"activation_window: {exc}")
        if not isinstance(self.topic_id, str) or not self.topic_id:
            errs.append(f"topic_id: must be a non-empty string, got {self.topic_id!r}")
        return errs

    def validate(self) -> SimConfig:
        errs = self.problems()
        if errs:
            raise ConfigError(errs)
        return self

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SimConfig:
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError([f"{name}: unknown field" for name in unknown])
        cfg = cls(**data)
        if cfg.activation_window is not None:
            cfg.activation_window = tuple(INF if x is None else x for x in cfg.activation_window)
        return cfg

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        if self.activation_window is not None:
            d["activation_window"] = [None if math.isinf(x) else x for x in self.activation_window]
        return d


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and not math.isnan(x)


@dataclass
class EventRecord:
    index: int
    time: Time
    i: int
    j: int
    x_i_pre: float
    x_j_pre: float
    x_i_post: float
    x_j_post: float
    dc_i_pre: float
    dc_j_pre: float
    dc_i_post: float
    dc_j_post: float
    eps_i: float
    eps_j: float
    updated_i: bool
    updated_j: bool


@dataclass
class Trajectory:
    labels: list[str]
    records: list[EventRecord]
    initial_opinions: list[float]
    initial_confidences: list[float]
    final_opinions: list[float]
    final_confidences: list[float]
    converged_at: int | None = None
    society: Society | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.records)

    def opinion_matrix(self) -> np.ndarray:
        """Opinions after every event, shape ``(len + 1, n_agents)``."""
        x = np.array(self.initial_opinions, dtype=float)
        out = np.empty((len(self.records) + 1, len(x)))
        out[0] = x
        for r, rec in enumerate(self.records, start=1):
            x[rec.i] = rec.x_i_post
            x[rec.j] = rec.x_j_post
            out[r] = x
        return out

    def summary(self, gap: float = 0.01) -> dict[str, Any]:
        rep = metrics.clusters(self.final_opinions, gap, ids=self.labels)
        lo, hi, mean, var = metrics.spread(self.final_opinions)
        return {
            "n_agents": len(self.labels),
            "n_events": len(self.records),
            "converged_at": self.converged_at,
            "initial_mean": float(np.mean(self.initial_opinions)),
            "final_mean": mean,
            "final_min": lo,
            "final_max": hi,
            "final_variance": var,
            "cluster_gap": gap,
            "cluster_count": rep.count,
            "cluster_centroids": rep.centroids,
            "cluster_members": rep.members,
            "final_opinions": dict(zip(self.labels, self.final_opinions)),
            "final_confidences": dict(zip(self.labels, self.final_confidences)),
        }


# -- scheduling ---------------------------------------------------------------

def contact_schedule(society: Society) -> list[tuple[Time, tuple[int, int]]]:
    """One event per maximal presence interval of each social edge, at its appearance date."""
    events = []
    for e in society.contacts.edges:
        i, j = sorted(e.endpoints)
        for t in edge_characteristic_dates(e)[0]:
            events.append((t, (i, j)))
    events.sort()
    return events


def sampled_schedule(society: Society, rng: np.random.Generator,
                     limit: int) -> Iterator[tuple[Time, tuple[int, int]]]:
    """One uniformly drawn present pair per integer tick, at most ``limit`` events.

    Ticks with no present edge are skipped; the stream ends when the
    lifetime ends or no edge is ever present again.
    """
    snaps = snapshots(society.contacts)
    pairs = [sorted(tuple(sorted(p)) for p in g.edges) for _, g in snaps]
    emitted = 0
    t = math.ceil(society.contacts.lifetime.start)
    for k, (iv, _) in enumerate(snaps):
        if not pairs[k] and all(not p for p in pairs[k + 1:]):
            return
        t = max(t, math.ceil(iv.start))
        while t < iv.end:
            if emitted >= limit:
                return
            if not pairs[k]:
                break
            idx = int(rng.integers(len(pairs[k])))
            yield t, pairs[k][idx]
            emitted += 1
            t += 1


# -- interaction --------------------------------------------------------------

def _tolerance(agent: Agent, t: Time, config: SimConfig) -> float:
    if config.mode == "classic":
        return config.eps
    window = TimeInterval(*config.activation_window) if config.activation_window else None
    return tolerance_of(agent.mind, ExternalEvent(config.topic_id, t), config.eps_max,
                        config.k, window)


def interact(a: Agent, b: Agent, t: Time, config: SimConfig, index: int = 0) -> EventRecord:
    """Apply one bounded-confidence encounter in place and return its record.

    Both tolerances and both opinions are read before either agent changes.
    """
    topic = config.topic_id
    ra, rb = a.mind.rep_for_topic(topic), b.mind.rep_for_topic(topic)
    xa, xb = ra.subjective, rb.subjective
    eps_a, eps_b = _tolerance(a, t, config), _tolerance(b, t, config)
    diff = abs(xb - xa)
    acc_a, acc_b = diff < eps_a, diff < eps_b

    na = confidence_update(ra, acc_a, config.delta_plus, config.delta_minus)
    nb = confidence_update(rb, acc_b, config.delta_plus, config.delta_minus)
    if acc_a:
        na = replace(na, subjective=xa + config.mu * (xb - xa))
    if acc_b:
        nb = replace(nb, subjective=xb + config.mu * (xa - xb))
    a.mind.set_rep(a.mind.topic_node(topic), na)
    b.mind.set_rep(b.mind.topic_node(topic), nb)
    return EventRecord(index, t, a.id, b.id, xa, xb, na.subjective, nb.subjective,
                       ra.confidence, rb.confidence, na.confidence, nb.confidence,
                       eps_a, eps_b, acc_a, acc_b)


def _quiet(rec: EventRecord, tol: float) -> bool:
    return ((not rec.updated_i or abs(rec.x_i_post - rec.x_i_pre) < tol)
            and (not rec.updated_j or abs(rec.x_j_post - rec.x_j_pre) < tol))


def run(society: Society, config: SimConfig, rng: np.random.Generator | None = None) -> Trajectory:
    """Play the society's contact schedule through :func:`interact`.

    The society is not modified: agents work on copies of their minds.
    ``rng`` is only consumed by per-tick sampling; when omitted a generator
    seeded with ``config.seed`` is used.
    """
    config.validate()
    topic = config.topic_id
    for ag in society.agents:
        ag.mind.topic_node(topic)
    agents = [Agent(a.id, a.label, a.mind.copy()) for a in society.agents]
    x0 = [a.opinion(topic) for a in agents]
    c0 = [a.confidence(topic) for a in agents]

    if society.sampling == "per_tick":
        if rng is None:
            rng = np.random.default_rng(config.seed)
        schedule = sampled_schedule(society, rng, config.max_events)
    else:
        schedule = iter(contact_schedule(society)[:config.max_events])

    records: list[EventRecord] = []
    quiet = 0
    converged_at = None
    for idx, (t, (i, j)) in enumerate(schedule):
        rec = interact(agents[i], agents[j], t, config, idx)
        records.append(rec)
        if config.conv_window is not None:
            quiet = quiet + 1 if _quiet(rec, config.conv_tol) else 0
            if quiet >= config.conv_window:
                converged_at = idx
                break

    return Trajectory(
        labels=[a.label for a in agents],
        records=records,
        initial_opinions=x0,
        initial_confidences=c0,
        final_opinions=[a.opinion(topic) for a in agents],
        final_confidences=[a.confidence(topic) for a in agents],
        converged_at=converged_at,
        society=Society(agents, society.contacts, society.sampling),
    )


# -- synthetic societies ------------------------------------------------------

def build_mind(topic_id: str, opinion: float, topic_confidence: float = 0.0,
               supports: list[tuple[float, float]] = (), correlation: str = "star",
               lifetime: TimeInterval | None = None) -> MindGraph:
    """A mind with one opinion node plus belief nodes ``(T_s, d_c)`` correlated to it.

    ``correlation`` is ``"star"`` (every support linked to the topic) or
    ``"chain"`` (topic - s1 - s2 - ...), all links present over the whole
    lifetime.
    """
    mind = MindGraph(lifetime)
    mind.add_rep(EpistemicRep(Proposition(topic_id), 0.0, opinion, topic_confidence,
                              Kind.OPINION))
    prev = topic_id
    for n, (ts, dc) in enumerate(supports, start=1):
        sid = f"{topic_id}.s{n}"
        mind.add_rep(EpistemicRep(Proposition(sid), 0.5, ts, dc, Kind.BELIEF))
        anchor = topic_id if correlation == "star" else prev
        mind.correlate(anchor, sid, mind.lifetime.start, mind.lifetime.end)
        prev = sid
    return mind


_MIND_KEYS = {"support_nodes", "support_dc", "topic_dc", "correlation", "topic_id"}
_KIND_KEYS = {
    "complete_static": set(),
    "ring_static": set(),
    "random_pairwise": {"m", "horizon", "duration"},
    "trace": {"graph", "minds", "sampling"},
}


def _draw_dc(rng: np.random.Generator, spec) -> float:
    if isinstance(spec, (list, tuple)):
        lo, hi = spec
        return float(rng.uniform(lo, hi))
    return float(spec)


def generate_society(kind: str, n: int | None = None, params: dict | None = None,
                     seed: int | None = None, rng: np.random.Generator | None = None) -> Society:
    """Synthetic society of ``n`` agents holding one opinion each.

    ``params`` (all optional): ``support_nodes`` (int), ``support_dc``
    (float or ``[lo, hi]``), ``topic_dc``, ``correlation`` and ``topic_id``
    shape the minds; ``random_pairwise`` also reads ``m`` (contacts,
    default ``5 n``), ``horizon`` (default ``m``) and ``duration``
    (default 1).  ``trace`` takes a prebuilt ``graph`` and optionally
    ``minds`` (label -> MindGraph) and ``sampling``.
    """
    params = dict(params or {})
    if kind not in SOCIETY_KINDS:
        raise ValueError(f"unknown society kind {kind!r}; expected one of {SOCIETY_KINDS}")
    unknown = set(params) - _MIND_KEYS - _KIND_KEYS[kind]
    if unknown:
        raise ValueError(f"unknown parameters for {kind}: {sorted(unknown)}")
    if rng is None:
        rng = np.random.default_rng(seed)
    topic = params.get("topic_id", "topic")

    if kind == "trace":
        graph = params["graph"]
        n = graph.n_nodes
        if n < 2:
            raise ValueError("a society needs at least 2 agents")
        minds = params.get("minds")
        labels = [graph.label(u) for u in graph.nodes]
        if minds is None:
            minds = dict(zip(labels, _default_minds(n, topic, params, rng)))
        missing = [lab for lab in labels if lab not in minds]
        if missing:
            raise ValueError(f"no mind for agents {missing}")
        agents = [Agent(u, lab, minds[lab]) for u, lab in enumerate(labels)]
        return Society(agents, graph.freeze(), params.get("sampling", "appearance"))

    if not isinstance(n, int) or n < 2:
        raise ValueError(f"a society needs at least 2 agents, got n={n!r}")
    minds = _default_minds(n, topic, params, rng)

    if kind == "random_pairwise":
        m = int(params.get("m", 5 * n))
        horizon = int(params.get("horizon", m))
        duration = params.get("duration", 1)
        if m < 0 or horizon < 1 or not duration > 0:
            raise ValueError("random_pairwise needs m >= 0, horizon >= 1, duration > 0")
        graph = TimeVaryingGraph(lifetime=TimeInterval(0, horizon + duration))
        for u in range(n):
            graph.add_node(str(u))
        for _ in range(m):
            i, j = rng.choice(n, size=2, replace=False)
            t = int(rng.integers(horizon))
            graph.add_contact(int(i), int(j), t, t + duration)
        sampling = "appearance"
    else:
        graph = TimeVaryingGraph()
        for u in range(n):
            graph.add_node(str(u))
        if kind == "complete_static":
            pairs = combinations(range(n), 2)
        else:
            pairs = ((u, (u + 1) % n) for u in range(n))
        for i, j in pairs:
            if graph.edge(i, j) is None:
                graph.add_contact(i, j, 0, INF)
        sampling = "per_tick"

    agents = [Agent(u, str(u), minds[u]) for u in range(n)]
    return Society(agents, graph.freeze(), sampling)


def _default_minds(n: int, topic: str, params: dict, rng: np.random.Generator) -> list[MindGraph]:
    n_support = int(params.get("support_nodes", 0))
    if n_support < 0:
        raise ValueError("support_nodes must be non-negative")
    correlation = params.get("correlation", "star")
    if correlation not in ("star", "chain"):
        raise ValueError(f"correlation must be 'star' or 'chain', got {correlation!r}")
    opinions = rng.uniform(0.0, 1.0, size=n)
    minds = []
    for u in range(n):
        supports = [(float(rng.uniform()), _draw_dc(rng, params.get("support_dc", 0.0)))
                    for _ in range(n_support)]
        minds.append(build_mind(topic, float(opinions[u]), _draw_dc(rng, params.get("topic_dc", 0.0)),
                                supports, correlation))
    return minds
