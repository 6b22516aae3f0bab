"""Epistemic representations, mind graphs and endogenous tolerance.

A representation carries a proposition plus three numbers in [0, 1]: the
objective truth value, the subjective (perceived) truth value and the
degree of confidence.  A :class:`MindGraph` is one agent's undirected
time-varying graph of representations linked by timed correlations.

When an external event targets a topic, the agent activates every
representation reachable by a journey from the topic node.  The mean
confidence of that component, damped by its size, is the agent's
*resistance*; tolerance is what resistance leaves of ``eps_max``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable

from .intervals import Time, TimeInterval
from .journeys import earliest_arrival_times
from .tvg import NodeRef, TimeVaryingGraph

DEFAULT_K = 3.0


class Kind(str, Enum):
    KNOWLEDGE = "knowledge"
    BELIEF = "belief"
    OPINION = "opinion"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class Proposition:
    topic_id: str
    text: str | None = None
    kind_tag: str | None = None  # "factual" | "evaluative", inert metadata

    def __post_init__(self) -> None:
        if self.kind_tag not in (None, "factual", "evaluative"):
            raise ValueError(f"kind_tag must be 'factual' or 'evaluative', got {self.kind_tag!r}")


def _unit(name: str, x: float) -> None:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not 0 <= x <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")


@dataclass(frozen=True)
class EpistemicRep:
    proposition: Proposition
    objective: float
    subjective: float
    confidence: float
    designated_kind: Kind | None = None

    def __post_init__(self) -> None:
        _unit("objective truth value", self.objective)
        _unit("subjective truth value", self.subjective)
        _unit("confidence", self.confidence)
        if self.designated_kind is not None:
            object.__setattr__(self, "designated_kind", Kind(self.designated_kind))

    @property
    def topic_id(self) -> str:
        return self.proposition.topic_id


@dataclass(frozen=True)
class KindSet:
    knowledge: bool
    belief: bool
    opinion: bool
    primary: Kind

    @property
    def flags(self) -> frozenset[Kind]:
        return frozenset(k for k, on in ((Kind.KNOWLEDGE, self.knowledge),
                                         (Kind.BELIEF, self.belief),
                                         (Kind.OPINION, self.opinion)) if on)


def classify(rep: EpistemicRep, tau: float = 0.0) -> KindSet:
    """Knowledge / belief / opinion flags from the two truth values.

    knowledge: ``|T_o - T_s| <= tau``; belief: ``0 < T_o < 1``;
    opinion: ``0 <= T_o < 1``.  The ranges overlap, so ``primary`` picks the
    first set flag in that order.
    """
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau!r}")
    to, ts = rep.objective, rep.subjective
    knowledge = abs(to - ts) <= tau
    belief = 0 < to < 1 and 0 <= ts <= 1
    opinion = 0 <= to < 1 and 0 <= ts <= 1
    if knowledge:
        primary = Kind.KNOWLEDGE
    elif belief:
        primary = Kind.BELIEF
    elif opinion:
        primary = Kind.OPINION
    else:
        primary = Kind.UNCLASSIFIED
    return KindSet(knowledge, belief, opinion, primary)


@dataclass(frozen=True)
class ExternalEvent:
    topic_id: str
    time: Time
    source: str | None = None


class MindGraph:
    """One agent's representations over an undirected time-varying graph.

    Node labels are the representation ids; each topic has at most one node.
    Representations are swapped out whole (they are frozen), the correlation
    structure is shared between copies.
    """

    def __init__(self, lifetime: TimeInterval | None = None) -> None:
        self.graph = TimeVaryingGraph(directed=False, lifetime=lifetime)
        self.reps: dict[int, EpistemicRep] = {}
        self.topics: dict[str, int] = {}

    @property
    def lifetime(self) -> TimeInterval:
        return self.graph.lifetime

    def add_rep(self, rep: EpistemicRep, node_id: str | None = None) -> int:
        topic = rep.topic_id
        if topic in self.topics:
            raise ValueError(f"topic {topic!r} already has a node in this mind")
        u = self.graph.add_node(node_id if node_id is not None else topic)
        self.reps[u] = rep
        self.topics[topic] = u
        return u

    def correlate(self, u: NodeRef, v: NodeRef, t1: Time, t2: Time) -> None:
        self.graph.add_contact(u, v, t1, t2)

    def topic_node(self, topic_id: str) -> int:
        try:
            return self.topics[topic_id]
        except KeyError:
            raise KeyError(f"no representation for topic {topic_id!r}") from None

    def rep(self, node: NodeRef) -> EpistemicRep:
        return self.reps[self.graph.index(node)]

    def rep_for_topic(self, topic_id: str) -> EpistemicRep:
        return self.reps[self.topic_node(topic_id)]

    def set_rep(self, node: NodeRef, rep: EpistemicRep) -> None:
        u = self.graph.index(node)
        if rep.topic_id != self.reps[u].topic_id:
            raise ValueError("replacement representation must keep its topic")
        self.reps[u] = rep

    def copy(self) -> MindGraph:
        other = MindGraph.__new__(MindGraph)
        other.graph = self.graph
        other.reps = dict(self.reps)
        other.topics = dict(self.topics)
        return other

    def __len__(self) -> int:
        return self.graph.n_nodes


def activate(mind: MindGraph, event: ExternalEvent,
             window: TimeInterval | None = None) -> frozenset[int]:
    """Nodes reachable by journeys from the event's topic node inside ``window``."""
    seed = mind.topic_node(event.topic_id)
    if event.time not in mind.lifetime:
        raise ValueError(f"event time {event.time} outside mind lifetime {mind.lifetime}")
    window = window or mind.lifetime
    if not mind.lifetime.contains_interval(window):
        raise ValueError(f"window {window} outside mind lifetime {mind.lifetime}")
    return frozenset(earliest_arrival_times(mind.graph, seed, window.start, window.end))


def resistance(mind: MindGraph, component: Iterable[int], k: float = DEFAULT_K) -> float:
    """Mean confidence over ``component`` times the saturation ``n / (n + k)``.

    More supporting representations push resistance toward the mean
    confidence; ``k = 0`` returns the plain mean.
    """
    nodes = list(component)
    if not nodes:
        raise ValueError("resistance of an empty component")
    if k < 0 or math.isnan(k):
        raise ValueError(f"k must be non-negative, got {k!r}")
    n = len(nodes)
    mean = math.fsum(mind.reps[u].confidence for u in nodes) / n
    return mean * (n / (n + k))


def tolerance_of(mind: MindGraph, event: ExternalEvent, eps_max: float,
                 k: float = DEFAULT_K, window: TimeInterval | None = None) -> float:
    _unit("eps_max", eps_max)
    r = resistance(mind, activate(mind, event, window), k)
    return eps_max * (1 - r)


def confidence_update(rep: EpistemicRep, agreed: bool, delta_plus: float = 0.1,
                      delta_minus: float = 0.0) -> EpistemicRep:
    """Raise confidence toward 1 on agreement, shrink it toward 0 otherwise."""
    _unit("delta_plus", delta_plus)
    _unit("delta_minus", delta_minus)
    dc = rep.confidence
    if agreed:
        dc = dc + delta_plus * (1 - dc)
    else:
        dc = dc * (1 - delta_minus)
    return replace(rep, confidence=min(max(dc, 0.0), 1.0))
