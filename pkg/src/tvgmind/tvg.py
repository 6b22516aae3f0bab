"""Time-varying graphs: interval-based edge presence, latency and footprints.

Nodes are dense integer indices with optional unique text labels; every
function taking a node accepts either form.  Edges of undirected graphs are
keyed by ``(min, max)``.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .intervals import INF, IntervalSet, Time, TimeInterval

NodeRef = Union[int, str]


class TVGError(Exception):
    """Base class for graph errors."""


class UnknownNodeError(TVGError, KeyError):
    def __str__(self) -> str:
        return f"unknown node {self.args[0]!r}"


class UnknownEdgeError(TVGError, KeyError):
    def __str__(self) -> str:
        return f"unknown edge {self.args[0]!r}"


class UnavailableEdgeError(TVGError, ValueError):
    """Latency queried at an instant where the edge is absent."""


class FrozenGraphError(TVGError):
    pass


@dataclass(eq=False)
class TemporalEdge:
    endpoints: tuple[int, int]
    presence: IntervalSet = field(default_factory=IntervalSet)
    latency_pieces: list[tuple[TimeInterval, float]] = field(default_factory=list)
    label: str | None = None
    _regions: list | None = field(default=None, repr=False)
    _region_starts: list | None = field(default=None, repr=False)

    def regions(self) -> list[tuple[Time, Time, float]]:
        """Presence split into constant-latency pieces ``(start, end, latency)``."""
        if self._regions is None:
            cuts = sorted(self.latency_pieces, key=lambda p: p[0].start)
            out = []
            for s, e in self.presence.pairs:
                cur = s
                for iv, d in cuts:
                    if iv.end <= cur or iv.start >= e:
                        continue
                    if iv.start > cur:
                        out.append((cur, iv.start, 0))
                    out.append((max(cur, iv.start), min(e, iv.end), d))
                    cur = min(e, iv.end)
                if cur < e:
                    out.append((cur, e, 0))
            self._regions = out
            self._region_starts = [r[0] for r in out]
        return self._regions

    def region_starts(self) -> list[Time]:
        self.regions()
        return self._region_starts

    def other(self, node: int) -> int:
        u, v = self.endpoints
        return v if node == u else u


@dataclass(frozen=True)
class StaticGraph:
    nodes: frozenset
    edges: frozenset
    directed: bool = False

    def neighbors(self, u: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == u:
                out.add(b)
            elif b == u and not self.directed:
                out.add(a)
        return out

    def is_connected(self) -> bool:
        """Connectivity of the undirected version (weak connectivity if directed)."""
        if not self.nodes:
            return True
        adj: dict[int, set[int]] = {u: set() for u in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        start = next(iter(self.nodes))
        seen, stack = {start}, [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.nodes)


class TimeVaryingGraph:
    """A set of nodes plus edges whose availability varies over the lifetime.

    Build it with :meth:`add_node` / :meth:`add_contact`, then optionally
    :meth:`freeze` it before sharing.
    """

    def __init__(self, directed: bool = False, lifetime: TimeInterval | None = None) -> None:
        self.directed = directed
        self.lifetime = lifetime if lifetime is not None else TimeInterval(0, INF)
        self._labels: list[str | None] = []
        self._by_label: dict[str, int] = {}
        self._edges: dict[tuple[int, int], TemporalEdge] = {}
        self._out: list[list[TemporalEdge]] = []
        self._frozen = False

    # -- nodes ---------------------------------------------------------------

    def add_node(self, label: str | None = None) -> int:
        self._check_mutable()
        if label is not None:
            if label in self._by_label:
                raise ValueError(f"duplicate node label {label!r}")
            self._by_label[label] = len(self._labels)
        self._labels.append(label)
        self._out.append([])
        return len(self._labels) - 1

    def ensure_node(self, label: str) -> int:
        if label in self._by_label:
            return self._by_label[label]
        return self.add_node(label)

    def index(self, ref: NodeRef) -> int:
        if isinstance(ref, str):
            try:
                return self._by_label[ref]
            except KeyError:
                raise UnknownNodeError(ref) from None
        if isinstance(ref, bool) or not isinstance(ref, int) or not 0 <= ref < len(self._labels):
            raise UnknownNodeError(ref)
        return ref

    def label(self, u: int) -> str:
        lab = self._labels[u]
        return str(u) if lab is None else lab

    @property
    def nodes(self) -> range:
        return range(len(self._labels))

    @property
    def n_nodes(self) -> int:
        return len(self._labels)

    # -- edges ---------------------------------------------------------------

    def _key(self, u: int, v: int) -> tuple[int, int]:
        if self.directed or u < v:
            return (u, v)
        return (v, u)

    def edge(self, u: NodeRef, v: NodeRef) -> TemporalEdge | None:
        return self._edges.get(self._key(self.index(u), self.index(v)))

    @property
    def edges(self) -> list[TemporalEdge]:
        return list(self._edges.values())

    def out_edges(self, u: int) -> list[TemporalEdge]:
        """Edges that can be crossed leaving ``u``."""
        return self._out[u]

    def declare_edge(self, u: NodeRef, v: NodeRef, label: str | None = None) -> TemporalEdge:
        """Create the edge (u, v) with empty presence if it does not exist yet."""
        self._check_mutable()
        a, b = self.index(u), self.index(v)
        if a == b:
            raise ValueError(f"self-loop on node {self.label(a)!r}")
        key = self._key(a, b)
        e = self._edges.get(key)
        if e is None:
            e = TemporalEdge(key, label=label)
            self._edges[key] = e
            self._out[key[0]].append(e)
            if not self.directed:
                self._out[key[1]].append(e)
        elif label is not None:
            e.label = label
        return e

    def add_contact(self, u: NodeRef, v: NodeRef, t1: Time, t2: Time,
                    label: str | None = None) -> TemporalEdge:
        """Record that (u, v) is present over ``[t1, t2)``; overlapping contacts merge."""
        self._check_mutable()
        iv = TimeInterval(t1, t2)
        if not self.lifetime.contains_interval(iv):
            raise ValueError(f"contact {iv} outside lifetime {self.lifetime}")
        e = self.declare_edge(u, v, label)
        e.presence = e.presence | iv
        e._regions = None
        return e

    def set_latency(self, u: NodeRef, v: NodeRef, t1: Time, t2: Time, duration: float) -> None:
        self._check_mutable()
        e = self.edge(u, v)
        if e is None:
            raise UnknownEdgeError((u, v))
        iv = TimeInterval(t1, t2)
        if duration < 0 or math.isnan(duration):
            raise ValueError(f"latency must be non-negative, got {duration!r}")
        if not e.presence.covers(iv):
            raise ValueError(f"latency piece {iv} not contained in presence {e.presence}")
        for other, _ in e.latency_pieces:
            if other.start < iv.end and iv.start < other.end:
                raise ValueError(f"latency piece {iv} overlaps {other}")
        e.latency_pieces.append((iv, duration))
        e.latency_pieces.sort(key=lambda p: p[0].start)
        e._regions = None

    def presence(self, u: NodeRef, v: NodeRef, t: Time) -> bool:
        e = self.edge(u, v)
        return e is not None and t in e.presence

    # -- lifecycle -----------------------------------------------------------

    def freeze(self) -> TimeVaryingGraph:
        for e in self._edges.values():
            e.regions()
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def _check_mutable(self) -> None:
        if self._frozen:
            raise FrozenGraphError("graph is frozen")

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return (f"TimeVaryingGraph({kind}, {self.n_nodes} nodes, "
                f"{len(self._edges)} edges, lifetime={self.lifetime})")


def latency(edge: TemporalEdge, t: Time) -> float:
    """Crossing time of ``edge`` when departing at ``t``."""
    if t not in edge.presence:
        raise UnavailableEdgeError(f"edge {edge.endpoints} is not present at t={t}")
    pieces = edge.latency_pieces
    i = bisect_right([iv.start for iv, _ in pieces], t) - 1
    if i >= 0 and t in pieces[i][0]:
        return pieces[i][1]
    return 0


def available_dates(edge: TemporalEdge) -> IntervalSet:
    return edge.presence


def edge_characteristic_dates(edge: TemporalEdge) -> tuple[list, list, list]:
    """Appearance dates, disappearance dates and their merged sorted sequence."""
    appear = edge.presence.starts
    disappear = edge.presence.ends
    return appear, disappear, sorted(appear + disappear)


def footprint(graph: TimeVaryingGraph) -> StaticGraph:
    return StaticGraph(
        frozenset(graph.nodes),
        frozenset(k for k, e in graph._edges.items() if e.presence),
        graph.directed,
    )


def graph_characteristic_dates(graph: TimeVaryingGraph) -> list:
    dates = set()
    for e in graph.edges:
        dates.update(edge_characteristic_dates(e)[2])
    return sorted(dates)


def snapshots(graph: TimeVaryingGraph) -> list[tuple[TimeInterval, StaticGraph]]:
    """Static graphs between consecutive characteristic dates, covering the lifetime."""
    dates = graph_characteristic_dates(graph)
    lo, hi = graph.lifetime.start, graph.lifetime.end
    if not dates or dates[0] != lo:
        dates.insert(0, lo)
    if dates[-1] != hi:
        dates.append(hi)
    nodes = frozenset(graph.nodes)
    out = []
    for a, b in zip(dates, dates[1:]):
        present = frozenset(k for k, e in graph._edges.items() if a in e.presence)
        out.append((TimeInterval(a, b), StaticGraph(nodes, present, graph.directed)))
    return out


def snapshot_at(snaps: list[tuple[TimeInterval, StaticGraph]], t: Time) -> StaticGraph | None:
    i = bisect_right([iv.start for iv, _ in snaps], t) - 1
    if i >= 0 and t in snaps[i][0]:
        return snaps[i][1]
    return None


def iter_contacts(graph: TimeVaryingGraph) -> Iterator[tuple[int, int, Time, Time, str | None]]:
    """Maximal presence intervals of every edge, in edge-creation order."""
    for (u, v), e in graph._edges.items():
        for s, t in e.presence.pairs:
            yield u, v, s, t, e.label


def from_contacts(contacts: Iterable, directed: bool = False,
                  lifetime: TimeInterval | None = None) -> TimeVaryingGraph:
    """Build a graph from ``(u, v, t1, t2)`` tuples; node labels are created on first use."""
    g = TimeVaryingGraph(directed=directed, lifetime=lifetime)
    for c in contacts:
        u, v, t1, t2 = c[:4]
        lab = c[4] if len(c) > 4 else None
        g.add_contact(g.ensure_node(str(u)), g.ensure_node(str(v)), t1, t2, lab)
    return g
