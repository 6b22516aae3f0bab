"""Journeys: time-respecting walks over a :class:`TimeVaryingGraph`.

A journey is a sequence of hops ``(edge, departure)`` where each edge is
present at its departure and each departure is no earlier than the arrival
of the previous hop (departure plus latency).  Departures need not be
strictly increasing, so with zero latency several hops may share an instant.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .intervals import INF, Time, TimeInterval
from .tvg import (
    NodeRef,
    TemporalEdge,
    TimeVaryingGraph,
    UnknownEdgeError,
    latency,
)


class Hop(NamedTuple):
    edge: tuple[int, int]
    departure: Time


@dataclass(frozen=True)
class Journey:
    source: int
    hops: tuple[Hop, ...]
    arrival: Time

    @property
    def nodes(self) -> list[int]:
        """The walk as a node sequence, starting at ``source``."""
        out = [self.source]
        for (a, b), _ in self.hops:
            out.append(b if out[-1] == a else a)
        return out

    @property
    def target(self) -> int:
        return self.nodes[-1]

    def __len__(self) -> int:
        return len(self.hops)


def crossing(edge: TemporalEdge, t: Time, end: Time = INF) -> tuple[Time, Time] | None:
    """Best ``(departure, arrival)`` over ``edge`` for a traveller ready at ``t``.

    Minimizes arrival, then departure, subject to ``t <= departure`` and
    ``arrival < end``.  Returns None when the edge cannot be crossed.
    """
    regs = edge.regions()
    i = max(bisect_right(edge.region_starts(), t) - 1, 0)
    best = None
    for rs, re, lat in regs[i:]:
        if re <= t:
            continue
        dep = rs if rs > t else t
        if dep >= end or (best is not None and dep >= best[1]):
            break
        arr = dep + lat
        if arr < end and (best is None or arr < best[1]):
            best = (dep, arr)
    return best


def _check_start(graph: TimeVaryingGraph, start: Time) -> None:
    if start not in graph.lifetime:
        raise ValueError(f"start time {start} outside lifetime {graph.lifetime}")


def earliest_arrival_times(graph: TimeVaryingGraph, source: NodeRef, start: Time,
                           end: Time = INF) -> dict[int, Time]:
    """Earliest arrival at every node reachable from ``source``.

    Label-setting sweep: a node reached earlier can always wait, so the
    first label settled for a node dominates every later one.  Journeys
    depart no earlier than ``start`` and arrive strictly before ``end``.
    """
    s = graph.index(source)
    best = {s: start}
    heap = [(start, s)]
    done = set()
    while heap:
        t, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for e in graph.out_edges(x):
            y = e.other(x)
            if y in done:
                continue
            c = crossing(e, t, end)
            if c is not None and c[1] < best.get(y, INF):
                best[y] = c[1]
                heapq.heappush(heap, (c[1], y))
    return best


def _arrivals_within_hops(graph: TimeVaryingGraph, source: int, t0: Time, rounds: int,
                          end: Time) -> list[dict[int, Time]]:
    # layers[r][x]: earliest arrival at x using at most r hops
    cur = {source: t0}
    layers = [cur]
    frontier = {source}
    for _ in range(rounds):
        nxt = dict(cur)
        changed = set()
        for x in frontier:
            for e in graph.out_edges(x):
                y = e.other(x)
                c = crossing(e, cur[x], end)
                if c is not None and c[1] < nxt.get(y, INF):
                    nxt[y] = c[1]
                    changed.add(y)
        if not changed:
            break
        cur = nxt
        layers.append(cur)
        frontier = changed
    return layers


def foremost_journey(graph: TimeVaryingGraph, u: NodeRef, v: NodeRef, start: Time,
                     end: Time = INF) -> Journey | None:
    """Journey from ``u`` to ``v`` with the earliest arrival, departing at or after ``start``.

    Ties are broken by fewest hops, then by the lexicographically smallest
    sequence of node indices.  Returns None when ``v`` is unreachable.
    """
    s, d = graph.index(u), graph.index(v)
    _check_start(graph, start)
    if s == d:
        return Journey(s, (), start)
    layers = _arrivals_within_hops(graph, s, start, max(graph.n_nodes - 1, 0), end)
    target = layers[-1].get(d)
    if target is None:
        return None
    k = next(r for r, lay in enumerate(layers) if lay.get(d) == target)

    hops = []
    x, t = s, start
    for step in range(k):
        remaining = k - step - 1
        options = []
        for e in graph.out_edges(x):
            c = crossing(e, t, end)
            if c is not None:
                options.append((e.other(x), e, c))
        options.sort(key=lambda o: o[0])
        for y, e, (dep, arr) in options:
            if remaining == 0:
                ok = y == d and arr <= target
            else:
                reach = _arrivals_within_hops(graph, y, arr, remaining, end)[-1]
                ok = reach.get(d, INF) <= target
            if ok:
                hops.append(Hop(e.endpoints, dep))
                x, t = y, arr
                break
        else:  # pragma: no cover - unreachable if the layers are consistent
            raise RuntimeError("foremost journey reconstruction failed")
    return Journey(s, tuple(hops), t)


def is_journey(graph: TimeVaryingGraph, source: NodeRef, hops: Sequence) -> bool:
    """Check the walk, presence and ordering conditions for ``hops``.

    Each hop is ``((a, b), departure)``.  Unknown nodes or edges raise
    rather than returning False.
    """
    cur = graph.index(source)
    checked = []
    for (a_ref, b_ref), dep in hops:
        a, b = graph.index(a_ref), graph.index(b_ref)
        e = graph.edge(a, b)
        if e is None:
            raise UnknownEdgeError((a_ref, b_ref))
        checked.append((a, b, e, dep))
    ready = None
    for a, b, e, dep in checked:
        if graph.directed:
            if a != cur:
                return False
            nxt = b
        elif cur == a:
            nxt = b
        elif cur == b:
            nxt = a
        else:
            return False
        if dep not in e.presence:
            return False
        if ready is not None and dep < ready:
            return False
        ready = dep + latency(e, dep)
        cur = nxt
    return True


def reachability_set(graph: TimeVaryingGraph, u: NodeRef, start: Time,
                     end: Time = INF) -> frozenset[int]:
    """Nodes that ``u`` can reach by a journey departing at or after ``start``."""
    _check_start(graph, start)
    return frozenset(earliest_arrival_times(graph, u, start, end))


def mutual_reachability_matrix(graph: TimeVaryingGraph,
                               window: TimeInterval | None = None) -> np.ndarray:
    """Boolean matrix ``M[u, v]``: a journey u -> v departs and arrives inside ``window``."""
    window = window or graph.lifetime
    n = graph.n_nodes
    m = np.zeros((n, n), dtype=bool)
    for u in range(n):
        for v in earliest_arrival_times(graph, u, window.start, window.end):
            m[u, v] = True
    return m


def is_temporally_connected(graph: TimeVaryingGraph, subset: Iterable[NodeRef],
                            window: TimeInterval | None = None) -> bool:
    """True when every ordered pair of ``subset`` admits a journey inside ``window``."""
    window = window or graph.lifetime
    nodes = {graph.index(x) for x in subset}
    for u in nodes:
        reach = earliest_arrival_times(graph, u, window.start, window.end)
        if not nodes.issubset(reach):
            return False
    return True
