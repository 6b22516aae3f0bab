"""Opinion observables: gap clustering, spread and quiescence detection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class ClusterReport:
    count: int
    boundaries: list[float]
    members: list[list]
    centroids: list[float]


def clusters(values: Sequence[float], gap: float = 0.01, ids: Sequence | None = None) -> ClusterReport:
    """Split sorted values wherever neighbours differ by more than ``gap``.

    ``members`` holds ``ids`` (positions in ``values`` by default); boundaries
    are the midpoints of the gaps that separate clusters.
    """
    if not gap > 0:
        raise ValueError(f"gap must be positive, got {gap!r}")
    x = np.asarray(values, dtype=float)
    if ids is None:
        ids = list(range(len(x)))
    elif len(ids) != len(x):
        raise ValueError("ids and values differ in length")
    if x.size == 0:
        return ClusterReport(0, [], [], [])
    # stable sort so equal values keep id order
    order = np.argsort(x, kind="stable")
    xs = x[order]
    cuts = np.flatnonzero(np.diff(xs) > gap) + 1
    groups = np.split(np.arange(len(xs)), cuts)
    members = [[ids[order[i]] for i in g] for g in groups]
    centroids = [float(xs[g].mean()) for g in groups]
    boundaries = [float((xs[c - 1] + xs[c]) / 2) for c in cuts]
    return ClusterReport(len(groups), boundaries, members, centroids)


def spread(values: Sequence[float]) -> tuple[float, float, float, float]:
    """``(min, max, mean, variance)`` with the population variance."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("spread of an empty sequence")
    return float(x.min()), float(x.max()), float(x.mean()), float(x.var())


def converged(records: Sequence, tol: float, window_len: int) -> bool:
    """True if each of the last ``window_len`` events moved every updated opinion by < ``tol``.

    Records need ``x_i_pre``, ``x_i_post``, ``updated_i`` and the ``j``
    counterparts (see :class:`tvgmind.dynamics.EventRecord`).
    """
    if window_len < 1:
        raise ValueError("window_len must be at least 1")
    if len(records) < window_len:
        return False
    for r in records[-window_len:]:
        if r.updated_i and abs(r.x_i_post - r.x_i_pre) >= tol:
            return False
        if r.updated_j and abs(r.x_j_post - r.x_j_pre) >= tol:
            return False
    return True
