"""Quorum clustering, epoch partition of the radius sequence, ball depth.

Quorum clustering repeatedly extracts a 2-approximate smallest ball holding a
fixed quota of the surviving points, removes exactly that quota, and repeats
until the set is exhausted; the final step may hold fewer points. The radius
sequence splits greedily into epochs: maximal runs whose radii stay within 4x
the run's first radius.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .geometry import REL_TOL, Ball, PointSet, pairwise_distances


@dataclass(frozen=True, eq=False)
class QuorumStep:
    """One extraction step: the ball and the removed member indices."""

    ball: Ball
    members: np.ndarray  # sorted ascending original indices


@dataclass(frozen=True, eq=False)
class QuorumClustering:
    gamma: int
    steps: tuple
    radii: np.ndarray

    def __post_init__(self):
        if len(self.steps) != self.radii.shape[0]:
            raise ValueError("radii must align with steps")

    def __len__(self) -> int:
        return len(self.steps)

    def epoch_partition(self) -> "EpochPartition":
        return epochs(self.radii)


@dataclass(frozen=True)
class EpochPartition:
    """Half-open step-index ranges partitioning the radius sequence."""

    ranges: tuple

    def __len__(self) -> int:
        return len(self.ranges)

    def __iter__(self):
        return iter(self.ranges)


def _quorum_steps(dist: np.ndarray, order: np.ndarray, gamma: int) -> list:
    """Engine on a precomputed distance matrix and stable argsort of its rows.

    Returns [(center_index, radius, sorted_member_indices), ...]. Uses a lazy
    min-heap of cached candidate radii: removals only grow a center's true
    radius, so a popped stale entry is recomputed (one vectorized scan of its
    presorted row) and pushed back; an entry recomputed within the current
    step is exact and wins. Ties break toward the smallest center index.
    """
    n = dist.shape[0]
    alive = np.ones(n, dtype=bool)
    n_alive = n
    out = []
    heap = []
    if n > gamma:
        start = np.partition(dist, gamma - 1, axis=1)[:, gamma - 1]
        heap = [(float(start[i]), i, 0) for i in range(n)]
        heapq.heapify(heap)
    stamp = 0
    while n_alive > 0:
        if n_alive <= gamma:
            # Last step swallows every survivor; radius is the best max-distance.
            idx = np.flatnonzero(alive)
            far = dist[np.ix_(idx, idx)].max(axis=1)
            j = int(np.argmin(far))
            out.append((int(idx[j]), float(far[j]), idx))
            alive[idx] = False
            n_alive = 0
            break
        stamp += 1
        while True:
            r, i, s = heapq.heappop(heap)
            if not alive[i]:
                continue
            if s == stamp:
                center, radius = i, r
                break
            row = order[i]
            pos = np.flatnonzero(alive[row])
            jth = row[pos[gamma - 1]]
            heapq.heappush(heap, (float(dist[i, jth]), i, stamp))
        row = order[center]
        pos = np.flatnonzero(alive[row])[:gamma]
        members = row[pos]
        out.append((center, radius, np.sort(members)))
        alive[members] = False
        n_alive -= gamma
    return out


def quorum_clustering(ps: PointSet, gamma: int) -> QuorumClustering:
    """Partition all indices into quota-sized balls (last one may be smaller).

    Each step runs the 2-approximate dense-ball extraction on the survivors
    with quota ``min(gamma, survivors)``; the quota members removed are the
    covered points nearest the ball center, ties by index.
    """
    if not isinstance(ps, PointSet):
        ps = PointSet(ps)
    gamma = int(gamma)
    if gamma < 1 or gamma > ps.n:
        raise ValueError(f"gamma must be in [1, {ps.n}], got {gamma}")
    dist = pairwise_distances(ps.coords)
    order = np.argsort(dist, axis=1, kind="stable")
    raw = _quorum_steps(dist, order, gamma)
    steps = tuple(
        QuorumStep(Ball(ps.coords[c].copy(), r), np.asarray(m, dtype=int))
        for c, r, m in raw
    )
    radii = np.array([r for _, r, _ in raw])
    return QuorumClustering(gamma=gamma, steps=steps, radii=radii)


def epochs(radii) -> EpochPartition:
    """Greedy left-to-right partition into maximal runs with max <= 4x first."""
    r = np.asarray(radii, dtype=float).ravel()
    if r.size == 0:
        raise ValueError("radius sequence must be nonempty")
    if not np.isfinite(r).all() or (r < 0).any():
        raise ValueError("radii must be finite and nonnegative")
    ranges = []
    s = 0
    m = r.size
    while s < m:
        lim = 4.0 * r[s]
        e = s + 1
        while e < m and r[e] <= lim:
            e += 1
        ranges.append((s, e))
        s = e
    return EpochPartition(tuple(ranges))


def cover_depth(balls, point, rel_tol: float = REL_TOL) -> int:
    """Number of balls containing the point (with radius tolerance)."""
    pt = np.asarray(point, dtype=float).ravel()
    count = 0
    for b in balls:
        if b.contains(pt, rel_tol=rel_tol):
            count += 1
    return count


def max_epoch_depth(
    qc: QuorumClustering, ps: PointSet, rel_tol: float = REL_TOL
) -> int:
    """Max over epochs and input points of the point's depth in that epoch."""
    coords = ps.coords
    worst = 0
    for s, e in qc.epoch_partition():
        centers = np.stack([qc.steps[t].ball.center for t in range(s, e)])
        radii = qc.radii[s:e] * (1.0 + rel_tol)
        for blk in range(0, coords.shape[0], 512):
            d = pairwise_distances(coords[blk : blk + 512], centers)
            depth = int((d <= radii[None, :]).sum(axis=1).max())
            if depth > worst:
                worst = depth
    return worst
