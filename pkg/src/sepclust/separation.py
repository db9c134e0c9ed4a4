"""Separation predicates and clustering quality.

Three nested notions of sigma-separation for a collection of clusters, all of
the form ``dist(C_i, C_j) >= sigma * D`` for every distinct pair:

* strong: D is the largest diameter among *all* clusters,
* well:   D is the larger of the pair's two diameters,
* semi:   D is the smaller of the pair's two diameters (clusters may nest).

Quality of a collection is the size of its smallest cluster; a collection is
useless when the quality is one.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .geometry import REL_TOL, Ball, PointSet, pairwise_distances


class SeparationKind(Enum):
    STRONG = "strong"
    WELL = "well"
    SEMI = "semi"

    @classmethod
    def parse(cls, text: str) -> "SeparationKind":
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            raise ValueError(f"unknown separation kind: {text!r}") from None


@dataclass(frozen=True, eq=False)
class Clustering:
    """k disjoint, nonempty index subsets of a point set plus its claim.

    ``clusters`` index into ``points`` (original input order). ``colors`` is
    set for colored instances, in which case cluster i must draw from color i.
    ``balls`` and ``alpha`` carry the extraction certificate when an
    algorithm produced the clustering.
    """

    points: PointSet
    clusters: tuple
    sigma: float
    kind: SeparationKind
    colors: Optional[np.ndarray] = None
    balls: Optional[tuple] = None
    alpha: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.points, PointSet):
            object.__setattr__(self, "points", PointSet(self.points))
        sigma = float(self.sigma)
        if not sigma > 0.0:
            raise ValueError("sigma must be positive")
        object.__setattr__(self, "sigma", sigma)
        if not isinstance(self.kind, SeparationKind):
            object.__setattr__(self, "kind", SeparationKind.parse(self.kind))
        clusters = tuple(np.asarray(c, dtype=int).ravel() for c in self.clusters)
        if len(clusters) < 1:
            raise ValueError("need at least one cluster")
        n = self.points.n
        total = 0
        seen = set()
        for c in clusters:
            if c.size == 0:
                raise ValueError("clusters must be nonempty")
            if c.min() < 0 or c.max() >= n:
                raise ValueError("cluster index out of range")
            total += c.size
            seen.update(c.tolist())
        if len(seen) != total:
            raise ValueError("clusters must be pairwise disjoint")
        object.__setattr__(self, "clusters", clusters)
        if self.colors is not None:
            colors = np.asarray(self.colors, dtype=int).ravel()
            if colors.shape[0] != n:
                raise ValueError("colors must label every point")
            object.__setattr__(self, "colors", colors)
        if self.balls is not None:
            balls = tuple(self.balls)
            if any(not isinstance(b, Ball) for b in balls):
                raise ValueError("balls must be Ball instances")
            object.__setattr__(self, "balls", balls)

    @property
    def k(self) -> int:
        return len(self.clusters)

    @property
    def sizes(self) -> list:
        return [int(c.size) for c in self.clusters]


def cluster_diameters(clustering: Clustering) -> np.ndarray:
    coords = clustering.points.coords
    out = np.zeros(clustering.k)
    for i, c in enumerate(clustering.clusters):
        if c.size > 1:
            sub = coords[c]
            out[i] = pairwise_distances(sub).max()
    return out


def pair_margins(clustering: Clustering, rel_tol: float = REL_TOL) -> list:
    """Per-pair report: distance, required separation, ratio, verdict.

    The required separation is ``sigma * D`` with D chosen by the clustering's
    kind; the verdict allows a relative slack of ``rel_tol`` so constructions
    sitting exactly on the boundary verify.
    """
    coords = clustering.points.coords
    diams = cluster_diameters(clustering)
    d_strong = float(diams.max())
    sigma = clustering.sigma
    kind = clustering.kind
    rows = []
    for i in range(clustering.k):
        for j in range(i + 1, clustering.k):
            a = coords[clustering.clusters[i]]
            b = coords[clustering.clusters[j]]
            dist = pairwise_distances(a, b).min()
            if kind is SeparationKind.STRONG:
                term = d_strong
            elif kind is SeparationKind.WELL:
                term = max(diams[i], diams[j])
            else:
                term = min(diams[i], diams[j])
            required = sigma * term
            ok = dist >= required * (1.0 - rel_tol)
            ratio = float(dist / required) if required > 0.0 else float("inf")
            rows.append(
                {
                    "i": i,
                    "j": j,
                    "distance": float(dist),
                    "diameter_term": float(term),
                    "required": float(required),
                    "ratio": ratio,
                    "ok": bool(ok),
                }
            )
    return rows


def check_separation(clustering: Clustering, rel_tol: float = REL_TOL) -> bool:
    """True iff every cluster pair meets the declared separation."""
    return all(row["ok"] for row in pair_margins(clustering, rel_tol))


def quality(clustering: Clustering) -> int:
    """Size of the smallest cluster."""
    return min(clustering.sizes)


def is_useless(clustering: Clustering) -> bool:
    """True iff some cluster is a singleton (quality one)."""
    return quality(clustering) == 1
