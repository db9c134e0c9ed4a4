"""Metric primitives over finite point sets in R^d.

A point is a 1-D float array; a point set is an ordered (n, d) array wrapped
in :class:`PointSet`, whose row indices are the stable point identifiers used
by all clustering output. Distances are Euclidean throughout.

Pairwise scans are computed from exact coordinate differences (no expanded
``|a|^2 - 2ab + |b|^2`` trick), in row blocks, so that huge coordinates such
as the exponential line keep full precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative tolerance on a ball radius for point-in-ball tests. Absorbs
# floating-point drift so constructions sitting exactly on a boundary verify.
REL_TOL = 1e-9

_BLOCK = 256  # row block size for pairwise scans; keeps temporaries small


def _coerce_coords(coords) -> np.ndarray:
    arr = np.asarray(coords, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"expected (n, d) coordinates, got shape {arr.shape}")
    if arr.shape[1] < 1:
        raise ValueError("dimension must be at least 1")
    if arr.size and not np.isfinite(arr).all():
        raise ValueError("coordinates must be finite")
    return np.ascontiguousarray(arr)


def _coords_of(obj) -> np.ndarray:
    if isinstance(obj, PointSet):
        return obj.coords
    return _coerce_coords(obj)


@dataclass(frozen=True, eq=False)
class PointSet:
    """Ordered set of points in R^d. Row index identifies a point."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _coerce_coords(self.coords))

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def __len__(self) -> int:
        return self.n

    def subset(self, indices) -> "PointSet":
        return PointSet(self.coords[np.asarray(indices, dtype=int)])


@dataclass(frozen=True, eq=False)
class Ball:
    """Closed ball given by center point and radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).ravel()
        if c.size < 1 or not np.isfinite(c).all():
            raise ValueError("ball center must be a finite point")
        r = float(self.radius)
        if not np.isfinite(r) or r < 0.0:
            raise ValueError("ball radius must be finite and nonnegative")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def scaled(self, factor: float) -> "Ball":
        """Same center, radius multiplied by ``factor``."""
        return Ball(self.center, self.radius * float(factor))

    def contains(self, points, rel_tol: float = REL_TOL):
        """Membership test with relative tolerance on the radius.

        Accepts a single point or an (m, d) array; returns a bool or a bool
        array accordingly.
        """
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        if single:
            pts = pts.reshape(1, -1)
        if pts.shape[1] != self.dim:
            raise ValueError("dimension mismatch")
        diff = pts - self.center
        dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        inside = dist <= self.radius * (1.0 + rel_tol)
        return bool(inside[0]) if single else inside


def distance(p, q) -> float:
    """Euclidean distance between two points of equal dimension."""
    a = np.asarray(p, dtype=float).ravel()
    b = np.asarray(q, dtype=float).ravel()
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValueError("coordinates must be finite")
    return float(np.linalg.norm(a - b))


def pairwise_distances(a, b=None) -> np.ndarray:
    """Full distance matrix between rows of ``a`` and rows of ``b`` (or ``a``)."""
    aa = _coords_of(a)
    bb = aa if b is None else _coords_of(b)
    if aa.shape[1] != bb.shape[1]:
        raise ValueError("dimension mismatch")
    out = np.empty((aa.shape[0], bb.shape[0]))
    for s in range(0, aa.shape[0], _BLOCK):
        e = min(s + _BLOCK, aa.shape[0])
        diff = aa[s:e, None, :] - bb[None, :, :]
        np.sqrt(np.einsum("ijk,ijk->ij", diff, diff), out=out[s:e])
    return out


def set_distance(x, y) -> float:
    """Minimum distance over all cross pairs of two nonempty point sets."""
    xa, ya = _coords_of(x), _coords_of(y)
    if xa.shape[0] == 0 or ya.shape[0] == 0:
        raise ValueError("set_distance requires nonempty sets")
    if xa.shape[1] != ya.shape[1]:
        raise ValueError("dimension mismatch")
    best = np.inf
    for s in range(0, xa.shape[0], _BLOCK):
        diff = xa[s : s + _BLOCK, None, :] - ya[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        m = d2.min()
        if m < best:
            best = m
    return float(np.sqrt(best))


def diameter(ps) -> float:
    """Maximum pairwise distance; zero for a singleton."""
    c = _coords_of(ps)
    n = c.shape[0]
    if n == 0:
        raise ValueError("diameter of an empty set is undefined")
    if n == 1:
        return 0.0
    best = 0.0
    for s in range(0, n, _BLOCK):
        diff = c[s : s + _BLOCK, None, :] - c[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        m = d2.max()
        if m > best:
            best = m
    return float(np.sqrt(best))


def closest_pair(ps) -> float:
    """Minimum distance over distinct index pairs (zero if points repeat)."""
    c = _coords_of(ps)
    n = c.shape[0]
    if n < 2:
        raise ValueError("closest_pair requires at least two points")
    best = np.inf
    for s in range(0, n, _BLOCK):
        e = min(s + _BLOCK, n)
        diff = c[s:e, None, :] - c[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        d2[np.arange(e - s), np.arange(s, e)] = np.inf
        m = d2.min()
        if m < best:
            best = m
    return float(np.sqrt(best))


def spread(ps) -> float:
    """Diameter over closest-pair distance. Errors on duplicate points."""
    cp = closest_pair(ps)
    if cp == 0.0:
        raise ValueError("infinite spread: point set contains duplicates")
    return diameter(ps) / cp


def approx_min_ball_alpha(ps, alpha: int) -> Ball:
    """2-approximate smallest ball covering at least ``alpha`` points.

    Candidate centers are restricted to input points; the candidate radius of
    a center is its alpha-th smallest distance to the set (self included).
    Recentering an optimal ball at one of its covered points at most doubles
    the radius, so the winning radius lies in [r_opt, 2 r_opt]. Ties between
    candidate radii are broken by the smallest center index.
    """
    if not isinstance(ps, PointSet):
        ps = PointSet(ps)
    n = ps.n
    alpha = int(alpha)
    if alpha < 1 or alpha > n:
        raise ValueError(f"alpha must be in [1, {n}], got {alpha}")
    dist = pairwise_distances(ps.coords)
    radii = np.partition(dist, alpha - 1, axis=1)[:, alpha - 1]
    i = int(np.argmin(radii))
    return Ball(ps.coords[i].copy(), float(radii[i]))
