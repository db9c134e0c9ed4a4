"""Benchmark and adversarial instance generators.

Each construction carries machine-checkable structure: the integer grid, the
exponentially spaced line, the three-color line, the exponential ring grid,
axis-aligned copies of a set, a near-uniform high-dimensional cloud from a
seeded random projection, and plain seeded uniform noise. All randomized
kinds are deterministic given their seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algorithms import ColoredInstance
from .geometry import PointSet, diameter


class EmbeddingFailed(RuntimeError):
    """Random projection failed to land in the distance band within budget."""


MAX_GRID_POINTS = 4_194_304  # 2**22; guards accidental N^d blowups
_EMBED_ATTEMPTS = 100


def gen_grid(side: int, dim: int) -> PointSet:
    """All points of {1..side}^dim in lexicographic order."""
    side, dim = int(side), int(dim)
    if side < 1 or dim < 1:
        raise ValueError("side and dim must be positive")
    if side**dim > MAX_GRID_POINTS:
        raise ValueError(f"grid of {side}^{dim} points exceeds the memory budget")
    axes = [np.arange(1, side + 1, dtype=float)] * dim
    mesh = np.meshgrid(*axes, indexing="ij")
    return PointSet(np.stack([m.ravel() for m in mesh], axis=1))


def gen_exponential_line(n: int) -> PointSet:
    """The 1-D set {2^(i+1) - 1 : i = 1..n}; consecutive gaps double."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    if n > 50:
        raise ValueError("n > 50 would leave exact integer doubles")
    coords = np.array([2.0 ** (i + 1) - 1.0 for i in range(1, n + 1)])
    return PointSet(coords)


def gen_three_color_line(n: int) -> ColoredInstance:
    """Three 1-D color classes of n points each on which strong separation
    at sigma >= 3 forces a singleton cluster.

    Class 0 is {1..n}, class 1 is {n+1..2n}, class 2 is {1+(1+i)n : i=1..n}.
    """
    n = int(n)
    if n < 2:
        raise ValueError("n must be at least 2")
    i = np.arange(1, n + 1, dtype=float)
    return ColoredInstance.from_sets(
        [PointSet(i), PointSet(n + i), PointSet(1.0 + (1.0 + i) * n)]
    )


def _ring_axis_counts(num: int, den: int) -> tuple:
    # cell size is num/den with num in {2, 3}; exact integer counts
    inside_cube = 2 * ((3 * den) // num) + 1  # |m * l| <= 3
    hole_half = -((-2 * den) // num) - 1  # |m * l| < 2, i.e. |m| <= ceil(2den/num)-1
    inside_hole = 2 * hole_half + 1
    return inside_cube, inside_hole


def _find_ring_cell(n: int, dim: int) -> tuple:
    """Largest cell size with >= n lattice points in the ring [-3,3]^d minus
    the open cube (-2,2)^d.

    The count is a step function of the cell size that only changes at the
    critical values 3/t and 2/t, and it is not monotone between families, so
    the two descending sequences are merged exactly (integer arithmetic) and
    scanned from the largest value down. Ties go to the larger cell size.
    """
    i = j = 1  # pointers into 3/t and 2/t
    for _ in range(2_000_000):
        take3 = 3 * j >= 2 * i  # 3/i >= 2/j
        num, den = (3, i) if take3 else (2, j)
        if take3 and 3 * j == 2 * i:
            j += 1  # same value from both families; count once
        if take3:
            i += 1
        else:
            j += 1
        a, b = _ring_axis_counts(num, den)
        if a**dim - b**dim >= n:
            return num, den, a, b
    raise RuntimeError("cell size search failed")


def gen_exponential_ring_grid(n: int, spread_target: float, dim: int) -> PointSet:
    """Nested scaled copies of a ring grid with near-uniform geometry per level.

    Level 1 holds the n lexicographically smallest lattice points of the ring
    [-3,3]^dim minus (-2,2)^dim at the largest cell size admitting n of them;
    level i+1 is level i divided by 3 (exactly, by construction). The number
    of levels is ceil(log2(spread_target)). Total spread stays polynomial in
    the target (at most spread_target**3 for targets >= 64 at dim <= 3).
    """
    n, dim = int(n), int(dim)
    spread_target = float(spread_target)
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be positive")
    if spread_target < n or spread_target <= 1.0:
        raise ValueError("spread target must be > 1 and at least n")
    levels = math.ceil(math.log2(spread_target))
    num, den, a, b_hole = _find_ring_cell(n, dim)
    if a**dim > 6 * n:
        raise ValueError(
            "construction needs a denser ring: lattice fills the cube with "
            f"{a**dim} > 6n = {6 * n} points; increase n"
        )
    half = (a - 1) // 2
    hole_half = (b_hole - 1) // 2
    axes = [np.arange(-half, half + 1)] * dim
    mesh = np.meshgrid(*axes, indexing="ij")
    ints = np.stack([m.ravel() for m in mesh], axis=1)
    ring = ints[np.abs(ints).max(axis=1) > hole_half]
    base = ring[:n].astype(float) * (num / den)
    blocks = [base]
    for _ in range(levels - 1):
        blocks.append(blocks[-1] / 3.0)
    return PointSet(np.vstack(blocks))


def gen_k_copies(ps: PointSet, k: int) -> PointSet:
    """floor(k/2) copies of the set along the first axis, consecutive
    bounding intervals separated by exactly the set's diameter."""
    if not isinstance(ps, PointSet):
        ps = PointSet(ps)
    k = int(k)
    if k < 2:
        raise ValueError("k must be at least 2")
    copies = k // 2
    delta = diameter(ps)
    width = float(ps.coords[:, 0].max() - ps.coords[:, 0].min())
    blocks = []
    for c in range(copies):
        blk = ps.coords.copy()
        blk[:, 0] += c * (width + delta)
        blocks.append(blk)
    return PointSet(np.vstack(blocks))


def gen_near_uniform_highdim(n: int, eps: float, seed: int) -> PointSet:
    """n points with all pairwise distances in [1-eps, 1+eps].

    The scaled standard basis e_i / sqrt(2) of R^n (all pairwise distances
    exactly 1) is pushed through a seeded Gaussian projection into
    8 * ceil(ln(n) / eps^2) dimensions; generation retries with a derived
    seed until the distance band holds. Deterministic given (n, eps, seed).
    """
    n = int(n)
    eps = float(eps)
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    dim = 8 * math.ceil(math.log(n) / eps**2)
    iu = np.triu_indices(n, 1)
    for attempt in range(_EMBED_ATTEMPTS):
        rng = np.random.default_rng([int(seed), attempt])
        pts = rng.standard_normal((n, dim)) / math.sqrt(2.0 * dim)
        diff = pts[iu[0]] - pts[iu[1]]
        d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        if d.min() >= 1.0 - eps and d.max() <= 1.0 + eps:
            return PointSet(pts)
    raise EmbeddingFailed(
        f"no embedding within the distance band after {_EMBED_ATTEMPTS} attempts"
    )


def gen_random_uniform(n: int, dim: int, seed: int) -> PointSet:
    """n seeded uniform points in the unit cube [0, 1)^dim."""
    n, dim = int(n), int(dim)
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be positive")
    rng = np.random.default_rng(int(seed))
    return PointSet(rng.random((n, dim)))


_KINDS = (
    "grid",
    "expline",
    "threecolor",
    "expgrid",
    "kcopies",
    "nearuniform",
    "random",
)
_SEEDED_KINDS = ("nearuniform", "random")


@dataclass(frozen=True)
class GeneratorSpec:
    """Declarative instance description, the currency of the bench suite."""

    kind: str
    side: Optional[int] = None
    n: Optional[int] = None
    dim: Optional[int] = None
    spread: Optional[float] = None
    k: Optional[int] = None
    eps: Optional[float] = None
    seed: Optional[int] = None
    base: Optional["GeneratorSpec"] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown generator kind: {self.kind!r}")
        if self.kind in _SEEDED_KINDS and self.seed is None:
            raise ValueError(f"generator {self.kind!r} requires a seed")

    def build(self):
        if self.kind == "grid":
            return gen_grid(self._req("side"), self._req("dim"))
        if self.kind == "expline":
            return gen_exponential_line(self._req("n"))
        if self.kind == "threecolor":
            return gen_three_color_line(self._req("n"))
        if self.kind == "expgrid":
            return gen_exponential_ring_grid(
                self._req("n"), self._req("spread"), self._req("dim")
            )
        if self.kind == "kcopies":
            if self.base is None:
                raise ValueError("kcopies needs a base generator")
            return gen_k_copies(self.base.build(), self._req("k"))
        if self.kind == "nearuniform":
            return gen_near_uniform_highdim(
                self._req("n"), self._req("eps"), self._req("seed")
            )
        return gen_random_uniform(self._req("n"), self._req("dim"), self._req("seed"))

    def _req(self, name: str):
        value = getattr(self, name)
        if value is None:
            raise ValueError(f"generator {self.kind!r} requires {name}")
        return value

    def label(self) -> str:
        parts = [self.kind]
        for name in ("side", "n", "dim", "spread", "k", "eps", "seed"):
            value = getattr(self, name)
            if value is not None:
                parts.append(f"{name}={value}")
        return ":".join(parts)
