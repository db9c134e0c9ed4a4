import math

import numpy as np
import pytest

from sepclust.generators import (
    EmbeddingFailed,
    GeneratorSpec,
    gen_exponential_line,
    gen_exponential_ring_grid,
    gen_grid,
    gen_k_copies,
    gen_near_uniform_highdim,
    gen_random_uniform,
    gen_three_color_line,
)
from sepclust.geometry import PointSet, closest_pair, diameter, spread
from sepclust.oracle import OracleBudget, best_separated_pair
from sepclust.separation import SeparationKind


# ------------------------------------------------------------- grid


def test_grid_1d():
    assert gen_grid(2, 1).coords.ravel().tolist() == [1.0, 2.0]


def test_grid_3x3():
    g = gen_grid(3, 2)
    assert g.n == 9
    assert spread(g) == pytest.approx(2 * math.sqrt(2))
    assert g.coords[0].tolist() == [1.0, 1.0]
    assert g.coords[1].tolist() == [1.0, 2.0]  # lexicographic order


def test_grid_diameter():
    assert diameter(gen_grid(4, 2)) == pytest.approx(3 * math.sqrt(2))


def test_grid_invariants():
    g = gen_grid(5, 2)
    assert g.n == 25
    assert closest_pair(g) == 1.0
    assert diameter(g) == pytest.approx(4 * math.sqrt(2))


def test_grid_overflow_guard():
    with pytest.raises(ValueError):
        gen_grid(5000, 3)


# -------------------------------------------------- exponential line


def test_exponential_line_values():
    assert gen_exponential_line(3).coords.ravel().tolist() == [3.0, 7.0, 15.0]
    assert gen_exponential_line(1).coords.ravel().tolist() == [3.0]


def test_exponential_line_spread():
    assert spread(gen_exponential_line(5)) == 15.0


def test_exponential_line_gaps_double():
    pts = gen_exponential_line(12).coords.ravel()
    gaps = np.diff(pts)
    assert np.array_equal(gaps[1:], 2 * gaps[:-1])


def test_exponential_line_limit():
    with pytest.raises(ValueError):
        gen_exponential_line(51)


# -------------------------------------------------- three-color line


def test_three_color_line_n3():
    inst = gen_three_color_line(3)
    assert inst.subset(0).coords.ravel().tolist() == [1.0, 2.0, 3.0]
    assert inst.subset(1).coords.ravel().tolist() == [4.0, 5.0, 6.0]
    assert inst.subset(2).coords.ravel().tolist() == [7.0, 10.0, 13.0]


def test_three_color_line_n2():
    assert gen_three_color_line(2).subset(2).coords.ravel().tolist() == [5.0, 7.0]


def test_three_color_line_structural_facts():
    n = 20
    inst = gen_three_color_line(n)
    third = np.sort(inst.subset(2).coords.ravel())
    assert np.diff(third).min() == n
    union12 = np.concatenate(
        [inst.subset(0).coords.ravel(), inst.subset(1).coords.ravel()]
    )
    assert union12.max() - union12.min() == 2 * n - 1


@pytest.mark.parametrize("n", [2, 5, 17, 40])
def test_three_color_line_spread_bound(n):
    inst = gen_three_color_line(n)
    assert spread(inst.points) <= 2 * n * n


# -------------------------------------------- exponential ring grid


def test_ring_grid_level_scaling():
    ps = gen_exponential_ring_grid(4, 16.0, 1)
    assert ps.n == 16  # 4 levels of 4 points
    level1, level2 = ps.coords[:4], ps.coords[4:8]
    assert np.array_equal(level2, level1 / 3.0)


def test_ring_grid_ring_membership():
    n, phi, d = 32, 64.0, 2
    ps = gen_exponential_ring_grid(n, phi, d)
    h = math.ceil(math.log2(phi))
    assert ps.n == n * h
    for i in range(h):
        level = ps.coords[i * n : (i + 1) * n]
        norms = np.abs(level).max(axis=1)
        assert (norms >= 2 / 3**i * (1 - 1e-12)).all()
        assert (norms <= 3 / 3**i * (1 + 1e-12)).all()


def test_ring_grid_spread_polynomial_in_target():
    for n, phi, d in [(32, 64.0, 2), (100, 100.0, 2), (20, 40.0, 3)]:
        ps = gen_exponential_ring_grid(n, phi, d)
        assert spread(ps) <= phi**3


def test_ring_grid_subsample_oracle_small_quality():
    # brute-force best well 12d-separated pair on an 18-point subsample
    ps = gen_exponential_ring_grid(100, 100.0, 2)
    rng = np.random.default_rng(7)
    sub = ps.subset(np.sort(rng.choice(ps.n, size=18, replace=False)))
    q, _ = best_separated_pair(
        sub, 24.0, SeparationKind.WELL, OracleBudget(max_n_assignment=18)
    )
    assert q <= 2


def test_ring_grid_validation():
    with pytest.raises(ValueError):
        gen_exponential_ring_grid(10, 5.0, 2)  # target below n


# ------------------------------------------------------------ copies


def test_k_copies_identity_for_small_k():
    ps = PointSet([[0.0, 1.0], [2.0, 3.0]])
    for k in (2, 3):
        out = gen_k_copies(ps, k)
        assert np.array_equal(out.coords, ps.coords)


def test_k_copies_unit_pair():
    out = gen_k_copies(PointSet([0.0, 1.0]), 4)
    assert out.coords.ravel().tolist() == [0.0, 1.0, 2.0, 3.0]


def test_k_copies_three_copies():
    out = gen_k_copies(PointSet([0.0, 1.0]), 6)
    assert out.n == 6
    assert out.coords.ravel().tolist() == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]


def test_k_copies_gap_is_diameter():
    rng = np.random.default_rng(3)
    ps = PointSet(rng.random((10, 2)) * 2)
    out = gen_k_copies(ps, 5)
    delta = diameter(ps)
    width = ps.coords[:, 0].max() - ps.coords[:, 0].min()
    first = out.coords[:10, 0]
    second = out.coords[10:, 0]
    assert second.min() - first.max() == pytest.approx(delta, rel=1e-12)
    assert np.array_equal(second, first + (width + delta))


# ---------------------------------------------- near-uniform highdim


def test_near_uniform_distance_band():
    ps = gen_near_uniform_highdim(12, 0.3, seed=1)
    from sepclust.geometry import pairwise_distances

    d = pairwise_distances(ps.coords)
    off = d[~np.eye(ps.n, dtype=bool)]
    assert off.min() >= 0.7 and off.max() <= 1.3


def test_near_uniform_dimension_formula():
    ps = gen_near_uniform_highdim(16, 0.5, seed=0)
    assert ps.dim == 8 * math.ceil(math.log(16) / 0.5**2)  # = 96


def test_near_uniform_deterministic():
    a = gen_near_uniform_highdim(10, 0.4, seed=9)
    b = gen_near_uniform_highdim(10, 0.4, seed=9)
    assert np.array_equal(a.coords, b.coords)
    c = gen_near_uniform_highdim(10, 0.4, seed=10)
    assert not np.array_equal(a.coords, c.coords)


def test_near_uniform_oracle_useless():
    ps = gen_near_uniform_highdim(10, 0.4, seed=2)
    q, _ = best_separated_pair(ps, 2.0, SeparationKind.WELL)
    assert q == 1


def test_near_uniform_validation():
    with pytest.raises(ValueError):
        gen_near_uniform_highdim(1, 0.4, seed=0)
    with pytest.raises(ValueError):
        gen_near_uniform_highdim(8, 1.5, seed=0)


def test_embedding_failure_is_typed(monkeypatch):
    import sepclust.generators as gens

    monkeypatch.setattr(gens, "_EMBED_ATTEMPTS", 0)
    with pytest.raises(EmbeddingFailed):
        gen_near_uniform_highdim(8, 0.4, seed=0)


# ----------------------------------------------------------- random


def test_random_uniform_seeded():
    a = gen_random_uniform(20, 3, 5)
    b = gen_random_uniform(20, 3, 5)
    assert np.array_equal(a.coords, b.coords)
    assert a.coords.min() >= 0.0 and a.coords.max() < 1.0


# ----------------------------------------------------- GeneratorSpec


def test_generator_spec_build_and_label():
    spec = GeneratorSpec(kind="grid", side=3, dim=2)
    assert spec.build().n == 9
    assert spec.label() == "grid:side=3:dim=2"
    with pytest.raises(ValueError):
        GeneratorSpec(kind="random", n=5, dim=2)  # missing seed
    with pytest.raises(ValueError):
        GeneratorSpec(kind="nope")
