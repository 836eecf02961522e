"""(delta, s)-sets, the dyadic extraction sweep and discrete Marstrand counts."""
import math

import numpy as np
import pytest

from assouadproj.delta_s import (
    KAPPA_BALL,
    KAPPA_CARD,
    DeltaSSet,
    check_delta_s,
    direction_grid,
    dyadic_radii,
    extract_delta_s_subset,
    frostman_subset,
    marstrand_bad_directions,
    marstrand_experiment,
    max_cube_excess,
    min_separation,
    projection_counts,
    random_segment_set,
    read_points_csv,
    write_marstrand_csv,
    write_points_csv,
)
from assouadproj.errors import InvalidInput, Unsupported


def grid(delta):
    n = int(round(1 / delta))
    g = np.arange(n) * delta
    return np.array([(x, y) for x in g for y in g])


def brute_ball_max(points, delta, s):
    """max over x in P and dyadic r of |P & B(x,r)| / (r/delta)^s by pairwise distances."""
    d = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
    return max((d <= r * (1 + 1e-9)).sum(axis=1).max() / (r / delta) ** s for r in dyadic_radii(delta))


class TestCheck:
    def test_single_point(self):
        assert check_delta_s([[0.3, 0.4]], 0.01, 1.5, 1, 0).ok

    def test_full_grid(self):
        assert check_delta_s(grid(2**-4), 2**-4, 2, 9, 0).ok

    def test_collinear_fails(self):
        delta = 2**-6
        pts = np.c_[np.arange(64) * delta, np.zeros(64)]
        res = check_delta_s(pts, delta, 2, 1, 0)
        assert not res.ok
        # the worst ratio is at r = delta, where a line already holds three points
        x, r, count = res.witness
        assert r == delta and count == 3

    def test_not_separated(self):
        assert not check_delta_s([[0, 0], [0.001, 0]], 0.01, 0, 10, 0).ok

    def test_dataclass(self):
        P = DeltaSSet(grid(2**-3), 2**-3, 2, 9)
        assert len(P) == 64 and P.check().ok


class TestExtract:
    def test_singleton(self):
        out = extract_delta_s_subset([[0.5, 0.5]], 2**-4, 1, 1, 2**-4, 1)
        assert out.tolist() == [[0.5, 0.5]]

    def test_grid_to_one_dimensional(self):
        delta = 2**-6
        P0 = grid(delta)
        P = extract_delta_s_subset(P0, delta, 1.0, 2.0, 1.0, 9.0)
        assert len(P) >= (1.0 / 9.0) * 2**6 / KAPPA_CARD
        assert max_cube_excess(P, delta, 1.0) <= 1.0
        assert brute_ball_max(P, delta, 1.0) <= KAPPA_BALL
        assert {tuple(p) for p in P} <= {tuple(p) for p in P0}
        assert min_separation(P) >= delta

    def test_segment_near_lossless(self):
        delta = 2**-8
        P0 = np.c_[np.arange(256) * delta, np.full(256, 0.5)]
        P = extract_delta_s_subset(P0, delta, 1.0, 1.0, 1.0, 3.0)
        assert len(P) >= (1.0 / 3.0) * 2**8 / KAPPA_CARD

    def test_s_equals_t_deletes_nothing(self):
        delta = 2**-5
        P0 = np.c_[np.arange(32) * delta * 2, np.zeros(32)] * 0.5 + 0.01
        P = extract_delta_s_subset(P0, delta, 1.0, 1.0, 1.0, 3.0)
        assert len(P) == len(P0)

    def test_deterministic(self):
        P0 = grid(2**-5)
        a = extract_delta_s_subset(P0, 2**-5, 1.3, 2.0, 1.0, 9.0)
        b = extract_delta_s_subset(P0[::-1], 2**-5, 1.3, 2.0, 1.0, 9.0)
        assert sorted(map(tuple, a)) == sorted(map(tuple, b))

    def test_preconditions(self):
        P0 = grid(2**-4)
        with pytest.raises(InvalidInput):
            extract_delta_s_subset(P0, 2**-4, 2.5, 2.0, 1.0, 9.0)  # s > t
        with pytest.raises(InvalidInput):
            extract_delta_s_subset(P0, 0.1, 1.0, 2.0, 1.0, 9.0)  # delta not dyadic
        with pytest.raises(InvalidInput):
            extract_delta_s_subset(np.array([[0, 0], [0.01, 0]]), 2**-4, 1.0, 1.0, 0.0, 9.0)
        with pytest.raises(InvalidInput):
            extract_delta_s_subset(P0, 2**-4, 1.0, 2.0, 2.0, 9.0)  # too few points
        with pytest.raises(InvalidInput):
            extract_delta_s_subset(P0, 2**-4, 1.0, 2.0, 1.0, 1.0)  # ball bound fails


class TestFrostman:
    def test_grid(self):
        delta = 2**-7
        P = DeltaSSet(grid(delta), delta, 2.0, 9.0, 0.0)
        out = frostman_subset(P, 1.0)
        assert out.s == 1.0 and out.eps == 0.0 and out.A == KAPPA_BALL
        assert out.check().ok
        assert len(out) >= (1.0 / 9.0) * 2**7 / KAPPA_CARD

    def test_already_one_dimensional(self):
        delta = 2**-6
        pts = np.c_[np.arange(64) * delta, np.zeros(64)]
        out = frostman_subset(DeltaSSet(pts, delta, 1.0, 3.0, 0.0), 1.0)
        assert out.check().ok

    def test_small_s(self):
        with pytest.raises(Unsupported):
            frostman_subset(DeltaSSet([[0, 0]], 0.1, 0.5), 1.0)


class TestMarstrand:
    def test_grid(self):
        delta = 0.01
        g = direction_grid(delta)
        assert g[0] == 0 and g[-1] < math.pi and len(g) == math.ceil(math.pi / delta)

    def test_single_point(self):
        bad, n = marstrand_bad_directions([[0.2, 0.2]], 0.5, 2**-6)
        assert n == 0 and len(bad) == 0

    def test_segment_concentrates_at_normal(self):
        delta, phi = 2**-8, 0.6
        u = np.array([math.cos(phi), math.sin(phi)])
        pts = np.arange(200)[:, None] * delta * u
        bad, n = marstrand_bad_directions(pts, 0.5, delta)
        assert n > 0
        normal = (phi + math.pi / 2) % math.pi
        assert np.all(np.abs(((bad - normal + math.pi / 2) % math.pi) - math.pi / 2) < 0.1)

    def test_monotone_in_tau(self):
        rng = np.random.default_rng(1)
        delta = 2**-8
        pts = random_segment_set(delta, rng)
        counts = [marstrand_bad_directions(pts, tau, delta)[1] for tau in (0.2, 0.4, 0.6, 0.8)]
        assert all(a >= b for a, b in zip(counts, counts[1:]))

    def test_counts_match_brute_force(self):
        rng = np.random.default_rng(2)
        pts = rng.uniform(0, 1, size=(40, 2))
        th = np.array([0.0, 0.3, 1.2])
        ref = [len(np.unique(np.floor((pts @ [math.cos(t), math.sin(t)]) / 0.05))) for t in th]
        assert projection_counts(pts, 0.05, th).tolist() == ref

    def test_needs_delta(self):
        with pytest.raises(InvalidInput):
            marstrand_bad_directions([[0, 0]], 0.5)
        with pytest.raises(InvalidInput):
            marstrand_bad_directions([[0, 0]], 1.5, 0.1)

    def test_experiment_and_csv(self, tmp_path):
        rows = marstrand_experiment([2**-6, 2**-7], [0.5], seed=3)
        assert rows == marstrand_experiment([2**-6, 2**-7], [0.5], seed=3)
        write_marstrand_csv(rows, tmp_path / "m.csv")
        header = open(tmp_path / "m.csv").readline().strip()
        assert header == "delta,tau,m,badCount,bound,fittedC"

    def test_points_csv(self, tmp_path):
        pts = np.array([[0.1, 0.2], [1 / 3, 0.5]])
        write_points_csv(pts, tmp_path / "p.csv")
        assert np.array_equal(read_points_csv(tmp_path / "p.csv"), pts)
