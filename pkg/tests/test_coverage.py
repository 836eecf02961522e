"""Dyadic covers, projections, covering counts and Hausdorff gaps."""
import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest

from assouadproj.coverage import (
    DyadicCover,
    attractor_cover,
    cover_from_points,
    covering_count,
    d_hausdorff,
    project_cover,
    rho_hausdorff,
    sample_points,
)
from assouadproj.errors import EmptySet, InvalidInput, ResolutionError, ResourceLimit
from assouadproj.ifs import Angle, compose_word


def _oracle_cells(lo: F, hi: F, h: F) -> range:
    i0 = math.floor(lo / h)
    return range(i0, max(i0, math.ceil(hi / h) - 1) + 1)


class TestAttractorCover:
    def test_segment(self, segment):
        c = attractor_cover(segment, 3)
        assert c.cubes.ravel().tolist() == list(range(8))

    def test_cantor_depth_two(self, cantor):
        assert attractor_cover(cantor, 2).cubes.ravel().tolist() == [0, 3]

    def test_f_quarter_against_cylinder_enumeration(self, f_quarter):
        """Brute force: depth-3 cylinders of the unit square, cells met in exact arithmetic."""
        h = F(1, 16)
        cells = set()
        for w in itertools.product(range(3), repeat=3):
            s = compose_word(f_quarter, w)
            (x, y), r = s.translation, s.ratio
            for i in _oracle_cells(x, x + r, h):
                for j in _oracle_cells(y, y + r, h):
                    cells.add((i, j))
        cover = attractor_cover(f_quarter, 4)
        assert {tuple(c) for c in cover.cubes.tolist()} == cells
        assert len(cover) == 9  # the depth-2 cylinders are exactly dyadic cubes of side 1/16

    def test_budget(self, f_quarter):
        with pytest.raises(ResourceLimit):
            attractor_cover(f_quarter, 10, budget=100)

    def test_bad_scale(self, segment):
        with pytest.raises(InvalidInput):
            attractor_cover(segment, 0)

    def test_points_lie_in_cover(self, dense):
        cover = attractor_cover(dense, 7)
        pts = sample_points(dense, 8, with_words=False).points
        assert cover_from_points(pts, 7).issubset(cover)

    def test_csv_round_trip(self, f_quarter, tmp_path):
        c = attractor_cover(f_quarter, 5)
        c.to_csv(tmp_path / "c.csv")
        assert DyadicCover.from_csv(tmp_path / "c.csv") == c
        c.to_svg(tmp_path / "c.svg")
        assert (tmp_path / "c.svg").read_text().count("<rect") == len(c)


class TestProjectCover:
    def test_unit_square_horizontal(self):
        square = DyadicCover(2, 3, [(i, j) for i in range(8) for j in range(8)])
        assert project_cover(square, 0.0).cubes.ravel().tolist() == list(range(8))

    def test_single_cube_diagonal(self):
        k = 4
        one = DyadicCover(2, k, [(0, 0)])
        cells = project_cover(one, Angle.rational_pi(1, 4)).cubes.ravel().tolist()
        top = math.sqrt(2) * 2**-k
        assert cells == list(range(0, math.ceil(top / 2**-k)))

    def test_f_quarter_collapses_at_zero(self, f_quarter):
        cover = attractor_cover(f_quarter, 8)
        assert len(project_cover(cover, Angle.zero())) < len(cover)

    def test_requires_planar(self, segment):
        with pytest.raises(InvalidInput):
            project_cover(attractor_cover(segment, 3), 0.0)


class TestCoveringCount:
    def test_segment(self, segment):
        c = attractor_cover(segment, 6)
        assert covering_count(c, 0.5, 0.5, 2**-3) == 8

    def test_far_ball(self, f_quarter):
        c = attractor_cover(f_quarter, 6)
        assert covering_count(c, (10.0, 10.0), 1.0, 2**-3) == 0

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_cantor(self, cantor, m):
        c = attractor_cover(cantor, 2 * m + 2)
        assert covering_count(c, 0.0, 1.0, 4.0**-m) == 2**m

    def test_resolution(self, segment):
        with pytest.raises(ResolutionError):
            covering_count(attractor_cover(segment, 3), 0.5, 0.5, 2**-5)


class TestHausdorff:
    def test_examples(self):
        a = np.array([[0.0], [1.0]])
        assert rho_hausdorff(a, a) == 0
        assert rho_hausdorff([[0.0]], [[1.0]]) == rho_hausdorff([[1.0]], [[0.0]]) == 1
        assert rho_hausdorff(a, [[0.0]]) == 1
        assert rho_hausdorff([[0.0]], a) == 0
        assert d_hausdorff(a, [[0.0]]) == 1

    def test_empty(self):
        with pytest.raises(EmptySet):
            rho_hausdorff(np.zeros((0, 1)), [[0.0]])

    def test_covers_as_inputs(self, cantor):
        a, b = attractor_cover(cantor, 6), attractor_cover(cantor, 6)
        assert d_hausdorff(a, b) == 0


class TestSamplePoints:
    def test_words_match_points(self, f_quarter):
        s = sample_points(f_quarter, 3, base=(0.0, 0.0))
        for p, w in zip(s.points[::5], s.words[::5]):
            assert np.allclose(p, compose_word(f_quarter, w)(np.zeros((1, 2)))[0])
