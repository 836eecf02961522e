"""Weak separation scans, exact overlap directions and the Bandt-Graf family."""
import csv
import math
from fractions import Fraction as F

import pytest

from assouadproj.errors import ExactArithmeticRequired, GraphError, Unsupported
from assouadproj.graph_directed import GraphDirectedSystem, build_projection_system
from assouadproj.ifs import IFS1D, IFS2D, Angle, Similarity1D, Similarity2D
from assouadproj.separation import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    _verdict,
    bandt_graf_ifs,
    bandt_graf_leftover,
    bandt_graf_parameter,
    difference_map,
    exact_overlap_directions,
    gdwsp_scan,
    identity_distance,
    project_map_values,
    wsp_scan,
)

from conftest import line_ifs


def bg_oracle(c: F, terms: int) -> F:
    return sum(c ** (2**k) for k in range(terms))


class TestWspScan:
    def test_segment_holds(self, segment):
        rep = wsp_scan(segment, 8)
        assert rep.verdict.kind == HOLDS
        assert rep.min_distance >= 0.5

    def test_duplicate_map(self):
        rep = wsp_scan(line_ifs(("1/2", 0), ("1/2", 0)), 4)
        assert rep.min_distance == math.inf
        assert rep.verdict.kind == HOLDS and rep.verdict.gap == math.inf
        assert rep.exact_overlaps > 0

    def test_bandt_graf_trend(self):
        rep = wsp_scan(bandt_graf_ifs(F(1, 4)), 16)
        at = dict(rep.trend)
        vals = [at[d] for d in (2, 4, 8, 16)]
        assert all(v > 0 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert rep.verdict.kind == FAILS

    def test_witness_reproduces_minimum(self):
        ifs = bandt_graf_ifs(F(1, 4))
        rep = wsp_scan(ifs, 10)
        e, f = rep.witness_pair
        assert identity_distance(difference_map(ifs, e, f), rep.frame) == pytest.approx(rep.min_distance, abs=1e-12)
        assert difference_map(ifs, e, f) == rep.witness_map

    def test_trend_non_increasing(self, cantor):
        for ifs in (cantor, bandt_graf_ifs(F(1, 3)), line_ifs(("1/3", 0), ("1/3", "1/5"), ("1/3", "2/3"))):
            ms = [m for _, m in wsp_scan(ifs, 8).trend]
            assert all(a >= b for a, b in zip(ms, ms[1:]))

    def test_no_zero_witness_in_exact_mode(self):
        ifs = line_ifs(("1/3", 0), ("1/3", "1/3"), ("1/3", "1/9"), ("1/3", "2/3"))
        rep = wsp_scan(ifs, 6)
        assert rep.min_distance > 0

    def test_conjugation_invariance(self):
        ifs = line_ifs(("1/4", 0), ("1/4", "3/10"), ("1/4", 1))
        a, b = F(3), F(7, 5)  # phi(x) = a x + b
        conj = IFS1D(tuple(Similarity1D(m.ratio, a * m.translation + b * (1 - m.ratio)) for m in ifs.maps))
        r1, r2 = wsp_scan(ifs, 8), wsp_scan(conj, 8)
        assert r1.verdict.kind == r2.verdict.kind
        assert r1.min_distance == r2.min_distance
        (r, t), (r_conj, t_conj) = r1.witness_map, r2.witness_map
        assert r_conj == r and t_conj == a * t + b * (1 - r)

    def test_csv(self, tmp_path):
        rep = wsp_scan(bandt_graf_ifs(F(1, 4)), 6)
        rep.to_csv(tmp_path / "s.csv")
        rows = list(csv.DictReader(open(tmp_path / "s.csv")))
        assert [int(r["depth"]) for r in rows] == [d for d, _ in rep.trend]


class TestVerdictRule:
    def test_holds_needs_stable_tail(self):
        assert _verdict([(1, 0.5), (2, 0.5), (3, 0.5), (4, 0.5)], 0.01).kind == HOLDS
        assert _verdict([(1, 0.9), (2, 0.8), (3, 0.6), (4, 0.5)], 0.01).kind == INCONCLUSIVE

    def test_fails_needs_two_doublings(self):
        trend = [(d, 2.0**-d) for d in range(1, 9)]
        assert _verdict(trend, 0.01).kind == FAILS
        flat = [(d, 0.001) for d in range(1, 9)]
        assert _verdict(flat, 0.01).kind == INCONCLUSIVE


class TestGdwspScan:
    def test_single_vertex_agrees(self, segment, cantor):
        for ifs in (segment, cantor, bandt_graf_ifs(F(1, 4))):
            a = wsp_scan(ifs, 8).verdict.kind
            b = gdwsp_scan(GraphDirectedSystem.from_ifs(ifs), 0, 8).verdict.kind
            assert a == b

    def test_half_turn_system(self):
        half = Angle.rational_pi(1)
        ifs = IFS2D((Similarity2D(F(1, 3), half, False, (0, 0)), Similarity2D(F(1, 3), Angle(), False, (1, 0))))
        sys = build_projection_system(ifs, Angle.from_tangent(F(1, 2)))
        assert len(sys.vertices) == 2
        assert gdwsp_scan(sys, 0, 8).verdict.kind == HOLDS

    def test_unknown_vertex(self, segment):
        with pytest.raises(GraphError):
            gdwsp_scan(GraphDirectedSystem.from_ifs(segment), 3, 4)


class TestExactOverlapDirections:
    def test_depth_one(self, f_quarter):
        found = exact_overlap_directions(f_quarter, 1)
        by_pair = {(w1, w2): a for a, w1, w2 in found}
        assert by_pair[((0,), (1,))].exact_tangent() == 0
        assert by_pair[((0,), (2,))].exact_tangent() is None

    def test_depth_three_nontrivial(self, f_quarter):
        found = exact_overlap_directions(f_quarter, 3)
        inner = [a for a, _, _ in found if 0 < a.radians < math.pi / 2]
        assert inner

    def test_substitution(self, f_quarter):
        for a, w1, w2 in exact_overlap_directions(f_quarter, 2):
            pts = [(0, 0), (1, 0), (0, 1)]
            assert project_map_values(f_quarter, w1, a, pts) == project_map_values(f_quarter, w2, a, pts)

    def test_errors(self, dense, f_quarter):
        with pytest.raises(Unsupported):
            exact_overlap_directions(dense, 2)
        floaty = IFS2D(tuple(Similarity2D(0.25, Angle(), False, m.translation) for m in f_quarter.maps))
        with pytest.raises(ExactArithmeticRequired):
            exact_overlap_directions(floaty, 2)


class TestBandtGraf:
    def test_quarter(self):
        t = bandt_graf_parameter(F(1, 4))
        assert abs(t - bg_oracle(F(1, 4), 8)) < F(1, 10**30)
        assert float(t) == pytest.approx(0.31642150902189314, abs=1e-15)

    def test_half(self):
        t = bandt_graf_parameter(F(1, 2))
        assert abs(t - bg_oracle(F(1, 2), 8)) < F(1, 10**30)
        assert float(t) == pytest.approx(0.8164215090218931, abs=1e-15)

    @pytest.mark.parametrize("c", [F(1, 10), F(1, 4), F(1, 3), F(1, 2), F(9, 10)])
    def test_bound(self, c):
        assert bandt_graf_parameter(c) < c / (1 - c)

    def test_ifs_layout(self):
        ifs = bandt_graf_ifs(F(1, 4))
        assert [m.translation for m in ifs.maps][:2] == [0, 1]
        assert all(m.ratio == F(1, 4) for m in ifs.maps)

    def test_leftover_readings(self):
        out = bandt_graf_leftover(F(1, 4), 2)
        assert out["from_m"] - out["from_m_plus_1"] == pytest.approx(1.0)
        # the leading term of the l = m + 1 reading is c^(2^(m+1) - 2^m) = c^(2^m)
        assert out["from_m_plus_1"] == pytest.approx(0.25**4, rel=1e-3)
