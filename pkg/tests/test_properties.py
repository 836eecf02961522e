"""Property laws of every module, run by the seeded hypothesis profile (200 cases per law)."""
import itertools
import json
import math
import tempfile
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest
from hypothesis import assume, event, given
from hypothesis import strategies as st

from assouadproj.cli import main
from assouadproj.constructions import (
    _boxes_disjoint,
    _cylinder_box,
    eroglu_words,
    normal_form,
    reduction_subsystem,
    spaced_points,
    weak_tangent_sequence,
    xi,
)
from assouadproj.coverage import (
    attractor_cover,
    cover_contains,
    covering_count,
    project_cover,
    seed_box,
)
from assouadproj.delta_s import (
    extract_delta_s_subset,
    marstrand_bad_directions,
    max_cube_excess,
    min_separation,
)
from assouadproj.errors import DegenerateSet, ResourceLimit
from assouadproj.dimension import assouad_estimate, box_estimate
from assouadproj.graph_directed import (
    build_projection_system,
    classify_projection,
    gd_dimension,
)
from assouadproj.ifs import (
    IFS1D,
    IFS2D,
    Angle,
    Similarity1D,
    Similarity2D,
    compose_word,
    fixed_point,
    rotation_group,
    similarity_dimension,
)
from assouadproj.separation import (
    difference_map,
    exact_overlap_directions,
    identity_distance,
    project_map_values,
    wsp_scan,
)

# --------------------------------------------------------------------------
# Strategies
# --------------------------------------------------------------------------

unit = st.fractions(min_value=0, max_value=1, max_denominator=16)
small_ratio = st.fractions(min_value=F(1, 8), max_value=F(1, 2), max_denominator=16)
dyadic_ratio = st.sampled_from([F(p, 2**q) for q in range(1, 5) for p in range(1, 2**q) if F(p, 2**q) <= F(3, 4)])
pi_angle = st.builds(lambda p, q: Angle.rational_pi(p, q), st.integers(0, 7), st.sampled_from([1, 2, 4]))


@st.composite
def planar_ifs(draw, n_maps=st.integers(2, 3), ratio=small_ratio, rotations=True):
    n = draw(n_maps)
    maps = []
    for _ in range(n):
        angle = draw(pi_angle) if rotations else Angle.zero()
        refl = draw(st.booleans()) if rotations else False
        maps.append(Similarity2D(draw(ratio), angle, refl, (draw(unit), draw(unit))))
    ifs = IFS2D(tuple(maps))
    fps = {fixed_point(m) for m in maps}
    assume(len(fps) > 1)
    return ifs


@st.composite
def line_ifs(draw, n_maps=st.integers(2, 4), signed=True):
    n = draw(n_maps)
    maps = []
    for _ in range(n):
        r = draw(small_ratio)
        if signed and draw(st.booleans()):
            r = -r
        maps.append(Similarity1D(r, draw(unit)))
    assume(len({fixed_point(m) for m in maps}) > 1)
    return IFS1D(tuple(maps))


words = st.lists(st.integers(0, 2), max_size=8).map(tuple)
irrational = st.floats(min_value=0.3, max_value=3.0).filter(lambda a: abs(a / math.pi - round(a / math.pi)) > 1e-3)


@st.composite
def dense_pair(draw):
    rho = draw(st.sampled_from([F(1, 3), F(1, 4), F(1, 5)]))
    rot = Angle.irrational_radians(draw(irrational))
    w2 = (draw(st.floats(0.5, 1.5)), draw(st.floats(-0.5, 0.5)))
    return IFS2D((Similarity2D(rho, rot, False, (0, 0)), Similarity2D(rho, rot, False, w2)))


def angle_dist(x):
    x = math.fmod(x, 2 * math.pi)
    return min(abs(x), 2 * math.pi - abs(x))


# --------------------------------------------------------------------------
# ifs_core
# --------------------------------------------------------------------------

@given(planar_ifs(n_maps=st.just(3)), words, words)
def test_compose_word_is_a_homomorphism(ifs, u, v):
    left = compose_word(ifs, u + v)
    right = compose_word(ifs, u).compose(compose_word(ifs, v))
    assert left.ratio == right.ratio
    assert left.rotation == right.rotation and left.reflect == right.reflect
    assert np.allclose(np.array(left.translation, float), np.array(right.translation, float), atol=1e-12, rtol=0)


@given(planar_ifs(n_maps=st.just(3), ratio=dyadic_ratio), words)
def test_dyadic_ratio_product_is_exact(ifs, w):
    assert compose_word(ifs, w).ratio == math.prod((ifs.maps[i].ratio for i in w), start=F(1))


@given(planar_ifs(ratio=st.sampled_from([F(1, 4), F(1, 3), F(1, 2)])), st.lists(st.integers(0, 1), min_size=1, max_size=4))
def test_fixed_point_lies_in_the_cover(ifs, w):
    fp = np.array(fixed_point(compose_word(ifs, tuple(w))), dtype=float)
    assert cover_contains(attractor_cover(ifs, 6), fp, slack=1)


@given(st.lists(st.fractions(min_value=F(1, 20), max_value=F(19, 20), max_denominator=50), min_size=2, max_size=5),
       st.data())
def test_similarity_dimension_is_monotone(ratios, data):
    i = data.draw(st.integers(0, len(ratios) - 1))
    bigger = list(ratios)
    bigger[i] = ratios[i] + (1 - ratios[i]) / 2
    assert similarity_dimension(bigger) > similarity_dimension(ratios)


# --------------------------------------------------------------------------
# coverage
# --------------------------------------------------------------------------

def _cell_gap(a, b):
    """Largest Chebyshev distance from a cell of ``a`` to the nearest cell of ``b``."""
    d = np.abs(a.cubes[:, None, :] - b.cubes[None, :, :]).max(axis=2)
    return int(d.min(axis=1).max())


@given(planar_ifs(), st.integers(2, 6))
def test_cover_refinement(ifs, k):
    # covers are unions of cylinder boxes, so they agree up to one boundary cell
    fine, coarse = attractor_cover(ifs, k + 1).coarsen(k), attractor_cover(ifs, k)
    assert _cell_gap(fine, coarse) <= 1
    assert _cell_gap(coarse, fine) <= 1


@given(planar_ifs(), st.integers(3, 7))
def test_cover_self_similarity(ifs, k):
    cover = attractor_cover(ifs, k)
    centres = cover.centers()
    for m in ifs.maps:
        for p in m(centres):
            assert cover_contains(cover, p, slack=1)


@given(planar_ifs(), st.floats(0, math.pi), st.integers(4, 7), st.integers(1, 3))
def test_projection_commutes_with_coarsening(ifs, theta, k, j):
    cover = attractor_cover(ifs, k)
    fine_first = project_cover(cover, theta).coarsen(j)
    coarse_first = project_cover(cover.coarsen(j), theta)
    assert fine_first.issubset(coarse_first)
    # a projected coarse cube is (|cos| + |sin|) cells long, so it overshoots by at most that much
    slack = math.ceil(abs(math.cos(theta)) + abs(math.sin(theta)) - 1e-12)
    assert _cell_gap(coarse_first, fine_first) <= slack


@given(planar_ifs(), st.integers(1, 6), st.integers(0, 3), st.data())
def test_covering_count_monotone(ifs, b, extra, data):
    cover = attractor_cover(ifs, 7)
    x = cover.centers()[data.draw(st.integers(0, len(cover) - 1))]
    r = 2.0**-min(b + extra, 7)
    R1 = data.draw(st.floats(r, 1.0))
    R2 = data.draw(st.floats(R1, 2.0))
    assert covering_count(cover, x, R1, r) <= covering_count(cover, x, R2, r)
    r2 = 2.0**-min(b + extra + 1, 7)
    assert covering_count(cover, x, R1, r) <= covering_count(cover, x, R1, r2)


# --------------------------------------------------------------------------
# dimension
# --------------------------------------------------------------------------

@given(line_ifs())
def test_assouad_dominates_box(ifs):
    cover = attractor_cover(ifs, 10)
    assert assouad_estimate(cover).value >= box_estimate(cover).value - 0.05


@given(line_ifs())
def test_assouad_dominates_box_at_resolved_depth(ifs):
    # the same law with the cover resolving 10 dyadic scales below the set's diameter
    lo, hi = seed_box(ifs)
    length = float(hi[0] - lo[0])
    assume(length >= 2.0**-8)
    cover = attractor_cover(ifs, 10 + max(0, math.ceil(-math.log2(length))))
    assert assouad_estimate(cover).value >= box_estimate(cover).value - 0.05


@st.composite
def cover_and_subcover(draw, depth=10):
    ifs = draw(line_ifs(signed=False))
    cover = attractor_cover(ifs, depth)
    level = draw(st.integers(1, 5))
    coarse = np.unique(cover.cubes >> (depth - level))
    keep = draw(st.lists(st.sampled_from(list(coarse)), min_size=1, unique=True))
    sub = type(cover)(1, depth, cover.cubes[np.isin(cover.cubes[:, 0] >> (depth - level), keep)])
    return cover, sub


@given(cover_and_subcover())
def test_subcover_assouad_monotone(pair):
    cover, sub = pair
    assert assouad_estimate(sub).value <= assouad_estimate(cover).value + 0.05


@given(cover_and_subcover())
def test_subcover_counts_monotone(pair):
    cover, sub = pair
    for j in range(cover.k + 1):
        assert len(sub.coarsen(j)) <= len(cover.coarsen(j))


@given(cover_and_subcover())
def test_subcover_box_monotone(pair):
    # stated law: removing cubes never raises box_estimate by more than 0.05
    cover, sub = pair
    assert box_estimate(sub).value <= box_estimate(cover).value + 0.05


@given(planar_ifs())
def test_estimates_in_range(ifs):
    cover = attractor_cover(ifs, 8)
    for est in (assouad_estimate(cover), box_estimate(cover)):
        assert 0 <= est.value <= 2


@given(line_ifs())
def test_estimates_deterministic(ifs):
    a, b = attractor_cover(ifs, 10), attractor_cover(ifs, 10)
    assert assouad_estimate(a).value == assouad_estimate(b).value
    assert box_estimate(a).value == box_estimate(b).value


# --------------------------------------------------------------------------
# separation
# --------------------------------------------------------------------------

@given(line_ifs(n_maps=st.integers(2, 3)), st.integers(2, 6))
def test_wsp_trend_non_increasing(ifs, depth):
    trend = [m for _, m in wsp_scan(ifs, depth).trend]
    assert all(a >= b for a, b in zip(trend, trend[1:]))


@given(line_ifs(n_maps=st.integers(2, 3)))
def test_no_zero_witness(ifs):
    rep = wsp_scan(ifs, 5)
    assert rep.min_distance > 0
    if rep.witness_pair is not None:
        e, f = rep.witness_pair
        assert identity_distance(difference_map(ifs, e, f), rep.frame) == rep.min_distance


@given(line_ifs(n_maps=st.integers(2, 3)),
       st.fractions(min_value=F(1, 10), max_value=10, max_denominator=20),
       st.fractions(min_value=-5, max_value=5, max_denominator=20))
def test_conjugation_invariance(ifs, a, b):
    conj = IFS1D(tuple(Similarity1D(m.ratio, a * m.translation + b * (1 - m.ratio)) for m in ifs.maps))
    r1, r2 = wsp_scan(ifs, 5), wsp_scan(conj, 5)
    assert r1.verdict.kind == r2.verdict.kind
    assert [d for d, _ in r1.trend] == [d for d, _ in r2.trend]
    assert [m for _, m in r1.trend] == pytest.approx([m for _, m in r2.trend], rel=1e-12)


@given(planar_ifs(rotations=False), st.integers(1, 2))
def test_overlap_directions_substitute_back(ifs, depth):
    for angle, w1, w2 in exact_overlap_directions(ifs, depth):
        pts = [(0, 0), (1, 0), (0, 1)]
        assert project_map_values(ifs, w1, angle, pts) == project_map_values(ifs, w2, angle, pts)


# --------------------------------------------------------------------------
# graph_directed
# --------------------------------------------------------------------------

def _functional_residual(sys, depth):
    from assouadproj.coverage import d_hausdorff

    pts = sys.sample(depth)
    worst = 0.0
    for v in sys.vertices:
        images = np.concatenate([float(sys.edges[i].map.ratio) * pts[sys.edges[i].src]
                                 + float(sys.edges[i].map.translation) for i in sys.into[v]])
        worst = max(worst, d_hausdorff(pts[v], images))
    return worst


projection_theta = st.one_of(st.fractions(min_value=-4, max_value=4, max_denominator=8).map(Angle.from_tangent),
                             st.just(Angle.from_tangent(None)))


@given(planar_ifs(ratio=st.sampled_from([F(1, 3), F(1, 4)])), projection_theta)
def test_projection_system_laws(ifs, theta):
    try:
        sys = build_projection_system(ifs, theta)
    except DegenerateSet:  # a projected vertex attractor may be a single point
        assume(False)
    info = rotation_group(ifs)
    if info.has_reflections:
        assert sys.n_vertices in (info.order, 2 * info.order)
    else:
        assert sys.n_vertices == info.order
    assert _functional_residual(sys, 6) < 2 * 2.0**-6
    assert gd_dimension(sys) == pytest.approx(similarity_dimension(ifs.ratios), abs=1e-9)


@given(planar_ifs(n_maps=st.just(3), rotations=False), st.floats(0.05, 3.0), st.permutations(range(3)))
def test_classify_relabel_invariant(ifs, theta, perm):
    relabelled = IFS2D(tuple(ifs.maps[i] for i in perm))
    try:
        a = classify_projection(ifs, theta, scan_depth=6)
    except DegenerateSet:
        assume(False)
    b = classify_projection(relabelled, theta, scan_depth=6)
    c = classify_projection(ifs, theta, scan_depth=6)
    assert a.kind == b.kind == c.kind
    assert a.dimension == pytest.approx(b.dimension, abs=1e-12)


# --------------------------------------------------------------------------
# delta_s
# --------------------------------------------------------------------------

@st.composite
def grid_subset(draw, k=6):
    n = 2**k
    idx = draw(st.lists(st.integers(0, n * n - 1), min_size=1, max_size=400, unique=True))
    pts = np.array([(i % n, i // n) for i in sorted(idx)], dtype=float) / n
    return pts, 2.0**-k


@given(grid_subset(), st.floats(0.2, 2.0))
def test_extraction_laws(data, s):
    pts, delta = data
    out = extract_delta_s_subset(pts, delta, s, 2.0, 0.0, 1e9, check=False)
    assert {tuple(p) for p in out} <= {tuple(p) for p in pts}
    assert min_separation(out) >= delta
    assert max_cube_excess(out, delta, s) <= 1 + 1e-12
    again = extract_delta_s_subset(pts[::-1], delta, s, 2.0, 0.0, 1e9, check=False)
    assert sorted(map(tuple, again)) == sorted(map(tuple, out))


@given(grid_subset(), st.floats(0.2, 2.0))
def test_sweep_keeps_sets_that_obey_the_bound(data, s):
    pts, delta = data
    first = extract_delta_s_subset(pts, delta, s, 2.0, 0.0, 1e9, check=False)
    second = extract_delta_s_subset(first, delta, s, s, 0.0, 1e9, check=False)
    assert len(second) == len(first)


@given(grid_subset(k=5), st.floats(0.05, 0.9), st.floats(0.05, 0.9))
def test_marstrand_count_monotone_in_tau(data, t1, t2):
    pts, delta = data
    lo, hi = sorted((t1, t2))
    # a larger tau lowers the threshold delta^tau m, so fewer directions qualify
    assert marstrand_bad_directions(pts, hi, delta)[1] <= marstrand_bad_directions(pts, lo, delta)[1]


# --------------------------------------------------------------------------
# constructions
# --------------------------------------------------------------------------

@given(dense_pair(), st.floats(0, math.pi), st.integers(2, 8), st.floats(0.01, 1.0))
def test_spacing_witness_band(ifs, theta, M, r_frac):
    r = float(ifs.maps[0].ratio) * r_frac
    try:
        w = spaced_points(ifs, theta, r, M, depth=12)
    except ResourceLimit:  # allowed outcome; the law constrains returned witnesses
        event("spaced_points budget exhausted")
        return
    assert len(w.points) == M and w.tau < r
    assert all(w.tau / 2 <= g <= 4 * w.tau for g in w.gaps)
    assert all(a < b for a, b in zip(w.points, w.points[1:]))


@given(dense_pair(), st.integers(2, 3), st.floats(0.3, 2.0), st.floats(0, math.pi))
def test_eroglu_conditions(ifs, N, eps, theta):
    try:
        res = eroglu_words(ifs, N, eps, theta, max_core=9, max_prefix=2_000_000)
    except ResourceLimit:  # allowed outcome; the law constrains returned words
        event("eroglu_words budget exhausted")
        return
    ws = res.words
    assert len(set(ws)) == N and {len(w) for w in ws} == {res.k}
    nf = normal_form(ifs)
    assert angle_dist(res.k * nf.alpha) <= eps
    phi = theta - res.prefix_length * nf.alpha
    vals = []
    for core in res.cores:
        y = compose_word(nf.ifs, core)(np.zeros((1, 2)))[0]
        vals.append(nf.rho**res.prefix_length * (y[0] * math.cos(phi) + y[1] * math.sin(phi)))
    assert max(abs(a - b) for a, b in itertools.combinations(vals, 2)) <= eps * nf.rho**res.k * (1 + 1e-9)


@given(dense_pair(), st.floats(0, math.pi), st.floats(0, math.pi),
       st.lists(st.floats(0.05, 1.0), min_size=2, max_size=4, unique=True))
def test_tangent_gaps_non_increasing(ifs, t1, t2, eps):
    sched = sorted(eps, reverse=True)
    assume(all(a > b for a, b in zip(sched, sched[1:])))
    steps = weak_tangent_sequence(ifs, t1, t2, sched, depth=8)
    gaps = [s.rho_gap for s in steps]
    assert all(s.rho_gap <= s.epsilon for s in steps)
    assert all(a >= b for a, b in zip(gaps, gaps[1:]))


@given(st.lists(st.fractions(max_denominator=30), min_size=3, max_size=3, unique=True),
       st.fractions(min_value=F(1, 30), max_value=100, max_denominator=30),
       st.fractions(max_denominator=30))
def test_xi_affine_invariance(t, a, b):
    t = sorted(t)
    assert xi(*(a * v + b for v in t)) == xi(*t)


@given(st.sampled_from([F(1, 3), F(1, 4), F(1, 5), F(2, 7)]), irrational,
       st.one_of(st.just(None), irrational), st.floats(0.6, 1.5), st.floats(-0.5, 0.5))
def test_reduction_output(rho, a1, a2, x, y):
    r2 = Angle.zero() if a2 is None else Angle.irrational_radians(a2)
    ifs = IFS2D((Similarity2D(rho, Angle.irrational_radians(a1), False, (0, 0)),
                 Similarity2D(rho, r2, False, (x, y))))
    out = reduction_subsystem(ifs)
    s1, s2 = out.maps
    assert s1.ratio == s2.ratio
    assert s1.rotation == s2.rotation and s1.reflect == s2.reflect
    box = seed_box(out)
    assert _boxes_disjoint(_cylinder_box(out, (0,), box), _cylinder_box(out, (1,), box))


# --------------------------------------------------------------------------
# cli
# --------------------------------------------------------------------------

@given(line_ifs(n_maps=st.integers(2, 3), signed=False), st.integers(0, 10**6))
def test_cli_deterministic(ifs, seed):
    import yaml

    cfg = {"maps": [{"ratio": str(m.ratio), "translation": str(m.translation)} for m in ifs.maps]}
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        (tmp / "c.yaml").write_text(yaml.safe_dump(cfg))
        outs = []
        for name in ("a", "b"):
            code = main(["dim", "--config", str(tmp / "c.yaml"), "--out", str(tmp / name),
                         "--depth", "8", "--seed", str(seed)])
            assert code in (0, 2, 3)
            manifest = json.loads((tmp / name / "manifest.json").read_text())
            manifest["arguments"].pop("out")
            files = {f: (tmp / name / f).read_text() for f in manifest["outputs"]}
            outs.append((code, manifest, files))
        assert outs[0] == outs[1]
