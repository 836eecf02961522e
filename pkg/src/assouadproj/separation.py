"""Weak separation scans, exact-overlap directions and the Bandt-Graf family.

A scan explores difference maps ``h = S_e^{-1} o S_f`` for pairs of paths
``e, f`` that start at a vertex ``v`` (for an IFS: pairs of words).  Pairs
are grown by always extending the path with the larger cylinder, and a pair
is kept only while the two cylinders' hulls still meet, since a pair of
disjoint cylinders cannot produce a map near the identity.  Difference maps
are deduplicated, so the work is proportional to the number of distinct
neighbour maps rather than the number of word pairs.

The distance of ``h`` to the identity is ``|ratio(h) - 1| + |translation(h)|``
measured in coordinates where the attractor's hull at the scan vertex is
``[0, 1]`` (see :func:`identity_distance`).
Only pairs with ratio-comparable cylinders, ``c_min < |ratio(h)| < 1/c_min``,
and with both paths closed at ``v`` contribute to the minimum.  Pairs whose
difference map is exactly the identity (exact overlaps) are counted but
never contribute.
"""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .coverage import all_words
from .errors import ExactArithmeticRequired, GraphError, ResourceLimit, Unsupported
from .graph_directed import GraphDirectedSystem, _hulls
from .ifs import (
    IFS1D,
    IFS2D,
    Angle,
    Similarity1D,
    Word,
    _orth_exact,
    compose_word,
    rotation_group,
    word_str,
)

HOLDS = "SeparationHolds"
FAILS = "SeparationFailsEvidence"
INCONCLUSIVE = "Inconclusive"

DEFAULT_GAP = 1e-2
DEFAULT_SCAN_BUDGET = 5_000_000
FLOAT_OVERLAP_TOL = 1e-12


@dataclass(frozen=True)
class Verdict:
    kind: str
    gap: float | None = None

    def __str__(self) -> str:
        return f"{self.kind}({self.gap:.6g})" if self.kind == HOLDS else self.kind


@dataclass
class ScanReport:
    depth: int
    min_distance: float
    witness_pair: tuple[Word, Word] | None
    trend: list[tuple[int, float]]
    verdict: Verdict
    exact: bool
    states: int = 0
    exact_overlaps: int = 0
    trend_witnesses: list = field(default_factory=list, repr=False)
    witness_map: tuple | None = None  # (ratio, translation) of the witness difference map
    frame: tuple = (0, 1)  # (lo, length) of the hull the distance is measured against

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["depth", "minDistance", "witnessE", "witnessF"])
            for (d, m), wit in zip(self.trend, self.trend_witnesses):
                e, f = wit if wit is not None else ("", "")
                w.writerow([d, repr(m), word_str(e) if wit else "", word_str(f) if wit else ""])


def _verdict(trend: list[tuple[int, float]], gap: float) -> Verdict:
    """Classify a running-minimum trend by its values at the doubling checkpoints.

    With ``D`` the final depth, write ``m(d)`` for the trend value at depth
    ``d``.  Holds: ``m(D) >= gap`` and ``m(D/2) == m(D)`` (stabilized).
    Fails (evidence only): ``m(D) < gap`` and
    ``m(D/4) > m(D/2) > m(D)``, i.e. still falling across two doublings.
    Anything else is inconclusive.
    """
    final = trend[-1][1]
    if math.isinf(final):
        return Verdict(HOLDS, math.inf)
    depth = trend[-1][0]
    at = dict(trend)
    half = at[max(1, depth // 2)]
    if final >= gap:
        return Verdict(HOLDS, final) if half == final else Verdict(INCONCLUSIVE)
    quarter = at[max(1, depth // 4)]
    if depth >= 4 and quarter > half > final:
        return Verdict(FAILS)
    return Verdict(INCONCLUSIVE)


def _scan(edges, into, hulls, v, max_depth, gap, budget, frame=(0, 1)) -> ScanReport:
    """Core neighbour-map search; see the module docstring.

    ``edges`` are ``(src, dst, ratio, translation)``; ``hulls[u] = (lo, hi)``.
    Distances are :func:`identity_distance` against ``frame``.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    exact = all(isinstance(x, (int, Fraction)) for e in edges for x in e[2:])
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    cmin = min(abs(e[2]) for e in edges)
    base, scale = frame

    def key(r, t, ue, uf):
        if exact:
            return (r, t, ue, uf)
        return (round(r, 12), round(t, 12), ue, uf)

    seen = {key(one, zero, v, v)}
    levels: dict[int, list] = {0: [(one, zero, v, v, (), ())]}
    best_at = [math.inf] * (max_depth + 1)
    wit_at: list = [None] * (max_depth + 1)
    map_at: list = [None] * (max_depth + 1)
    overlaps = 0
    states = 0
    for depth in range(0, max_depth + 1):
        queue = levels.pop(depth, [])
        i = 0
        while i < len(queue):
            r, t, ue, uf, we, wf = queue[i]
            i += 1
            if abs(r) <= 1:
                # S_a^{-1} o h
                children = []
                for k in into[ue]:
                    s, _, ca, ta = edges[k]
                    children.append(((r / ca), (t - ta) / ca, s, uf, we + (k,), wf))
            else:
                children = []
                for k in into[uf]:
                    s, _, cb, tb = edges[k]
                    children.append((r * cb, r * tb + t, ue, s, we, wf + (k,)))
            for r2, t2, ue2, uf2, we2, wf2 in children:
                d2 = max(len(we2), len(wf2))
                if d2 > max_depth:
                    continue
                lo_e, hi_e = hulls[ue2]
                lo_f, hi_f = hulls[uf2]
                a, b = r2 * lo_f + t2, r2 * hi_f + t2
                if min(a, b) > hi_e or max(a, b) < lo_e:
                    continue
                if ue2 == v and uf2 == v:
                    dist = abs(r2 - 1) + abs(t2 + (r2 - 1) * base) / scale
                    if dist == 0 or (not exact and dist <= FLOAT_OVERLAP_TOL):
                        overlaps += 1
                        continue
                kk = key(r2, t2, ue2, uf2)
                if kk in seen:
                    continue
                seen.add(kk)
                states += 1
                if states > budget:
                    raise ResourceLimit(f"scan exceeded {budget} difference maps")
                if ue2 == v and uf2 == v and cmin < abs(r2) < 1 / cmin:
                    dist = float(abs(r2 - 1) + abs(t2 + (r2 - 1) * base) / scale)
                    if dist < best_at[d2]:
                        best_at[d2], wit_at[d2], map_at[d2] = dist, (we2, wf2), (r2, t2)
                item = (r2, t2, ue2, uf2, we2, wf2)
                if d2 == depth:
                    queue.append(item)
                else:
                    levels.setdefault(d2, []).append(item)
    trend, wits, best, wit, hmap = [], [], math.inf, None, None
    for d in range(1, max_depth + 1):
        if best_at[d] < best:
            best, wit, hmap = best_at[d], wit_at[d], map_at[d]
        trend.append((d, best))
        wits.append(wit)
    return ScanReport(
        depth=max_depth,
        min_distance=best,
        witness_pair=wit,
        trend=trend,
        verdict=_verdict(trend, gap),
        exact=exact,
        states=states,
        exact_overlaps=overlaps,
        trend_witnesses=wits,
        witness_map=hmap,
        frame=frame,
    )


def wsp_scan(
    ifs: IFS1D,
    max_depth: int,
    isolation_gap: float = DEFAULT_GAP,
    budget: int = DEFAULT_SCAN_BUDGET,
) -> ScanReport:
    """Scan the difference maps ``S_i^{-1} o S_j`` of a 1D IFS up to word length ``max_depth``.

    Witness words are 0-based map indices and witness maps are in the IFS's
    own coordinates.  Distances are taken against the attractor's convex hull
    (see :func:`identity_distance`), so distances and verdicts do not change
    under orientation-preserving affine conjugacy.
    """
    if not isinstance(ifs, IFS1D):
        raise TypeError("wsp_scan expects an IFS1D")
    edges = [(0, 0, m.ratio, m.translation) for m in ifs.maps]
    lo, length = _hulls(1, edges, allow_degenerate=True)
    hulls = {0: (lo[0], lo[0] + length[0])}
    frame = (lo[0], length[0] if length[0] > 0 else 1)
    return _scan(edges, {0: tuple(range(len(edges)))}, hulls, 0, max_depth, isolation_gap, budget, frame)


def gdwsp_scan(
    sys: GraphDirectedSystem,
    vertex: int,
    max_depth: int,
    isolation_gap: float = DEFAULT_GAP,
    budget: int = DEFAULT_SCAN_BUDGET,
) -> ScanReport:
    """As :func:`wsp_scan`, over pairs of cycles at ``vertex``; witnesses are edge indices."""
    if not isinstance(sys, GraphDirectedSystem):
        raise GraphError("gdwsp_scan expects a GraphDirectedSystem")
    if vertex not in sys.vertices:
        raise GraphError(f"unknown vertex {vertex}")
    edges = [(e.src, e.dst, e.map.ratio, e.map.translation) for e in sys.edges]
    hulls = dict(enumerate(sys.hulls))
    lo, hi = hulls[vertex]
    frame = (lo, hi - lo if hi > lo else 1)
    return _scan(edges, sys.into, hulls, vertex, max_depth, isolation_gap, budget, frame)


def difference_map(maps, e: Word, f: Word) -> tuple:
    """``(ratio, translation)`` of ``S_e^{-1} o S_f`` for 1D maps (an IFS or a list of edge maps)."""
    if isinstance(maps, IFS1D):
        maps = maps.maps
    elif isinstance(maps, GraphDirectedSystem):
        maps = [edge.map for edge in maps.edges]
    ce, te = 1, 0
    for k in e:
        ce, te = ce * maps[k].ratio, ce * maps[k].translation + te
    cf, tf = 1, 0
    for k in f:
        cf, tf = cf * maps[k].ratio, cf * maps[k].translation + tf
    return cf / ce, (tf - te) / ce


def identity_distance(hmap: tuple, frame=(0, 1)) -> float:
    """``|r - 1| + |h(lo) - lo| / length`` for ``h x = r x + t`` and ``frame = (lo, length)``.

    With the default frame this is ``|r - 1| + |t|``.  Scans measure against
    the hull ``[lo, lo + length]`` of the attractor, which makes the distance
    invariant under orientation-preserving affine conjugacy; pass a report's
    ``frame`` to reproduce its distances.
    """
    r, t = hmap
    lo, length = frame
    return float(abs(r - 1) + abs(t + (r - 1) * lo) / length)


# --------------------------------------------------------------------------
# Exact overlap directions
# --------------------------------------------------------------------------

def _direction_angle(dx, dy) -> Angle:
    """The direction in [0, pi) orthogonal to the nonzero vector ``(dx, dy)``."""
    if dy == 0:
        return Angle.from_tangent(None)
    return Angle.from_tangent(Fraction(-dx) / dy)


def _tangent_key(a: Angle):
    t = a.exact_tangent()
    return ("v",) if t is None else ("t", t)


def _direction_vector(a: Angle):
    t = a.exact_tangent()
    return (Fraction(0), Fraction(1)) if t is None else (Fraction(1), t)


def exact_overlap_directions(ifs: IFS2D, max_depth: int) -> list[tuple[Angle, Word, Word]]:
    """All ``theta`` in [0, pi) where two distinct words of length ``<= max_depth``
    satisfy ``pi_theta o S_i = pi_theta o S_j``, each with its first witness pair.
    """
    if rotation_group(ifs).is_dense:
        raise Unsupported("dense rotation group")
    if not ifs.exact:
        raise ExactArithmeticRequired("exact_overlap_directions needs exact (Fraction) data")
    if any(_orth_exact(m.rotation, m.reflect) is None for m in ifs.maps):
        raise ExactArithmeticRequired("rotations must be quarter turns for exact projection data")
    words = [w for n in range(1, max_depth + 1) for w in all_words(len(ifs), n)]
    comp = [compose_word(ifs, w) for w in words]
    found: dict = {}

    def add(angle: Angle, i: int, j: int):
        k = _tangent_key(angle)
        if k not in found:
            found[k] = (angle, words[i], words[j])

    groups: dict = {}
    for idx, s in enumerate(comp):
        groups.setdefault(abs(s.ratio), []).append(idx)
    for members in groups.values():
        for i, j in itertools.combinations(members, 2):
            si, sj = comp[i], comp[j]
            dx = si.translation[0] - sj.translation[0]
            dy = si.translation[1] - sj.translation[1]
            same_linear = (si.ratio == sj.ratio and si.rotation == sj.rotation
                           and si.reflect == sj.reflect)
            if same_linear:
                if dx != 0 or dy != 0:
                    add(_direction_angle(dx, dy), i, j)
                continue
            # linear parts agree after projection iff c_i O_i^T e = c_j O_j^T e
            sign = 1 if si.ratio == sj.ratio else -1
            for cand in _fixed_directions(si, sj, sign):
                e = _direction_vector(cand)
                if e[0] * dx + e[1] * dy == 0:
                    add(cand, i, j)
    return sorted(found.values(), key=lambda x: x[0].radians)


def _fixed_directions(si, sj, sign) -> list[Angle]:
    """Directions ``e`` (mod pi) with ``O_i^T e = sign * O_j^T e``, over quarter-turn data."""
    mi = _orth_exact(si.rotation, si.reflect)
    mj = _orth_exact(sj.rotation, sj.reflect)
    out = []
    for tan in (Fraction(0), Fraction(1), Fraction(-1), None):
        e = (Fraction(0), Fraction(1)) if tan is None else (Fraction(1), tan)
        wi = (mi[0][0] * e[0] + mi[1][0] * e[1], mi[0][1] * e[0] + mi[1][1] * e[1])
        wj = (mj[0][0] * e[0] + mj[1][0] * e[1], mj[0][1] * e[0] + mj[1][1] * e[1])
        if wi == (sign * wj[0], sign * wj[1]):
            out.append(Angle.from_tangent(tan))
    return out


def project_map_values(ifs: IFS2D, word: Word, theta: Angle, points) -> list:
    """Exact values of ``<e, S_word(x)>`` for a rational direction vector ``e`` of ``theta``."""
    s = compose_word(ifs, word)
    e = _direction_vector(theta)
    m = _orth_exact(s.rotation, s.reflect)
    out = []
    for x in points:
        y0 = s.ratio * (m[0][0] * x[0] + m[0][1] * x[1]) + s.translation[0]
        y1 = s.ratio * (m[1][0] * x[0] + m[1][1] * x[1]) + s.translation[1]
        out.append(e[0] * y0 + e[1] * y1)
    return out


# --------------------------------------------------------------------------
# Bandt-Graf family
# --------------------------------------------------------------------------

DEFAULT_T_TOL = Fraction(1, 10**30)


def bandt_graf_parameter(c, tol=DEFAULT_T_TOL) -> Fraction:
    """Partial sum of ``t = sum_{k >= 0} c^(2^k)`` with tail below ``tol``.

    The tail after ``K`` terms is at most ``c^(2^K) / (1 - c)``.
    """
    c = Fraction(c)
    if not 0 < c < 1:
        raise ValueError("c must lie in (0, 1)")
    t, k = Fraction(0), 0
    while True:
        t += c ** (2**k)
        k += 1
        if c ** (2**k) / (1 - c) < tol:
            return t


def bandt_graf_ifs(c, tol=DEFAULT_T_TOL) -> IFS1D:
    """The three-map system ``{cx, cx + 1, cx + t}`` with exact rational ``t``."""
    c = Fraction(c)
    t = bandt_graf_parameter(c, tol)
    return IFS1D((Similarity1D(c, Fraction(0)), Similarity1D(c, Fraction(1)), Similarity1D(c, t)))


def bandt_graf_leftover(c, m: int, terms: int = 8) -> dict[str, float]:
    """Both readings of the leftover translation ``sum_l c^(2^l - 2^m)``.

    One sums from ``l = m`` (its first term is 1), the other from ``l = m + 1``.
    """
    c = Fraction(c)
    from_m = sum(c ** (2**l - 2**m) for l in range(m, m + terms))
    return {"from_m": float(from_m), "from_m_plus_1": float(from_m - 1)}
