"""(delta, s)-sets: validation, dyadic subset extraction and bad projection directions.

A finite set ``P`` is a (delta, s)-set with parameters ``(A, eps)`` when it is
delta-separated and ``|P & B(x, r)| <= A delta^-eps (r / delta)^s`` for all
balls.  Balls are checked at points of ``P`` and dyadic radii
``delta, 2 delta, ..., <= 2``.  Dyadic cubes of side ``2^j delta`` are
half-open, and ``d(Q)`` below denotes the side length of ``Q``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import InvalidInput, Unsupported

# Dimensional constants for d = 2, calibrated against the brute-force oracle
# (see demos/calibrate_kappa.py) and frozen with a 2x safety margin:
#   |P| >= (c / C) delta^-s / KAPPA_CARD   and   |P & B(x, r)| <= KAPPA_BALL (r / delta)^s.
KAPPA_CARD = 0.4
KAPPA_BALL = 8.0

_SEP_SLACK = 1e-9


class DeltaSCheck(NamedTuple):
    ok: bool
    witness: tuple | None  # (x, r, count) maximizing count / bound


@dataclass(frozen=True)
class DeltaSSet:
    points: np.ndarray
    delta: float
    s: float
    A: float = 1.0
    eps: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "points", _as_points(self.points))

    def __len__(self) -> int:
        return len(self.points)

    def check(self) -> DeltaSCheck:
        return check_delta_s(self.points, self.delta, self.s, self.A, self.eps)


def _as_points(points) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    if p.ndim == 1:
        p = p[:, None]
    return p


def dyadic_radii(delta: float) -> list[float]:
    out, r = [], delta
    while r <= 2 + 1e-12:
        out.append(r)
        r *= 2
    return out


def min_separation(points) -> float:
    p = _as_points(points)
    if len(p) < 2:
        return math.inf
    d, _ = cKDTree(p).query(p, k=2)
    return float(d[:, 1].min())


def ball_counts(points, r: float) -> np.ndarray:
    """``|P & B(x, r)|`` (closed balls) for every ``x`` in ``P``."""
    p = _as_points(points)
    return cKDTree(p).query_ball_point(p, r, return_length=True)


def check_delta_s(points, delta: float, s: float, A: float, eps: float) -> DeltaSCheck:
    """Separation plus the ball bound at every point and dyadic radius."""
    p = _as_points(points)
    if len(p) == 0:
        return DeltaSCheck(True, None)
    separated = min_separation(p) >= delta * (1 - _SEP_SLACK)
    worst, witness = -math.inf, None
    tree = cKDTree(p)
    for r in dyadic_radii(delta):
        counts = tree.query_ball_point(p, r * (1 + _SEP_SLACK), return_length=True)
        bound = A * delta ** (-eps) * (r / delta) ** s
        i = int(np.argmax(counts))
        ratio = counts[i] / bound
        if ratio > worst:
            worst, witness = ratio, (tuple(float(v) for v in p[i]), r, int(counts[i]))
    return DeltaSCheck(bool(separated and worst <= 1 + 1e-12), witness)


# --------------------------------------------------------------------------
# Extraction
# --------------------------------------------------------------------------

def _cells(points: np.ndarray, side: float) -> np.ndarray:
    return np.floor(points / side + 1e-9).astype(np.int64)


def cube_counts(points, delta: float, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Occupied cubes of side ``2^j delta`` and their point counts."""
    p = _as_points(points)
    cells = _cells(p, delta * 2**j)
    return np.unique(cells, axis=0, return_counts=True)


def _descending_lex(points: np.ndarray) -> np.ndarray:
    """Indices sorting points in descending lexicographic coordinate order."""
    keys = tuple(points[:, i] for i in reversed(range(points.shape[1])))
    return np.lexsort(keys)[::-1]


def extract_delta_s_subset(
    P0, delta: float, s: float, t: float, c: float, C: float, check: bool = True
) -> np.ndarray:
    """Dyadic sweep extracting a subset whose cube counts obey ``(d(Q)/delta)^s``.

    One point is kept per occupied delta-cube, then for ``j = 1, 2, ...`` every
    cube ``Q`` of side ``2^j delta`` holding more than ``(2^j)^s`` points loses
    points (largest first in lexicographic order) until it holds
    ``floor((2^j)^s)``, which is at least half the bound.  The sweep stops once
    a single cube contains everything.
    """
    p = _as_points(P0)
    if s > t:
        raise InvalidInput(f"need s <= t, got s={s}, t={t}")
    k = -math.log2(delta)
    if abs(k - round(k)) > 1e-9:
        raise InvalidInput("delta must be a power of two")
    if check and len(p):
        sep = min_separation(p)
        if sep < delta * (1 - _SEP_SLACK):
            raise InvalidInput(f"P0 is not delta-separated (min distance {sep})")
        if len(p) < c * delta ** (-t) * (1 - 1e-12):
            raise InvalidInput(f"|P0| = {len(p)} < c delta^-t = {c * delta ** (-t)}")
        res = check_delta_s(p, delta, t, C, 0.0)
        if res.witness is not None and res.witness[2] > C * (res.witness[1] / delta) ** t * (1 + 1e-12):
            raise InvalidInput(f"ball bound C (r/delta)^t fails at {res.witness}")
    if len(p) == 0:
        return p
    # one point per delta-cube (smallest in lexicographic order)
    order = np.lexsort(tuple(p[:, i] for i in reversed(range(p.shape[1]))))
    p = p[order]
    _, first = np.unique(_cells(p, delta), axis=0, return_index=True)
    keep = np.sort(first)
    p = p[keep]
    j = 0
    while True:
        j += 1
        side = delta * 2**j
        cells = _cells(p, side)
        uniq, inv, counts = np.unique(cells, axis=0, return_inverse=True, return_counts=True)
        inv = inv.ravel()
        limit = math.floor((2**j) ** s + 1e-9)
        if counts.max() > limit:
            # rank points inside each cube, largest lexicographic first
            lex = _descending_lex(p)
            order = lex[np.argsort(inv[lex], kind="stable")]
            starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
            rank = np.empty(len(p), dtype=np.int64)
            rank[order] = np.arange(len(p)) - np.repeat(starts, counts)
            p = p[rank >= counts[inv] - limit]
        if len(uniq) == 1:
            return p


def max_cube_excess(points, delta: float, s: float, max_j: int | None = None) -> float:
    """Largest ``|P & Q| / (d(Q)/delta)^s`` over all occupied dyadic cubes (brute force)."""
    p = _as_points(points)
    if len(p) == 0:
        return 0.0
    worst, j = 0.0, 0
    while True:
        uniq, counts = cube_counts(p, delta, j)
        worst = max(worst, float(counts.max()) / (2**j) ** s)
        if len(uniq) == 1 or (max_j is not None and j >= max_j):
            return worst
        j += 1


def frostman_subset(P: DeltaSSet, a: float) -> DeltaSSet:
    """A (delta, 1)-subset of a (delta, s)-set with ``s >= 1`` and ``|P| >= a delta^(eps - s)``."""
    if P.s < 1:
        raise Unsupported("the (delta,1)-subset corollary needs s >= 1; use P unchanged")
    d, eps = P.delta, P.eps
    if len(P) < a * d ** (eps - P.s) * (1 - 1e-12):
        raise InvalidInput(f"|P| = {len(P)} < a delta^(eps-s) = {a * d ** (eps - P.s)}")
    C = P.A * d ** (-eps)
    c = a * d**eps
    pts = extract_delta_s_subset(P.points, d, 1.0, P.s, c, C)
    return DeltaSSet(pts, d, 1.0, KAPPA_BALL, 0.0)


# --------------------------------------------------------------------------
# Bad projection directions
# --------------------------------------------------------------------------

def direction_grid(delta: float) -> np.ndarray:
    """The angles ``j delta`` for ``0 <= j < pi / delta``."""
    return np.arange(int(math.ceil(math.pi / delta))) * delta


def projection_counts(points, delta: float, thetas: np.ndarray, chunk: int = 256) -> np.ndarray:
    """``N_delta(pi_theta P)`` by bucketing projections into delta-bins."""
    p = _as_points(points)
    out = np.empty(len(thetas), dtype=np.int64)
    for a in range(0, len(thetas), chunk):
        th = thetas[a : a + chunk]
        proj = p @ np.vstack([np.cos(th), np.sin(th)])
        bins = np.sort(np.floor(proj / delta).astype(np.int64), axis=0)
        out[a : a + chunk] = 1 + np.count_nonzero(np.diff(bins, axis=0), axis=0)
    return out


def marstrand_bad_directions(P, tau: float, delta: float | None = None) -> tuple[np.ndarray, int]:
    """Grid directions whose projection needs at most ``delta^tau m`` delta-bins."""
    if isinstance(P, DeltaSSet):
        pts, delta = P.points, P.delta
    else:
        pts = _as_points(P)
        if delta is None:
            raise InvalidInput("delta is required for raw point arrays")
    if not 0 < tau < 1:
        raise InvalidInput("tau must lie in (0, 1)")
    m = len(pts)
    thetas = direction_grid(delta)
    counts = projection_counts(pts, delta, thetas)
    bad = thetas[counts <= delta**tau * m]
    return bad, len(bad)


def random_segment_set(delta: float, rng: np.random.Generator) -> np.ndarray:
    """Delta-spaced points on a seeded random segment inside the unit square."""
    length = rng.uniform(0.5, 1.0)
    phi = rng.uniform(0, math.pi)
    u = np.array([math.cos(phi), math.sin(phi)])
    n = int(length / delta) + 1
    pts = np.arange(n)[:, None] * delta * u
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    offset = rng.uniform(0, 1, size=2) * np.maximum(1 - span, 0) - lo
    return pts + offset


@dataclass(frozen=True)
class MarstrandRow:
    delta: float
    tau: float
    m: int
    bad_count: int
    bound: float  # delta^(tau-1) log(1/delta)
    fitted_c: float


def marstrand_experiment(deltas, taus, seed: int = 0) -> list[MarstrandRow]:
    """Bad-direction counts against ``delta^(tau-1) log(1/delta)`` over a scale ladder."""
    rng = np.random.default_rng(seed)
    rows = []
    for delta in deltas:
        pts = random_segment_set(delta, rng)
        for tau in taus:
            _, n = marstrand_bad_directions(pts, tau, delta)
            bound = delta ** (tau - 1) * math.log(1 / delta)
            rows.append(MarstrandRow(delta, tau, len(pts), n, bound, n / bound))
    return rows


def write_marstrand_csv(rows, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["delta", "tau", "m", "badCount", "bound", "fittedC"])
        for r in rows:
            w.writerow([repr(r.delta), repr(r.tau), r.m, r.bad_count, repr(r.bound), repr(r.fitted_c)])


def write_points_csv(points, path: str | Path) -> None:
    p = _as_points(points)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y"][: p.shape[1]])
        for row in p:
            w.writerow([repr(float(v)) for v in row])


def read_points_csv(path: str | Path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return _as_points(np.array([[float(v) for v in r] for r in rows[1:]], dtype=float))
