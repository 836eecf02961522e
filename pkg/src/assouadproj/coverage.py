"""Dyadic covers of attractors and of their projections.

A cover at scale exponent ``k`` is the set of closed dyadic cubes of side
``2**-k`` meeting some cylinder ``S_w(B)`` whose diameter is at most
``2**-k``; ``B`` is a box known to contain the attractor.  Cubes are stored
as integer lattice coordinates, so the cube ``(i, j)`` is
``[i h, (i+1) h] x [j h, (j+1) h]`` with ``h = 2**-k``.

Throughout, a closed interval ``[lo, hi]`` is taken to meet the cubes with
indices ``floor(lo/h) .. max(floor(lo/h), ceil(hi/h) - 1)``; an interval that
ends exactly on a grid line does not claim the cube starting there.
"""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptySet, InvalidInput, ResolutionError, ResourceLimit
from .ifs import (
    IFS1D,
    IFS2D,
    Angle,
    Word,
    _orth_exact,
    fixed_point,
)

DEFAULT_BUDGET = 50_000_000
_CHUNK = 250_000


@dataclass(frozen=True)
class DyadicCover:
    """Occupied dyadic cubes of side ``2**-k``.

    ``cubes`` is an ``(n, dim)`` int64 array, unique rows in lexicographic order.
    """

    dim: int
    k: int
    cubes: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.cubes, dtype=np.int64).reshape(-1, self.dim)
        if len(c):
            c = np.unique(c, axis=0)
        c.setflags(write=False)
        object.__setattr__(self, "cubes", c)

    @property
    def h(self) -> float:
        return 2.0 ** -self.k

    def __len__(self) -> int:
        return len(self.cubes)

    @property
    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        if not len(self.cubes):
            raise EmptySet("empty cover has no bounding box")
        return self.cubes.min(axis=0) * self.h, (self.cubes.max(axis=0) + 1) * self.h

    def centers(self) -> np.ndarray:
        return (self.cubes + 0.5) * self.h

    def coarsen(self, j: int) -> "DyadicCover":
        if j > self.k:
            raise ResolutionError(f"cannot refine a scale-{self.k} cover to scale {j}")
        if j == self.k:
            return self
        return DyadicCover(self.dim, j, self.cubes >> (self.k - j))

    def __eq__(self, other):
        if not isinstance(other, DyadicCover):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.k == other.k
            and np.array_equal(self.cubes, other.cubes)
        )

    def __hash__(self):
        return hash((self.dim, self.k, self.cubes.tobytes()))

    def issubset(self, other: "DyadicCover") -> bool:
        if self.k != other.k or self.dim != other.dim:
            raise InvalidInput("covers must share scale and dimension")
        a = _encode(self.cubes)
        b = _encode(other.cubes)
        return bool(np.isin(a, b).all())

    # export ----------------------------------------------------------------
    def to_csv(self, path: str | Path) -> None:
        """Write one row per cube: ``scaleExponent, i[, j]``."""
        cols = ["scaleExponent"] + ["x", "y"][: self.dim]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            for row in self.cubes:
                w.writerow([self.k, *map(int, row)])

    @classmethod
    def from_csv(cls, path: str | Path) -> "DyadicCover":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        header, body = rows[0], rows[1:]
        dim = len(header) - 1
        if not body:
            raise EmptySet("cover CSV has no rows")
        ks = {int(r[0]) for r in body}
        if len(ks) != 1:
            raise InvalidInput("mixed scale exponents in cover CSV")
        return cls(dim, ks.pop(), np.array([[int(v) for v in r[1:]] for r in body]))

    def to_svg(self, path: str | Path, size: int = 512) -> None:
        """Raster-style SVG of a planar cover (one rect per cube)."""
        if self.dim != 2:
            raise InvalidInput("SVG export is for planar covers")
        lo = self.cubes.min(axis=0)
        span = int((self.cubes.max(axis=0) - lo + 1).max())
        px = size / span
        rects = []
        for i, j in self.cubes - lo:
            y = (span - 1 - j) * px
            rects.append(f'<rect x="{i * px:.4f}" y="{y:.4f}" width="{px:.4f}" height="{px:.4f}"/>')
        Path(path).write_text(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}"><g fill="black" shape-rendering="crispEdges">'
            + "".join(rects)
            + "</g></svg>\n"
        )


def _encode(cubes: np.ndarray) -> np.ndarray:
    """Order-preserving int64 key for lattice rows (coordinates within +-2**30)."""
    cubes = np.asarray(cubes, dtype=np.int64)
    if cubes.shape[1] == 1:
        return cubes[:, 0].copy()
    return (cubes[:, 0] + (1 << 30)) * (1 << 31) + (cubes[:, 1] + (1 << 30))


def _decode(keys: np.ndarray, dim: int) -> np.ndarray:
    if dim == 1:
        return keys.reshape(-1, 1)
    x = keys // (1 << 31) - (1 << 30)
    y = keys % (1 << 31) - (1 << 30)
    return np.stack([x, y], axis=1)


def interval_cells(lo, hi, h):
    """First and last index of the closed cells of side ``h`` met by ``[lo, hi]``."""
    i0 = np.floor(np.asarray(lo) / h).astype(np.int64)
    i1 = np.maximum(i0, np.ceil(np.asarray(hi) / h).astype(np.int64) - 1)
    return i0, i1


# --------------------------------------------------------------------------
# Seed boxes
# --------------------------------------------------------------------------

def _signed_orth(ifs):
    """Per map: (|ratio|, integer orthogonal matrix) or None if not box preserving."""
    out = []
    for m in ifs.maps:
        if ifs.dim == 1:
            r = m.ratio
            out.append((abs(r), ((1 if r > 0 else -1,),), (m.translation,)))
            continue
        mat = _orth_exact(m.rotation, m.reflect)
        if mat is None:
            return None
        out.append((m.ratio, mat, m.translation))
    return out


def _solve(a: list[list], b: list) -> list:
    """Gaussian elimination that keeps Fractions exact."""
    n = len(b)
    a = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _hull_box_exact(ifs, data):
    """Attractor bounding box for box-preserving maps by policy iteration.

    The support function on the signed axis directions satisfies
    ``h(u) = max_i |c_i| h(M_i^T u) + t_i . u``.
    """
    d = ifs.dim
    dirs = [(a, s) for a in range(d) for s in (1, -1)]
    index = {u: n for n, u in enumerate(dirs)}

    def pull(mat, u):
        a, s = u
        row = mat[a]  # M^T e_a is row a of M
        for b, v in enumerate(row):
            if v != 0:
                return (b, s * v)
        raise AssertionError

    def value(i, u, h):
        c, mat, t = data[i]
        return c * h[index[pull(mat, u)]] + s_dot(t, u)

    def s_dot(t, u):
        a, s = u
        return s * t[a]

    policy = [0] * len(dirs)
    for _ in range(100):
        n = len(dirs)
        a = [[Fraction(0) if isinstance(data[0][0], Fraction) else 0.0] * n for _ in range(n)]
        b = []
        for r, u in enumerate(dirs):
            c, mat, t = data[policy[r]]
            a[r][r] += 1
            a[r][index[pull(mat, u)]] -= c
            b.append(s_dot(t, u))
        h = _solve(a, b)
        changed = False
        for r, u in enumerate(dirs):
            vals = [value(i, u, h) for i in range(len(data))]
            best = max(range(len(data)), key=lambda i: vals[i])
            if vals[best] > vals[policy[r]] + (0 if isinstance(vals[best], Fraction) else 1e-15):
                policy[r] = best
                changed = True
        if not changed:
            break
    lo = [-h[index[(a, -1)]] for a in range(d)]
    hi = [h[index[(a, 1)]] for a in range(d)]
    return lo, hi


def seed_box(ifs: IFS1D | IFS2D) -> tuple[np.ndarray, np.ndarray]:
    """A box containing the attractor (tight for box-preserving maps)."""
    data = _signed_orth(ifs)
    if data is not None:
        lo, hi = _hull_box_exact(ifs, data)
        return np.array([float(v) for v in lo]), np.array([float(v) for v in hi])
    fps = np.array([fixed_point(m) for m in ifs.maps], dtype=float).reshape(len(ifs), -1)
    x0 = fps.mean(axis=0)
    rad = max(
        float(np.linalg.norm(m(x0[None, :])[0] - x0)) / (1 - float(m.ratio)) for m in ifs.maps
    )
    lo, hi = x0 - rad, x0 + rad
    mats = [m.linear for m in ifs.maps]
    ts = [np.array([float(v) for v in m.translation]) for m in ifs.maps]
    for _ in range(60):
        corners = _box_corners(lo, hi)
        imgs = np.concatenate([corners @ a.T + t for a, t in zip(mats, ts)])
        lo = np.maximum(lo, imgs.min(axis=0))
        hi = np.minimum(hi, imgs.max(axis=0))
    return lo, hi


def _box_corners(lo, hi) -> np.ndarray:
    return np.array(list(itertools.product(*zip(lo, hi))), dtype=float)


def _linear_parts(ifs):
    if ifs.dim == 1:
        mats = [np.array([[float(m.ratio)]]) for m in ifs.maps]
        ts = [np.array([float(m.translation)]) for m in ifs.maps]
    else:
        mats = [m.linear for m in ifs.maps]
        ts = [np.array([float(v) for v in m.translation]) for m in ifs.maps]
    rs = np.array([abs(float(m.ratio)) for m in ifs.maps])
    return mats, ts, rs


# --------------------------------------------------------------------------
# Covers
# --------------------------------------------------------------------------

def attractor_cover(ifs: IFS1D | IFS2D, k: int, budget: int = DEFAULT_BUDGET) -> DyadicCover:
    """Dyadic cover at scale ``2**-k`` built from cylinders of diameter <= ``2**-k``."""
    if k < 1:
        raise InvalidInput("scale exponent must be >= 1")
    d = ifs.dim
    h = 2.0 ** -k
    lo, hi = seed_box(ifs)
    corners = _box_corners(lo, hi)
    diam = float(np.linalg.norm(hi - lo))
    mats, ts, rs = _linear_parts(ifs)
    offsets = np.array(list(itertools.product((0, 1), repeat=d)), dtype=np.int64)

    keys: list[np.ndarray] = []
    n_keys = 0
    stack = [(np.eye(d)[None], np.zeros((1, d)), np.ones(1))]
    while stack:
        A, T, r = stack.pop()
        done = r * diam <= h
        if done.any():
            pts = np.einsum("cj,nij->nci", corners, A[done]) + T[done][:, None, :]
            i0, i1 = interval_cells(pts.min(axis=1), pts.max(axis=1), h)
            cand = i0[:, None, :] + offsets[None]
            ok = (cand <= i1[:, None, :]).all(axis=2)
            new = np.unique(_encode(cand[ok]))
            keys.append(new)
            n_keys += len(new)
            if n_keys > 4 * _CHUNK:
                merged = np.unique(np.concatenate(keys))
                keys, n_keys = [merged], len(merged)
            if n_keys > budget:
                raise ResourceLimit(f"cover exceeds the cube budget of {budget}")
        rest = ~done
        if not rest.any():
            continue
        A, T, r = A[rest], T[rest], r[rest]
        cA = np.concatenate([A @ m for m in mats])
        cT = np.concatenate([T + A @ t for t in ts])
        cr = np.concatenate([r * q for q in rs])
        for s in range(0, len(cr), _CHUNK):
            stack.append((cA[s : s + _CHUNK], cT[s : s + _CHUNK], cr[s : s + _CHUNK]))
    allkeys = np.unique(np.concatenate(keys)) if keys else np.zeros(0, np.int64)
    if len(allkeys) > budget:
        raise ResourceLimit(f"cover exceeds the cube budget of {budget}")
    return DyadicCover(d, k, _decode(allkeys, d))


def cover_from_points(points, k: int) -> DyadicCover:
    """Cubes containing the given points (ties go to the lower cube)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] == 1 and pts.shape[1] > 2:
        pts = pts.T
    h = 2.0 ** -k
    i0, _ = interval_cells(pts, pts, h)
    return DyadicCover(pts.shape[1], k, i0)


def project_cover(cover: DyadicCover, theta: Angle | float) -> DyadicCover:
    """1D cover at the same scale: cells meeting the projection of an occupied cube."""
    if cover.dim != 2:
        raise InvalidInput("project_cover expects a planar cover")
    c, s = theta.cos_sin() if isinstance(theta, Angle) else (math.cos(theta), math.sin(theta))
    h = cover.h
    base = (cover.cubes[:, 0] * c + cover.cubes[:, 1] * s) * h
    lo = base + h * (min(c, 0.0) + min(s, 0.0))
    hi = base + h * (max(c, 0.0) + max(s, 0.0))
    i0, i1 = interval_cells(lo, hi, h)
    span = int((i1 - i0).max()) if len(i0) else 0
    out = [i0 + o for o in range(span + 1)]
    keep = [i0 + o <= i1 for o in range(span + 1)]
    cells = np.concatenate([x[m] for x, m in zip(out, keep)])
    return DyadicCover(1, cover.k, np.unique(cells))


def covering_count(cover: DyadicCover, x, R: float, r: float) -> int:
    """Number of scale-``r`` dyadic cells of the cover meeting the window ``[x-R, x+R]^d``.

    ``r`` is rounded down to a power of two; it must not be finer than the cover.
    """
    if r > R:
        raise InvalidInput("need r <= R")
    b = math.ceil(-math.log2(r) - 1e-12)
    if b > cover.k:
        raise ResolutionError(f"r = {r} is finer than the cover scale 2^-{cover.k}")
    coarse = cover.coarsen(max(b, 0)) if b >= 0 else None
    if coarse is None or not len(coarse):
        return 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    s = 2.0 ** -b
    i0, i1 = interval_cells(x - R, x + R, s)
    mask = ((coarse.cubes >= i0) & (coarse.cubes <= i1)).all(axis=1)
    return int(mask.sum())


# --------------------------------------------------------------------------
# Point samples and Hausdorff gaps
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PointSample:
    points: np.ndarray = field(repr=False)
    words: list[Word] = field(repr=False)

    def __len__(self):
        return len(self.points)


def all_words(n_maps: int, depth: int):
    return itertools.product(range(n_maps), repeat=depth)


def sample_points(ifs: IFS1D | IFS2D, depth: int, base=None, with_words: bool = True) -> PointSample:
    """Images ``S_w(base)`` over all words of length ``depth``.

    ``base`` defaults to the fixed point of the first map, which lies in the
    attractor, so every sample point does too.
    """
    mats, ts, _ = _linear_parts(ifs)
    if base is None:
        base = fixed_point(ifs.maps[0])
    pts = np.array(base, dtype=float).reshape(1, -1)
    # left expansion: S_i(S_w(base)) lists words (i, *w)
    for _ in range(depth):
        pts = np.concatenate([pts @ a.T + t for a, t in zip(mats, ts)])
    words = [tuple(w) for w in all_words(len(ifs), depth)] if with_words else []
    return PointSample(pts, words)


def _as_points(a) -> np.ndarray:
    if isinstance(a, DyadicCover):
        return a.centers()
    arr = np.asarray(a, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr


def rho_hausdorff(a, b) -> float:
    """``sup_{p in a} dist(p, b)`` for finite point sets (or cube centres)."""
    pa, pb = _as_points(a), _as_points(b)
    if not len(pa) or not len(pb):
        raise EmptySet("Hausdorff gap of an empty set")
    dist, _ = cKDTree(pb).query(pa)
    return float(dist.max())


def d_hausdorff(a, b) -> float:
    return max(rho_hausdorff(a, b), rho_hausdorff(b, a))


def cover_contains(cover: DyadicCover, point, slack: int = 1) -> bool:
    """Whether ``point`` lies within ``slack`` cells of an occupied cube."""
    p = np.atleast_1d(np.asarray(point, dtype=float))
    i0, _ = interval_cells(p, p, cover.h)
    d = np.abs(cover.cubes - i0).max(axis=1)
    return bool((d <= slack).any())
