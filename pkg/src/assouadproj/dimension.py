"""Box and Assouad dimension estimates from dyadic covers.

The Assouad estimate maximises a two-scale exponent.  For a window ``Q``
(an occupied dyadic cube of side ``2**-a``, i.e. the box of half-width
``R = 2**-(a+1)`` around its centre) and a finer scale ``r = 2**-b``, the
local exponent is ``log2 N_b(Q) / (b - a)`` where ``N_b(Q)`` counts the
occupied scale-``b`` cells inside ``Q``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .coverage import DyadicCover, _encode, covering_count
from .errors import InvalidInput, ResolutionError


@dataclass(frozen=True)
class ProfileEntry:
    a: int
    b: int
    window: tuple[float, ...]
    count: int

    @property
    def exponent(self) -> float:
        return math.log2(self.count) / (self.b - self.a) if self.count > 0 else 0.0


@dataclass(frozen=True)
class DimensionEstimate:
    value: float
    scale_pairs: list[tuple[int, int]] = field(default_factory=list)
    witness: tuple | None = None  # (x, R, r) for Assouad estimates
    profile: list[ProfileEntry] = field(default_factory=list, repr=False)
    residual: float | None = None

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["a", "b", "windowX", "windowY", "count", "localExponent"])
            for e in self.profile:
                wx = repr(e.window[0]) if len(e.window) > 0 else ""
                wy = repr(e.window[1]) if len(e.window) > 1 else ""
                w.writerow([e.a, e.b, wx, wy, e.count, repr(e.exponent)])


def _window_counts(cover: DyadicCover, a: int, b: int):
    """Occupied scale-a cells and the number of occupied scale-b cells in each."""
    fine = cover.coarsen(b).cubes
    parents = fine >> (b - a)
    keys, counts = np.unique(_encode(parents), return_counts=True)
    cells = cover.coarsen(a).cubes
    # rows of ``cells`` and ``keys`` are both sorted by the same encoding
    assert len(cells) == len(keys)
    return cells, counts


def assouad_estimate(
    cover: DyadicCover,
    min_gap: int = 6,
    max_window_exp: int | None = None,
    pairs: str = "finest",
) -> DimensionEstimate:
    """Maximal two-scale exponent over windows and scale pairs.

    Parameters
    ----------
    cover : DyadicCover
        Cover at depth ``k``.
    min_gap : int
        Smallest admissible ``b - a``.
    max_window_exp : int, optional
        Largest window exponent ``a``; defaults to ``k - min_gap``.
    pairs : {"finest", "all"}
        ``"finest"`` pairs every window scale ``a`` with the cover's own
        resolution ``b = k``; ``"all"`` uses every ``b`` with
        ``b - a >= min_gap``.  The finest-only choice keeps the lattice
        constant's leakage ``log2(C) / (b - a)`` as small as the depth allows.
    """
    k = cover.k
    if k < min_gap + 2:
        raise ResolutionError(f"cover depth {k} < min_gap + 2 = {min_gap + 2}")
    if pairs not in ("finest", "all"):
        raise InvalidInput("pairs must be 'finest' or 'all'")
    if max_window_exp is None:
        max_window_exp = k - min_gap
    max_window_exp = min(max_window_exp, k - min_gap)
    if not len(cover):
        return DimensionEstimate(0.0)
    profile: list[ProfileEntry] = []
    scale_pairs = []
    for a in range(0, max_window_exp + 1):
        bs = [k] if pairs == "finest" else range(a + min_gap, k + 1)
        for b in bs:
            cells, counts = _window_counts(cover, a, b)
            i = int(np.argmax(counts))  # first maximiser in lattice order
            centre = tuple(float(v) for v in (cells[i] + 0.5) * 2.0 ** -a)
            profile.append(ProfileEntry(a, b, centre, int(counts[i])))
            scale_pairs.append((a, b))
    best = max(profile, key=lambda e: (e.exponent, -e.a, -e.b))
    witness = (best.window, 2.0 ** -(best.a + 1), 2.0 ** -best.b)
    return DimensionEstimate(best.exponent, scale_pairs, witness, profile)


def witness_exponent(cover: DyadicCover, est: DimensionEstimate) -> float:
    """Recompute the estimate's value from its witness through covering_count."""
    x, R, r = est.witness
    n = covering_count(cover, x, R, r)
    return math.log2(n) / math.log2(2 * R / r)


def box_estimate(cover: DyadicCover) -> DimensionEstimate:
    """Least-squares slope of ``log2 N_j`` against ``j`` over the finest half of scales."""
    k = cover.k
    if k < 4:
        raise ResolutionError("box estimate needs depth >= 4")
    js = np.arange(k // 2, k + 1)
    ns = np.array([len(cover.coarsen(int(j))) for j in js], dtype=float)
    y = np.log2(np.maximum(ns, 1.0))
    A = np.vstack([js, np.ones_like(js)]).T.astype(float)
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ np.array([slope, icpt]) - y) ** 2)))
    profile = [ProfileEntry(0, int(j), (), int(n)) for j, n in zip(js, ns)]
    return DimensionEstimate(float(slope), [(0, int(j)) for j in js], None, profile, resid)
