"""Constructive lemmas: subsystem reductions, spaced projections, weak
pseudo-tangents, the F_c family, the Xi normalization and the Falconer-type
counterexample report.

The dense-rotation constructions work with a two-map system in normal form,
``S_j x = rho O_alpha x + w_j`` with a common irrational rotation; the
constructions conjugate by a translation so that ``S_1(0) = 0``.
"""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .coverage import d_hausdorff, rho_hausdorff, sample_points, seed_box
from .errors import DegenerateSet, DomainError, InvalidInput, ResourceLimit, Unsupported
from .ifs import (
    IFS1D,
    IFS2D,
    Angle,
    Similarity1D,
    Similarity2D,
    Word,
    compose_word,
    fixed_point,
    rotation_group,
)

TWO_PI = 2 * math.pi


def psi(x: float) -> float:
    """``(4/pi) arctan(x) - 1``: increasing from ``psi(1) = 0`` towards 1."""
    if x < 1:
        raise DomainError("psi is defined on [1, inf)")
    return 4 / math.pi * math.atan(x) - 1


def dense_two_map_example(rho=Fraction(1, 3), alpha: float = 1.0, w2=(1, 0)) -> IFS2D:
    """``{rho O_alpha x, rho O_alpha x + w2}`` with ``alpha`` declared irrational (radians)."""
    rot = Angle.irrational_radians(alpha)
    return IFS2D((Similarity2D(rho, rot, False, (0, 0)), Similarity2D(rho, rot, False, tuple(w2))))


def _angle_dist(x: float) -> float:
    """Distance from ``x`` to the nearest multiple of ``2 pi``."""
    r = math.fmod(x, TWO_PI)
    r = r + TWO_PI if r < 0 else r
    return min(r, TWO_PI - r)


def _power_word(w: Word, n: int) -> Word:
    return tuple(w) * n


def _cylinder_box(ifs, word, box):
    lo, hi = box
    corners = np.array(list(itertools.product(*zip(lo, hi))), dtype=float)
    img = compose_word(ifs, word)(corners)
    return img.min(axis=0), img.max(axis=0)


def _boxes_disjoint(b1, b2) -> bool:
    return bool(np.any(b1[1] < b2[0]) or np.any(b2[1] < b1[0]))


def _words_upto(n_maps: int, max_len: int):
    for n in range(1, max_len + 1):
        yield from itertools.product(range(n_maps), repeat=n)


# --------------------------------------------------------------------------
# Dense rotations: reduction to two maps
# --------------------------------------------------------------------------

def reduction_words(ifs: IFS2D, max_len: int = 4, max_power: int = 4):
    """Words ``(u, w)`` and powers ``(m, n)`` for the two-map reduction.

    Searches word pairs by increasing length for disjoint cylinder boxes and
    the smallest powers making ``m rot(u) + n rot(w)`` an orientation
    preserving irrational rotation.
    """
    if not rotation_group(ifs).is_dense:
        raise Unsupported("reduction_subsystem needs a dense rotation group")
    box = seed_box(ifs)
    words = list(_words_upto(len(ifs), max_len))
    boxes = {w: _cylinder_box(ifs, w, box) for w in words}
    maps = {w: compose_word(ifs, w) for w in words}
    for u, w in itertools.combinations(words, 2):
        if not _boxes_disjoint(boxes[u], boxes[w]):
            continue
        su, sw = maps[u], maps[w]
        for total in range(2, 2 * max_power + 1):
            for m in range(1, total):
                n = total - m
                if m > max_power or n > max_power:
                    continue
                if (m * su.reflect + n * sw.reflect) % 2:
                    continue
                rot = su.rotation * m + sw.rotation * n if not (su.reflect or sw.reflect) else None
                if rot is None:
                    rot = compose_word(ifs, _power_word(u, m) + _power_word(w, n)).rotation
                if not rot.is_rational:
                    return u, w, m, n
    raise ResourceLimit(f"no disjoint cylinder pair with irrational rotation up to length {max_len}")


def reduction_subsystem(ifs: IFS2D, max_len: int = 4, max_power: int = 4) -> IFS2D:
    """``{S_u^m o S_w^n, S_w^n o S_u^m}``: equal ratios, equal irrational rotation, disjoint cylinders."""
    u, w, m, n = reduction_words(ifs, max_len, max_power)
    a = _power_word(u, m) + _power_word(w, n)
    b = _power_word(w, n) + _power_word(u, m)
    return IFS2D((compose_word(ifs, a), compose_word(ifs, b)))


# --------------------------------------------------------------------------
# Discrete rotations: three maps with trivial orthogonal parts
# --------------------------------------------------------------------------

def _det3(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _noncollinear(p, q, r, exact: bool) -> bool:
    d = _det3(p, q, r)
    return d != 0 if exact else abs(float(d)) > 1e-12


@dataclass(frozen=True)
class TrivialRotationResult:
    ifs: IFS2D
    words: tuple[Word, Word, Word]
    k: int
    m: int
    theta: Angle | float | None
    t: object  # projected parameter of {cx, cx + 1, cx + t}; None if degenerate


def trivial_rotation_subsystem(
    ifs: IFS2D, theta: Angle | float | None = None, max_depth: int = 3, max_m: int = 6
) -> TrivialRotationResult:
    """Three composed maps with equal ratios and trivial orthogonal parts.

    ``k`` is the order of the rotation group (made even when reflections
    occur), so ``S_u^k`` has trivial orthogonal part.  Base words ``u1, u2,
    u3`` have non-collinear fixed points; the outputs are the cyclic products
    ``T1^m T2^m T3^m``, ``T2^m T3^m T1^m``, ``T3^m T1^m T2^m`` with
    ``T_i = S_{u_i}^k`` and the smallest ``m`` keeping their fixed points
    non-collinear.
    """
    info = rotation_group(ifs)
    if info.is_dense:
        raise Unsupported("dense rotations are handled by the dense-case theorem")
    k = info.order if not info.has_reflections else math.lcm(info.order, 2)
    exact = ifs.exact
    cands = list(_words_upto(len(ifs), max_depth))
    fps = [fixed_point(compose_word(ifs, w)) for w in cands]
    base = None
    for i, j, l in itertools.combinations(range(len(cands)), 3):
        if _noncollinear(fps[i], fps[j], fps[l], exact):
            base = (cands[i], cands[j], cands[l])
            break
    if base is None:
        raise DegenerateSet("cylinder fixed points are collinear up to the search depth")
    for m in range(1, max_m + 1):
        t1, t2, t3 = (_power_word(u, k * m) for u in base)
        words = (t1 + t2 + t3, t2 + t3 + t1, t3 + t1 + t2)
        maps = [compose_word(ifs, w) for w in words]
        pts = [fixed_point(s) for s in maps]
        if _noncollinear(*pts, exact):
            out = IFS2D(tuple(maps))
            t = None if theta is None else _projected_parameter(out, theta)
            return TrivialRotationResult(out, words, k, m, theta, t)
    raise ResourceLimit("no non-collinear cyclic triple found")


def _projected_parameter(ifs3: IFS2D, theta):
    """``t`` such that the projection of ``ifs3`` is conjugate to ``{cx, cx + 1, cx + t}``."""
    if isinstance(theta, Angle):
        try:
            tan = theta.exact_tangent()
            e = (Fraction(0), Fraction(1)) if tan is None else (Fraction(1), tan)
        except ValueError:
            e = theta.cos_sin()
    else:
        e = (math.cos(theta), math.sin(theta))
    a = [e[0] * m.translation[0] + e[1] * m.translation[1] for m in ifs3.maps]
    if a[1] == a[0]:
        return None
    return (a[2] - a[0]) / (a[1] - a[0])


# --------------------------------------------------------------------------
# Dense rotations: Eroglu words, spaced points, weak pseudo-tangents
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalForm:
    ifs: IFS2D
    rho: float
    alpha: float
    offset: np.ndarray  # fixed point of S_1 in the original coordinates


def normal_form(ifs: IFS2D) -> NormalForm:
    """Conjugate a two-map system with common ratio and rotation so that ``S_1(0) = 0``."""
    if len(ifs) != 2:
        raise InvalidInput("expected a two-map system (see reduction_subsystem)")
    a, b = ifs.maps
    if a.ratio != b.ratio or a.rotation != b.rotation or a.reflect or b.reflect:
        raise InvalidInput("maps must share ratio and an orientation-preserving rotation")
    if a.rotation.is_rational:
        raise InvalidInput("normal form needs an irrational rotation")
    p = np.array(fixed_point(a), dtype=float)
    w2 = b(p[None, :])[0] - p
    nf = IFS2D((Similarity2D(a.ratio, a.rotation, False, (0.0, 0.0)),
                Similarity2D(b.ratio, b.rotation, False, (float(w2[0]), float(w2[1])))))
    return NormalForm(nf, float(a.ratio), a.rotation.radians, p)


def _proj(points: np.ndarray, theta: float) -> np.ndarray:
    return points @ np.array([math.cos(theta), math.sin(theta)])


@dataclass(frozen=True)
class ErogluWords:
    """Words ``1^p + core`` kept in factored form (``p`` can be large)."""

    cores: tuple[Word, ...]
    k: int
    prefix_length: int
    rotation_gap: float  # distance of k alpha to 2 pi Z
    max_gap_ratio: float  # max pairwise |pi(S_i 0) - pi(S_j 0)| / (eps rho^k)

    @property
    def words(self) -> tuple[Word, ...]:
        return tuple((0,) * self.prefix_length + tuple(c) for c in self.cores)


class _PrefixTable:
    """Sorted residues ``-p alpha mod 2 pi`` for ``0 <= p <= max_prefix``."""

    def __init__(self, alpha: float, max_prefix: int):
        ps = np.arange(max_prefix + 1, dtype=np.int64)
        res = np.mod(-ps * alpha, TWO_PI)
        order = np.argsort(res, kind="stable")
        self.res, self.ps = res[order], ps[order]
        self.min_tol = math.pi / (max_prefix + 1)

    def first(self, target: float, tol: float):
        """Smallest ``p`` with ``-p alpha`` within ``tol`` of ``target`` mod ``2 pi``."""
        if tol < self.min_tol / 64:
            return None
        t = target % TWO_PI
        best = None
        for lo, hi in ((t - tol, t + tol), (t - tol + TWO_PI, t + tol + TWO_PI), (t - tol - TWO_PI, t + tol - TWO_PI)):
            i, j = np.searchsorted(self.res, [lo, hi])
            if j > i:
                m = int(self.ps[i:j].min())
                best = m if best is None else min(best, m)
        return best


def _cluster_directions(pts: np.ndarray, centre: float, half_width: float, N: int, width: float):
    """Directions within ``half_width`` of ``centre`` where ``N`` points project into ``width``.

    Candidates are the directions at which two points project to the same
    value; each candidate is checked by sorting the projections.  Yields
    ``(phi, indices, tolerance)`` with ``tolerance`` the direction slack that
    keeps the cluster inside ``width``.
    """
    n = len(pts)
    i, j = np.triu_indices(n, 1)
    d = pts[j] - pts[i]
    base = np.arctan2(d[:, 1], d[:, 0]) + math.pi / 2
    cands = []
    for shift in (0.0, math.pi):
        off = np.mod(base + shift - centre + math.pi, TWO_PI) - math.pi
        keep = np.abs(off) <= half_width
        cands.append(centre + off[keep])
    phis = np.concatenate(cands)
    phis = phis[np.argsort(np.abs(phis - centre))]
    for a in range(0, len(phis), 256):
        ph = phis[a : a + 256]
        proj = pts @ np.vstack([np.cos(ph), np.sin(ph)])
        order = np.argsort(proj, axis=0)
        sp = np.take_along_axis(proj, order, axis=0)
        span = sp[N - 1 :, :] - sp[: n - N + 1, :]
        best = span.argmin(axis=0)
        for c in np.flatnonzero(span[best, np.arange(len(ph))] < width):
            idx = order[best[c] : best[c] + N, c]
            spread = span[best[c], c]
            diam = float(np.linalg.norm(pts[idx][:, None] - pts[idx][None], axis=2).max())
            yield float(ph[c]), idx, (width - spread) / (2 * max(diam, 1e-300))


def eroglu_words(
    ifs: IFS2D,
    N: int,
    eps: float,
    theta: float,
    max_core: int = 12,
    max_prefix: int = 20_000_000,
    max_candidates: int = 20_000,
) -> ErogluWords:
    """``N`` words of common length ``k`` with rotation within ``eps`` of the
    identity and projected images of 0 pairwise within ``eps rho^k``.

    Words have the shape ``1^p + core`` as in the proof of the corollary: the
    prefix scales by ``rho^p`` and turns the projection direction to
    ``theta - p alpha``, so it suffices to find ``N`` cores of length ``L``
    whose projections in some direction ``phi`` lie within ``eps rho^L``,
    with ``phi`` inside the ``eps``-window around ``theta + L alpha`` that
    keeps the total rotation ``(p + L) alpha`` near the identity.  The
    prefix length is then the first ``p`` turning ``theta`` onto ``phi``
    within the cluster's slack.  Every returned tuple is re-verified from
    freshly composed maps.
    """
    if len(ifs) < 2:
        raise InvalidInput("need a two-map system")
    if N < 2:
        raise InvalidInput("N must be at least 2")
    nf = normal_form(ifs)
    rho, alpha = nf.rho, nf.alpha
    sizes = sorted({min(n, max_prefix) for n in (100_000, 2_000_000, max_prefix)})
    tables: dict[int, _PrefixTable] = {}
    for L in range(max(1, math.ceil(math.log2(N))), max_core + 1):
        cores = sample_points(nf.ifs, L, base=(0.0, 0.0))
        width = eps * rho**L
        centre = theta + L * alpha
        cands = []
        for phi, idx, tol in _cluster_directions(cores.points, centre, eps, N, width):
            # rotation error is |phi - centre| plus at most tol
            tol = min(tol, eps - abs(math.remainder(phi - centre, TWO_PI)))
            if tol > 0:
                cands.append((phi, idx, tol))
            if len(cands) >= max_candidates:
                break
        for size in sizes:
            if not cands:
                break
            if size not in tables:
                tables[size] = _PrefixTable(alpha, size)
            hits = []
            for phi, idx, tol in cands:
                p = tables[size].first(phi - theta, tol)
                if p is not None:
                    hits.append((p, idx))
            for p, idx in sorted(hits, key=lambda h: h[0]):
                core_words = tuple(cores.words[i] for i in idx)
                # verification in factored form: S_{1^p c}(0) = rho^p O_{p alpha} S_c(0)
                ph = theta - math.fmod(p * alpha, TWO_PI)
                vals = [_proj(compose_word(nf.ifs, w)(np.zeros((1, 2))), ph)[0] for w in core_words]
                ratio = max(abs(a - b) for a, b in itertools.combinations(vals, 2)) / width
                gap = _angle_dist(math.fmod((p + L) * alpha, TWO_PI))
                if ratio <= 1 and gap <= eps and len(set(core_words)) == N:
                    return ErogluWords(core_words, p + L, p, gap, ratio)
    raise ResourceLimit("no Eroglu word tuple within the search budget")


@dataclass(frozen=True)
class SpacingWitness:
    theta: float
    tau: float
    points: tuple[float, ...]
    gaps: tuple[float, ...]
    words: tuple[Word, ...] = field(default=(), repr=False)

    def verify(self) -> bool:
        return all(self.tau / 2 <= g <= 4 * self.tau for g in self.gaps) and all(
            a < b for a, b in zip(self.points, self.points[1:])
        )


def _chains(u: np.ndarray, lo: float, hi: float, M: int):
    """Start indices of greedy chains ``u[i0] < ... `` with gaps in ``[lo, hi]``."""
    cur = np.arange(len(u))
    alive = np.ones(len(u), dtype=bool)
    path = [cur]
    for _ in range(M - 1):
        nxt = np.searchsorted(u, u[cur] + lo, side="left")
        valid = nxt < len(u)
        nxt = np.minimum(nxt, len(u) - 1)
        alive &= valid & (u[nxt] - u[cur] <= hi) & (u[nxt] - u[cur] >= lo)
        cur = nxt
        path.append(cur)
    return alive, np.vstack(path)


def spaced_points(ifs: IFS2D, theta: float, r: float, M: int, depth: int = 14) -> SpacingWitness:
    """``M`` points of ``pi_theta F`` with consecutive gaps in ``[tau/2, 4 tau]`` for some ``tau < r``.

    Points are projections of ``S_w(y)``, ``y`` the fixed point of the first
    map, over words of length ``depth``.  Scales ``tau`` are scanned downward
    from ``r``; at each scale a chain with gaps in the band
    ``tau (2 +- psi(M))`` is sought first, then in ``[tau/2, 4 tau]``.
    """
    if M < 2:
        raise DomainError("M must be at least 2")
    rho = max(float(m.ratio) for m in ifs.maps)
    if not 0 < r <= rho:
        raise DomainError(f"r must lie in (0, rho] = (0, {rho}]")
    th = theta.radians if isinstance(theta, Angle) else float(theta)
    sample = sample_points(ifs, depth)
    proj = _proj(sample.points, th)
    order = np.argsort(proj, kind="stable")
    u, first = np.unique(proj[order], return_index=True)
    diam = float(u[-1] - u[0]) if len(u) > 1 else 0.0
    floor = 4 * rho**depth * max(diam, 1.0)
    band = psi(M)
    tau = r
    while tau > floor:
        tau *= 2 ** -0.25
        for lo, hi in ((tau * (2 - band), tau * (2 + band)), (tau / 2, 4 * tau)):
            alive, path = _chains(u, lo, hi, M)
            if alive.any():
                i = int(np.argmax(alive))
                idx = path[:, i]
                pts = tuple(float(v) for v in u[idx])
                gaps = tuple(b - a for a, b in zip(pts, pts[1:]))
                words = tuple(sample.words[order[first[j]]] for j in idx)
                wit = SpacingWitness(th, tau, pts, gaps, words)
                if not wit.verify():
                    raise AssertionError("spacing verification failed")
                return wit
    raise ResourceLimit("no spaced point chain found at the sampled depth")


@dataclass(frozen=True)
class Expansion1D:
    """``x -> scale (x - center) + image``; ``scale`` may exceed float range (inf)."""

    log2_scale: float
    center: float
    image: float

    @property
    def scale(self) -> float:
        return 2.0**self.log2_scale if self.log2_scale < 1023 else math.inf

    def __call__(self, x):
        with np.errstate(over="ignore", invalid="ignore"):
            return self.scale * (np.asarray(x, dtype=float) - self.center) + self.image


@dataclass(frozen=True)
class TangentStep:
    epsilon: float
    word: Word = field(repr=False)
    blowup: Expansion1D
    rho_gap: float
    d_gap: float
    delta: float
    rotation_error: float


def _base_words(ifs: IFS2D):
    """Orientation-preserving words of length <= 2 with irrational rotation."""
    out = []
    for w in _words_upto(len(ifs), 2):
        s = compose_word(ifs, w)
        if not s.reflect and not s.rotation.is_rational:
            out.append((w, s))
    return out


def _powers(offset: float, beta: float, delta: float, max_power: int):
    """Increasing ``n`` in ``[1, max_power]`` with ``offset - n beta`` within ``delta`` of ``2 pi Z``.

    Yields ``(n, error)`` pairs, searching in geometrically growing chunks.
    """
    start, chunk = 1, 4096
    while start <= max_power:
        ns = np.arange(start, min(start + chunk, max_power + 1), dtype=np.float64)
        err = np.mod(offset - ns * beta, TWO_PI)
        err = np.minimum(err, TWO_PI - err)
        for h in np.flatnonzero(err <= delta):
            yield int(ns[h]), float(err[h])
        start += len(ns)
        chunk *= 4


def weak_tangent_sequence(
    ifs: IFS2D,
    theta1: float,
    theta2: float,
    eps_schedule,
    depth: int = 12,
    max_power: int = 1_000_000,
    max_hits: int = 256,
) -> list[TangentStep]:
    """Blow-ups ``T_k`` with ``rho_H(pi_2 F, T_k(pi_1 F)) <= eps_k``.

    For each ``eps`` a word ``i = u^n`` is chosen with rotation ``beta`` such
    that ``theta1 - beta`` is within ``delta = eps / (2 R)`` of ``theta2``
    modulo ``2 pi``, where ``R`` bounds ``|x|`` on the attractor sample; then
    ``d_H(pi_2 F, pi_{theta1 - beta} F) <= R delta``.  The blow-up is
    ``T(x) = c_i^-1 (x - pi_1(y_i)) + pi_{theta1 - beta}(y_i)``, which maps
    ``pi_1 S_i(F)`` onto ``pi_{theta1 - beta} F``.  The gap is measured
    against that image (a subset of ``T(pi_1 F)``), so it bounds the
    one-sided distance from above.  Among the powers meeting the rotation
    tolerance (at most ``max_hits`` per base word), the shortest word whose
    gap does not exceed the previous step's is taken, so gaps are
    non-increasing along the schedule.
    """
    eps_schedule = [float(e) for e in eps_schedule]
    if any(e <= 0 for e in eps_schedule) or any(
        b >= a for a, b in zip(eps_schedule, eps_schedule[1:])
    ):
        raise DomainError("eps schedule must be positive and strictly decreasing")
    if not rotation_group(ifs).is_dense:
        raise Unsupported("weak_tangent_sequence needs dense rotations")
    th1 = theta1.radians if isinstance(theta1, Angle) else float(theta1)
    th2 = theta2.radians if isinstance(theta2, Angle) else float(theta2)
    pts = sample_points(ifs, depth).points
    spread = max(float(m.ratio) for m in ifs.maps) ** depth
    R = float(np.linalg.norm(pts, axis=1).max()) * (1 + spread) + spread
    target_pts = _proj(pts, th2)
    coarse = sample_points(ifs, min(depth, 6)).points
    bases = _base_words(ifs)

    def gap_of(n, s):
        # T(pi_1 S_i x) = pi_phi(x), evaluated in closed form to avoid underflow
        phi = th1 - math.fmod(n * s.rotation.radians, TWO_PI)
        return rho_hausdorff(target_pts[:, None], _proj(pts, phi)[:, None])

    steps = []
    cap = math.inf
    for eps in eps_schedule:
        delta = eps / (2 * R)
        best = None
        for w, s in bases:
            # the shortest power whose gap does not exceed the previous step's,
            # so gaps are non-increasing along the schedule
            for n, err in itertools.islice(_powers(th1 - th2, s.rotation.radians, delta, max_power), max_hits):
                if best is not None and n * len(w) >= best[0] * len(best[1]):
                    break
                gap = gap_of(n, s)
                if gap <= cap:
                    best = (n, w, s, err, gap)
                    break
        if best is None:
            raise ResourceLimit("no word with the required rotation and gap within max_power")
        n, w, s, rot_err, rho_gap = best
        cap = rho_gap
        y = np.array(fixed_point(s), dtype=float)  # S_u^n shares the fixed point of S_u
        phi = th1 - math.fmod(n * s.rotation.radians, TWO_PI)
        log2_c = n * math.log2(float(s.ratio))
        blow = Expansion1D(-log2_c, float(_proj(y[None, :], th1)[0]), float(_proj(y[None, :], phi)[0]))
        whole = blow(_proj(coarse, th1))
        if np.all(np.isfinite(whole)):
            d_gap = max(rho_gap, rho_hausdorff(whole[:, None], target_pts[:, None]))
        else:
            d_gap = math.inf
        steps.append(TangentStep(eps, _power_word(w, n), blow, rho_gap, d_gap, delta, rot_err))
    return steps


# --------------------------------------------------------------------------
# The family F_c and its projections
# --------------------------------------------------------------------------

def sierpinski_variant(c, allow_outside: bool = False) -> IFS2D:
    """``{cx, cx + (0, 1-c), cx + (1-c, 0)}``, an OSC system on the open unit square."""
    c = Fraction(c) if not isinstance(c, float) else c
    if not allow_outside and not Fraction(1, 5) < c < Fraction(1, 3):
        raise DomainError("c must lie in (1/5, 1/3)")
    if not 0 < c < 1:
        raise DomainError("c must lie in (0, 1)")
    zero = 0 * c
    return IFS2D(tuple(Similarity2D(c, Angle(), False, t)
                       for t in ((zero, zero), (zero, 1 - c), (1 - c, zero))))


def depth1_intervals(c, theta: float) -> list[tuple[float, float]]:
    """The projected depth-1 hull intervals ``pi_theta S_i(conv F_c)``, sorted."""
    c = float(c)
    e = np.array([math.cos(theta), math.sin(theta)])
    hull = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]) @ e
    out = []
    for t in ((0.0, 0.0), (0.0, 1 - c), (1 - c, 0.0)):
        base = float(np.dot(t, e))
        out.append((base + c * hull.min(), base + c * hull.max()))
    return sorted(out)


def depth1_disjoint(c, theta: float) -> bool:
    iv = depth1_intervals(c, theta)
    return all(a[1] < b[0] for a, b in zip(iv, iv[1:]))


def osc_direction_interval(c, samples: int = 100) -> list[tuple[float, float]]:
    """Open direction intervals in ``[0, pi)`` where the depth-1 projected intervals are disjoint.

    With ``kappa = c / (1 - c)`` the conditions reduce to ``tan theta`` in
    ``(kappa, 1 - kappa)``, ``cot theta`` in ``(kappa, 1 - kappa)``, or
    ``theta = pi/2 + psi`` with ``tan psi`` in
    ``(kappa / (1 - kappa), (1 - kappa) / kappa)``.  Each returned interval
    is checked at ``samples`` interior angles by direct interval arithmetic.
    """
    c = float(c)
    if not 0 < c <= 1 / 3:
        raise DomainError("c must lie in (0, 1/3]")
    k = c / (1 - c)
    raw = [
        (math.atan(k), math.atan(1 - k)),
        (math.atan(1 / (1 - k)), math.atan(1 / k)),
        (math.pi / 2 + math.atan(k / (1 - k)), math.pi / 2 + math.atan((1 - k) / k)),
    ]
    out = [(a, b) for a, b in raw if b - a > 1e-10]
    for a, b in out:
        for th in np.linspace(a, b, samples + 2)[1:-1]:
            if not depth1_disjoint(c, float(th)):
                raise AssertionError(f"direction {th} inside the interval fails disjointness")
    return out


# --------------------------------------------------------------------------
# The normalization Xi and the Falconer-type counterexample
# --------------------------------------------------------------------------

def xi(t1, t2, t3):
    """``(t2 - t1) / (t3 - t1)`` for ``t1 < t2 < t3`` (exact for rationals)."""
    if not t1 < t2 < t3:
        raise DomainError("xi needs t1 < t2 < t3")
    return (t2 - t1) / (t3 - t1)


def three_map_ifs(c, t) -> IFS1D:
    return IFS1D(tuple(Similarity1D(c, ti) for ti in t))


@dataclass(frozen=True)
class Normalization:
    lam: object
    scale: object  # conjugacy phi(x) = scale * x + shift
    shift: object
    hausdorff_check: float  # d_H of the mapped depth-k covers
    k: int

    def __call__(self, x):
        return self.scale * x + self.shift


def normalize_translations(t, c, k: int = 10) -> Normalization:
    """Affine conjugacy from ``{cx + t_i}`` to ``{cx, cx + lambda, cx + 1}``.

    Matching convex-hull endpoints ``t1/(1-c)`` and ``t3/(1-c)`` with ``0``
    and ``1/(1-c)`` gives ``phi(x) = (x - t1/(1-c)) / (t3 - t1)``.  The
    conjugacy is checked by comparing depth-``k`` dyadic covers of
    ``phi(F_t)`` and ``F_(0, lambda, 1)``.
    """
    from .coverage import cover_from_points

    t1, t2, t3 = t
    lam = xi(t1, t2, t3)
    scale = 1 / (t3 - t1)
    shift = -t1 / ((1 - c) * (t3 - t1))
    src = three_map_ifs(c, t)
    dst = three_map_ifs(c, (0 * lam, lam, 1 + 0 * lam))
    depth = max(1, math.ceil((k + 2) / -math.log2(float(c))))
    a = sample_points(src, depth, with_words=False).points * float(scale) + float(shift)
    b = sample_points(dst, depth, with_words=False).points
    dh = d_hausdorff(cover_from_points(a, k).centers(), cover_from_points(b, k).centers())
    if dh >= 2.0 ** (-k + 1):
        raise AssertionError(f"conjugacy check failed: d_H = {dh}")
    return Normalization(lam, scale, shift, dh, k)


@dataclass(frozen=True)
class FalconerRow:
    family: str  # "U" or "V"
    t: tuple
    lam: object
    verdict: str
    dimension: float
    scan_verdict: str
    min_distance: float


@dataclass(frozen=True)
class FalconerReport:
    c: object
    u_interval: tuple[float, float]
    v_window: tuple[float, float]
    rows: list[FalconerRow]

    def counts(self, family: str) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.rows:
            if r.family == family:
                out[r.verdict] = out.get(r.verdict, 0) + 1
        return out

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["family", "t1", "t2", "t3", "lambda", "verdict", "dimension", "scanVerdict", "minDistance"])
            for r in self.rows:
                w.writerow([r.family, *(str(v) for v in r.t), str(r.lam), r.verdict,
                            repr(r.dimension), r.scan_verdict, repr(r.min_distance)])


def _classify_lambda(c, lam, depth: int):
    from .graph_directed import classify_ifs1d

    return classify_ifs1d(three_map_ifs(c, (0 * lam, lam, 1 + 0 * lam)), scan_depth=depth)


def _random_embedding(lam, rng: np.random.Generator):
    """A triple ``t`` in ``(0, 1)`` with ``Xi(t) = lam``: a random positive affine image of ``(0, lam, 1)``."""
    a = Fraction(int(rng.integers(20, 90)), 100)
    b = Fraction(int(rng.integers(1, int((1 - a) * 100))), 100)
    return tuple(a * v + b for v in (Fraction(0), Fraction(lam), Fraction(1)))


def locate_wsp_failure_window(c, depth: int = 12, centre=None) -> tuple[float, float]:
    """A window of ``lambda`` around the Bandt-Graf parameter whose ends and centre all fail separation.

    Half-widths ``10^-1, 10^-2, ...`` are tried in turn; the first for which
    all three scans report failure evidence is returned.
    """
    from .graph_directed import ASSOUAD_ONE
    from .separation import bandt_graf_parameter

    lam0 = float(bandt_graf_parameter(c, Fraction(1, 10**12)) if centre is None else centre)
    for j in range(1, 8):
        h = 10.0**-j
        if all(_classify_lambda(c, x, depth).kind == ASSOUAD_ONE for x in (lam0 - h, lam0, lam0 + h)):
            return lam0 - h, lam0 + h
    raise ResourceLimit("no separation-failure window found around the Bandt-Graf parameter")


def falconer_counterexample_report(
    c=Fraction(1, 4), samples_u: int = 10, samples_v: int = 5, seed: int = 0, depth: int = 12
) -> FalconerReport:
    """Verdicts on translation triples from an OSC region ``U`` and a failure window ``V``.

    ``U`` triples have ``Xi(t)`` in ``(kappa, 1 - kappa)``, ``kappa = c/(1-c)``,
    where the depth-1 intervals of ``{cx, cx + lambda, cx + 1}`` are
    disjoint.  ``V`` triples have ``Xi(t)`` in the window returned by
    :func:`locate_wsp_failure_window`.  Every triple is normalized by
    :func:`normalize_translations` and classified by its separation scan.
    """
    c = Fraction(c)
    if not Fraction(1, 5) < c < Fraction(1, 3):
        raise DomainError("c must lie in (1/5, 1/3)")
    rng = np.random.default_rng(seed)
    kappa = c / (1 - c)
    u_lo, u_hi = kappa, 1 - kappa
    v_lo, v_hi = locate_wsp_failure_window(c, depth)
    rows = []
    for family, lo, hi, n in (("U", u_lo, u_hi, samples_u), ("V", v_lo, v_hi, samples_v)):
        for _ in range(n):
            x = float(lo) + (float(hi) - float(lo)) * float(rng.uniform(0.02, 0.98))
            lam = Fraction(x).limit_denominator(10**6)
            t = _random_embedding(lam, rng)
            norm = normalize_translations(t, c)
            verdict = _classify_lambda(c, norm.lam, depth)
            rep = verdict.certificate
            rows.append(FalconerRow(
                family, t, norm.lam, str(verdict), verdict.dimension,
                rep.verdict.kind if rep is not None else "", rep.min_distance if rep is not None else math.nan,
            ))
    return FalconerReport(c, (float(u_lo), float(u_hi)), (v_lo, v_hi), rows)
