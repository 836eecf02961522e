"""Similarity maps, words and iterated function systems in the line and plane.

Numbers are kept as :class:`fractions.Fraction` whenever the input is
rational and every operation applied to them preserves rationality; they
silently fall back to ``float`` otherwise.  Rotation angles are never
floats: an :class:`Angle` is an exact rational multiple of pi plus an
integer combination of *declared* irrational generators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np
import yaml

from .errors import ConfigError, InvalidWord

Number = Union[Fraction, float, int]
Word = tuple[int, ...]

TWO_PI = 2.0 * math.pi


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def as_number(x) -> Number:
    """Coerce ints to Fraction, keep Fractions and floats."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, float)):
        return x
    if isinstance(x, (np.floating, np.integer)):
        return as_number(x.item())
    raise TypeError(f"unsupported number type {type(x).__name__}")


# --------------------------------------------------------------------------
# Angles
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Angle:
    """An angle ``pi_part * pi + sum(n_g * g)``.

    ``pi_part`` is a rational reduced modulo 2.  ``irrational`` holds pairs
    ``(g, n_g)`` of declared-irrational generators ``g`` (radians) with
    nonzero integer coefficients.  The generators are assumed linearly
    independent of pi over the rationals; that is a declaration, never
    something tested numerically.

    ``tangent`` optionally records an exact rational tangent (used for
    projection directions such as ``atan(3/4)``).
    """

    pi_part: Fraction = Fraction(0)
    irrational: tuple[tuple[float, int], ...] = ()
    tangent: Fraction | None = field(default=None, compare=False)

    def __post_init__(self):
        p = Fraction(self.pi_part) % 2
        object.__setattr__(self, "pi_part", p)
        merged: dict[float, int] = {}
        for g, n in self.irrational:
            merged[float(g)] = merged.get(float(g), 0) + int(n)
        object.__setattr__(
            self, "irrational", tuple(sorted((g, n) for g, n in merged.items() if n != 0))
        )

    # constructors ----------------------------------------------------------
    @classmethod
    def rational_pi(cls, p: int, q: int = 1) -> "Angle":
        if q <= 0:
            raise ValueError("denominator must be positive")
        return cls(Fraction(p, q))

    @classmethod
    def irrational_radians(cls, x: float) -> "Angle":
        """Declare ``x`` radians to be an irrational multiple of pi."""
        return cls(Fraction(0), ((float(x), 1),))

    @classmethod
    def from_tangent(cls, q) -> "Angle":
        """Direction in [0, pi) with exact rational tangent ``q``.

        ``q=None`` means the vertical direction.  By Niven's theorem the
        angle is a rational multiple of pi only for tan in {0, 1, -1}.
        """
        if q is None:
            return cls(Fraction(1, 2))
        q = Fraction(q)
        if q == 0:
            return cls(Fraction(0), tangent=q)
        if q == 1:
            return cls(Fraction(1, 4), tangent=q)
        if q == -1:
            return cls(Fraction(3, 4), tangent=q)
        x = math.atan(float(q)) % math.pi
        return cls(Fraction(0), ((x, 1),), tangent=q)

    @classmethod
    def zero(cls) -> "Angle":
        return cls(Fraction(0))

    # queries ---------------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return not self.irrational

    @property
    def kind(self) -> str:
        return "rational_pi" if self.is_rational else "irrational"

    @property
    def p(self) -> int:
        return self.pi_part.numerator

    @property
    def q(self) -> int:
        return self.pi_part.denominator

    @property
    def radians(self) -> float:
        x = float(self.pi_part) * math.pi + sum(g * n for g, n in self.irrational)
        return x % TWO_PI

    @property
    def quarter_turns(self) -> int | None:
        """Number of quarter turns if the angle is a multiple of pi/2."""
        if self.irrational or (2 * self.pi_part).denominator != 1:
            return None
        return int(2 * self.pi_part) % 4

    def exact_tangent(self):
        """Exact tangent as Fraction, ``None`` for vertical, raise if unknown."""
        if self.tangent is not None:
            return self.tangent
        if self.is_rational:
            four = 4 * self.pi_part
            if four.denominator == 1:
                k = int(four) % 4
                return {0: Fraction(0), 1: Fraction(1), 2: None, 3: Fraction(-1)}[k]
        raise ValueError("tangent not known exactly")

    def cos_sin(self) -> tuple[float, float]:
        k = self.quarter_turns
        if k is not None:
            return ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[k]
        x = self.radians
        return math.cos(x), math.sin(x)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other: "Angle") -> "Angle":
        return Angle(self.pi_part + other.pi_part, self.irrational + other.irrational)

    def __neg__(self) -> "Angle":
        return Angle(-self.pi_part, tuple((g, -n) for g, n in self.irrational))

    def __sub__(self, other: "Angle") -> "Angle":
        return self + (-other)

    def __mul__(self, k: int) -> "Angle":
        if not isinstance(k, int):
            return NotImplemented
        return Angle(self.pi_part * k, tuple((g, n * k) for g, n in self.irrational))

    __rmul__ = __mul__

    def mod_pi(self) -> "Angle":
        """Same direction reduced into [0, pi) (exact for rational parts)."""
        a = Angle(self.pi_part % 1, self.irrational, self.tangent)
        if a.is_rational:
            return a
        r = a.radians
        if r >= math.pi:
            a = Angle(a.pi_part - 1, a.irrational, self.tangent)
        return a

    def __repr__(self) -> str:
        if self.is_rational:
            return f"Angle({self.pi_part}*pi)"
        return f"Angle(~{self.radians:.12g} rad, irrational)"


# --------------------------------------------------------------------------
# Orthogonal parts
# --------------------------------------------------------------------------

def orth_matrix(angle: Angle, reflect: bool) -> np.ndarray:
    c, s = angle.cos_sin()
    rot = np.array([[c, -s], [s, c]])
    return rot @ np.diag([1.0, -1.0]) if reflect else rot


def _orth_exact(angle: Angle, reflect: bool):
    k = angle.quarter_turns
    if k is None:
        return None
    c, s = ((1, 0), (0, 1), (-1, 0), (0, -1))[k]
    if reflect:
        return ((c, s), (s, -c))
    return ((c, -s), (s, c))


def orth_apply(angle: Angle, reflect: bool, v: Sequence[Number]) -> tuple[Number, Number]:
    """Apply the orthogonal map (rotation after optional x-axis reflection)."""
    m = _orth_exact(angle, reflect)
    if m is None:
        a = orth_matrix(angle, reflect) @ np.array([float(v[0]), float(v[1])])
        return float(a[0]), float(a[1])
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def orth_compose(a1: Angle, r1: bool, a2: Angle, r2: bool) -> tuple[Angle, bool]:
    # J Rot(a) = Rot(-a) J for the reflection J = diag(1, -1)
    return a1 + (-a2 if r1 else a2), r1 != r2


# --------------------------------------------------------------------------
# Similarities
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Similarity1D:
    """``x -> ratio * x + translation`` with ``0 < |ratio| < 1``.

    The ratio-1 identity exists only as :data:`IDENTITY_1D`.
    """

    ratio: Number
    translation: Number = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "ratio", as_number(self.ratio))
        object.__setattr__(self, "translation", as_number(self.translation))
        if not (0 < abs(self.ratio) < 1) and not self.is_identity:
            raise ValueError(f"ratio must satisfy 0 < |ratio| < 1, got {self.ratio}")

    @property
    def is_identity(self) -> bool:
        return self.ratio == 1 and self.translation == 0

    @property
    def exact(self) -> bool:
        return is_exact(self.ratio) and is_exact(self.translation)

    def __call__(self, x):
        if isinstance(x, np.ndarray):
            return float(self.ratio) * x + float(self.translation)
        return self.ratio * x + self.translation

    def compose(self, other: "Similarity1D") -> "Similarity1D":
        """``self o other``."""
        return Similarity1D(self.ratio * other.ratio, self.ratio * other.translation + self.translation)

    def __matmul__(self, other):
        return self.compose(other)


@dataclass(frozen=True)
class Similarity2D:
    """``x -> ratio * O x + translation``, O = Rot(rotation) [@ diag(1,-1)]."""

    ratio: Number
    rotation: Angle = Angle()
    reflect: bool = False
    translation: tuple[Number, Number] = (Fraction(0), Fraction(0))

    def __post_init__(self):
        object.__setattr__(self, "ratio", as_number(self.ratio))
        t = tuple(as_number(v) for v in self.translation)
        if len(t) != 2:
            raise ValueError("planar translation needs two coordinates")
        object.__setattr__(self, "translation", t)
        if not (0 < self.ratio < 1) and not self.is_identity:
            raise ValueError(f"ratio must lie in (0, 1), got {self.ratio}")

    @property
    def is_identity(self) -> bool:
        return (
            self.ratio == 1
            and not self.reflect
            and self.rotation == Angle()
            and self.translation == (0, 0)
        )

    @property
    def exact(self) -> bool:
        return (
            is_exact(self.ratio)
            and all(is_exact(v) for v in self.translation)
            and self.rotation.quarter_turns is not None
        )

    @property
    def linear(self) -> np.ndarray:
        return float(self.ratio) * orth_matrix(self.rotation, self.reflect)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x @ self.linear.T + np.array([float(v) for v in self.translation])

    def compose(self, other: "Similarity2D") -> "Similarity2D":
        """``self o other``."""
        ang, refl = orth_compose(self.rotation, self.reflect, other.rotation, other.reflect)
        ot = orth_apply(self.rotation, self.reflect, other.translation)
        t = (self.ratio * ot[0] + self.translation[0], self.ratio * ot[1] + self.translation[1])
        return Similarity2D(self.ratio * other.ratio, ang, refl, t)

    def __matmul__(self, other):
        return self.compose(other)


IDENTITY_1D = Similarity1D(Fraction(1), Fraction(0))
IDENTITY_2D = Similarity2D(Fraction(1), Angle(), False, (Fraction(0), Fraction(0)))


def fixed_point(s: Similarity1D | Similarity2D):
    """Unique fixed point of a contracting similarity."""
    if isinstance(s, Similarity1D):
        return s.translation / (1 - s.ratio)
    m = _orth_exact(s.rotation, s.reflect)
    if m is not None and s.exact:
        # exact 2x2 solve of (I - cO) p = t
        a, b = 1 - s.ratio * m[0][0], -s.ratio * m[0][1]
        c, d = -s.ratio * m[1][0], 1 - s.ratio * m[1][1]
        det = a * d - b * c
        tx, ty = s.translation
        return ((d * tx - b * ty) / det, (a * ty - c * tx) / det)
    a = np.eye(2) - s.linear
    p = np.linalg.solve(a, np.array([float(v) for v in s.translation]))
    return (float(p[0]), float(p[1]))


# --------------------------------------------------------------------------
# Iterated function systems
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IFS1D:
    maps: tuple[Similarity1D, ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.maps:
            raise ValueError("an IFS needs at least one map")

    dim = 1

    def __len__(self):
        return len(self.maps)

    def __getitem__(self, i):
        return self.maps[i]

    @property
    def ratios(self) -> list[Number]:
        return [m.ratio for m in self.maps]

    @property
    def exact(self) -> bool:
        return all(m.exact for m in self.maps)


@dataclass(frozen=True)
class IFS2D:
    maps: tuple[Similarity2D, ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.maps:
            raise ValueError("an IFS needs at least one map")

    dim = 2

    def __len__(self):
        return len(self.maps)

    def __getitem__(self, i):
        return self.maps[i]

    @property
    def ratios(self) -> list[Number]:
        return [m.ratio for m in self.maps]

    @property
    def exact(self) -> bool:
        return all(m.exact for m in self.maps)


def check_word(ifs, w: Iterable[int]) -> Word:
    w = tuple(int(i) for i in w)
    n = len(ifs)
    for i in w:
        if not 0 <= i < n:
            raise InvalidWord(f"index {i} out of range for an IFS with {n} maps")
    return w


def compose_word(ifs: IFS1D | IFS2D, w: Iterable[int]):
    """Compose ``S_{w[0]} o S_{w[1]} o ... o S_{w[-1]}`` (0-based indices).

    The empty word gives :data:`IDENTITY_1D` / :data:`IDENTITY_2D`.
    """
    w = check_word(ifs, w)
    ident = IDENTITY_1D if isinstance(ifs, IFS1D) else IDENTITY_2D
    return reduce(lambda acc, i: acc.compose(ifs.maps[i]), w, ident)


def word_ratio(ifs, w: Word) -> Number:
    r = Fraction(1)
    for i in w:
        r = r * ifs.maps[i].ratio
    return r


def word_str(w: Word) -> str:
    """Serialise a word as a dot-separated index string (``""`` for empty)."""
    return ".".join(str(i) for i in w)


def parse_word(s: str) -> Word:
    s = s.strip()
    return tuple(int(x) for x in s.split(".")) if s else ()


def similarity_dimension(ratios: Sequence[Number], tol: float = 1e-12, max_iter: int = 200) -> float:
    """Root ``s`` of ``sum(c_i**s) = 1`` by bisection."""
    cs = [abs(float(c)) for c in ratios]
    if not cs:
        raise ValueError("need at least one ratio")
    if any(not 0 < c < 1 for c in cs):
        raise ValueError("ratios must lie in (0, 1)")
    if len(cs) == 1:
        return 0.0
    arr = np.array(cs)
    logs = np.log(arr)

    def f(s):
        return float(np.exp(s * logs).sum()) - 1.0

    lo, hi = 0.0, math.log(len(cs)) / -math.log(max(cs))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        v = f(mid)
        if v == 0.0:
            return mid
        if v > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 and abs(f(0.5 * (lo + hi))) <= tol:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RotationGroupInfo:
    kind: str  # "discrete" or "dense"
    order: int | None = None  # order of the rotation subgroup
    has_reflections: bool = False

    @property
    def is_dense(self) -> bool:
        return self.kind == "dense"


def rotation_generators(ifs: IFS2D) -> list[Angle]:
    """Angles generating the rotation subgroup of the group of orthogonal parts."""
    rots = [m.rotation for m in ifs.maps if not m.reflect]
    refl = [m.rotation for m in ifs.maps if m.reflect]
    # products of two reflections are rotations by the angle difference
    rots += [a - refl[0] for a in refl[1:]]
    return rots


def rotation_group(ifs: IFS2D) -> RotationGroupInfo:
    gens = rotation_generators(ifs)
    has_refl = any(m.reflect for m in ifs.maps)
    if any(not g.is_rational for g in gens):
        return RotationGroupInfo("dense", None, has_refl)
    order = 1
    for g in gens:
        order = math.lcm(order, (g.pi_part / 2).denominator)
    return RotationGroupInfo("discrete", order, has_refl)


# --------------------------------------------------------------------------
# Configuration files
# --------------------------------------------------------------------------

def parse_number(x) -> Number:
    """``"p/q"`` and decimal strings become Fractions; YAML floats stay floats."""
    if isinstance(x, bool) or x is None:
        raise ConfigError(f"not a number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as e:
            raise ConfigError(f"cannot parse number {x!r}") from e
    raise ConfigError(f"not a number: {x!r}")


def _parse_angle(spec) -> Angle:
    if spec is None:
        return Angle()
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError(f"angle must be a mapping with one key, got {spec!r}")
    (key, val), = spec.items()
    if key == "pi_rational":
        if not isinstance(val, (list, tuple)) or len(val) != 2:
            raise ConfigError("pi_rational expects [p, q]")
        p, q = int(val[0]), int(val[1])
        if q <= 0:
            raise ConfigError("pi_rational denominator must be positive")
        return Angle.rational_pi(p, q)
    if key == "irrational_radians":
        return Angle.irrational_radians(float(val))
    raise ConfigError(f"unknown angle kind {key!r}")


def ifs_from_dict(cfg: dict) -> IFS1D | IFS2D:
    """Build an IFS from a parsed configuration mapping.

    Expected layout::

        maps:
          - ratio: "1/4"
            angle: {pi_rational: [0, 1]}     # or {irrational_radians: 1.0}
            reflect: false
            translation: [0, "3/4"]          # scalar for 1D systems
    """
    if not isinstance(cfg, dict) or "maps" not in cfg:
        raise ConfigError("configuration needs a 'maps' list")
    maps = cfg["maps"]
    if not isinstance(maps, list) or not maps:
        raise ConfigError("'maps' must be a non-empty list")
    dims = set()
    for m in maps:
        if not isinstance(m, dict) or "ratio" not in m:
            raise ConfigError(f"map entry without ratio: {m!r}")
        t = m.get("translation", 0)
        dims.add(2 if isinstance(t, (list, tuple)) else 1)
    if cfg.get("dimension") is not None:
        dims.add(int(cfg["dimension"]))
    if len(dims) != 1:
        raise ConfigError("maps mix 1D and 2D translations")
    d = dims.pop()
    try:
        if d == 1:
            return IFS1D(tuple(Similarity1D(parse_number(m["ratio"]), parse_number(m.get("translation", 0))) for m in maps))
        out = []
        for m in maps:
            t = m.get("translation", [0, 0])
            if len(t) != 2:
                raise ConfigError("planar translation needs two entries")
            out.append(
                Similarity2D(
                    parse_number(m["ratio"]),
                    _parse_angle(m.get("angle")),
                    bool(m.get("reflect", False)),
                    (parse_number(t[0]), parse_number(t[1])),
                )
            )
        return IFS2D(tuple(out))
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e)) from e


def load_ifs(path: str | Path) -> IFS1D | IFS2D:
    try:
        cfg = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {path}: {e}") from e
    return ifs_from_dict(cfg)
