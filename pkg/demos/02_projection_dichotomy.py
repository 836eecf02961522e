"""
The projection dichotomy for a Sierpinski-type set
===================================================

``F_c`` is the attractor of three maps of ratio ``c`` placed at the corners
``(0, 0)``, ``(0, 1)`` and ``(1, 0)``.  Its projections ``pi_theta F_c`` are
self-similar sets on the line.  For the rotation-free case the Assouad
dimension of a projection is decided by one question: do the projected maps
satisfy the weak separation property (WSP)?

* If they do, the Assouad dimension equals the Hausdorff dimension ``s``.
* If they do not, the Assouad dimension jumps to 1.

This demo walks through both sides of the dichotomy for ``c = 1/4``.
Run with ``python3 demos/02_projection_dichotomy.py``.
"""

from fractions import Fraction as F

import numpy as np

from assouadproj.constructions import depth1_intervals, osc_direction_interval, sierpinski_variant
from assouadproj.graph_directed import build_projection_system, classify_projection
from assouadproj.separation import exact_overlap_directions, gdwsp_scan

f = sierpinski_variant(F(1, 4))

# %% Directions with the open set condition.
# Where the three projected first-level hulls are disjoint, the projection
# satisfies the open set condition and the verdict is immediate.
intervals = osc_direction_interval(F(1, 4))
print("directions with disjoint first-level hulls:")
for lo, hi in intervals:
    print(f"  ({lo:.4f}, {hi:.4f})")

theta = float(np.mean(intervals[0]))
hulls = ", ".join(f"[{a:.3f}, {b:.3f}]" for a, b in depth1_intervals(F(1, 4), theta))
print(f"\nat theta = {theta:.4f} the projected hulls are {hulls}")
print(f"  verdict: {classify_projection(f, theta, scan_depth=12)}")

# %% The projection system and its scan.
# A rotation-free IFS projects to a single-vertex system.  The scan looks for
# difference maps S_e^-1 S_f close to the identity; under the WSP their
# distance to the identity stays bounded below.
system = build_projection_system(f, theta)
report = gdwsp_scan(system, 0, 12)
print(f"  {system}; minimum distance by depth: {[round(m, 4) for _, m in report.trend[::3]]}")

# %% Directions with exact overlaps.
# At some directions two different words project to the same map.  Exact
# overlaps lower the Hausdorff dimension below s, but here they do not break
# the WSP: these directions have rational tangents, every projected
# translation lies on a lattice, and so the difference maps cannot accumulate
# at the identity.  The verdict keeps s as an upper bound.
found = exact_overlap_directions(f, 2)
angles = sorted({a for a, _, _ in found if 0 < a.radians < np.pi / 2}, key=lambda a: a.radians)
print(f"\n{len(angles)} exact-overlap directions in (0, pi/2) up to depth 2")
for angle in angles[:4]:
    verdict = classify_projection(f, angle, scan_depth=12)
    print(f"  tan theta = {angle.exact_tangent()}: {verdict} ({verdict.reason})")

# %% A grid of directions.
# Across a grid the verdict map is far from constant: it switches between the
# two cases depending on the arithmetic of the direction.  Where a depth-10
# scan neither stabilizes nor keeps falling, the verdict is Inconclusive and
# carries both candidate values.
kinds = {}
for theta in np.linspace(0, np.pi, 32, endpoint=False):
    kinds.setdefault(classify_projection(f, float(theta), scan_depth=10).kind, []).append(round(float(theta), 3))
for kind, thetas in kinds.items():
    print(f"\n{kind}: {len(thetas)} of 32 grid directions, e.g. {thetas[:5]}")
