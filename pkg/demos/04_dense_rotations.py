"""
Dense rotations force Assouad dimension one
============================================

When an IFS in the plane contains an irrational rotation, the rotations it
generates are dense in the circle.  Every projection then has Assouad
dimension 1, however small the Hausdorff dimension is.  Two constructions
make this visible at finite scale:

* many nearly evenly spaced points inside one projection, at a scale where
  a set of small dimension should look sparse;
* weak pseudo-tangents: rescaled copies of one projection that approach a
  different projection from one side.

This demo runs both on ``{x/3 rotated by 1 radian, the same map shifted}``.
Run with ``python3 demos/04_dense_rotations.py``.
"""

import math

import numpy as np

from assouadproj.constructions import dense_two_map_example, eroglu_words, spaced_points, weak_tangent_sequence
from assouadproj.graph_directed import classify_projection
from assouadproj.ifs import rotation_group, similarity_dimension, word_str

ifs = dense_two_map_example()
print(f"similarity dimension {similarity_dimension([m.ratio for m in ifs.maps]):.4f}")
print(f"rotation group dense: {rotation_group(ifs).is_dense}")

# %% The verdict needs no scan.
kinds = {classify_projection(ifs, float(t)).kind for t in np.linspace(0, math.pi, 16, endpoint=False)}
print(f"verdicts over 16 directions: {kinds}")

# %% Evenly spaced points.
# spaced_points finds M points of the projection whose consecutive gaps all
# lie in [tau/2, 4 tau].  As M grows the scale tau drops, yet the points keep
# filling an interval, which is what a dimension-one set does.
for M in (2, 4, 8):
    w = spaced_points(ifs, 0.0, 1 / 3, M)
    print(f"  M = {M}: tau = {w.tau:.4f}, gaps / tau = {[round(g / w.tau, 2) for g in w.gaps]}")

# %% Words that nearly commute with the identity.
# The Eroglu construction finds N words of equal length whose rotations are
# within eps of the identity and whose images of 0 project close together.
res = eroglu_words(ifs, 3, 0.1, 0.0)
print(f"\nEroglu words for N = 3, eps = 0.1: length {res.k}, prefix 0^{res.prefix_length} then cores"
      f" {[word_str(c) for c in res.cores]}")
print(f"  rotation gap {res.rotation_gap:.4f}, spread / (eps rho^k) = {res.max_gap_ratio:.3f}")

# %% Weak pseudo-tangents.
# For each eps a power of a rotating word turns direction theta1 onto theta2
# within eps / (2R).  Blowing up the matching piece of pi_theta1 F gives a set
# whose one-sided distance rho_H to pi_theta2 F is below eps, while the full
# blow-up stays far away in the two-sided Hausdorff distance d_H.
steps = weak_tangent_sequence(ifs, 0.3, 0.3 + math.pi / 4, [2.0**-j for j in range(1, 7)])
print("\n   eps      rho_H      d_H   word length")
for s in steps:
    print(f"  {s.epsilon:.4f}  {s.rho_gap:.5f}  {s.d_gap:8.3g}  {len(s.word)}")
