"""
Estimating box and Assouad dimension from dyadic covers
========================================================

A self-similar set is the attractor of finitely many contracting
similarities.  When the pieces do not overlap, its dimension is the
similarity dimension, the root ``s`` of ``sum c_i^s = 1``.  This demo builds
dyadic covers of a few attractors and compares the numerical box and Assouad
estimates with that exact value.

Run with ``python3 demos/01_dimension_estimates.py``.
"""

import math
from fractions import Fraction as F

from assouadproj.constructions import sierpinski_variant
from assouadproj.coverage import attractor_cover, covering_count
from assouadproj.dimension import assouad_estimate, box_estimate, witness_exponent
from assouadproj.ifs import IFS1D, Similarity1D, similarity_dimension

# %% The exact value.
# Three maps of ratio 1/4 give s = log 3 / log 4.
s = similarity_dimension([F(1, 4)] * 3)
print(f"similarity dimension of three 1/4-maps: {s:.12f} (log3/log4 = {math.log(3) / math.log(4):.12f})")

# %% A Cantor set on the line.
# Keeping the outer quarters of [0, 1] at every step gives dimension 1/2.
# The cover marks every dyadic interval of side 2^-16 meeting a cylinder.
cantor = IFS1D((Similarity1D(F(1, 4), 0), Similarity1D(F(1, 4), F(3, 4))))
cover = attractor_cover(cantor, 16)
print(f"\nCantor cover at depth 16: {len(cover.cubes)} intervals")
print(f"  box estimate     {box_estimate(cover).value:.4f}")
est = assouad_estimate(cover)
print(f"  Assouad estimate {est.value:.4f}")

# %% What the Assouad estimate measures.
# It is the largest local exponent of covering counts over window centres x
# and scale pairs (a window of side 2^-a counted with cells of side 2^-b).
# The witness window reproduces the value through covering_count.
x, R, r = est.witness
n = covering_count(cover, x, R, r)
print(f"  witness window at x = {x[0]:.6f}, half-width {R}, cells {r}: {n} cells,"
      f" exponent {witness_exponent(cover, est):.4f}")

# %% The segment and the planar Sierpinski variant.
segment = IFS1D((Similarity1D(F(1, 2), 0), Similarity1D(F(1, 2), F(1, 2))))
cover = attractor_cover(segment, 14)
print(f"\nsegment: box {box_estimate(cover).value:.4f}, Assouad {assouad_estimate(cover).value:.4f}")

# F_{1/4} has three maps of ratio 1/4 at the corners of the unit triangle.
cover = attractor_cover(sierpinski_variant(F(1, 4)), 10)
print(f"F_1/4 at depth 10: box {box_estimate(cover).value:.4f}, Assouad {assouad_estimate(cover).value:.4f},"
      f" exact {s:.4f}")
