"""
Watching the weak separation property fail
===========================================

The Bandt-Graf example is a three-map IFS on the line,
``{c x, c x + 1, c x + t}``, with the translation ``t`` chosen as a lacunary
series so that difference maps ``S_e^-1 S_f`` come arbitrarily close to the
identity without ever equalling it.  The WSP fails, although no exact
overlap occurs.

A finite scan cannot prove that failure; it can only show the minimum
distance to the identity still falling as the depth doubles.  This demo
prints that trend, reproduces the witness in exact arithmetic and contrasts
it with a system where separation holds.

Run with ``python3 demos/03_bandt_graf.py``.
"""

from fractions import Fraction as F

from assouadproj.graph_directed import classify_ifs1d
from assouadproj.ifs import IFS1D, Similarity1D, word_str
from assouadproj.separation import (
    bandt_graf_ifs,
    bandt_graf_leftover,
    bandt_graf_parameter,
    difference_map,
    identity_distance,
    wsp_scan,
)

# %% The parameter.
# t(c) is computed exactly as a rational truncation of the series.
t = bandt_graf_parameter(F(1, 4))
print(f"t(1/4) = {float(t):.17f}")
ifs = bandt_graf_ifs(F(1, 4))

# %% The scan.
# Distances are measured in coordinates where the attractor's hull is [0, 1],
# so they do not depend on where the IFS sits on the line.
report = wsp_scan(ifs, 16)
at = dict(report.trend)
for depth in (2, 4, 8, 16):
    print(f"  depth {depth:2d}: minimum distance {at[depth]:.3e}")
print(f"verdict: {report.verdict}")

# %% The witness, in exact arithmetic.
e, f = report.witness_pair
ratio, trans = difference_map(ifs, e, f)
print(f"\nwitness words e = {word_str(e)}, f = {word_str(f)}")
print(f"  S_e^-1 S_f has ratio {ratio} and translation {float(trans):.3e}")
print(f"  distance recomputed from the exact map: {identity_distance((ratio, trans), report.frame):.3e}")

# %% Where the small distances come from.
# The leftover sums of the series shrink like c^(2^m).  Up to scaling they
# are the translations of the near-identity maps found by the scan.
for m in (1, 2, 3):
    left = bandt_graf_leftover(F(1, 4), m)
    print(f"  m = {m}: leftover {left['from_m_plus_1']:.3e}")

# %% A separated comparison.
# With t = 1/2 the first-level pieces [0, 1/3], [1/2, 5/6] and [1, 4/3] are
# disjoint, so no pair of cylinders meets and no difference map ever comes
# near the identity: the minimum distance stays infinite.
spread = IFS1D((Similarity1D(F(1, 4), 0), Similarity1D(F(1, 4), 1), Similarity1D(F(1, 4), F(1, 2))))
report = wsp_scan(spread, 12)
print(f"\nt = 1/2: verdict {report.verdict}")

# %% The dimension verdicts.
print(f"\nBandt-Graf: {classify_ifs1d(ifs, scan_depth=16)}")
print(f"t = 1/2:    {classify_ifs1d(spread, scan_depth=12)}")
