"""
Discrete (delta, s)-sets and bad projection directions
=======================================================

At a fixed scale delta, a (delta, s)-set is a delta-separated point set that
looks s-dimensional in every ball: ``|P & B(x, r)| <= A (r / delta)^s``.
This demo

* extracts a (delta, 1)-subset from a random planar grid by a dyadic sweep,
* checks the ball bound exhaustively,
* counts directions in which a (delta, 1)-set projects onto few delta-bins,
  the discrete analogue of an exceptional set of projections.

Run with ``python3 demos/05_delta_s_sets.py``.
"""

import numpy as np

from assouadproj.delta_s import (
    KAPPA_BALL,
    KAPPA_CARD,
    check_delta_s,
    extract_delta_s_subset,
    marstrand_bad_directions,
    marstrand_experiment,
    max_cube_excess,
)

rng = np.random.default_rng(7)
delta = 2.0**-7

# %% A random (delta, 2)-set.
n = round(1 / delta)
grid = np.array([(i, j) for i in range(n) for j in range(n)], dtype=float) * delta
P0 = grid[rng.uniform(size=len(grid)) < 0.7]
c, C = len(P0) * delta**2, 9.0
print(f"|P0| = {len(P0)} points on the 2^-7 grid")

# %% Extraction.
# The sweep keeps one point per delta-cube, then trims every dyadic cube Q of
# side 2^j delta to at most (2^j)^s points.
P = extract_delta_s_subset(P0, delta, 1.0, 2.0, c, C)
floor = (c / C) * delta**-1 / KAPPA_CARD
print(f"|P| = {len(P)}; guaranteed at least {floor:.1f}")
print(f"worst cube count / (d(Q)/delta)^s = {max_cube_excess(P, delta, 1.0):.3f}")
res = check_delta_s(P, delta, 1.0, KAPPA_BALL, 0.0)
x, r, count = res.witness
print(f"ball bound with A = {KAPPA_BALL}: {res.ok}; fullest ball has {count} points at r = {r}")

# %% Bad directions.
# A direction is bad when the projection of the m points meets at most
# delta^tau m bins of width delta.  The extracted set is spread over the
# square, so only a few of the grid directions are bad.
bad, count = marstrand_bad_directions(P, 0.5, delta)
print(f"\nextracted set: {count} bad directions at tau = 0.5, e.g. {np.round(bad[:4], 3).tolist()}")

# %% The experiment across scales.
# For random segment sets the bad count stays below C delta^(tau - 1) log(1/delta)
# with one fitted constant across the whole ladder of scales.
rows = marstrand_experiment([2.0**-k for k in range(6, 11)], (0.2, 0.4, 0.6), seed=0)
print("\n   delta    tau  bad  fitted C")
for row in rows:
    print(f"  {row.delta:.5f}  {row.tau:.1f}  {row.bad_count:3d}  {row.fitted_c:.3f}")
fitted = [row.fitted_c for row in rows]
print(f"spread of fitted constants: {max(fitted) / min(fitted):.2f}x")
