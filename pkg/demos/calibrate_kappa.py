"""
Calibrating the (delta, s)-extraction constants
================================================

The dyadic sweep in ``extract_delta_s_subset`` promises two things about its
output ``P`` when started from a (delta, t)-set ``P0`` with
``|P0| >= c delta^-t`` and ball bound ``C (r / delta)^t``:

* a cardinality floor ``|P| >= (c / C) delta^-s / KAPPA_CARD``;
* a ball bound ``|P & B(x, r)| <= KAPPA_BALL (r / delta)^s``.

The proofs only say that such dimensional constants exist.  This script
measures how large they need to be on seeded random inputs, so that the frozen
values in ``assouadproj.delta_s`` can be compared with what the sweep actually
achieves.  Run it with ``python3 demos/calibrate_kappa.py``.
"""

import math

import numpy as np

from assouadproj.delta_s import KAPPA_BALL, KAPPA_CARD, check_delta_s, extract_delta_s_subset


def random_grid(delta, keep, rng):
    """A random subset of the delta-grid in [0, 1)^2; a (delta, 2)-set."""
    n = round(1 / delta)
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    grid = np.column_stack([i.ravel(), j.ravel()]) * delta
    return grid[rng.uniform(size=len(grid)) < keep]


def grid_ball_constant(delta):
    """Smallest C with |grid & B(x, r)| <= C (r / delta)^2 at the dyadic radii."""
    worst = 0.0
    r = delta
    while r <= 2:
        k = math.floor(r / delta)
        lattice = sum(1 for a in range(-k, k + 1) for b in range(-k, k + 1) if a * a + b * b <= (r / delta) ** 2)
        worst = max(worst, lattice / (r / delta) ** 2)
        r *= 2
    return worst


# %% Measure both constants over a ladder of scales and target dimensions.
rng = np.random.default_rng(0)
card_needed, ball_needed = 0.0, 0.0
print(f"{'delta':>8} {'s':>4} {'|P0|':>6} {'|P|':>5} {'card ratio':>10} {'ball ratio':>10}")
for k in (5, 6, 7):
    delta = 2.0**-k
    C = grid_ball_constant(delta)
    for s in (0.5, 1.0, 1.5):
        P0 = random_grid(delta, rng.uniform(0.5, 1.0), rng)
        c = len(P0) * delta**2
        P = extract_delta_s_subset(P0, delta, s, 2.0, c, C)
        # card ratio: the KAPPA_CARD this run needs for the cardinality floor
        card = (c / C) * delta**-s / len(P)
        # ball ratio: the KAPPA_BALL this run needs for the ball bound
        worst = check_delta_s(P, delta, s, 1.0, 0.0).witness
        ball = worst[2] / (worst[1] / delta) ** s
        card_needed, ball_needed = max(card_needed, card), max(ball_needed, ball)
        print(f"{delta:8.5f} {s:4.1f} {len(P0):6d} {len(P):5d} {card:10.3f} {ball:10.3f}")

# %% Compare with the frozen values.
# The frozen constants carry a safety margin over the worst observed case,
# so the acceptance checks do not sit on the edge of the calibration data.
print()
print(f"worst needed KAPPA_CARD = {card_needed:.3f}; frozen {KAPPA_CARD}")
print(f"worst needed KAPPA_BALL = {ball_needed:.3f}; frozen {KAPPA_BALL}")
