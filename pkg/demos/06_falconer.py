"""
A non-constant verdict map in a one-parameter family
=====================================================

Projecting ``F_c`` in direction theta gives a three-map system on the line
that is affinely conjugate to ``{c x, c x + lambda, c x + 1}`` with
``lambda = Xi(t)`` the normalized middle translation.  So the whole family of
projections is governed by one parameter.  This demo samples two windows of
lambda values:

* U, where the first-level pieces are disjoint and the Assouad dimension
  equals the Hausdorff dimension;
* V, near the Bandt-Graf parameter, where the WSP scan keeps failing and the
  Assouad dimension is 1.

Run with ``python3 demos/06_falconer.py``.
"""

from fractions import Fraction as F

from assouadproj.constructions import falconer_counterexample_report, normalize_translations, xi

# %% The normalization.
# Xi is unchanged by common affine maps of the translations.
t = (F(2, 5), F(1, 2), F(9, 10))
print(f"Xi{tuple(map(str, t))} = {xi(*t)}, after x -> 5x + 2: {xi(*(5 * v + 2 for v in t))}")
norm = normalize_translations(t, F(1, 4))
print(f"lambda = {norm.lam}, conjugacy x -> {norm.scale} x + {norm.shift},"
      f" cover distance after mapping {norm.hausdorff_check:.2e}")

# %% The report.
report = falconer_counterexample_report(F(1, 4), 10, 5)
print(f"\nU window {tuple(round(v, 4) for v in report.u_interval)}: {report.counts('U')}")
print(f"V window {tuple(round(v, 6) for v in report.v_window)}: {report.counts('V')}")
print("\nfamily  lambda     verdict                          scan")
for row in report.rows:
    print(f"  {row.family}    {float(row.lam):.6f}  {str(row.verdict):32s} {row.scan_verdict}")
