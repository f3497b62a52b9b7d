"""
Higher roots of the deflection condition
========================================

The outgoing ray reaches infinite radius wherever tan(k phi / 2) = -k / (RD).
That equation has one root per branch m, and neighbouring roots are exactly
2 pi / k apart, so the m != 1 branches add whole revolutions (about 1.296e6
arcsec apiece) to the physical deflection.
"""

import math

from qgdeflect import ModelParams, derive, branch_sweep, render, table2

params = ModelParams.from_multiple(1.3)
dq = derive(params)

print(render(table2(params), "text").decode())

# The spacing between branches is 2 pi / k, which differs from a full turn by
# roughly pi * D * delta.
results = branch_sweep(dq, -2, 3)
for lower, upper in zip(results, results[1:]):
    gap = upper.delta_theta - lower.delta_theta
    print(f"m={lower.branch_m:+d} -> m={upper.branch_m:+d}: "
          f"gap - 2 pi = {gap - 2 * math.pi:.6e} rad  (2 pi (1/k - 1) = {2 * math.pi * (1 / dq.k - 1):.6e})")
