"""
Milne-Pinney solutions from three Riccati solutions
====================================================

A Pinney solution can also be written through three solutions of the Riccati
equation x' = -omega^2 - x^2 and two constants C1, C2. Riccati solutions have
poles, so comparisons stop at 90% of the way to the first one.
"""

# %%
import math

import numpy as np

from liesys import Constant, Sinusoidal, constants_from_state, verify_superposition
from liesys.superposition import pinney_from_riccati

# The hand-checkable case: values -1, 0, 1 and the Pinney fixed point (1, 0).
c = constants_from_state("pinney_riccati", [-1.0, 0.0, 1.0], (1.0, 0.0), 1.0)
print(c, pinney_from_riccati(-1.0, 0.0, 1.0, c, 1.0))

# %%
# With omega = 1 the bases are -tan(t + pi/4), -tan t and -tan(t - pi/4); the
# first pole is at pi/4.
rep = verify_superposition("pinney_riccati", Constant(1.0), [-1.0, 0.0, 1.0], (1.0, 0.0), 1.0, (0.0, 10.0))
print(f"window [0, {rep.t1:.4f}] (clipped: {rep.window_clipped}), 0.9*pi/4 = {0.9 * math.pi / 4:.4f}")
print(f"max relative error {rep.max_rel_error:.2e}")

# %%
# A time-dependent frequency works the same way.
rep = verify_superposition("pinney_riccati", Sinusoidal(1.0, 0.2, 1.0, -math.pi / 2),
                           [-1.0, 0.0, 1.0], (1.2, 0.3), 1.0, (0.0, 10.0))
print(rep.constants, f"{rep.max_rel_error:.2e}")

# %%
# Relabelling the three Riccati solutions changes C1, C2 but not x.
ws, target = [-1.3, 0.4, 2.2], (1.1, -0.3)
for perm in ([0, 1, 2], [2, 0, 1], [1, 2, 0]):
    p = [ws[i] for i in perm]
    cp = constants_from_state("pinney_riccati", p, target, 1.0)
    print(p, np.round([cp.C1, cp.C2], 6), pinney_from_riccati(*p, cp, 1.0))
