"""
Integrating a Lie system and watching its first integrals
==========================================================

The Ermakov system couples a time-dependent oscillator x to a Milne-Pinney
equation for y. Its Ermakov-Lewis quantity stays fixed along every solution,
which gives a sharp check on the integrator.
"""

# %%
import math

import numpy as np

from liesys import Ermakov, Riccati, Sinusoidal, integrate, invariant_drift, sample
from liesys.coefficients import Constant

omega = Sinusoidal(1.0, 0.3, 1.0)  # omega^2(t) = 1 + 0.3 cos t
traj = integrate(Ermakov(omega), [1.0, 0.0, 1.0, 0.2], 0.0, 20.0, rel_tol=1e-10)
print(f"{len(traj.times)} accepted steps, components {traj.names}")

# %%
# Dense output lets us read the solution anywhere inside the run.
for t in (0.5, 7.25, 19.9):
    print(t, sample(traj, t))

# %%
# The invariant is evaluated at every accepted node.
rep = invariant_drift(traj, "ermakov_lewis", ["x", "v_x", "y", "v_y"])
print(f"psi(0) = {rep.reference:.12f}, max relative drift = {rep.max_rel_drift:.2e}")

# %%
# Tightening the tolerance shrinks the drift.
for tol in (1e-6, 1e-8, 1e-10):
    tr = integrate(Ermakov(omega), [1.0, 0.0, 1.0, 0.2], 0.0, 20.0, rel_tol=tol, abs_tol=tol * 1e-2)
    print(tol, invariant_drift(tr, "ermakov_lewis", [0, 1, 2, 3]).max_rel_drift)

# %%
# Riccati solutions of x' = -omega^2 - x^2 run into poles. With omega = 1 and
# x(0) = 0 the exact solution is -tan t, so the run stops just short of pi/2.
tr = integrate(Riccati(Constant(1.0)), [0.0], 0.0, 3.0)
t_stop, reason = tr.terminated_early
print(f"stopped at t = {t_stop:.6f} ({reason}); pi/2 = {math.pi / 2:.6f}")
print("largest recorded |x|:", np.max(np.abs(tr.states)))
