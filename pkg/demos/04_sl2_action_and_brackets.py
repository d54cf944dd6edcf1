"""
The SL(2, R) action and the bracket relations
==============================================

The three fields of the Milne-Pinney triple are generated by an action of
SL(2, R) on (x, v) pairs with x > 0. We check the action against the flows
of its generators and check the commutators of every triple.
"""

# %%
import numpy as np

from liesys.sl2 import GroupElement, act, act_via_flows, decompose, random_element
from liesys.sl2 import action_consistency, bracket_residual
from liesys.systems import GeneralizedErmakov, MilnePinney, PowerLaw, Prolongation, Riccati

shear = GroupElement(1.0, 0.0, 2.0, 1.0)
print(decompose(shear), act(shear, 1.0, 0.0, 1.0))

# %%
# The closed form agrees with scaling, shear and a numerically integrated L2 flow.
rng = np.random.default_rng(0)
A = random_element(rng)
print(A)
print("closed form:", act(A, 0.8, 0.5, 1.0))
print("via flows:  ", act_via_flows(A, 0.8, 0.5, 1.0))

# %%
# Homomorphism and generator checks over many random samples.
print(action_consistency(k=1.0, trials=500, seed=1))

# %%
# Brackets close on sl(2, R) for each triple, including the prolonged one.
for spec in (MilnePinney(k=2.0), Riccati(), GeneralizedErmakov(f=PowerLaw(1.0, 2.0)),
             Prolongation((Riccati(),) * 3 + (MilnePinney(),))):
    pts = rng.uniform(0.3, 3.0, size=(100, spec.dim))
    fields = spec.fundamental_fields()
    print(type(spec).__name__, bracket_residual(fields, spec.structure, pts),
          bracket_residual(fields, spec.structure, pts, mode="fd", h=1e-5))
