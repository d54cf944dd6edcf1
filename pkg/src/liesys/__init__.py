"""Numerical toolkit for Ermakov-type Lie systems and their superposition rules."""

__version__ = "0.1.0"

from .coefficients import Chirp, Constant, Sinusoidal, Tabulated, omega_at, omega_sq_at
from .errors import (BranchError, ConfigurationError, DomainError, InversionError, LiesysError,
                     NumericConsistencyError, PoleError, RealnessError, SingularConfigurationError,
                     VerificationWindowError)
from .integrator import Trajectory, integrate, sample
from .invariants import (ermakov_lewis, generalized_ermakov_invariant, invariant_drift,
                         oscillator_pair_integral, pinney_pair_invariant, riccati_pinney_constant,
                         wronskian)
from .sl2 import GroupElement, act, act_via_flows, action_consistency, bracket_residual, decompose
from .superposition import (LinearConstants, PinneyOscConstants, PinneyRiccatiConstants,
                            constants_from_state, oscillator_superpose, partial_superpose,
                            pinney_from_riccati, pinney_superpose, verify_superposition)
from .systems import (ConstantValue, Ermakov, GeneralizedErmakov, MilnePinney, Oscillator, PowerLaw,
                      Prolongation, Riccati, full_field_decomposition_check, fundamental_fields,
                      vector_field)
