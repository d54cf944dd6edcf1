"""First integrals of the Ermakov-type systems and their drift along trajectories.

Argument names spell out which slot is the Pinney variable and which the
oscillator variable, because the roles of x, y, z swap between systems.
"""
from __future__ import annotations

import csv
import inspect
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, SingularConfigurationError
from .systems import ConstantValue, PowerLaw


def wronskian(y, v_y, z, v_z):
    """W = y*v_z - z*v_y for two oscillator solutions."""
    return y * v_z - z * v_y


def oscillator_pair_integral(x1, v1, x2, v2):
    """Angular momentum x1*v2 - x2*v1 of two oscillator copies."""
    return x1 * v2 - x2 * v1


def ermakov_lewis(x, v_x, y, v_y):
    """psi = (x/y)^2 + (x*v_y - y*v_x)^2 with x the oscillator and y the k=1 Pinney variable."""
    if np.any(np.asarray(y) <= 0):
        raise DomainError("Pinney variable y must be positive", "invariants.ermakov_lewis")
    return (x / y) ** 2 + (x * v_y - y * v_x) ** 2


def pinney_pair_invariant(x_p, v_p, x_o, v_o, k):
    """I = 1/2 ((x_o v_p - x_p v_o)^2 + k (x_o/x_p)^2) for a Pinney/oscillator pair.

    This is the ``I1`` of the Pinney rule with ``x_o = y`` and ``I2`` with
    ``x_o = z``. For k = 1 and matched roles it equals half the Ermakov-Lewis
    invariant.
    """
    if np.any(np.asarray(x_p) <= 0):
        raise DomainError("Pinney variable must be positive", "invariants.pinney_pair_invariant")
    return 0.5 * ((x_o * v_p - x_p * v_o) ** 2 + k * (x_o / x_p) ** 2)


def riccati_pinney_constant(w, w_partner, x, v, k):
    """First integral tying two Riccati solutions to a Pinney solution (x, v).

    With ``I1 = w_partner - w``, ``I2 = w - v/x``, ``I3 = x`` the quantity is
    ``K2 + (k + K2^2) / (K1 K2)`` where ``K1 = I1/I2`` and ``K2 = I2 I3^2``::

        (w - v/x) x^2 + (k + (w - v/x)^2 x^4) / ((w_partner - w) x^2)

    ``C1`` takes ``(w, w_partner) = (x2, x1)`` and ``C2`` takes ``(x3, x1)``.
    """
    if np.any(np.asarray(x) <= 0):
        raise DomainError("Pinney variable must be positive", "invariants.riccati_pinney_constant")
    gap = w_partner - w
    if np.any(np.asarray(gap) == 0):
        raise SingularConfigurationError("Riccati values coincide (w_partner == w)",
                                         "invariants.riccati_pinney_constant")
    a = w - v / x
    x2 = x * x
    return a * x2 + (k + a * a * x2 * x2) / (gap * x2)


def _power_antiderivative(coeff, q, r, base):
    # int_base^r coeff * z**q dz
    if q == -1.0:
        return coeff * (math.log(r) - math.log(base))
    return coeff * (r ** (q + 1.0) - base ** (q + 1.0)) / (q + 1.0)


def _coupling_power(c):
    if isinstance(c, ConstantValue):
        return c.c, 0.0
    if isinstance(c, PowerLaw):
        return c.c, c.p
    raise ConfigurationError(f"unsupported coupling {c!r}", "invariants.generalized_ermakov_invariant")


def ermakov_quadrature(r, f, g, base=1.0):
    """Closed form of ``int_base^r [-z^-3 f(1/z) + z g(1/z)] dz`` for r > 0.

    For ``f = c r^p`` the first term is ``-c z^(-3-p)``; for ``g = c r^p`` the
    second is ``c z^(1-p)``. Both are smooth on (0, inf), so the path from
    ``base`` to ``r`` never crosses a pole when both are positive.
    """
    if not (r > 0 and base > 0):
        raise DomainError(f"quadrature needs r > 0 and base > 0, got r={r}, base={base}",
                          "invariants.generalized_ermakov_invariant")
    cf, pf = _coupling_power(f)
    cg, pg = _coupling_power(g)
    return (_power_antiderivative(-cf, -3.0 - pf, r, base)
            + _power_antiderivative(cg, 1.0 - pg, r, base))


def generalized_ermakov_invariant(x, v_x, y, v_y, f, g, base=1.0):
    """C = xi^2/2 + Q(x/y) with xi = x v_y - y v_x and Q the coupling quadrature from ``base``."""
    if not (x > 0 and y > 0):
        raise DomainError(f"need x > 0 and y > 0, got x={x}, y={y}",
                          "invariants.generalized_ermakov_invariant")
    xi = x * v_y - y * v_x
    return 0.5 * xi * xi + ermakov_quadrature(x / y, f, g, base)


INVARIANTS = {
    "wronskian": wronskian,
    "oscillator_pair": oscillator_pair_integral,
    "ermakov_lewis": ermakov_lewis,
    "pinney_pair": pinney_pair_invariant,
    "riccati_pinney": riccati_pinney_constant,
    "generalized_ermakov": generalized_ermakov_invariant,
}


@dataclass(frozen=True)
class InvariantReport:
    name: str
    times: np.ndarray
    values: np.ndarray
    reference: float
    max_abs_drift: float
    max_rel_drift: float

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\r\n")
            w.writerow(["t", "value"])
            for t, v in zip(self.times, self.values):
                w.writerow([f"{t:.17g}", f"{v:.17g}"])

    def summary(self):
        return {"name": self.name, "reference": self.reference,
                "max_abs_drift": self.max_abs_drift, "max_rel_drift": self.max_rel_drift}


def drift_report(name, times, values):
    values = np.asarray(values, dtype=float)
    ref = float(values[0])
    abs_drift = float(np.max(np.abs(values - ref)))
    return InvariantReport(name, np.asarray(times), values, ref, abs_drift,
                           abs_drift / max(1.0, abs(ref)))


def invariant_drift(traj, invariant, args, params=None, label=None):
    """Evaluate an invariant at every node of ``traj`` and summarise its drift.

    ``invariant`` is a key of :data:`INVARIANTS` or a callable; ``args`` wires
    its state arguments to trajectory components (indices or component names)
    in signature order; ``params`` holds the remaining keyword arguments such
    as ``k`` or the couplings.
    """
    params = dict(params or {})
    if isinstance(invariant, str):
        if invariant not in INVARIANTS:
            raise ConfigurationError(f"unknown invariant '{invariant}'", "invariants.invariant_drift")
        name, fn = invariant, INVARIANTS[invariant]
    else:
        fn = invariant
        name = getattr(fn, "__name__", "invariant")

    sig = inspect.signature(fn)
    required = [p.name for p in sig.parameters.values()
                if p.default is inspect.Parameter.empty and p.name not in params]
    if len(args) != len(required):
        raise ConfigurationError(
            f"invariant '{name}' needs {len(required)} state arguments {required}, got {len(args)}",
            "invariants.invariant_drift")
    names = traj.names
    cols = []
    for a in args:
        if isinstance(a, str):
            if a not in names:
                raise ConfigurationError(f"unknown component '{a}'; trajectory has {names}",
                                         "invariants.invariant_drift")
            a = names.index(a)
        if not 0 <= int(a) < traj.states.shape[1]:
            raise ConfigurationError(f"component index {a} out of range", "invariants.invariant_drift")
        cols.append(traj.states[:, int(a)])
    values = [fn(*(c[i] for c in cols), **params) for i in range(len(traj.times))]
    return drift_report(label or name, traj.times, values)
