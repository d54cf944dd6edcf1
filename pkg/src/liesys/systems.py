"""Lie systems with sl(2, R) vector-field triples.

Every system's t-dependent field decomposes as ``X2 - omega^2(t) * X1`` where
``(X1, X2, X3)`` close on sl(2, R). State layouts:

=====================  ==========================  =====================
system                 state                       positivity
=====================  ==========================  =====================
Oscillator             (x, v)                      none
MilnePinney(k)         (x, v)                      x > 0
Riccati                (x,)                        none
Ermakov                (x, v_x, y, v_y)            y > 0 (y is Pinney, k=1)
GeneralizedErmakov     (x, v_x, y, v_y)            x > 0 (and y > 0, see below)
Prolongation           concatenation of members    members' constraints
=====================  ==========================  =====================

For the Ermakov system the oscillator sits on the x pair; for the
generalized Ermakov system f couples into the x equation and g into the y
equation, both through the ratio y/x.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import Constant
from .errors import ConfigurationError, DomainError
from . import coefficients


# -- structure constants ------------------------------------------------------

# Relations are stored per system in their conventional ordering: (a, b, {c: coeff}) means
# [X_a, X_b] = sum coeff * X_c, indices 0-based (X1 -> 0).
RELATIONS_CR = ((0, 1, {2: 2.0}), (2, 0, {0: 1.0}), (1, 2, {1: 1.0}))
RELATIONS_PINNEY = ((0, 1, {2: 2.0}), (2, 1, {1: -1.0}), (2, 0, {0: 1.0}))
RELATIONS_M = ((0, 1, {2: 2.0}), (2, 0, {0: 1.0}), (2, 1, {1: -1.0}))


def structure_tensor(relations, r=3):
    """Antisymmetric ``c[a, b, c]`` array from a list of relations."""
    c = np.zeros((r, r, r))
    for a, b, rhs in relations:
        for g, coeff in rhs.items():
            c[a, b, g] = coeff
            c[b, a, g] = -coeff
    return c


# -- field evaluators -----------------------------------------------------------

class Field:
    """A t-independent vector field with an analytic Jacobian."""

    def __init__(self, value, jacobian, dim):
        self._value = value
        self._jacobian = jacobian
        self.dim = dim

    def __call__(self, p):
        return self._value(np.asarray(p, dtype=float))

    def jacobian(self, p):
        return self._jacobian(np.asarray(p, dtype=float))


def concatenate_fields(fields, dims):
    """Diagonal prolongation: act with each field on its own block of coordinates."""
    offsets = np.concatenate([[0], np.cumsum(dims)])
    total = int(offsets[-1])

    def value(p):
        return np.concatenate([f(p[offsets[i]:offsets[i + 1]]) for i, f in enumerate(fields)])

    def jacobian(p):
        J = np.zeros((total, total))
        for i, f in enumerate(fields):
            a, b = offsets[i], offsets[i + 1]
            J[a:b, a:b] = f.jacobian(p[a:b])
        return J

    return Field(value, jacobian, total)


def _xv_triple(k):
    """(X1, X2, X3) on T R for ``x'' = -omega^2 x + k/x^3``; k = 0 is the oscillator."""
    x1 = Field(lambda p: np.array([0.0, p[0]]),
               lambda p: np.array([[0.0, 0.0], [1.0, 0.0]]), 2)
    if k == 0:
        x2 = Field(lambda p: np.array([p[1], 0.0]),
                   lambda p: np.array([[0.0, 1.0], [0.0, 0.0]]), 2)
    else:
        x2 = Field(lambda p: np.array([p[1], k / p[0] ** 3]),
                   lambda p: np.array([[0.0, 1.0], [-3.0 * k / p[0] ** 4, 0.0]]), 2)
    x3 = Field(lambda p: 0.5 * np.array([p[0], -p[1]]),
               lambda p: np.array([[0.5, 0.0], [0.0, -0.5]]), 2)
    return x1, x2, x3


# -- couplings --------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantValue:
    c: float

    def __call__(self, r):
        return self.c

    def derivative(self, r):
        return 0.0

    def to_dict(self):
        return {"kind": "constant", "c": self.c}


@dataclass(frozen=True)
class PowerLaw:
    """r -> c * r**p."""

    c: float
    p: float

    def __call__(self, r):
        return self.c * r ** self.p

    def derivative(self, r):
        return self.c * self.p * r ** (self.p - 1.0)

    def to_dict(self):
        return {"kind": "power_law", "c": self.c, "p": self.p}


Coupling = ConstantValue | PowerLaw


# -- systems ------------------------------------------------------------------------

def _require_positive(state, indices, op):
    for i in indices:
        if not state[i] > 0:
            raise DomainError(f"component {i} must be positive, got {state[i]}", op)


class _System:
    positive_indices = ()
    relations = RELATIONS_CR

    def check_domain(self, state, op="systems.vector_field"):
        state = np.asarray(state, dtype=float)
        if state.shape != (self.dim,):
            raise DomainError(f"{type(self).__name__} expects a state of dimension {self.dim}, "
                              f"got shape {state.shape}", op)
        _require_positive(state, self.positive_indices, op)
        return state

    @property
    def structure(self):
        return structure_tensor(self.relations)


@dataclass(frozen=True)
class Oscillator(_System):
    omega: coefficients.OmegaProfile = Constant(1.0)

    dim = 2
    names = ("x", "v")

    def field(self, t, s):
        return np.array([s[1], -self.omega.omega_sq(t) * s[0]])

    def fundamental_fields(self):
        return _xv_triple(0.0)

    def to_dict(self):
        return {"kind": "oscillator"}


@dataclass(frozen=True)
class MilnePinney(_System):
    omega: coefficients.OmegaProfile = Constant(1.0)
    k: float = 1.0

    dim = 2
    names = ("x", "v")
    positive_indices = (0,)
    relations = RELATIONS_PINNEY

    def __post_init__(self):
        if not self.k > 0:
            raise ConfigurationError(f"Milne-Pinney needs k > 0, got {self.k}", "systems.MilnePinney")

    def field(self, t, s):
        x = s[0]
        if not x > 0:
            raise DomainError(f"Pinney coordinate must be positive, got {x}", "systems.vector_field")
        return np.array([s[1], -self.omega.omega_sq(t) * x + self.k / x ** 3])

    def fundamental_fields(self):
        return _xv_triple(self.k)

    def to_dict(self):
        return {"kind": "milne_pinney", "k": self.k}


@dataclass(frozen=True)
class Riccati(_System):
    """dx/dt = -omega^2(t) - x^2."""

    omega: coefficients.OmegaProfile = Constant(1.0)

    dim = 1
    names = ("x",)

    def field(self, t, s):
        return np.array([-self.omega.omega_sq(t) - s[0] * s[0]])

    def fundamental_fields(self):
        one = np.ones((1, 1))
        x1 = Field(lambda p: np.array([1.0]), lambda p: np.zeros((1, 1)), 1)
        x2 = Field(lambda p: np.array([-p[0] ** 2]), lambda p: -2.0 * p[0] * one, 1)
        x3 = Field(lambda p: np.array([-p[0]]), lambda p: -one, 1)
        return x1, x2, x3

    def to_dict(self):
        return {"kind": "riccati"}


@dataclass(frozen=True)
class Ermakov(_System):
    """Oscillator on (x, v_x) coupled to the k = 1 Pinney equation on (y, v_y)."""

    omega: coefficients.OmegaProfile = Constant(1.0)

    dim = 4
    names = ("x", "v_x", "y", "v_y")
    positive_indices = (2,)

    def field(self, t, s):
        y = s[2]
        if not y > 0:
            raise DomainError(f"Pinney coordinate y must be positive, got {y}", "systems.vector_field")
        w2 = self.omega.omega_sq(t)
        return np.array([s[1], -w2 * s[0], s[3], -w2 * y + 1.0 / y ** 3])

    def fundamental_fields(self):
        osc, pin = _xv_triple(0.0), _xv_triple(1.0)
        return tuple(concatenate_fields((a, b), (2, 2)) for a, b in zip(osc, pin))

    def to_dict(self):
        return {"kind": "ermakov"}


@dataclass(frozen=True)
class GeneralizedErmakov(_System):
    """x'' = -omega^2 x + f(y/x)/x^3,  y'' = -omega^2 y + g(y/x)/y^3.

    y must also be positive unless f is constant and g vanishes identically.
    """

    omega: coefficients.OmegaProfile = Constant(1.0)
    f: Coupling = ConstantValue(1.0)
    g: Coupling = ConstantValue(0.0)

    dim = 4
    names = ("x", "v_x", "y", "v_y")

    @property
    def positive_indices(self):
        if isinstance(self.f, ConstantValue) and self.g == ConstantValue(0.0):
            return (0,)
        return (0, 2)

    def _forces(self, x, y):
        r = y / x
        fx = self.f(r) / x ** 3
        gy = self.g(r) / y ** 3 if self.g != ConstantValue(0.0) else 0.0
        return fx, gy

    def field(self, t, s):
        _require_positive(s, self.positive_indices, "systems.vector_field")
        x, y = s[0], s[2]
        w2 = self.omega.omega_sq(t)
        fx, gy = self._forces(x, y)
        return np.array([s[1], -w2 * x + fx, s[3], -w2 * y + gy])

    def fundamental_fields(self):
        f, g = self.f, self.g
        zero_g = g == ConstantValue(0.0)

        def v2(p):
            fx, gy = self._forces(p[0], p[2])
            return np.array([p[1], fx, p[3], gy])

        def j2(p):
            x, y = p[0], p[2]
            r = y / x
            J = np.zeros((4, 4))
            J[0, 1] = 1.0
            J[2, 3] = 1.0
            fr, dfr = f(r), f.derivative(r)
            J[1, 0] = -dfr * y / x ** 5 - 3.0 * fr / x ** 4
            J[1, 2] = dfr / x ** 4
            if not zero_g:
                gr, dgr = g(r), g.derivative(r)
                J[3, 0] = -dgr / (x * x * y * y)
                J[3, 2] = dgr / (x * y ** 3) - 3.0 * gr / y ** 4
            return J

        x1 = Field(lambda p: np.array([0.0, p[0], 0.0, p[2]]),
                   lambda p: np.array([[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0]], float), 4)
        x2 = Field(v2, j2, 4)
        x3 = Field(lambda p: 0.5 * np.array([p[0], -p[1], p[2], -p[3]]),
                   lambda p: 0.5 * np.diag([1.0, -1.0, 1.0, -1.0]), 4)
        return x1, x2, x3

    def to_dict(self):
        return {"kind": "generalized_ermakov", "f": self.f.to_dict(), "g": self.g.to_dict()}


@dataclass(frozen=True)
class Prolongation(_System):
    """Diagonal prolongation of several systems sharing one omega profile."""

    members: tuple

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ConfigurationError("prolongation needs at least one member", "systems.Prolongation")
        omega = members[0].omega
        if any(m.omega != omega for m in members):
            raise ConfigurationError("all members of a prolongation must share one omega profile",
                                     "systems.Prolongation")
        object.__setattr__(self, "members", members)

    @property
    def omega(self):
        return self.members[0].omega

    @property
    def dim(self):
        return sum(m.dim for m in self.members)

    @property
    def dims(self):
        return tuple(m.dim for m in self.members)

    @property
    def offsets(self):
        return tuple(int(o) for o in np.concatenate([[0], np.cumsum(self.dims)]))

    @property
    def names(self):
        return tuple(f"{n}_{i}" for i, m in enumerate(self.members) for n in m.names)

    @property
    def positive_indices(self):
        off = self.offsets
        return tuple(off[i] + j for i, m in enumerate(self.members) for j in m.positive_indices)

    @property
    def relations(self):
        kinds = {type(m) for m in self.members}
        if Riccati in kinds and MilnePinney in kinds:
            return RELATIONS_M
        return self.members[0].relations

    def field(self, t, s):
        off = self.offsets
        return np.concatenate([m.field(t, s[off[i]:off[i + 1]]) for i, m in enumerate(self.members)])

    def fundamental_fields(self):
        triples = [m.fundamental_fields() for m in self.members]
        return tuple(concatenate_fields([tr[j] for tr in triples], self.dims) for j in range(3))

    def to_dict(self):
        return {"kind": "prolongation", "members": [m.to_dict() for m in self.members]}


SystemSpec = Oscillator | MilnePinney | Riccati | Ermakov | GeneralizedErmakov | Prolongation


def vector_field(spec, t, state):
    """Right-hand side of the system at ``(t, state)``."""
    state = spec.check_domain(state)
    return spec.field(t, state)


def fundamental_fields(spec):
    """The system's ``(X1, X2, X3)``; the full field is ``X2 - omega^2(t) X1``."""
    return spec.fundamental_fields()


def full_field_decomposition_check(spec, t, state):
    """Norm of ``vector_field - (X2 - omega^2 X1)`` at one point."""
    state = spec.check_domain(state, "systems.full_field_decomposition_check")
    x1, x2, _ = spec.fundamental_fields()
    lhs = spec.field(t, state)
    rhs = x2(state) - spec.omega.omega_sq(t) * x1(state)
    return float(np.linalg.norm(lhs - rhs))


# -- config form -------------------------------------------------------------------

def coupling_from_dict(d):
    kind = d.get("kind") if isinstance(d, dict) else None
    if kind == "constant":
        return ConstantValue(float(d["c"]))
    if kind == "power_law":
        return PowerLaw(float(d["c"]), float(d["p"]))
    raise ConfigurationError(f"unknown coupling {d!r}", "systems.coupling_from_dict")


def system_from_dict(d, omega):
    """Build a system from its tagged-object form with the shared ``omega`` profile."""
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigurationError("system description needs a 'kind' field", "systems.system_from_dict")
    kind = d["kind"]
    try:
        if kind == "oscillator":
            return Oscillator(omega)
        if kind == "milne_pinney":
            return MilnePinney(omega, float(d.get("k", 1.0)))
        if kind == "riccati":
            return Riccati(omega)
        if kind == "ermakov":
            return Ermakov(omega)
        if kind == "generalized_ermakov":
            return GeneralizedErmakov(omega, coupling_from_dict(d["f"]), coupling_from_dict(d["g"]))
        if kind == "prolongation":
            return Prolongation(tuple(system_from_dict(m, omega) for m in d["members"]))
    except KeyError as exc:
        raise ConfigurationError(f"system '{kind}' is missing field {exc}", "systems.system_from_dict")
    raise ConfigurationError(f"unknown system kind '{kind}'", "systems.system_from_dict")
