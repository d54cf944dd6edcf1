"""The SL(2, R) action on T R+ whose fundamental fields are the Milne-Pinney triple.

Basis of sl(2, R)::

    a1 = [[0, 0], [-1, 0]],  a2 = [[0, -1], [0, 0]],  a3 = 1/2 [[-1, 0], [0, 1]]

With this basis ``d/ds act(exp(-s a_j), p)|_{s=0} = L_j(p)``. Every element
with delta > 0 factors as ``exp(-al2 a2) exp(-al1 a1) exp(-al3 a3)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, NumericConsistencyError
from .integrator import solve
from .systems import MilnePinney, _xv_triple

A1 = np.array([[0.0, 0.0], [-1.0, 0.0]])
A2 = np.array([[0.0, -1.0], [0.0, 0.0]])
A3 = 0.5 * np.array([[-1.0, 0.0], [0.0, 1.0]])
BASIS = (A1, A2, A3)

UNIMODULAR_TOL = 1e-12
RADICAND_TOL = 1e-12


@dataclass(frozen=True)
class GroupElement:
    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        det = self.alpha * self.delta - self.beta * self.gamma
        if abs(det - 1.0) > UNIMODULAR_TOL:
            raise DomainError(f"element is not unimodular (det = {det!r})", "sl2.GroupElement")

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def matrix(self):
        return np.array([[self.alpha, self.beta], [self.gamma, self.delta]])

    def __matmul__(self, other):
        a, b, c, d = self.alpha, self.beta, self.gamma, self.delta
        e, f, g, h = other.alpha, other.beta, other.gamma, other.delta
        return GroupElement(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def exp_basis(j, s):
    """exp(s * a_j) in closed form (j = 1, 2, 3)."""
    if j == 1:
        return GroupElement(1.0, 0.0, -s, 1.0)
    if j == 2:
        return GroupElement(1.0, -s, 0.0, 1.0)
    if j == 3:
        return GroupElement(math.exp(-s / 2), 0.0, 0.0, math.exp(s / 2))
    raise ConfigurationError(f"basis index must be 1, 2 or 3, got {j}", "sl2.exp_basis")


@dataclass(frozen=True)
class DecomposedElement:
    alpha1: float
    alpha2: float
    alpha3: float

    def recompose(self):
        return exp_basis(2, -self.alpha2) @ exp_basis(1, -self.alpha1) @ exp_basis(3, -self.alpha3)


def decompose(A):
    """Factor coordinates (al1, al2, al3) = (gamma*delta, beta/delta, -2 ln delta); needs delta > 0."""
    if not A.delta > 0:
        raise DomainError(f"decomposition needs delta > 0, got {A.delta}", "sl2.decompose")
    return DecomposedElement(A.gamma * A.delta, A.beta / A.delta, -2.0 * math.log(A.delta))


def random_element(rng, scale=2.0):
    """Recompose uniformly drawn factor coordinates; delta > 0 by construction."""
    a1, a2, a3 = rng.uniform(-scale, scale, size=3)
    return DecomposedElement(float(a1), float(a2), float(a3)).recompose()


def _clamped_sqrt(value, scale, what):
    if value < 0:
        if value < -RADICAND_TOL * max(1.0, scale):
            raise NumericConsistencyError(f"{what} radicand {value!r} is negative", "sl2.act")
        return 0.0
    return math.sqrt(value)


def act(A, x, v, k):
    """Closed-form action of ``A`` on ``(x, v)`` in T R+ for the Pinney constant ``k``."""
    if not x > 0:
        raise DomainError(f"need x > 0, got {x}", "sl2.act")
    if not k > 0:
        raise DomainError(f"need k > 0, got {k}", "sl2.act")
    a, b, c, d = A.alpha, A.beta, A.gamma, A.delta
    if d == 0:
        raise DomainError("the action formula needs delta != 0", "sl2.act")
    dv_gx = d * v + c * x
    # x^2 pulled out of the denominator so that the identity returns x exactly
    num = k + ((b * v + a * x) * dv_gx + k * d * b / x ** 2) ** 2
    den = (x * dv_gx) ** 2 + k * d * d
    xb = x * math.sqrt(num / den)
    lam = dv_gx ** 2 + k * d * d / (x * x)
    rad = dv_gx ** 2 + (k * d * d / (x * x)) * (1.0 - (x / (d * xb)) ** 2)
    kappa = np.sign(b / d * (x * c + v * d) ** 2 + k * d * b / x ** 2 + abs(x) / d * (v * d + x * c))
    vb = float(kappa) * _clamped_sqrt(rad, lam, "v")
    return xb, vb


def l2_flow(x, v, k, s, rel_tol=1e-13, abs_tol=1e-13):
    """Numerically follow the field L2 = v d/dx + k/x^3 d/dv for parameter time ``s``."""
    _, l2, _ = _xv_triple(k)
    return solve(lambda t, p: l2(p), 0.0, [x, v], s, rel_tol, abs_tol, positive=(0,))


def act_via_flows(A, x, v, k, rel_tol=1e-13, abs_tol=1e-13):
    """The action built from the factorisation: L3 scaling, L1 shear, then the L2 flow."""
    if not x > 0:
        raise DomainError(f"need x > 0, got {x}", "sl2.act_via_flows")
    dec = decompose(A)
    x1 = math.exp(dec.alpha3 / 2) * x
    v1 = math.exp(-dec.alpha3 / 2) * v
    x2, v2 = x1, dec.alpha1 * x1 + v1
    sol = l2_flow(x2, v2, k, dec.alpha2, rel_tol, abs_tol)
    if sol.terminated_early is not None:
        raise NumericConsistencyError(f"L2 flow stopped early: {sol.terminated_early}", "sl2.act_via_flows")
    return float(sol.y[-1, 0]), float(sol.y[-1, 1])


def lie_bracket(X, Y, p, mode="analytic", h=1e-5):
    """[X, Y](p) = DY(p) X(p) - DX(p) Y(p)."""
    p = np.asarray(p, dtype=float)
    if mode == "analytic":
        return Y.jacobian(p) @ X(p) - X.jacobian(p) @ Y(p)
    if mode == "fd":
        return _directional(Y, p, X(p), h) - _directional(X, p, Y(p), h)
    raise ConfigurationError(f"unknown bracket mode '{mode}'", "sl2.bracket_residual")


def _directional(F, p, u, h):
    # fourth-order central difference of F along u
    return (-F(p + 2 * h * u) + 8 * F(p + h * u) - 8 * F(p - h * u) + F(p - 2 * h * u)) / (12 * h)


def bracket_residual(fields, structure, points, mode="analytic", h=1e-5):
    """Max over points and pairs a < b of ``|[X_a, X_b] - sum_c structure[a, b, c] X_c|``."""
    op = "sl2.bracket_residual"
    structure = np.asarray(structure, dtype=float)
    r = len(fields)
    if structure.shape != (r, r, r):
        raise ConfigurationError(f"structure tensor must have shape {(r, r, r)}", op)
    dims = {f.dim for f in fields}
    if len(dims) != 1:
        raise ConfigurationError(f"fields have different dimensions {sorted(dims)}", op)
    if mode == "fd" and not 1e-8 <= h <= 1e-3:
        raise ConfigurationError(f"finite-difference step h={h} outside [1e-8, 1e-3]", op)
    dim = dims.pop()
    worst = 0.0
    for p in points:
        p = np.asarray(p, dtype=float)
        if p.shape != (dim,):
            raise ConfigurationError(f"point of shape {p.shape} does not match field dimension {dim}", op)
        vals = [f(p) for f in fields]
        for a in range(r):
            for b in range(a + 1, r):
                lhs = lie_bracket(fields[a], fields[b], p, mode, h)
                rhs = sum(structure[a, b, c] * vals[c] for c in range(r))
                worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


@dataclass(frozen=True)
class ActionConsistency:
    composition: float
    generator: float


def action_consistency(k=1.0, trials=100, seed=0, h=1e-6):
    """Homomorphism and generator residuals of :func:`act` over random samples.

    Composition: ``|act(AB, p) - act(A, act(B, p))|`` with all deltas positive.
    Generator: central difference of ``s -> act(exp(-s a_j), p)`` at 0 against
    ``L_j(p)`` for j = 1, 2, 3.
    """
    rng = np.random.default_rng(seed)
    triple = MilnePinney(k=k).fundamental_fields()
    comp = gen = 0.0
    done = 0
    while done < trials:
        A, B = random_element(rng), random_element(rng)
        AB = A @ B
        if not AB.delta > 0:
            continue
        x, v = float(rng.uniform(0.2, 3.0)), float(rng.uniform(-3.0, 3.0))
        lhs = np.array(act(AB, x, v, k))
        rhs = np.array(act(A, *act(B, x, v, k), k))
        comp = max(comp, float(np.max(np.abs(lhs - rhs))))
        for j in (1, 2, 3):
            fwd = np.array(act(exp_basis(j, -h), x, v, k))
            bwd = np.array(act(exp_basis(j, h), x, v, k))
            deriv = (fwd - bwd) / (2 * h)
            gen = max(gen, float(np.max(np.abs(deriv - triple[j - 1]([x, v])))))
        done += 1
    return ActionConsistency(comp, gen)
