"""Superposition rules for the oscillator and the Milne-Pinney equation.

Three rules express a general solution through particular ones plus constants:

* ``linear``: oscillator from two oscillator solutions, constants (k1, k2);
* ``pinney_osc``: Pinney from two oscillator solutions, constants (I1, I2)
  with the Wronskian W fixed by the bases and a sign branch;
* ``pinney_riccati``: Pinney from three Riccati solutions of
  ``x' = -omega^2 - x^2``, constants (C1, C2).

``constants_from_state`` inverts each rule at one instant and
``verify_superposition`` checks a rule end to end against direct integration.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate as sint
from scipy.optimize import brentq

from . import invariants
from .errors import (BranchError, ConfigurationError, InversionError, PoleError, RealnessError,
                     SingularConfigurationError, VerificationWindowError)
from .integrator import integrate, sample
from .systems import MilnePinney, Oscillator, Riccati

RULES = ("linear", "pinney_osc", "pinney_riccati")
BRANCH_MATCH_TOL = 1e-9
POLE_CLIP = 0.9


@dataclass(frozen=True)
class LinearConstants:
    k1: float
    k2: float

    def to_dict(self):
        return {"kind": "linear", **asdict(self)}


@dataclass(frozen=True)
class PinneyOscConstants:
    """(I1, I2) with the bases' Wronskian W and the sign of the cross term.

    W is determined by the two oscillator solutions; only I1, I2 and the
    branch are free data.
    """

    I1: float
    I2: float
    W: float
    branch: int = 1

    def __post_init__(self):
        if self.I1 < 0 or self.I2 < 0:
            raise ConfigurationError("I1 and I2 must be non-negative", "superposition.PinneyOscConstants")
        if self.W == 0:
            raise SingularConfigurationError("Wronskian must be nonzero", "superposition.PinneyOscConstants")
        if self.branch not in (1, -1):
            raise ConfigurationError("branch must be +1 or -1", "superposition.PinneyOscConstants")

    def to_dict(self):
        return {"kind": "pinney_osc", **asdict(self)}


@dataclass(frozen=True)
class PinneyRiccatiConstants:
    C1: float
    C2: float

    def to_dict(self):
        return {"kind": "pinney_riccati", **asdict(self)}


SuperpositionConstants = LinearConstants | PinneyOscConstants | PinneyRiccatiConstants


# -- rules -------------------------------------------------------------------------

def oscillator_superpose(x1, v1, x2, v2, consts):
    """(x, v) = c1 (x1, v1) + c2 (x2, v2) with c_i = k_i / (x1 v2 - x2 v1)."""
    k = x1 * v2 - x2 * v1
    if np.any(np.asarray(k) == 0):
        raise SingularConfigurationError("base solutions are dependent (x1 v2 - x2 v1 = 0)",
                                         "superposition.oscillator_superpose")
    c1 = consts.k1 / k
    c2 = consts.k2 / k
    return c1 * x1 + c2 * x2, c1 * v1 + c2 * v2


def _discriminant(consts, k, op):
    four = 4.0 * consts.I1 * consts.I2
    kw2 = k * consts.W ** 2
    d = four - kw2
    if d < 0:
        if d < -1e-12 * max(four, kw2):
            raise RealnessError(f"4 I1 I2 - k W^2 = {d} < 0", op)
        d = 0.0
    return d


def _inner(y, z, consts, root, op):
    q = consts.I2 * y * y + consts.I1 * z * z + consts.branch * root * y * z
    scale = consts.I2 * y * y + consts.I1 * z * z
    bad = q < -1e-12 * scale
    if np.any(bad):
        raise BranchError(f"branch {consts.branch:+d} gives a negative radicand", op)
    return np.maximum(q, 0.0)


def pinney_superpose(y, z, consts, k):
    """x = sqrt(2)/|W| * (I2 y^2 + I1 z^2 +/- sqrt(4 I1 I2 - k W^2) y z)^(1/2)."""
    op = "superposition.pinney_superpose"
    root = np.sqrt(_discriminant(consts, k, op))
    return np.sqrt(2.0) / abs(consts.W) * np.sqrt(_inner(y, z, consts, root, op))


def pinney_superpose_state(y, v_y, z, v_z, consts, k):
    """Pinney rule together with its time derivative, for (x, v) comparisons."""
    op = "superposition.pinney_superpose"
    root = np.sqrt(_discriminant(consts, k, op))
    q = _inner(y, z, consts, root, op)
    x = np.sqrt(2.0) / abs(consts.W) * np.sqrt(q)
    dq = 2.0 * consts.I2 * y * v_y + 2.0 * consts.I1 * z * v_z + consts.branch * root * (v_y * z + y * v_z)
    v = dq / (consts.W ** 2 * x)
    return x, v


def pinney_from_riccati(x1, x2, x3, consts, k):
    """Pinney solution from three Riccati solutions.

    x^2 = ((C1 (x1-x2) - C2 (x1-x3))^2 + k (x2-x3)^2)
          / ((C2-C1) (x2-x3) (x2-x1) (x1-x3))
    """
    op = "superposition.pinney_from_riccati"
    x1, x2, x3 = (np.asarray(a, dtype=float) for a in (x1, x2, x3))
    if np.any(x1 == x2) or np.any(x1 == x3) or np.any(x2 == x3):
        raise SingularConfigurationError("Riccati values must be pairwise distinct", op)
    c1, c2 = consts.C1, consts.C2
    if c1 == c2:
        raise SingularConfigurationError("C1 == C2 makes the rule singular", op)
    num = (c1 * (x1 - x2) - c2 * (x1 - x3)) ** 2 + k * (x2 - x3) ** 2
    den = (c2 - c1) * (x2 - x3) * (x2 - x1) * (x1 - x3)
    rad = num / den
    if np.any(~(rad > 0)):
        raise RealnessError("radicand of the Riccati rule is not positive", op)
    out = np.sqrt(rad)
    return float(out) if out.ndim == 0 else out


# -- inversion ----------------------------------------------------------------------

def constants_from_state(rule, bases, target, k=1.0):
    """Constants of ``rule`` that reproduce ``target = (x, v)`` from base states at one instant.

    ``bases`` is ``[(x1, v1), (x2, v2)]`` for the two oscillator rules and
    ``[x1, x2, x3]`` for the Riccati rule.
    """
    op = "superposition.constants_from_state"
    x, v = (float(a) for a in target)
    if rule == "linear":
        (x1, v1), (x2, v2) = bases
        if x1 * v2 - x2 * v1 == 0:
            raise SingularConfigurationError("base solutions are dependent", op)
        return LinearConstants(float(x * v2 - x2 * v), float(x1 * v - v1 * x))

    if rule == "pinney_osc":
        (y, vy), (z, vz) = bases
        W = float(invariants.wronskian(y, vy, z, vz))
        if W == 0:
            raise SingularConfigurationError("base solutions are dependent (W = 0)", op)
        I1 = float(invariants.pinney_pair_invariant(x, v, y, vy, k))
        I2 = float(invariants.pinney_pair_invariant(x, v, z, vz, k))
        # Lagrange identity: 4 I1 I2 - k W^2 = s^2 and the cross term is -s*y*z
        s = (y * v - x * vy) * (z * v - x * vz) + k * y * z / x ** 2
        preferred = 1 if s <= 0 else -1
        # rounding of (I1, I2, W) perturbs the square root by about sqrt(eps * 4 I1 I2)
        d_root = math.sqrt(8.0 * np.finfo(float).eps * (4.0 * I1 * I2 + k * W * W))
        scale = max(1.0, abs(x), abs(v))
        floor = d_root * max(abs(y * z), abs(vy * z + y * vz)) / (W * W * x * scale)
        best = None
        for branch in (preferred, -preferred):
            consts = PinneyOscConstants(I1, I2, W, branch)
            try:
                xs, vs = pinney_superpose_state(y, vy, z, vz, consts, k)
            except (BranchError, RealnessError):
                continue
            miss = max(abs(xs - x), abs(vs - v)) / scale
            if best is None or miss < best[0]:
                best = (miss, consts)
        if best is None or best[0] > BRANCH_MATCH_TOL + floor:
            raise InversionError("no branch of the Pinney rule matches the target state", op)
        return best[1]

    if rule == "pinney_riccati":
        x1, x2, x3 = (float(np.ravel(b)[0]) for b in bases)
        if x1 == x2 or x1 == x3 or x2 == x3:
            raise SingularConfigurationError("Riccati values must be pairwise distinct", op)
        c1 = float(invariants.riccati_pinney_constant(x2, x1, x, v, k))
        c2 = float(invariants.riccati_pinney_constant(x3, x1, x, v, k))
        return PinneyRiccatiConstants(c1, c2)

    raise ConfigurationError(f"unknown rule '{rule}', expected one of {RULES}", op)


def superpose(rule, base_states, consts, k=1.0):
    """Apply ``rule`` to base states (arrays over time allowed); returns x, or (x, v) for ``linear``."""
    if rule == "linear":
        (x1, v1), (x2, v2) = base_states
        return oscillator_superpose(x1, v1, x2, v2, consts)
    if rule == "pinney_osc":
        (y, _), (z, _) = base_states
        return pinney_superpose(y, z, consts, k)
    if rule == "pinney_riccati":
        x1, x2, x3 = (np.ravel(b) if np.ndim(b) else b for b in base_states)
        return pinney_from_riccati(x1, x2, x3, consts, k)
    raise ConfigurationError(f"unknown rule '{rule}'", "superposition.superpose")


# -- partial rule ---------------------------------------------------------------------

def _sign_crossings(traj, comp):
    xs = traj.states[:, comp]
    out = []
    for i in range(len(xs) - 1):
        if xs[i] == 0:
            out.append(float(traj.times[i]))
        elif xs[i] * xs[i + 1] < 0:
            f = lambda t: sample(traj, t)[comp]
            out.append(brentq(f, traj.times[i], traj.times[i + 1], xtol=1e-14))
    if xs[-1] == 0:
        out.append(float(traj.times[-1]))
    return out


def partial_superpose(traj1, k, k_prime, t0, component=0):
    """Second oscillator solution from a known one by quadrature.

    Returns ``t -> k' x1(t) + k x1(t) * int_{t0}^t dz / x1(z)^2``, where the
    integral runs over the dense output of ``traj1`` with adaptive quadrature.
    Evaluating across a zero of x1 raises :class:`PoleError`.
    """
    op = "superposition.partial_superpose"
    times = traj1.times
    if not times[0] <= t0 <= times[-1]:
        raise PoleError(f"base point t0={t0} outside trajectory range", op)
    crossings = _sign_crossings(traj1, component)

    def inv_sq(t):
        return 1.0 / sample(traj1, t)[component] ** 2

    def quad(a, b):
        return sint.quad(inv_sq, a, b, epsabs=1e-14, epsrel=1e-13, limit=200)[0]

    # Steps containing a zero of x1 contribute nothing; intervals reaching them raise.
    seg = [0.0 if any(a <= c <= b for c in crossings) else quad(a, b)
           for a, b in zip(times[:-1], times[1:])]
    cum = np.concatenate([[0.0], np.cumsum(seg)])

    def integral(t):
        lo, hi = min(t0, t), max(t0, t)
        hit = [c for c in crossings if lo <= c <= hi]
        if hit:
            raise PoleError(f"x1 vanishes at t={hit[0]:.15g} inside [{lo}, {hi}]", op, hit[0])
        if lo == hi:
            return 0.0
        ia = int(np.searchsorted(times, lo, side="right")) - 1
        ib = int(np.searchsorted(times, hi, side="right")) - 1
        if ia == ib:
            total = quad(lo, hi)
        else:
            total = quad(lo, times[ia + 1]) + (cum[ib] - cum[ia + 1])
            if hi > times[ib]:
                total += quad(times[ib], hi)
        return total if t >= t0 else -total

    def x2(t):
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty_like(ts)
        for j, tj in enumerate(ts):
            if not times[0] <= tj <= times[-1]:
                raise PoleError(f"t={tj} outside trajectory range", op)
            x1 = sample(traj1, tj)[component]
            out[j] = k_prime * x1 + k * x1 * integral(tj)
        return out if np.ndim(t) else float(out[0])

    return x2


# -- end-to-end verification -------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    rule: str
    omega: dict
    k: float
    t0: float
    t1: float
    max_abs_error: float
    max_rel_error: float
    n_points: int
    constants: dict
    window_clipped: bool

    def to_dict(self):
        return asdict(self)


def _member_specs(rule, omega, k):
    if rule == "linear":
        return Oscillator(omega), Oscillator(omega), 2
    if rule == "pinney_osc":
        return Oscillator(omega), MilnePinney(omega, k), 2
    if rule == "pinney_riccati":
        return Riccati(omega), MilnePinney(omega, k), 3
    raise ConfigurationError(f"unknown rule '{rule}', expected one of {RULES}",
                             "superposition.verify_superposition")


def integrate_tuple(rule, omega, base_initial, target_initial, k, t0, t1, rel_tol, abs_tol):
    """Integrate the base solutions and the target of ``rule``; returns (bases, target)."""
    base_spec, target_spec, n_bases = _member_specs(rule, omega, k)
    if len(base_initial) != n_bases:
        raise ConfigurationError(f"rule '{rule}' needs {n_bases} base solutions, got {len(base_initial)}",
                                 "superposition.verify_superposition")
    bases = [integrate(base_spec, np.atleast_1d(np.asarray(b, dtype=float)), t0, t1, rel_tol, abs_tol)
             for b in base_initial]
    target = integrate(target_spec, np.asarray(target_initial, dtype=float), t0, t1, rel_tol, abs_tol)
    return bases, target


def common_window(trajs, t0, t1):
    """End of the interval on which every trajectory is usable, and whether it was clipped.

    A base that blew up (Riccati pole) clips the window to 90% of the distance
    to the pole; any other early stop clips it to the last recorded time.
    """
    end = t1
    clipped = False
    for tr in trajs:
        if tr.terminated_early is None:
            continue
        clipped = True
        t_stop, reason = tr.terminated_early
        if reason == "blowup":
            end = min(end, t0 + POLE_CLIP * (t_stop - t0))
        else:
            end = min(end, tr.t_end)
    return end, clipped


def _base_states(rule, bases, t):
    if rule == "pinney_riccati":
        return [sample(b, t)[0] for b in bases]
    return [tuple(sample(b, t)) for b in bases]


def verify_superposition(rule, omega, base_initial, target_initial, k=1.0, t_span=(0.0, 10.0),
                         rel_tol=1e-10, abs_tol=1e-12, n_points=200):
    """Reconstruct a directly integrated target from integrated bases via ``rule``.

    Constants are extracted at ``t_span[0]``; errors are measured on a uniform
    grid of ``n_points`` (at least 50) over the usable window. ``max_rel_error``
    is the sup-norm error divided by the sup norm of the target.
    """
    op = "superposition.verify_superposition"
    t0, t1 = (float(t) for t in t_span)
    n_points = max(int(n_points), 50)
    bases, target = integrate_tuple(rule, omega, base_initial, target_initial, k, t0, t1,
                                    rel_tol, abs_tol)
    end, clipped = common_window(bases + [target], t0, t1)
    if not end > t0:
        raise VerificationWindowError(f"empty comparison window [{t0}, {end}]", op)

    consts = constants_from_state(rule, _base_states(rule, bases, t0), sample(target, t0), k)
    grid = np.linspace(t0, end, n_points)
    if rule == "pinney_riccati":
        b = [np.array([sample(tr, t)[0] for t in grid]) for tr in bases]
    else:
        b = [tuple(np.array([sample(tr, t) for t in grid]).T) for tr in bases]
    ref = np.array([sample(target, t) for t in grid])
    rec = superpose(rule, b, consts, k)
    if rule == "linear":
        err = np.max(np.abs(np.column_stack(rec) - ref))
        scale = np.max(np.abs(ref))
    else:
        err = np.max(np.abs(rec - ref[:, 0]))
        scale = np.max(np.abs(ref[:, 0]))
    return VerificationReport(rule, omega.to_dict(), float(k), t0, float(end), float(err),
                              float(err / scale) if scale > 0 else float(err), n_points,
                              consts.to_dict(), clipped)


def constants_along(rule, omega, base_initial, target_initial, k, times, t_start=0.0,
                    rel_tol=1e-10, abs_tol=1e-12):
    """Constants of ``rule`` extracted at each of ``times`` along one solution tuple."""
    t_end = max(times)
    bases, target = integrate_tuple(rule, omega, base_initial, target_initial, k, t_start, t_end,
                                    rel_tol, abs_tol)
    end, _ = common_window(bases + [target], t_start, t_end)
    if any(t > end for t in times):
        raise VerificationWindowError(f"requested times beyond usable window end {end}",
                                      "superposition.constants_along")
    return [constants_from_state(rule, _base_states(rule, bases, t), sample(target, t), k)
            for t in times]
