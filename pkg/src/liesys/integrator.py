"""Adaptive Dormand-Prince 5(4) integration with dense output.

The step controller and dense-output coefficients follow Hairer, Norsett &
Wanner, *Solving Ordinary Differential Equations I* (DOPRI5): PI control on
an RMS-weighted local error, 4th-order continuous extension per step.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

BLOWUP_THRESHOLD = 1e6
PINNEY_FLOOR = 1e-9
TOL_RANGE = (1e-14, 1e-2)

# Butcher tableau
C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
D = np.array([-12715105075 / 11282082432, 0.0, 87487479700 / 32700410799,
              -10690763975 / 1880347072, 701980252875 / 199316789632,
              -1453857185 / 822651844, 69997945 / 29380423])

SAFETY = 0.9
FAC_MIN = 0.2
FAC_MAX = 10.0
BETA = 0.04
EXPO = 0.2 - 0.75 * BETA


@dataclass(frozen=True)
class Solution:
    """Raw output of :func:`solve`: nodes, states and per-step dense coefficients.

    ``dense[i]`` has shape ``(5, n)`` and interpolates between ``t[i]`` and
    ``t[i + 1]``.
    """

    t: np.ndarray
    y: np.ndarray
    dense: np.ndarray
    terminated_early: tuple | None = None
    nfev: int = 0

    def __call__(self, t):
        return _dense_eval(self.t, self.y, self.dense, t)


def _dense_eval(times, states, dense, t):
    forward = times[-1] >= times[0]
    ts = times if forward else -times
    tq = t if forward else -t
    i = int(np.searchsorted(ts, tq, side="right")) - 1
    if i >= 0 and ts[i] == tq:
        return states[i].copy()
    i = min(max(i, 0), len(times) - 2)
    h = times[i + 1] - times[i]
    s = (t - times[i]) / h
    s1 = 1.0 - s
    c = dense[i]
    return c[0] + s * (c[1] + s1 * (c[2] + s * (c[3] + s1 * c[4])))


def _rms(e, sk):
    return math.sqrt(float(np.mean((e / sk) ** 2)))


def _initial_step(fun, t0, y0, f0, direction, rtol, atol):
    sk = atol + rtol * np.abs(y0)
    d0 = _rms(y0, sk)
    d1 = _rms(f0, sk)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + direction * h0 * f0
    f1 = fun(t0 + direction * h0, y1)
    d2 = _rms(f1 - f0, sk) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1)


def _violation(y, positive, blowup, floor):
    if not np.all(np.isfinite(y)):
        return "nonfinite"
    if np.max(np.abs(y)) > blowup:
        return "blowup"
    for i in positive:
        if y[i] <= floor:
            return "domain_boundary"
    return None


def solve(fun, t0, y0, t1, rtol, atol, positive=(), blowup=BLOWUP_THRESHOLD,
          floor=PINNEY_FLOOR, max_steps=1_000_000):
    """Integrate ``y' = fun(t, y)`` from ``t0`` to ``t1`` (either direction).

    Integration stops early, without raising, when a component exceeds
    ``blowup`` in magnitude or a component listed in ``positive`` drops to
    ``floor``; the offending state is not recorded and ``terminated_early`` is
    set to ``(t_stop, reason)``.
    """
    y = np.array(y0, dtype=float)
    t = float(t0)
    t1 = float(t1)
    direction = 1.0 if t1 >= t else -1.0
    nfev = 0

    def f(tt, yy):
        nonlocal nfev
        nfev += 1
        return np.asarray(fun(tt, yy), dtype=float)

    times, states, dense = [t], [y.copy()], []
    if t1 == t:
        return Solution(np.array(times), np.array(states), np.zeros((0, 5, y.size)))

    k = np.empty((7, y.size))
    k[0] = f(t, y)
    h = _initial_step(f, t, y, k[0], direction, rtol, atol)
    facold = 1e-4
    reject = False
    stop = None
    span = abs(t1 - t0)
    hmin = 1e-14 * max(abs(t0), abs(t1), 1.0)

    for _ in range(max_steps):
        remaining = abs(t1 - t)
        last = False
        if h >= remaining * (1 - 1e-12):
            h = remaining
            last = True
        if h < hmin:
            stop = (t, "step_size_underflow")
            break
        hs = direction * h
        try:
            for i in range(1, 7):
                yi = y + hs * (np.dot(A[i], k[:i]))
                k[i] = f(t + C[i] * hs, yi)
            y_new = y + hs * np.dot(B[:6], k[:6])
            ok = np.all(np.isfinite(k)) and np.all(np.isfinite(y_new))
        except (DomainError, FloatingPointError, ZeroDivisionError, OverflowError):
            ok = False
        if not ok:
            h *= 0.25
            reject = True
            last = False
            continue

        err_vec = hs * np.dot(E, k)
        sk = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = _rms(err_vec, sk)
        fac11 = err ** EXPO if err > 0 else 0.0
        if err <= 1.0:
            fac = fac11 / facold ** BETA
            fac = min(1.0 / FAC_MIN, max(1.0 / FAC_MAX, fac / SAFETY))
            h_new = h / fac
            facold = max(err, 1e-4)
            t_new = t1 if last else t + hs
            why = _violation(y_new, positive, blowup, floor)
            if why is not None:
                stop = (t_new, why)
                break
            ydiff = y_new - y
            bspl = hs * k[0] - ydiff
            cont = np.empty((5, y.size))
            cont[0] = y
            cont[1] = ydiff
            cont[2] = bspl
            cont[3] = ydiff - hs * k[6] - bspl
            cont[4] = hs * np.dot(D, k)
            dense.append(cont)
            times.append(t_new)
            states.append(y_new)
            t, y = t_new, y_new
            k[0] = k[6]
            if last:
                break
            if reject:
                h_new = min(h_new, h)
            reject = False
            h = min(h_new, span)
        else:
            h = h / min(1.0 / FAC_MIN, fac11 / SAFETY)
            reject = True
    else:
        stop = (t, "max_steps")

    return Solution(np.array(times), np.array(states), np.array(dense).reshape(-1, 5, y.size),
                    stop, nfev)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    spec: object
    tolerances: tuple
    dense_data: np.ndarray
    terminated_early: tuple | None = None

    @property
    def t0(self):
        return float(self.times[0])

    @property
    def t_end(self):
        return float(self.times[-1])

    @property
    def names(self):
        return tuple(self.spec.names)

    def component(self, index):
        if isinstance(index, str):
            index = self.names.index(index)
        return self.states[:, index]

    def sample(self, t):
        return sample(self, t)

    def to_csv(self, path):
        write_csv(path, ("t",) + self.names, np.column_stack([self.times, self.states]))


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(header)
        for row in rows:
            w.writerow([f"{v:.17g}" for v in row])


def _check_tol(name, value):
    lo, hi = TOL_RANGE
    if not lo <= value <= hi:
        raise DomainError(f"{name}={value} outside [{lo}, {hi}]", "integrator.integrate")


def integrate(spec, state0, t0, t1, rel_tol=1e-10, abs_tol=1e-12):
    """Integrate a system's vector field forward from ``t0`` to ``t1``."""
    if not t1 > t0:
        raise DomainError(f"need t1 > t0, got t0={t0}, t1={t1}", "integrator.integrate")
    _check_tol("rel_tol", rel_tol)
    _check_tol("abs_tol", abs_tol)
    y0 = spec.check_domain(state0, "integrator.integrate")
    sol = solve(spec.field, t0, y0, t1, rel_tol, abs_tol, positive=spec.positive_indices)
    return Trajectory(sol.t, sol.y, spec, (rel_tol, abs_tol), sol.dense, sol.terminated_early)


def sample(traj, t):
    """Dense-output state at ``t``; stored states are returned exactly at grid nodes."""
    if not traj.times[0] <= t <= traj.times[-1]:
        raise DomainError(f"t={t} outside trajectory range [{traj.times[0]}, {traj.times[-1]}]",
                          "integrator.sample")
    if len(traj.times) == 1:
        return traj.states[0].copy()
    return _dense_eval(traj.times, traj.states, traj.dense_data, t)


def sample_many(traj, ts):
    return np.array([sample(traj, float(t)) for t in ts])

