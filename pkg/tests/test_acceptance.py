"""Acceptance gate: one test per criterion, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py -v`` and read the "acceptance
criteria" section of the terminal summary for the PASS/FAIL lines.
"""
import math

import numpy as np

from liesys.coefficients import Constant, Sinusoidal
from liesys.integrator import integrate, sample
from liesys.invariants import generalized_ermakov_invariant, invariant_drift, pinney_pair_invariant
from liesys.sl2 import act, act_via_flows, action_consistency, bracket_residual, decompose, l2_flow, random_element
from liesys.superposition import (PinneyRiccatiConstants, common_window, constants_along, integrate_tuple,
                                  partial_superpose, pinney_from_riccati, verify_superposition)
from liesys.systems import (ConstantValue, Ermakov, GeneralizedErmakov, MilnePinney, Oscillator,
                            PowerLaw, Prolongation, Riccati)

SINE_HALF = Sinusoidal(1.0, 0.5, 1.0, phase=-math.pi / 2)   # 1 + 0.5 sin t
SINE_FIFTH = Sinusoidal(1.0, 0.2, 1.0, phase=-math.pi / 2)  # 1 + 0.2 sin t
COS_BASES = [(1.0, 0.0), (0.0, 1.0)]


def test_ermakov_lewis_conservation(criterion):
    tr = integrate(Ermakov(Sinusoidal(1.0, 0.3, 1.0)), [1.0, 0.0, 1.0, 0.2], 0.0, 20.0, rel_tol=1e-10)
    assert tr.terminated_early is None
    rep = invariant_drift(tr, "ermakov_lewis", ["x", "v_x", "y", "v_y"])
    assert criterion(1, "Ermakov-Lewis max_rel_drift", rep.max_rel_drift, 1e-7)


def test_pinney_from_two_oscillators(criterion):
    rep = verify_superposition("pinney_osc", SINE_HALF, COS_BASES, (1.0, 0.0), 1.0, (0.0, 10.0))
    assert not rep.window_clipped
    assert criterion(2, "Pinney from oscillators max_rel_error", rep.max_rel_error, 1e-6)


def test_three_riccati_rule(criterion):
    w = Constant(1.0)
    rep = verify_superposition("pinney_riccati", w, [-1.0, 0.0, 1.0], (1.0, 0.0), 1.0, (0.0, 10.0))
    c = rep.constants
    ok = criterion(3, "three-Riccati constants |(C1, C2) - (-1, 0)|",
                   max(abs(c["C1"] + 1.0), abs(c["C2"])), 1e-10)

    bases, target = integrate_tuple("pinney_riccati", w, [-1.0, 0.0, 1.0], (1.0, 0.0), 1.0,
                                    0.0, 10.0, 1e-10, 1e-12)
    end, clipped = common_window(bases + [target], 0.0, 10.0)
    assert clipped and abs(end - 0.9 * math.pi / 4) < 1e-5
    grid = np.linspace(0.0, end, 200)
    xs = [np.array([sample(b, t)[0] for t in grid]) for b in bases]
    x = pinney_from_riccati(*xs, PinneyRiccatiConstants(-1.0, 0.0), 1.0)
    ok &= criterion(3, "three-Riccati reconstruction |x - 1| on clipped window", np.max(np.abs(x - 1.0)), 1e-8)

    rep = verify_superposition("pinney_riccati", SINE_FIFTH, [-1.0, 0.0, 1.0], (1.0, 0.0), 1.0, (0.0, 10.0))
    ok &= criterion(3, "three-Riccati with 1 + 0.2 sin t max_rel_error", rep.max_rel_error, 1e-6)
    assert ok


def test_linear_oscillator_rule(criterion):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for k1, k2 in rng.uniform(-2.0, 2.0, size=(10, 2)):
        # cos/sin-type bases have unit Wronskian, so the target starts at (k1, k2)
        rep = verify_superposition("linear", SINE_HALF, COS_BASES, (k1, k2), 1.0, (0.0, 10.0),
                                   rel_tol=1e-11, abs_tol=1e-13)
        assert rep.constants["k1"] == k1 and rep.constants["k2"] == k2
        worst = max(worst, rep.max_abs_error)
    assert criterion(4, "linear rule worst reconstruction error", worst, 1e-9)


def test_partial_superposition(criterion):
    a = 1.45
    tr = integrate(Oscillator(Constant(1.0)), [math.cos(a), math.sin(a)], -a, a, rel_tol=1e-10)
    x2 = partial_superpose(tr, 1.0, 0.0, 0.0)
    ts = np.linspace(-1.4, 1.4, 281)
    assert criterion(5, "partial superposition |x2 - sin|", np.max(np.abs(x2(ts) - np.sin(ts))), 1e-6)


def _points(spec, rng, n=100):
    p = rng.uniform(-3.0, 3.0, size=(n, spec.dim))
    for i in spec.positive_indices:
        p[:, i] = rng.uniform(0.3, 3.0, size=n)
    return p


def test_bracket_structure_constants(criterion):
    triples = {
        "Milne-Pinney": MilnePinney(k=1.0),
        "generalized Ermakov": GeneralizedErmakov(f=PowerLaw(1.0, 2.0), g=PowerLaw(0.5, -1.0)),
        "oscillator": Oscillator(),
        "Riccati": Riccati(),
        "prolonged Riccati^3 x Pinney": Prolongation((Riccati(),) * 3 + (MilnePinney(k=1.0),)),
    }
    ok = True
    for seed, (name, spec) in enumerate(triples.items()):
        pts = _points(spec, np.random.default_rng(seed))
        fields = spec.fundamental_fields()
        ok &= criterion(6, f"{name} analytic bracket residual",
                        bracket_residual(fields, spec.structure, pts), 1e-12)
        ok &= criterion(6, f"{name} finite-difference bracket residual",
                        bracket_residual(fields, spec.structure, pts, mode="fd", h=1e-5), 1e-6)
    assert ok


def test_group_action(criterion):
    chk = action_consistency(k=1.0, trials=1000, seed=0)
    ok = criterion(7, "composition residual (1000 pairs)", chk.composition, 1e-9)

    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(1000):
        A = random_element(rng)
        worst = max(worst, float(np.max(np.abs(decompose(A).recompose().matrix - A.matrix))))
    ok &= criterion(7, "decompose round trip (1000 elements)", worst, 1e-12)

    rng = np.random.default_rng(2)
    worst = lam_drift = 0.0
    rel_tol = 1e-13
    for _ in range(100):
        A = random_element(rng)
        x, v = float(rng.uniform(0.2, 3.0)), float(rng.uniform(-3.0, 3.0))
        worst = max(worst, float(np.max(np.abs(np.subtract(act(A, x, v, 1.0), act_via_flows(A, x, v, 1.0))))))
        sol = l2_flow(x, v, 1.0, decompose(A).alpha2, rel_tol, 1e-13)
        lam = sol.y[:, 1] ** 2 + 1.0 / sol.y[:, 0] ** 2
        lam_drift = max(lam_drift, float(np.max(np.abs(lam - lam[0])) / max(1.0, lam[0])))
    ok &= criterion(7, "act vs act_via_flows (100 elements)", worst, 1e-9)
    ok &= criterion(7, "lambda drift along L2 flow (100 x rel_tol bound)", lam_drift, 100 * rel_tol)
    assert ok


def test_constant_frequency_fixed_point(criterion):
    ok = True
    for omega0, k in ((1.0, 1.0), (2.0, 3.0)):
        x_star = (k / omega0 ** 2) ** 0.25
        tr = integrate(MilnePinney(Constant(omega0), k), [x_star, 0.0], 0.0, 50.0, rel_tol=1e-10)
        assert tr.terminated_early is None
        ok &= criterion(8, f"fixed point (omega0={omega0:g}, k={k:g}) max |x - x*|",
                        float(np.max(np.abs(tr.states[:, 0] - x_star))), 1e-8)
    assert ok


def test_reduction_identity(criterion):
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(1000):
        x, y = rng.uniform(0.2, 3.0, 2)
        v_x, v_y = rng.uniform(-3.0, 3.0, 2)
        k = rng.uniform(0.1, 3.0)
        lhs = generalized_ermakov_invariant(x, v_x, y, v_y, ConstantValue(k), ConstantValue(0.0))
        rhs = pinney_pair_invariant(x, v_x, y, v_y, k) - k / 2
        worst = max(worst, abs(lhs - rhs))
    assert criterion(9, "reduction identity (1000 points)", worst, 1e-12)


def _spread(cs, fields):
    a, b = ([getattr(c, f) for f in fields] for c in cs)
    return max(abs(p - q) for p, q in zip(a, b))


def test_constants_are_constant(criterion):
    times = [0.0, 3.0]
    ok = True
    # free data of the Pinney rule are I1, I2; W is fixed by the bases and compared too
    cs = constants_along("pinney_osc", SINE_HALF, COS_BASES, (1.0, 0.0), 1.0, times)
    ok &= criterion(10, "Pinney-from-oscillators constants at t=0 vs t=3", _spread(cs, ("I1", "I2", "W")), 1e-6)

    # slow frequency and positive bases keep every Riccati pole beyond t=3 / 0.9
    slow = Sinusoidal(0.25, 0.05, 1.0, phase=-math.pi / 2)
    cs = constants_along("pinney_riccati", slow, [0.5, 1.0, 2.0], (1.0, 0.0), 1.0, times)
    ok &= criterion(10, "three-Riccati constants at t=0 vs t=3", _spread(cs, ("C1", "C2")), 1e-6)

    cs = constants_along("linear", SINE_HALF, COS_BASES, (0.3, -1.2), 1.0, times)
    ok &= criterion(10, "linear-rule constants at t=0 vs t=3", _spread(cs, ("k1", "k2")), 1e-6)
    assert ok
