import math

import numpy as np
import pytest

from liesys.coefficients import Constant, Sinusoidal
from liesys.errors import ConfigurationError, DomainError
from liesys.sl2 import bracket_residual
from liesys.systems import (ConstantValue, Ermakov, GeneralizedErmakov, MilnePinney, Oscillator,
                            PowerLaw, Prolongation, Riccati, full_field_decomposition_check,
                            fundamental_fields, system_from_dict, vector_field)

W = Sinusoidal(1.0, 0.3, 1.0)

SYSTEMS = {
    "oscillator": Oscillator(W),
    "pinney": MilnePinney(W, 1.7),
    "riccati": Riccati(W),
    "ermakov": Ermakov(W),
    "gen_ermakov": GeneralizedErmakov(W, PowerLaw(1.0, 2.0), PowerLaw(0.5, -1.0)),
    "gen_ermakov_const": GeneralizedErmakov(W, ConstantValue(2.0), ConstantValue(0.0)),
    "two_osc": Prolongation((Oscillator(W), Oscillator(W))),
    "three_osc": Prolongation((Oscillator(W),) * 3),
    "pinney_two_osc": Prolongation((MilnePinney(W, 1.0), Oscillator(W), Oscillator(W))),
    "riccati3_pinney": Prolongation((Riccati(W),) * 3 + (MilnePinney(W, 1.0),)),
}


def random_points(spec, n, rng):
    pts = rng.uniform(-3, 3, size=(n, spec.dim))
    for i in spec.positive_indices:
        pts[:, i] = rng.uniform(0.3, 3, size=n)
    return pts


def test_vector_field_examples():
    assert np.array_equal(vector_field(MilnePinney(Constant(1.0), 1.0), 0.0, [1.0, 0.0]), [0.0, 0.0])
    assert np.array_equal(vector_field(Oscillator(Constant(2.0)), 0.0, [1.0, 3.0]), [3.0, -4.0])
    ge = GeneralizedErmakov(Constant(1.0), ConstantValue(1.0), ConstantValue(0.0))
    assert np.array_equal(vector_field(ge, 0.0, [1.0, 0.0, 1.0, 0.0]), [0.0, 0.0, 0.0, -1.0])


def test_vector_field_domain():
    with pytest.raises(DomainError):
        vector_field(MilnePinney(), 0.0, [-1.0, 0.0])
    with pytest.raises(DomainError):
        vector_field(Ermakov(), 0.0, [1.0, 0.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        vector_field(Oscillator(), 0.0, [1.0, 0.0, 0.0])


def test_fundamental_field_examples():
    x1, x2, x3 = fundamental_fields(Riccati())
    assert x1([2.0])[0] == 1.0 and x2([2.0])[0] == -4.0 and x3([2.0])[0] == -2.0
    _, l2, _ = fundamental_fields(MilnePinney(k=1.0))
    assert np.array_equal(l2([1.0, 2.0]), [2.0, 1.0])
    _, _, x3 = fundamental_fields(Oscillator())
    assert np.array_equal(x3([2.0, 4.0]), [1.0, -2.0])


@pytest.mark.parametrize("name", sorted(SYSTEMS))
def test_decomposition_residual(name):
    spec = SYSTEMS[name]
    rng = np.random.default_rng(1)
    for p in random_points(spec, 50, rng):
        t = rng.uniform(0, 10)
        scale = 1 + np.linalg.norm(vector_field(spec, t, p))
        assert full_field_decomposition_check(spec, t, p) <= 1e-14 * scale


def test_decomposition_exact_examples():
    assert full_field_decomposition_check(MilnePinney(W, 2.0), 0.4, [1.3, -0.2]) == 0.0
    assert full_field_decomposition_check(Ermakov(Constant(1.0)), 0.0, [1.0, 1.0, 1.0, 1.0]) == 0.0


@pytest.mark.parametrize("name", sorted(SYSTEMS))
def test_jacobians_match_finite_differences(name):
    spec = SYSTEMS[name]
    rng = np.random.default_rng(2)
    h = 1e-6
    for p in random_points(spec, 10, rng):
        for f in fundamental_fields(spec):
            J = f.jacobian(p)
            fd = np.column_stack([(f(p + h * e) - f(p - h * e)) / (2 * h) for e in np.eye(spec.dim)])
            assert np.max(np.abs(J - fd)) < 1e-6 * (1 + np.max(np.abs(J)))


@pytest.mark.parametrize("name", sorted(SYSTEMS))
def test_brackets_match_structure_constants(name):
    spec = SYSTEMS[name]
    pts = random_points(spec, 100, np.random.default_rng(3))
    assert bracket_residual(fundamental_fields(spec), spec.structure, pts) < 1e-12


def test_relation_variants_are_one_algebra():
    # the three orderings of the relations describe the same structure tensor
    tensors = {name: s.structure.tobytes() for name, s in SYSTEMS.items()}
    assert len(set(tensors.values())) == 1


def test_prolongation_fields_are_concatenations():
    spec = SYSTEMS["riccati3_pinney"]
    rng = np.random.default_rng(4)
    for p in random_points(spec, 20, rng):
        prolonged = fundamental_fields(spec)
        parts = [fundamental_fields(m) for m in spec.members]
        for j in range(3):
            expect = np.concatenate([parts[0][j](p[0:1]), parts[1][j](p[1:2]),
                                     parts[2][j](p[2:3]), parts[3][j](p[3:5])])
            assert np.array_equal(prolonged[j](p), expect)


def test_m_field_components():
    k = 1.3
    spec = Prolongation((Riccati(), Riccati(), Riccati(), MilnePinney(k=k)))
    m1, m2, m3 = fundamental_fields(spec)
    x1, x2, x3, x, v = 0.3, -1.2, 2.0, 0.7, -0.4
    p = [x1, x2, x3, x, v]
    assert np.allclose(m1(p), [1, 1, 1, 0, x], atol=0)
    assert np.allclose(m2(p), [-x1 ** 2, -x2 ** 2, -x3 ** 2, v, k / x ** 3], rtol=1e-15, atol=0)
    assert np.allclose(m3(p), [-x1, -x2, -x3, x / 2, -v / 2], atol=0)


def test_generalized_ermakov_reduces_to_pinney_plus_oscillator():
    k = 2.5
    ge = GeneralizedErmakov(W, ConstantValue(k), ConstantValue(0.0))
    pro = Prolongation((MilnePinney(W, k), Oscillator(W)))
    rng = np.random.default_rng(5)
    for _ in range(100):
        s = np.array([rng.uniform(0.2, 3), rng.normal(), rng.normal(), rng.normal()])
        t = rng.uniform(0, 20)
        assert np.array_equal(vector_field(ge, t, s), vector_field(pro, t, s))


def test_prolongation_shares_omega():
    with pytest.raises(ConfigurationError):
        Prolongation((Oscillator(Constant(1.0)), Oscillator(Constant(2.0))))


def test_component_names_and_domain():
    spec = SYSTEMS["riccati3_pinney"]
    assert spec.names == ("x_0", "x_1", "x_2", "x_3", "v_3")
    assert spec.positive_indices == (3,)
    assert spec.dim == 5


def test_system_from_dict():
    d = {"kind": "prolongation", "members": [
        {"kind": "riccati"}, {"kind": "milne_pinney", "k": 2.0},
        {"kind": "generalized_ermakov", "f": {"kind": "power_law", "c": 1.0, "p": 2.0},
         "g": {"kind": "constant", "c": 0.0}}]}
    spec = system_from_dict(d, W)
    assert spec.to_dict() == d
    assert spec.members[1] == MilnePinney(W, 2.0)
    with pytest.raises(ConfigurationError):
        system_from_dict({"kind": "duffing"}, W)
    with pytest.raises(ConfigurationError):
        MilnePinney(W, -1.0)


def test_couplings():
    f = PowerLaw(2.0, 3.0)
    assert f(2.0) == 16.0
    assert f.derivative(2.0) == 24.0
    assert ConstantValue(1.5)(7.0) == 1.5
    assert math.isclose(PowerLaw(1.0, -0.5)(4.0), 0.5)
