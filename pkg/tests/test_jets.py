import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skgeom.jets import (
    InsufficientOrderError,
    Jet,
    JetError,
    JetSpace,
    Prepotential,
    constant_jet,
    finite_difference_jet,
    finite_difference_wirtinger,
    jet_add,
    jet_einsum,
    jet_exp,
    jet_log,
    jet_mul,
    reciprocal,
    stack_jets,
    variable_jet,
)


def test_monomials_graded_and_prefix():
    sp = JetSpace.get(2, 3)
    degs = [sum(m) for m in sp.monomials]
    assert degs == sorted(degs)
    assert sp.size == math.comb(2 + 3, 3)
    assert sp.prefix(1) == 3


def test_cube_expansion_at_one():
    z = variable_jet(0, [1.0], 3)
    c = (z * z * z).coeffs
    assert [c[(k,)] for k in range(4)] == pytest.approx([1, 3, 3, 1])


def test_difference_of_squares():
    z = variable_jet(0, [0.0], 4)
    one = constant_jet(1.0, [0.0], 4)
    prod = (one + z) * (one - z)
    assert np.allclose(prod.array, [1, 0, -1, 0, 0])


def test_reciprocal_series():
    z = variable_jet(0, [0.0], 1)
    r = reciprocal(2.0 - z)
    assert np.allclose(r.array, [0.5, 0.25])


def test_log_of_e_and_exp_roundtrip():
    e = constant_jet(np.e, [0.0], 3)
    assert jet_log(e).value == pytest.approx(1.0)
    z = variable_jet(0, [0.2], 5)
    back = jet_exp(jet_log(1.0 + z))
    assert np.allclose(back.array, (1.0 + z).array)


def test_exp_coefficients():
    z = variable_jet(0, [0.0], 6)
    assert np.allclose(jet_exp(z).array, [1 / math.factorial(k) for k in range(7)])


def test_strict_ops_reject_mismatch():
    a = variable_jet(0, [0.0], 3)
    b = variable_jet(0, [0.0], 2)
    with pytest.raises(JetError):
        jet_mul(a, b)
    with pytest.raises(JetError):
        jet_add(a, variable_jet(0, [1.0], 3))


def test_operators_truncate_to_min_order():
    a = variable_jet(0, [0.0], 3)
    b = variable_jet(0, [0.0], 2)
    assert (a * b).order == 2


def test_log_rejects_zero_constant_term():
    with pytest.raises(JetError):
        jet_log(variable_jet(0, [0.0], 2))


def test_partial_needs_order():
    with pytest.raises(InsufficientOrderError):
        variable_jet(0, [0.0], 2).partial((3,))


def test_recenter_is_exact_for_polynomials():
    p = Prepotential.from_mapping(2, {(0, 0): -1j, (2, 1): 0.3, (0, 3): 1.5j})
    a = p.jet([0.1, -0.2j], 4).recenter([0.4 + 0.1j, 0.3])
    b = p.jet([0.4 + 0.1j, 0.3], 4)
    assert np.allclose(a.array, b.array, atol=1e-13)


def test_prepotential_derivative_power_rule():
    p = Prepotential.from_mapping(1, {(3,): 2.0})
    assert p.derivative((2,), [0.5]) == pytest.approx(2 * 6 * 0.5)
    assert p.derivative((4,), [0.5]) == 0


def test_einsum_matches_pointwise_product():
    x = variable_jet(0, [0.3, 0.1], 3)
    y = variable_jet(1, [0.3, 0.1], 3)
    m = stack_jets([stack_jets([x, y]), stack_jets([y, x * y])])
    v = stack_jets([x, y])
    mv = jet_einsum("ab,b->a", m, v)
    assert np.allclose(mv[0].array, (x * x + y * y).array)
    assert np.allclose(mv[1].array, (y * x + x * y * y).array)


def test_gradient_axis_and_values():
    p = Prepotential.from_mapping(2, {(2, 1): 1.0})
    g = p.jet([1.0, 2.0], 3).gradient()
    assert g.shape == (2,)
    assert np.allclose(g.value, [2 * 1 * 2, 1.0])


class TestFiniteDifference:
    def test_polynomial_exact(self):
        p = Prepotential.from_mapping(2, {(0, 0): 1.0, (3, 1): 0.5j, (0, 4): -2.0})
        z0 = np.array([0.2 - 0.1j, 0.4j])
        fd = finite_difference_jet(p, z0, 4, step=0.1)
        assert np.allclose(fd.array, p.jet(z0, 4).array, atol=1e-9)

    def test_exp_default_step(self):
        fd = finite_difference_jet(lambda z: np.exp(z[0]), [0.0], 2)
        assert np.allclose(fd.array, [1, 1, 0.5], atol=1e-8)

    def test_tiny_step_warns(self):
        with warnings.catch_warnings(record=True) as w:
            warnings.simplefilter("always")
            finite_difference_jet(lambda z: z[0], [0.0], 1, step=1e-7)
        assert any(issubclass(x.category, RuntimeWarning) for x in w)

    def test_wirtinger_of_abs_squared(self):
        df, dbar, ddbar = finite_difference_wirtinger(lambda z: abs(z[0]) ** 2, [0.3 + 0.4j])
        assert df[0] == pytest.approx(0.3 - 0.4j)
        assert dbar[0] == pytest.approx(0.3 + 0.4j)
        assert ddbar[0, 0] == pytest.approx(1.0)


coef = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


def _jet(cs, order=3):
    return Jet(np.array(cs[: math.comb(2 + order, order)], dtype=complex), [0.1, -0.2], order)


jets = st.lists(coef, min_size=10, max_size=10).map(_jet)


@settings(max_examples=40, deadline=None)
@given(jets, jets)
def test_product_commutes(a, b):
    assert np.allclose((a * b).array, (b * a).array)


@settings(max_examples=40, deadline=None)
@given(jets, jets, jets)
def test_product_associates(a, b, c):
    assert np.allclose(((a * b) * c).array, (a * (b * c)).array, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(jets, jets, st.integers(0, 3))
def test_truncation_commutes_with_product(a, b, k):
    lhs = (a * b).truncate(k)
    rhs = a.truncate(k) * b.truncate(k)
    assert np.allclose(lhs.array, rhs.array)
