import itertools

import numpy as np
import pytest

from skgeom.geometry import (
    OutOfDomainError,
    antiholomorphic_embed,
    complex_laplacian,
    covariant_derivative_yukawa,
    holomorphic_embed,
    kahler_potential_and_metric,
    metric_bundle,
    trace_h,
    yukawa,
)
from skgeom.jets import (
    InsufficientOrderError,
    constant_jet,
    finite_difference_jet,
    finite_difference_wirtinger,
    variable_jet,
)
from skgeom.periods import build_period_frame, symplectic_pair

from helpers import bundle_at, cubic, quadratic, quartic2, random_points


def kahler_potential(p):
    def K(z):
        om = build_period_frame(p.jet(z, 1)).value()
        return -np.log((-symplectic_pair(om, om.conj())).real)

    return K


class TestMetric:
    def test_quadratic_origin(self):
        b = bundle_at(quadratic(2), [0, 0])
        assert np.exp(-b.K) == pytest.approx(2.0)
        assert np.allclose(b.h, 0.5 * np.eye(2), atol=1e-15)

    def test_quadratic_closed_form(self):
        for z in random_points(3, 10, 1.35, 7):
            b = bundle_at(quadratic(3), z)
            d = 2 - np.vdot(z, z).real
            expected = np.eye(3) / d + np.outer(z.conj(), z) / d**2
            assert np.abs(b.h - expected).max() < 1e-12

    def test_hermitian_exactly(self):
        for z in random_points(2, 5, 0.7, 8):
            h = bundle_at(quartic2(), z).h
            assert np.array_equal(h, h.conj().T)

    def test_outside_domain(self):
        with pytest.raises(OutOfDomainError):
            kahler_potential_and_metric(build_period_frame(quadratic(1).jet([1.5], 3)))

    def test_needs_order(self):
        with pytest.raises(InsufficientOrderError):
            kahler_potential_and_metric(build_period_frame(quadratic(1).jet([0.0], 2)))

    @pytest.mark.parametrize("p,z", [(cubic(), [0.3 + 0.2j]), (quartic2(), [0.2 - 0.1j, 0.3j])])
    def test_metric_against_wirtinger_oracle(self, p, z):
        _, _, ddbar = finite_difference_wirtinger(kahler_potential(p), z, step=1e-2)
        h = bundle_at(p, z).h
        assert np.abs(h - ddbar).max() / np.abs(h).max() < 1e-6


class TestYukawa:
    def test_quadratic_vanishes(self):
        for z in random_points(2, 5, 1.2, 9):
            assert np.abs(yukawa(build_period_frame(quadratic(2).jet(z, 4)))).max() == 0

    def test_cubic_is_constant(self):
        c = 0.1
        for z in ([0.0], [0.3 + 0.2j], [-0.5j]):
            F = yukawa(build_period_frame(cubic(c).jet(z, 4)))
            assert F[0, 0, 0] == pytest.approx(3j * c, abs=1e-14)

    def test_symmetry_exact(self):
        F = yukawa(build_period_frame(quartic2().jet([0.2, 0.1j], 4)))
        for perm in itertools.permutations(range(3)):
            assert np.array_equal(F, np.transpose(F, perm))

    def test_against_finite_difference_frame(self):
        p = quartic2()
        z = np.array([0.2 - 0.1j, 0.1 + 0.3j])
        fd = finite_difference_jet(lambda x: build_period_frame(p.jet(x, 1)).value(), z, 3, step=0.1)
        om = build_period_frame(p.jet(z, 1)).value()
        F = yukawa(build_period_frame(p.jet(z, 4)))
        for i, j, k in itertools.product(range(2), repeat=3):
            beta = [0, 0]
            for a in (i, j, k):
                beta[a] += 1
            assert symplectic_pair(fd.partial(beta), om) == pytest.approx(F[i, j, k], abs=1e-9)


class TestHodgeMetric:
    def test_quadratic_p_zero(self):
        b = bundle_at(quadratic(2), [0.4, -0.3j])
        assert np.abs(b.P).max() == 0
        assert np.array_equal(b.hH, 2 * b.h)

    def test_trace_equals_f0(self):
        b = bundle_at(cubic(), [0.0])
        y = covariant_derivative_yukawa(b)
        assert trace_h(b, b.P).real == pytest.approx(y.f0, abs=1e-10)
        assert y.f0 == pytest.approx(0.18)

    def test_p_positive_semidefinite(self):
        for z in random_points(2, 20, 0.7, 10):
            b = bundle_at(quartic2(), z)
            assert np.linalg.eigvalsh(b.P).min() >= -1e-10
            assert np.linalg.eigvalsh(b.hH).min() > 0


class TestCovariantDerivative:
    def test_quadratic(self):
        y = covariant_derivative_yukawa(bundle_at(quadratic(2), [0.2, 0.3j]))
        assert y.f0 == 0 and y.f1 == 0

    def test_cubic_origin_values(self):
        y = covariant_derivative_yukawa(bundle_at(cubic(), [0.0]))
        assert (y.f0, y.f1, y.f2) == pytest.approx((0.18, 0.2916, 1.3122))

    def test_f1_against_finite_differences(self):
        # n = 1: nabla F = dF + 2 dK F - 3 Gamma F with Gamma = d log h
        p = cubic()
        z = np.array([0.25 - 0.15j])
        K = kahler_potential(p)
        dK, _, _ = finite_difference_wirtinger(K, z, step=1e-3)
        dlogh, _, _ = finite_difference_wirtinger(
            lambda x: np.log(bundle_at(p, x, 3).h[0, 0].real), z, step=1e-3
        )
        Fz = lambda x: yukawa(build_period_frame(p.jet(x, 4)))[0, 0, 0]
        dF = finite_difference_jet(Fz, z, 1, step=1e-2).partial((1,))
        F = Fz(z)
        nabla = dF + 2 * dK[0] * F - 3 * dlogh[0] * F
        h = bundle_at(p, z).h[0, 0].real
        f1_fd = np.exp(2 * K(z)) * abs(nabla) ** 2 / h**4
        y = covariant_derivative_yukawa(bundle_at(p, z))
        assert y.f1 == pytest.approx(f1_fd, rel=1e-6)

    def test_needs_order(self):
        b = bundle_at(cubic(), [0.0], order=3)
        with pytest.raises(InsufficientOrderError):
            covariant_derivative_yukawa(b)


class TestLaplacian:
    def test_abs_squared_quadratic(self):
        for n in (1, 2, 3):
            b = bundle_at(quadratic(n), [0.0] * n)
            z0 = np.zeros(n)
            f = None
            for i in range(n):
                zi = holomorphic_embed(variable_jet(i, z0, 2))
                wi = antiholomorphic_embed(variable_jet(i, z0, 2))
                f = zi * wi if f is None else f + zi * wi
            assert complex_laplacian(f, b) == pytest.approx(2 * n)

    def test_constant(self):
        b = bundle_at(quadratic(1), [0.3])
        c = holomorphic_embed(constant_jet(5.0, [0.3], 2))
        assert complex_laplacian(c, b) == 0


@pytest.mark.parametrize("p,z", [(cubic(), [0.3 - 0.2j]), (quartic2(), [0.1 + 0.2j, -0.3])])
def test_scale_invariance(p, z):
    lam = 2 + 1j
    a, b = bundle_at(p, z), bundle_at(p, z, scale=lam)
    ya, yb = covariant_derivative_yukawa(a), covariant_derivative_yukawa(b)
    assert np.abs(a.h - b.h).max() < 1e-8
    assert np.abs(a.P - b.P).max() < 1e-8
    assert abs(ya.f0 - yb.f0) < 1e-8 and abs(ya.f1 - yb.f1) < 1e-8
