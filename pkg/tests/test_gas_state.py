import math

import numpy as np
import pytest

from micromacro.errors import ConfigurationError, InvalidStateError
from micromacro.gas_state import (A2_5, TAU_BGK_2D_COEFF, TAU_ESBGK_2D_COEFF,
                                  CollisionModel, TempTensor2D, check_spd_2x2,
                                  conserved_1d, conserved_2d, gaussian_2d,
                                  maxwellian_1d, maxwellian_2d, modify_tensor,
                                  primitives_1d, primitives_2d)

RNG = np.random.default_rng(20260823)


def random_tensor(n):
    """Random SPD temperature tensors via T = L L^T with positive diagonal."""
    l11 = RNG.uniform(0.5, 1.5, n)
    l21 = RNG.uniform(-0.4, 0.4, n)
    l22 = RNG.uniform(0.5, 1.5, n)
    return TempTensor2D(l11 * l11, l11 * l21, l21 * l21 + l22 * l22)


class TestRoundTrips:
    def test_1d(self):
        rho = RNG.uniform(0.2, 2.0, 50)
        u = RNG.uniform(-1.5, 1.5, 50)
        T = RNG.uniform(0.3, 3.0, 50)
        r2, u2, T2 = primitives_1d(conserved_1d(rho, u, T))
        np.testing.assert_allclose(r2, rho, rtol=1e-14)
        np.testing.assert_allclose(u2, u, rtol=0, atol=1e-13)
        np.testing.assert_allclose(T2, T, rtol=1e-12)

    def test_2d(self):
        n = 40
        rho = RNG.uniform(0.2, 2.0, n)
        u1 = RNG.uniform(-1.0, 1.0, n)
        u2 = RNG.uniform(-1.0, 1.0, n)
        tt = random_tensor(n)
        q = conserved_2d(rho, u1, u2, tt.t11, tt.t12, tt.t22)
        r2, v1, v2, tt2, T, p = primitives_2d(q)
        np.testing.assert_allclose(r2, rho, rtol=1e-14)
        np.testing.assert_allclose(v1, u1, rtol=0, atol=1e-13)
        np.testing.assert_allclose(v2, u2, rtol=0, atol=1e-13)
        np.testing.assert_allclose(tt2.t11, tt.t11, rtol=1e-11)
        np.testing.assert_allclose(tt2.t12, tt.t12, rtol=0, atol=1e-12)
        np.testing.assert_allclose(tt2.t22, tt.t22, rtol=1e-11)
        np.testing.assert_allclose(T, 0.5 * (tt.t11 + tt.t22), rtol=1e-11)
        np.testing.assert_allclose(p, rho * T, rtol=1e-11)

    def test_scalar_temperature_property(self):
        tt = TempTensor2D(1.2, 0.1, 0.8)
        assert tt.scalar == pytest.approx(1.0)


class TestValidation:
    def test_negative_density_1d(self):
        q = conserved_1d([1.0, 1.0, 1.0], 0.0, 1.0)
        q[1, 0] = -0.5
        with pytest.raises(InvalidStateError) as err:
            primitives_1d(q)
        assert err.value.cell == (1,)

    def test_negative_temperature_1d(self):
        q = np.array([[1.0, 2.0, 0.5]])  # kinetic energy exceeds total
        with pytest.raises(InvalidStateError):
            primitives_1d(q)

    def test_non_spd_tensor_2d(self):
        q = conserved_2d(1.0, 0.0, 0.0, 1.0, 1.5, 1.0)[None]
        with pytest.raises(InvalidStateError):
            primitives_2d(q)

    def test_check_spd_accepts_boundary_margin(self):
        check_spd_2x2(np.array([1.0]), np.array([0.0]), np.array([1.0]))
        with pytest.raises(InvalidStateError):
            check_spd_2x2(np.array([1.0]), np.array([1.0]), np.array([1.0]))


class TestEquilibria:
    def test_maxwellian_1d_moments(self):
        v, dv = np.linspace(-12, 12, 3000, retstep=True)
        v += dv / 2.0
        v = v[:-1]
        rho, u, T = 1.3, -0.4, 0.9
        M = maxwellian_1d(rho, u, T, v)
        assert M.sum() * dv == pytest.approx(rho, rel=1e-10)
        assert (M * v).sum() * dv == pytest.approx(rho * u, rel=1e-10)
        assert (M * (v - u) ** 2).sum() * dv == pytest.approx(rho * T,
                                                              rel=1e-10)

    def test_maxwellian_2d_moments(self):
        g = np.linspace(-10, 10, 401)
        dv = g[1] - g[0]
        V1, V2 = np.meshgrid(g, g, indexing="ij")
        rho, u1, u2, T = 0.7, 0.3, -0.2, 1.1
        M = maxwellian_2d(rho, u1, u2, T, V1, V2)
        w = dv * dv
        assert M.sum() * w == pytest.approx(rho, rel=1e-9)
        assert (M * V1).sum() * w == pytest.approx(rho * u1, rel=1e-9)
        assert (M * (V1 - u1) ** 2).sum() * w == pytest.approx(rho * T,
                                                               rel=1e-9)
        assert (M * (V1 - u1) * (V2 - u2)).sum() * w == pytest.approx(
            0.0, abs=1e-12)

    def test_gaussian_2d_covariance_moments(self):
        g = np.linspace(-10, 10, 401)
        dv = g[1] - g[0]
        V1, V2 = np.meshgrid(g, g, indexing="ij")
        rho, u1, u2 = 1.4, 0.1, 0.25
        tt = TempTensor2D(0.9, 0.3, 1.3)
        G = gaussian_2d(rho, u1, u2, tt, V1, V2)
        w = dv * dv
        assert G.sum() * w == pytest.approx(rho, rel=1e-9)
        assert (G * (V1 - u1) ** 2).sum() * w == pytest.approx(
            rho * tt.t11, rel=1e-9)
        assert (G * (V1 - u1) * (V2 - u2)).sum() * w == pytest.approx(
            rho * tt.t12, rel=1e-9)
        assert (G * (V2 - u2) ** 2).sum() * w == pytest.approx(
            rho * tt.t22, rel=1e-9)

    def test_gaussian_reduces_to_maxwellian_when_isotropic(self):
        g = np.linspace(-6, 6, 64)
        V1, V2 = np.meshgrid(g, g, indexing="ij")
        G = gaussian_2d(1.0, 0.2, -0.1, TempTensor2D(0.8, 0.0, 0.8), V1, V2)
        M = maxwellian_2d(1.0, 0.2, -0.1, 0.8, V1, V2)
        np.testing.assert_allclose(G, M, rtol=1e-13)


class TestModifyTensor:
    def test_trace_preserving(self):
        tt = TempTensor2D(1.4, 0.2, 0.6)
        for nu in (-1.0, -0.5, 0.0, 0.5):
            mt = modify_tensor(tt, tt.scalar, nu)
            assert mt.t11 + mt.t22 == pytest.approx(tt.t11 + tt.t22,
                                                    rel=1e-14)

    def test_nu_zero_is_isotropic(self):
        tt = TempTensor2D(1.4, 0.2, 0.6)
        mt = modify_tensor(tt, tt.scalar, 0.0)
        assert mt.t11 == pytest.approx(1.0)
        assert mt.t12 == 0.0
        assert mt.t22 == pytest.approx(1.0)

    def test_nu_one_rejected(self):
        with pytest.raises(ConfigurationError):
            modify_tensor(TempTensor2D(1.0, 0.0, 1.0), 1.0, 1.0)


class TestCollisionModel:
    def test_coefficients(self):
        # both 2D coefficients trace back to the hard-sphere constant 0.436
        assert TAU_ESBGK_2D_COEFF == pytest.approx(0.4625 * math.pi)
        assert TAU_BGK_2D_COEFF == pytest.approx(3.0 * math.pi * A2_5
                                                 / math.sqrt(2.0))
        # the nu = -1 matching halves the relaxation coefficient
        assert TAU_BGK_2D_COEFF / TAU_ESBGK_2D_COEFF == pytest.approx(
            3.0 * 0.436 / (math.sqrt(2.0) * 0.4625))

    def test_hard_sphere_1d(self):
        m = CollisionModel("hard_sphere_1d")
        assert m.tau(2.0, 2.0 * math.pi) == pytest.approx(3.2)
        # independent of density
        assert float(m.tau(5.0, 1.0)) == float(m.tau(0.1, 1.0))

    def test_pressure_1d(self):
        m = CollisionModel("pressure_1d")
        assert m.tau(1.5, 2.0) == pytest.approx(3.0)

    def test_density_proportional_2d(self):
        assert CollisionModel("esbgk_2d", nu=-1.0).tau(2.0, 7.0) == (
            pytest.approx(2.0 * TAU_ESBGK_2D_COEFF))
        assert CollisionModel("bgk_2d").tau(0.5, 7.0) == (
            pytest.approx(0.5 * TAU_BGK_2D_COEFF))

    def test_constant(self):
        m = CollisionModel("constant", value=0.3)
        np.testing.assert_allclose(m.tau(np.ones(4), np.ones(4)), 0.3)

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            CollisionModel("nope")
        with pytest.raises(ConfigurationError):
            CollisionModel("constant", nu=1.0)
