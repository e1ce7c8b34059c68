import numpy as np
import pytest

from micromacro import _kernels as K
from micromacro.boundary import (PERIODIC_1D, interface_temperatures_1d)
from micromacro.gas_state import maxwellian_1d
from micromacro.micro1d import ghat_1d, micro_step_1d, upwind_z_1d
from micromacro.projection import projected_maxwellian_transport_1d

RNG = np.random.default_rng(5)


def vgrid(vmax, n):
    dv = 2.0 * vmax / n
    return np.linspace(-vmax + dv / 2.0, vmax - dv / 2.0, n)


@pytest.fixture
def smooth_state():
    nx, nv = 24, 64
    dx = 1.0 / nx
    x = (np.arange(nx) + 0.5) * dx
    v = vgrid(8.0, nv)
    rho = 1.0 + 0.3 * np.sin(2 * np.pi * x)
    u = 0.2 * np.cos(2 * np.pi * x)
    T = 0.9 + 0.15 * np.sin(4 * np.pi * x)
    G = np.sin(2 * np.pi * x)[:, None] * np.exp(-v ** 2)[None, :]
    return dict(x=x, v=v, dx=dx, rho=rho, u=u, T=T, G=G)


class TestTransportProjection:
    def test_nullspace_moments_of_projected_transport(self, smooth_state):
        # the transported term minus its projection has no collision-
        # invariant content: discrete moments vanish to 1e-11
        s = smooth_state
        v, dv = s["v"], s["v"][1] - s["v"][0]
        M = maxwellian_1d(s["rho"][:, None], s["u"][:, None],
                          s["T"][:, None], v[None, :])
        Z = upwind_z_1d(s["G"], PERIODIC_1D, v, s["dx"])
        Zhat = K.project_field_1d(np.ascontiguousarray(Z),
                                  np.ascontiguousarray(M),
                                  s["rho"], s["u"], s["T"], v, dv)
        R = Z - Zhat
        scale = float(np.max(np.abs(Z))) + 1e-300
        for w in (np.ones_like(v), v, v * v):
            moments = dv * (R * w).sum(axis=1)
            assert float(np.max(np.abs(moments))) <= 1e-11 * scale

    def test_upwind_direction(self):
        # with all-positive velocities only the left neighbor is used
        nv = 4
        v = np.abs(vgrid(4.0, nv)) + 1.0
        G = np.arange(3 * nv, dtype=float).reshape(3, nv)
        Z = upwind_z_1d(G, PERIODIC_1D, v, 0.5)
        expect = v * (G - np.roll(G, 1, axis=0)) / 0.5
        np.testing.assert_allclose(Z, expect, rtol=1e-14)


class TestGhat1D:
    def test_matches_closed_form_projected_transport(self, smooth_state):
        # Ghat equals -(1/tau) * closed-form (I - Pi)[v dM/dx] built from
        # interface temperature differences
        s = smooth_state
        v = s["v"]
        tau = np.full_like(s["rho"], 0.7)
        Th = interface_temperatures_1d(s["rho"], s["u"], s["T"], PERIODIC_1D)
        got = ghat_1d(s["rho"], s["u"], s["T"], Th, tau, v, s["dx"])
        dT = (Th[1:] - Th[:-1]) / s["dx"]
        for i in range(len(s["rho"])):
            expect = -projected_maxwellian_transport_1d(
                s["rho"][i], s["u"][i], s["T"][i], dT[i], v) / tau[i]
            np.testing.assert_allclose(got[i], expect, rtol=0,
                                       atol=1e-13 * np.max(np.abs(expect))
                                       + 1e-300)

    def test_zero_for_uniform_temperature(self):
        v = vgrid(8.0, 32)
        rho = np.array([1.0, 1.2, 0.8])
        u = np.array([0.1, -0.2, 0.3])
        T = np.full(3, 1.1)
        Th = np.full(4, 1.1)
        got = ghat_1d(rho, u, T, Th, np.ones(3), v, 0.1)
        assert np.max(np.abs(got)) == 0.0


class TestMicroStep1D:
    def test_asymptotic_limit_returns_ghat(self, smooth_state):
        # eps = 1e-14 on a fixed mesh: one step lands on Ghat to 1e-8
        s = smooth_state
        v = s["v"]
        tau = np.full_like(s["rho"], 0.6)
        dt = 1e-3
        eps = 1e-14
        G_new = micro_step_1d(s["G"], s["rho"], s["u"], s["T"], PERIODIC_1D,
                              v, s["dx"], dt, eps, tau)
        Th = interface_temperatures_1d(s["rho"], s["u"], s["T"], PERIODIC_1D)
        Ghat = ghat_1d(s["rho"], s["u"], s["T"], Th, tau, v, s["dx"])
        scale = float(np.max(np.abs(Ghat)))
        assert float(np.max(np.abs(G_new - Ghat))) <= 1e-8 * scale

    def test_fluid_weights_blend(self, smooth_state):
        # with dt -> 0 the update approaches the transported field
        s = smooth_state
        v = s["v"]
        tau = np.full_like(s["rho"], 0.5)
        G_new = micro_step_1d(s["G"], s["rho"], s["u"], s["T"], PERIODIC_1D,
                              v, s["dx"], 1e-12, 1.0, tau)
        np.testing.assert_allclose(G_new, s["G"], rtol=0,
                                   atol=1e-9 * np.max(np.abs(s["G"])))

    def test_projected_source_scaled_by_tau(self, smooth_state):
        s = smooth_state
        v = s["v"]
        tau = np.full_like(s["rho"], 0.5)
        src = np.exp(-v ** 2)[None, :] * np.ones((len(s["rho"]), 1))
        a = micro_step_1d(s["G"], s["rho"], s["u"], s["T"], PERIODIC_1D,
                          v, s["dx"], 1e-3, 0.1, tau)
        b = micro_step_1d(s["G"], s["rho"], s["u"], s["T"], PERIODIC_1D,
                          v, s["dx"], 1e-3, 0.1, tau, projected_source=src)
        dt, eps = 1e-3, 0.1
        wh = (dt * tau / (eps + dt * tau))[:, None]
        expect = wh * src / tau[:, None]
        np.testing.assert_allclose(b - a, expect, rtol=0,
                                   atol=1e-12 * float(np.max(np.abs(expect))))
