import numpy as np
import pytest
from scipy.integrate import quad

from micromacro.boundary import (EXTRAPOLATE, PERIODIC, BoundarySpec1D,
                                 BoundarySpec2D, WallSpec, extend_macro_scalar_2d,
                                 extend_micro_1d, extend_micro_2d,
                                 interface_heat_2d, interface_heat_flux_1d,
                                 interface_temperatures_1d, wall_density_1d,
                                 wall_density_2d, wall_ghost_state_2d,
                                 wall_interface_temperature_1d)
from micromacro.errors import ConfigurationError
from micromacro.gas_state import TempTensor2D, maxwellian_1d

WALL = WallSpec(temperature=1.2)
RNG = np.random.default_rng(11)


class TestSpecs:
    def test_periodic_must_pair(self):
        with pytest.raises(ConfigurationError):
            BoundarySpec1D(PERIODIC, EXTRAPOLATE)
        with pytest.raises(ConfigurationError):
            BoundarySpec2D(PERIODIC, PERIODIC, PERIODIC, EXTRAPOLATE)

    def test_wall_temperature_positive(self):
        with pytest.raises(ConfigurationError):
            WallSpec(temperature=0.0)

    def test_unknown_face(self):
        with pytest.raises(ConfigurationError):
            BoundarySpec1D("reflect", "reflect")

    def test_transposed(self):
        bc = BoundarySpec2D(EXTRAPOLATE, WALL, PERIODIC, PERIODIC)
        bt = bc.transposed()
        assert bt.left == PERIODIC and bt.bottom == EXTRAPOLATE
        assert bt.top == WALL


def _half_flux(rho, u, T, lo, hi):
    """Kinetic mass flux integral of v * Maxwellian over [lo, hi]."""
    val, _ = quad(lambda v: v * maxwellian_1d(rho, u, T, v), lo, hi,
                  limit=200)
    return val


class TestWall1D:
    @pytest.mark.parametrize("rho,u,T", [(1.0, 0.0, 1.0), (0.7, 0.5, 1.4),
                                         (1.3, -0.8, 0.6)])
    def test_zero_net_mass_flux(self, rho, u, T):
        # left wall: emitted half-Maxwellian over v>0 balances interior v<0
        for side, sgn in (("left", 1), ("right", -1)):
            rho_w = wall_density_1d(rho, u, T, WALL, side)
            emitted = _half_flux(rho_w, 0.0, WALL.temperature,
                                 0.0 if sgn > 0 else -np.inf,
                                 np.inf if sgn > 0 else 0.0)
            interior = _half_flux(rho, u, T,
                                  -np.inf if sgn > 0 else 0.0,
                                  0.0 if sgn > 0 else np.inf)
            assert emitted + interior == pytest.approx(0.0, abs=1e-12)

    def test_interface_temperature_quadrature(self):
        rho, u, T = 0.9, 0.3, 1.1
        side = "left"
        rho_w = wall_density_1d(rho, u, T, WALL, side)

        def mom(rho_, u_, T_, k, lo, hi):
            val, _ = quad(lambda v: v ** k * maxwellian_1d(rho_, u_, T_, v),
                          lo, hi, limit=200)
            return val

        num = mom(rho_w, 0.0, WALL.temperature, 2, 0, np.inf) \
            + mom(rho, u, T, 2, -np.inf, 0)
        den = mom(rho_w, 0.0, WALL.temperature, 0, 0, np.inf) \
            + mom(rho, u, T, 0, -np.inf, 0)
        expect = num / den
        got = wall_interface_temperature_1d(rho, u, T, WALL, side)
        assert got == pytest.approx(expect, rel=1e-10)

    def test_equilibrium_wall_recovers_wall_temperature(self):
        # interior gas already at rest at the wall temperature: the
        # interface temperature is exactly the wall temperature
        got = wall_interface_temperature_1d(1.0, 0.0, WALL.temperature,
                                            WALL, "right")
        assert got == pytest.approx(WALL.temperature, rel=1e-13)


class TestInterfaceValues1D:
    def test_interface_temperatures_interior_means(self):
        rho = np.array([1.0, 1.1, 0.9])
        u = np.zeros(3)
        T = np.array([1.0, 1.2, 1.4])
        bc = BoundarySpec1D(EXTRAPOLATE, EXTRAPOLATE)
        Th = interface_temperatures_1d(rho, u, T, bc)
        np.testing.assert_allclose(Th, [1.0, 1.1, 1.3, 1.4])

    def test_interface_temperatures_periodic(self):
        rho = np.ones(3)
        u = np.zeros(3)
        T = np.array([1.0, 2.0, 3.0])
        bc = BoundarySpec1D(PERIODIC, PERIODIC)
        Th = interface_temperatures_1d(rho, u, T, bc)
        assert Th[0] == Th[-1] == pytest.approx(2.0)

    def test_heat_flux_wall_halving(self):
        H = np.array([0.4, 0.2, -0.6])
        bc = BoundarySpec1D(WALL, EXTRAPOLATE)
        Hh = interface_heat_flux_1d(H, bc)
        np.testing.assert_allclose(Hh, [0.2, 0.3, -0.2, -0.6])

    def test_micro_ghosts(self):
        G = RNG.standard_normal((4, 3))
        ext = extend_micro_1d(G, BoundarySpec1D(PERIODIC, PERIODIC))
        np.testing.assert_array_equal(ext[0], G[-1])
        np.testing.assert_array_equal(ext[-1], G[0])
        ext = extend_micro_1d(G, BoundarySpec1D(WALL, EXTRAPOLATE))
        assert np.all(ext[0] == 0.0)
        np.testing.assert_array_equal(ext[-1], G[-1])


class TestWall2D:
    def test_zero_net_mass_flux_all_faces(self):
        rho, t_aa = 0.8, 1.3
        for face, u_n in (("left", -0.4), ("right", 0.4), ("bottom", 0.2),
                          ("top", -0.3)):
            rho_w = float(wall_density_2d(np.array([rho]), np.array([u_n]),
                                          np.array([t_aa]), WALL, face)[0])
            sgn = 1.0 if face in ("left", "bottom") else -1.0
            # normal-direction marginals are 1D Maxwellians
            emitted = _half_flux(rho_w, 0.0, WALL.temperature,
                                 0.0 if sgn > 0 else -np.inf,
                                 np.inf if sgn > 0 else 0.0)
            interior = _half_flux(rho, u_n, t_aa,
                                  -np.inf if sgn > 0 else 0.0,
                                  0.0 if sgn > 0 else np.inf)
            assert emitted + interior == pytest.approx(0.0, abs=1e-12)

    def test_ghost_state_lid(self):
        lid = WallSpec(temperature=1.0, velocity=0.16)
        rho = np.array([1.0, 1.1])
        u1 = np.array([0.05, -0.02])
        u2 = np.array([0.01, 0.0])
        tt = TempTensor2D(np.full(2, 1.0), np.zeros(2), np.full(2, 1.0))
        rw, g1, g2, t11, t12, t22 = wall_ghost_state_2d(rho, u1, u2, tt,
                                                        lid, "top")
        np.testing.assert_allclose(g1, 0.16)  # lid slides in x
        np.testing.assert_allclose(g2, 0.0)   # no normal velocity
        np.testing.assert_allclose(t11, 1.0)
        np.testing.assert_allclose(t12, 0.0)
        np.testing.assert_allclose(t22, 1.0)

    def test_ghost_state_side_wall_velocity_roles_swap(self):
        wall = WallSpec(temperature=1.2, velocity=0.3)
        rho = np.array([1.0])
        tt = TempTensor2D(np.ones(1), np.zeros(1), np.ones(1))
        _, g1, g2, *_ = wall_ghost_state_2d(rho, np.zeros(1), np.zeros(1),
                                            tt, wall, "left")
        assert g1[0] == 0.0 and g2[0] == 0.3


class TestGhosts2D:
    def test_micro_wrap_copy_zero(self):
        G = RNG.standard_normal((3, 4, 2, 2))
        bc = BoundarySpec2D(PERIODIC, PERIODIC, WALL, EXTRAPOLATE)
        ext = extend_micro_2d(G, bc, axis=0)
        np.testing.assert_array_equal(ext[0], G[-1])
        np.testing.assert_array_equal(ext[-1], G[0])
        ext = extend_micro_2d(G, bc, axis=1)
        assert np.all(ext[:, 0] == 0.0)
        np.testing.assert_array_equal(ext[:, -1], G[:, -1])

    def test_macro_scalar_pad(self):
        f = RNG.standard_normal((3, 3))
        bc = BoundarySpec2D(PERIODIC, PERIODIC, WALL, WALL)
        ext = extend_macro_scalar_2d(f, bc, axis=0)
        np.testing.assert_array_equal(ext[0], f[-1])
        ext = extend_macro_scalar_2d(f, bc, axis=1)
        np.testing.assert_array_equal(ext[:, 0], f[:, 0])

    def test_interface_heat_rules(self):
        H = np.array([[1.0, 2.0], [3.0, 4.0]])
        bc = BoundarySpec2D(WALL, EXTRAPOLATE, PERIODIC, PERIODIC)
        Hx = interface_heat_2d(H, bc, axis=0)
        np.testing.assert_allclose(Hx[0], 0.5 * H[0])   # wall halving
        np.testing.assert_allclose(Hx[1], 0.5 * (H[0] + H[1]))
        np.testing.assert_allclose(Hx[-1], H[-1])       # extrapolate copies
        Hy = interface_heat_2d(H, bc, axis=1)
        np.testing.assert_allclose(Hy[:, 0], 0.5 * (H[:, 0] + H[:, -1]))
        np.testing.assert_allclose(Hy[:, -1], Hy[:, 0])  # periodic wrap
