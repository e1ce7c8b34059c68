import math

import numpy as np
import pytest

from micromacro.errors import ConfigurationError
from micromacro.mesh import Axis, PhaseMesh, cell_centers, plan_time


def mesh_1d(nx, nv, vmax=6.5):
    return PhaseMesh(space=(Axis(0.0, 1.0, nx),),
                     velocity=(Axis(-vmax, vmax, nv),))


class TestAxis:
    def test_spacing_and_centers(self):
        ax = Axis(0.0, 1.0, 4)
        assert ax.spacing == 0.25
        np.testing.assert_allclose(cell_centers(ax),
                                   [0.125, 0.375, 0.625, 0.875])
        assert ax.center(1) == 0.125
        assert ax.center(4) == 0.875

    def test_vmax_abs(self):
        assert Axis(-6.5, 6.5, 10).vmax_abs == 6.5
        assert Axis(-4.0, 2.0, 10).vmax_abs == 4.0

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            Axis(1.0, 0.0, 4)
        with pytest.raises(ConfigurationError):
            Axis(0.0, 1.0, 0)


class TestPhaseMesh:
    def test_dim_tags(self):
        assert mesh_1d(8, 8).tag == "1D1V"
        m2 = PhaseMesh(space=(Axis(0, 1, 4), Axis(0, 1, 4)),
                       velocity=(Axis(-5, 5, 4), Axis(-5, 5, 4)))
        assert m2.tag == "2D2V"
        assert m2.dim == 2

    def test_mismatched_dims_rejected(self):
        with pytest.raises(ConfigurationError):
            PhaseMesh(space=(Axis(0, 1, 4),),
                      velocity=(Axis(-5, 5, 4), Axis(-5, 5, 4)))


class TestPlanTime:
    def test_lands_exactly_on_t_final(self):
        plan = plan_time(0.9351, 0.95, mesh_1d(40, 40))
        assert plan.n_steps * plan.dt == pytest.approx(0.9351, rel=0, abs=0)
        assert plan.cfl_effective <= 0.95 + 1e-12

    def test_manufactured_run_step_counts(self):
        # the dt shrink makes the step count scale exactly linearly with
        # the resolution for this time horizon
        counts = [plan_time(0.9351, 0.95, mesh_1d(n, n)).n_steps
                  for n in (10, 20, 40, 80)]
        assert counts == [64, 128, 256, 512]

    def test_effective_cfl_definition(self):
        mesh = mesh_1d(33, 17, vmax=4.5)
        plan = plan_time(0.1, 0.8, mesh)
        ratio = mesh.space[0].spacing / mesh.velocity[0].vmax_abs
        assert plan.cfl_effective == pytest.approx(plan.dt / ratio)
        assert plan.dt <= 0.8 * ratio + 1e-15

    def test_two_dim_uses_most_restrictive_axis(self):
        mesh = PhaseMesh(space=(Axis(0, 1, 10), Axis(0, 1, 20)),
                         velocity=(Axis(-5, 5, 8), Axis(-5, 5, 8)))
        plan = plan_time(1.0, 0.9, mesh)
        tight = mesh.space[1].spacing / 5.0
        assert plan.dt <= 0.9 * tight + 1e-15

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            plan_time(-1.0, 0.9, mesh_1d(8, 8))
        with pytest.raises(ConfigurationError):
            plan_time(1.0, 1.5, mesh_1d(8, 8))
        with pytest.raises(ConfigurationError):
            plan_time(1.0, 0.0, mesh_1d(8, 8))
