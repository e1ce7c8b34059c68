from dataclasses import replace

import numpy as np
import pytest

from micromacro.boundary import (EXTRAPOLATE, PERIODIC, BoundarySpec2D,
                                 WallSpec)
from micromacro.errors import ConfigurationError
from micromacro.gas_state import CollisionModel, conserved_2d
from micromacro.mesh import Axis, PhaseMesh
from micromacro.runner.cases import default_config, run_single_2d
from micromacro.runner.config import validate_config
from micromacro.runner.loop import State2D, step_2d
from micromacro.runner.parallel import (extract_ring, make_plans,
                                        run_parallel_2d)

RNG = np.random.default_rng(77)

WALL = WallSpec(temperature=1.0)
CAVITY_BC = BoundarySpec2D(WALL, WALL, WALL,
                           WallSpec(temperature=1.0, velocity=0.16))
PERIODIC_BC = BoundarySpec2D(PERIODIC, PERIODIC, PERIODIC, PERIODIC)
MIXED_BC = BoundarySpec2D(EXTRAPOLATE, EXTRAPOLATE, PERIODIC, PERIODIC)


def make_problem(nx=12, ny=12, nv=6):
    mesh = PhaseMesh(space=(Axis(0.0, 1.0, nx), Axis(0.0, 1.0, ny)),
                     velocity=(Axis(-5.0, 5.0, nv), Axis(-5.0, 5.0, nv)))
    x = (np.arange(nx) + 0.5) / nx
    y = (np.arange(ny) + 0.5) / ny
    X, Y = np.meshgrid(x, y, indexing="ij")
    rho = 1.0 + 0.2 * np.sin(2 * np.pi * X) * np.cos(2 * np.pi * Y)
    T = 1.0 + 0.1 * np.cos(2 * np.pi * X)
    Q = conserved_2d(rho, 0.02 * np.cos(2 * np.pi * Y),
                     -0.03 * np.sin(2 * np.pi * X), T, np.zeros_like(T), T)
    G = 0.01 * RNG.standard_normal((nx, ny, nv, nv))
    return mesh, Q, G


def serial_reference(mesh, bc, eps, model, Q, G, dt, n_steps):
    state = State2D(t=0.0, Q=np.array(Q), G=np.array(G))
    for _ in range(n_steps):
        state = step_2d(state, mesh, bc, eps, model, dt)
    return state.Q, state.G


class TestPlans:
    def test_block_partition(self):
        plans = make_plans(12, 8, (3, 2), PERIODIC_BC)
        assert len(plans) == 6
        covered = np.zeros((12, 8), dtype=int)
        for p in plans:
            covered[p.i0:p.i1, p.j0:p.j1] += 1
        assert np.all(covered == 1)

    def test_periodic_neighbors_wrap(self):
        plans = make_plans(8, 8, (2, 2), PERIODIC_BC)
        first = plans[0]
        assert first.neighbors["left"] == plans[2].rank   # wraps in x
        assert first.neighbors["bottom"] == plans[1].rank  # wraps in y

    def test_physical_faces_have_no_neighbor(self):
        plans = make_plans(8, 8, (2, 2), CAVITY_BC)
        first = plans[0]
        assert first.neighbors["left"] is None
        assert first.neighbors["bottom"] is None
        assert first.neighbors["right"] is not None

    def test_indivisible_grid_rejected(self):
        with pytest.raises(ConfigurationError):
            make_plans(10, 10, (3, 2), PERIODIC_BC)


class TestRing:
    def test_interior_and_periodic_reads(self):
        arr = RNG.standard_normal((8, 8))
        plans = make_plans(8, 8, (2, 2), PERIODIC_BC)
        ext = extract_ring(arr, plans[0], PERIODIC_BC, "copy")
        np.testing.assert_array_equal(ext[1:-1, 1:-1], arr[:4, :4])
        np.testing.assert_array_equal(ext[0, 1:-1], arr[-1, :4])   # wrap
        np.testing.assert_array_equal(ext[-1, 1:-1], arr[4, :4])   # neighbor
        assert ext[0, 0] == arr[-1, -1]  # corner wraps both axes

    def test_wall_rules(self):
        arr = RNG.standard_normal((8, 8))
        plans = make_plans(8, 8, (2, 2), CAVITY_BC)
        zero = extract_ring(arr, plans[0], CAVITY_BC, "zero")
        assert np.all(zero[0, 1:-1] == 0.0)
        copy = extract_ring(arr, plans[0], CAVITY_BC, "copy")
        np.testing.assert_array_equal(copy[0, 1:-1], arr[0, :4])


MODEL = CollisionModel("esbgk_2d", nu=-1.0)


class TestEquivalence:
    @pytest.mark.parametrize("bc,grid", [
        (CAVITY_BC, (2, 2)),
        (CAVITY_BC, (3, 4)),
        (PERIODIC_BC, (2, 2)),
        (MIXED_BC, (4, 3)),
    ])
    def test_bitwise_match_with_serial(self, bc, grid):
        mesh, Q, G = make_problem()
        eps, dt, n_steps = 0.08, 2e-3, 12
        Qs, Gs = serial_reference(mesh, bc, eps, MODEL, Q, G, dt, n_steps)
        Qp, Gp, _, _ = run_parallel_2d(mesh, bc, eps, MODEL, Q, G, dt,
                                       n_steps, grid=grid)
        assert float(np.max(np.abs(Qp - Qs))) == 0.0
        assert float(np.max(np.abs(Gp - Gs))) == 0.0

    def test_single_worker_grid_matches_serial(self):
        mesh, Q, G = make_problem()
        Qs, Gs = serial_reference(mesh, CAVITY_BC, 0.08, MODEL, Q, G,
                                  1e-3, 5)
        Qp, Gp, _, _ = run_parallel_2d(mesh, CAVITY_BC, 0.08, MODEL, Q, G,
                                       1e-3, 5, grid=(1, 1))
        assert float(np.max(np.abs(Qp - Qs))) == 0.0
        assert float(np.max(np.abs(Gp - Gs))) == 0.0

    def test_repeated_runs_bitwise_identical(self):
        mesh, Q, G = make_problem()
        a = run_parallel_2d(mesh, CAVITY_BC, 0.08, MODEL, Q, G, 1e-3, 8,
                            grid=(2, 2))
        b = run_parallel_2d(mesh, CAVITY_BC, 0.08, MODEL, Q, G, 1e-3, 8,
                            grid=(2, 2))
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])


class TestRunnerIntegration:
    def test_worker_count_independent_results(self):
        cfg = replace(default_config("lid_cavity"), nx=12, ny=12,
                      nv1=6, nv2=6, max_steps=6)
        validate_config(cfg)
        serial = run_single_2d(cfg, cfg.epsilon)
        par = run_single_2d(replace(cfg, workers=(2, 2)), cfg.epsilon)
        assert par.steps_run == serial.steps_run
        assert float(np.max(np.abs(par.state.Q - serial.state.Q))) <= 1e-13

    def test_steady_tracking_matches_serial(self):
        cfg = replace(default_config("lid_cavity"), nx=12, ny=12,
                      nv1=6, nv2=6, max_steps=20)
        validate_config(cfg)
        serial = run_single_2d(cfg, cfg.epsilon, track_steady=True)
        par = run_single_2d(replace(cfg, workers=(2, 2)), cfg.epsilon,
                            track_steady=True)
        assert par.steady_max_change == pytest.approx(
            serial.steady_max_change, rel=0, abs=0)
