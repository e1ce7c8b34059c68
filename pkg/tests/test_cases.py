from dataclasses import replace

import numpy as np
import pytest

from micromacro.runner import frames as fr
from micromacro.runner.cases import (default_config, frame_1d,
                                     mesh_from_config, mms_run_1d,
                                     mms_run_2d, run_case, run_single_1d)
from micromacro.runner.config import CASES, validate_config


def tiny_shocktube(**over):
    cfg = replace(default_config("shocktube"), nx=64, nv=32,
                  epsilons=(0.1,), t_final=0.02, **over)
    validate_config(cfg)
    return cfg


class TestDefaults:
    @pytest.mark.parametrize("case", [c for c in CASES if c != "custom"])
    def test_reference_configs_validate(self, case):
        validate_config(default_config(case))

    def test_shocktube_initial_split(self):
        cfg = default_config("shocktube")
        mesh = mesh_from_config(cfg)
        from micromacro.runner.cases import initial_state_1d
        state = initial_state_1d(cfg, mesh)
        rho = state.Q[:, 0]
        assert rho[0] == 1.0 and rho[-1] == 0.125
        assert np.all(state.G == 0.0)


class TestRunCase1D:
    def test_artifacts_and_summary(self, tmp_path):
        cfg = tiny_shocktube()
        result = run_case(cfg, output_dir=tmp_path)
        names = {p.name for p in result.files}
        assert "shocktube_eps0.1_final.txt" in names
        assert "summary_shocktube_eps0.1.txt" in names
        frame = fr.read_frame(tmp_path / "shocktube_eps0.1_final.txt")
        assert frame.fields == fr.FIELDS_1D
        assert frame.dims == (64,)
        assert abs(float(result.summary["mass_drift"])) < 1e-8

    def test_intermediate_frames(self, tmp_path):
        cfg = tiny_shocktube(frame_times=(0.01,))
        result = run_case(cfg, output_dir=tmp_path)
        names = {p.name for p in result.files}
        assert "shocktube_eps0.1_t0.01.txt" in names
        early = fr.read_frame(tmp_path / "shocktube_eps0.1_t0.01.txt")
        late = fr.read_frame(tmp_path / "shocktube_eps0.1_final.txt")
        assert early.time < late.time

    def test_deterministic_rerun_bitwise(self, tmp_path):
        cfg = tiny_shocktube()
        run_case(cfg, output_dir=tmp_path / "a")
        run_case(cfg, output_dir=tmp_path / "b")
        fa = (tmp_path / "a" / "shocktube_eps0.1_final.txt").read_text()
        fb = (tmp_path / "b" / "shocktube_eps0.1_final.txt").read_text()
        assert fa == fb

    def test_heat_case_stores_micro_slice_and_scaled_flux(self, tmp_path):
        cfg = replace(default_config("heat_transfer"), nx=33, nv=33,
                      t_final=0.05)
        validate_config(cfg)
        result = run_case(cfg, output_dir=tmp_path)
        frame = fr.read_frame(tmp_path / "heat_transfer_eps0.01_final.txt")
        assert "g_x0.5" in frame.micro
        assert frame.micro["g_x0.5"].shape == (33,)
        assert "h_scaled_center" in result.summary

    def test_sweep_writes_table(self, tmp_path):
        cfg = replace(default_config("knudsen_sweep"), nx=17, nv=17,
                      t_final=0.05, epsilons=(0.1, 1.0))
        validate_config(cfg)
        run_case(cfg, output_dir=tmp_path)
        table = fr.read_table(tmp_path / "sweep.txt")
        assert table.shape == (2, 2)
        np.testing.assert_allclose(table[:, 0], [0.1, 1.0])


class TestRunCase2D:
    def test_lid_cavity_tiny(self, tmp_path):
        cfg = replace(default_config("lid_cavity"), nx=12, ny=12,
                      nv1=6, nv2=6, max_steps=5)
        validate_config(cfg)
        result = run_case(cfg, output_dir=tmp_path)
        frame = fr.read_frame(tmp_path / "lid_cavity_final.txt")
        assert frame.fields == fr.FIELDS_2D
        assert frame.dims == (12, 12)
        assert "steady_max_change" in result.summary
        assert int(result.summary["n_steps"]) == 5


class TestManufacturedRuns:
    def test_1d_reference_error_pinned(self):
        # frozen regression values for the coarsest resolution
        macro, micro = mms_run_1d(10)
        assert macro == pytest.approx(0.06653393519741775, rel=1e-12)
        assert micro == pytest.approx(0.09812773373649085, rel=1e-12)

    def test_2d_reference_error_pinned(self):
        macro, micro = mms_run_2d(20)
        assert macro == pytest.approx(0.030605594996427687, rel=1e-12)
        assert micro == pytest.approx(0.031135911051471035, rel=1e-12)

    def test_mms_case_writes_convergence_table(self, tmp_path):
        from micromacro import mms
        cfg = replace(default_config("mms1d"), mms_levels=2)
        result = run_case(cfg, output_dir=tmp_path)
        rows = mms.read_convergence_table(tmp_path / "convergence_mms1d.txt")
        assert [r[0] for r in rows] == [10, 20]
        # one refinement roughly halves both errors
        assert rows[1][1] < 0.75 * rows[0][1]
        assert float(result.summary["finest_macro_error"]) == rows[1][1]
