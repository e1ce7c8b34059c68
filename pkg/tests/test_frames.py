import numpy as np
import pytest

from micromacro.runner.frames import (FIELDS_1D, FIELDS_2D, Frame,
                                      FrameFormatError, grids_to_records,
                                      read_frame, read_summary, read_table,
                                      write_frame, write_summary, write_table)

RNG = np.random.default_rng(2)


def make_frame_2d(nx=3, ny=4):
    grids = [RNG.standard_normal((nx, ny)) for _ in FIELDS_2D]
    data = grids_to_records(grids)
    micro = {"g_x0.5": RNG.standard_normal((5, 6))}
    return Frame(time=0.125, dims=(nx, ny), fields=FIELDS_2D, data=data,
                 micro=micro), grids


class TestRoundTrip:
    def test_1d_bit_exact(self, tmp_path):
        nx = 7
        data = grids_to_records([RNG.standard_normal(nx)
                                 for _ in FIELDS_1D])
        frame = Frame(time=1.0 / 3.0, dims=(nx,), fields=FIELDS_1D,
                      data=data, micro={"g_x0.5": RNG.standard_normal(9)})
        path = tmp_path / "frame.txt"
        write_frame(frame, path)
        back = read_frame(path)
        assert back.time == frame.time
        assert back.dims == frame.dims
        assert back.fields == frame.fields
        np.testing.assert_array_equal(back.data, frame.data)
        np.testing.assert_array_equal(back.micro["g_x0.5"],
                                      frame.micro["g_x0.5"])

    def test_2d_bit_exact(self, tmp_path):
        frame, grids = make_frame_2d()
        path = tmp_path / "frame.txt"
        write_frame(frame, path)
        back = read_frame(path)
        for name, grid in zip(FIELDS_2D, grids):
            np.testing.assert_array_equal(back.field_grid(name), grid)
        np.testing.assert_array_equal(back.micro["g_x0.5"],
                                      frame.micro["g_x0.5"])

    def test_records_run_x_fastest(self):
        nx, ny = 3, 2
        grid = np.arange(nx * ny, dtype=float).reshape(nx, ny)
        data = grids_to_records([grid])
        # cell (i, j) sits at row j*nx + i
        for i in range(nx):
            for j in range(ny):
                assert data[j * nx + i, 0] == grid[i, j]


class TestValidation:
    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("not a frame\n")
        with pytest.raises(FrameFormatError):
            read_frame(path)

    def test_truncated_data(self, tmp_path):
        frame, _ = make_frame_2d()
        path = tmp_path / "frame.txt"
        write_frame(frame, path)
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:8]) + "\n")
        with pytest.raises(FrameFormatError):
            read_frame(path)

    def test_shape_mismatch_rejected_on_construction(self):
        with pytest.raises(FrameFormatError):
            Frame(time=0.0, dims=(4,), fields=FIELDS_1D,
                  data=np.zeros((3, len(FIELDS_1D))))

    def test_unknown_header_line(self, tmp_path):
        frame, _ = make_frame_2d()
        path = tmp_path / "frame.txt"
        write_frame(frame, path)
        text = path.read_text().replace("fields =", "colour =\nfields =")
        path.write_text(text)
        with pytest.raises(FrameFormatError):
            read_frame(path)


class TestTablesAndSummaries:
    def test_table_round_trip(self, tmp_path):
        rows = RNG.standard_normal((4, 3))
        path = tmp_path / "table.txt"
        write_table(path, "a b c", rows)
        np.testing.assert_array_equal(read_table(path), rows)

    def test_summary_round_trip(self, tmp_path):
        path = tmp_path / "summary.txt"
        write_summary(path, {"epsilon": 0.1, "n_steps": 64,
                             "backend": "python"})
        back = read_summary(path)
        assert float(back["epsilon"]) == 0.1
        assert int(back["n_steps"]) == 64
        assert back["backend"] == "python"
