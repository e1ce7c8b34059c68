"""Cross-backend parity: the compiled kernels must agree with the numpy
reference implementations up to floating-point reassociation (1e-12
relative), on every kernel. Skipped when the compiled extension is not
built."""

import numpy as np
import pytest

from micromacro._kernels import _fallback as ref

core = pytest.importorskip("micromacro._kernels._core")

RNG = np.random.default_rng(123)
NX, NY, NV1, NV2 = 6, 5, 12, 10


def close(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    scale = max(float(np.max(np.abs(b))), 1e-300)
    assert float(np.max(np.abs(a - b))) <= 1e-12 * scale


@pytest.fixture(scope="module")
def fields():
    v1 = np.linspace(-5.7, 5.7, NV1)
    v2 = np.linspace(-6.1, 6.1, NV2)
    rho = RNG.uniform(0.5, 1.5, (NX, NY))
    u1 = RNG.uniform(-0.5, 0.5, (NX, NY))
    u2 = RNG.uniform(-0.5, 0.5, (NX, NY))
    T = RNG.uniform(0.7, 1.4, (NX, NY))
    tau = RNG.uniform(0.3, 1.2, (NX, NY))
    M = ref.maxwellian_field_2d(rho, u1, u2, T, v1, v2)
    G = RNG.standard_normal((NX, NY, NV1, NV2))
    return dict(v1=v1, v2=v2, rho=rho, u1=u1, u2=u2, T=T, tau=tau,
                M=np.ascontiguousarray(M), G=np.ascontiguousarray(G))


def test_upwind_z_1d():
    nv = 16
    v = np.linspace(-6.5, 6.5, nv)
    G_ext = np.ascontiguousarray(RNG.standard_normal((NX + 2, nv)))
    close(core.upwind_z_1d(G_ext, v, 0.05), ref.upwind_z_1d(G_ext, v, 0.05))


def test_project_field_1d():
    nv = 40
    v = np.linspace(-6.5, 6.5, nv)
    dv = v[1] - v[0]
    rho = RNG.uniform(0.5, 1.5, NX)
    u = RNG.uniform(-0.5, 0.5, NX)
    T = RNG.uniform(0.7, 1.3, NX)
    from micromacro.gas_state import maxwellian_1d
    M = np.ascontiguousarray(
        maxwellian_1d(rho[:, None], u[:, None], T[:, None], v[None, :]))
    F = np.ascontiguousarray(RNG.standard_normal((NX, nv)))
    close(core.project_field_1d(F, M, rho, u, T, v, dv),
          ref.project_field_1d(F, M, rho, u, T, v, dv))


def test_maxwellian_field_2d(fields):
    f = fields
    close(core.maxwellian_field_2d(f["rho"], f["u1"], f["u2"], f["T"],
                                   f["v1"], f["v2"]),
          f["M"])


def test_project_field_2d(fields):
    f = fields
    dv = (f["v1"][1] - f["v1"][0]) * (f["v2"][1] - f["v2"][0])
    args = (f["G"], f["M"], f["rho"], f["u1"], f["u2"], f["T"],
            f["v1"], f["v2"], dv)
    close(core.project_field_2d(*args), ref.project_field_2d(*args))


@pytest.mark.parametrize("axis", [0, 1])
def test_transport_stage_2d(fields, axis):
    f = fields
    shape = (NX + 2, NY, NV1, NV2) if axis == 0 else (NX, NY + 2, NV1, NV2)
    G_ext = np.ascontiguousarray(RNG.standard_normal(shape))
    args = (G_ext, f["M"], f["rho"], f["u1"], f["u2"], f["T"],
            f["v1"], f["v2"], 0.02, 0.003, axis)
    close(core.transport_stage_2d(*args), ref.transport_stage_2d(*args))


def test_ghat_2d(fields):
    f = fields
    s11 = RNG.standard_normal((NX, NY))
    s12 = RNG.standard_normal((NX, NY))
    g1 = RNG.standard_normal((NX, NY))
    g2 = RNG.standard_normal((NX, NY))
    args = (f["M"], f["rho"], f["u1"], f["u2"], f["T"], s11, s12, g1, g2,
            f["tau"], f["v1"], f["v2"])
    close(core.ghat_2d(*args), ref.ghat_2d(*args))


def test_add_gaussian_term_2d(fields):
    f = fields
    m11 = RNG.uniform(0.8, 1.2, (NX, NY))
    m12 = RNG.uniform(-0.2, 0.2, (NX, NY))
    m22 = RNG.uniform(0.8, 1.2, (NX, NY))
    a = np.array(f["G"], copy=True)
    b = np.array(f["G"], copy=True)
    core.add_gaussian_term_2d(a, f["M"], f["rho"], f["u1"], f["u2"],
                              m11, m12, m22, 0.07, f["v1"], f["v2"])
    ref.add_gaussian_term_2d(b, f["M"], f["rho"], f["u1"], f["u2"],
                             m11, m12, m22, 0.07, f["v1"], f["v2"])
    close(a, b)


def test_add_lowrank_4d(fields):
    f = fields
    coeffs = np.ascontiguousarray(RNG.standard_normal((3, NX, NY)))
    shapes = np.ascontiguousarray(RNG.standard_normal((3, NV1, NV2)))
    a = np.array(f["G"], copy=True)
    b = np.array(f["G"], copy=True)
    core.add_lowrank_4d(a, coeffs, shapes)
    ref.add_lowrank_4d(b, coeffs, shapes)
    close(a, b)


def test_relax_2d(fields):
    f = fields
    Ghat = np.ascontiguousarray(RNG.standard_normal((NX, NY, NV1, NV2)))
    args = (f["G"], Ghat, f["tau"], 0.004, 0.08)
    close(core.relax_2d(*args), ref.relax_2d(*args))


def test_heat_tensor_2d(fields):
    f = fields
    dv = (f["v1"][1] - f["v1"][0]) * (f["v2"][1] - f["v2"][0])
    got = core.heat_tensor_2d(f["G"], f["u1"], f["u2"], f["v1"], f["v2"],
                              dv, 0.08)
    want = ref.heat_tensor_2d(f["G"], f["u1"], f["u2"], f["v1"], f["v2"],
                              dv, 0.08)
    for a, b in zip(got, want):
        close(a, b)
