import numpy as np
import pytest

from solrep.errors import AlignmentError, DegeneracyError, PreconditionError
from solrep.families import (case_a_height, case_a_profile, catenary_cylinder_gauss, grim_reaper_data,
                             grim_reaper_gauss)
from solrep.fields import GridSpec
from solrep.gauss import GaussField, closedness_residual
from solrep.weierstrass import SurfacePatch, align, integrate, integrate_singular, integrate_translator

GRID = GridSpec(-1.0, 1.0, 401, -0.2, 0.2, 41)


def test_constant_field_gives_degenerate_patch():
    gf = GaussField.from_array(GRID, np.full(GRID.shape, 0.3), 1.0)
    p = integrate_translator(gf)
    assert np.all(p.positions == 0) and not p.immersed
    p, gamma = integrate_singular(GaussField.from_array(GRID, np.zeros(GRID.shape), 3.0))
    assert not p.immersed and np.all(gamma.values.values == 1.0)


def test_grim_reaper_profile():
    p = integrate_translator(grim_reaper_gauss(GRID))
    i0, j0 = GRID.mid
    assert np.all(p.positions[i0, j0] == 0)
    u = GRID.u
    assert np.abs(p.x[:, j0] - 2 * np.arctan(np.tanh(u))).max() < 1e-5
    assert np.abs(p.z[:, j0] - np.log(np.cosh(2 * u))).max() < 1e-5
    assert abs(p.x[-1, j0] - 1.30176) < 1e-5 and abs(p.z[-1, j0] - 1.32500) < 1e-5
    # dζ = i dv: y = -2v along u = 0
    assert np.abs(p.y[i0] + 2 * GRID.v).max() < 1e-5


def test_anchor_and_path_choice():
    gf = grim_reaper_gauss(GRID)
    p = integrate_translator(gf, anchor=(0, 0))
    assert np.all(p.positions[0, 0] == 0)
    uv = integrate_translator(gf, path="uv").positions
    vu = integrate_translator(gf, path="vu").positions
    length = GRID.period + (GRID.v_max - GRID.v_min)
    assert np.abs(uv - vu).max() <= 10 * closedness_residual(gf) * length


def test_k_mismatch():
    with pytest.raises(PreconditionError):
        integrate_translator(GaussField.from_array(GRID, np.zeros(GRID.shape), 3.0))
    with pytest.raises(PreconditionError):
        integrate_singular(GaussField.from_array(GRID, np.zeros(GRID.shape), 1.0))


def test_degenerate_gauss_field():
    G = np.zeros(GRID.shape, dtype=complex)
    G[3, 3] = 1 - 1e-9
    with pytest.raises(DegeneracyError):
        integrate(GaussField.from_array(GRID, G, 1.0))


@pytest.mark.parametrize("k", [3.0, 2.0, -1.0])
def test_singular_height_matches_closed_form(k):
    g = GridSpec(-0.5, 0.5, 2001, -0.05, 0.05, 11)
    gf = catenary_cylinder_gauss(k, g)
    p, gamma = integrate_singular(gf)
    m = case_a_profile(k, g.u).m
    i0, j0 = g.mid
    assert p.z[i0, j0] == 2 * k / (k - 1)
    assert gamma.values.values[i0, j0] == 1.0
    assert np.abs(p.z - case_a_height(m, k)[:, None]).max() <= 1e-6


def test_singular_patch_sign_of_height():
    g = GridSpec(-0.5, 0.5, 201, -0.05, 0.05, 11)
    for k in (3.0, 0.5, -1.0):
        p, _ = integrate_singular(catenary_cylinder_gauss(k, g))
        assert np.all(np.sign(p.z) == np.sign(2 * k / (k - 1)))


def test_align_translator():
    u = np.linspace(-1.0, 1.0, 11)
    g = GridSpec(-1.0, 1.0, 11, -0.1, 0.1, 5)
    d = grim_reaper_data(u)
    pos = np.zeros(g.shape + (3,))
    pos[..., 0] = g.mesh()[0]
    p = align(SurfacePatch(g, pos, 1.0), d)
    assert np.allclose(p.positions[5, 2], d.beta[5])
    q = align(p, d)
    assert np.array_equal(q.positions, p.positions)


def test_align_homothety():
    u = np.linspace(-1.0, 1.0, 11)
    g = GridSpec(-1.0, 1.0, 11, -0.1, 0.1, 5)
    d = grim_reaper_data(u)
    d.k = 3.0
    d.beta[:, 2] = 6.0
    pos = np.zeros(g.shape + (3,))
    pos[..., 2] = 3.0
    p = align(SurfacePatch(g, pos, 3.0), d)
    assert np.allclose(p.z, 6.0)
    pos[..., 2] = 0.0
    with pytest.raises(AlignmentError):
        align(SurfacePatch(g, pos, 3.0), d)


def test_align_rejects_other_samples():
    g = GridSpec(0.0, 1.0, 11, -0.1, 0.1, 5)
    with pytest.raises(AlignmentError):
        align(SurfacePatch(g, np.zeros(g.shape + (3,)), 1.0), grim_reaper_data(np.linspace(-1, 1, 11)))


def test_periodic_field_is_unwrapped():
    g = GridSpec(0.0, 2 * np.pi, 64, -0.1, 0.1, 11, periodic=True)
    U, V = g.mesh()
    gf = GaussField.from_array(g, 0.3 * np.exp(1j * U) * np.cosh(V), 1.0)
    p = integrate_translator(gf)
    assert p.grid.shape == (65, 11) and not p.grid.periodic
