import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from solrep.errors import DimensionError, DomainError, PreconditionError, ValidationError
from solrep.families import catenary_cylinder_patch, grim_reaper_data, grim_reaper_patch, rotational_patch
from solrep.fields import GridSpec
from solrep.gauss import GaussField
from solrep.marcher import MarchConfig
from solrep.verify import (Isometry, Residual, VerificationReport, convergence_order, gauss_consistency,
                           mean_curvature_field, order_from_errors, periodicity_check, rigid_gap,
                           soliton_residual, symmetry_check)
from solrep.weierstrass import SurfacePatch

GRID = GridSpec(-1.0, 1.0, 401, -0.2, 0.2, 41)


def planar(fn, grid=GridSpec(-1.0, 1.0, 21, -1.0, 1.0, 21), k=1.0):
    U, V = grid.mesh()
    return SurfacePatch(grid, np.stack(fn(U, V), axis=-1), k)


def sphere(n, R=2.0):
    g = GridSpec(0.0, 1.0, n, -0.5, 0.5, n)
    U, V = g.mesh()
    return SurfacePatch(g, R * np.stack([np.cos(U) * np.cos(V), np.sin(U) * np.cos(V), np.sin(V)], -1), 1.0)


def test_plane_has_zero_mean_curvature():
    H, n = mean_curvature_field(planar(lambda u, v: (u, v, 0 * u)))
    assert np.abs(H.values).max() < 1e-12
    assert np.allclose(n.n, [0, 0, -1])


def test_sphere_mean_curvature_second_order():
    errs = [np.abs(np.abs(mean_curvature_field(sphere(n))[0].values) - 1.0).max() for n in (21, 41, 81)]
    assert errs[-1] < 1e-3
    assert 3.5 < errs[0] / errs[1] < 4.5 and 3.5 < errs[1] / errs[2] < 4.5


def test_grim_reaper_apex_curvature():
    H, _ = mean_curvature_field(grim_reaper_patch(GRID))
    i, j = GRID.mid
    assert abs(abs(H.values[i - 1, j - 1]) - 1.0) < 1e-3


def test_soliton_residual_planes():
    vertical = planar(lambda u, v: (u, 0 * u, v))
    assert soliton_residual(vertical)["soliton"].max < 1e-12
    rep = soliton_residual(planar(lambda u, v: (u, v, 0 * u + 1.0)))
    assert abs(rep["soliton"].max - 1.0) <= 1e-6
    assert not rep.passed


def test_soliton_residual_grim_reaper():
    rep = soliton_residual(grim_reaper_patch(GRID))
    assert rep.passed and rep["soliton"].max <= 1e-3 and rep.sign_convention == 1


def test_singular_needs_positive_height():
    with pytest.raises(DomainError):
        soliton_residual(planar(lambda u, v: (u, v, 0 * u), k=3.0))


def test_negative_control_wrong_k():
    p = catenary_cylinder_patch(3.0, GridSpec(-0.5, 0.5, 201, -0.2, 0.2, 41))
    assert soliton_residual(p, 3.0).passed
    assert not soliton_residual(p, 5.0).passed


@given(st.lists(st.floats(-100, 100), min_size=3, max_size=3))
def test_translation_invariance(t):
    p = grim_reaper_patch(GridSpec(-1.0, 1.0, 101, -0.2, 0.2, 11))
    a = soliton_residual(p)["soliton"].max
    b = soliton_residual(p.transformed(t=np.array(t)))["soliton"].max
    assert abs(a - b) <= 1e-12 * max(1.0, np.abs(t).max()) * 10


@given(st.floats(0.2, 5.0))
def test_homothety_invariance(lam):
    p = catenary_cylinder_patch(3.0, GridSpec(-0.5, 0.5, 101, -0.2, 0.2, 11))
    a = soliton_residual(p)["soliton"].max
    b = soliton_residual(p.transformed(scale=lam))["soliton"].max
    assert abs(a / lam - b) <= 1e-10


@given(st.floats(0, 2 * np.pi))
def test_vertical_rotation_invariance(theta):
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    for p in (grim_reaper_patch(GridSpec(-1.0, 1.0, 101, -0.2, 0.2, 11)),
              rotational_patch(3.0, GridSpec(-0.2, 0.2, 41, 0.0, 1.0, 21))):
        a = soliton_residual(p).to_dict()
        b = soliton_residual(p.transformed(R=R)).to_dict()
        assert abs(a["residuals"]["soliton"]["max"] - b["residuals"]["soliton"]["max"]) <= 1e-10
        assert a["sign_convention"] == b["sign_convention"]


def test_gauss_consistency_controls():
    g = GridSpec(-1.0, 1.0, 21, -1.0, 1.0, 21)
    zero = GaussField.from_array(g, np.zeros(g.shape), 1.0)
    flat = planar(lambda u, v: (u, -v, 0 * u), g)
    assert gauss_consistency(flat, zero)["gauss_angle"].max < 1e-12
    tilted = planar(lambda u, v: (u, -v, 0.5 * u), g)
    assert gauss_consistency(tilted, zero)["gauss_angle"].max > 0.1
    with pytest.raises(DimensionError):
        gauss_consistency(planar(lambda u, v: (u, v, u)), GaussField.from_array(GRID, np.zeros(GRID.shape), 1.0))


def test_report_json():
    rep = VerificationReport().add("a", Residual.of(np.array([[0.0, 2.0], [1.0, 1.0]])), 1.5)
    d = json.loads(rep.to_json())
    assert d == {"residuals": {"a": {"max": 2.0, "mean": 1.0, "at": [0, 1]}},
                 "sign_convention": -1, "pass": {"a": False}}


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=30))
def test_residual_ordering(xs):
    r = Residual.of(np.array(xs))
    assert r.max >= r.mean >= 0


def test_rigid_gap_allows_y_reflection_only():
    p = grim_reaper_patch(GridSpec(-1.0, 1.0, 11, -0.2, 0.2, 5))
    flipped = p.transformed(R=np.diag([1.0, -1.0, 1.0]), t=[1.0, 2.0, 3.0])
    assert rigid_gap(flipped, p) < 1e-14
    assert rigid_gap(flipped, p, allow_reflection=False) > 0.1
    lifted = p.transformed(t=[0.0, 0.0, 1.0])
    assert rigid_gap(lifted, p, k=3.0) > 0.9


def test_isometry_validation():
    with pytest.raises(PreconditionError):
        Isometry(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(PreconditionError):
        Isometry(2 * np.eye(3))
    assert Isometry.rotate_z(1).det == 1 and Isometry.reflect_x().det == -1


def test_symmetry_identity_and_bad_isometry():
    d = grim_reaper_data(np.linspace(-1.0, 1.0, 41))
    cfg = MarchConfig(0.05, 11, use_filter=False)
    n = len(d.u)
    assert symmetry_check(d, Isometry(np.eye(3)), np.arange(n), 1, cfg)["symmetry"].max == 0
    with pytest.raises(PreconditionError):
        symmetry_check(d, Isometry.rotate_z(1), np.arange(n), 1, cfg)
    with pytest.raises(PreconditionError):
        symmetry_check(d, Isometry(np.eye(3)), np.arange(n - 1), 1, cfg)


def test_periodicity_preconditions():
    u = np.linspace(0.0, 1.0, 11)
    const = grim_reaper_data(np.zeros(11))
    const.u = u
    const.beta_prime = np.zeros((11, 3))
    with pytest.raises(ValidationError) as info:
        periodicity_check(const)
    assert info.value.condition == "degenerate_tangent"
    with pytest.raises(PreconditionError):
        periodicity_check(grim_reaper_data(np.linspace(-1, 1, 21)))


def test_convergence_order_arguments():
    with pytest.raises(ValueError):
        convergence_order("grim-reaper", [(101, 11), (201, 21)])
    with pytest.raises(ValueError):
        order_from_errors([1, 2], [1, 2])


def test_convergence_constant_is_sentinel():
    order, pts = convergence_order("constant", [(21, 5), (41, 9), (81, 17)])
    assert np.isnan(order) and all(e <= 1e-10 for _, e in pts)


def test_convergence_first_order_fixture():
    # a one-sided difference of sin: the injected first-order stencil
    def case(n_u, n_v):
        h = 1.0 / (n_u - 1)
        u = np.linspace(0.0, 1.0, n_u)
        return h, float(np.max(np.abs((np.sin(u + h) - np.sin(u)) / h - np.cos(u))))
    order, _ = convergence_order(case, [(101, 11), (201, 21), (401, 41)])
    assert abs(order - 1.0) < 0.1
