import numpy as np
import pytest
from hypothesis import given, strategies as st

from solrep.bjorling import (BjorlingData, PhiData, differentiate_curve, dump_bjorling, initial_gauss,
                             initial_strip, initial_vderivative, initial_zetabar, load_bjorling, phi_of,
                             validate)
from solrep.errors import DegeneracyError, ValidationError
from solrep.families import grim_reaper_data

U = np.linspace(-1.0, 1.0, 11)


def line(V, k=3.0, z=1.0, bp=(1.0, 0.0, 0.0)):
    n = len(U)
    beta = np.stack([U, np.zeros(n), np.full(n, z)], axis=1)
    return BjorlingData(U, beta, np.tile(V, (n, 1)), k, np.tile(bp, (n, 1)))


def condition(data):
    with pytest.raises(ValidationError) as info:
        validate(data)
    return info.value.condition


def test_valid_line_passes():
    validate(line([0.0, 0.0, 1.0]))


@pytest.mark.parametrize("data, name", [
    (line(2 * np.array([0, 1 / np.sqrt(2), 1 / np.sqrt(2)]), k=1.0), "non_unit_normal"),
    (line([0.6, 0.0, 0.8]), "non_orthogonal"),
    (line([0.0, -1.0, 0.0]), "normal_not_upward"),
    (line([0.0, 0.0, 1.0], z=-1.0), "curve_not_above_plane"),
    (line([0.0, 0.0, 1.0], k=0.0), "k_zero"),
    (line([0.0, 0.0, 1.0], bp=(0.0, 0.0, 0.0)), "degenerate_tangent"),
])
def test_named_violations(data, name):
    assert condition(data) == name


def test_violation_reports_first_index():
    d = line([0.0, 0.0, 1.0])
    d.V[4] = [0.0, 0.0, 2.0]
    d.V[7] = [0.0, 0.0, 3.0]
    with pytest.raises(ValidationError) as info:
        validate(d)
    assert info.value.index == 4 and "sample 4" in str(info.value)


def test_translators_allow_curves_below_the_plane():
    validate(line([0.0, 0.0, 1.0], k=1.0, z=-5.0))


def test_differenced_tangent_must_also_be_orthogonal():
    d = grim_reaper_data(np.linspace(-1.0, 1.0, 41))
    d.beta_prime = None
    assert condition(d) == "non_orthogonal"


def test_differentiate_curve_fourth_order():
    errs = []
    for n in (21, 41):
        u = np.linspace(0.0, 1.0, n)
        beta = np.stack([np.sin(u), np.cos(u), u ** 3], axis=1)
        exact = np.stack([np.cos(u), -np.sin(u), 3 * u ** 2], axis=1)
        errs.append(np.abs(differentiate_curve(u, beta) - exact).max())
    assert errs[0] / errs[1] > 12


def test_differentiate_curve_nonuniform_exact_on_quartics():
    u = np.array([0.0, 0.1, 0.3, 0.35, 0.6, 0.9, 1.0])
    beta = np.stack([u ** 4, u ** 2, u], axis=1)
    exact = np.stack([4 * u ** 3, 2 * u, np.ones_like(u)], axis=1)
    assert np.abs(differentiate_curve(u, beta) - exact).max() < 1e-11


def test_phi_examples():
    phi = phi_of(line([0.0, 0.0, 1.0])).phi[0]
    assert np.allclose(phi, [0.5, 0.5j, 0.0], atol=0)
    phi = phi_of(line([0.0, 0.8, 0.6])).phi[0]
    assert np.allclose(phi, [0.5, 0.3j, -0.4j], atol=1e-15)


def test_phi_rejects_non_null():
    with pytest.raises(ValidationError):
        PhiData(np.array([[1.0, 0.0, 0.0]]))


def test_initial_gauss_examples():
    assert initial_gauss(phi_of(line([0.0, 0.0, 1.0])))[0] == 0
    g = initial_gauss(phi_of(line([0.0, 0.8, 0.6])))
    assert np.all(g == -0.5j)
    assert abs(abs(g[0]) ** 2 - 0.25) <= 1e-12


def test_initial_zetabar_branches():
    k1 = line([0.0, 0.0, 1.0], k=1.0)
    phi = phi_of(k1)
    assert np.allclose(initial_zetabar(phi, initial_gauss(phi), k1), 0.25, atol=1e-15)
    k3 = line([0.0, 0.0, 1.0], k=3.0, z=1.0)
    phi = phi_of(k3)
    assert np.allclose(initial_zetabar(phi, initial_gauss(phi), k3), 0.25, atol=1e-15)


def test_zero_branch_factor_gives_v_derivative_i_gu():
    # φ̄1 + iφ̄2 vanishes when β′ ∧ V rotates like (β′1, -β′1 i): take β′ = (1, 0, 0), V = (0, -1, 0)-ish
    # via a conjugate orientation, φ = (1/2, -i/2, 0)
    d = line([0.0, 0.0, 1.0], k=1.0)
    phi = PhiData(np.tile([0.5, -0.5j, 0.0], (len(U), 1)))
    G0 = 0.1 * U.astype(complex)
    gzb = initial_zetabar(phi, G0, d)
    assert np.all(gzb == 0)
    gv = initial_vderivative(phi, G0, d, order=2)
    assert np.allclose(gv, 1j * 0.1, atol=1e-14)


def test_initial_zetabar_degeneracy():
    d = line([0.0, 0.0, 1.0], k=1.0)
    phi = phi_of(d)
    with pytest.raises(DegeneracyError):
        initial_zetabar(phi, np.full(len(U), 1.0 - 1e-9), d)


def test_grim_reaper_strip_is_v_independent():
    strip = initial_strip(grim_reaper_data(np.linspace(-1.0, 1.0, 201)))
    assert np.abs(strip.G0 - np.tanh(np.linspace(-1, 1, 201))).max() < 1e-14
    assert np.abs(strip.Gv0).max() < 1e-6


def test_json_round_trip(tmp_path):
    d = grim_reaper_data(np.linspace(-1.0, 1.0, 9))
    dump_bjorling(d, tmp_path / "d.json")
    e = load_bjorling(tmp_path / "d.json")
    for name in ("u", "beta", "V", "beta_prime"):
        assert np.array_equal(getattr(d, name), getattr(e, name))
    assert e.k == 1.0


def test_json_missing_key(tmp_path):
    (tmp_path / "bad.json").write_text('{"k": 1, "u": [0, 1]}')
    with pytest.raises(ValidationError) as info:
        load_bjorling(tmp_path / "bad.json")
    assert info.value.condition == "schema"


# --- random valid data ------------------------------------------------------

@st.composite
def frames(draw, n=8):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    V = rng.normal(size=(n, 3))
    V[:, 2] = np.abs(V[:, 2]) + 0.05
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    w = rng.normal(size=(n, 3))
    bp = w - np.sum(w * V, axis=1, keepdims=True) * V
    beta = np.cumsum(bp, axis=0) * 0.1
    beta[:, 2] += 10.0
    return BjorlingData(np.arange(n, dtype=float), beta, V, draw(st.sampled_from([1.0, 3.0, -2.0])), bp)


@given(frames())
def test_null_condition_for_valid_data(data):
    phi = phi_of(data).phi
    assert np.abs(np.sum(phi * phi, axis=1)).max() <= 1e-10 * max(1.0, np.abs(phi).max() ** 2)


@given(frames())
def test_modulus_of_initial_gauss(data):
    g = initial_gauss(phi_of(data))
    V3 = data.V[:, 2]
    assert np.abs(np.abs(g) - np.sqrt((1 - V3) / (1 + V3))).max() <= 1e-10


@given(frames())
def test_quotients_agree(data):
    p = phi_of(data).phi
    a, b = p[:, 0] - 1j * p[:, 1], p[:, 2]
    ok = (np.abs(a) > 1e-6) & (np.abs(b) > 1e-6)
    ga = p[ok, 2] / a[ok]
    gb = -(p[ok, 0] + 1j * p[ok, 1]) / b[ok]
    assert np.abs(ga - gb).max(initial=0) <= 1e-10 * max(1.0, np.abs(ga).max(initial=0))


@given(frames(), st.floats(0, 2 * np.pi))
def test_vertical_rotation_rotates_gauss(data, theta):
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    rot = BjorlingData(data.u, data.beta @ R.T, data.V @ R.T, data.k, data.beta_prime @ R.T)
    g0, g1 = initial_gauss(phi_of(data)), initial_gauss(phi_of(rot))
    assert np.abs(np.abs(g1) - np.abs(g0)).max() <= 1e-12
    big = np.abs(g0) > 1e-3
    ratio = g1[big] / g0[big]
    assert np.abs(ratio - ratio[0]).max(initial=0) <= 1e-10
