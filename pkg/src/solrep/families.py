"""Explicit surfaces used as oracles.

Case A: G = m(u) real, giving the grim reaper (k = 1) and the catenary
cylinders (k ≠ 1). Case B: G = m(u) e^{iv}, giving rotational surfaces.
Each family comes with its Gauss field and with Björling data sampled
from it, so the full pipeline can be run against a known answer.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bjorling import BjorlingData
from .errors import BlowUpError, DomainExitError, PreconditionError
from .fields import GridSpec, rk4_march
from .gauss import GaussField, stereographic
from .weierstrass import SurfacePatch


def _outward_normal(g: np.ndarray) -> np.ndarray:
    """Unit normal N(-g): the Björling normal whose Gauss value is g."""
    a2 = np.abs(g) ** 2
    return np.stack([-2.0 * g.real, -2.0 * g.imag, 1.0 - a2], axis=-1) / (1.0 + a2)[..., None]


# --- grim reaper ----------------------------------------------------------

def grim_reaper_position(u, v):
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    return np.stack([2.0 * np.arctan(np.tanh(u)), 2.0 * v, np.log(np.cosh(2.0 * u))], axis=-1)


def grim_reaper_patch(grid: GridSpec) -> SurfacePatch:
    U, V = grid.mesh()
    return SurfacePatch(grid, grim_reaper_position(U, V), 1.0, grid.mid)


def grim_reaper_gauss(grid: GridSpec) -> GaussField:
    U, _ = grid.mesh()
    return GaussField.from_array(grid, np.tanh(U), 1.0)


def grim_reaper_data(u) -> BjorlingData:
    """β(u) = ψ(u, 0) with its analytic tangent and normal."""
    u = np.asarray(u, dtype=float)
    beta = grim_reaper_position(u, np.zeros_like(u))
    c, t = 1.0 / np.cosh(2.0 * u), np.tanh(2.0 * u)
    zero = np.zeros_like(u)
    beta_prime = np.stack([2.0 * c, zero, 2.0 * t], axis=-1)
    V = np.stack([-t, zero, c], axis=-1)
    return BjorlingData(u, beta, V, 1.0, beta_prime)


# --- shared ODE driver ----------------------------------------------------

def _profile(rhs, y0, u: np.ndarray, i0: int) -> np.ndarray:
    """RK4 on the u-samples from u[i0] in both directions; y[:, 0] is m."""
    n = len(u)
    out = np.empty((n, len(y0)))
    out[i0] = y0
    for direction, stop in ((1, n), (-1, -1)):
        state = tuple(np.asarray(y0, dtype=float))
        for i in range(i0 + direction, stop, direction):
            h = u[i] - u[i - direction]
            try:
                state = rk4_march(state, lambda s: rhs(*s), h)
            except (BlowUpError, FloatingPointError):
                raise DomainExitError(f"profile left |m| < 1 near u = {u[i]:.6g}", index=i) from None
            if not abs(state[0]) < 1.0:
                raise DomainExitError(f"|m| reached 1 at u = {u[i]:.6g}; trim the grid", index=i)
            out[i] = state
    return out


def _ratio(m):
    return (1.0 + m * m) / (1.0 - m * m)


# --- Case A ---------------------------------------------------------------

@dataclass(frozen=True)
class CaseAState:
    m: np.ndarray
    I_value: np.ndarray


def case_a_slope(m, k):
    """m′ = (1-m²)^{(k+1)/2} (1+m²)^{-(k-1)/2}."""
    return (1.0 - m * m) ** ((k + 1.0) / 2.0) * (1.0 + m * m) ** (-(k - 1.0) / 2.0)


def case_a_profile(k: float, u, m0: float = 0.0) -> CaseAState:
    """m and 𝓘 on the samples u, with m = m0 and 𝓘 = 0 at the middle sample."""
    if k == 0:
        raise PreconditionError("k = 0 is not supported")
    if not abs(m0) < 1:
        raise PreconditionError("|m0| must be < 1")
    u = np.asarray(u, dtype=float)

    def rhs(m, I):
        with np.errstate(invalid="ignore"):
            mp = case_a_slope(m, k)
            return mp, mp / (1.0 + m * m) * _ratio(m) ** ((k - 1.0) / 2.0)

    y = _profile(rhs, (m0, 0.0), u, (len(u) - 1) // 2)
    return CaseAState(y[:, 0], y[:, 1])


def case_a_height(m, k):
    """z of the catenary cylinder, or the grim-reaper height when k = 1."""
    if k == 1:
        return np.log(_ratio(m))
    return 2.0 * k / (k - 1.0) * _ratio(m) ** ((k - 1.0) / 2.0)


def catenary_cylinder_patch(k: float, grid: GridSpec, m0: float = 0.0) -> SurfacePatch:
    """(2k𝓘(u), 2kv, 2k/(k-1) ((1+m²)/(1-m²))^{(k-1)/2})."""
    st = case_a_profile(k, grid.u, m0)
    U, V = grid.mesh()
    x = np.broadcast_to(2.0 * k * st.I_value[:, None], grid.shape)
    z = np.broadcast_to(case_a_height(st.m, k)[:, None], grid.shape)
    return SurfacePatch(grid, np.stack([x, 2.0 * k * V, z], axis=-1), k, grid.mid)


def catenary_cylinder_gauss(k: float, grid: GridSpec, m0: float = 0.0) -> GaussField:
    st = case_a_profile(k, grid.u, m0)
    return GaussField.from_array(grid, np.broadcast_to(st.m[:, None], grid.shape), k)


def catenary_cylinder_data(k: float, u, m0: float = 0.0) -> BjorlingData:
    """Björling data along v = 0 of the Case-A surface."""
    u = np.asarray(u, dtype=float)
    st = case_a_profile(k, u, m0)
    m = st.m
    mp = case_a_slope(m, k)
    w = _ratio(m) ** ((k - 1.0) / 2.0)
    zero = np.zeros_like(u)
    beta = np.stack([2.0 * k * st.I_value, zero, case_a_height(m, k)], axis=-1)
    if k == 1:
        dz = 4.0 * m * mp / (1.0 - m ** 4)
    else:
        dz = 4.0 * k * w * m * mp / (1.0 - m ** 4)
    beta_prime = np.stack([2.0 * k * mp / (1.0 + m * m) * w, zero, dz], axis=-1)
    return BjorlingData(u, beta, _outward_normal(m.astype(complex)), k, beta_prime)


# --- Case B ---------------------------------------------------------------

@dataclass(frozen=True)
class CaseBState:
    m: np.ndarray
    phi_exp: np.ndarray
    quad: np.ndarray
    gamma_val: np.ndarray


def case_b_gap(m, phi, k):
    """W = m - m′ = sqrt(1-m⁴) ((1-m²)/(1+m²))^{k/2} e^φ."""
    return np.sqrt(1.0 - m ** 4) * _ratio(m) ** (-k / 2.0) * np.exp(phi)


def case_b_profile(k: float, u, m0: float = 0.0) -> CaseBState:
    """Integrate m, the exponent φ and S = ∫ m²/(1-m⁴) du from the middle
    sample with m = m0, φ = 0, S = 0."""
    if k == 0:
        raise PreconditionError("k = 0 is not supported")
    if not abs(m0) < 1:
        raise PreconditionError("|m0| must be < 1")
    u = np.asarray(u, dtype=float)

    def rhs(m, phi, S):
        with np.errstate(invalid="ignore", over="ignore"):
            q = 1.0 - m ** 4
            return (m - case_b_gap(m, phi, k),
                    -(m ** 4 + 1.0 - 2.0 * k * m * m) / q,
                    m * m / q)

    y = _profile(rhs, (m0, 0.0, 0.0), u, (len(u) - 1) // 2)
    m, phi, S = y[:, 0], y[:, 1], y[:, 2]
    with np.errstate(over="ignore"):
        gamma = _ratio(m) ** ((k - 1.0) / 2.0) * np.exp(2.0 * (1.0 - k) * S)
    if not np.all(np.isfinite(gamma)):
        raise BlowUpError("rotational Γ overflowed")
    return CaseBState(m, phi, S, gamma)


def rotational_radius_height(st: CaseBState, k: float):
    """Profile (r, z) of the rotational surface."""
    W = case_b_gap(st.m, st.phi_exp, k)
    if k == 1:
        return 2.0 * W / (1.0 - st.m ** 2), np.log(_ratio(st.m)) - 4.0 * st.quad
    r = 2.0 * k * st.gamma_val * W / (1.0 - st.m ** 2)
    return r, 2.0 * k / (k - 1.0) * st.gamma_val


def rotational_patch(k: float, grid: GridSpec, m0: float = 0.0) -> SurfacePatch:
    """(r(u) cos v, r(u) sin v, z(u)) with Gauss map m(u) e^{iv}."""
    st = case_b_profile(k, grid.u, m0)
    r, z = rotational_radius_height(st, k)
    _, V = grid.mesh()
    pos = np.stack([r[:, None] * np.cos(V), r[:, None] * np.sin(V),
                    np.broadcast_to(z[:, None], grid.shape)], axis=-1)
    return SurfacePatch(grid, pos, k, grid.mid)


def rotational_gauss(k: float, grid: GridSpec, m0: float = 0.0) -> GaussField:
    st = case_b_profile(k, grid.u, m0)
    _, V = grid.mesh()
    return GaussField.from_array(grid, st.m[:, None] * np.exp(1j * V), k)


def rotational_circle_data(k: float, t, m0: float = 0.0, t_scale: float = 1.0) -> BjorlingData:
    """Björling data along the parallel of the rotational surface where m = m0.

    The circle is parametrised by its angle; ``t_scale`` multiplies the
    angle and exists to build deliberately non-closing data.
    """
    t = np.asarray(t, dtype=float)
    st = case_b_profile(k, np.array([-1e-3, 0.0, 1e-3]), m0)
    r, z = rotational_radius_height(st, k)
    r0, z0 = float(r[1]), float(z[1])
    a = t_scale * t
    beta = np.stack([r0 * np.cos(a), r0 * np.sin(a), np.full_like(a, z0)], axis=-1)
    beta_prime = t_scale * r0 * np.stack([-np.sin(a), np.cos(a), np.zeros_like(a)], axis=-1)
    V = _outward_normal(m0 * np.exp(1j * a))
    return BjorlingData(t, beta, V, k, beta_prime)


def gauss_of_normal(V) -> np.ndarray:
    """G value carried by a Björling normal: -Π(V)."""
    return -stereographic(V)
