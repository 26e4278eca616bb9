"""March G off the data line v = 0 into the strip |v| <= ε.

The Gauss-map equation with G_ζζ̄ = ¼(G_uu + G_vv) gives

    G_vv = -G_uu - 8 (|G|² Ḡ P + k Q G) / (1 - |G|⁴),
    P = ¼(G_u² + G_v²),  Q = ¼|G_u + i G_v|²,

an elliptic equation posed as a Cauchy problem in v. Small perturbations
with u-frequency ω grow like exp(ω|v|), so every RK4 step is followed by a
projection onto modes whose growth over the strip stays bounded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import legendre

from .bjorling import InitialStrip
from .errors import BlowUpError, DegeneracyError, PreconditionError
from .fields import GridSpec, diff, rk4_march
from .gauss import DELTA, GaussField


@dataclass(frozen=True)
class MarchConfig:
    """Strip half-width, v-resolution and the u-filter.

    The filter keeps at most ``filter_cutoff`` of the resolvable modes and
    never a mode whose amplification exp(ω ε) over the strip exceeds
    ``max_growth``.
    """

    epsilon: float
    n_v: int = 41
    filter_cutoff: float = 2.0 / 3.0
    max_growth: float = 1e2
    use_filter: bool = True
    stencil_order: int = 4
    max_G: float = 1.0 - DELTA

    def __post_init__(self):
        if not self.epsilon > 0:
            raise PreconditionError(f"epsilon must be positive, got {self.epsilon}")
        if self.n_v < 3 or self.n_v % 2 == 0:
            raise PreconditionError(f"n_v must be an odd integer >= 3, got {self.n_v}")
        if not 0 < self.filter_cutoff <= 1:
            raise PreconditionError(f"filter_cutoff must lie in (0, 1], got {self.filter_cutoff}")
        if not self.max_growth > 1:
            raise PreconditionError(f"max_growth must exceed 1, got {self.max_growth}")
        if self.stencil_order not in (2, 4):
            raise PreconditionError("stencil_order must be 2 or 4")

    @property
    def h_v(self) -> float:
        return 2.0 * self.epsilon / (self.n_v - 1)


def legendre_degree(u: np.ndarray, cfg: MarchConfig) -> int:
    """Highest Legendre degree kept on a non-periodic row.

    A degree-K polynomial on an interval of half-length L grows by at most
    ρ^K at distance ε off the axis, ρ = a + sqrt(1 + a²), a = ε/L
    (Bernstein ellipse).
    """
    n = len(u)
    half = 0.5 * (u[-1] - u[0])
    a = cfg.epsilon / half
    rho = a + math.sqrt(1.0 + a * a)
    k_res = int(cfg.filter_cutoff * (n - 1))
    k_growth = int(math.log(cfg.max_growth) / math.log(rho))
    return max(1, min(k_res, k_growth, n - 1))


def fourier_band(n: int, period: float, cfg: MarchConfig) -> int:
    """Highest |wavenumber| kept on a periodic row of n samples."""
    j_res = int(cfg.filter_cutoff * n / 2)
    j_growth = int(math.log(cfg.max_growth) * period / (2.0 * math.pi * cfg.epsilon))
    return max(0, min(j_res, j_growth))


def make_filter(grid: GridSpec, cfg: MarchConfig) -> Callable[[np.ndarray], np.ndarray]:
    """Projection applied to each state row after every step."""
    if not cfg.use_filter:
        return lambda f: f
    u = grid.u
    if grid.periodic:
        jmax = fourier_band(grid.n_u, grid.period, cfg)
        freq = np.fft.fftfreq(grid.n_u, d=1.0 / grid.n_u)
        keep = np.abs(freq) <= jmax
        project = lambda f: np.fft.ifft(np.fft.fft(f) * keep)
    else:
        deg = legendre_degree(u, cfg)
        t = (2.0 * u - (u[0] + u[-1])) / (u[-1] - u[0])
        q, _ = np.linalg.qr(legendre.legvander(t, deg))
        project = lambda f: q @ (q.T @ f)
    # constants are kept by the projection; splitting one off keeps them exact
    return lambda f: f[0] + project(f - f[0])


def _margin_check(G: np.ndarray, cfg: MarchConfig, step: int):
    a = np.abs(G)
    if np.max(a) > cfg.max_G:
        i = int(np.argmax(a))
        raise DegeneracyError(f"|G| = {a[i]:.12g} exceeds {cfg.max_G} at step {step}",
                              index=i, step=step)


def evolution_rhs(k: float, h_u: float, order: int, periodic: bool):
    """Right-hand side of the first-order system (G, G_v)."""
    def rhs(state):
        G, Gv = state
        Gu = diff(G, h_u, order=order, periodic=periodic)
        Guu = diff(G, h_u, deriv=2, order=order, periodic=periodic)
        a2 = np.abs(G) ** 2
        P = 0.25 * (Gu * Gu + Gv * Gv)
        Q = 0.25 * np.abs(Gu + 1j * Gv) ** 2
        return Gv, -Guu - 8.0 * (a2 * np.conj(G) * P + k * Q * G) / (1.0 - a2 * a2)
    return rhs


def march(init: InitialStrip, k: float, grid: GridSpec, cfg: MarchConfig) -> GaussField:
    """Two-sided RK4 march of (G, G_v) from v = 0 out to v = ±ε.

    ``grid`` fixes the u-samples; the returned field lives on
    ``grid.with_v(-ε, ε, n_v)`` with the data row in the middle.
    """
    if k == 0:
        raise PreconditionError("k = 0 is not supported")
    G0 = np.asarray(init.G0, dtype=complex)
    Gv0 = np.asarray(init.Gv0, dtype=complex)
    if G0.shape != (grid.n_u,) or Gv0.shape != (grid.n_u,):
        raise PreconditionError(f"initial rows must have {grid.n_u} samples")
    _margin_check(G0, cfg, 0)

    out_grid = grid.with_v(-cfg.epsilon, cfg.epsilon, cfg.n_v)
    half = (cfg.n_v - 1) // 2
    values = np.empty(out_grid.shape, dtype=complex)
    values[:, half] = G0
    rhs = evolution_rhs(float(k), grid.h_u, cfg.stencil_order, grid.periodic)
    proj = make_filter(grid, cfg)

    for direction in (1, -1):
        state = (G0, Gv0)
        h = direction * cfg.h_v
        for step in range(1, half + 1):
            try:
                state = rk4_march(state, rhs, h)
            except BlowUpError as exc:
                raise BlowUpError(f"march blew up at step {direction * step}: {exc}",
                                  index=exc.index, step=direction * step) from None
            state = (proj(state[0]), proj(state[1]))
            if not (np.all(np.isfinite(state[0])) and np.all(np.isfinite(state[1]))):
                raise BlowUpError(f"non-finite state at step {direction * step}",
                                  step=direction * step)
            _margin_check(state[0], cfg, direction * step)
            values[:, half + direction * step] = state[0]
    return GaussField.from_array(out_grid, values, k)
