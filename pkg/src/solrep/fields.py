"""Parameter grids, sampled fields and the finite-difference calculus on them.

All fields are stored as ``(n_u, n_v)`` arrays: axis 0 runs along ``u``,
axis 1 along ``v``, and the complex parameter is ``zeta = u + i v``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import BlowUpError, DimensionError


@dataclass(frozen=True)
class GridSpec:
    """Rectangle ``[u_min, u_max] x [v_min, v_max]`` sampled uniformly.

    With ``periodic=True`` the u-direction is a circle of length
    ``u_max - u_min`` and the samples exclude the right endpoint.
    """

    u_min: float
    u_max: float
    n_u: int
    v_min: float = 0.0
    v_max: float = 0.0
    n_v: int = 1
    periodic: bool = False

    def __post_init__(self):
        if not (np.isfinite(self.u_min) and np.isfinite(self.u_max)) or self.u_max <= self.u_min:
            raise DimensionError(f"need u_max > u_min, got [{self.u_min}, {self.u_max}]")
        if self.n_u < 3:
            raise DimensionError(f"n_u must be >= 3, got {self.n_u}")
        if self.n_v < 1:
            raise DimensionError(f"n_v must be >= 1, got {self.n_v}")
        if self.n_v > 1 and not self.v_max > self.v_min:
            raise DimensionError(f"need v_max > v_min, got [{self.v_min}, {self.v_max}]")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_u, self.n_v)

    @property
    def period(self) -> float:
        return self.u_max - self.u_min

    @property
    def h_u(self) -> float:
        n = self.n_u if self.periodic else self.n_u - 1
        return (self.u_max - self.u_min) / n

    @property
    def h_v(self) -> float:
        if self.n_v == 1:
            return float("nan")
        return (self.v_max - self.v_min) / (self.n_v - 1)

    @property
    def u(self) -> np.ndarray:
        return self.u_min + self.h_u * np.arange(self.n_u)

    @property
    def v(self) -> np.ndarray:
        if self.n_v == 1:
            return np.array([float(self.v_min)])
        return self.v_min + self.h_v * np.arange(self.n_v)

    @property
    def mid(self) -> tuple[int, int]:
        """Index of the grid midpoint (default integration anchor)."""
        return ((self.n_u - 1) // 2, (self.n_v - 1) // 2)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.u, self.v, indexing="ij")

    def zeta(self) -> np.ndarray:
        U, V = self.mesh()
        return U + 1j * V

    def with_v(self, v_min: float, v_max: float, n_v: int) -> "GridSpec":
        return replace(self, v_min=v_min, v_max=v_max, n_v=n_v)

    def unwrapped(self) -> "GridSpec":
        """Non-periodic grid covering one full period, seam sample included."""
        if not self.periodic:
            return self
        return replace(self, n_u=self.n_u + 1, periodic=False)

    def interior(self) -> "GridSpec":
        """Grid with one boundary sample removed on every side."""
        if self.n_u < 3 or self.n_v < 3:
            raise DimensionError("interior() needs at least 3 samples in each direction")
        hu, hv = self.h_u, self.h_v
        return GridSpec(self.u_min + hu, self.u_min + hu * (self.n_u - 2), self.n_u - 2,
                        self.v_min + hv, self.v_min + hv * (self.n_v - 2), self.n_v - 2)


@dataclass(frozen=True)
class ComplexField:
    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        _check_values(self.grid, vals)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class RealField:
    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values)
        if np.iscomplexobj(vals):
            raise TypeError("RealField needs real samples")
        vals = vals.astype(float)
        _check_values(self.grid, vals)
        object.__setattr__(self, "values", vals)


def _check_values(grid, vals):
    if vals.shape != grid.shape:
        raise DimensionError(f"values have shape {vals.shape}, grid is {grid.shape}")
    if not np.all(np.isfinite(vals)):
        bad = np.argwhere(~np.isfinite(vals))[0]
        raise BlowUpError(f"non-finite sample at {tuple(bad)}", index=tuple(int(i) for i in bad))


def sample(grid: GridSpec, fn: Callable[[np.ndarray], np.ndarray]) -> ComplexField:
    """Evaluate ``fn(zeta)`` on the grid."""
    return ComplexField(grid, np.broadcast_to(fn(grid.zeta()), grid.shape))


# --- stencils -------------------------------------------------------------
# Interior stencils are stored as half-weights c_k (k = 1..w) applied to
# symmetric differences/sums, so that reflected input gives exactly reflected
# output. Edge rows are one-sided, applied in a fixed order from the boundary.

_STENCILS = {
    # (order, derivative): (scale, centre weight, half weights, edge rows)
    (2, 1): (2.0, 0.0, [1.0], [[-3.0, 4.0, -1.0]]),
    (2, 2): (1.0, -2.0, [1.0], [[2.0, -5.0, 4.0, -1.0]]),
    (4, 1): (12.0, 0.0, [8.0, -1.0], [[-25.0, 48.0, -36.0, 16.0, -3.0],
                                      [-3.0, -10.0, 18.0, -6.0, 1.0]]),
    (4, 2): (12.0, -30.0, [16.0, -1.0], [[45.0, -154.0, 214.0, -156.0, 61.0, -10.0],
                                         [10.0, -15.0, -4.0, 14.0, -6.0, 1.0]]),
}


def diff(values: np.ndarray, h: float, axis: int = 0, deriv: int = 1, order: int = 2,
         periodic: bool = False) -> np.ndarray:
    """Finite-difference derivative of ``values`` along ``axis``.

    Central stencils in the interior, one-sided stencils of the same order
    at the two edges (or wrap-around when ``periodic``).
    """
    try:
        scale, c0, half, edges = _STENCILS[(order, deriv)]
    except KeyError:
        raise ValueError(f"no stencil for order={order}, deriv={deriv}") from None
    f = np.moveaxis(np.asarray(values), axis, 0)
    n = f.shape[0]
    w = len(half)
    need = 2 * w + 1 if periodic else len(edges[0])
    if n < need:
        raise DimensionError(f"need at least {need} samples along axis {axis} for this stencil, got {n}")
    sign = -1.0 if deriv % 2 else 1.0
    out = np.empty(f.shape, dtype=np.result_type(f, float))
    # every stencil annihilates constants; writing it on differences makes
    # that exact in floating point too
    if periodic:
        acc = np.zeros(f.shape, dtype=out.dtype)
        for k, c in enumerate(half, start=1):
            fp, fm = np.roll(f, -k, axis=0), np.roll(f, k, axis=0)
            acc = acc + c * ((fp - f) - (fm - f) if deriv % 2 else (fp - f) + (fm - f))
        out[...] = acc
    else:
        fc = f[w:n - w]
        acc = np.zeros(fc.shape, dtype=out.dtype)
        for k, c in enumerate(half, start=1):
            fp, fm = f[w + k:n - w + k], f[w - k:n - w - k]
            acc = acc + c * ((fp - fc) - (fm - fc) if deriv % 2 else (fp - fc) + (fm - fc))
        out[w:n - w] = acc
        for r, row in enumerate(edges):
            left = row[1] * (f[1] - f[0])
            right = row[1] * (f[n - 2] - f[n - 1])
            for j in range(2, len(row)):
                left = left + row[j] * (f[j] - f[0])
                right = right + row[j] * (f[n - 1 - j] - f[n - 1])
            out[r] = left
            out[n - 1 - r] = sign * right
    out /= scale * h ** deriv
    return np.moveaxis(out, 0, axis)


def d_u(values: np.ndarray, grid: GridSpec, order: int = 2) -> np.ndarray:
    return diff(values, grid.h_u, axis=0, order=order, periodic=grid.periodic)


def d_v(values: np.ndarray, grid: GridSpec, order: int = 2) -> np.ndarray:
    return diff(values, grid.h_v, axis=1, order=order)


def d_uu(values: np.ndarray, grid: GridSpec, order: int = 2) -> np.ndarray:
    return diff(values, grid.h_u, axis=0, deriv=2, order=order, periodic=grid.periodic)


def d_vv(values: np.ndarray, grid: GridSpec, order: int = 2) -> np.ndarray:
    return diff(values, grid.h_v, axis=1, deriv=2, order=order)


def _uv_parts(f: ComplexField, f_v):
    vals = f.values
    fu = d_u(vals, f.grid)
    if f_v is not None:
        fv = np.broadcast_to(np.asarray(f_v, dtype=complex), vals.shape)
    elif f.grid.n_v >= 3:
        fv = d_v(vals, f.grid)
    else:
        raise DimensionError("v-derivative needs n_v >= 3 or an explicit f_v row")
    return fu, fv


def d_zeta(f: ComplexField, f_v: np.ndarray | None = None) -> ComplexField:
    """Wirtinger derivative ½(∂u − i∂v).

    ``f_v`` supplies the v-derivative explicitly, which is required on
    single-row grids.
    """
    fu, fv = _uv_parts(f, f_v)
    return ComplexField(f.grid, 0.5 * (fu - 1j * fv))


def d_zetabar(f: ComplexField, f_v: np.ndarray | None = None) -> ComplexField:
    """Wirtinger derivative ½(∂u + i∂v)."""
    fu, fv = _uv_parts(f, f_v)
    return ComplexField(f.grid, 0.5 * (fu + 1j * fv))


def _cumtrapz_from(y: np.ndarray, h: float, i0: int) -> np.ndarray:
    """Cumulative trapezoid along axis 0, zero at index ``i0``."""
    out = np.zeros(y.shape, dtype=float)
    inc = 0.5 * h * (y[1:] + y[:-1])
    out[i0 + 1:] = np.cumsum(inc[i0:], axis=0)
    if i0 > 0:
        out[:i0] = -np.cumsum(inc[:i0][::-1], axis=0)[::-1]
    return out


def cumulative_real_integral(f: ComplexField, anchor: tuple[int, int] | None = None,
                             path: str = "uv") -> RealField:
    """``F(p) = Re ∫ f dζ`` from ``anchor`` to every grid point.

    The default path runs along the anchor row in u and then along each
    column in v; ``path="vu"`` takes the legs in the opposite order.
    Trapezoid rule on each leg.
    """
    grid = f.grid
    i0, j0 = grid.mid if anchor is None else anchor
    if not (0 <= i0 < grid.n_u and 0 <= j0 < grid.n_v):
        raise IndexError(f"anchor {(i0, j0)} outside grid of shape {grid.shape}")
    ure = f.values.real          # Re(f du)
    vre = -f.values.imag         # Re(f i dv)
    if path == "uv":
        row = _cumtrapz_from(ure[:, j0], grid.h_u, i0)
        if grid.n_v == 1:
            return RealField(grid, row[:, None])
        cols = _cumtrapz_from(vre.T, grid.h_v, j0).T
        return RealField(grid, row[:, None] + cols)
    if path == "vu":
        if grid.n_v == 1:
            return cumulative_real_integral(f, (i0, j0), "uv")
        col = _cumtrapz_from(vre[i0, :], grid.h_v, j0)
        rows = _cumtrapz_from(ure, grid.h_u, i0)
        return RealField(grid, col[None, :] + rows)
    raise ValueError(f"unknown path {path!r}")


def rk4_march(state: Sequence[np.ndarray], rhs: Callable[[Sequence[np.ndarray]], Sequence[np.ndarray]],
              h: float) -> tuple[np.ndarray, ...]:
    """One classical fourth-order Runge-Kutta step of size ``h``."""
    def _eval(s):
        out = tuple(np.asarray(r) for r in rhs(s))
        for c, r in enumerate(out):
            if not np.all(np.isfinite(r)):
                bad = np.argwhere(~np.isfinite(np.atleast_1d(r)))[0]
                raise BlowUpError(f"non-finite derivative in component {c} at {tuple(bad)}",
                                  index=(c,) + tuple(int(i) for i in bad))
        return out

    s0 = tuple(np.asarray(x) for x in state)
    k1 = _eval(s0)
    k2 = _eval(tuple(x + 0.5 * h * d for x, d in zip(s0, k1)))
    k3 = _eval(tuple(x + 0.5 * h * d for x, d in zip(s0, k2)))
    k4 = _eval(tuple(x + h * d for x, d in zip(s0, k3)))
    return tuple(x + (h / 6.0) * (a + 2 * b + 2 * c + d)
                 for x, a, b, c, d in zip(s0, k1, k2, k3, k4))
