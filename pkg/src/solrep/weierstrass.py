"""Surfaces from Gauss maps.

k = 1:  ψ = 4 Re(∫Θ(1-G²)dζ, ∫iΘ(1+G²)dζ, 2∫ΘG dζ)
k ≠ 1:  Γ = exp(4(k-1) Re∫ΘG dζ),
        (x, y) = 4k Re(∫Θ(1-G²)Γ dζ, ∫iΘ(1+G²)Γ dζ),  z = 2k/(k-1) Γ

with Θ = Ḡ_ζ / (1 - |G|⁴). Integrals run from an anchor along grid paths.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .bjorling import BjorlingData
from .errors import AlignmentError, BlowUpError, DimensionError, PreconditionError
from .fields import ComplexField, GridSpec, RealField, cumulative_real_integral
from .gauss import GaussField, check_margin, representation_integrands, upsilon

#: Below this max|Υ| the map is constant and no surface is produced.
IMMERSION_TOL = 1e-12


@dataclass(frozen=True)
class SurfacePatch:
    grid: GridSpec
    positions: np.ndarray = field(repr=False)
    k: float
    anchor: tuple[int, int] = (0, 0)
    immersed: bool = True

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.shape != self.grid.shape + (3,):
            raise DimensionError(f"positions have shape {pos.shape}, expected {self.grid.shape + (3,)}")
        if not np.all(np.isfinite(pos)):
            raise BlowUpError("non-finite surface positions")
        object.__setattr__(self, "positions", pos)

    @property
    def x(self):
        return self.positions[..., 0]

    @property
    def y(self):
        return self.positions[..., 1]

    @property
    def z(self):
        return self.positions[..., 2]

    def transformed(self, R=None, t=None, scale: float = 1.0) -> "SurfacePatch":
        """Patch with positions p -> scale * R p + t."""
        pos = self.positions
        if R is not None:
            pos = pos @ np.asarray(R, dtype=float).T
        pos = scale * pos
        if t is not None:
            pos = pos + np.asarray(t, dtype=float)
        return replace(self, positions=pos)


@dataclass(frozen=True)
class GammaFactor:
    values: RealField

    def __post_init__(self):
        if not np.all(self.values.values > 0):
            raise BlowUpError("Γ must be strictly positive")


def _unwrap(gf: GaussField, fields):
    """Integrands on a periodic grid, extended by the seam column."""
    if not gf.grid.periodic:
        return gf.grid, fields
    grid = gf.grid.unwrapped()
    return grid, [np.concatenate([f, f[:1]], axis=0) for f in fields]


def _immersed(gf: GaussField) -> bool:
    return bool(np.max(np.abs(upsilon(gf).values)) > IMMERSION_TOL)


def _anchor(grid: GridSpec, anchor):
    return grid.mid if anchor is None else tuple(int(a) for a in anchor)


def integrate_translator(gf: GaussField, anchor=None, path: str = "uv") -> SurfacePatch:
    """Translating soliton ψ with ψ(anchor) = 0."""
    if gf.k != 1:
        raise PreconditionError("integrate_translator needs k = 1")
    check_margin(gf)
    grid, (f1, f2, f3) = _unwrap(gf, representation_integrands(gf))
    a = _anchor(grid, anchor)
    comps = [cumulative_real_integral(ComplexField(grid, f), a, path).values for f in (f1, f2, f3)]
    pos = 4.0 * np.stack([comps[0], comps[1], 2.0 * comps[2]], axis=-1)
    return SurfacePatch(grid, pos, 1.0, a, _immersed(gf))


def integrate_singular(gf: GaussField, anchor=None, path: str = "uv") -> tuple[SurfacePatch, GammaFactor]:
    """Singular minimal surface ψ for k ∉ {0, 1} and its Γ factor (Γ = 1 at the anchor)."""
    k = gf.k
    if k in (0, 1):
        raise PreconditionError("integrate_singular needs k not in {0, 1}")
    check_margin(gf)
    grid, (f1, f2, f3) = _unwrap(gf, representation_integrands(gf))
    a = _anchor(grid, anchor)
    pot = cumulative_real_integral(ComplexField(grid, f3), a, path).values
    with np.errstate(over="ignore"):
        gamma = np.exp(4.0 * (k - 1.0) * pot)
    if not np.all(np.isfinite(gamma)) or not np.all(gamma > 0):
        raise BlowUpError("Γ overflowed or underflowed")
    x = 4.0 * k * cumulative_real_integral(ComplexField(grid, f1 * gamma), a, path).values
    y = 4.0 * k * cumulative_real_integral(ComplexField(grid, f2 * gamma), a, path).values
    z = 2.0 * k / (k - 1.0) * gamma
    patch = SurfacePatch(grid, np.stack([x, y, z], axis=-1), k, a, _immersed(gf))
    return patch, GammaFactor(RealField(grid, gamma))


def integrate(gf: GaussField, anchor=None, path: str = "uv") -> tuple[SurfacePatch, GammaFactor | None]:
    """Dispatch on k; the Γ factor is None for translators."""
    if gf.k == 1:
        return integrate_translator(gf, anchor, path), None
    return integrate_singular(gf, anchor, path)


def align(patch: SurfacePatch, data: BjorlingData) -> SurfacePatch:
    """Move the patch onto the data curve at the middle data sample.

    k = 1 uses a translation; k ≠ 1 a homothety about the origin followed by a
    horizontal translation, both of which preserve the equation.
    """
    grid = patch.grid
    if grid.n_u != len(data.u) or np.max(np.abs(grid.u - data.u)) > 1e-9 * max(1.0, grid.period):
        raise AlignmentError("patch u-samples do not match the data")
    i0, j0 = data.mid, (grid.n_v - 1) // 2
    p = patch.positions[i0, j0]
    b = data.beta[i0]
    if patch.k == 1:
        return patch.transformed(t=b - p)
    if p[2] == 0:
        raise AlignmentError("ψ3 vanishes at the alignment sample")
    c0 = b[2] / p[2]
    shift = np.array([b[0] - c0 * p[0], b[1] - c0 * p[1], 0.0])
    return patch.transformed(scale=c0, t=shift)
