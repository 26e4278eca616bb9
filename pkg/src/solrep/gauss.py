"""Pointwise and first-derivative quantities attached to a Gauss map G.

G is the stereographic image (from the south pole) of the Euclidean unit
normal, so ``N(G) = (2G, 1 - |G|^2) / (1 + |G|^2)`` with the first entry
read as ``N1 + i N2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, DimensionError, PreconditionError
from .fields import (ComplexField, GridSpec, RealField, cumulative_real_integral, d_uu, d_vv,
                     d_zeta, d_zetabar)

#: Margin on 1 - |G| below which the Gauss-map equation is treated as degenerate.
DELTA = 1e-6

#: Orientation convention. With the surface normal taken as the normalised
#: ψ_v ∧ ψ_u, the Gauss map produced by the representation formulas satisfies
#: n = normal_from_gauss(G, SIGN). Fixed by the grim-reaper round trip.
SIGN = -1


@dataclass(frozen=True)
class GaussField:
    G: ComplexField
    k: float

    def __post_init__(self):
        if self.k == 0:
            raise PreconditionError("k = 0 (hyperbolic-space case) is not supported")

    @property
    def grid(self) -> GridSpec:
        return self.G.grid

    @property
    def values(self) -> np.ndarray:
        return self.G.values

    @classmethod
    def from_array(cls, grid: GridSpec, values, k: float) -> "GaussField":
        return cls(ComplexField(grid, values), float(k))


@dataclass(frozen=True)
class SolitonClass:
    """Weight φ_k of the weighted area functional and its gradient.

    k = 1: φ(z) = z (translating solitons); otherwise φ(z) = 2/(k-1) log z.
    """

    k: float

    def __post_init__(self):
        if self.k == 0:
            raise PreconditionError("k = 0 is not supported")

    def weight(self, z):
        z = np.asarray(z, dtype=float)
        if self.k == 1:
            return z
        return 2.0 / (self.k - 1.0) * np.log(z)

    def vertical_gradient(self, z):
        """Third component of ∇φ_k (the other two vanish)."""
        z = np.asarray(z, dtype=float)
        if self.k == 1:
            return np.ones_like(z)
        return 2.0 / ((self.k - 1.0) * z)


@dataclass(frozen=True)
class NormalField:
    n: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = np.asarray(self.n, dtype=float)
        if n.shape[-1] != 3:
            raise DimensionError("normals must be 3-vectors")
        if np.any(np.abs(np.linalg.norm(n, axis=-1) - 1.0) > 1e-12):
            raise ValueError("normals are not unit vectors")
        object.__setattr__(self, "n", n)


def check_margin(gf: GaussField, delta: float = DELTA):
    """Raise DegeneracyError where 1 - |G| < delta."""
    gap = 1.0 - np.abs(gf.values)
    if np.any(gap < delta):
        idx = tuple(int(i) for i in np.unravel_index(np.argmin(gap), gap.shape))
        raise DegeneracyError(f"|G| within {delta:g} of 1 at {idx} (|G| = {1 - gap[idx]:.12g})",
                              index=idx)


def _wirtinger(gf: GaussField):
    f = gf.G
    return d_zeta(f).values, d_zetabar(f).values


def pde_residual(gf: GaussField) -> ComplexField:
    """Left-hand side of the Gauss-map equation

        G_ζζ̄ + 2|G|² Ḡ G_ζ G_ζ̄ / (1-|G|⁴) + 2k |G_ζ̄|² G / (1-|G|⁴).
    """
    check_margin(gf)
    G, grid = gf.values, gf.grid
    Gz, Gzb = _wirtinger(gf)
    Gzzb = 0.25 * (d_uu(G, grid) + d_vv(G, grid))
    a2 = np.abs(G) ** 2
    den = 1.0 - a2 ** 2
    res = Gzzb + 2.0 * a2 * np.conj(G) * Gz * Gzb / den + 2.0 * gf.k * np.abs(Gzb) ** 2 * G / den
    return ComplexField(grid, res)


def upsilon(gf: GaussField) -> ComplexField:
    """Υ = G_ζ̄ / (1 - |G|⁴)."""
    check_margin(gf)
    Gzb = d_zetabar(gf.G).values
    return ComplexField(gf.grid, Gzb / (1.0 - np.abs(gf.values) ** 4))


def theta(gf: GaussField) -> ComplexField:
    """Θ = conj(Υ) = Ḡ_ζ / (1 - |G|⁴), the kernel of the representation integrands."""
    return ComplexField(gf.grid, np.conj(upsilon(gf).values))


def stereographic(p) -> np.ndarray:
    """Π(p) = (p1 + i p2) / (1 + p3), projection from (0, 0, -1)."""
    p = np.asarray(p, dtype=float)
    return (p[..., 0] + 1j * p[..., 1]) / (1.0 + p[..., 2])


def normal_from_gauss(G, sign: int = 1) -> NormalField:
    """Unit normal N(sign * G); accepts a GaussField, ComplexField or array."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if isinstance(G, GaussField):
        G = G.values
    elif isinstance(G, ComplexField):
        G = G.values
    g = sign * np.asarray(G, dtype=complex)
    if not np.all(np.isfinite(g)):
        raise ValueError("non-finite Gauss map")
    a2 = np.abs(g) ** 2
    den = 1.0 + a2
    n = np.stack([2.0 * g.real / den, 2.0 * g.imag / den, (1.0 - a2) / den], axis=-1)
    # renormalise away the last-ulp drift of the rational formula
    n /= np.linalg.norm(n, axis=-1, keepdims=True)
    return NormalField(n)


def conformal_factor(gf: GaussField, gamma: RealField | None = None) -> RealField:
    """|ψ_ζ|² implied by G: 8|Υ|²(1+|G|²)², times k²Γ² when k ≠ 1."""
    ups = upsilon(gf).values
    base = 8.0 * np.abs(ups) ** 2 * (1.0 + np.abs(gf.values) ** 2) ** 2
    if gf.k == 1:
        return RealField(gf.grid, base)
    if gamma is None:
        raise ValueError("k != 1 needs the Γ factor")
    g = gamma.values if isinstance(gamma, RealField) else np.asarray(gamma, dtype=float)
    return RealField(gf.grid, gf.k ** 2 * g ** 2 * base)


def representation_integrands(gf: GaussField) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(Θ(1-G²), iΘ(1+G²), ΘG): the three 1-form coefficients integrated by the
    representation formulas."""
    th = theta(gf).values
    G = gf.values
    return th * (1.0 - G * G), 1j * th * (1.0 + G * G), th * G


def gamma_factor(gf: GaussField, anchor=None, path: str = "uv") -> np.ndarray:
    """Γ = exp(4(k-1) Re ∫ ΘG dζ), equal to 1 at the anchor."""
    _, _, f3 = representation_integrands(gf)
    pot = cumulative_real_integral(ComplexField(gf.grid, f3), anchor, path).values
    with np.errstate(over="ignore"):
        return np.exp(4.0 * (gf.k - 1.0) * pot)


def closedness_residual(gf: GaussField, trim: int = 2) -> float:
    """max |Im ∂ζ̄ f| over the representation integrands f.

    Re(f dζ) is closed exactly when Im(f_ζ̄) = 0. For k ≠ 1 the two
    horizontal integrands carry the Γ weight, as they do in the formula.
    The integrands are themselves differences, so the outer ``trim``
    samples on each side (where one-sided stencils are nested) are skipped.
    """
    f1, f2, f3 = representation_integrands(gf)
    if gf.k != 1:
        g = gamma_factor(gf)
        f1, f2 = f1 * g, f2 * g
    n_u, n_v = gf.grid.shape
    iu = slice(0, n_u) if gf.grid.periodic else slice(trim, n_u - trim)
    iv = slice(trim, n_v - trim)
    worst = 0.0
    for f in (f1, f2, f3):
        r = d_zetabar(ComplexField(gf.grid, f)).values.imag[iu, iv]
        if r.size:
            worst = max(worst, float(np.max(np.abs(r))))
    return worst
