"""Discrete checks that a patch solves its equation and behaves as the
representation predicts.

Curvatures come from second-order differences of the positions. The mean
curvature is the trace H = κ1 + κ2 against n = ψ_v ∧ ψ_u / |ψ_v ∧ ψ_u|.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bjorling import BjorlingData
from .errors import DimensionError, DomainError, MetricDegeneracyError, PreconditionError
from .fields import ComplexField, GridSpec, RealField, d_u, d_uu, d_v, d_vv
from .gauss import SIGN, GaussField, NormalField, conformal_factor, normal_from_gauss
from .marcher import MarchConfig
from .weierstrass import GammaFactor, SurfacePatch


@dataclass(frozen=True)
class Residual:
    max: float
    mean: float
    at: tuple[int, int]

    @classmethod
    def of(cls, values: np.ndarray, offset=(0, 0)) -> "Residual":
        a = np.abs(np.asarray(values, dtype=float))
        idx = np.unravel_index(int(np.argmax(a)), a.shape)
        at = tuple(int(i) + int(o) for i, o in zip(idx, offset))
        return cls(float(a.max()), float(a.mean()), at)

    def to_dict(self) -> dict:
        return {"max": self.max, "mean": self.mean, "at": list(self.at)}


@dataclass
class VerificationReport:
    residuals: dict[str, Residual] = field(default_factory=dict)
    tolerances: dict[str, float] = field(default_factory=dict)
    sign_convention: int = SIGN

    def add(self, name: str, residual: Residual, tol: float) -> "VerificationReport":
        self.residuals[name] = residual
        self.tolerances[name] = float(tol)
        return self

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        for name, res in other.residuals.items():
            self.add(name, res, other.tolerances[name])
        return self

    @property
    def passes(self) -> dict[str, bool]:
        return {n: r.max <= self.tolerances[n] for n, r in self.residuals.items()}

    @property
    def passed(self) -> bool:
        return all(self.passes.values())

    def __getitem__(self, name: str) -> Residual:
        return self.residuals[name]

    def to_dict(self) -> dict:
        return {"residuals": {n: r.to_dict() for n, r in self.residuals.items()},
                "sign_convention": int(self.sign_convention),
                "pass": self.passes}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


# --- discrete differential geometry ---------------------------------------

def _frames(patch: SurfacePatch):
    X, g = patch.positions, patch.grid
    if g.n_u < 4 or g.n_v < 4:
        raise DimensionError("curvature needs at least 4 samples in each direction")
    Xu, Xv = d_u(X, g), d_v(X, g)
    return X, g, Xu, Xv


def _unit_normal(Xu, Xv) -> np.ndarray:
    c = np.cross(Xv, Xu)
    norm = np.linalg.norm(c, axis=-1, keepdims=True)
    if np.any(norm <= 0):
        raise MetricDegeneracyError("ψ_u and ψ_v are parallel somewhere")
    return c / norm


def surface_normal(patch: SurfacePatch) -> NormalField:
    """Unit normal ψ_v ∧ ψ_u / |ψ_v ∧ ψ_u| at every sample."""
    _, _, Xu, Xv = _frames(patch)
    return NormalField(_unit_normal(Xu, Xv))


def mean_curvature_field(patch: SurfacePatch) -> tuple[RealField, NormalField]:
    """H on the interior samples (boundary ring dropped) and the normal there."""
    X, g, Xu, Xv = _frames(patch)
    Xuu, Xvv = d_uu(X, g), d_vv(X, g)
    Xuv = d_v(Xu, g)
    s = (slice(1, -1), slice(1, -1))
    Xu, Xv, Xuu, Xuv, Xvv = Xu[s], Xv[s], Xuu[s], Xuv[s], Xvv[s]
    E = np.sum(Xu * Xu, -1)
    F = np.sum(Xu * Xv, -1)
    G = np.sum(Xv * Xv, -1)
    det = E * G - F * F
    if np.any(~(det > 0)):
        i = tuple(int(a) + 1 for a in np.unravel_index(int(np.argmin(det)), det.shape))
        raise MetricDegeneracyError(f"first fundamental form degenerate at {i}")
    n = _unit_normal(Xu, Xv)
    e = np.sum(Xuu * n, -1)
    f = np.sum(Xuv * n, -1)
    gg = np.sum(Xvv * n, -1)
    H = (e * G - 2.0 * f * F + gg * E) / det
    return RealField(g.interior(), H), NormalField(n)


def weight_gradient(k: float, z: np.ndarray) -> np.ndarray:
    """Vertical component of the weight gradient: 1, or 2/((k-1) z)."""
    if k == 1:
        return np.ones_like(z)
    return 2.0 / ((k - 1.0) * z)


def soliton_residual(patch: SurfacePatch, k: float | None = None, tol: float = 1e-3) -> VerificationReport:
    """max |H - σ ⟨∇φ_k, n⟩| over the interior, minimised over σ = ±1.

    The winning σ is stored as the report's sign convention.
    """
    k = patch.k if k is None else float(k)
    if k == 0:
        raise PreconditionError("k = 0 is not supported")
    if k != 1 and not np.min(patch.z) > 0:
        raise DomainError("the weight log z needs z > 0 on the whole patch")
    H, n = mean_curvature_field(patch)
    z = patch.z[1:-1, 1:-1]
    rhs = weight_gradient(k, z) * n.n[..., 2]
    best = None
    for sigma in (1, -1):
        res = Residual.of(H.values - sigma * rhs, offset=(1, 1))
        if best is None or res.max < best[1].max:
            best = (sigma, res)
    return VerificationReport(sign_convention=best[0]).add("soliton", best[1], tol)


def _match_gauss(patch: SurfacePatch, gf: GaussField) -> np.ndarray:
    G = gf.values
    if gf.grid.periodic and patch.grid.n_u == gf.grid.n_u + 1:
        G = np.concatenate([G, G[:1]], axis=0)
    if G.shape != patch.grid.shape:
        raise DimensionError(f"patch grid {patch.grid.shape} and Gauss field {G.shape} differ")
    return G


def gauss_consistency(patch: SurfacePatch, gf: GaussField, tol: float = 1e-3,
                      sign: int = SIGN) -> VerificationReport:
    """Angle (radians) between the discrete normal and N(σG)."""
    G = _match_gauss(patch, gf)
    n = surface_normal(patch).n
    N = normal_from_gauss(G, sign).n
    ang = np.arccos(np.clip(np.sum(n * N, -1), -1.0, 1.0))
    return VerificationReport(sign_convention=sign).add("gauss_angle", Residual.of(ang), tol)


#: Boundary rings skipped by first-order metric checks. Integrated patches
#: carry one-sided integrand errors on their outer ring, which a second
#: difference turns into an O(h) artefact one ring further in.
TRIM = 2


def conformality(patch: SurfacePatch, tol: float = 1e-4, trim: int = TRIM) -> VerificationReport:
    """|⟨ψ_u,ψ_v⟩|/|ψ_u|² and ||ψ_u|² - |ψ_v|²|/|ψ_u|² away from the edges."""
    _, _, Xu, Xv = _frames(patch)
    s = (slice(trim, -trim), slice(trim, -trim))
    E = np.sum(Xu * Xu, -1)[s]
    F = np.sum(Xu * Xv, -1)[s]
    G = np.sum(Xv * Xv, -1)[s]
    if np.any(~(E > 0)):
        raise MetricDegeneracyError("ψ_u vanishes somewhere")
    rep = VerificationReport()
    rep.add("orthogonality", Residual.of(F / E, (trim, trim)), tol)
    rep.add("isotropy", Residual.of((E - G) / E, (trim, trim)), tol)
    return rep


def conformal_factor_check(patch: SurfacePatch, gf: GaussField, gamma: GammaFactor | None = None,
                           tol: float = 1e-2, trim: int = TRIM) -> VerificationReport:
    """Relative gap between ¼(|ψ_u|² + |ψ_v|²) and the factor predicted by G."""
    _, _, Xu, Xv = _frames(patch)
    measured = 0.25 * (np.sum(Xu * Xu, -1) + np.sum(Xv * Xv, -1))
    G = _match_gauss(patch, gf)
    gfm = GaussField.from_array(patch.grid, G, gf.k) if G is not gf.values else gf
    g = None if gamma is None else gamma.values.values
    predicted = conformal_factor(gfm, g).values
    s = (slice(trim, -trim), slice(trim, -trim))
    rel = (measured[s] - predicted[s]) / predicted[s]
    return VerificationReport().add("conformal_factor", Residual.of(rel, (trim, trim)), tol)


# --- rigid comparisons ----------------------------------------------------

REFLECT_Y = np.diag([1.0, -1.0, 1.0])


def rigid_gap(patch: np.ndarray | SurfacePatch, reference: np.ndarray | SurfacePatch,
              k: float = 1.0, allow_reflection: bool = True) -> float:
    """max |R p + t - q| over motions fixing e3 that the comparison allows.

    R ranges over the identity and, if allowed, the reflection y -> -y; t is
    the mean offset (horizontal only when k ≠ 1).
    """
    P = patch.positions if isinstance(patch, SurfacePatch) else np.asarray(patch, dtype=float)
    Q = reference.positions if isinstance(reference, SurfacePatch) else np.asarray(reference, dtype=float)
    if P.shape != Q.shape:
        raise DimensionError("position arrays differ in shape")
    best = math.inf
    for R in ([np.eye(3), REFLECT_Y] if allow_reflection else [np.eye(3)]):
        RP = P @ R.T
        t = np.mean((Q - RP).reshape(-1, 3), axis=0)
        if k != 1:
            t[2] = 0.0
        best = min(best, float(np.max(np.linalg.norm(RP + t - Q, axis=-1))))
    return best


# --- structural corollaries -----------------------------------------------

@dataclass(frozen=True)
class Isometry:
    """p -> R p + t with R e3 = e3."""

    R: np.ndarray
    t: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        R = np.asarray(self.R, dtype=float)
        t = np.asarray(self.t, dtype=float)
        if R.shape != (3, 3) or np.max(np.abs(R.T @ R - np.eye(3))) > 1e-12:
            raise PreconditionError("R must be orthogonal")
        if np.max(np.abs(R[:, 2] - [0, 0, 1])) > 1e-12:
            raise PreconditionError("the isometry must fix the vertical direction")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "t", t)

    def __call__(self, p):
        return np.asarray(p) @ self.R.T + self.t

    @property
    def det(self) -> int:
        return int(round(np.linalg.det(self.R)))

    @classmethod
    def reflect_x(cls):
        return cls(np.diag([-1.0, 1.0, 1.0]))

    @classmethod
    def rotate_z(cls, quarter_turns: int):
        c, s = [(1, 0), (0, 1), (-1, 0), (0, -1)][quarter_turns % 4]
        return cls(np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=float))


def transform_data(data: BjorlingData, iso: Isometry, perm: np.ndarray, orientation: int) -> BjorlingData:
    """Data (R β∘p + t, R V∘p) with β′ following the chain rule."""
    bp = None if data.beta_prime is None else orientation * (data.beta_prime[perm] @ iso.R.T)
    return BjorlingData(data.u, iso(data.beta[perm]), data.V[perm] @ iso.R.T, data.k, bp)


def symmetry_check(data: BjorlingData, iso: Isometry, perm: Sequence[int], orientation: int = 1,
                   cfg: MarchConfig | None = None, periodic: bool = False,
                   tol: float = 1e-8) -> VerificationReport:
    """Solve for the data and for its image under ``iso``; report the gap
    between the second surface and the image of the first.

    ``perm`` maps data sample i to the sample whose image lands on it, and
    ``orientation`` says whether that reparametrisation keeps (+1) or
    reverses (-1) the direction of u.
    """
    from .pipeline import solve_bjorling

    perm = np.asarray(perm, dtype=int)
    if perm.shape != data.u.shape:
        raise PreconditionError("perm must have one entry per data sample")
    if data.k != 1 and abs(iso.t[2]) > 0:
        raise PreconditionError("for k != 1 the isometry must fix the plane z = 0")
    image = transform_data(data, iso, perm, orientation)
    gap_b = np.max(np.abs(image.beta - data.beta))
    gap_v = np.max(np.abs(image.V - data.V))
    if max(gap_b, gap_v) > 1e-10:
        raise PreconditionError(f"isometry does not preserve the data (gap {max(gap_b, gap_v):.3g})")

    first = solve_bjorling(data, cfg, periodic).patch.positions
    second = solve_bjorling(image, cfg, periodic).patch.positions
    # ψ₂(u, v) = R ψ₁(p(u), τ v) + t with τ = orientation · det R
    tau = orientation * iso.det
    mapped = iso(first[perm])
    if tau < 0:
        mapped = mapped[:, ::-1]
    diff = second - mapped
    i0, j0 = data.mid, (diff.shape[1] - 1) // 2
    diff = diff - diff[i0, j0]
    return VerificationReport().add("symmetry", Residual.of(np.linalg.norm(diff, axis=-1)), tol)


def is_periodic_data(data: BjorlingData, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(data.beta[-1] - data.beta[0])) <= tol
                and np.max(np.abs(data.V[-1] - data.V[0])) <= tol)


def periodicity_check(data: BjorlingData, cfg: MarchConfig | None = None, tol: float = 1e-5,
                      require_periodic: bool = True) -> VerificationReport:
    """Seam gap max_v |ψ(u0 + T, v) - ψ(u0, v)| of the pipeline surface.

    Data must close up over its sample range. With ``require_periodic=False``
    non-closing data is marched on the open interval instead, which is how the
    detuned negative control is measured.
    """
    from .bjorling import validate
    from .pipeline import solve_bjorling

    validate(data)
    closed = is_periodic_data(data)
    if require_periodic and not closed:
        raise PreconditionError("data is not periodic over its sample range")
    sol = solve_bjorling(data, cfg, periodic=closed)
    P = sol.patch.positions
    gap = np.linalg.norm(P[-1] - P[0], axis=-1)
    return VerificationReport().add("seam", Residual.of(gap[None, :]), tol)


# --- convergence ----------------------------------------------------------

def _grim_reaper_case(n_u: int, n_v: int) -> tuple[float, float]:
    from .families import grim_reaper_data, grim_reaper_patch
    from .pipeline import solve_bjorling

    data = grim_reaper_data(np.linspace(-1.0, 1.0, n_u))
    sol = solve_bjorling(data, MarchConfig(epsilon=0.2, n_v=n_v))
    err = rigid_gap(sol.patch, grim_reaper_patch(sol.patch.grid), 1.0)
    return 2.0 / (n_u - 1), err


def _constant_case(n_u: int, n_v: int) -> tuple[float, float]:
    from .bjorling import InitialStrip
    from .marcher import march

    grid = GridSpec(-1.0, 1.0, n_u)
    G0 = np.full(n_u, 0.3 + 0.1j)
    gf = march(InitialStrip(G0, np.zeros(n_u)), 1.0, grid, MarchConfig(epsilon=0.2, n_v=n_v))
    return 2.0 / (n_u - 1), float(np.max(np.abs(gf.values - G0[0])))


CASES: dict[str, Callable[[int, int], tuple[float, float]]] = {
    "grim-reaper": _grim_reaper_case,
    "constant": _constant_case,
}

DEFAULT_LADDER = ((101, 11), (201, 21), (401, 41))

#: Errors below this are round-off; no order is reported for them.
ROUNDOFF = 1e-10


def order_from_errors(hs: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(h)."""
    hs, errors = np.asarray(hs, dtype=float), np.asarray(errors, dtype=float)
    if len(hs) < 3:
        raise ValueError("need at least 3 grids")
    if np.any(errors <= ROUNDOFF):
        return math.nan
    return float(np.polyfit(np.log(hs), np.log(errors), 1)[0])


def convergence_order(case: str | Callable[[int, int], tuple[float, float]],
                      grids: Sequence[tuple[int, int]] = DEFAULT_LADDER) -> tuple[float, list[tuple[float, float]]]:
    """Observed order over a refinement ladder and the (h, error) pairs.

    ``case`` is a registered name or a callable (n_u, n_v) -> (h, error).
    """
    if len(grids) < 3:
        raise ValueError("need at least 3 grids")
    fn = CASES[case] if isinstance(case, str) else case
    pts = [fn(int(nu), int(nv)) for nu, nv in grids]
    return order_from_errors([p[0] for p in pts], [p[1] for p in pts]), pts
