"""Björling data (curve β, unit normal V along it, class parameter k) and the
Cauchy data G(u,0), G_v(u,0) they determine."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DegeneracyError, PreconditionError, ValidationError
from .fields import diff
from .gauss import DELTA

TOL = 1e-10


def _fd4_weights(z, x):
    """First-derivative weights at z from nodes x (Fornberg's recursion)."""
    n = len(x)
    c = np.zeros((n, 2))
    c1, c4 = 1.0, x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, 1)
        c2, c5, c4 = 1.0, c4, x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, 1]


def differentiate_curve(u: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """Fourth-order finite-difference β′ on (possibly non-uniform) samples."""
    n = len(u)
    if n < 5:
        raise PreconditionError("need at least 5 samples to difference β")
    out = np.empty_like(beta, dtype=float)
    for i in range(n):
        lo = min(max(i - 2, 0), n - 5)
        w = _fd4_weights(u[i], u[lo:lo + 5])
        out[i] = w @ beta[lo:lo + 5]
    return out


@dataclass
class BjorlingData:
    u: np.ndarray
    beta: np.ndarray
    V: np.ndarray
    k: float
    beta_prime: np.ndarray | None = None

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.beta = np.asarray(self.beta, dtype=float)
        self.V = np.asarray(self.V, dtype=float)
        self.k = float(self.k)
        if self.beta_prime is not None:
            self.beta_prime = np.asarray(self.beta_prime, dtype=float)

    @property
    def tangent(self) -> np.ndarray:
        """β′, supplied or differenced."""
        if self.beta_prime is not None:
            return self.beta_prime
        return differentiate_curve(self.u, self.beta)

    @property
    def mid(self) -> int:
        return (len(self.u) - 1) // 2

    # JSON: {"k", "u", "beta", "beta_prime"?, "V"}
    def to_json(self) -> dict:
        out = {"k": self.k, "u": self.u.tolist(), "beta": self.beta.tolist(), "V": self.V.tolist()}
        if self.beta_prime is not None:
            out["beta_prime"] = self.beta_prime.tolist()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "BjorlingData":
        try:
            return cls(u=obj["u"], beta=obj["beta"], V=obj["V"], k=obj["k"],
                       beta_prime=obj.get("beta_prime"))
        except KeyError as exc:
            raise ValidationError("schema", f"missing key {exc.args[0]!r}") from None


def load_bjorling(path) -> BjorlingData:
    with open(path) as fh:
        return BjorlingData.from_json(json.load(fh))


def dump_bjorling(data: BjorlingData, path) -> None:
    Path(path).write_text(json.dumps(data.to_json(), indent=1))


@dataclass(frozen=True)
class PhiData:
    phi: np.ndarray = field(repr=False)

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=complex)
        null = np.abs(np.sum(phi * phi, axis=-1))
        if np.any(null > TOL * np.maximum(1.0, np.sum(np.abs(phi) ** 2, axis=-1))):
            raise ValidationError("null_condition", "φ1² + φ2² + φ3² != 0", int(np.argmax(null)))
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class InitialStrip:
    G0: np.ndarray
    Gv0: np.ndarray
    Gzb0: np.ndarray | None = None

    def __post_init__(self):
        for name in ("G0", "Gv0"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if not np.all(np.isfinite(arr)):
                raise PreconditionError(f"{name} has non-finite samples")
            object.__setattr__(self, name, arr)
        if np.max(np.abs(self.G0)) >= 1.0:
            raise DegeneracyError("initial |G| must stay below 1", index=int(np.argmax(np.abs(self.G0))))


def validate(data: BjorlingData) -> None:
    """Raise ValidationError naming the first violated condition."""
    if data.k == 0:
        raise ValidationError("k_zero", "k = 0 (minimal surfaces in hyperbolic space) is out of scope")
    n = len(data.u)
    if data.beta.shape != (n, 3) or data.V.shape != (n, 3):
        raise ValidationError("shape", f"beta and V must be ({n}, 3) arrays")
    if data.beta_prime is not None and data.beta_prime.shape != (n, 3):
        raise ValidationError("shape", f"beta_prime must be a ({n}, 3) array")
    if n < 5:
        raise ValidationError("shape", "need at least 5 samples")
    for name in ("u", "beta", "V"):
        arr = getattr(data, name)
        if not np.all(np.isfinite(arr)):
            raise ValidationError("non_finite", f"{name} has non-finite entries",
                                  int(np.argwhere(~np.isfinite(arr))[0][0]))
    du = np.diff(data.u)
    if np.any(du <= 0):
        raise ValidationError("u_not_increasing", "u samples must increase strictly", int(np.argmax(du <= 0)))

    norm = np.linalg.norm(data.V, axis=1)
    bad = np.abs(norm - 1.0) > TOL
    if bad.any():
        i = int(np.argmax(bad))
        raise ValidationError("non_unit_normal", f"|V| = {norm[i]:.12g}", i)

    bp = data.tangent
    speed = np.linalg.norm(bp, axis=1)
    bad = ~(speed > 1e-12)
    if bad.any():
        raise ValidationError("degenerate_tangent", "|β′| = 0", int(np.argmax(bad)))

    dot = np.abs(np.einsum("ij,ij->i", bp, data.V)) / speed
    bad = dot > TOL
    if bad.any():
        i = int(np.argmax(bad))
        raise ValidationError("non_orthogonal", f"<β′, V>/|β′| = {dot[i]:.3g}", i)

    bad = ~(data.V[:, 2] > 0)
    if bad.any():
        raise ValidationError("normal_not_upward", "V3 <= 0, i.e. |Π∘V| >= 1", int(np.argmax(bad)))

    if data.k != 1:
        bad = ~(data.beta[:, 2] > 0)
        if bad.any():
            raise ValidationError("curve_not_above_plane", "β3 <= 0 with k != 1", int(np.argmax(bad)))


def phi_of(data: BjorlingData) -> PhiData:
    """φ = ½(β′ − i β′ ∧ V)."""
    bp = data.tangent
    return PhiData(0.5 * (bp - 1j * np.cross(bp, data.V)))


def initial_gauss(phi: PhiData) -> np.ndarray:
    """G(u,0) from φ, using whichever of the two equivalent quotients

        φ3 / (φ1 − iφ2)    and    −(φ1 + iφ2) / φ3

    has the larger denominator at each sample.
    """
    p = phi.phi
    den_a = p[..., 0] - 1j * p[..., 1]
    den_b = p[..., 2]
    use_a = np.abs(den_a) >= np.abs(den_b)
    if np.any(np.maximum(np.abs(den_a), np.abs(den_b)) <= 1e-14):
        i = int(np.argmax(np.maximum(np.abs(den_a), np.abs(den_b)) <= 1e-14))
        raise ValidationError("degenerate_phi", "both quotient denominators vanish", i)
    with np.errstate(divide="ignore", invalid="ignore"):
        ga = p[..., 2] / den_a
        gb = -(p[..., 0] + 1j * p[..., 1]) / den_b
    return np.where(use_a, ga, gb)


def initial_zetabar(phi: PhiData, G0: np.ndarray, data: BjorlingData) -> np.ndarray:
    """G_ζ̄(u,0): (1−|G|⁴)/4 (φ̄1 + iφ̄2) for k = 1 and
    (1−|G|⁴)/(2(k−1)β3) (φ̄1 + iφ̄2) otherwise."""
    k = data.k
    if k == 0:
        raise ValidationError("k_zero", "k = 0 is out of scope")
    G0 = np.asarray(G0, dtype=complex)
    if np.any(1.0 - np.abs(G0) < DELTA):
        raise DegeneracyError("|G(u,0)| too close to 1", index=int(np.argmax(np.abs(G0))))
    p = phi.phi
    s = np.conj(p[..., 0]) + 1j * np.conj(p[..., 1])
    fac = 1.0 - np.abs(G0) ** 4
    if k == 1:
        return fac / 4.0 * s
    return fac / (2.0 * (k - 1.0) * data.beta[:, 2]) * s


def initial_vderivative(phi: PhiData, G0: np.ndarray, data: BjorlingData,
                        periodic: bool = False, order: int = 4) -> np.ndarray:
    """G_v(u,0) = −i(2 G_ζ̄(u,0) − G_u(u,0)), G_u by differencing G0.

    The u-samples must be uniform. With ``periodic`` the samples are one
    period without the closing endpoint.
    """
    u = data.u
    if len(u) != len(G0):
        raise PreconditionError("G0 and data have different lengths")
    h = (u[-1] - u[0]) / (len(u) - 1)
    if not periodic and np.max(np.abs(np.diff(u) - h)) > 1e-9 * max(1.0, abs(h)):
        raise PreconditionError("u samples must be uniform")
    Gzb = initial_zetabar(phi, G0, data)
    Gu = diff(np.asarray(G0, dtype=complex), h, order=order, periodic=periodic)
    return -1j * (2.0 * Gzb - Gu)


def is_closed(data: BjorlingData, tol: float = TOL) -> bool:
    """True when the last sample repeats the first (one closed period)."""
    return bool(np.max(np.abs(data.beta[-1] - data.beta[0])) <= tol
                and np.max(np.abs(data.V[-1] - data.V[0])) <= tol)


def initial_strip(data: BjorlingData, periodic: bool = False) -> InitialStrip:
    """validate → φ → G(u,0) → G_v(u,0).

    For ``periodic`` data the last sample closes the period and is dropped.
    """
    validate(data)
    if periodic:
        if not is_closed(data):
            raise PreconditionError("periodic data must repeat its first sample at the end")
        h = (data.u[-1] - data.u[0]) / (len(data.u) - 1)
        if np.max(np.abs(np.diff(data.u) - h)) > 1e-9 * max(1.0, abs(h)):
            raise PreconditionError("u samples must be uniform")
        data = BjorlingData(data.u[:-1], data.beta[:-1], data.V[:-1], data.k,
                            None if data.beta_prime is None else data.beta_prime[:-1])
        phi = phi_of(data)
        G0 = initial_gauss(phi)
        Gzb = initial_zetabar(phi, G0, data)
        Gu = diff(G0, h, order=4, periodic=True)
        return InitialStrip(G0, -1j * (2.0 * Gzb - Gu), Gzb)
    phi = phi_of(data)
    G0 = initial_gauss(phi)
    Gzb = initial_zetabar(phi, G0, data)
    return InitialStrip(G0, initial_vderivative(phi, G0, data), Gzb)
