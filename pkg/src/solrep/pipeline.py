"""Björling data in, aligned surface patch out."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bjorling import BjorlingData, InitialStrip, initial_strip
from .errors import PreconditionError
from .fields import GridSpec
from .gauss import GaussField
from .marcher import MarchConfig, march
from .weierstrass import GammaFactor, SurfacePatch, align, integrate


@dataclass(frozen=True)
class BjorlingSolution:
    data: BjorlingData
    strip: InitialStrip
    gauss: GaussField
    raw: SurfacePatch
    gamma: GammaFactor | None
    patch: SurfacePatch


def data_grid(data: BjorlingData, periodic: bool = False) -> GridSpec:
    """u-grid of the data; periodic grids drop the closing sample."""
    u = data.u
    n = len(u)
    h = (u[-1] - u[0]) / (n - 1)
    if np.max(np.abs(np.diff(u) - h)) > 1e-9 * max(1.0, abs(h)):
        raise PreconditionError("the pipeline needs uniformly spaced u samples")
    if periodic:
        return GridSpec(float(u[0]), float(u[-1]), n - 1, periodic=True)
    return GridSpec(float(u[0]), float(u[-1]), n)


def default_config(data: BjorlingData) -> MarchConfig:
    """ε = 0.1 of the data interval."""
    return MarchConfig(epsilon=0.1 * float(data.u[-1] - data.u[0]))


def solve_bjorling(data: BjorlingData, cfg: MarchConfig | None = None,
                   periodic: bool = False) -> BjorlingSolution:
    """validate → φ → G(u,0), G_v(u,0) → march → integrate → align."""
    cfg = default_config(data) if cfg is None else cfg
    strip = initial_strip(data, periodic=periodic)
    grid = data_grid(data, periodic)
    gf = march(strip, data.k, grid, cfg)
    raw, gamma = integrate(gf)
    return BjorlingSolution(data, strip, gf, raw, gamma, align(raw, data))
