"""Translating solitons and singular minimal surfaces from their Gauss map."""
from .bjorling import BjorlingData, initial_gauss, initial_strip, initial_vderivative, phi_of, validate
from .fields import ComplexField, GridSpec, RealField
from .gauss import DELTA, SIGN, GaussField, normal_from_gauss
from .marcher import MarchConfig, march
from .pipeline import solve_bjorling
from .weierstrass import SurfacePatch, align, integrate_singular, integrate_translator

__all__ = [
    "BjorlingData", "ComplexField", "DELTA", "GaussField", "GridSpec", "MarchConfig", "RealField",
    "SIGN", "SurfacePatch", "align", "initial_gauss", "initial_strip", "initial_vderivative",
    "integrate_singular", "integrate_translator", "march", "normal_from_gauss", "phi_of",
    "solve_bjorling", "validate",
]
