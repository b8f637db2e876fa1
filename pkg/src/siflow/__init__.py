"""Exact construction and verification of superintegrable geodesic flows on surfaces of revolution."""

from __future__ import annotations

__version__ = "0.1.0"

from .radical import DomainError, RadicalBasis, RadicalElement, RationalFunction
from .symmetric import RootMultiset, sigma, sigma_deflated
from .model import ModelSpec, RootSpec, SpecError, assemble_model, build_coefficients, build_x
from .brackets import poisson, verify_superintegrability, verify_superintegrability_numeric
from .geodesic import PhaseState, Trajectory, convergence_order, integrate
from .families import GlobalExampleSpec, classify_global, curvature, omega_transform

__all__ = [
    "DomainError",
    "RadicalBasis",
    "RadicalElement",
    "RationalFunction",
    "RootMultiset",
    "sigma",
    "sigma_deflated",
    "ModelSpec",
    "RootSpec",
    "SpecError",
    "assemble_model",
    "build_coefficients",
    "build_x",
    "poisson",
    "verify_superintegrability",
    "verify_superintegrability_numeric",
    "PhaseState",
    "Trajectory",
    "convergence_order",
    "integrate",
    "GlobalExampleSpec",
    "classify_global",
    "curvature",
    "omega_transform",
]
