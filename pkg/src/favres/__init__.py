"""Favorable resolutions of automorphic sheaves on Hilbert modular varieties, modeled combinatorially."""

from .complexes import AdmissibleComplex, AdmissibleHom, ComplexMorphism, check_d_squared
from .kernels import BACKEND
from .resolution import (
    ResolutionPlan,
    connect_resolutions,
    favorable_resolution,
    koszul_stratum_resolution,
    lower_dim_resolution,
)
from .terms import Term, is_favorable
from .weight_lattice import ExponentSearchExhausted, Params, Weight

__version__ = "0.1.0"

__all__ = [
    "AdmissibleComplex",
    "AdmissibleHom",
    "BACKEND",
    "ComplexMorphism",
    "ExponentSearchExhausted",
    "Params",
    "ResolutionPlan",
    "Term",
    "Weight",
    "check_d_squared",
    "connect_resolutions",
    "favorable_resolution",
    "is_favorable",
    "koszul_stratum_resolution",
    "lower_dim_resolution",
]
