"""Entropy-stable finite-difference solver for the shear shallow water model."""
from .state import ModelParams, prim_to_cons, cons_to_prim, entropy_vars
from .solver import SchemeConfig, SolverAbort, run
from .cases import CASES, get_case

__all__ = [
    "ModelParams", "prim_to_cons", "cons_to_prim", "entropy_vars",
    "SchemeConfig", "SolverAbort", "run", "CASES", "get_case",
]
__version__ = "0.1.0"
