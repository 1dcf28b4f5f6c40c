"""Exact subdifferential and Lipschitz-modulus analysis for linear
multiobjective programs perturbed on the right-hand side.

The package computes, entirely in exact rational arithmetic:

* epigraphical feasible-set systems through symbolic directional
  eliminations (``polyhedra``);
* nondominance tests and Pareto-front membership (``pareto``);
* subdifferentials of the feasible-set and Pareto-front mappings and the
  Lipschitz moduli of their epigraphical versions (``sensitivity``);
* the single-objective optimal value function as a max of affine pieces,
  obtained without solving for any optimal point;
* definition-level Monte-Carlo oracles validating every closed form
  (``verify``).
"""

from .core import (AffineForm, NormSpec, Problem, Row, SymbolicSystem,
                   dual_norm_value, norm_value, parse_problem,
                   problem_to_text)
from .errors import DomainError
from .rational import ExactSqrt, Q

__all__ = [
    "AffineForm", "DomainError", "ExactSqrt", "NormSpec", "Problem", "Q",
    "Row", "SymbolicSystem", "dual_norm_value", "norm_value",
    "parse_problem", "problem_to_text",
]

__version__ = "0.1.0"
