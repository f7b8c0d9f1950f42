"""Exact-arithmetic workbench for trinomial varieties.

Constructs trinomial varieties, decides rigidity, computes the torus grading,
verifies and classifies locally nilpotent derivations and produces a census of
the vanishing-pattern strata together with transport certificates.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .lattice import GradingGroup, smith_normal_form, weight_assignment
from .lnd import (Derivation, check_locally_nilpotent, check_preserves_ideal, classify_type,
                  exponential, homogeneity_degree, search_homogeneous_lnds)
from .orbits import admissible_supports, census, stratum_of_point, transport
from .parsing import format_polynomial, parse_polynomial
from .poly import Polynomial, S, T, VarId, normal_form
from .rigidity import rigidity_verdict
from .variety import TrinomialData, danielewski, example_hypersurface, relations, validate

__all__ = [
    "__version__", "GradingGroup", "smith_normal_form", "weight_assignment", "Derivation",
    "check_locally_nilpotent", "check_preserves_ideal", "classify_type", "exponential",
    "homogeneity_degree", "search_homogeneous_lnds", "admissible_supports", "census",
    "stratum_of_point", "transport", "format_polynomial", "parse_polynomial", "Polynomial",
    "S", "T", "VarId", "normal_form", "rigidity_verdict", "TrinomialData", "danielewski",
    "example_hypersurface", "relations", "validate",
]
