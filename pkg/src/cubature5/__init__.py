"""Fifth-degree cubature formulas with few points.

Rules are built from Mysovskikh's degree-5 sphere formula, scaled and
corrected by a one-dimensional moment problem per axis.
"""

from cubature5.bounds import BoundReport, bound_report, dim_poly_space, moller_bound
from cubature5.constructor import (
    ConstructionError,
    CubatureRule,
    OutsideRegionWarning,
    build_degree3_rule,
    build_product_rule,
    build_rule,
    build_spherical_rule,
    select_gamma,
)
from cubature5.moments import MeasureKind, MeasureSpec, MomentOracle, surface_monomial_integral
from cubature5.polyparse import ParseError, Polynomial, parse
from cubature5.sphere_rule import SphereRule, mysovskikh_nodes, mysovskikh_rule, mysovskikh_weights
from cubature5.verify import VerificationReport, apply_rule, brute_force_integral, exactness_sweep

__all__ = [
    "BoundReport",
    "ConstructionError",
    "CubatureRule",
    "MeasureKind",
    "MeasureSpec",
    "MomentOracle",
    "OutsideRegionWarning",
    "ParseError",
    "Polynomial",
    "SphereRule",
    "VerificationReport",
    "apply_rule",
    "bound_report",
    "brute_force_integral",
    "build_degree3_rule",
    "build_product_rule",
    "build_rule",
    "build_spherical_rule",
    "dim_poly_space",
    "exactness_sweep",
    "moller_bound",
    "mysovskikh_nodes",
    "mysovskikh_rule",
    "mysovskikh_weights",
    "parse",
    "select_gamma",
    "surface_monomial_integral",
]
