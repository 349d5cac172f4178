"""Exact computations with polynomial automorphisms of affine space."""

from .casestudy import PoloniMoserReport, run_poloni_moser
from .classify import (ClassificationReport, NormalForm, classify_plane, diag_invariant_monomials,
                       invariant_basis, recognize_normal_form)
from .endo import (PolyMap, affine, compose, conjugate, elementary, invert, is_unipotent,
                   iterate_degrees, jacobian_at, order_up_to, permutation, verify_conjugacy)
from .errors import BudgetExceeded, InputError, InvariantViolation, PolyAutoError
from .ideal import (GroebnerBasis, Ideal, buchberger, fixpoint_ideal, ideals_equal,
                    radical_member, reduce, unique_fixpoint)
from .lnd import (Derivation, ParametricMap, exp_flow, flow_law_additive, interpolate_powers,
                  is_locally_nilpotent, log_unipotent, psi_degree)
from .poly import MultiPoly, PolyRing, parse_scalar, ring
from .scalar import QQ, cyclotomic, is_root_of_unity, rational_functions
from .torus import (Decomposition, GroupElement, build_gm_flow, commutes_with_flow,
                    finite_part_decompose, flow_law_multiplicative, weight_split)

__version__ = "0.1.0"

__all__ = [
    "QQ", "cyclotomic", "rational_functions", "is_root_of_unity",
    "PolyRing", "MultiPoly", "ring", "parse_scalar",
    "PolyMap", "affine", "elementary", "permutation", "compose", "invert", "conjugate",
    "verify_conjugacy", "iterate_degrees", "order_up_to", "jacobian_at", "is_unipotent",
    "Derivation", "ParametricMap", "exp_flow", "log_unipotent", "is_locally_nilpotent",
    "psi_degree", "interpolate_powers", "flow_law_additive",
    "weight_split", "build_gm_flow", "flow_law_multiplicative", "commutes_with_flow",
    "GroupElement", "Decomposition", "finite_part_decompose",
    "Ideal", "GroebnerBasis", "buchberger", "reduce", "fixpoint_ideal", "ideals_equal",
    "radical_member", "unique_fixpoint",
    "invariant_basis", "diag_invariant_monomials", "recognize_normal_form", "classify_plane",
    "ClassificationReport", "NormalForm",
    "run_poloni_moser", "PoloniMoserReport",
    "PolyAutoError", "InputError", "BudgetExceeded", "InvariantViolation",
]
