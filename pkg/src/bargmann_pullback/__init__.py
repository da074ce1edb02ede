"""Pullback operators between Bargmann spaces with quadratic weights."""

from .decision import (AffineMap, Class1D, check_kernel_condition, check_sup_condition,
                       classify_1d, complete_square, difference_form, exists_bounded_1d,
                       exists_compact_1d, find_witness, is_bounded, is_compact, shrink_weight)
from .fio import kappa_map, lambda_graph, verify_graph_mapping
from .kernels import coherent_norm_ratio, project_polynomial, schur_row_col_bounds
from .moments import gaussian_moment, moment_table, quadrature_oracle
from .poly import Poly, compose_affine, evaluate, monomials_up_to
from .qform import (QuadraticWeight, RealForm, fundamental_gap, holomorphic_gradient,
                    is_strictly_psh, normalization_constant, polarize, realify, split_herm_plh)
from .spectra import (decay_fit, gram_matrix, inclusion_matrix, operator_matrix, orthonormal_basis,
                      singular_values)
from .verdict import Decision, Verdict

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "Class1D",
    "check_kernel_condition",
    "check_sup_condition",
    "classify_1d",
    "complete_square",
    "difference_form",
    "exists_bounded_1d",
    "exists_compact_1d",
    "find_witness",
    "is_bounded",
    "is_compact",
    "shrink_weight",
    "kappa_map",
    "lambda_graph",
    "verify_graph_mapping",
    "coherent_norm_ratio",
    "project_polynomial",
    "schur_row_col_bounds",
    "gaussian_moment",
    "moment_table",
    "quadrature_oracle",
    "Poly",
    "compose_affine",
    "evaluate",
    "monomials_up_to",
    "QuadraticWeight",
    "RealForm",
    "fundamental_gap",
    "holomorphic_gradient",
    "is_strictly_psh",
    "normalization_constant",
    "polarize",
    "realify",
    "split_herm_plh",
    "decay_fit",
    "gram_matrix",
    "inclusion_matrix",
    "operator_matrix",
    "orthonormal_basis",
    "singular_values",
    "Decision",
    "Verdict",
]
