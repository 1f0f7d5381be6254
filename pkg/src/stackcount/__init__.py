"""Exact counts of commuting pairs in endomorphism algebras of projective
quiver representations over finite fields, with plethystic series tools."""

__version__ = "0.1.0"

from .exact import Q, QPoly, QRatFun, adams_substitute, evaluate_at, q_pochhammer, ratfun_arith
from .volume import (
    NotPolynomialCount,
    ValidityError,
    Volume,
    detect_polynomial_count,
    fit_polynomial_count,
    from_polynomial,
    vol_adams,
    vol_arith,
)
from .series import (
    MSeries,
    pleth_exp,
    pleth_log,
    pleth_pow,
    pow_product_form,
    series_arith,
    series_psi,
)
from .ffield import (
    FieldSpec,
    field_make,
    field_of_order,
    mat_is_invertible,
    mat_is_nilpotent,
    mat_nullspace,
    mat_rank,
)
from .quiver import EndAlgebra, Quiver, ZType, classify, end_basis, parse_quiver, path_count
from .counting import (
    BudgetExceeded,
    count_aut,
    count_commuting,
    count_type_in_subspace,
    naive_count_commuting,
)
from .stacks import (
    Partition,
    SeriesReport,
    ai_series,
    alpha_invariants,
    closed_form_oracles,
    count_abs_indecomposable,
    extract_ai,
    gauss_phi,
    h_series_numeric,
    h_series_symbolic,
    hua_h0,
    indecomposables_from_ai,
    kac_polynomials,
    predict_h,
    verify_main_theorem,
    zs_volume,
)
