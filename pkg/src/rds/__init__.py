"""Exact-arithmetic rational distance sets on the parabola y = x^2."""

from .rat import Rat, format_rat, is_perfect_square, isqrt, normalize, parse_rat
from .pythagorean import (
    RatioClass,
    RatioPool,
    Triplet,
    build_pool,
    classify_ratio,
    find_ratio_in_interval,
    is_pythagorean_ratio,
    min_hypotenuse,
    nu,
    nu_triplet,
    primitive_triplets,
    ratios_of,
)
from .solver import (
    CoeffMatrix,
    ExistenceCheck,
    PsiVector,
    Solution,
    VerifyResult,
    check_distinct,
    check_existence,
    check_general_position,
    coefficient_matrix,
    complete_psi,
    head_inverse,
    indices_set,
    psi_from_x,
    solution_from_x,
    solve_x,
    verify_rds,
)

__version__ = "0.1.0"
