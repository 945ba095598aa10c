"""Cluster variables of Dynkin type D seeds via friezes and boundary-word matrix products."""

from .laurent import (
    InexactDivision,
    LaurentPolynomial,
    NotAPerfectSquare,
    div_exact,
    eval_at,
    normal_form,
    parse_laurent,
    sqrt_perfect,
)
from .quiver import (
    BudgetExceeded,
    DynkinClass,
    ForkConfiguration,
    NotDynkinAD,
    Quiver,
    Seed,
    Triangulation,
    build_lambda_prime,
    build_q_prime,
    classify,
    fork_info,
    initial_seed,
    mutate_seed,
    mutation_closure,
    quiver_from_triangulation,
)
from .frieze import (
    complete_downward,
    compute_frieze,
    fundamental_quiver,
    modelled_quiver,
    part_F,
)
from .boundary import (
    T_value,
    all_cluster_variables,
    enumerate_points,
    position_boundary,
    split_diagonal,
    to_boundary,
    transpose_boundary,
)

__version__ = "0.1.0"

__all__ = [
    "InexactDivision",
    "LaurentPolynomial",
    "NotAPerfectSquare",
    "div_exact",
    "eval_at",
    "normal_form",
    "parse_laurent",
    "sqrt_perfect",
    "BudgetExceeded",
    "DynkinClass",
    "ForkConfiguration",
    "NotDynkinAD",
    "Quiver",
    "Seed",
    "Triangulation",
    "build_lambda_prime",
    "build_q_prime",
    "classify",
    "fork_info",
    "initial_seed",
    "mutate_seed",
    "mutation_closure",
    "quiver_from_triangulation",
    "complete_downward",
    "compute_frieze",
    "fundamental_quiver",
    "modelled_quiver",
    "part_F",
    "T_value",
    "all_cluster_variables",
    "enumerate_points",
    "position_boundary",
    "split_diagonal",
    "to_boundary",
    "transpose_boundary",
]
