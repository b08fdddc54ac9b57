"""Exact scalars, Laurent polynomials and fraction-free linear algebra."""

from equikt.exactalg.scalars import GF, QQ, ZZ, CoeffRing
from equikt.exactalg.laurent import TAUT, TORUS, LaurentPoly, RingSpec, divides, exact_div, parse_poly
from equikt.exactalg.ops import (
    adams_base,
    elem_sym,
    lowest_level,
    lp_arith,
    lp_eval,
    perfect_lift,
    to_elementary,
)
from equikt.exactalg.linalg import (
    bareiss_kernel,
    bareiss_rref,
    generic_rank,
    mat_vec,
    rank,
    rank_mod,
    solve_exact,
)

__all__ = [
    "GF", "QQ", "ZZ", "CoeffRing", "TAUT", "TORUS", "LaurentPoly", "RingSpec",
    "divides", "exact_div", "parse_poly", "adams_base", "elem_sym", "lowest_level",
    "lp_arith", "lp_eval", "perfect_lift", "to_elementary", "bareiss_kernel",
    "bareiss_rref", "generic_rank", "mat_vec", "rank", "rank_mod", "solve_exact",
]
