"""Exact arithmetic in F[x0, x1, ...] and K = F(x0, x1, ...)."""

from .linsolve import LinearSolution, solve_linear
from .parser import ParseError, parse_expr
from .polys import REGISTRY, ModP, MultiPoly, Registry, VarId, poly_cofactors, poly_gcd
from .ratfunc import RatFunc, rf_arith, substitute
from .render import render_poly, render_ratfunc
from .upoly import UPoly, exact_divide

__all__ = [
    "LinearSolution",
    "ModP",
    "MultiPoly",
    "ParseError",
    "REGISTRY",
    "RatFunc",
    "Registry",
    "UPoly",
    "VarId",
    "exact_divide",
    "parse_expr",
    "poly_cofactors",
    "poly_gcd",
    "render_poly",
    "render_ratfunc",
    "rf_arith",
    "solve_linear",
    "substitute",
]
