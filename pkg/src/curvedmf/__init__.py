"""Exact computations with curved deformations of graded-commutative algebras."""

from .algebra import AlgebraCtx, GCPoly, VariableSpec, derive, mul, parse, substitute
from .ratfunc import RatFunc

__all__ = ["AlgebraCtx", "GCPoly", "VariableSpec", "RatFunc", "derive", "mul", "parse", "substitute"]
