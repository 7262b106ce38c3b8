"""Symbolic expressions for entire test functions."""

from .calculus import (
    ExactEvaluationUnavailable, diff, differentiate_expr, eval_exact, eval_expr, eval_numeric, to_multipoly,
)
from .contour import ContourError, contour_derivative
from .families import ExampleFunction, ExampleSpec, build_example, theta
from .nodes import (
    ComplexConst, Const, Expr, ExprError, Func, PolyApply, Pow, Product, Sum, Var,
    add, const, cos, cosh, div, func, mul, neg, pi, poly_apply, power, sin, sinh, sub, var,
)
from .parser import ExprSyntaxError, parse_expression
from .pipoly import PI, PiPoly
from .verify import (
    DerivativeValue, VerificationReport, derivative_value, numeric_oracle, verify_data_property,
)

__all__ = [name for name in dir() if not name.startswith("_")]
