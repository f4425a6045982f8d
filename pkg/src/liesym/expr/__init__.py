"""Self-contained symbolic expression kernel."""
from .calculus import (
    Instantiation, NotPolynomial, depends_on, diff, instantiate, normalize, poly_coeffs, subs,
)
from .nodes import (
    BUILTINS, HALF, MINUS_ONE, ONE, ZERO, Add, Expr, ExprError, Func, Mul, Num, Opaque, Pow, Sym,
    add, as_expr, cos, div, exp, func, ln, mul, neg, num, opaque, power, sin, sqrt, sub, sym,
    symbols,
)
from .numeric import Bindings, DomainError, UnboundError, compile_exprs, eval_numeric, lambdify
from .parser import ParseError, UnknownOperatorError, parse
from .printer import to_text
from .zero import (
    DEFAULT_SEED, DEFAULT_TOL, DEFAULT_TRIALS, Verdict, ZeroTest, is_zero, sample_points,
)

__all__ = [
    "Add", "Bindings", "BUILTINS", "DEFAULT_SEED", "DEFAULT_TOL", "DEFAULT_TRIALS", "DomainError",
    "Expr", "ExprError", "Func", "HALF", "Instantiation", "MINUS_ONE", "Mul", "NotPolynomial",
    "Num", "ONE", "Opaque", "ParseError", "Pow", "Sym", "UnboundError", "UnknownOperatorError",
    "Verdict", "ZERO", "ZeroTest", "add", "as_expr", "compile_exprs", "cos", "depends_on", "diff",
    "div", "eval_numeric", "exp", "func", "instantiate", "is_zero", "lambdify", "ln", "mul", "neg",
    "normalize", "num", "opaque", "parse", "poly_coeffs", "power", "sample_points", "sin", "sqrt",
    "sub", "subs", "sym", "symbols", "to_text",
]
