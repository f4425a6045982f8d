"""Floating-point evaluation of expressions.

Expressions are compiled once into straight-line Python functions with every
shared subexpression computed a single time.  A second compiled variant also
propagates an absolute-value "scale" alongside each value; the scale of a sum
is the sum of the scales of its terms, so it bounds the magnitude of the
rounding error left after cancellation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping

from .calculus import Instantiation, instantiate
from .nodes import Add, Expr, ExprError, Func, Mul, Num, Opaque, Pow, Sym, as_expr


class DomainError(ExprError):
    """Numeric evaluation left the real domain (log of negative, 1/0, overflow)."""


class UnboundError(ExprError):
    """A symbol or opaque function had no binding."""


NumericFunction = Callable[[tuple, tuple], float]


@dataclass
class Bindings:
    """Values for symbols and concrete meanings for opaque functions.

    ``functions`` maps an opaque name either to an :class:`Instantiation`
    (symbolic body, differentiated exactly) or to a numeric callable
    ``fn(args, orders) -> float``.
    """

    values: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)

    def symbolic(self) -> dict:
        return {k: v for k, v in self.functions.items() if isinstance(v, Instantiation)}

    def numeric(self) -> dict:
        return {k: v for k, v in self.functions.items() if not isinstance(v, Instantiation)}

    def with_values(self, values: Mapping) -> "Bindings":
        return Bindings({**self.values, **values}, self.functions)


_TINY = 1e-300


def _ipow(b, n):
    if n < 0 and abs(b) < _TINY:
        raise DomainError("division by a value below 1e-300")
    return b**n


def _fpow(b, p, q):
    if b < 0:
        if q % 2 == 0:
            raise DomainError("even root of a negative number")
        r = (-b) ** (p / q)
        return -r if p % 2 else r
    if b < _TINY and p < 0:
        raise DomainError("division by a value below 1e-300")
    return b ** (p / q)


def _ln(x):
    if x <= 0:
        raise DomainError("logarithm of a non-positive number")
    return math.log(x)


_MATH = {"sin": "math.sin", "cos": "math.cos", "tan": "math.tan", "exp": "math.exp",
         "ln": "_ln", "sinh": "math.sinh", "cosh": "math.cosh", "arctan": "math.atan"}

_ENV = {"math": math, "_ipow": _ipow, "_fpow": _fpow, "_ln": _ln, "abs": abs}


def _postorder(root: Expr) -> list[Expr]:
    order, seen, stack = [], set(), [(root, False)]
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
            continue
        if node in seen:
            continue
        seen.add(node)
        stack.append((node, True))
        for child in node.args:
            if child not in seen:
                stack.append((child, False))
    return order


def _codegen(roots: tuple, symbols: tuple, with_scale: bool) -> str:
    names: dict = {}
    lines = []
    index = {s: i for i, s in enumerate(symbols)}
    for root in roots:
        for node in _postorder(root):
            if node in names:
                continue
            k = len(names)
            v, s = f"v{k}", f"s{k}"
            names[node] = (v, s)
            if isinstance(node, Num):
                lines.append(f"{v} = {float(node.value)!r}")
                lines.append(f"{s} = {abs(float(node.value))!r}")
            elif isinstance(node, Sym):
                if node.name not in index:
                    raise UnboundError(f"unbound symbol {node.name!r}")
                lines.append(f"{v} = _x[{index[node.name]}]")
                lines.append(f"{s} = abs({v})")
            elif isinstance(node, Add):
                vs = [names[t][0] for t in node.args]
                ss = [names[t][1] for t in node.args]
                lines.append(f"{v} = " + " + ".join(vs))
                lines.append(f"{s} = " + " + ".join(ss))
            elif isinstance(node, Mul):
                c = float(node.coeff)
                vs = [names[f][0] for f in node.factors]
                ss = [names[f][1] for f in node.factors]
                lines.append(f"{v} = {c!r} * " + " * ".join(vs))
                lines.append(f"{s} = {abs(c)!r} * " + " * ".join(ss))
            elif isinstance(node, Pow):
                bv, bs = names[node.base]
                p, q = node.exp.numerator, node.exp.denominator
                if q == 1:
                    lines.append(f"{v} = _ipow({bv}, {p})")
                    lines.append(f"{s} = {bs} ** {p}" if p > 0 else f"{s} = abs({v})")
                else:
                    lines.append(f"{v} = _fpow({bv}, {p}, {q})")
                    lines.append(f"{s} = abs({v})")
            elif isinstance(node, Func):
                av = names[node.arg][0]
                lines.append(f"{v} = {_MATH[node.name]}({av})")
                lines.append(f"{s} = abs({v})")
            elif isinstance(node, Opaque):
                avs = ", ".join(names[a][0] for a in node.fargs)
                lines.append(f"{v} = _F[{node.name!r}](({avs},), {node.orders!r})")
                lines.append(f"{s} = abs({v})")
            else:  # pragma: no cover
                raise TypeError(node)
    if not with_scale:
        lines = [ln for ln in lines if not ln.startswith("s")]
    outs = ", ".join(names[r][0] for r in roots)
    if with_scale:
        outs += ", " + ", ".join(names[r][1] for r in roots)
    body = "\n    ".join(lines) if lines else "pass"
    return f"def _compiled(_x, _F):\n    {body}\n    return ({outs},)\n"


@lru_cache(maxsize=4096)
def _compile(roots: tuple, symbols: tuple, with_scale: bool):
    src = _codegen(roots, symbols, with_scale)
    env = dict(_ENV)
    exec(compile(src, "<liesym-expr>", "exec"), env)
    return env["_compiled"]


def compile_exprs(exprs, symbols, with_scale: bool = False):
    """Compile expressions to ``fn(values, functions) -> tuple``.

    The returned tuple holds the values (then, with ``with_scale``, the
    scales) of ``exprs`` in order.  Symbols are positional in ``symbols``.
    """
    roots = tuple(as_expr(e) for e in exprs)
    return _compile(roots, tuple(symbols), with_scale)


def call_compiled(fn, values, functions=None):
    try:
        out = fn(values, functions or {})
    except DomainError:
        raise
    except KeyError as exc:
        raise UnboundError(f"unbound opaque function {exc.args[0]!r}") from None
    except (ValueError, OverflowError, ZeroDivisionError, TypeError) as exc:
        raise DomainError(str(exc)) from None
    for x in out:
        if isinstance(x, complex) or not math.isfinite(x):
            raise DomainError("non-finite value")
    return out


def prepare(e, bindings: Bindings | None) -> Expr:
    """Apply the symbolic instantiations of ``bindings`` to ``e``."""
    e = as_expr(e)
    if bindings is None:
        return e
    return instantiate(e, bindings.symbolic())


def eval_numeric(e, bindings: Bindings | Mapping | None = None) -> float:
    """Evaluate ``e`` in IEEE double precision.

    Raises :class:`UnboundError` for missing bindings and
    :class:`DomainError` for leaving the real domain.
    """
    if bindings is None:
        bindings = Bindings()
    elif not isinstance(bindings, Bindings):
        bindings = Bindings(dict(bindings))
    e = prepare(e, bindings)
    numeric = bindings.numeric()
    missing = e.opaque_names - numeric.keys()
    if missing:
        raise UnboundError(f"opaque functions without instantiation: {sorted(missing)}")
    syms = tuple(sorted(e.free_symbols))
    unbound = [s for s in syms if s not in bindings.values]
    if unbound:
        raise UnboundError(f"unbound symbols: {unbound}")
    fn = compile_exprs((e,), syms)
    return call_compiled(fn, tuple(float(bindings.values[s]) for s in syms), numeric)[0]


def lambdify(e, symbols, functions: Mapping | None = None) -> Callable[..., float]:
    """Plain callable ``f(*values)`` for repeated evaluation of ``e``."""
    e = as_expr(e)
    fn = compile_exprs((e,), tuple(symbols))
    funcs = dict(functions or {})

    def f(*values):
        return call_compiled(fn, values, funcs)[0]

    return f
