"""Text rendering that the parser reads back."""
from __future__ import annotations

from fractions import Fraction

from .nodes import Add, Expr, Func, Mul, Num, Opaque, Pow, Sym


def _frac(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _opaque_name(e: Opaque) -> str:
    if any(e.orders):
        return f"{e.name}__d{'_'.join(str(o) for o in e.orders)}"
    return e.name


def _atomic(e: Expr) -> bool:
    if isinstance(e, Num):
        return e.value.denominator == 1 and e.value >= 0
    return isinstance(e, (Sym, Func, Opaque))


def _wrap(e: Expr) -> str:
    s = to_text(e)
    return s if _atomic(e) else f"({s})"


def _factor(e: Expr) -> str:
    s = to_text(e)
    return f"({s})" if isinstance(e, Add) else s


def _pow_text(base: Expr, exp: Fraction) -> str:
    if exp == 1:
        return _factor(base)
    if exp.denominator == 1 and exp > 0:
        return f"{_wrap(base)}^{exp.numerator}"
    return f"{_wrap(base)}^({_frac(exp)})"


def _mul_text(e: Mul) -> str:
    c = e.coeff
    sign = "-" if c < 0 else ""
    c = abs(c)
    top, bottom = [], []
    for f in e.factors:
        if isinstance(f, Pow) and f.exp < 0:
            bottom.append(_pow_text(f.base, -f.exp))
        else:
            top.append(_factor(f))
    if c.numerator != 1 or not top:
        top.insert(0, str(c.numerator))
    if c.denominator != 1:
        bottom.insert(0, str(c.denominator))
    s = "*".join(top)
    if bottom:
        den = bottom[0] if len(bottom) == 1 else "(" + "*".join(bottom) + ")"
        s = f"{s}/{den}"
    return sign + s


def to_text(e: Expr) -> str:
    if isinstance(e, Num):
        return _frac(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Func):
        return f"{e.name}({to_text(e.arg)})"
    if isinstance(e, Opaque):
        return f"{_opaque_name(e)}({', '.join(to_text(a) for a in e.fargs)})"
    if isinstance(e, Pow):
        return _pow_text(e.base, e.exp)
    if isinstance(e, Mul):
        return _mul_text(e)
    if isinstance(e, Add):
        parts = [to_text(t) for t in e.terms]
        if e.const != 0:
            parts.append(_frac(e.const))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out
    raise TypeError(f"not an expression: {e!r}")
