"""Differentiation, substitution, opaque instantiation and normalization."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .nodes import (
    ONE, ZERO, Add, Expr, ExprError, Func, Mul, Num, Opaque, Pow, Sym,
    add, as_expr, func, mul, power,
)

_CACHE = 1 << 18


def _name(s) -> str:
    if isinstance(s, Sym):
        return s.name
    if isinstance(s, str):
        return s
    raise TypeError(f"expected a symbol, got {s!r}")


def diff(e, s, n: int = 1) -> Expr:
    """Exact partial derivative of ``e`` with respect to symbol ``s``."""
    e = as_expr(e)
    name = _name(s)
    for _ in range(n):
        e = _diff(e, name)
    return e


@lru_cache(maxsize=_CACHE)
def _diff(e: Expr, s: str) -> Expr:
    if s not in e._free:
        return ZERO
    if isinstance(e, Sym):
        return ONE
    if isinstance(e, Add):
        return add(*(_diff(t, s) for t in e.terms))
    if isinstance(e, Mul):
        fs = e.factors
        terms = []
        for i, f in enumerate(fs):
            d = _diff(f, s)
            if d is not ZERO:
                terms.append(mul(Num(e.coeff), d, *fs[:i], *fs[i + 1:]))
        return add(*terms)
    if isinstance(e, Pow):
        return mul(Num(e.exp), power(e.base, Num(e.exp - 1)), _diff(e.base, s))
    if isinstance(e, Func):
        a = e.arg
        da = _diff(a, s)
        n = e.name
        if n == "exp":
            outer = e
        elif n == "ln":
            outer = power(a, -1)
        elif n == "sin":
            outer = func("cos", a)
        elif n == "cos":
            outer = mul(-1, func("sin", a))
        elif n == "tan":
            outer = add(1, power(e, 2))
        elif n == "sinh":
            outer = func("cosh", a)
        elif n == "cosh":
            outer = func("sinh", a)
        elif n == "arctan":
            outer = power(add(1, power(a, 2)), -1)
        else:  # pragma: no cover - constructor rejects unknown names
            raise ExprError(f"no derivative rule for {n}")
        return mul(outer, da)
    if isinstance(e, Opaque):
        terms = []
        for k, a in enumerate(e.fargs):
            da = _diff(a, s)
            if da is not ZERO:
                orders = e.orders[:k] + (e.orders[k] + 1,) + e.orders[k + 1:]
                terms.append(mul(Opaque(e.name, e.fargs, orders), da))
        return add(*terms)
    raise TypeError(f"cannot differentiate {e!r}")


def rebuild(e: Expr, leaf, memo: dict | None = None) -> Expr:
    """Rebuild ``e`` bottom-up through the constructors.

    ``leaf(node)`` may return a replacement for ``Sym``/``Opaque`` nodes or
    ``None`` to keep descending.
    """
    if memo is None:
        memo = {}

    def go(x: Expr) -> Expr:
        hit = memo.get(x)
        if hit is not None:
            return hit
        out = leaf(x)
        if out is None:
            if isinstance(x, (Num, Sym)):
                out = x
            elif isinstance(x, Add):
                out = add(Num(x.const), *(go(t) for t in x.terms))
            elif isinstance(x, Mul):
                out = mul(Num(x.coeff), *(go(f) for f in x.factors))
            elif isinstance(x, Pow):
                out = power(go(x.base), Num(x.exp))
            elif isinstance(x, Func):
                out = func(x.name, go(x.arg))
            elif isinstance(x, Opaque):
                out = Opaque(x.name, tuple(go(a) for a in x.fargs), x.orders)
            else:  # pragma: no cover
                raise TypeError(x)
        memo[x] = out
        return out

    return go(e)


def subs(e, mapping: Mapping) -> Expr:
    """Simultaneously replace symbols by expressions."""
    e = as_expr(e)
    table = {_name(k): as_expr(v) for k, v in mapping.items()}
    if not table or not (e._free & table.keys()):
        return e

    def leaf(x):
        if isinstance(x, Sym):
            return table.get(x.name, x)
        if not (x._free & table.keys()):
            return x
        return None

    return rebuild(e, leaf)


class Instantiation:
    """Concrete body for an opaque function: ``name(formals) := body``."""

    __slots__ = ("formals", "body", "_derivs")

    def __init__(self, formals, body):
        self.formals = tuple(_name(f) for f in formals)
        self.body = as_expr(body)
        extra = self.body.free_symbols - set(self.formals)
        if extra:
            raise ExprError(f"instantiation body has unbound symbols {sorted(extra)}")
        self._derivs: dict = {}

    @property
    def arity(self) -> int:
        return len(self.formals)

    def derivative(self, orders: tuple) -> Expr:
        d = self._derivs.get(orders)
        if d is None:
            d = self.body
            for f, k in zip(self.formals, orders):
                d = diff(d, f, k)
            self._derivs[orders] = d
        return d

    def __repr__(self):
        return f"Instantiation({list(self.formals)}, {self.body})"

    def to_text(self) -> str:
        return f"({', '.join(self.formals)}) -> {self.body}"


def instantiate(e, defs: Mapping[str, Instantiation]) -> Expr:
    """Replace opaque functions by concrete bodies (derivatives included)."""
    e = as_expr(e)
    if not (e._opq & defs.keys()):
        return e

    def leaf(x):
        if not (x._opq & defs.keys()):
            return x
        if isinstance(x, Opaque) and x.name in defs:
            inst = defs[x.name]
            if inst.arity != len(x.fargs):
                raise ExprError(f"{x.name} applied to {len(x.fargs)} args, instantiation has {inst.arity}")
            args = [instantiate(a, defs) for a in x.fargs]
            return subs(inst.derivative(x.orders), dict(zip(inst.formals, args)))
        return None

    return rebuild(e, leaf)


# ---------------------------------------------------------------- normalize


def _is_expandable(f: Expr) -> bool:
    return isinstance(f, Add) or (isinstance(f, Pow) and isinstance(f.base, Add)
                                  and f.exp.denominator == 1 and f.exp > 0)


def _distribute(factors: list[Expr]) -> Expr:
    terms: list[Expr] = [ONE]
    for f in factors:
        if isinstance(f, Pow) and isinstance(f.base, Add) and f.exp.denominator == 1 and f.exp > 0:
            for _ in range(int(f.exp)):
                terms = [mul(t, u) for t in terms for u in f.base.args]
        elif isinstance(f, Add):
            terms = [mul(t, u) for t in terms for u in f.args]
        else:
            terms = [mul(t, f) for t in terms]
    out = []
    for t in terms:
        if isinstance(t, Mul) and any(_is_expandable(f) for f in t.factors):
            t = _expand(t)
        elif _is_expandable(t):
            t = _expand(t)
        out.append(t)
    return add(*out)


@lru_cache(maxsize=_CACHE)
def _expand(e: Expr) -> Expr:
    if isinstance(e, (Num, Sym)):
        return e
    if isinstance(e, Add):
        return add(Num(e.const), *(_expand(t) for t in e.terms))
    if isinstance(e, Mul):
        fs = [_expand(f) for f in e.factors]
        return _distribute([Num(e.coeff)] + fs)
    if isinstance(e, Pow):
        b = _expand(e.base)
        p = power(b, Num(e.exp))
        if isinstance(p, Pow) and p.base is b and not _is_expandable(p):
            return p
        return _distribute([p]) if _is_expandable(p) else (
            _expand(p) if isinstance(p, Mul) else p)
    if isinstance(e, Func):
        return func(e.name, _expand(e.arg))
    if isinstance(e, Opaque):
        return Opaque(e.name, tuple(_expand(a) for a in e.fargs), e.orders)
    raise TypeError(e)


def normalize(e) -> Expr:
    """Expanded canonical form: a sum of rational multiples of kernel products.

    Kernels are symbols, function applications and non-polynomial powers.
    No trigonometric or logarithmic identities are applied.
    """
    return _expand(as_expr(e))


class NotPolynomial(ExprError):
    pass


def poly_coeffs(e, variables) -> dict[tuple, Expr]:
    """Coefficients of ``e`` viewed as a polynomial in ``variables``.

    Returns a map from exponent tuples to coefficient expressions that are
    free of the variables.  Raises :class:`NotPolynomial` otherwise.
    """
    names = tuple(_name(v) for v in variables)
    index = {n: i for i, n in enumerate(names)}
    e = normalize(e)
    terms = e.args if isinstance(e, Add) else (e,)
    buckets: dict[tuple, list] = {}
    for t in terms:
        if isinstance(t, Mul):
            coeff, factors = Num(t.coeff), t.factors
        else:
            coeff, factors = ONE, (t,)
        expo = [0] * len(names)
        rest = [coeff]
        for f in factors:
            base, k = (f.base, f.exp) if isinstance(f, Pow) else (f, Fraction(1))
            if isinstance(base, Sym) and base.name in index:
                if k.denominator != 1 or k < 0:
                    raise NotPolynomial(f"{f} is not a monomial in {names}")
                expo[index[base.name]] += int(k)
            elif f._free & index.keys():
                raise NotPolynomial(f"{f} depends non-polynomially on {names}")
            else:
                rest.append(f)
        buckets.setdefault(tuple(expo), []).append(mul(*rest))
    out = {}
    for k, parts in buckets.items():
        c = add(*parts)
        if c is not ZERO:
            out[k] = c
    return out


def depends_on(e: Expr, names) -> bool:
    return bool(e._free & set(_name(n) for n in names))
