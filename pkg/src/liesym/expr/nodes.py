"""Immutable, interned expression nodes and their simplifying constructors.

Every node is hash-consed, so structural equality is object identity and
``a == b`` is a cheap pointer comparison.  The constructors (:func:`add`,
:func:`mul`, :func:`power`, :func:`func`) perform light automatic
simplification: flattening, constant folding, collection of like terms and
like bases, and merging of ``exp`` factors.  Distribution of products over
sums is left to :func:`liesym.expr.calculus.normalize`.
"""
from __future__ import annotations

import weakref
from fractions import Fraction
from typing import Iterable

BUILTINS = ("sin", "cos", "tan", "exp", "ln", "sqrt", "sinh", "cosh", "arctan")


class ExprError(Exception):
    """Raised for structurally invalid expressions (e.g. ``1/0``)."""


_INTERN: "weakref.WeakValueDictionary[tuple, Expr]" = weakref.WeakValueDictionary()


class Expr:
    """Base class of all expression nodes."""

    __slots__ = ("_key", "_free", "_opq", "__weakref__")

    # populated by subclasses
    _key: tuple
    _free: frozenset
    _opq: frozenset

    @property
    def free_symbols(self) -> frozenset:
        """Names of the plain symbols occurring in the expression."""
        return self._free

    @property
    def opaque_names(self) -> frozenset:
        """Names of the opaque (user) functions occurring in the expression."""
        return self._opq

    @property
    def args(self) -> tuple:
        return ()

    def coeff_unit(self) -> tuple[Fraction, "Expr"]:
        return Fraction(1), self

    @property
    def is_number(self) -> bool:
        return False

    def __str__(self) -> str:
        from .printer import to_text

        return to_text(self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self}>"

    def __reduce__(self):
        from .parser import parse

        return (parse, (str(self),))

    # arithmetic sugar -------------------------------------------------
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, neg(as_expr(other)))

    def __rsub__(self, other):
        return add(other, neg(self))

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return mul(self, power(as_expr(other), MINUS_ONE))

    def __rtruediv__(self, other):
        return mul(other, power(self, MINUS_ONE))

    def __pow__(self, other):
        return power(self, other)

    def __rpow__(self, other):
        return power(other, self)

    def __neg__(self):
        return neg(self)


def _new(cls, ident, **fields):
    node = _INTERN.get(ident)
    if node is None:
        node = object.__new__(cls)
        for name, value in fields.items():
            object.__setattr__(node, name, value)
        _INTERN[ident] = node
    return node


class Num(Expr):
    """Rational constant in lowest terms (``Fraction`` guarantees q > 0)."""

    __slots__ = ("value",)
    value: Fraction

    def __new__(cls, value) -> "Num":
        value = Fraction(value)
        return _new(cls, ("n", value), value=value, _key=(0, value),
                    _free=frozenset(), _opq=frozenset())

    @property
    def is_number(self) -> bool:
        return True

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")


class Sym(Expr):
    __slots__ = ("name",)
    name: str

    def __new__(cls, name: str) -> "Sym":
        return _new(cls, ("s", name), name=name, _key=(1, name),
                    _free=frozenset((name,)), _opq=frozenset())

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")


class Func(Expr):
    """Application of a builtin elementary function."""

    __slots__ = ("name", "arg")
    name: str
    arg: Expr

    def __new__(cls, name: str, arg: Expr) -> "Func":
        return _new(cls, ("f", name, arg), name=name, arg=arg,
                    _key=(2, name, arg._key), _free=arg._free, _opq=arg._opq)

    @property
    def args(self) -> tuple:
        return (self.arg,)

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")


class Opaque(Expr):
    """Application of an unspecified function, with a derivative multi-index.

    ``Opaque("f", (x, y), (1, 0))`` stands for the partial derivative of
    ``f`` with respect to its first slot, evaluated at ``(x, y)``.
    """

    __slots__ = ("name", "fargs", "orders")
    name: str
    fargs: tuple
    orders: tuple

    def __new__(cls, name: str, fargs: tuple, orders: tuple) -> "Opaque":
        free = frozenset().union(*(a._free for a in fargs)) if fargs else frozenset()
        opq = frozenset((name,)).union(*(a._opq for a in fargs))
        return _new(cls, ("o", name, fargs, orders), name=name, fargs=fargs,
                    orders=orders, _key=(3, name, orders, tuple(a._key for a in fargs)),
                    _free=free, _opq=opq)

    @property
    def args(self) -> tuple:
        return self.fargs

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")


class Pow(Expr):
    """``base ** exp`` with a rational, non-trivial exponent."""

    __slots__ = ("base", "exp")
    base: Expr
    exp: Fraction

    def __new__(cls, base: Expr, exp: Fraction) -> "Pow":
        return _new(cls, ("p", base, exp), base=base, exp=exp,
                    _key=(4, base._key, exp), _free=base._free, _opq=base._opq)

    @property
    def args(self) -> tuple:
        return (self.base,)

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")


class Mul(Expr):
    """``coeff * prod(factors)``; factors are non-numeric, sorted, distinct bases."""

    __slots__ = ("coeff", "factors", "_unit")
    coeff: Fraction
    factors: tuple

    def __new__(cls, coeff: Fraction, factors: tuple) -> "Mul":
        free = frozenset().union(*(f._free for f in factors))
        opq = frozenset().union(*(f._opq for f in factors))
        return _new(cls, ("m", coeff, factors), coeff=coeff, factors=factors, _unit=None,
                    _key=(5, tuple(f._key for f in factors), coeff), _free=free, _opq=opq)

    @property
    def args(self) -> tuple:
        return self.factors

    def coeff_unit(self) -> tuple[Fraction, Expr]:
        if self.coeff == 1:
            return self.coeff, self
        unit = self._unit
        if unit is None:
            unit = self.factors[0] if len(self.factors) == 1 else Mul(Fraction(1), self.factors)
            object.__setattr__(self, "_unit", unit)
        return self.coeff, unit

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")


class Add(Expr):
    """``const + sum(terms)``; terms are non-numeric, sorted, with distinct units."""

    __slots__ = ("const", "terms")
    const: Fraction
    terms: tuple

    def __new__(cls, const: Fraction, terms: tuple) -> "Add":
        free = frozenset().union(*(t._free for t in terms))
        opq = frozenset().union(*(t._opq for t in terms))
        return _new(cls, ("a", const, terms), const=const, terms=terms,
                    _key=(6, tuple(t._key for t in terms), const), _free=free, _opq=opq)

    @property
    def args(self) -> tuple:
        return self.terms if self.const == 0 else (Num(self.const),) + self.terms

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")


ZERO = Num(0)
ONE = Num(1)
MINUS_ONE = Num(-1)
HALF = Num(Fraction(1, 2))
_F1 = Fraction(1)
_F0 = Fraction(0)


def _sortkey(e: Expr):
    return e._key


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not expressions")
    if isinstance(value, (int, Fraction)):
        return Num(value)
    if isinstance(value, float):
        return Num(Fraction(repr(value)))
    if isinstance(value, str):
        from .parser import parse

        return parse(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an expression")


def num(value) -> Num:
    return Num(Fraction(value))


def sym(name: str) -> Sym:
    return Sym(name)


def symbols(names: str) -> tuple:
    return tuple(Sym(n) for n in names.replace(",", " ").split())


def opaque(name: str, args: Iterable, orders: Iterable[int] | None = None) -> Opaque:
    fargs = tuple(as_expr(a) for a in args)
    orders = tuple(orders) if orders is not None else (0,) * len(fargs)
    if len(orders) != len(fargs) or any(o < 0 for o in orders):
        raise ExprError(f"bad derivative multi-index {orders} for {name}/{len(fargs)}")
    return Opaque(name, fargs, orders)


def _scale(unit: Expr, c: Fraction) -> Expr:
    if c == 1:
        return unit
    if isinstance(unit, Mul):
        return Mul(c * unit.coeff, unit.factors)
    return Mul(c, (unit,))


def add(*args) -> Expr:
    const = _F0
    terms: dict = {}
    for a in args:
        a = as_expr(a)
        if isinstance(a, Num):
            const += a.value
        elif isinstance(a, Add):
            const += a.const
            for t in a.terms:
                c, u = t.coeff_unit()
                terms[u] = terms.get(u, _F0) + c
        else:
            c, u = a.coeff_unit()
            terms[u] = terms.get(u, _F0) + c
    items = [_scale(u, c) for u, c in terms.items() if c != 0]
    if not items:
        return Num(const)
    if const == 0 and len(items) == 1:
        return items[0]
    items.sort(key=_sortkey)
    return Add(const, tuple(items))


def neg(a) -> Expr:
    return mul(MINUS_ONE, a)


def sub(a, b) -> Expr:
    return add(a, neg(as_expr(b)))


def div(a, b) -> Expr:
    return mul(a, power(as_expr(b), MINUS_ONE))


def mul(*args) -> Expr:
    coeff = _F1
    powers: dict = {}
    exp_args: list = []
    for a in args:
        a = as_expr(a)
        if isinstance(a, Num):
            coeff *= a.value
            continue
        if isinstance(a, Mul):
            coeff *= a.coeff
            items = a.factors
        else:
            items = (a,)
        for f in items:
            if isinstance(f, Pow):
                b, e = f.base, f.exp
            else:
                b, e = f, _F1
            if isinstance(b, Func) and b.name == "exp":
                exp_args.append(b.arg if e == 1 else mul(Num(e), b.arg))
                continue
            powers[b] = powers.get(b, _F0) + e
    if coeff == 0:
        return ZERO
    factors: list = []
    redo: list = []
    for b, e in powers.items():
        if e == 0:
            continue
        if isinstance(b, Num):
            p = _num_pow(b.value, e)
            if isinstance(p, Num):
                coeff *= p.value
            elif isinstance(p, Mul):
                coeff *= p.coeff
                factors.extend(p.factors)
            else:
                factors.append(p)
        elif isinstance(b, Mul) and e.denominator == 1:
            redo.append(power(b, Num(e)))
        elif e == 1:
            if isinstance(b, Mul):
                redo.append(b)
            else:
                factors.append(b)
        else:
            factors.append(Pow(b, e))
    if exp_args:
        arg = add(*exp_args)
        if not (isinstance(arg, Num) and arg.value == 0):
            ex = func("exp", arg)
            if isinstance(ex, Func):
                factors.append(ex)
            else:
                redo.append(ex)
    if coeff == 0:
        return ZERO
    if redo:
        return mul(Num(coeff), *factors, *redo)
    if not factors:
        return Num(coeff)
    if len(factors) == 1:
        f = factors[0]
        if coeff == 1:
            return f
        if isinstance(f, Add):
            return add(*(_times(t, coeff) for t in f.args))
    factors.sort(key=_sortkey)
    return Mul(coeff, tuple(factors))


def _times(t: Expr, c: Fraction) -> Expr:
    if isinstance(t, Num):
        return Num(t.value * c)
    k, u = t.coeff_unit()
    return _scale(u, k * c)


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def _num_pow(v: Fraction, e: Fraction) -> Expr:
    if e.denominator == 1:
        n = int(e)
        if v == 0 and n < 0:
            raise ExprError("division by syntactic zero")
        return Num(v**n)
    if v == 0:
        if e < 0:
            raise ExprError("division by syntactic zero")
        return ZERO
    if v == 1:
        return ONE
    q = e.denominator
    if v > 0 or q % 2 == 1:
        sign = 1 if v > 0 else -1
        rp = _iroot(abs(v.numerator), q)
        rq = _iroot(v.denominator, q)
        if rp is not None and rq is not None:
            return Num(Fraction(sign * rp, rq) ** e.numerator)
    k = e.numerator // e.denominator
    frac = e - k
    if k != 0:
        return mul(Num(v**k), Pow(Num(v), frac))
    return Pow(Num(v), e)


def power(base, exponent) -> Expr:
    base = as_expr(base)
    exponent = as_expr(exponent)
    if not isinstance(exponent, Num):
        if isinstance(base, Num) and base.value == 1:
            return ONE
        return func("exp", mul(exponent, func("ln", base)))
    e = exponent.value
    if e == 0:
        return ONE
    if e == 1:
        return base
    if isinstance(base, Num):
        return _num_pow(base.value, e)
    if isinstance(base, Pow):
        if e.denominator == 1 or base.exp.denominator != 1:
            return power(base.base, Num(base.exp * e))
        return Pow(base, e)
    if isinstance(base, Mul) and e.denominator == 1:
        return mul(_num_pow(base.coeff, e), *(power(f, exponent) for f in base.factors))
    if isinstance(base, Func) and base.name == "exp":
        return func("exp", mul(exponent, base.arg))
    return Pow(base, e)


_AT_ZERO = {"sin": ZERO, "cos": ONE, "tan": ZERO, "exp": ONE, "sinh": ZERO,
            "cosh": ONE, "arctan": ZERO}


def func(name: str, arg) -> Expr:
    arg = as_expr(arg)
    if name == "sqrt":
        return power(arg, HALF)
    if name not in BUILTINS:
        raise ExprError(f"unknown builtin function {name!r}")
    if isinstance(arg, Num):
        if arg.value == 0:
            if name == "ln":
                raise ExprError("logarithm of syntactic zero")
            return _AT_ZERO[name]
        if name == "ln" and arg.value == 1:
            return ZERO
    if name == "exp":
        if isinstance(arg, Func) and arg.name == "ln":
            return arg.arg
        if isinstance(arg, Mul) and len(arg.factors) == 1:
            f = arg.factors[0]
            if isinstance(f, Func) and f.name == "ln":
                return power(f.arg, Num(arg.coeff))
    if name == "ln" and isinstance(arg, Func) and arg.name == "exp":
        return arg.arg
    return Func(name, arg)


def exp(a) -> Expr:
    return func("exp", a)


def ln(a) -> Expr:
    return func("ln", a)


def sqrt(a) -> Expr:
    return power(a, HALF)


def sin(a) -> Expr:
    return func("sin", a)


def cos(a) -> Expr:
    return func("cos", a)


def is_const_zero(e: Expr) -> bool:
    return e is ZERO
