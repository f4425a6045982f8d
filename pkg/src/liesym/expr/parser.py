"""Recursive-descent parser for the textual expression grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ['^' unary]            (right associative)
    atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'

Numbers are integers or decimals, read exactly (so ``1/3`` is the rational 1/3).  An
identifier applied to arguments is a builtin when its name is one of
:data:`~liesym.expr.nodes.BUILTINS`, otherwise an opaque function.  Opaque
derivatives are spelled ``f__d1_0(x, y)`` (multi-index after ``__d``).
"""
from __future__ import annotations

import re
from fractions import Fraction

from .calculus import normalize
from .nodes import BUILTINS, Expr, ExprError, Num, Sym, add, func, mul, neg, opaque, power

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)
_DERIV = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z0-9_]*?)__d(?P<idx>\d+(?:_\d+)*)$")
_OPERATOR_CHARS = set("%&|!<>=~@#$;:?\\")


class ParseError(ExprError):
    """Syntax error at a byte offset of the source text."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownOperatorError(ParseError):
    pass


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            ch = text[pos]
            if ch in _OPERATOR_CHARS:
                raise UnknownOperatorError(f"unknown operator {ch!r}", pos)
            raise ParseError(f"unexpected character {ch!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value or kind != "op":
            shown = text or "end of input"
            raise ParseError(f"expected {value!r}, found {shown!r}", pos)

    def parse(self) -> Expr:
        e = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {text!r}", pos)
        return e

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            t = self.term()
            terms.append(t if op == "+" else neg(t))
        return terms[0] if len(terms) == 1 else add(*terms)

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op, pos = self.take()[1:]
            rhs = self.unary()
            if op == "*":
                e = mul(e, rhs)
            else:
                try:
                    e = mul(e, power(rhs, -1))
                except ExprError as exc:
                    raise ParseError(str(exc), pos) from None
        return e

    def unary(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            pos = self.take()[2]
            expo = self.unary()
            try:
                return power(base, expo)
            except ExprError as exc:
                raise ParseError(str(exc), pos) from None
        return base

    def atom(self) -> Expr:
        kind, text, pos = self.take()
        if kind == "num":
            return Num(Fraction(text))
        if kind == "ident":
            if self.peek()[:2] == ("op", "("):
                self.take()
                args = [self.expr()]
                while self.peek()[:2] == ("op", ","):
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                return self.apply(text, args, pos)
            return Sym(text)
        if kind == "op" and text == "(":
            e = self.expr()
            self.expect(")")
            return e
        shown = text or "end of input"
        raise ParseError(f"unexpected {shown!r}", pos)

    def apply(self, name: str, args: list, pos: int) -> Expr:
        if name in BUILTINS:
            if len(args) != 1:
                raise ParseError(f"{name} takes exactly one argument", pos)
            try:
                return func(name, args[0])
            except ExprError as exc:
                raise ParseError(str(exc), pos) from None
        m = _DERIV.match(name)
        if m:
            orders = tuple(int(k) for k in m.group("idx").split("_"))
            if len(orders) != len(args):
                raise ParseError(f"derivative index of {name} does not match {len(args)} arguments", pos)
            return opaque(m.group("name"), args, orders)
        return opaque(name, args)


def parse(text: str, normalized: bool = True) -> Expr:
    """Parse ``text``; the result is normalized unless ``normalized`` is false."""
    if not isinstance(text, str):
        raise TypeError("parse expects a string")
    e = _Parser(text).parse()
    return normalize(e) if normalized else e
