"""Recursive-descent parser for the expression grammar.

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = ("+" | "-") unary | power ;
    power   = atom [ ("^" | "**") unary ] ;
    atom    = number | "pi" | "I" | variable
            | fname "(" expr ")"
            | "complex" "(" signed "," signed ")"
            | "(" expr ")" ;
    fname   = "sin" | "cos" | "sinh" | "cosh" ;
    variable = ("x" | "z") [ digits ] ;      (* bare x or z means x1 *)
    number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;

Numbers are read exactly (``0.1`` is 1/10). Exponents must reduce to
integer constants; negative exponents and division need a variable-free
operand.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .nodes import (
    FUNCTIONS, ComplexConst, Const, Expr, ExprError, Var, add, div, func, mul, neg, pi, power, sub,
)

__all__ = ["ExprSyntaxError", "parse_expression"]


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^(),]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ExprSyntaxError(message, tok[2], self.text)

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] not in ("op",):
            self.error(f"expected {value!r}", tok)
        return tok

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            self.error("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = add(e, rhs) if op == "+" else sub(e, rhs)
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                e = mul(e, rhs)
            else:
                try:
                    e = div(e, rhs)
                except ExprError as exc:
                    raise ExprSyntaxError(str(exc), tok[2], self.text) from None
        return e

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            e = self.unary()
            return e if tok[1] == "+" else neg(e)
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("^", "**"):
            self.take()
            ex = self.unary()
            k = _integer_constant(ex)
            if k is None:
                self.error("exponent must be an integer constant", tok)
            try:
                return power(base, k)
            except ExprError as exc:
                raise ExprSyntaxError(str(exc), tok[2], self.text) from None
        return base

    def signed_number(self) -> float:
        sign = 1.0
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            if self.take()[1] == "-":
                sign = -sign
        tok = self.take()
        if tok[0] != "num":
            self.error("expected a number", tok)
        return sign * float(tok[1])

    def atom(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "num":
            return Const(Fraction(value))
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            if value == "pi":
                return pi
            if value == "I":
                return ComplexConst(1j)
            if value == "complex":
                self.expect("(")
                re_ = self.signed_number()
                self.expect(",")
                im = self.signed_number()
                self.expect(")")
                return ComplexConst(complex(re_, im))
            if value in FUNCTIONS:
                self.expect("(")
                if self.peek()[1] == ")":
                    self.error(f"{value}() needs an argument")
                arg = self.expr()
                self.expect(")")
                return func(value, arg)
            m = re.fullmatch(r"([xz])(\d*)", value)
            if m:
                idx = int(m.group(2)) if m.group(2) else 1
                if idx < 1:
                    raise ExprSyntaxError("variable indices start at 1", pos, self.text)
                return Var(idx)
            raise ExprSyntaxError(f"unknown identifier {value!r}", pos, self.text)
        if kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected token {value!r}", tok)


def _integer_constant(e: Expr):
    if isinstance(e, Const) and e.value.is_rational():
        q = e.value.to_fraction()
        if q.denominator == 1:
            return q.numerator
    return None


def parse_expression(text: str) -> Expr:
    """Parse ``text`` into a canonical :class:`Expr`.

    >>> parse_expression("sin(pi*(x1-1)/2)").to_text()
    'sin(1/2*pi*(-1 + x1))'
    """
    return _Parser(text).parse()
