"""Recursive-descent parser for rational-function expressions.

Grammar (``^`` binds tighter than unary minus, which binds tighter than
``*`` and ``/``)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | "(" expr ")"

The parser builds a small tuple AST; :func:`evaluate` folds it with a
semantics object, so the same front end serves both K and skew polynomials.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .polys import ModP, MultiPoly, var_pos
from .ratfunc import RatFunc

__all__ = ["ParseError", "parse_ast", "evaluate", "parse_expr", "FieldSemantics"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


def _tokenize(text: str):
    out = []
    i = 0
    n = len(text)
    while i < n:
        m = _TOKEN.match(text, i)
        if m is None:
            break
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            out.append(("op", ch, m.start(3)))
        i = m.end()
    out.append(("end", None, n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok[2], self.text)

    def is_op(self, ch):
        kind, val, _ = self.peek()
        return kind == "op" and val == ch

    def expr(self):
        node = self.term()
        while self.is_op("+") or self.is_op("-"):
            _, op, pos = self.take()
            node = ("bin", op, node, self.term(), pos)
        return node

    def term(self):
        node = self.unary()
        while self.is_op("*") or self.is_op("/"):
            _, op, pos = self.take()
            node = ("bin", op, node, self.unary(), pos)
        return node

    def unary(self):
        if self.is_op("-"):
            _, _, pos = self.take()
            return ("neg", self.unary(), pos)
        return self.power()

    def power(self):
        node = self.atom()
        if self.is_op("^"):
            _, _, pos = self.take()
            kind, val, vpos = self.peek()
            if kind != "int":
                self.error("exponent must be a nonnegative integer literal")
            self.take()
            node = ("pow", node, val, pos)
        return node

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return ("num", val, pos)
        if kind == "name":
            self.take()
            return ("var", val, pos)
        if kind == "op" and val == "(":
            self.take()
            node = self.expr()
            if not self.is_op(")"):
                self.error("expected ')'")
            self.take()
            return node
        if kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {val!r}")

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return node


def parse_ast(text: str):
    return _Parser(text).parse()


def evaluate(node, sem, text: str = ""):
    kind = node[0]
    if kind == "num":
        return sem.number(node[1])
    if kind == "var":
        try:
            return sem.variable(node[1])
        except ValueError as exc:
            raise ParseError(str(exc), node[2], text) from None
    if kind == "neg":
        return sem.neg(evaluate(node[1], sem, text))
    if kind == "pow":
        return sem.pow(evaluate(node[1], sem, text), node[2])
    _, op, left, right, pos = node
    a = evaluate(left, sem, text)
    b = evaluate(right, sem, text)
    if op == "+":
        return sem.add(a, b)
    if op == "-":
        return sem.sub(a, b)
    if op == "*":
        return sem.mul(a, b)
    try:
        return sem.div(a, b)
    except ZeroDivisionError:
        raise ZeroDivisionError(f"division by the zero function at position {pos}") from None


class FieldSemantics:
    """Evaluate into K; ``modulus`` selects F_p coefficients instead of Q."""

    def __init__(self, modulus: int | None = None):
        self.modulus = modulus

    def number(self, n: int):
        c = Fraction(n) if self.modulus is None else ModP(n, self.modulus)
        return RatFunc.const(c)

    def variable(self, name: str):
        return RatFunc.from_poly(MultiPoly.var(var_pos(name)))

    def neg(self, a):
        return -a

    def pow(self, a, e):
        return a ** e

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if not b:
            raise ZeroDivisionError
        return a / b


def parse_expr(text: str, modulus: int | None = None) -> RatFunc:
    """Parse ``text`` into a normalized rational function.

    >>> str(parse_expr("x1^2 / x1"))
    'x1'
    """
    return evaluate(parse_ast(text), FieldSemantics(modulus), text)
