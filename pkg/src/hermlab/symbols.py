"""Expression grammar for user-supplied multiplier symbols.

Expressions use the variables z1..zn with +, -, *, /, ^ (right
associative), sqrt, exp, parentheses and numeric constants, e.g.

    sqrt(z1/(z1+1))
    (z1*z2)^0.5 / (z1+z2+2)

A recursive-descent parser produces a closure over numpy arrays; parse
errors carry the 0-based offset of the offending character.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import ValidationError
from .multiplier import MultiplierSymbol

__all__ = ["parse_symbol", "SymbolParseError"]


class SymbolParseError(ValidationError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


_TOKEN = re.compile(
    r"(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

_FUNCTIONS = {"sqrt": np.sqrt, "exp": np.exp}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise SymbolParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """expr := term (('+'|'-') term)*; term := unary (('*'|'/') unary)*;
    unary := '-' unary | power; power := atom ('^' unary)?."""

    def __init__(self, text: str, n: int):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise SymbolParseError(f"expected {op!r}", pos)
        return self.next()

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise SymbolParseError(f"unexpected token {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                node = ("add" if val == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.unary()
                node = ("mul" if val == "*" else "div", node, rhs)
            else:
                return node

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.next()
            return ("neg", self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.next()
            return ("pow", node, self.unary())
        return node

    def atom(self):
        kind, val, pos = self.next()
        if kind == "num":
            return ("const", float(val))
        if kind == "name":
            if val in _FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return ("call", val, arg)
            m = re.fullmatch(r"z(\d+)", val)
            if m:
                idx = int(m.group(1))
                if not 1 <= idx <= self.n:
                    raise SymbolParseError(
                        f"variable {val} outside z1..z{self.n}", pos
                    )
                return ("var", idx - 1)
            raise SymbolParseError(f"unknown identifier {val!r}", pos)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise SymbolParseError(
            "expected a number, variable, function or '('", pos if kind != "end" else len(self.text)
        )


def _evaluate(node, args):
    op = node[0]
    if op == "const":
        return node[1]
    if op == "var":
        return args[node[1]]
    if op == "neg":
        return -_evaluate(node[1], args)
    if op == "call":
        return _FUNCTIONS[node[1]](_evaluate(node[2], args))
    a = _evaluate(node[1], args)
    b = _evaluate(node[2], args)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** b
    raise AssertionError(f"unknown node {op}")


def parse_symbol(expression: str, n: int = 1, sector: float | None = None) -> MultiplierSymbol:
    """Compile an expression over z1..zn into a MultiplierSymbol.

    The sampled bound over the eigenvalue lattice is computed at build
    time, which also surfaces evaluation domain errors (division by zero,
    non-finite values) immediately.
    """
    ast = _Parser(expression, n).parse()

    def evaluator(*zs):
        zs = [np.asarray(z) for z in zs]
        with np.errstate(divide="raise", invalid="raise"):
            try:
                out = _evaluate(ast, zs)
            except FloatingPointError as exc:
                raise ValidationError(
                    f"symbol {expression!r} hit an evaluation domain error: {exc}"
                ) from exc
        shape = np.broadcast_shapes(*(z.shape for z in zs))
        return np.broadcast_to(np.asarray(out), shape)

    return MultiplierSymbol(dim=n, evaluator=evaluator, sector=sector, name=expression)
