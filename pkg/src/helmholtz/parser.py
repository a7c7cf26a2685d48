"""Recursive-descent parser for the polynomial expression grammar.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT | IDENT | "(" expr ")"

Identifiers are ``t``, ``q<k>``, ``qd<k>``, ``qdd<k>`` (``1 <= k <= n``), and
the declared parameters.  Higher jet coordinates (``qddd<k>`` ...) are also
accepted so that every printed expression parses back.  Division is only
allowed by a nonzero constant, and there is no implicit multiplication.
"""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple

from .expr import TIME, Expression, JetVariable, coord, param, var

__all__ = ["ParseError", "parse", "resolve_identifier", "RESERVED"]

_IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9]*")
_INT = re.compile(r"[0-9]+")
_JET_NAME = re.compile(r"q(d*)([0-9]+)")

RESERVED = re.compile(r"t|q(d*)[0-9]+")


class ParseError(ValueError):
    """Malformed expression text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int | None = None):
        self.message = message
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class _Token(NamedTuple):
    kind: str  # "int", "ident", "op", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        m = _INT.match(text, i)
        if m:
            end = m.end()
            if end < len(text) and (text[end].isalpha()):
                raise ParseError("implicit multiplication is not allowed", end)
            tokens.append(_Token("int", m.group(), i))
            i = end
            continue
        m = _IDENT.match(text, i)
        if m:
            tokens.append(_Token("ident", m.group(), i))
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", len(text)))
    return tokens


def resolve_identifier(name: str, n: int, params: Iterable[str]) -> JetVariable | None:
    """Map an identifier to its jet variable, or ``None`` if it is unknown."""
    if name == "t":
        return TIME
    m = _JET_NAME.fullmatch(name)
    if m:
        k = int(m.group(2))
        if 1 <= k <= n and not m.group(2).startswith("0"):
            return coord(k, len(m.group(1)))
        return None
    if name in set(params):
        return param(name)
    return None


class _Parser:
    def __init__(self, text: str, n: int, params: tuple[str, ...]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n
        self.params = params

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, op: str) -> None:
        if self.tok.kind != "op" or self.tok.text != op:
            raise ParseError(f"expected {op!r}", self.tok.pos)
        self.advance()

    def parse(self) -> Expression:
        if self.tok.kind == "end":
            raise ParseError("empty expression", 0)
        e = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return e

    def expr(self) -> Expression:
        e = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> Expression:
        e = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                e = e * rhs
            else:
                if not rhs.is_constant():
                    raise ParseError("division by a non-constant", op.pos)
                if rhs.is_zero():
                    raise ParseError("division by zero", op.pos)
                e = e / rhs
        return e

    def unary(self) -> Expression:
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            e = self.unary()
            return -e if op == "-" else e
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            t = self.tok
            if t.kind != "int":
                raise ParseError("exponent must be a nonnegative integer literal", t.pos)
            self.advance()
            if self.tok.kind == "op" and self.tok.text == "^":
                raise ParseError("chained '^' is ambiguous; use parentheses", self.tok.pos)
            return base ** int(t.text)
        return base

    def atom(self) -> Expression:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Expression.constant(int(t.text))
        if t.kind == "ident":
            self.advance()
            v = resolve_identifier(t.text, self.n, self.params)
            if v is None:
                raise ParseError(f"unknown identifier {t.text!r}", t.pos)
            if self.tok.kind == "op" and self.tok.text == "(":
                raise ParseError("function application is not supported", self.tok.pos)
            return var(v)
        if t.kind == "op" and t.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "end":
            raise ParseError("unexpected end of input", t.pos)
        raise ParseError(f"unexpected {t.text!r}", t.pos)


def parse(text: str, n: int, params: Iterable[str] = ()) -> Expression:
    """Parse ``text`` into a canonical :class:`Expression` in ``n`` coordinates."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    params = tuple(params)
    for p in params:
        if not _IDENT.fullmatch(p):
            raise ValueError(f"invalid parameter name {p!r}")
        if RESERVED.fullmatch(p):
            raise ValueError(f"parameter name {p!r} collides with a reserved name")
    return _Parser(text, n, params).parse()
