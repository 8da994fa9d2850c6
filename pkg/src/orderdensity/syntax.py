"""Tiny recursive-descent parser for the element / polynomial text syntax.

The grammar is ordinary infix arithmetic::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor | implicit_factor)*
    factor := ('-' | '+') factor | power
    power  := atom ('^' INTEGER)?
    atom   := INTEGER | SYMBOL | '(' expr ')'

Implicit multiplication (``2T``, ``3(T+1)``) is accepted.  Evaluation is
delegated to an *algebra* object so the same parser builds field elements,
polynomials over F_p (moduli) and rational functions over F_q.
"""
from __future__ import annotations

import re

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - the regex always matches non-space
            raise ParseError(f"cannot tokenize {text!r} at {pos}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("sym", name))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {text!r}")
            tokens.append(("op", op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text, algebra):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.alg = algebra

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression")
        value = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            value = self.alg.add(value, rhs) if op == "+" else self.alg.sub(value, rhs)
        return value

    def term(self):
        value = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.factor()
                value = self.alg.mul(value, rhs) if val == "*" else self.alg.div(value, rhs)
            elif kind in ("num", "sym") or (kind == "op" and val == "("):
                value = self.alg.mul(value, self.power())
            else:
                return value

    def factor(self):
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.factor()
            return self.alg.neg(inner) if val == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be a non-negative integer in {self.text!r}")
            return self.alg.pow(base, val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.alg.const(val)
        if kind == "sym":
            return self.alg.symbol(val)
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_with(text: str, algebra):
    """Parse ``text`` and evaluate it with ``algebra``'s callbacks."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    return _Parser(text, algebra).parse()


def format_terms(terms, symbol: str, coef_fmt) -> str:
    """Render ``[(degree, coef), ...]`` (highest degree first, nonzero coefs) as text.

    ``coef_fmt(c)`` returns ``(text, is_one, needs_parens)``.
    """
    if not terms:
        return "0"
    parts = []
    for deg, c in terms:
        text, is_one, parens = coef_fmt(c)
        if deg == 0:
            parts.append(text)
            continue
        mono = symbol if deg == 1 else f"{symbol}^{deg}"
        if is_one:
            parts.append(mono)
        else:
            parts.append(f"({text})*{mono}" if parens else f"{text}*{mono}")
    return "+".join(parts)
