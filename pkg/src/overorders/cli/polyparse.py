"""Recursive-descent parser for integer polynomials in ``x``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | base ('^' uint)?
    base   := int | 'x' | '(' expr ')'

Whitespace is ignored.  Polynomials are coefficient lists, lowest degree first.
"""

from __future__ import annotations

import re

_TOKEN = re.compile(r"\s*(?:(\d+)|(\S))")


class PolySyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _add(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _neg(a):
    return [-c for c in a]


def _mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pow(a, e):
    r = [1]
    for _ in range(e):
        r = _mul(r, a)
    return r


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []  # (kind, value, offset)
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            if m.group(1) is not None:
                self.tokens.append(("int", int(m.group(1)), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("sym", m.group(2), m.start(2)))
            pos = m.end()
        self.tokens.append(("end", None, len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, sym):
        kind, val, off = self.take()
        if kind != "sym" or val != sym:
            raise PolySyntaxError(f"expected {sym!r}", off)

    def parse(self):
        p = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected {val!r}", off)
        return p

    def expr(self):
        p = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "+-":
                self.take()
                q = self.term()
                p = _add(p, q if val == "+" else _neg(q))
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val == "*":
                self.take()
                p = _mul(p, self.factor())
            else:
                return p

    def factor(self):
        kind, val, _ = self.peek()
        if kind == "sym" and val == "-":
            self.take()
            return _neg(self.factor())
        p = self.base()
        kind, val, _ = self.peek()
        if kind == "sym" and val == "^":
            self.take()
            kind, e, off = self.take()
            if kind != "int":
                raise PolySyntaxError("exponent must be a nonnegative integer", off)
            p = _pow(p, e)
        return p

    def base(self):
        kind, val, off = self.take()
        if kind == "int":
            if self.peek()[0] == "sym" and self.peek()[1] == ".":
                raise PolySyntaxError("coefficients must be integers", self.peek()[2])
            return [val]
        if kind == "sym" and val == "x":
            return [0, 1]
        if kind == "sym" and val == "(":
            p = self.expr()
            self.expect(")")
            return p
        if kind == "end":
            raise PolySyntaxError("unexpected end of input", off)
        raise PolySyntaxError(f"unexpected {val!r}", off)


def parse_poly(text: str) -> list[int]:
    """Coefficients (lowest degree first) of the polynomial written in ``text``."""
    return _Parser(text).parse()


def format_poly(coeffs, var: str = "x") -> str:
    """Canonical text form accepted by :func:`parse_poly`."""
    coeffs = _trim(coeffs)
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0 and len(coeffs) > 1:
            continue
        if i == 0:
            mono = str(abs(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            if abs(c) != 1:
                mono = f"{abs(c)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + mono)
        else:
            parts.append((" - " if c < 0 else " + ") + mono)
    return "".join(parts)
