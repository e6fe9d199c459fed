"""Tiny expression reader shared by the algebras.

Accepts sums and products of generator names and rational literals, e.g.
``h^2 + 2*(e*f + f*e)`` or ``-1/2*x^1*D^2``; the textual forms printed by the
element classes read back unchanged.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping

from .core import as_scalar

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ParseError(ValueError):
    pass


def _tokens(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"cannot read {text[pos:]!r}")
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", as_scalar(Fraction(num))))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("sym", sym))
        pos = m.end()
    return out


def parse_expression(text: str, env: Mapping[str, object], one):
    """Evaluate ``text`` with generators from ``env``; ``one`` is the unit element."""
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty expression")
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take(sym=None):
        nonlocal pos
        tok = peek()
        if sym is not None and tok != ("sym", sym):
            raise ParseError(f"expected {sym!r} at token {pos}")
        pos += 1
        return tok

    def lift(v):
        return v * one if isinstance(v, (int, Fraction)) else v

    def add(a, b, sign):
        if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
            return a + sign * b
        return lift(a) + sign * lift(b)

    def expr():
        value = term()
        while peek() in (("sym", "+"), ("sym", "-")):
            sign = 1 if take()[1] == "+" else -1
            value = add(value, term(), sign)
        return value

    def term():
        value = unary()
        while peek() == ("sym", "*"):
            take()
            value = value * unary()
        return value

    def unary():
        if peek() == ("sym", "-"):
            take()
            v = unary()
            return -v
        return power()

    def power():
        base = atom()
        if peek() == ("sym", "^"):
            take()
            kind, k = take()
            if kind != "num" or not isinstance(k, int):
                raise ParseError("exponent must be a nonnegative integer")
            if isinstance(base, (int, Fraction)):
                return base ** k
            out = one
            for _ in range(k):
                out = out * base
            return out
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return val
        if kind == "name":
            if val not in env:
                raise ParseError(f"unknown generator {val!r}; expected one of {sorted(env)}")
            return env[val]
        if (kind, val) == ("sym", "("):
            v = expr()
            take(")")
            return v
        raise ParseError(f"unexpected token {val!r}")

    result = expr()
    if pos != len(toks):
        raise ParseError(f"trailing input at token {pos}")
    return lift(result)
