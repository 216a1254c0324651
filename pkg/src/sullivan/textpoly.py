"""Syntax for polynomials such as ``3/2*a^2*b - theta*w + 1``.

Parsing is purely syntactic: a polynomial is a tuple of terms
``(coefficient, ((name, exponent), ...))`` with factor order preserved, since
order matters for odd elements.  Evaluation happens in an algebra.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import AlgebraError

Term = tuple  # (Fraction, tuple[tuple[str, int], ...])

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_.']*)|(?P<op>[-+*/^()]))")


class PolynomialSyntaxError(AlgebraError):
    def __init__(self, message: str, column: int):
        self.column = column
        super().__init__(f"column {column}: {message}")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos + 1)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


def parse_polynomial(text: str) -> tuple[Term, ...]:
    toks = _tokens(text)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def integer():
        kind, val, col = take()
        if kind != "num":
            raise PolynomialSyntaxError(f"expected an integer, got {val or 'end of input'!r}", col)
        return int(val)

    def term(sign):
        coeff = Fraction(sign)
        factors = []
        while True:
            kind, val, col = peek()
            if kind == "num":
                take()
                num = Fraction(int(val))
                if peek()[1] == "/" and peek()[0] == "op":
                    take()
                    den = integer()
                    if den == 0:
                        raise PolynomialSyntaxError("zero denominator", col)
                    num /= den
                coeff *= num
            elif kind == "name":
                take()
                exp = 1
                if peek()[1] == "^":
                    take()
                    exp = integer()
                if exp:
                    factors.append((val, exp))
            else:
                raise PolynomialSyntaxError(f"expected a number or a name, got {val or 'end of input'!r}", col)
            if peek()[1] == "*":
                take()
                continue
            return coeff, tuple(factors)

    terms = []
    kind, val, col = peek()
    if kind == "end":
        raise PolynomialSyntaxError("empty polynomial", col)
    sign = 1
    if val in "+-" and kind == "op":
        take()
        sign = -1 if val == "-" else 1
    while True:
        c, f = term(sign)
        if c:
            terms.append((c, f))
        kind, val, col = peek()
        if kind == "end":
            break
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
            continue
        raise PolynomialSyntaxError(f"unexpected {val!r}", col)
    return tuple(terms)


def format_polynomial(terms) -> str:
    from .algebra import format_rational

    if not terms:
        return "0"
    out = []
    for c, factors in terms:
        body = "*".join(n if e == 1 else f"{n}^{e}" for n, e in factors)
        mag = abs(c)
        if not body:
            body = format_rational(mag)
        elif mag != 1:
            body = f"{format_rational(mag)}*{body}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def evaluate(terms, algebra):
    """Evaluate parsed terms in ``algebra`` (names resolved by ``algebra[name]``)."""
    total = algebra.zero()
    for c, factors in terms:
        x = algebra.scalar(c)
        for name, e in factors:
            try:
                g = algebra[name]
            except AlgebraError:
                raise AlgebraError(f"unknown name {name!r}") from None
            x = x * (g ** e)
        total = total + x
    return total


def names_in(terms) -> set[str]:
    return {n for _, fs in terms for n, _ in fs}


def element(algebra, text: str):
    return evaluate(parse_polynomial(text), algebra)
