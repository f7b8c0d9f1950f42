"""Text form of polynomials.

Grammar (whitespace insignificant)::

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' uint)?
    atom     := rational | var | '(' expr ')'
    rational := uint ('/' uint)?
    var      := 'T' '[' uint ']' '[' uint ']' | 'S' '[' uint ']' | 't' | 's'
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Collection, List, NamedTuple, Optional

from .poly import S_PARAM, T_PARAM, Polynomial, S, T, VarId, mono_str

_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


class PolynomialSyntaxError(SyntaxError):
    """Malformed polynomial text; ``pos`` is a 0-based character offset."""

    def __init__(self, text: str, pos: int, expected: str, location: Optional[str] = None):
        self.text = text
        self.pos = pos
        self.expected = expected
        self.location = location
        found = text[pos] if pos < len(text) else "end of input"
        where = f"{location}: " if location else ""
        super().__init__(f"{where}at position {pos}: expected {expected}, found {found!r}")


class UnknownVariable(ValueError):
    """A variable index outside the active algebra."""

    def __init__(self, v: VarId, pos: Optional[int] = None):
        self.var = v
        self.pos = pos
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"unknown variable {v}{where}")


class _Tok(NamedTuple):
    kind: str  # "int", a punctuation char, or "end"
    value: str
    pos: int


def _tokenize(text: str) -> List[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            toks.append(_Tok("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(_Tok(m.group(2), m.group(2), m.start(2)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, variables: Optional[Collection[VarId]]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.variables = None if variables is None else frozenset(variables)

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected: str):
        raise PolynomialSyntaxError(self.text, self.tok.pos, expected)

    def eat(self, kind: str, expected: Optional[str] = None) -> _Tok:
        tok = self.tok
        if tok.kind != kind:
            self.fail(expected or repr(kind))
        self.i += 1
        return tok

    def uint(self) -> int:
        return int(self.eat("int", "unsigned integer").value)

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.tok.kind != "end":
            self.fail("operator or end of input")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        if self.tok.kind in ("+", "-"):
            sign = -1 if self.tok.kind == "-" else 1
            self.i += 1
        p = self.term() * sign
        while self.tok.kind in ("+", "-"):
            op = self.eat(self.tok.kind).kind
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.tok.kind == "*":
            self.i += 1
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        p = self.atom()
        if self.tok.kind == "^":
            self.i += 1
            p = p ** self.uint()
        return p

    def atom(self) -> Polynomial:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            num = int(tok.value)
            if self.tok.kind == "/":
                self.i += 1
                den = self.uint()
                if den == 0:
                    raise PolynomialSyntaxError(self.text, self.toks[self.i - 1].pos,
                                                "nonzero denominator")
                return Polynomial.const(Fraction(num, den))
            return Polynomial.const(num)
        if tok.kind == "(":
            self.i += 1
            p = self.expr()
            self.eat(")", "')'")
            return p
        if tok.kind == "T":
            self.i += 1
            self.eat("[", "'['")
            i = self.uint()
            self.eat("]", "']'")
            self.eat("[", "'[' (second index)")
            j = self.uint()
            self.eat("]", "']'")
            return self._var(T(i, j), tok.pos)
        if tok.kind == "S":
            self.i += 1
            self.eat("[", "'['")
            k = self.uint()
            self.eat("]", "']'")
            return self._var(S(k), tok.pos)
        if tok.kind == "t":
            self.i += 1
            return Polynomial.var(T_PARAM)
        if tok.kind == "s":
            self.i += 1
            return Polynomial.var(S_PARAM)
        self.fail("number, variable or '('")

    def _var(self, v: VarId, pos: int) -> Polynomial:
        if self.variables is not None and v not in self.variables:
            raise UnknownVariable(v, pos)
        return Polynomial.var(v)


def parse_polynomial(text: str, variables: Optional[Collection[VarId]] = None) -> Polynomial:
    """Parse ``text``; when ``variables`` is given, other T/S variables are rejected."""
    return _Parser(text, variables).parse()


def parse_var(text: str, variables: Optional[Collection[VarId]] = None) -> VarId:
    """Parse a single variable name such as ``T[1][2]`` or ``S[1]``."""
    p = parse_polynomial(text, variables)
    if len(p.terms) == 1:
        (m, c), = p.terms.items()
        if c == 1 and len(m) == 1 and m[0][1] == 1:
            return m[0][0]
    raise PolynomialSyntaxError(text, 0, "a single variable")


def format_polynomial(p: Polynomial) -> str:
    """Canonical text: terms in descending block order, explicit '*'."""
    if p.is_zero():
        return "0"
    parts = []
    for idx, (m, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        if not m:
            body = str(a)
        elif a == 1:
            body = mono_str(m)
        else:
            body = f"{a}*{mono_str(m)}"
        if idx == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)
