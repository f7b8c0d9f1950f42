"""Exact sparse multivariate polynomials over the rationals.

Variables are :class:`VarId` triples ordered so that the natural tuple order is
the variable priority of the block order: ``T`` blocks by ascending index and
position, then ``S`` variables, then the formal parameters ``t`` and ``s``.
Monomials are compared lexicographically with respect to that priority.

Example:
    >>> x, y = T(1, 1), T(1, 2)
    >>> p = Polynomial.var(x) * Polynomial.var(y) - 1
    >>> str(p)
    'T[1][1]*T[1][2] - 1'
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Optional, Tuple, Union

KIND_T = 0
KIND_S = 1
KIND_PARAM = 2

_PARAM_NAMES = {0: "t", 1: "s"}


class VarId(NamedTuple):
    """A variable ``T[block][pos]``, ``S[pos]`` or a parameter ``t``/``s``."""

    kind: int
    block: int
    pos: int

    def __str__(self) -> str:
        if self.kind == KIND_T:
            return f"T[{self.block}][{self.pos}]"
        if self.kind == KIND_S:
            return f"S[{self.pos}]"
        return _PARAM_NAMES[self.pos]

    @property
    def is_param(self) -> bool:
        return self.kind == KIND_PARAM


def T(i: int, j: int) -> VarId:
    return VarId(KIND_T, i, j)


def S(k: int) -> VarId:
    return VarId(KIND_S, 0, k)


T_PARAM = VarId(KIND_PARAM, 0, 0)
S_PARAM = VarId(KIND_PARAM, 0, 1)

# A monomial is a tuple of (variable, exponent) pairs sorted by variable with
# no zero exponents; the empty tuple is the monomial 1.
Monomial = Tuple[Tuple[VarId, int], ...]
ONE: Monomial = ()

_SENTINEL = VarId(99, 0, 0)

Scalar = Union[int, Fraction]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_pow(a: Monomial, k: int) -> Monomial:
    if k == 0:
        return ONE
    return tuple((v, e * k) for v, e in a)


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True iff ``a`` divides ``b``."""
    db = dict(b)
    return all(db.get(v, 0) >= e for v, e in a)


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    """Exact quotient ``b / a``; ``a`` must divide ``b``."""
    da = dict(a)
    out = []
    for v, e in b:
        r = e - da.get(v, 0)
        if r < 0:
            raise ValueError("monomial does not divide")
        if r:
            out.append((v, r))
    return tuple(out)


def mono_multiplicity(a: Monomial, b: Monomial) -> int:
    """Largest k with ``a**k`` dividing ``b`` (``a`` nonconstant)."""
    db = dict(b)
    return min(db.get(v, 0) // e for v, e in a)


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    db = dict(b)
    return tuple((v, min(e, db[v])) for v, e in a if v in db)


def mono_degree(a: Monomial) -> int:
    return sum(e for _, e in a)


def lex_key(m: Monomial):
    """Ascending sort key that lists monomials in descending lex order."""
    return tuple((v, -e) for v, e in m) + ((_SENTINEL, 0),)


def mono_from_dict(d: Mapping[VarId, int]) -> Monomial:
    return tuple(sorted((v, e) for v, e in d.items() if e))


def mono_str(m: Monomial) -> str:
    return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)


class Polynomial:
    """Immutable sparse polynomial with :class:`~fractions.Fraction` coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def var(cls, v: VarId) -> "Polynomial":
        return cls._raw({((v, 1),): Fraction(1)})

    @classmethod
    def const(cls, c: Scalar) -> "Polynomial":
        return cls({ONE: c})

    @classmethod
    def monomial(cls, m: Monomial, c: Scalar = 1) -> "Polynomial":
        return cls({m: c})

    # -- structure -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def variables(self) -> frozenset:
        return frozenset(v for m in self.terms for v, _ in m)

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def degree_in(self, v: VarId) -> int:
        return max((dict(m).get(v, 0) for m in self.terms), default=0)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: lex_key(mc[0]))

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return min(self.terms, key=lex_key)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def is_constant(self) -> bool:
        return all(m == ONE for m in self.terms)

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial()
            return Polynomial._raw({m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, m: Monomial, c: Scalar = 1) -> "Polynomial":
        if not c:
            return Polynomial()
        return Polynomial._raw({mono_mul(m, m2): c2 * c for m2, c2 in self.terms.items()})

    def diff(self, v: VarId) -> "Polynomial":
        """Partial derivative with respect to ``v``."""
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if not e:
                continue
            d[v] = e - 1
            mm = mono_from_dict(d)
            out[mm] = out.get(mm, 0) + c * e
        return Polynomial(out)

    def primitive(self) -> "Polynomial":
        """Scale to integer coefficients with gcd 1 and positive leading coefficient."""
        if not self.terms:
            return self
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        ints = {m: int(c * den) for m, c in self.terms.items()}
        g = 0
        for c in ints.values():
            g = gcd(g, c)
        if ints[self.leading_monomial()] < 0:
            g = -g
        return Polynomial({m: Fraction(c, g) for m, c in ints.items()})

    # -- comparison ------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self) -> str:
        from .parsing import format_polynomial

        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


def var(v: VarId) -> Polynomial:
    return Polynomial.var(v)


@dataclass(frozen=True)
class RationalFunction:
    """A quotient ``num / den`` of polynomials; ``den`` is nonzero."""

    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")

    def cancel_monomial(self) -> "RationalFunction":
        """Divide out the largest monomial dividing both numerator and denominator."""
        if self.num.is_zero():
            return RationalFunction(self.num, Polynomial.const(1))
        monos = list(self.num.terms) + list(self.den.terms)
        g = monos[0]
        for m in monos[1:]:
            g = mono_gcd(g, m)
        if not g:
            return self
        return RationalFunction(
            Polynomial({mono_div(m, g): c for m, c in self.num.terms.items()}),
            Polynomial({mono_div(m, g): c for m, c in self.den.terms.items()}),
        )

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"


class VariableMismatch(ValueError):
    """A polynomial mentions variables outside the relation set's universe."""


class RelationSet:
    """Relations with designated, pairwise coprime leading monomials.

    Reduction rewrites a leading monomial ``L`` of ``g = c*L + tail`` to
    ``-tail/c``. Because the leading monomials are the lex-leading terms and are
    pairwise coprime, the relations form a Groebner basis and the remainder is
    unique.
    """

    def __init__(self, relations: Iterable[Polynomial], universe: Iterable[VarId],
                 leading: Optional[Iterable[Monomial]] = None):
        self.relations: Tuple[Polynomial, ...] = tuple(relations)
        self.universe: frozenset = frozenset(universe)
        if leading is None:
            leading = [g.leading_monomial() for g in self.relations]
        self.leading: Tuple[Monomial, ...] = tuple(leading)
        if len(self.leading) != len(self.relations):
            raise ValueError("one leading monomial per relation required")
        rules = []
        for g, lm in zip(self.relations, self.leading):
            c = g.coefficient(lm)
            if not c:
                raise ValueError(f"{mono_str(lm)} is not a term of {g}")
            if lm != g.leading_monomial():
                raise ValueError(f"{mono_str(lm)} is not the lex-leading term of {g}")
            tail = Polynomial._raw({m: -cc / c for m, cc in g.terms.items() if m != lm})
            rules.append((lm, tail))
        self._rules = tuple(rules)
        self._tail_powers: Dict[Tuple[int, int], Polynomial] = {}
        self._nf_cache: Dict[Monomial, Polynomial] = {}

    def __len__(self) -> int:
        return len(self.relations)

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.relations)

    def is_confluent(self) -> bool:
        """True iff the leading monomials have pairwise disjoint supports."""
        supports = [frozenset(v for v, _ in lm) for lm in self.leading]
        for i in range(len(supports)):
            for j in range(i + 1, len(supports)):
                if supports[i] & supports[j]:
                    return False
        return True

    def check_universe(self, p: Polynomial) -> None:
        extra = {v for v in p.variables() if not v.is_param and v not in self.universe}
        if extra:
            names = ", ".join(sorted(str(v) for v in extra))
            raise VariableMismatch(f"variables outside the algebra: {names}")

    def _tail_power(self, idx: int, k: int) -> Polynomial:
        key = (idx, k)
        p = self._tail_powers.get(key)
        if p is None:
            p = self._rules[idx][1] ** k
            self._tail_powers[key] = p
        return p

    def _nf_monomial(self, m: Monomial) -> Polynomial:
        hit = self._nf_cache.get(m)
        if hit is not None:
            return hit
        for idx, (lm, _) in enumerate(self._rules):
            if mono_divides(lm, m):
                k = mono_multiplicity(lm, m)
                q = mono_div(m, mono_pow(lm, k))
                out: Dict[Monomial, Fraction] = {}
                for tm, tc in self._tail_power(idx, k).terms.items():
                    for rm, rc in self._nf_monomial(mono_mul(q, tm)).terms.items():
                        s = out.get(rm, 0) + tc * rc
                        if s:
                            out[rm] = s
                        else:
                            out.pop(rm, None)
                result = Polynomial._raw(out)
                break
        else:
            result = Polynomial._raw({m: Fraction(1)})
        self._nf_cache[m] = result
        return result

    def is_standard(self, m: Monomial) -> bool:
        return not any(mono_divides(lm, m) for lm, _ in self._rules)


def normal_form(p: Polynomial, rels: RelationSet) -> Polynomial:
    """Remainder of ``p`` on division by ``rels``; zero iff ``p`` is in the ideal."""
    rels.check_universe(p)
    out: Dict[Monomial, Fraction] = {}
    for m, c in p.terms.items():
        for rm, rc in rels._nf_monomial(m).terms.items():
            s = out.get(rm, 0) + c * rc
            if s:
                out[rm] = s
            else:
                out.pop(rm, None)
    return Polynomial._raw(out)


def apply_derivation(images: Mapping[VarId, Polynomial], p: Polynomial) -> Polynomial:
    """Apply the Leibniz extension of ``v -> images[v]`` (default zero) to ``p``."""
    out = Polynomial()
    for m, c in p.terms.items():
        for i, (v, e) in enumerate(m):
            img = images.get(v)
            if img is None or img.is_zero():
                continue
            rest = m[:i] + (((v, e - 1),) if e > 1 else ()) + m[i + 1:]
            out = out + img.mul_monomial(rest, c * e)
    return out


def substitute(p: Polynomial, assignment: Mapping[VarId, Polynomial]) -> Polynomial:
    """Ring-homomorphic substitution; unassigned variables map to themselves."""
    powers: Dict[Tuple[VarId, int], Polynomial] = {}

    def power(v: VarId, e: int) -> Polynomial:
        key = (v, e)
        hit = powers.get(key)
        if hit is None:
            hit = assignment[v] ** e
            powers[key] = hit
        return hit

    out = Polynomial()
    for m, c in p.terms.items():
        fixed = []
        term = Polynomial.const(c)
        for v, e in m:
            if v in assignment:
                term = term * power(v, e)
            else:
                fixed.append((v, e))
        out = out + term.mul_monomial(tuple(fixed))
    return out


def scale_variables(p: Polynomial, exponents: Mapping[VarId, int],
                    param: VarId = T_PARAM) -> Tuple[Polynomial, int]:
    """Substitute ``v -> param**exponents[v] * v`` allowing negative exponents.

    Returns ``(cleared, shift)`` where ``cleared = param**shift * p(...)`` is a
    polynomial and ``shift >= 0`` is the smallest such power.
    """
    weights = {}
    for m in p.terms:
        weights[m] = sum(exponents.get(v, 0) * e for v, e in m)
    shift = max(0, -min(weights.values(), default=0))
    out = Polynomial()
    for m, c in p.terms.items():
        k = weights[m] + shift
        out = out + Polynomial.monomial(mono_mul(m, ((param, k),) if k else ONE), c)
    return out, shift


def evaluate_numeric(p: Polynomial, point: Mapping[VarId, object]):
    """Evaluate ``p`` at complex (or numpy array) coordinates.

    Terms are grouped by their first variable and evaluated Horner-fashion in
    that variable; coefficients are converted to float.
    """
    return _horner(p.terms, point)


def _horner(terms: Mapping[Monomial, Fraction], point) -> complex:
    if not terms:
        return 0j
    groups: Dict[Optional[VarId], Dict[int, Dict[Monomial, Fraction]]] = {}
    for m, c in terms.items():
        if not m:
            groups.setdefault(None, {}).setdefault(0, {})[ONE] = c
            continue
        v, e = m[0]
        groups.setdefault(v, {}).setdefault(e, {})[m[1:]] = c
    total = 0j
    for v, by_exp in groups.items():
        if v is None:
            total = total + complex(by_exp[0][ONE])
            continue
        x = point[v]
        top = max(by_exp)
        acc = 0j
        for e in range(top, 0, -1):
            sub = by_exp.get(e)
            if sub:
                acc = acc + _horner(sub, point)
            acc = acc * x
        total = total + acc
    return total


def term_magnitude(p: Polynomial, point: Mapping[VarId, object]):
    """Sum of absolute values of the terms of ``p`` at ``point``."""
    total = 0.0
    for m, c in p.terms.items():
        t = abs(float(c))
        for v, e in m:
            t = t * abs(point[v]) ** e
        total = total + t
    return total
