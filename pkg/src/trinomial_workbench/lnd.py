"""Derivations of presented algebras: ideal preservation, local nilpotency,
homogeneity, vertical/horizontal type, exponentials and bounded search."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, lcm
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .lattice import NotHomogeneous, WeightAssignment, degree_of
from .poly import (S_PARAM, T_PARAM, Monomial, Polynomial, RationalFunction, VarId,
                   apply_derivation, lex_key, mono_from_dict, normal_form, substitute)
from .variety import PresentedAlgebra, dimension

log = logging.getLogger(__name__)


class IdealNotPreserved(ValueError):
    """The derivation does not map the relation ideal into itself."""


class NotLND(ValueError):
    """Local nilpotency could not be certified within the cap."""


class ZeroDerivation(ValueError):
    pass


class MissingInvariant(ValueError):
    """Type classification on a non-trinomial algebra needs a rational invariant."""


class DegreeOutOfRange(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Derivation:
    """A derivation given by the images of the generators (missing images are zero)."""

    images: Mapping[VarId, Polynomial]
    base: PresentedAlgebra

    def __post_init__(self):
        clean = {}
        universe = set(self.base.variables)
        for v, p in self.images.items():
            if v not in universe:
                raise ValueError(f"{v} is not a generator of the algebra")
            if any(x.is_param for x in p.variables()):
                raise ValueError("derivation images may not contain parameters")
            if p:
                clean[v] = p
        object.__setattr__(self, "images", clean)

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply_derivation(self.images, p)

    def image(self, v: VarId) -> Polynomial:
        return self.images.get(v, Polynomial())

    def is_zero(self) -> bool:
        return not self.images

    def reduced(self) -> "Derivation":
        rels = self.base.relations
        return Derivation({v: normal_form(p, rels) for v, p in self.images.items()}, self.base)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.base is other.base and self.images == other.images

    def __hash__(self) -> int:
        return hash(frozenset(self.images.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{v}: {p}" for v, p in sorted(self.images.items()))
        return f"Derivation({{{body}}})"


def partial_derivation(base: PresentedAlgebra, v: VarId) -> Derivation:
    """``d/dv``; a derivation of the algebra when ``v`` occurs in no relation."""
    return Derivation({v: Polynomial.const(1)}, base)


@dataclass(frozen=True)
class IdealCheck:
    preserved: bool
    residues: Tuple[Polynomial, ...]

    def __bool__(self) -> bool:
        return self.preserved


def check_preserves_ideal(delta: Derivation) -> IdealCheck:
    rels = delta.base.relations
    residues = tuple(normal_form(delta(g), rels) for g in rels)
    return IdealCheck(all(r.is_zero() for r in residues), residues)


@dataclass(frozen=True)
class NilpotencyReport:
    locally_nilpotent: bool
    cap: int
    nil_degrees: Mapping[VarId, Optional[int]]

    @property
    def verdict(self) -> str:
        return "locally-nilpotent" if self.locally_nilpotent else "not-nilpotent-within-cap"


def default_cap(delta: Derivation) -> int:
    base = delta.base
    if base.origin is not None:
        dim = dimension(base.origin)
    else:
        dim = len(base.variables) - len(base.relations)
    img_deg = max((p.total_degree() for p in delta.images.values()), default=0)
    rel_deg = max((g.total_degree() for g in base.relations), default=1)
    return max(2, 2 + dim * img_deg * rel_deg)


def nil_degree(delta: Derivation, p: Polynomial, cap: int) -> Optional[int]:
    """Least n <= cap with delta^n(p) = 0 in the quotient, else None."""
    rels = delta.base.relations
    cur = normal_form(p, rels)
    for n in range(cap + 1):
        if cur.is_zero():
            return n
        if n == cap:
            break
        cur = normal_form(delta(cur), rels)
    return None


def check_locally_nilpotent(delta: Derivation, cap: Optional[int] = None) -> NilpotencyReport:
    """Iterate ``delta`` on each generator, reducing after every step.

    Exceeding ``cap`` is inconclusive, never a proof that ``delta`` is not an LND.
    """
    if not check_preserves_ideal(delta):
        raise IdealNotPreserved("the derivation does not preserve the relation ideal")
    if cap is None:
        cap = default_cap(delta)
    degrees = {v: nil_degree(delta, Polynomial.var(v), cap) for v in delta.base.variables}
    return NilpotencyReport(all(d is not None for d in degrees.values()), cap, degrees)


class NotHomogeneousDerivation(ValueError):
    def __init__(self, first: VarId, second: VarId, detail: str = ""):
        self.pair = (first, second)
        super().__init__(f"images of {first} and {second} shift degrees differently {detail}".strip())


def homogeneity_degree(delta: Derivation, w: WeightAssignment, with_torsion: bool = False):
    """The degree ``g0`` with ``deg delta(x) = deg x + g0`` for every moved generator."""
    if delta.is_zero():
        raise ZeroDerivation("the zero derivation has no degree")
    g0 = None
    first = None
    for v in sorted(delta.images):
        try:
            d = degree_of(delta.images[v], w, with_torsion)
        except NotHomogeneous as exc:
            raise NotHomogeneousDerivation(v, v, f"(image not homogeneous: {exc})") from exc
        inc = w.sub(d, w.monomial_degree(((v, 1),), with_torsion))
        if g0 is None:
            g0, first = inc, v
        elif inc != g0:
            raise NotHomogeneousDerivation(first, v, f"({g0} vs {inc})")
    return g0


def derivation_of_quotient(delta: Derivation, f: RationalFunction) -> RationalFunction:
    """``delta(num/den)`` by the quotient rule, numerator reduced modulo the relations."""
    rels = delta.base.relations
    num = normal_form(delta(f.num) * f.den - f.num * delta(f.den), rels)
    return RationalFunction(num, f.den * f.den).cancel_monomial()


@dataclass(frozen=True)
class TypeVerdict:
    kind: str
    method: str
    value: Optional[RationalFunction] = None

    @property
    def horizontal(self) -> bool:
        return self.kind == "horizontal"


def classify_type(delta: Derivation, invariant: Optional[RationalFunction] = None) -> TypeVerdict:
    """Vertical or horizontal type.

    With an ``invariant`` the derivation is evaluated on it; otherwise (trinomial
    algebras only) the type is read off from the images of the T variables.
    """
    if invariant is not None:
        value = derivation_of_quotient(delta, invariant)
        kind = "vertical" if value.num.is_zero() else "horizontal"
        return TypeVerdict(kind, "invariant", value)
    if not delta.base.is_trinomial:
        raise MissingInvariant("supply a rational torus invariant for non-trinomial algebras")
    rels = delta.base.relations
    moved = any(not normal_form(delta.image(v), rels).is_zero() for v in delta.base.t_vars())
    return TypeVerdict("horizontal" if moved else "vertical", "t-image")


@dataclass(frozen=True, eq=False)
class AutomorphismMap:
    """``exp(param * delta)`` as images of the generators."""

    images: Mapping[VarId, Polynomial]
    base: PresentedAlgebra
    param: VarId = S_PARAM

    def apply(self, p: Polynomial) -> Polynomial:
        return normal_form(substitute(p, self.images), self.base.relations)

    def specialize(self, value) -> Dict[VarId, Polynomial]:
        sub = {self.param: Polynomial.const(value)}
        return {v: substitute(p, sub) for v, p in self.images.items()}

    def rename_param(self, new: VarId) -> "AutomorphismMap":
        sub = {self.param: Polynomial.var(new)}
        return AutomorphismMap({v: substitute(p, sub) for v, p in self.images.items()},
                               self.base, new)

    def relation_images(self) -> Tuple[Polynomial, ...]:
        return tuple(self.apply(g) for g in self.base.relations)


def exponential(delta: Derivation, cap: Optional[int] = None, param: VarId = S_PARAM,
                report: Optional[NilpotencyReport] = None) -> AutomorphismMap:
    """Images ``x -> sum_n param^n / n! * delta^n(x)``; finite by nilpotency."""
    if report is None:
        report = check_locally_nilpotent(delta, cap)
    if not report.locally_nilpotent:
        raise NotLND("local nilpotency not certified within the cap")
    rels = delta.base.relations
    s = Polynomial.var(param)
    images = {}
    for v in delta.base.variables:
        cur = Polynomial.var(v)
        total = Polynomial()
        n = 0
        while not cur.is_zero():
            total = total + cur * (s ** n) * Fraction(1, factorial(n))
            cur = normal_form(delta(cur), rels)
            n += 1
        images[v] = total
    return AutomorphismMap(images, delta.base, param)


def composition_defect(aut: AutomorphismMap, other: VarId = T_PARAM) -> Dict[VarId, Polynomial]:
    """``exp(s d) o exp(s' d) - exp((s+s') d)`` on each generator, reduced.

    ``other`` plays the role of the second time parameter; all entries are zero
    for a genuine one-parameter group.
    """
    second = aut.rename_param(other)
    shifted = {aut.param: Polynomial.var(aut.param) + Polynomial.var(other)}
    out = {}
    for v in aut.base.variables:
        composed = substitute(second.images[v], aut.images)
        direct = substitute(aut.images[v], shifted)
        out[v] = normal_form(composed - direct, aut.base.relations)
    return out


def homogeneous_components(delta: Derivation, w: WeightAssignment,
                           projection: Sequence[int]) -> Dict[int, Derivation]:
    """Split ``delta`` by the projected degree shift ``<projection, deg m - deg x>``."""
    parts: Dict[int, Dict[VarId, Polynomial]] = {}
    for v, p in delta.reduced().images.items():
        dv = w.monomial_degree(((v, 1),))
        for m, c in p.terms.items():
            shift = w.sub(w.monomial_degree(m), dv)
            k = sum(a * b for a, b in zip(projection, shift))
            bucket = parts.setdefault(k, {})
            bucket[v] = bucket.get(v, Polynomial()) + Polynomial.monomial(m, c)
    return {k: Derivation(imgs, delta.base) for k, imgs in sorted(parts.items())}


# -- bounded search ------------------------------------------------------------

def _monomials_up_to(variables: Sequence[VarId], degree: int) -> List[Monomial]:
    out = []
    n = len(variables)
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            exps: Dict[VarId, int] = {}
            for k in combo:
                exps[variables[k]] = exps.get(variables[k], 0) + 1
            out.append(mono_from_dict(exps))
    return out


def _nullspace(columns: List[Dict[object, Fraction]], nrows_keys: List[object]) -> List[List[Fraction]]:
    """RREF nullspace basis of the matrix whose j-th column is ``columns[j]``."""
    ncols = len(columns)
    rows = {key: [Fraction(0)] * ncols for key in nrows_keys}
    for j, col in enumerate(columns):
        for key, c in col.items():
            rows[key][j] = c
    M = [r for r in rows.values() if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -M[i][f]
        basis.append(vec)
    return basis


def _primitive(vec: Sequence[Fraction]) -> Tuple[int, ...]:
    den = 1
    for x in vec:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return tuple(x // g for x in ints)


def search_homogeneous_lnds(alg: PresentedAlgebra, w: WeightAssignment, g0: Sequence[int],
                            max_image_degree: int, cap: Optional[int] = None,
                            combination_dim: int = 4) -> List[Derivation]:
    """Homogeneous LNDs of degree ``g0`` with images of total degree <= ``max_image_degree``.

    The derivations preserving the ideal form the nullspace of a linear system
    in the unknown image coefficients; it is computed exactly in reduced row
    echelon form. Each basis vector, and when the nullspace has dimension at
    most ``combination_dim`` each combination with coefficients in {-1, 0, 1},
    is kept if it is locally nilpotent within ``cap``. The result is a bounded,
    one-directional search: an empty list does not prove rigidity.
    """
    g0 = tuple(g0)
    if len(g0) != w.group.free_rank:
        raise DegreeOutOfRange(f"degree must have {w.group.free_rank} components")
    if max_image_degree < 1:
        raise DegreeOutOfRange("max_image_degree must be at least 1")
    rels = alg.relations
    variables = list(alg.variables)
    pool = [m for m in _monomials_up_to(variables, max_image_degree) if rels.is_standard(m)]
    pool_deg = {m: w.monomial_degree(m) for m in pool}
    unknowns: List[Tuple[VarId, Monomial]] = []
    for v in variables:
        target = w.add(w.monomial_degree(((v, 1),)), g0)
        unknowns.extend((v, m) for m in sorted(pool, key=lex_key) if pool_deg[m] == target)
    if not unknowns:
        return []

    partials = [{v: g.diff(v) for v in variables} for g in rels]
    columns = []
    keys = set()
    for v, m in unknowns:
        col = {}
        for gi, dg in enumerate(partials):
            if dg[v].is_zero():
                continue
            for rm, c in normal_form(dg[v].mul_monomial(m), rels).terms.items():
                col[(gi, rm)] = c
        keys.update(col)
        columns.append(col)
    basis = _nullspace(columns, sorted(keys, key=lambda k: (k[0], lex_key(k[1]))))
    log.debug("search: %d unknowns, nullspace dimension %d", len(unknowns), len(basis))

    candidates = [_primitive(b) for b in basis]
    if 1 < len(basis) <= combination_dim:
        for coeffs in itertools.product((-1, 0, 1), repeat=len(basis)):
            nz = [c for c in coeffs if c]
            if len(nz) < 2 or nz[0] < 0:
                continue
            vec = [sum(c * b[k] for c, b in zip(coeffs, basis)) for k in range(len(unknowns))]
            if any(vec):
                candidates.append(_primitive(vec))

    found = {}
    for vec in dict.fromkeys(candidates):
        images: Dict[VarId, Polynomial] = {}
        for (v, m), c in zip(unknowns, vec):
            if c:
                images[v] = images.get(v, Polynomial()) + Polynomial.monomial(m, c)
        delta = Derivation(images, alg)
        if delta.is_zero():
            continue
        if check_locally_nilpotent(delta, cap).locally_nilpotent:
            found[vec] = delta

    def support_key(item):
        vec, delta = item
        support = tuple((v, tuple(lex_key(m) for m in delta.images[v].terms))
                        for v in sorted(delta.images))
        return support, vec

    return [d for _, d in sorted(found.items(), key=support_key)]


# -- auxiliary gradings --------------------------------------------------------

@dataclass(frozen=True)
class AuxiliaryGrading:
    """Degrees in ``Z^k`` followed by components modulo ``torsion_orders``."""

    degrees: Mapping[VarId, Tuple[int, ...]]
    torsion_orders: Tuple[int, ...] = ()

    def degree(self, m: Monomial) -> Tuple[int, ...]:
        width = len(next(iter(self.degrees.values()), ()))
        out = [0] * width
        for v, e in m:
            for k, d in enumerate(self.degrees.get(v, (0,) * width)):
                out[k] += e * d
        nfree = width - len(self.torsion_orders)
        for k, order in enumerate(self.torsion_orders):
            out[nfree + k] %= order
        return tuple(out)


@dataclass(frozen=True)
class AuxDegreeReport:
    degree_zero: bool
    moves_t_variable: bool

    @property
    def hypotheses_hold(self) -> bool:
        return self.degree_zero and self.moves_t_variable


def check_aux_degree_zero(delta: Derivation, h: AuxiliaryGrading) -> AuxDegreeReport:
    """Whether ``delta`` is ``h``-homogeneous of degree zero, torsion included,
    and whether some T variable is outside its kernel."""
    rels = delta.base.relations
    zero = True
    for v, p in delta.images.items():
        target = h.degree(((v, 1),))
        if any(h.degree(m) != target for m in normal_form(p, rels).terms):
            zero = False
            break
    moves = any(not normal_form(delta.image(v), rels).is_zero() for v in delta.base.t_vars())
    return AuxDegreeReport(zero, moves)


__all__ = [
    "Derivation", "IdealCheck", "NilpotencyReport", "AutomorphismMap", "TypeVerdict",
    "AuxiliaryGrading", "AuxDegreeReport", "IdealNotPreserved", "NotLND", "ZeroDerivation",
    "MissingInvariant", "DegreeOutOfRange", "NotHomogeneousDerivation", "partial_derivation",
    "check_preserves_ideal", "check_locally_nilpotent", "default_cap", "nil_degree",
    "homogeneity_degree", "derivation_of_quotient", "classify_type", "exponential",
    "composition_defect", "homogeneous_components", "search_homogeneous_lnds",
    "check_aux_degree_zero",
]
