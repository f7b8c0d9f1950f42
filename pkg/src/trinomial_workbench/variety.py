"""Defining data of trinomial varieties and their presentations."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .poly import Polynomial, RationalFunction, RelationSet, S, T, VarId

Constants = Union[Tuple[Fraction, ...], Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]]


class InvalidData(ValueError):
    """Trinomial data failing validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{v.path}: {v.code} ({v.message})" for v in self.violations))


@dataclass(frozen=True)
class Violation:
    code: str
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_if_invalid(self) -> None:
        if self.violations:
            raise InvalidData(self.violations)


@dataclass(frozen=True)
class TrinomialData:
    """Data of a trinomial variety.

    Type 1 has blocks ``1..r`` and one constant per block; type 2 has blocks
    ``0..r`` and a 2 x (r+1) coefficient matrix given as two rows.
    ``exponents[k]`` lists the exponents of the k-th block in order.
    """

    variety_type: int
    exponents: Tuple[Tuple[int, ...], ...]
    constants: Constants
    m: int = 0

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(tuple(int(e) for e in l) for l in self.exponents))
        if self.variety_type == 2:
            rows = tuple(tuple(Fraction(a) for a in row) for row in self.constants)
            object.__setattr__(self, "constants", rows)
        else:
            object.__setattr__(self, "constants", tuple(Fraction(a) for a in self.constants))

    @property
    def q(self) -> int:
        return 1 if self.variety_type == 1 else 0

    @property
    def r(self) -> int:
        return len(self.exponents) + self.q - 1

    @property
    def blocks(self) -> range:
        return range(self.q, self.r + 1)

    def block_exponents(self, i: int) -> Tuple[int, ...]:
        return self.exponents[i - self.q]

    @property
    def block_sizes(self) -> Tuple[int, ...]:
        return tuple(len(l) for l in self.exponents)

    @property
    def n(self) -> int:
        return sum(self.block_sizes)

    def exponent(self, v: VarId) -> int:
        return self.block_exponents(v.block)[v.pos - 1]

    def block_vars(self, i: int) -> List[VarId]:
        return [T(i, j) for j in range(1, len(self.block_exponents(i)) + 1)]

    @property
    def t_vars(self) -> List[VarId]:
        return [v for i in self.blocks for v in self.block_vars(i)]

    @property
    def s_vars(self) -> List[VarId]:
        return [S(k) for k in range(1, self.m + 1)]

    @property
    def variables(self) -> List[VarId]:
        return self.t_vars + self.s_vars

    def block_monomial(self, i: int) -> Polynomial:
        """The monomial ``T_i^{l_i}``."""
        return Polynomial.monomial(tuple((v, self.exponent(v)) for v in self.block_vars(i)))

    def column(self, i: int) -> Tuple[Fraction, Fraction]:
        return (self.constants[0][i], self.constants[1][i])


def danielewski(c0: Union[int, Fraction] = 1) -> TrinomialData:
    """``T11*T12 = T21^2 + c0`` as type-1 data ``a = (0, c0)``."""
    return TrinomialData(1, ((1, 1), (2,)), (0, c0))


def validate(data: TrinomialData) -> ValidationReport:
    out = []
    if data.variety_type not in (1, 2):
        return ValidationReport((Violation("BadType", "/type", "type must be 1 or 2"),))
    if data.m < 0:
        out.append(Violation("NegativeM", "/m", "m must be non-negative"))
    for k, l in enumerate(data.exponents):
        if not l:
            out.append(Violation("EmptyBlock", f"/blocks/{k}/l", "block has no variables"))
        for j, e in enumerate(l):
            if e < 1:
                out.append(Violation("NonPositiveExponent", f"/blocks/{k}/l/{j}",
                                     "exponents must be positive integers"))
    if data.r < 2:
        out.append(Violation("TooFewBlocks", "/blocks", "r >= 2 is required"))
    nblocks = len(data.exponents)
    if data.variety_type == 1:
        a = data.constants
        if len(a) != nblocks:
            out.append(Violation("ConstantsShape", "/A", f"expected {nblocks} constants"))
        else:
            for i in range(len(a)):
                for j in range(i + 1, len(a)):
                    if a[i] == a[j]:
                        out.append(Violation("DuplicateConstant", f"/A/{j}",
                                             f"a_{i + 1} = a_{j + 1}; constants must be distinct"))
    else:
        rows = data.constants
        if len(rows) != 2 or any(len(row) != nblocks for row in rows):
            out.append(Violation("ConstantsShape", "/A", f"expected a 2 x {nblocks} matrix"))
        else:
            for i in range(nblocks):
                for j in range(i + 1, nblocks):
                    if rows[0][i] * rows[1][j] - rows[0][j] * rows[1][i] == 0:
                        out.append(Violation("DependentColumns", f"/A/{j}",
                                             f"columns {i} and {j} are linearly dependent"))
    return ValidationReport(tuple(out))


@dataclass(frozen=True)
class PresentedAlgebra:
    """A quotient ``K[variables] / (relations)``."""

    variables: Tuple[VarId, ...]
    relations: RelationSet
    origin: Optional[TrinomialData] = None
    names: dict = field(default_factory=dict, compare=False)

    @property
    def is_trinomial(self) -> bool:
        return self.origin is not None

    def name(self, v: VarId) -> str:
        return self.names.get(v, str(v))

    def t_vars(self) -> List[VarId]:
        return [v for v in self.variables if v.kind == 0]


def _type2_relation(data: TrinomialData, i: int) -> Polynomial:
    cols = [data.column(i + k) for k in range(3)]
    # cofactor expansion along the monomial row
    cof = [
        cols[1][0] * cols[2][1] - cols[2][0] * cols[1][1],
        -(cols[0][0] * cols[2][1] - cols[2][0] * cols[0][1]),
        cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1],
    ]
    return sum((data.block_monomial(i + k) * cof[k] for k in range(3)), Polynomial())


def relations(data: TrinomialData) -> PresentedAlgebra:
    validate(data).raise_if_invalid()
    rels = []
    leading = []
    if data.variety_type == 1:
        a = data.constants
        for i in range(1, data.r):
            g = data.block_monomial(i) - data.block_monomial(i + 1) - (a[i] - a[i - 1])
            rels.append(g)
            leading.append(next(iter(data.block_monomial(i).terms)))
    else:
        for i in range(0, data.r - 1):
            rels.append(_type2_relation(data, i))
            leading.append(next(iter(data.block_monomial(i).terms)))
    variables = tuple(data.variables)
    return PresentedAlgebra(variables, RelationSet(rels, variables, leading), data)


def strip_free_part(data: TrinomialData) -> TrinomialData:
    validate(data).raise_if_invalid()
    return replace(data, m=0)


def dimension(data: TrinomialData) -> int:
    validate(data).raise_if_invalid()
    return data.m + data.n - data.r + 1


def custom_algebra(relation: Polynomial, names: Optional[dict] = None) -> PresentedAlgebra:
    """Hypersurface algebra with a single relation; all its variables are generators."""
    variables = tuple(sorted(relation.variables()))
    return PresentedAlgebra(variables, RelationSet([relation], variables), None, dict(names or {}))


@dataclass(frozen=True)
class HypersurfaceExample:
    algebra: PresentedAlgebra
    derivation: "object"
    invariant: RationalFunction
    x: Tuple[VarId, ...]
    y: Tuple[VarId, ...]
    z: Tuple[VarId, ...]
    u: VarId
    v: Tuple[VarId, ...]


def example_hypersurface(k: int, b: Sequence[int], c: Sequence[int], p: int,
                         r: Sequence[int]) -> HypersurfaceExample:
    """Hypersurface ``x1..xk (y^b + z^c) = u v^r`` with its horizontal LND.

    Variables are encoded as ``x_i = T[1][i]``, ``y_i = T[2][i]``,
    ``z_i = T[3][i]``, ``u = T[4][1]`` and ``v_i = T[5][i]``. The derivation
    sends ``u`` to ``b1 x y1^(b1-1) y2^b2 ...`` and ``y1`` to ``v^r``.
    """
    from .lnd import Derivation

    b, c, r = tuple(b), tuple(c), tuple(r)
    if k < 1 or p < 1 or not b or not c or len(r) != p:
        raise ValueError("need k, p >= 1, nonempty b and c, and len(r) == p")
    if min(b + c + r) < 1:
        raise ValueError("exponents must be positive")
    xs = tuple(T(1, i) for i in range(1, k + 1))
    ys = tuple(T(2, i) for i in range(1, len(b) + 1))
    zs = tuple(T(3, i) for i in range(1, len(c) + 1))
    u = T(4, 1)
    vs = tuple(T(5, i) for i in range(1, p + 1))

    def mono(vars_, exps):
        return tuple((v, e) for v, e in zip(vars_, exps) if e)

    X = mono(xs, [1] * k)
    Y = mono(ys, b)
    Z = mono(zs, c)
    V = mono(vs, r)
    f = (Polynomial.monomial(X) * (Polynomial.monomial(Y) + Polynomial.monomial(Z))
         - Polynomial.var(u) * Polynomial.monomial(V))
    names = {}
    for label, group in (("x", xs), ("y", ys), ("z", zs), ("v", vs)):
        for idx, v in enumerate(group, 1):
            names[v] = f"{label}{idx}"
    names[u] = "u"
    alg = custom_algebra(f, names)
    y_exps = (b[0] - 1,) + b[1:]
    du = Polynomial.monomial(X) * Polynomial.monomial(mono(ys, y_exps)) * b[0]
    dy = Polynomial.monomial(V)
    delta = Derivation({u: du, ys[0]: dy}, alg)
    inv = RationalFunction(Polynomial.var(u) * Polynomial.monomial(V),
                           Polynomial.monomial(X) * Polynomial.monomial(Z))
    return HypersurfaceExample(alg, delta, inv, xs, ys, zs, u, vs)


def torus_invariant(data: TrinomialData) -> RationalFunction:
    """A nonconstant rational invariant of the torus.

    Type 1: the block monomial of the last block. Type 2: the quotient of the
    first two block monomials.
    """
    if data.variety_type == 1:
        return RationalFunction(data.block_monomial(data.r), Polynomial.const(1))
    return RationalFunction(data.block_monomial(0), data.block_monomial(1))


__all__ = [
    "InvalidData", "Violation", "ValidationReport", "TrinomialData", "PresentedAlgebra",
    "HypersurfaceExample", "validate", "relations", "strip_free_part", "dimension",
    "custom_algebra", "example_hypersurface", "torus_invariant", "danielewski",
]
