"""Integer linear algebra and the grading of trinomial algebras.

Matrices are lists of lists of Python ints. The Smith normal form uses a fixed
pivot rule (smallest nonzero absolute value, first in row-major order), so its
output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Mapping, Optional, Sequence, Tuple

from .poly import Monomial, Polynomial, VarId
from .variety import PresentedAlgebra, TrinomialData, validate

IntMatrix = List[List[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """``U * A * V == D`` with unimodular ``U``, ``V``; ``U_inv``/``V_inv`` are their inverses."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> List[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(A: Sequence[Sequence[int]]) -> SmithDecomposition:
    rows = len(A)
    cols = len(A[0]) if rows else 0
    D = [list(map(int, row)) for row in A]
    U, U_inv = identity(rows), identity(rows)
    V, V_inv = identity(cols), identity(cols)

    # Row op "row_i += c*row_j" is left-multiplication by E; U_inv gets E^-1 on the right.
    def add_row(i, j, c):
        D[i] = [x + c * y for x, y in zip(D[i], D[j])]
        U[i] = [x + c * y for x, y in zip(U[i], U[j])]
        for row in U_inv:
            row[j] -= c * row[i]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in U_inv:
            row[i], row[j] = row[j], row[i]

    def neg_row(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for row in U_inv:
            row[i] = -row[i]

    def add_col(i, j, c):
        for row in D:
            row[i] += c * row[j]
        for row in V:
            row[i] += c * row[j]
        V_inv[j] = [x - c * y for x, y in zip(V_inv[j], V_inv[i])]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        V_inv[i], V_inv[j] = V_inv[j], V_inv[i]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = D[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, cols):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < rows and t < cols and D[t][t] < 0:
            neg_row(t)
    return SmithDecomposition(U, D, V, U_inv, V_inv)


def integer_kernel(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> IntMatrix:
    """Basis (as rows) of the saturated lattice ``{x in Z^n : A x = 0}``."""
    if not A:
        return identity(ncols or 0)
    snf = smith_normal_form(A)
    cols = len(A[0])
    return [[snf.V[i][j] for i in range(cols)] for j in range(snf.rank, cols)]


def solve_rational(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """One solution of ``A x = b`` over Q (free unknowns set to zero), or None."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    M = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][cols] for i in range(r, rows)):
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = M[i][cols]
    return x


@dataclass(frozen=True)
class GradingGroup:
    """``Z^N / L`` for a relation lattice ``L`` given by rows.

    Coordinates follow ``variables``. ``V`` is the column transform of the
    Smith form of the relation matrix: a row vector ``x`` maps to ``x V``,
    whose first ``rank`` entries are reduced modulo the invariant factors and
    whose last ``free_rank`` entries are free.
    """

    variables: Tuple[VarId, ...]
    relation_rows: Tuple[Tuple[int, ...], ...]
    invariant_factors: Tuple[int, ...]
    V: Tuple[Tuple[int, ...], ...]
    V_inv: Tuple[Tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d)

    @property
    def free_rank(self) -> int:
        return len(self.variables) - self.rank

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)

    def _torsion_slots(self) -> List[Tuple[int, int]]:
        return [(i, d) for i, d in enumerate(self.invariant_factors) if d > 1]

    def project(self, x: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Image of ``x in Z^N``: (free part, torsion part)."""
        n = len(self.variables)
        y = [sum(x[k] * self.V[k][j] for k in range(n)) for j in range(n)]
        free = tuple(y[self.rank:])
        tors = tuple(y[i] % d for i, d in self._torsion_slots())
        return free, tors

    def torsion_generators(self) -> List[Tuple[int, Tuple[int, ...]]]:
        """(order, preimage in Z^N) for each cyclic torsion summand."""
        return [(d, tuple(self.V_inv[i])) for i, d in self._torsion_slots()]


def grading_from_rows(variables: Sequence[VarId], rows: Sequence[Sequence[int]]) -> GradingGroup:
    n = len(variables)
    rows = [list(r) for r in rows] or [[0] * n]
    snf = smith_normal_form(rows)
    diag = snf.diagonal + [0] * (n - len(snf.diagonal))
    V = [list(r) for r in snf.V]
    V_inv = [list(r) for r in snf.V_inv]
    # sign convention: first nonzero weight along each free coordinate is positive
    for j in range(snf.rank, n):
        lead = next((V[k][j] for k in range(n) if V[k][j]), 0)
        if lead < 0:
            for k in range(n):
                V[k][j] = -V[k][j]
            V_inv[j] = [-x for x in V_inv[j]]
    # invariant factors indexed by the columns of V
    return GradingGroup(tuple(variables), tuple(tuple(r) for r in rows), tuple(diag[:n]),
                        tuple(tuple(r) for r in V), tuple(tuple(r) for r in V_inv))


def _block_vector(data: TrinomialData, i: int, sign: int = 1) -> List[int]:
    pos = {v: k for k, v in enumerate(data.variables)}
    vec = [0] * len(pos)
    for v in data.block_vars(i):
        vec[pos[v]] = sign * data.exponent(v)
    return vec


def relation_rows(data: TrinomialData) -> List[List[int]]:
    if data.variety_type == 1:
        return [_block_vector(data, i) for i in data.blocks]
    rows = []
    for i in range(data.q, data.r):
        a, b = _block_vector(data, i), _block_vector(data, i + 1, -1)
        rows.append([x + y for x, y in zip(a, b)])
    return rows


def grading_group(data: TrinomialData) -> GradingGroup:
    validate(data).raise_if_invalid()
    return grading_from_rows(data.variables, relation_rows(data))


def exponent_vector(m: Monomial, variables: Sequence[VarId]) -> List[int]:
    d = dict(m)
    return [d.get(v, 0) for v in variables]


def algebra_grading(alg: PresentedAlgebra) -> GradingGroup:
    """Finest diagonal grading making every relation homogeneous.

    The relation lattice is spanned by differences of exponent vectors of
    monomials occurring in the same relation.
    """
    rows = []
    for g in alg.relations:
        vecs = [exponent_vector(m, alg.variables) for m in g.terms]
        for v in vecs[1:]:
            rows.append([a - b for a, b in zip(vecs[0], v)])
    return grading_from_rows(alg.variables, rows)


Degree = Tuple[Tuple[int, ...], Tuple[int, ...]]


@dataclass(frozen=True)
class WeightAssignment:
    """Degrees of the generators in a :class:`GradingGroup`."""

    group: GradingGroup
    free: Mapping[VarId, Tuple[int, ...]]
    torsion: Mapping[VarId, Tuple[int, ...]]

    def degree(self, v: VarId) -> Degree:
        return self.free[v], self.torsion[v]

    def monomial_degree(self, m: Monomial, with_torsion: bool = False):
        f = [0] * self.group.free_rank
        t = [0] * len(self.group.torsion)
        for v, e in m:
            if v not in self.free:
                raise KeyError(f"no weight for {v}")
            for k, w in enumerate(self.free[v]):
                f[k] += e * w
            for k, w in enumerate(self.torsion[v]):
                t[k] += e * w
        if not with_torsion:
            return tuple(f)
        return tuple(f), tuple(x % d for x, d in zip(t, self.group.torsion))

    def sub(self, a, b):
        """Difference of two degrees (free tuples or (free, torsion) pairs)."""
        if a and isinstance(a[0], tuple):
            return (tuple(x - y for x, y in zip(a[0], b[0])),
                    tuple((x - y) % d for x, y, d in zip(a[1], b[1], self.group.torsion)))
        return tuple(x - y for x, y in zip(a, b))

    def add(self, a, b):
        if a and isinstance(a[0], tuple):
            return (tuple(x + y for x, y in zip(a[0], b[0])),
                    tuple((x + y) % d for x, y, d in zip(a[1], b[1], self.group.torsion)))
        return tuple(x + y for x, y in zip(a, b))

    def zero(self, with_torsion: bool = False):
        f = (0,) * self.group.free_rank
        return (f, (0,) * len(self.group.torsion)) if with_torsion else f


def weights_of(group: GradingGroup) -> WeightAssignment:
    free, tors = {}, {}
    n = len(group.variables)
    for k, v in enumerate(group.variables):
        e = [0] * n
        e[k] = 1
        free[v], tors[v] = group.project(e)
    return WeightAssignment(group, free, tors)


def weight_assignment(data: TrinomialData) -> WeightAssignment:
    return weights_of(grading_group(data))


class NotHomogeneous(ValueError):
    def __init__(self, first: Monomial, second: Monomial, degrees=None):
        from .poly import mono_str

        self.monomials = (first, second)
        self.degrees = degrees
        super().__init__(f"monomials {mono_str(first) or '1'} and {mono_str(second) or '1'} "
                         f"have different degrees {degrees}")


class ZeroPolynomial(ValueError):
    pass


def degree_of(p: Polynomial, w: WeightAssignment, with_torsion: bool = False):
    """Common degree of the monomials of ``p``.

    Only the free part is compared unless ``with_torsion`` is set, in which
    case the result is a ``(free, torsion)`` pair.
    """
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no degree")
    it = iter(p.terms)
    first = next(it)
    deg = w.monomial_degree(first, with_torsion)
    for m in it:
        d = w.monomial_degree(m, with_torsion)
        if d != deg:
            raise NotHomogeneous(first, m, (deg, d))
    return deg


__all__ = [
    "IntMatrix", "SmithDecomposition", "GradingGroup", "WeightAssignment", "NotHomogeneous",
    "ZeroPolynomial", "smith_normal_form", "integer_kernel", "solve_rational", "matmul",
    "determinant", "identity", "grading_group", "grading_from_rows", "algebra_grading",
    "relation_rows", "weight_assignment", "weights_of", "degree_of", "exponent_vector",
]
