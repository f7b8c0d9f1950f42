"""Vanishing-pattern strata, one-parameter subtori and transport within strata.

A stratum ``L(J)`` is the set of points where exactly the T variables in
``J`` vanish. Transport moves a point of a stratum to another point of the
same stratum by diagonal maps preserving every relation followed by
translations of the ``S`` coordinates. Diagonal maps outside the connected
torus (roots of unity not reachable inside the torus) are flagged.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .lattice import (grading_group, integer_kernel, relation_rows, smith_normal_form,
                      solve_rational, weights_of)
from .poly import T_PARAM, Polynomial, VarId, evaluate_numeric, scale_variables, term_magnitude
from .rigidity import RigidityVerdict, rigidity_verdict
from .variety import PresentedAlgebra, TrinomialData, dimension, relations, strip_free_part, validate

Point = Mapping[VarId, complex]


class NotOnVariety(ValueError):
    pass


class DifferentStrata(ValueError):
    pass


class EmptySupport(ValueError):
    pass


class NumericFailure(ArithmeticError):
    pass


class SamePosition(ValueError):
    pass


class PositionOutOfBlock(ValueError):
    pass


class WrongType(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SupportPattern:
    J: FrozenSet[VarId]

    @property
    def blocks_touched(self) -> FrozenSet[int]:
        return frozenset(v.block for v in self.J)

    def sort_key(self):
        return (tuple(sorted(self.blocks_touched)), len(self.J), tuple(sorted(self.J)))

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in sorted(self.J)) + "}"

    def names(self) -> List[str]:
        return [str(v) for v in sorted(self.J)]


def pattern(vars_: Iterable[VarId]) -> SupportPattern:
    vs = frozenset(vars_)
    if any(v.kind != 0 for v in vs):
        raise ValueError("support patterns contain T variables only")
    return SupportPattern(vs)


def admissible_supports(data: TrinomialData) -> List[Tuple[SupportPattern, int]]:
    """Nonempty strata with their dimensions, the open stratum ``J = {}`` first.

    Type 1: ``J`` inside one block (the other monomials are then nonzero
    constants). Type 2: ``J`` inside one block, or ``J`` meeting every block.
    Any other ``J`` forces two block monomials to vanish and hence all of them.
    """
    validate(data).raise_if_invalid()
    dim = dimension(data)
    out = [(pattern(()), dim)]
    singles = []
    for i in data.blocks:
        bv = data.block_vars(i)
        for k in range(1, len(bv) + 1):
            for J in itertools.combinations(bv, k):
                singles.append((pattern(J), dim - k))
    out.extend(singles)
    if data.variety_type == 2:
        per_block = []
        for i in data.blocks:
            bv = data.block_vars(i)
            per_block.append([c for k in range(1, len(bv) + 1) for c in itertools.combinations(bv, k)])
        for choice in itertools.product(*per_block):
            J = [v for part in choice for v in part]
            out.append((pattern(J), data.n - len(J) + data.m))
    return [out[0]] + sorted(out[1:], key=lambda pd: pd[0].sort_key())


def _scale(point: Point) -> float:
    return max([1.0] + [abs(x) for x in point.values()])


def on_variety(point: Point, alg: PresentedAlgebra, eps: float = 1e-9) -> bool:
    for g in alg.relations:
        if abs(evaluate_numeric(g, point)) > eps * max(1.0, term_magnitude(g, point)):
            return False
    return True


def stratum_of_point(point: Point, data: TrinomialData, eps: float = 1e-9,
                     alg: Optional[PresentedAlgebra] = None) -> SupportPattern:
    """Read off ``J`` from a point; coordinates below ``eps`` (relative) count as zero."""
    alg = alg or relations(data)
    if not on_variety(point, alg, eps):
        raise NotOnVariety("point does not satisfy the relations")
    tol = eps * _scale(point)
    return pattern(v for v in data.t_vars if abs(point[v]) < tol)


# -- one-parameter subgroups ---------------------------------------------------

@dataclass(frozen=True)
class OneParamSubgroup:
    """``t . T = t^e T`` for the listed exponents (others fixed)."""

    exponents: Mapping[VarId, int]
    label: str

    def vector(self, variables: Sequence[VarId]) -> Tuple[int, ...]:
        return tuple(self.exponents.get(v, 0) for v in variables)

    def factors(self, t: complex) -> Dict[VarId, complex]:
        return {v: t ** e for v, e in self.exponents.items() if e}


def lambda_subtorus(data: TrinomialData, s: int, u: int, v: int) -> OneParamSubgroup:
    """``T_su -> t^{l_sv} T_su``, ``T_sv -> t^{-l_su} T_sv``."""
    if s not in data.blocks:
        raise PositionOutOfBlock(f"no block {s}")
    n_s = len(data.block_exponents(s))
    for pos in (u, v):
        if not 1 <= pos <= n_s:
            raise PositionOutOfBlock(f"position {pos} outside block {s} of size {n_s}")
    if u == v:
        raise SamePosition("u and v must differ")
    l = data.block_exponents(s)
    from .poly import T

    return OneParamSubgroup({T(s, u): l[v - 1], T(s, v): -l[u - 1]}, f"Lambda({s},{u},{v})")


def omega_subtorus(data: TrinomialData) -> OneParamSubgroup:
    """Type 2 only: ``T_i1 -> t^{prod_{j != i} l_j1} T_i1``."""
    if data.variety_type != 2:
        raise WrongType("the Omega subtorus is defined for type 2 only")
    from .poly import T

    firsts = {i: data.block_exponents(i)[0] for i in data.blocks}
    exps = {T(i, 1): math.prod(firsts[j] for j in data.blocks if j != i) for i in data.blocks}
    return OneParamSubgroup(exps, "Omega")


@dataclass(frozen=True)
class SubgroupCheck:
    ok: bool
    degrees: Tuple[Optional[int], ...]


def verify_one_param_subgroup(g: OneParamSubgroup, alg: PresentedAlgebra) -> SubgroupCheck:
    """Check that ``g_i(t^e T) = t^{d_i} g_i(T)`` for every relation; report ``d_i``."""
    degrees = []
    ok = True
    t = T_PARAM
    for rel in alg.relations:
        cleared, shift = scale_variables(rel, g.exponents, t)
        # cleared must be t^k * rel for a single k
        ks = {dict(m).get(t, 0) for m in cleared.terms}
        if len(ks) == 1:
            k = ks.pop()
            if cleared == rel * Polynomial.monomial(((t, k),) if k else ()):
                degrees.append(k - shift)
                continue
        ok = False
        degrees.append(None)
    return SubgroupCheck(ok, tuple(degrees))


# -- torus orbits inside a stratum ---------------------------------------------

def torus_orbit_count(data: TrinomialData, J: SupportPattern) -> int:
    """Number of orbits of the connected torus on ``L_Y(J)`` (T coordinates).

    Equals the index of ``L cap Z^N`` in ``{x in Z^N : sum x_v w_v = 0}`` where
    ``N`` are the T variables outside ``J``, ``w_v`` the free weights and ``L``
    the relation lattice. The full diagonal stabilizer acts transitively, so
    the count is the number of torus orbits it splits into.
    """
    group = grading_group(data)
    w = weights_of(group)
    variables = list(group.variables)
    N = [v for v in data.t_vars if v not in J.J]
    if not N:
        return 1
    W_T = [[w.free[v][k] for v in N] for k in range(group.free_rank)]
    K = integer_kernel(W_T, len(N))
    rows = [list(r) for r in relation_rows(data)]
    outside = [variables.index(v) for v in variables if v not in N]
    inside = [variables.index(v) for v in N]
    R_out_T = [[rows[i][c] for i in range(len(rows))] for c in outside]
    Y = integer_kernel(R_out_T, len(rows))
    gens = []
    for y in Y:
        vec = [sum(y[i] * rows[i][c] for i in range(len(rows))) for c in inside]
        if any(vec):
            gens.append(vec)
    if not K:
        return 1
    # coordinates of each generator in the kernel basis
    KT = [[Fraction(K[b][c]) for b in range(len(K))] for c in range(len(N))]
    coords = []
    for g in gens:
        sol = solve_rational(KT, [Fraction(x) for x in g])
        if sol is None or any(x.denominator != 1 for x in sol):
            raise ArithmeticError("relation lattice not contained in the weight kernel")
        coords.append([int(x) for x in sol])
    if not coords:
        raise ArithmeticError("relation lattice has smaller rank than the weight kernel")
    snf = smith_normal_form(coords)
    diag = snf.diagonal
    if snf.rank < len(K):
        raise ArithmeticError("relation lattice has smaller rank than the weight kernel")
    return math.prod(diag[:len(K)])


def _torus_solution(data: TrinomialData, N: Sequence[VarId],
                    targets: Mapping[VarId, Fraction]) -> Optional[List[Fraction]]:
    """Real ``y`` with ``<w_v, y> = targets[v] (mod 1)`` for all ``v`` in ``N``, or None."""
    group = grading_group(data)
    w = weights_of(group)
    if group.free_rank == 0:
        return [] if all(targets.get(v, 0) % 1 == 0 for v in N) else None
    W = [[w.free[v][k] for k in range(group.free_rank)] for v in N]
    snf = smith_normal_form(W)
    b = [Fraction(targets.get(v, 0)) for v in N]
    c = [sum(snf.U[i][j] * b[j] for j in range(len(N))) for i in range(len(N))]
    rank = snf.rank
    if any(c[i].denominator != 1 for i in range(rank, len(N))):
        return None
    z = [c[i] / snf.D[i][i] if i < rank else Fraction(0) for i in range(group.free_rank)]
    return [sum(snf.V[k][i] * z[i] for i in range(group.free_rank)) for k in range(group.free_rank)]


# -- transport -----------------------------------------------------------------

@dataclass(frozen=True)
class TransportStep:
    kind: str  # lambda | omega | torus | root-of-unity | translation
    factors: Mapping[VarId, complex] = field(default_factory=dict)
    shifts: Mapping[VarId, complex] = field(default_factory=dict)
    connected: bool = True
    label: str = ""

    @property
    def flagged(self) -> bool:
        return not self.connected

    def apply(self, point: Point) -> Dict[VarId, complex]:
        out = dict(point)
        for v, f in self.factors.items():
            out[v] = out[v] * f
        for v, d in self.shifts.items():
            out[v] = out[v] + d
        return out


@dataclass(frozen=True)
class TransportCertificate:
    pattern: SupportPattern
    steps: Tuple[TransportStep, ...]
    residual: float

    @property
    def root_of_unity_flagged(self) -> bool:
        return any(s.flagged for s in self.steps)

    def apply(self, point: Point) -> Dict[VarId, complex]:
        cur = dict(point)
        for s in self.steps:
            cur = s.apply(cur)
        return cur


def _monomial_value(data: TrinomialData, i: int, point: Point) -> complex:
    val = 1 + 0j
    for v in data.block_vars(i):
        val *= point[v] ** data.exponent(v)
    return val


def _root(z: complex, n: int) -> complex:
    """Principal n-th root."""
    if n == 1:
        return z
    r, phi = cmath.polar(z)
    return cmath.rect(r ** (1.0 / n), phi / n)


def _residual(a: Point, b: Point) -> float:
    return max((abs(a[v] - b[v]) / max(1.0, abs(b[v])) for v in b), default=0.0)


def in_full_stabilizer(step: TransportStep, data: TrinomialData, tol: float = 1e-9) -> bool:
    """Whether a diagonal step rescales the block monomials as the relations require."""
    if not step.factors:
        return True
    scales = []
    for i in data.blocks:
        s = 1 + 0j
        for v in data.block_vars(i):
            s *= step.factors.get(v, 1) ** data.exponent(v)
        scales.append(s)
    if data.variety_type == 1:
        return all(abs(s - 1) <= tol * max(1.0, abs(s)) for s in scales)
    return all(abs(s - scales[0]) <= tol * max(1.0, abs(s)) for s in scales)


def transport(alpha: Point, beta: Point, data: TrinomialData, eps: float = 1e-9) -> TransportCertificate:
    """Certificate moving ``alpha`` to ``beta`` inside their common stratum.

    Steps: (type 2) one Omega step matching a nonvanishing block monomial;
    Lambda steps anchored at the smallest vanishing variable of each vanishing
    block; Lambda steps anchored at the first variable of every other block;
    a root-of-unity correction of those anchors, expressed as a torus element
    when one exists and flagged otherwise; finally S translations.
    """
    alg = relations(data)
    J = stratum_of_point(alpha, data, eps, alg)
    Jb = stratum_of_point(beta, data, eps, alg)
    if J != Jb:
        raise DifferentStrata(f"{J} != {Jb}")
    if not J.J:
        raise EmptySupport("the open stratum is outside the scope of transport")
    tiny = 1e-15
    cur: Dict[VarId, complex] = {v: complex(alpha[v]) for v in data.variables}
    steps: List[TransportStep] = []

    def push(step: TransportStep):
        nonlocal cur
        if step.factors and all(abs(f - 1) <= tiny for f in step.factors.values()):
            return
        steps.append(step)
        cur = step.apply(cur)

    touched = J.blocks_touched
    free_blocks = [i for i in data.blocks if i not in touched]

    if data.variety_type == 2 and free_blocks:
        omega = omega_subtorus(data)
        P = math.prod(data.block_exponents(i)[0] for i in data.blocks)
        j = free_blocks[0]
        t = _root(_monomial_value(data, j, beta) / _monomial_value(data, j, cur), P)
        push(TransportStep("omega", omega.factors(t), label=f"Omega t={t:.6g}"))

    for i in sorted(touched):
        anchor = min(v for v in J.J if v.block == i)
        for v in data.block_vars(i):
            if v in J.J:
                continue
            sub = lambda_subtorus(data, i, anchor.pos, v.pos)
            t = _root(cur[v] / beta[v], data.exponent(anchor))
            push(TransportStep("lambda", sub.factors(t), label=sub.label))

    corrections: Dict[VarId, Fraction] = {}
    for i in free_blocks:
        bv = data.block_vars(i)
        anchor = bv[0]
        for v in bv[1:]:
            sub = lambda_subtorus(data, i, anchor.pos, v.pos)
            t = _root(cur[v] / beta[v], data.exponent(anchor))
            push(TransportStep("lambda", sub.factors(t), label=sub.label))
        l = data.exponent(anchor)
        zeta = beta[anchor] / cur[anchor]
        k = round(cmath.phase(zeta) * l / (2 * math.pi)) % l
        if abs(zeta - cmath.exp(2j * math.pi * k / l)) > 1e-6:
            raise NumericFailure(f"block {i}: monomial values disagree (ratio {zeta})")
        if k:
            corrections[anchor] = Fraction(k, l)

    if corrections:
        N = [v for v in data.t_vars if v not in J.J]
        y = _torus_solution(data, N, corrections)
        if y is not None:
            w = weights_of(grading_group(data))
            factors = {}
            for v in data.variables:
                phase = sum(Fraction(a) * b for a, b in zip(w.free[v], y))
                factors[v] = cmath.exp(2j * math.pi * float(phase % 1))
            push(TransportStep("torus", factors, label="root-of-unity correction inside the torus"))
        else:
            factors = {v: cmath.exp(2j * math.pi * float(q)) for v, q in corrections.items()}
            push(TransportStep("root-of-unity", factors, connected=False,
                               label="correction outside the connected torus"))

    shifts = {v: beta[v] - cur[v] for v in data.s_vars if beta[v] != cur[v]}
    if shifts:
        push(TransportStep("translation", shifts=shifts))

    res = _residual(cur, {v: complex(beta[v]) for v in data.variables})
    if res > eps:
        raise NumericFailure(f"residual {res:.3e} exceeds {eps:.1e}")
    return TransportCertificate(J, tuple(steps), res)


# -- census --------------------------------------------------------------------

@dataclass(frozen=True)
class StratumInfo:
    pattern: SupportPattern
    dimension: int
    nonempty: bool
    torus_orbits: int
    stabilizer_orbits: int = 1


@dataclass(frozen=True)
class StratumCensus:
    strata: Tuple[StratumInfo, ...]
    open_dimension: int
    open_part_verdict: str
    rigidity: RigidityVerdict
    rigidity_note: str

    @property
    def closed_strata(self) -> Tuple[StratumInfo, ...]:
        return self.strata


RIGID_NOTE = ("Y(A) is rigid: the finiteness hypothesis fails; for rigid trinomial "
              "hypersurfaces the number of automorphism orbits is known to be infinite.")


def census(data: TrinomialData) -> StratumCensus:
    """Strata ``L(J)``, ``J`` nonempty, plus the verdict on the open part."""
    validate(data).raise_if_invalid()
    supports = admissible_supports(data)
    infos = tuple(StratumInfo(p, d, True, torus_orbit_count(data, p))
                  for p, d in supports if p.J)
    verdict = rigidity_verdict(strip_free_part(data), "Y")
    if verdict.rigid:
        return StratumCensus(infos, supports[0][1], "hypothesis-fails", verdict, RIGID_NOTE)
    note = (f"Y(A) is not rigid ({verdict.clause}, blocks {list(verdict.blocks)}): "
            "finitely many automorphism orbits.")
    return StratumCensus(infos, supports[0][1], "finitely-many-G-orbits", verdict, note)


@dataclass(frozen=True)
class SpotCheck:
    pattern: SupportPattern
    pairs: int
    max_residual: float
    flagged: int


def transport_spot_checks(data: TrinomialData, pairs: int, rng, eps: float = 1e-9) -> List[SpotCheck]:
    """Transport ``pairs`` random same-stratum pairs on every nonempty ``J``."""
    from .sampling import sample_pattern

    out = []
    for p, _ in admissible_supports(data):
        if not p.J:
            continue
        sample = sample_pattern(data, sorted(p.J), 2 * pairs, rng)
        done, worst, flagged = 0, 0.0, 0
        for k in range(0, sample.points.shape[0] - 1, 2):
            cert = transport(sample.point(k), sample.point(k + 1), data, eps)
            done += 1
            worst = max(worst, cert.residual)
            flagged += cert.root_of_unity_flagged
        out.append(SpotCheck(p, done, worst, flagged))
    return out
