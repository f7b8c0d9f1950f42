"""Random points on trinomial varieties with a prescribed vanishing pattern.

This is deliberately independent of the combinatorial stratum classification:
it imposes ``T_v = 0`` for ``v`` in ``J``, solves the linear system satisfied
by the block monomial values, draws the remaining coordinates at random and
recovers one coordinate per nonvanishing block by taking a root.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from .poly import VarId
from .variety import TrinomialData, validate


def default_rng(seed: Optional[int] = None) -> np.random.Generator:
    """Generator seeded from ``seed``, else ``WORKBENCH_SEED``, else 0."""
    if seed is None:
        seed = int(os.environ.get("WORKBENCH_SEED", "0"))
    return np.random.default_rng(seed)


def _random_nonzero(rng: np.random.Generator, size) -> np.ndarray:
    radius = rng.uniform(0.5, 2.0, size)
    angle = rng.uniform(0.0, 2 * np.pi, size)
    return radius * np.exp(1j * angle)


def monomial_system(data: TrinomialData):
    """``(A, b)`` with ``A M = b`` the linear relations among block monomial values."""
    blocks = list(data.blocks)
    k = len(blocks)
    rows, rhs = [], []
    if data.variety_type == 1:
        a = [float(x) for x in data.constants]
        for i in range(k - 1):
            row = [0.0] * k
            row[i], row[i + 1] = 1.0, -1.0
            rows.append(row)
            rhs.append(a[i + 1] - a[i])
    else:
        c = [[float(x) for x in row] for row in data.constants]
        for i in range(k - 2):
            cols = [(c[0][i + j], c[1][i + j]) for j in range(3)]
            cof = [cols[1][0] * cols[2][1] - cols[2][0] * cols[1][1],
                   -(cols[0][0] * cols[2][1] - cols[2][0] * cols[0][1]),
                   cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1]]
            row = [0.0] * k
            row[i:i + 3] = cof
            rows.append(row)
            rhs.append(0.0)
    return np.array(rows, dtype=complex).reshape(len(rows), k), np.array(rhs, dtype=complex)


@dataclass
class PatternSample:
    """Sampled points, one column per variable of ``data.variables``."""

    variables: List[VarId]
    points: np.ndarray
    parameter_count: Optional[int]

    @property
    def realized(self) -> bool:
        return self.points.shape[0] > 0

    def point(self, k: int) -> Dict[VarId, complex]:
        return {v: complex(self.points[k, i]) for i, v in enumerate(self.variables)}


def sample_pattern(data: TrinomialData, J: Sequence[VarId], count: int,
                   rng: np.random.Generator, tol: float = 1e-6) -> PatternSample:
    """Up to ``count`` points whose vanishing T coordinates are exactly ``J``.

    ``parameter_count`` is the number of free parameters used; for a
    realizable pattern this is the dimension of the stratum.
    """
    validate(data).raise_if_invalid()
    J = set(J)
    variables = data.variables
    blocks = list(data.blocks)
    touched = [i for i in blocks if any(v in J for v in data.block_vars(i))]
    free = [i for i in blocks if i not in touched]
    A, b = monomial_system(data)
    idx_free = [blocks.index(i) for i in free]
    A_free = A[:, idx_free] if A.size else np.zeros((0, len(free)), dtype=complex)
    empty = PatternSample(variables, np.zeros((0, len(variables)), dtype=complex), None)
    if len(free) == 0:
        if np.allclose(b, 0):
            nullity = 0
            particular = np.zeros(0, dtype=complex)
            basis = np.zeros((0, 0), dtype=complex)
        else:
            return empty
    else:
        particular, *_ = np.linalg.lstsq(A_free, b, rcond=None) if A_free.shape[0] else (
            np.zeros(len(free), dtype=complex),)
        if A_free.shape[0] and np.linalg.norm(A_free @ particular - b) > tol:
            return empty
        if A_free.shape[0]:
            _, sv, vh = np.linalg.svd(A_free)
            rank = int(np.sum(sv > tol))
            basis = vh[rank:].conj().T
        else:
            basis = np.eye(len(free), dtype=complex)
        nullity = basis.shape[1]
    params = nullity + data.m
    params += sum(len(data.block_vars(i)) - 1 for i in free)
    params += sum(sum(1 for v in data.block_vars(i) if v not in J) for i in touched)

    xi = _random_nonzero(rng, (count, nullity))
    M = particular[None, :] + xi @ basis.T if free else np.zeros((count, 0), dtype=complex)
    ok = np.all(np.abs(M) > tol, axis=1) if free else np.ones(count, dtype=bool)

    cols = {}
    for v in variables:
        cols[v] = np.zeros(count, dtype=complex) if v in J else _random_nonzero(rng, count)
    for k, i in enumerate(free):
        bv = data.block_vars(i)
        rest = np.ones(count, dtype=complex)
        for v in bv[1:]:
            rest = rest * cols[v] ** data.exponent(v)
        l = data.exponent(bv[0])
        target = M[:, k] / rest
        branch = rng.integers(0, l, count)
        cols[bv[0]] = (np.abs(target) ** (1.0 / l) * np.exp(1j * (np.angle(target) + 2 * np.pi * branch) / l))
    points = np.stack([cols[v] for v in variables], axis=1)[ok]
    return PatternSample(variables, points, params)


def vanishing_patterns(data: TrinomialData, points: np.ndarray, eps: float = 1e-9) -> List[frozenset]:
    """The set of T variables vanishing (relative to ``eps``) at each sampled point."""
    t_idx = [i for i, v in enumerate(data.variables) if v.kind == 0]
    scale = np.maximum(1.0, np.max(np.abs(points), axis=1)) if points.size else np.ones(0)
    zero = np.abs(points[:, t_idx]) < eps * scale[:, None]
    tv = [data.variables[i] for i in t_idx]
    return [frozenset(v for v, z in zip(tv, row) if z) for row in zero]
