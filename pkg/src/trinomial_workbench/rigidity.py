"""Combinatorial rigidity criterion for trinomial varieties.

A trinomial variety is non-rigid iff one of the following holds:

1. ``m != 0``;
2. type 1 and some block ``a`` such that every other block has an exponent 1;
3a. type 2 and two blocks ``a, b`` such that every other block has an exponent 1;
3b. type 2 and three blocks ``a, b, c`` such that every other block has an
    exponent 1 while ``a`` and ``b`` have only even exponents, one of them 2.

For ``Y(A)`` (the variety without the free factor) clause 1 is skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Dict, Optional, Tuple

from .variety import TrinomialData, validate

CLAUSES = ("m-nonzero", "type1-clause2", "type2-clause3a", "type2-clause3b", "none")


@dataclass(frozen=True)
class RigidityVerdict:
    rigid: bool
    clause: str
    blocks: Tuple[int, ...] = ()
    j: Dict[int, int] = field(default_factory=dict)
    v: Dict[int, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "rigid": self.rigid,
            "clause": self.clause,
            "witness": {
                "blocks": list(self.blocks),
                "j": {str(k): x for k, x in sorted(self.j.items())},
                "v": {str(k): x for k, x in sorted(self.v.items())},
            },
        }


def _position_of(data: TrinomialData, block: int, value: int) -> Optional[int]:
    for pos, e in enumerate(data.block_exponents(block), 1):
        if e == value:
            return pos
    return None


def _ones_outside(data: TrinomialData, excluded) -> Optional[Dict[int, int]]:
    j = {}
    for i in data.blocks:
        if i in excluded:
            continue
        pos = _position_of(data, i, 1)
        if pos is None:
            return None
        j[i] = pos
    return j


def _even_with_two(data: TrinomialData, block: int) -> Optional[int]:
    if all(e % 2 == 0 for e in data.block_exponents(block)):
        return _position_of(data, block, 2)
    return None


def rigidity_verdict(data: TrinomialData, target: str = "X") -> RigidityVerdict:
    """Decide rigidity of ``X(A)`` (``target="X"``) or ``Y(A)`` (``target="Y"``).

    The first satisfied clause is reported with the lexicographically smallest
    witness.
    """
    if target not in ("X", "Y"):
        raise ValueError("target must be 'X' or 'Y'")
    validate(data).raise_if_invalid()
    if target == "X" and data.m != 0:
        return RigidityVerdict(False, "m-nonzero")
    blocks = list(data.blocks)
    if data.variety_type == 1:
        for a in blocks:
            j = _ones_outside(data, {a})
            if j is not None:
                return RigidityVerdict(False, "type1-clause2", (a,), j)
        return RigidityVerdict(True, "none")
    for a, b in combinations(blocks, 2):
        j = _ones_outside(data, {a, b})
        if j is not None:
            return RigidityVerdict(False, "type2-clause3a", (a, b), j)
    for a, b, c in sorted(t for t in permutations(blocks, 3) if t[0] < t[1]):
        va, vb = _even_with_two(data, a), _even_with_two(data, b)
        if va is None or vb is None:
            continue
        j = _ones_outside(data, {a, b, c})
        if j is not None:
            return RigidityVerdict(False, "type2-clause3b", (a, b, c), j, {a: va, b: vb})
    return RigidityVerdict(True, "none")


def check_witness(data: TrinomialData, verdict: RigidityVerdict, target: str = "X") -> bool:
    """Re-evaluate the clause text on the reported witness."""
    l = data.block_exponents
    if verdict.clause == "none":
        return verdict.rigid
    if verdict.rigid:
        return False
    if verdict.clause == "m-nonzero":
        return target == "X" and data.m != 0
    if verdict.clause == "type1-clause2":
        if data.variety_type != 1 or len(verdict.blocks) != 1:
            return False
        outside = [i for i in data.blocks if i not in verdict.blocks]
    elif verdict.clause == "type2-clause3a":
        if data.variety_type != 2 or len(set(verdict.blocks)) != 2:
            return False
        outside = [i for i in data.blocks if i not in verdict.blocks]
    elif verdict.clause == "type2-clause3b":
        if data.variety_type != 2 or len(set(verdict.blocks)) != 3:
            return False
        outside = [i for i in data.blocks if i not in verdict.blocks]
        for i in verdict.blocks[:2]:
            pos = verdict.v.get(i)
            if pos is None or l(i)[pos - 1] != 2 or any(e % 2 for e in l(i)):
                return False
    else:
        return False
    if any(b not in data.blocks for b in verdict.blocks):
        return False
    return set(verdict.j) == set(outside) and all(l(i)[verdict.j[i] - 1] == 1 for i in outside)
