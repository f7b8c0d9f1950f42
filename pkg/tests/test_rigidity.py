from __future__ import annotations

import random
from dataclasses import replace

import pytest

from trinomial_workbench.rigidity import RigidityVerdict, check_witness, rigidity_verdict
from trinomial_workbench.variety import InvalidData, TrinomialData

from suite import RIGIDITY_TABLE, random_instance


@pytest.mark.parametrize("data, target, rigid, clause, blocks, j, v", RIGIDITY_TABLE)
def test_truth_table(data, target, rigid, clause, blocks, j, v):
    verdict = rigidity_verdict(data, target)
    assert (verdict.rigid, verdict.clause, verdict.blocks, verdict.j, verdict.v) == (
        rigid, clause, blocks, j, v)
    assert check_witness(data, verdict, target)


def test_forged_witness_rejected():
    data = RIGIDITY_TABLE[0][0]
    forged = RigidityVerdict(False, "type1-clause2", (1,), {2: 1})
    assert not check_witness(data, forged)


def test_bad_target():
    with pytest.raises(ValueError):
        rigidity_verdict(RIGIDITY_TABLE[0][0], "Z")


def test_invalid_data():
    with pytest.raises(InvalidData):
        rigidity_verdict(TrinomialData(1, ((1,), (1,)), (0, 0)))


def lower_exponent(data: TrinomialData, rng: random.Random) -> TrinomialData:
    k = rng.randrange(len(data.exponents))
    block = list(data.exponents[k])
    pos = rng.randrange(len(block))
    block[pos] = 1
    exps = data.exponents[:k] + (tuple(block),) + data.exponents[k + 1:]
    return replace(data, exponents=exps)


def test_setting_an_exponent_to_one_preserves_nonrigidity():
    """Clauses 2 and 3a only ask for exponents equal to 1, so they survive."""
    rng = random.Random(7)
    for _ in range(200):
        data = random_instance(rng)
        before = rigidity_verdict(data, "Y")
        after = rigidity_verdict(lower_exponent(data, rng), "Y")
        if not before.rigid and before.clause in ("type1-clause2", "type2-clause3a"):
            assert not after.rigid


def test_y_nonrigid_implies_x_nonrigid():
    rng = random.Random(11)
    for _ in range(200):
        data = random_instance(rng)
        if not rigidity_verdict(data, "Y").rigid:
            assert not rigidity_verdict(data, "X").rigid
        assert check_witness(data, rigidity_verdict(data, "X"), "X")
        assert check_witness(data, rigidity_verdict(data, "Y"), "Y")
