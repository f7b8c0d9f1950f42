from __future__ import annotations

import pytest

from trinomial_workbench.poly import Polynomial, T
from trinomial_workbench.variety import (InvalidData, TrinomialData, danielewski, dimension,
                                         example_hypersurface, relations, strip_free_part,
                                         torus_invariant, validate)

from suite import QUADRIC, type2


def codes(data):
    return [v.code for v in validate(data).violations]


def test_danielewski_relation():
    alg = relations(danielewski())
    assert [str(g) for g in alg.relations] == ["T[1][1]*T[1][2] - T[2][1]^2 - 1"]
    assert dimension(danielewski()) == 2


def test_type2_relation_is_determinant():
    alg = relations(QUADRIC)
    assert [str(g) for g in alg.relations] == ["-T[0][1]^2 - T[1][1]^2 + T[2][1]^2"]


def test_type2_four_blocks_gives_two_relations():
    data = type2((2,), (2,), (3,), (1, 1))
    assert len(relations(data).relations) == 2
    assert dimension(data) == 5 - 3 + 1


@pytest.mark.parametrize("data, code, path", [
    (TrinomialData(3, ((1,), (2,)), (0, 1)), "BadType", "/type"),
    (TrinomialData(1, ((1,), (2,)), (0, 1), -1), "NegativeM", "/m"),
    (TrinomialData(1, ((1,), ()), (0, 1)), "EmptyBlock", "/blocks/1/l"),
    (TrinomialData(1, ((0,), (2,)), (0, 1)), "NonPositiveExponent", "/blocks/0/l/0"),
    (TrinomialData(1, ((2,),), (0,)), "TooFewBlocks", "/blocks"),
    (TrinomialData(1, ((1,), (2,)), (0, 1, 2)), "ConstantsShape", "/A"),
    (TrinomialData(1, ((1, 1), (2,)), (1, 1)), "DuplicateConstant", "/A/1"),
    (TrinomialData(2, ((2,), (2,), (2,)), ((1, 2, 1), (1, 2, 0))), "DependentColumns", "/A/1"),
])
def test_validation_violations(data, code, path):
    rep = validate(data)
    assert not rep.ok
    assert any(v.code == code and v.path == path for v in rep.violations)
    with pytest.raises(InvalidData):
        rep.raise_if_invalid()


def test_valid_data_has_no_violations():
    assert validate(danielewski()).ok
    assert validate(QUADRIC).ok


def test_operations_reject_invalid_data():
    with pytest.raises(InvalidData):
        relations(TrinomialData(1, ((1, 1), (2,)), (1, 1)))


def test_strip_free_part():
    data = type2((2,), (2,), (2,), m=2)
    assert strip_free_part(data).m == 0
    assert dimension(data) == dimension(strip_free_part(data)) + 2


def test_example_hypersurface_relation():
    ex = example_hypersurface(1, (2,), (3,), 1, (1,))
    x, y, z, u, v = (Polynomial.var(w) for w in (T(1, 1), T(2, 1), T(3, 1), T(4, 1), T(5, 1)))
    f = x * (y ** 2 + z ** 3) - u * v
    assert ex.algebra.relations.relations[0] == f
    assert ex.derivation.image(T(4, 1)) == 2 * x * y
    assert ex.derivation.image(T(2, 1)) == v
    assert ex.algebra.name(T(4, 1)) == "u"


def test_example_hypersurface_rejects_bad_parameters():
    with pytest.raises(ValueError):
        example_hypersurface(1, (2,), (3,), 2, (1,))
    with pytest.raises(ValueError):
        example_hypersurface(0, (2,), (3,), 1, (1,))


def test_torus_invariant():
    assert str(torus_invariant(danielewski()).num) == "T[2][1]^2"
    inv = torus_invariant(QUADRIC)
    assert str(inv.num) == "T[0][1]^2" and str(inv.den) == "T[1][1]^2"
