from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trinomial_workbench.lattice import (NotHomogeneous, ZeroPolynomial, degree_of, determinant,
                                         grading_group, integer_kernel, matmul, smith_normal_form,
                                         weight_assignment)
from trinomial_workbench.poly import Polynomial, T
from trinomial_workbench.variety import danielewski, relations

from suite import QUADRIC, random_instance, type1, type2


def assert_smith(A, snf):
    assert matmul(matmul(snf.U, A), snf.V) == snf.D
    assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1
    n, m = len(A), len(A[0])
    assert matmul(snf.U, snf.U_inv) == [[int(i == j) for j in range(n)] for i in range(n)]
    assert matmul(snf.V, snf.V_inv) == [[int(i == j) for j in range(m)] for i in range(m)]
    d = snf.diagonal
    for i in range(n):
        for j in range(m):
            if i != j:
                assert snf.D[i][j] == 0
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert d[:len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


class TestSmith:
    def test_small_example(self):
        snf = smith_normal_form([[2, 4], [6, 8]])
        assert snf.diagonal == [2, 4]

    def test_identity(self):
        snf = smith_normal_form([[1, 0], [0, 1]])
        assert snf.U == [[1, 0], [0, 1]] and snf.V == [[1, 0], [0, 1]]

    def test_zero_matrix(self):
        snf = smith_normal_form([[0, 0, 0], [0, 0, 0]])
        assert snf.rank == 0

    @given(st.integers(1, 6).flatmap(lambda n: st.integers(1, 6).flatmap(
        lambda m: st.lists(st.lists(st.integers(-20, 20), min_size=m, max_size=m), min_size=n, max_size=n))))
    @settings(max_examples=300, deadline=None)
    def test_random(self, A):
        assert_smith(A, smith_normal_form(A))

    def test_deterministic(self):
        A = [[3, -6, 9], [12, 4, 1]]
        assert smith_normal_form(A) == smith_normal_form(A)

    def test_integer_kernel(self):
        K = integer_kernel([[1, 1, 0], [0, 0, 2]])
        assert K == [[1, -1, 0]] or K == [[-1, 1, 0]]


class TestGrading:
    def test_danielewski(self):
        g = grading_group(danielewski())
        assert g.free_rank == 1 and g.torsion == (2,)
        w = weight_assignment(danielewski())
        assert [w.free[v] for v in (T(1, 1), T(1, 2), T(2, 1))] == [(1,), (-1,), (0,)]

    def test_quadric_torsion(self):
        g = grading_group(QUADRIC)
        assert g.free_rank == 1 and g.torsion == (2, 2)
        w = weight_assignment(QUADRIC)
        assert all(w.free[v] == (1,) for v in QUADRIC.t_vars)

    def test_free_variable_gets_its_own_direction(self):
        data = type1((2,), (3,), m=1)
        assert grading_group(data).free_rank == 1 + 1 - 2 + 1

    def test_degree_of(self):
        w = weight_assignment(danielewski())
        x, z = Polynomial.var(T(1, 1)), Polynomial.var(T(2, 1))
        assert degree_of(x * z + x, w) == (1,)
        with pytest.raises(NotHomogeneous):
            degree_of(x + 1, w)
        with pytest.raises(ZeroPolynomial):
            degree_of(Polynomial(), w)

    def test_torsion_degree(self):
        w = weight_assignment(danielewski())
        assert degree_of(Polynomial.var(T(2, 1)), w, with_torsion=True) == ((0,), (1,))

    def test_random_instances(self):
        rng = random.Random(20261018)
        for _ in range(100):
            data = random_instance(rng)
            check_grading(data)


def check_grading(data):
    """Free rank n + m - r, homogeneous relations, degree-zero type-1 monomials."""
    g = grading_group(data)
    assert g.free_rank == data.n + data.m - data.r
    w = weight_assignment(data)
    for rel in relations(data).relations:
        assert len({w.monomial_degree(m, with_torsion=True) for m in rel.terms}) == 1
    if data.variety_type == 1:
        for i in data.blocks:
            (m,) = data.block_monomial(i).terms
            assert w.monomial_degree(m, with_torsion=True) == w.zero(with_torsion=True)
    return True


def test_grading_type2_wide():
    check_grading(type2((2, 3), (1,), (4, 4, 1), (5,), m=2))
