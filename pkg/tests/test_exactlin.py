import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qhalg.exactlin import (
    GF, QQ, Echelon, ScalarParseError, determinant, field_from_tag, identity, int_det, int_matmul,
    inverse, matmul, random_unimodular, rank, smith_normal_form, solve_right_kernel, sparse,
)

small = st.integers(-5, 5)


def matrices(rows=st.integers(1, 5), cols=st.integers(1, 5)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]),
                            min_size=rc[0], max_size=rc[0]))


@given(matrices(), st.sampled_from([0, 2, 3, 7]))
def test_rank_plus_nullity(m, p):
    fld = QQ if p == 0 else GF(p)
    mat = [[fld(x) for x in row] for row in m]
    ker = solve_right_kernel(mat, len(m[0]), fld)
    assert rank(mat, fld) + len(ker) == len(m[0])
    for v in ker:
        assert all(sum((a * b for a, b in zip(row, v)), fld.zero) == fld.zero for row in mat)


@given(matrices(st.just(3), st.just(3)))
def test_inverse_round_trip(m):
    mat = [[Fraction(x) for x in row] for row in m]
    if determinant(mat, QQ) == 0:
        with pytest.raises(ZeroDivisionError):
            inverse(mat, QQ)
        return
    assert matmul(mat, inverse(mat, QQ), QQ) == identity(3, QQ)


@given(matrices())
@settings(max_examples=60)
def test_smith_normal_form(m):
    diag, u, v = smith_normal_form(m)
    d = int_matmul(int_matmul(u, m), v)
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            assert x == (diag[i] if i == j and i < len(diag) else 0)
    nz = [x for x in diag if x]
    assert all(x > 0 for x in diag if x)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert abs(int_det(u)) == 1 and abs(int_det(v)) == 1


@given(matrices(st.just(3), st.just(3)), st.integers(0, 10_000))
@settings(max_examples=50)
def test_smith_is_equivalence_invariant(m, seed):
    rng = random.Random(seed)
    p, q = random_unimodular(3, rng), random_unimodular(3, rng)
    assert smith_normal_form(int_matmul(int_matmul(p, m), q))[0] == smith_normal_form(m)[0]


def test_random_unimodular_det():
    rng = random.Random(5)
    for n in (1, 2, 4):
        assert abs(int_det(random_unimodular(n, rng))) == 1


@given(st.fractions(max_denominator=50))
def test_rational_round_trip(x):
    assert QQ.parse(QQ.format(x)) == x


def test_rational_canonical_form():
    assert QQ.format(Fraction(4, 2)) == "2"
    assert QQ.format(Fraction(-3, 6)) == "-1/2"


@given(st.integers(-100, 100), st.sampled_from([2, 3, 5, 101]))
def test_residue_round_trip(v, p):
    fld = GF(p)
    x = fld(v)
    assert fld.format(x) == f"{v % p} mod {p}"
    assert fld.parse(fld.format(x)) == x


def test_scalar_errors():
    with pytest.raises(ScalarParseError):
        QQ.parse("1 mod 3")
    with pytest.raises(ScalarParseError):
        GF(3).parse("1 mod 5")
    with pytest.raises(ScalarParseError):
        QQ.parse("abc")
    with pytest.raises(ScalarParseError):
        field_from_tag("R")
    with pytest.raises(ValueError):
        GF(4)


def test_field_tags():
    assert field_from_tag("QQ") is QQ
    assert field_from_tag("GF(7)") is GF(7)
    assert GF(7).parse("1/2") == GF(7)(4)


def test_echelon_coordinates():
    ech = Echelon(QQ, track=True)
    a, b = sparse([1, 2, 0]), sparse([0, 1, 1])
    ech.add(a)
    ech.add(b)
    assert not ech.add(sparse([2, 5, 1]))
    assert ech.coordinates(sparse([1, 3, 1])) == {0: 1, 1: 1}
    assert ech.coordinates(sparse([0, 0, 1])) is None
