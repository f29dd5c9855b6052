import random

import pytest

from qhalg.algebra import (
    UnsupportedRadicalError, algebra_from_table, centralizer, change_basis, direct_product,
    opposite, random_basis_change,
)
from qhalg.corpus import CORPUS_NAMES, corpus_algebra
from qhalg.exactlin import GF, QQ
from qhalg.gluing import match_slice_bases, permute_basis, same_structure
from qhalg.quiver import load_algebra

DIMS = {"k": 1, "kxk": 2, "A2": 3, "A3_ba": 5, "square": 9, "dual2": 2, "trunc3": 3}
NIL = {"k": 1, "kxk": 1, "A2": 2, "A3_ba": 2, "square": 3, "dual2": 2, "trunc3": 3}


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_corpus_invariants(algebras, name):
    alg = algebras[name]
    assert alg.dim == DIMS[name]
    assert alg.nilpotency_index == NIL[name]
    assert alg.is_associative()
    assert alg.check_idempotents()
    assert sum(map(sum, alg.cartan())) == alg.dim


def test_radicals(algebras):
    assert algebras["k"].radical == []
    assert [algebras["dual2"].labels[i] for i in algebras["dual2"].radical] == ["x"]
    assert len(algebras["A3_ba"].radical) == 2


def test_opposite_is_involution(algebras):
    for alg in algebras.values():
        assert same_structure(opposite(opposite(alg)), alg)
    d = algebras["dual2"]
    assert same_structure(opposite(d), d)


def test_opposite_of_a2_is_reversed_quiver(algebras):
    rev = load_algebra("vertices 1 2\narrow a : 2 -> 1\n")
    op = opposite(algebras["A2"])
    order = match_slice_bases(op, rev)
    assert same_structure(op, permute_basis(rev, order))


def test_direct_product_kxk(algebras):
    k = algebras["k"]
    p = direct_product(k, k)
    assert p.dim == 2 and p.n == 2 and p.radical == []
    assert same_structure(p, algebras["kxk"])


def test_centralizer(algebras):
    sq = algebras["square"]
    assert same_structure(centralizer(sq, range(sq.n)), sq)
    corner = centralizer(sq, [0, 3])
    assert corner.dim == 3 and corner.cartan() == [[1, 1], [0, 1]]
    with pytest.raises(ValueError):
        centralizer(sq, [])


@pytest.mark.parametrize("name", ["A2", "A3_ba", "square", "dual2", "trunc3"])
def test_raw_route_recovers_scrambled_algebra(algebras, name):
    alg = algebras[name]
    rng = random.Random(7)
    mult, unit = change_basis(alg, random_basis_change(alg.dim, QQ, rng))
    rec, basis = algebra_from_table(QQ, mult, unit, seed=3)
    assert rec.dim == alg.dim and rec.n == alg.n
    assert rec.is_associative() and rec.check_idempotents()
    assert rec.nilpotency_index == alg.nilpotency_index
    # Cartan matrices agree up to a permutation of the vertices
    assert sorted(map(sorted, rec.cartan())) == sorted(map(sorted, alg.cartan()))
    assert len(basis) == alg.dim


def test_raw_route_rejects_positive_characteristic():
    alg = corpus_algebra("A2", GF(3))
    mult, unit = change_basis(alg, random_basis_change(alg.dim, GF(3), random.Random(0)))
    with pytest.raises(UnsupportedRadicalError):
        algebra_from_table(GF(3), mult, unit)


def test_reordered_moves_idempotents(algebras):
    a = algebras["A2"].reordered([1, 0])
    assert a.vertex_labels == ["2", "1"]
    assert a.cartan() == [[1, 0], [1, 1]]
