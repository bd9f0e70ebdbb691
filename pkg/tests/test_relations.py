import numpy as np
import pytest
from fractions import Fraction

from multiwp.core import Index, compositions_ge2, stuffle
from multiwp.relations import (SymbolicCombination, _IntEchelon, antipode_relation,
                               combination_residual, conjectured_dim, conjectured_rel,
                               eisenstein_relation_residual, mzv_relation_residual,
                               relation_rank, relation_rows, relation_table)

TABLE = {
    # weight: (dim, rel_conj, rel_anti)
    2: (1, 0, 0), 3: (1, 0, 0), 4: (2, 0, 0), 5: (3, 0, 0), 6: (4, 1, 1),
    7: (7, 1, 1), 8: (9, 4, 4), 9: (15, 6, 5), 10: (21, 13, 13),
    11: (32, 23, 19), 12: (47, 42, 40), 13: (70, 74, 62),
}


def test_symbolic_combination_validation():
    c = SymbolicCombination({Index((2, 3)): Fraction(1), Index((5,)): Fraction(-2)})
    assert c.weight == 5
    with pytest.raises(ValueError):
        SymbolicCombination({Index((2,)): 1, Index((3,)): 1})
    with pytest.raises(ValueError):
        SymbolicCombination({Index((1, 2)): 1})
    assert not SymbolicCombination({Index((4,)): 0})


def test_antipode_depth_one_source_is_trivial():
    for k in (2, 5, 9):
        assert not antipode_relation((k,))


def test_antipode_low_weight_sources_vanish():
    for w in range(4, 7):
        for src in compositions_ge2(w):
            assert not antipode_relation(src), src


def test_weight6_relation_frozen():
    # the first nontrivial relation: -3 Gt_{2,4} + 6 Gt_{3,3} - Gt_6 = 0
    rel = antipode_relation((2, 2, 3))
    assert rel.terms == {Index((2, 4)): Fraction(-3), Index((3, 3)): Fraction(6),
                         Index((6,)): Fraction(-1)}
    assert combination_residual(rel, 2j) < 1e-12


def test_conjectured_dims_and_rels():
    dims = [conjectured_dim(w) for w in range(2, 17)]
    assert dims == [1, 1, 2, 3, 4, 7, 9, 15, 21, 32, 47, 70, 104, 153, 228]
    rels = [conjectured_rel(w) for w in range(2, 17)]
    assert rels == [0, 0, 0, 0, 1, 1, 4, 6, 13, 23, 42, 74, 129, 224, 382]


@pytest.mark.parametrize("weight", sorted(TABLE))
def test_relation_rank_matches_table(weight):
    dim, rel_conj, rel_anti = TABLE[weight]
    assert conjectured_dim(weight) == dim
    assert conjectured_rel(weight) == rel_conj
    assert relation_rank(weight) == rel_anti
    assert rel_anti <= rel_conj  # deficit row is nonnegative


def test_rank_idempotent_and_order_invariant():
    w = 8
    basis = compositions_ge2(w)
    rows = list(relation_rows(w))
    col1 = {ix: i for i, ix in enumerate(basis)}
    e1 = _IntEchelon(col1)
    for r in rows + rows:  # duplicates change nothing
        e1.insert(r)
    assert e1.rank == 4
    rng = np.random.default_rng(0)
    perm = rng.permutation(len(basis))
    col2 = {ix: int(perm[i]) for i, ix in enumerate(basis)}
    e2 = _IntEchelon(col2)
    for r in rows:
        e2.insert(r)
    assert e2.rank == 4


def test_depth_two_multipliers_do_not_extend_span():
    # products with arbitrary elements stay inside the single-index span
    w = 9
    basis = compositions_ge2(w)
    col = {ix: i for i, ix in enumerate(basis)}
    ech = _IntEchelon(col)
    for r in relation_rows(w):
        ech.insert(r)
    base_rank = ech.rank
    assert base_rank == relation_rank(w)
    for u1, u2 in [((2,), (2,)), ((2,), (3,))]:
        uw = sum(u1) + sum(u2)
        for src in compositions_ge2(w - uw + 1):
            rel = antipode_relation(src)
            if not rel:
                continue
            prod = SymbolicCombination({})
            for word, m in stuffle(u1, u2).items():
                prod = prod + rel.stuffle_mul(word).scale(m)
            added = ech.insert(prod)
            assert not added
    assert ech.rank == base_rank


def test_relation_table_shape():
    rows = relation_table(8)
    assert rows[0] == {"weight": 2, "dim_conj": 1, "rel_conj": 0,
                       "rel_anti": 0, "deficit": 0}
    assert rows[-1] == {"weight": 8, "dim_conj": 9, "rel_conj": 4,
                        "rel_anti": 4, "deficit": 0}


def test_antipode_relations_numeric():
    tau = 2j
    for w in (6, 7, 8):
        for src in compositions_ge2(w + 1):
            rel = antipode_relation(src)
            if rel:
                assert combination_residual(rel, tau) < 1e-5, src


def test_mzv_relation_examples():
    # depth 1, index (2): the identity reduces to Euler's 2 zeta(2) = pi^2/3
    assert mzv_relation_residual((2,)) < 1e-12
    assert mzv_relation_residual((2, 2)) < 1e-8
    assert mzv_relation_residual((2, 3)) < 1e-8


def test_eisenstein_relation_examples():
    tau = 2j
    assert eisenstein_relation_residual((2,), 2, tau) < 1e-6
    assert eisenstein_relation_residual((2, 2), 1, 1j) < 1e-5
    assert eisenstein_relation_residual((2, 2), 2, tau) < 1e-5
    with pytest.raises(ValueError):
        eisenstein_relation_residual((2,), 0, tau)
