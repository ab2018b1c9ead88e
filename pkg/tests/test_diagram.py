"""Finite directed categories and functors: construction oracles and the
validation rules."""

import pytest

from dercat import diagram


def test_delta_counts():
    d2 = diagram.delta(2)
    assert len(d2.objects) == 3
    # non-identity arrows of Δ2: one per ordered pair x > y
    assert len(d2.nonidentity_arrows()) == 3
    assert diagram.max_chain_length(d2) == 2


def test_arrows_point_from_larger_to_smaller():
    d1 = diagram.delta(1)
    assert len(d1.hom(1, 0)) == 1
    assert len(d1.hom(0, 1)) == 0


def test_poset_category_matches_delta():
    p = diagram.poset_category([0, 1, 2], lambda a, b: a <= b)
    assert p == diagram.delta(2)


def test_validation_rejects_cycles():
    hom = {(0, 0): ("i0",), (1, 1): ("i1",), (0, 1): ("a",), (1, 0): ("b",)}
    with pytest.raises(ValueError):
        diagram.FinCat([0, 1], hom, {0: "i0", 1: "i1"},
                       {("a", "b"): "i1", ("b", "a"): "i0"})


def test_validation_rejects_endomorphisms():
    hom = {(0, 0): ("i0", "e")}
    with pytest.raises(ValueError):
        diagram.FinCat([0], hom, {0: "i0"}, {("e", "e"): "e"})


def test_product_structure():
    sq = diagram.square()
    assert len(sq.objects) == 4
    # arrows: 4 identities + 2 + 2 edges + 1 diagonal
    assert len(sq.nonidentity_arrows()) == 5
    assert sq.product_of[0] == diagram.delta(1)
    a = sq.hom((1, 1), (0, 0))[0]
    f1, f2 = sq.pair_of[a]
    assert sq.pair_arrow[(f1, f2)] == a


def test_opposite_involution():
    d = diagram.delta(2)
    assert diagram.opposite(diagram.opposite(d)) == d
    op = diagram.opposite(d)
    assert len(op.hom(0, 2)) == 1 and len(op.hom(2, 0)) == 0


def test_disjoint_union_and_subcategory():
    cat, il, ir = diagram.disjoint_union(diagram.delta(1), diagram.delta(1))
    assert len(cat.objects) == 4
    assert len(cat.nonidentity_arrows()) == 2
    sub, incl = diagram.full_subcategory(cat, [("L", 0), ("L", 1)])
    assert len(sub.nonidentity_arrows()) == 1
    assert incl.obj_map[("L", 0)] == ("L", 0)


def test_functor_validation():
    d1 = diagram.delta(1)
    d2 = diagram.delta(2)
    u = diagram.functor_by_objects(d1, d2, {0: 0, 1: 2})
    assert u.obj_map[1] == 2
    with pytest.raises(ValueError):
        # 0 ≤ 1 in the source forces an arrow 1 → 0, absent for 2 → ... 0↦2, 1↦0 flips
        bad = {0: 2, 1: 0}
        v = diagram.functor_by_objects(d1, d2, bad)
        a = d1.hom(1, 0)[0]
        if v.target.src[v.arrow_map[a]] != bad[1]:
            raise ValueError("endpoint mismatch")


def test_terminal_and_point_functors():
    d1 = diagram.delta(1)
    p = diagram.terminal_functor(d1)
    assert set(p.obj_map.values()) == {"*"}
    i0 = diagram.point_inclusion(d1, 0)
    assert i0.obj_map["*"] == 0
    comp = diagram.compose_functors(p, i0)
    assert comp.obj_map["*"] == "*"


def test_immersion_predicates():
    d1 = diagram.delta(1)
    prod = diagram.product(d1, diagram.delta(1))

    def emb(end):
        omap = {x: (x, end) for x in d1.objects}
        amap = {a: prod.pair_arrow[(a, diagram.delta(1).identity[end])]
                for a in d1.arrows}
        return diagram.DiagFunctor(d1, prod, omap, amap)

    # objects (x, 0) admit arrows in from (x, 1): sieve => closed; dual open
    assert diagram.is_closed_immersion(emb(0))
    assert diagram.is_open_immersion(emb(1))
    assert not diagram.is_open_immersion(emb(0))


def test_comma_under_identity():
    d2 = diagram.delta(2)
    u = diagram.identity_functor(d2)
    c, forget, alpha = diagram.comma_under(u, 1)
    # objects: pairs (x, arrow x -> 1); arrows into 1 exist from 1 and 2
    assert len(c.objects) == 2


def test_max_chain_length_square():
    assert diagram.max_chain_length(diagram.square()) == 2
    assert diagram.max_chain_length(diagram.terminal_cat()) == 0
