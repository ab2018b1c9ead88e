"""End-to-end acceptance battery.

One test per numbered criterion; each prints a single PASS line when its
property holds on every seeded case (exact arithmetic, so comparisons
are equalities, never tolerances).
"""

import time

import pytest

from dercat.linalg import Field, Matrix
from dercat import diagram
from dercat import presheaf as ps
from dercat import complexes as cx
from dercat import derivator as dv
from dercat import coherence as co
from dercat import generators as gen

F2 = Field("prime", 2)


def simple(field, cat, at):
    dims = {x: 1 if x == at else 0 for x in cat.objects}
    action = {a: Matrix.zeros(field, dims[cat.src[a]], dims[cat.tgt[a]])
              for a in cat.nonidentity_arrows()}
    return ps.Presheaf(field, cat, dims, action)


def test_criterion_1_resolution_length_bound():
    r = gen.rng_for(101)
    t0 = time.time()
    for _ in range(200):
        shape = gen.rand_poset(r, 5)
        f = gen.rand_presheaf(r, F2, shape)
        res = ps.resolve(f)
        n = diagram.max_chain_length(shape)
        assert len(res.terms) <= n + 1
        if res.kernels:
            assert res.kernels[-1].is_zero()
    elapsed = time.time() - t0
    assert elapsed < 10.0
    print("PASS criterion 1: resolution length bound on 200 cases "
          "(%.2fs)" % elapsed)


def test_criterion_2_ext_table_of_simples():
    d1 = diagram.delta(1)
    s = {i: cx.stalk(simple(F2, d1, i)) for i in (0, 1)}
    for i in (0, 1):
        for j in (0, 1):
            for n in (0, 1, 2):
                want = 1 if (i == j and n == 0) or (i, j, n) == (0, 1, 1) \
                    else 0
                assert cx.ext(s[i], s[j], n)[0] == want
    print("PASS criterion 2: Ext table of the simples over the arrow "
          "matches the hand-derived values")


def test_criterion_3_adjunction_dimensions():
    r = gen.rng_for(103)
    for _ in range(100):
        u = gen.rand_functor(r, 4)
        x = gen.rand_complex(r, F2, u.source, lo=-1, hi=1, max_parts=1)
        y = gen.rand_complex(r, F2, u.target, lo=-1, hi=1, max_parts=1)
        uy = cx.restrict_complex(u, y)
        l, _ = dv.lan(u, x)
        assert cx.hom_dim(l, y) == cx.hom_dim(x, uy)
        rr, _ = dv.ran(u, x)
        assert cx.hom_dim(y, rr) == cx.hom_dim(uy, x)
    print("PASS criterion 3: adjunction dimension equalities on 100 "
          "triples")


def test_criterion_4_base_change_invertible():
    r = gen.rng_for(104)
    for _ in range(100):
        u = gen.rand_functor(r, 4)
        x = gen.rand_complex(r, F2, u.source, lo=-1, hi=1, max_parts=1)
        y = r.choice(u.target.objects)
        _, ok_l = dv.base_change_left(u, y, x)
        _, ok_r = dv.base_change(u, y, x)
        assert ok_l and ok_r
    print("PASS criterion 4: base change comparison maps invertible on "
          "100 cases")


def test_criterion_5_cartesian_iff_cocartesian():
    r = gen.rng_for(105)
    for _ in range(200):
        base = gen.rand_poset(r, 2)
        prod = diagram.product(diagram.square(), base)
        x = gen.rand_complex(r, F2, prod, lo=-1, hi=1, max_parts=1)
        s = dv.square_over(x)
        assert dv.is_cocartesian(s)[0] == dv.is_cartesian(s)[0]
    print("PASS criterion 5: cartesian and cocartesian agree on 200 "
          "squares")


def test_criterion_6_suspension_is_shift():
    r = gen.rng_for(106)
    for _ in range(100):
        shape = gen.rand_poset(r, 4)
        x = gen.rand_complex(r, F2, shape, max_parts=1)
        _, witness = dv.suspension_via_recollement(x)
        assert cx.is_quasi_iso(witness)
        assert cx.shift(x, 1) in (witness.source, witness.target)
    print("PASS criterion 6: suspension via recollement equals shift on "
          "100 complexes")


def test_criterion_7_standard_triangle_matches_cone():
    r = gen.rng_for(107)
    for _ in range(50):
        base = gen.rand_poset(r, 3)
        conf = gen.rand_conflation(r, F2, base, max_parts=1)
        sq = gen.conflation_square(conf, base)
        assert dv.is_cocartesian(sq)[0] and dv.is_cartesian(sq)[0]
        tri = dv.standard_triangle(sq)
        assert tri.matches_cone
    # the non-split extension of the simples must give a nonzero class
    # spanning a one-dimensional Ext^1
    d1 = diagram.delta(1)
    s0, s1 = simple(F2, d1, 0), simple(F2, d1, 1)
    p0 = ps.free_at(F2, d1, 1, 0)
    infl = ps.PresheafMap(s1, p0, {0: Matrix.zeros(F2, 1, 0),
                                   1: Matrix.identity(F2, 1)})
    defl = ps.PresheafMap(p0, s0, {0: Matrix.identity(F2, 1),
                                   1: Matrix.zeros(F2, 0, 1)})
    assert cx.ext(cx.stalk(s0), cx.stalk(s1), 1)[0] == 1
    tri = dv.standard_triangle(
        gen.conflation_square(ps.Conflation(infl, defl), d1))
    assert list(tri.delta_class) == [F2.one]
    assert tri.matches_cone
    print("PASS criterion 7: standard triangle matches the cone class on "
          "50 squares and the non-split extension")


def test_criterion_8_coherence_round_trip():
    r = gen.rng_for(108)
    t0 = time.time()
    shapes = ((diagram.delta(1), diagram.delta(1)),
              (diagram.delta(2), diagram.delta(1)))
    for k in range(100):
        icat, base = shapes[k % len(shapes)]
        d = gen.rand_incoherent(r, F2, icat, base, max_parts=1)
        _, cert = co.lift_object(d)
        assert cert.verify()
    for k in range(100):
        icat, base = shapes[k % len(shapes)]
        x = gen.rand_honest(r, F2, icat, base, max_parts=1)
        _, cert = co.lift_object(co.dia(x))
        assert cert.verify()
    elapsed = time.time() - t0
    assert elapsed < 60.0
    print("PASS criterion 8: coherence round trips on 100 + 100 cases "
          "(%.2fs)" % elapsed)


def test_criterion_9_hom_bijection():
    r = gen.rng_for(109)
    for _ in range(100):
        icat = gen.rand_poset(r, 3)
        prod = diagram.product(icat, diagram.delta(1))
        x = gen.rand_stalkish_complex(r, F2, prod, max_parts=1)
        z = gen.rand_stalkish_complex(r, F2, prod, max_parts=1)
        rep = co.hom_compare(x, z)
        assert rep.passes
    print("PASS criterion 9: coherent and incoherent Hom agree on 100 "
          "pairs")


def test_criterion_10_extension_exactness():
    r = gen.rng_for(110)
    e = diagram.terminal_cat()
    kernels = []
    while len(kernels) < 5:
        k = gen.rand_kernel(r, F2, diagram.delta(1), max_parts=1)
        if not k.is_zero() and co.kernel_toda_check(k).passes:
            kernels.append(k)
    for _ in range(50):
        conf = gen.rand_conflation(r, F2, e, max_parts=1)
        sq = gen.conflation_square(conf, e)
        for kernel in kernels:
            ext, cert = co.extend_functor(kernel, sq.complex)
            assert cert.verify()
            esq = dv.square_over(ext)
            assert dv.is_cocartesian(esq)[0]
            assert dv.is_cartesian(esq)[0]
    # naturality in the shape: restriction commutes with extension for the
    # identity, the point inclusions, and the collapse to the point
    sqc = diagram.square()
    x = gen.conflation_square(
        gen.rand_conflation(r, F2, e, max_parts=1), e).complex
    for kernel in kernels:
        for u in [diagram.identity_functor(sqc)] + \
                [diagram.point_inclusion(sqc, c) for c in sqc.objects]:
            assert co.verify_extension_compat(u, kernel, x).passes
        xe = cx.over_point(gen.rand_stalkish_complex(r, F2, e, max_parts=1))
        u = diagram.terminal_functor(sqc)
        assert co.verify_extension_compat(u, kernel, xe).passes
    print("PASS criterion 10: extension exactness on 50 conflations x 5 "
          "kernels with restriction compatibility")
