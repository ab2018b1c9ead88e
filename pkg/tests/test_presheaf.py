"""Presheaves of vector spaces: free objects, hom spaces, exactness and
resolutions, with hand-derived dimension oracles."""

import pytest

from dercat import linalg
from dercat.linalg import Field, Matrix
from dercat import diagram
from dercat import presheaf as ps
from dercat import generators as gen

F2 = Field("prime", 2)
F3 = Field("prime", 3)


def simple(field, cat, at):
    dims = {x: 1 if x == at else 0 for x in cat.objects}
    action = {a: Matrix.zeros(field, dims[cat.src[a]], dims[cat.tgt[a]])
              for a in cat.nonidentity_arrows()}
    return ps.Presheaf(field, cat, dims, action, validate=True)


def test_free_dims_count_arrows():
    # (V ⊗ i)_j has one copy of V per arrow j → i
    d2 = diagram.delta(2)
    f = ps.free_at(F2, d2, 1, 0)
    assert f.dims == {0: 1, 1: 1, 2: 1}
    g = ps.free_at(F2, d2, 2, 2)
    assert g.dims == {0: 0, 1: 0, 2: 2}


def test_hom_from_free_is_fiber():
    # Hom(free_at(v, i), G) has dimension v * dim G(i)
    d1 = diagram.delta(1)
    f = ps.free_at(F2, d1, 2, 0)
    g = ps.free_at(F2, d1, 1, 0)
    assert len(ps.hom_space(f, g)) == 2 * g.dims[0]
    s1 = simple(F2, d1, 1)
    assert len(ps.hom_space(f, s1)) == 0
    # no nonzero maps out of the simple at 1 into the one at 0
    assert len(ps.hom_space(s1, simple(F2, d1, 0))) == 0


def test_hom_coordinates_round_trip():
    r = gen.rng_for(2)
    for _ in range(10):
        shape = gen.rand_poset(r, 4)
        f = gen.rand_presheaf(r, F3, shape)
        g = gen.rand_presheaf(r, F3, shape)
        basis = ps.hom_space(f, g)
        phi = gen.rand_hom_element(r, F3, f, g)
        coords = ps.hom_coordinates(f, g, phi)
        assert coords is not None
        acc = ps.zero_map(f, g)
        for c, b in zip(coords, basis):
            acc = acc + b.scale(c)
        assert acc == phi


def test_hom_coordinates_detects_off_span():
    d1 = diagram.delta(1)
    s0, s1 = simple(F2, d1, 0), simple(F2, d1, 1)
    # the only natural map s0 -> s0 is scalar; a map with mismatched
    # components cannot arise, so test via an unnatural candidate between
    # different presheaves: hom(s0, s1) = 0, any nonzero matrix is off span
    phi = ps.PresheafMap(s0, ps.direct_sum(s0, s1),
                         {0: Matrix(F2, 1, 1, [[1]]),
                          1: Matrix.zeros(F2, 1, 0)})
    coords = ps.hom_coordinates(s0, ps.direct_sum(s0, s1), phi)
    assert coords is not None  # this one is natural
    bad = ps.hom_coordinates(s0, s1,
                             ps.zero_map(s0, s1))
    assert bad == []


def test_kernel_cokernel_image_exactness():
    r = gen.rng_for(3)
    for _ in range(10):
        shape = gen.rand_poset(r, 4)
        src = gen.rand_free(r, F2, shape)
        tgt = gen.rand_free(r, F2, shape)
        values = [gen.rand_matrix(r, F2, tgt.dims[i], v)
                  for (v, i) in src.free_parts]
        phi = ps.free_map_to(src, tgt, values)
        k, incl = ps.kernel(phi)
        assert phi.compose(incl).is_zero()
        coker, q = ps.cokernel(phi)
        assert q.compose(phi).is_zero()
        im, im_incl, core = ps.image(phi)
        assert im_incl.compose(core) == phi
        for x in shape.objects:
            assert k.dims[x] + im.dims[x] == src.dims[x]
            assert im.dims[x] + coker.dims[x] == tgt.dims[x]


def test_conflation_detection():
    d1 = diagram.delta(1)
    s0, s1 = simple(F2, d1, 0), simple(F2, d1, 1)
    p0 = ps.free_at(F2, d1, 1, 0)
    # S_1 ↣ P_0 ↠ S_0 is exact but not split
    infl = ps.PresheafMap(s1, p0, {0: Matrix.zeros(F2, 1, 0),
                                   1: Matrix(F2, 1, 1, [[1]])})
    defl = ps.PresheafMap(p0, s0, {0: Matrix(F2, 1, 1, [[1]]),
                                   1: Matrix.zeros(F2, 0, 1)})
    assert ps.is_conflation(infl, defl)
    assert not ps.is_conflation(infl, ps.zero_map(p0, s0))


def test_pushout_preserves_inflations():
    r = gen.rng_for(5)
    for _ in range(10):
        shape = gen.rand_poset(r, 4)
        conf = gen.rand_conflation(r, F2, shape)
        other = gen.rand_presheaf(r, F2, shape)
        f = gen.rand_hom_element(r, F2, conf.sub, other)
        w, i2, f2 = ps.pushout(conf.inflation, f)
        assert i2.is_componentwise_injective()
        assert i2.compose(f) == f2.compose(conf.inflation)
        v, p2, g2 = ps.pullback(conf.deflation,
                                gen.rand_hom_element(r, F2, other,
                                                     conf.quotient))
        assert p2.is_componentwise_surjective()


def test_resolution_length_bound():
    r = gen.rng_for(7)
    for _ in range(15):
        shape = gen.rand_poset(r, 5)
        f = gen.rand_presheaf(r, F2, shape)
        res = ps.resolve(f)
        assert len(res.terms) <= diagram.max_chain_length(shape) + 1
        if res.kernels:
            assert res.kernels[-1].is_zero()
        for t in res.terms:
            assert t.free_parts is not None


def test_free_hull_covers():
    d1 = diagram.delta(1)
    s0 = simple(F2, d1, 0)
    hull, eps = ps.free_hull(s0)
    assert eps.is_componentwise_surjective()
    assert hull.free_parts is not None


def test_restrict_and_dualize():
    d2 = diagram.delta(2)
    f = ps.free_at(F3, d2, 1, 0)
    sub, incl = diagram.full_subcategory(d2, [0, 1])
    rf = ps.restrict(incl, f)
    assert rf.dims == {0: 1, 1: 1}
    df = ps.dualize(f)
    assert ps.dualize(df) == f
