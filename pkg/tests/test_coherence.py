"""Incoherent diagrams, the Toda obstruction check, lifting of objects
and morphisms, hom comparison, and kernel extension."""

import pytest

from dercat.linalg import Field, Matrix
from dercat import diagram
from dercat import presheaf as ps
from dercat import complexes as cx
from dercat import derivator as dv
from dercat import coherence as co
from dercat import generators as gen

F2 = Field("prime", 2)
F3 = Field("prime", 3)


def split_two_term(field, shape):
    """S ⊕ ΣS with zero differential: Hom(Σ·, ·) contains the identity of
    the shifted summand, so every Toda check must refuse it."""
    x = next(iter(shape.objects))
    f = ps.free_at(field, shape, 1, x)
    return cx.Complex(field, shape, {0: f, 1: f},
                      {0: ps.zero_map(f, f)})


def test_dia_of_honest_is_strict():
    r = gen.rng_for(1)
    x = gen.rand_honest(r, F2, diagram.delta(2), diagram.delta(1),
                        max_parts=1)
    d = co.dia(x)
    d.validate()
    assert co.toda_check(d, d).passes
    for h in d.witnesses.values():
        assert not h.comps


def test_lift_of_dia_roundtrip():
    r = gen.rng_for(2)
    for icat, base in ((diagram.delta(1), diagram.delta(1)),
                       (diagram.delta(2), diagram.delta(1))):
        x = gen.rand_honest(r, F2, icat, base, max_parts=1)
        lift, cert = co.lift_object(co.dia(x))
        assert cert.verify()
        for i in icat.objects:
            assert cx.is_quasi_iso(cert.fiber_maps[i])


def test_lift_of_perturbed_diagram():
    r = gen.rng_for(3)
    for field in (F2, F3):
        for _ in range(3):
            d = gen.rand_incoherent(r, field, diagram.delta(2),
                                    diagram.delta(1), max_parts=1)
            lift, cert = co.lift_object(d)
            assert cert.verify()


def test_lift_refuses_toda_failure():
    base = diagram.delta(1)
    icat = diagram.delta(1)
    val = split_two_term(F2, base)
    values = {0: val, 1: val}
    maps = {icat.hom(1, 0)[0]: cx.identity_chain_map(val)}
    d = co._strict_witnesses(
        co.IncoherentDiagram(icat, base, values, maps))
    assert not co.toda_check(d, d).passes
    with pytest.raises(ValueError):
        co.lift_object(d)


def test_lift_morphism_identity_and_zero():
    r = gen.rng_for(4)
    x = gen.rand_honest(r, F2, diagram.delta(2), diagram.delta(1),
                        max_parts=1)
    d = co.dia(x)
    ident = {i: cx.identity_chain_map(d.values[i]) for i in d.shape.objects}
    m, wits = co.lift_morphism(d, d, ident)
    assert set(wits) == set(d.shape.objects)
    assert cx.is_quasi_iso(m)
    zero = {i: cx.zero_chain_map(d.values[i], d.values[i])
            for i in d.shape.objects}
    mz, _ = co.lift_morphism(d, d, zero)
    assert cx.homotopy_solve(mz) is not None


def test_lift_morphism_between_different_lifts():
    r = gen.rng_for(5)
    icat, base = diagram.delta(1), diagram.delta(1)
    x = gen.rand_honest(r, F2, icat, base, max_parts=1)
    f = co.dia(x)
    g = gen.perturb_diagram(r, co.dia(x))
    phi = {i: cx.identity_chain_map(f.values[i]) for i in icat.objects}
    m, wits = co.lift_morphism(f, g, phi)
    assert cx.is_quasi_iso(m)


def test_hom_compare_on_random_pairs():
    r = gen.rng_for(6)
    for _ in range(4):
        icat = gen.rand_poset(r, 3)
        base = diagram.delta(1)
        prod = diagram.product(icat, base)
        x = gen.rand_stalkish_complex(r, F2, prod, max_parts=1)
        z = gen.rand_stalkish_complex(r, F2, prod, max_parts=1)
        rep = co.hom_compare(x, z)
        assert rep.passes
        assert rep.coherent_dim == rep.incoherent_dim


def test_point_extension_counit():
    r = gen.rng_for(7)
    icat, base = diagram.delta(1), diagram.delta(1)
    prod = diagram.product(icat, base)
    x = gen.rand_stalkish_complex(r, F2, prod, max_parts=1)
    for i in icat.objects:
        e, eps = co.point_extension_counit(x, i)
        fib = dv.fiber_complex(x, i)
        for p in e.degrees():
            assert e.term(p).dims[(i, 0)] == fib.term(p).dims[0]
        # the counit restricts to an equivalence on the defining fiber
        at_i = dv._point_restriction(eps, i, base)
        assert cx.is_quasi_iso(at_i)


def test_tensor_with_kernel_of_unit():
    base = diagram.delta(1)
    kernel = gen.rand_kernel(gen.rng_for(8), F2, base, max_parts=1)
    e = diagram.terminal_cat()
    pt = e.objects[0]
    unit = cx.stalk(ps.free_at(F2, e, 1, pt))
    t = co.tensor_with_kernel(unit, kernel)
    for n in set(t.degrees()) | set(kernel.degrees()):
        assert cx.homology_dims(t, n) == cx.homology_dims(kernel, n)


def test_kernel_toda_check_refuses_split_kernel():
    base = diagram.delta(1)
    good = cx.stalk(ps.free_at(F2, base, 1, 0))
    assert co.kernel_toda_check(good).passes
    bad = split_two_term(F2, base)
    assert not co.kernel_toda_check(bad).passes
    e = diagram.terminal_cat()
    x = cx.over_point(cx.stalk(ps.free_at(F2, diagram.delta(1), 1, 0)))
    with pytest.raises(ValueError):
        co.extend_functor(bad, x)


def test_extend_functor_and_compat():
    r = gen.rng_for(9)
    icat = diagram.delta(1)
    kernel = gen.rand_kernel(r, F2, diagram.delta(1), max_parts=1)
    x = cx.over_point(
        gen.rand_stalkish_complex(r, F2, icat, max_parts=1))
    ext, cert = co.extend_functor(kernel, x)
    assert cert.verify()
    for u in (diagram.identity_functor(icat),
              diagram.point_inclusion(icat, 0),
              diagram.point_inclusion(icat, 1)):
        rep = co.verify_extension_compat(u, kernel, x)
        assert rep.passes


def test_extend_functor_compat_with_collapse():
    r = gen.rng_for(10)
    e = diagram.terminal_cat()
    kernel = gen.rand_kernel(r, F2, diagram.delta(1), max_parts=1)
    x = cx.over_point(gen.rand_stalkish_complex(r, F2, e, max_parts=1))
    u = diagram.terminal_functor(diagram.delta(1))
    rep = co.verify_extension_compat(u, kernel, x)
    assert rep.passes
