import pytest

from freecat.category import Category, FreeAlgebra, Hom, identity
from freecat.functors import (AutomorphismPair, Composite, FunctorError, Identity, Inner, ModTwist,
                              SemReversal, Table, check_automorphism_pair, check_extension_functor,
                              check_functor_laws, check_inner_witness)
from freecat.rings import frobenius, identity_map
from freecat.universe import Universe
from freecat.varieties import lincomb, make_variety
from oracles import reverse_each

SEMV = make_variety("SEM")
Z4 = make_variety("MOD(Z/4)")
GF = make_variety("MOD(GF4)")


def universe(v, ranks, **kw):
    return Universe(Category(v, tuple(ranks)), **kw)


def identity_table(u):
    return Table({A: A for A in u.objects()}, {h: h for h in u.all_homs()}, name="id")


def vec(v, *cs):
    return lincomb(v.ring, dict(enumerate(cs, 1)))


def test_reversal_acts_by_reversing_images():
    A = FreeAlgebra(SEMV, 2)
    h = Hom(A, A, ((1, 2), (2, 2, 1)))
    assert SemReversal()(h).images == reverse_each(h.images)
    assert SemReversal()(A) == A
    with pytest.raises(FunctorError):
        SemReversal()(FreeAlgebra(Z4, 1))


@pytest.mark.parametrize("phi", [Identity(), SemReversal()])
def test_word_functors_pass_laws(phi):
    u = universe(SEMV, [1, 2], hom_len=2)
    assert check_functor_laws(phi, u).ok
    assert check_automorphism_pair(AutomorphismPair.of(phi), u).ok


def test_frobenius_twist_laws():
    u = universe(GF, [1, 2])
    phi = ModTwist(frobenius(GF.ring))
    rep = check_functor_laws(phi, u)
    assert rep.ok and rep.details["homs"] == 4 + 16 * 2 + 256
    assert check_automorphism_pair(AutomorphismPair.of(phi), u).ok


def test_twist_refuses_other_rings():
    with pytest.raises(FunctorError):
        ModTwist(identity_map(GF.ring))(FreeAlgebra(Z4, 1))


def test_inner_by_basis_swap():
    u = universe(SEMV, [1, 2], hom_len=2)
    A1, A2 = u.objects()
    phi = Inner({A1: identity(A1), A2: Hom(A2, A2, ((2,), (1,)))})
    assert check_functor_laws(phi, u).ok
    assert check_automorphism_pair(AutomorphismPair.of(phi), u).ok
    assert check_inner_witness(phi, phi.sigma, u).ok
    # the identity family is not a witness for a non-identity conjugation
    assert not check_inner_witness(phi, identity, u).ok


def test_inner_requires_isomorphisms():
    u = universe(Z4, [1])
    A = u.objects()[0]
    bad = Hom(A, A, (vec(Z4, 2),))
    rep = check_inner_witness(Identity(), lambda B: bad, u)
    assert rep.failed and rep.witnesses[0]["reason"] == "not an isomorphism"


def test_composite_order_and_inverse():
    u = universe(GF, [1, 2])
    fr = ModTwist(frobenius(GF.ring))
    phi = Composite([fr, fr])
    for h in u.all_homs()[::11]:
        assert phi(h) == h
    A2 = u.objects()[1]
    sw = Inner({u.objects()[0]: identity(u.objects()[0]), A2: Hom(A2, A2, (vec(GF, 0, 1), vec(GF, 1, 0)))})
    p = AutomorphismPair.of(Composite([fr, sw]))
    assert check_automorphism_pair(p, u).ok


def test_identity_table_passes():
    u = universe(Z4, [1, 2])
    t = identity_table(u)
    assert check_functor_laws(t, u).ok
    assert check_automorphism_pair(AutomorphismPair.of(t), u).ok


def test_broken_table_is_caught_with_witness():
    u = universe(Z4, [1, 2])
    A = u.objects()[0]
    t = identity_table(u)
    three = Hom(A, A, (vec(Z4, 3),))
    broken = t.with_override(three, identity(A))
    rep = check_functor_laws(broken, u)
    assert rep.failed
    assert any(w.get("law") == "composition" for w in rep.witnesses)
    with pytest.raises(FunctorError):
        broken.inverse()


def test_table_missing_entries():
    u = universe(Z4, [1])
    t = Table({}, {})
    rep = check_functor_laws(t, u)
    assert rep.failed and "error" in rep.witnesses[0]


def test_extension_functor_identity_case():
    u = universe(Z4, [1])
    A = u.objects()[0]
    homs = u.all_homs()
    rep = check_extension_functor(lambda D: D, lambda nu: nu, [A], homs,
                                  lambda D: u.elements(D), u.homs, u)
    assert rep.ok


def test_extension_functor_uniqueness_failure():
    # on the carrier {0, 2} the maps x -> x and x -> 3x agree, so extensions are not unique
    u = universe(Z4, [1])
    A = u.objects()[0]
    carrier = [(), vec(Z4, 2)]
    ident = identity(A)
    rep = check_extension_functor(lambda D: D, lambda nu: nu, [A], [ident],
                                  lambda D: carrier, u.homs, u)
    assert rep.failed
    w = rep.witnesses[0]
    assert w["condition"] == "iii" and "3x1" in w["other_extension"]


def test_extension_functor_restriction_failure():
    u = universe(Z4, [1])
    A = u.objects()[0]
    ident = identity(A)
    three = Hom(A, A, (vec(Z4, 3),))
    rep = check_extension_functor(lambda D: D, lambda nu: three if nu == ident else nu, [A], [ident],
                                  lambda D: u.elements(D), u.homs, u)
    assert rep.failed and rep.witnesses[0]["condition"] == "ii"


def test_non_injective_functor_detected():
    u = universe(Z4, [1])
    A = u.objects()[0]
    homs = u.all_homs()
    zero = Hom(A, A, ((),))
    rep = check_extension_functor(lambda D: D, lambda nu: zero, [A], homs,
                                  lambda D: [()], u.homs, u)
    assert any(w["condition"] == "injective" for w in rep.witnesses)
