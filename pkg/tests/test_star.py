import pytest

from freecat.category import Category, FreeAlgebra, Hom, identity
from freecat.functors import AutomorphismPair, Identity, Inner, ModTwist, SemReversal
from freecat.mainfn import CBijectionMap
from freecat.rings import frobenius
from freecat.star import (StarAlgebra, StarError, StarHom, StarInner, build_sharp, build_star,
                          decompose, derived_equals_star, derived_operation, derived_term,
                          quasi_inner_witness_check, restriction_check, restriction_check_all,
                          transport_check)
from freecat.universe import Universe
from freecat.varieties import lc_scale, lincomb, make_variety

SEMV = make_variety("SEM")
Z4 = make_variety("MOD(Z/4)")
GF = make_variety("MOD(GF4)")

REV = AutomorphismPair.of(SemReversal())
FROB = AutomorphismPair.of(ModTwist(frobenius(GF.ring)))
ID_Z4 = AutomorphismPair.of(Identity())


def universe(v, ranks, **kw):
    return Universe(Category(v, tuple(ranks)), **kw)


def vec(v, *cs):
    return lincomb(v.ring, dict(enumerate(cs, 1)))


def test_reversal_star_product_is_opposite():
    u = universe(SEMV, [1, 2], max_len=3)
    A = u.objects()[1]
    star = build_star(REV, A)
    car = star.carrier(u)
    for x in car:
        for y in car:
            assert star.op("m", [x, y]) == y + x
    assert transport_check(star, u).ok


def test_star_preimage_and_carrier():
    A = FreeAlgebra(SEMV, 2)
    star = build_star(REV, A)
    assert star.preimage((2, 1, 1)) == (1, 1, 2)
    assert star.contains((1, 2, 2, 2, 1))
    assert star.preimage((3,)) is None
    with pytest.raises(StarError):
        star.op("m", [(3,), (1,)])


def test_transport_detects_broken_bijection():
    u = universe(SEMV, [1, 2], max_len=3)
    A = u.objects()[1]
    # doubling the first letter is injective but not compatible with the product
    s = CBijectionMap(A, A, lambda w: w[:1] + w)
    star = StarAlgebra(s)
    rep = transport_check(star, u)
    assert rep.ok  # transport is tautological for any injective s
    assert star.op("m", [(1, 1), (2, 2)]) == (1, 1, 2)


def test_derived_term_reversal():
    F = FreeAlgebra(SEMV, 2)
    term, table = derived_term(REV, F, SEMV.signature["m"])
    assert str(term) == "m(x2,x1)"
    assert table is not None and table.describe() == {"m": "m(x2,x1)"}


def test_derived_term_frobenius():
    F = FreeAlgebra(GF, 2)
    term, table = derived_term(FROB, F, GF.signature["scale_w"])
    # s(w x1) = (w+1) x1, so the derived scaling by w is scaling by w+1
    assert str(term) == "scale_w1(x1)"
    assert table is not None


def test_derived_term_needs_enough_generators():
    with pytest.raises(StarError):
        derived_term(REV, FreeAlgebra(SEMV, 1), SEMV.signature["m"])


@pytest.mark.parametrize("p,v,ranks,kw", [
    (REV, SEMV, [1, 2], {"max_len": 3}),
    (FROB, GF, [1, 2], {}),
    (ID_Z4, Z4, [1, 2], {}),
])
def test_derived_equals_star(p, v, ranks, kw):
    u = universe(v, ranks, **kw)
    for A in u.objects():
        rep = derived_equals_star(p, A, u)
        assert rep.ok and rep.details["tuples"] > 0


def test_derived_operation_general_route():
    A = FreeAlgebra(SEMV, 2)
    assert derived_operation(REV, A, SEMV.signature["m"], [(1, 2), (2,)]) == (2, 1, 2)


def test_star_hom_evaluates_with_star_ops():
    psi = StarInner(REV)
    A = FreeAlgebra(SEMV, 2)
    mu = Hom(A, A, ((1, 2), (2,)))
    nu = psi.apply_hom(mu)
    assert isinstance(nu, StarHom)
    # nu = s . mu . s^-1 on the star carrier
    for w in A.elements(3):
        assert nu(w[::-1]) == mu(w)[::-1]
    assert psi.restore(nu) == mu


@pytest.mark.parametrize("p,v,kw", [(REV, SEMV, {"max_len": 3, "hom_len": 2}), (FROB, GF, {}), (ID_Z4, Z4, {})])
def test_restriction_all(p, v, kw):
    u = universe(v, [1, 2], **kw)
    rep = restriction_check_all(p, u)
    assert rep.ok


def test_restriction_extension_unique_on_z4():
    u = universe(Z4, [1, 2])
    mu = Hom(u.objects()[0], u.objects()[1], (vec(Z4, 1, 2),))
    rep = restriction_check(ID_Z4, mu, u)
    assert rep.ok and rep.details["extensions"] == 1


@pytest.mark.parametrize("p,v,kw", [(REV, SEMV, {"max_len": 3, "hom_len": 2}), (FROB, GF, {}), (ID_Z4, Z4, {})])
def test_decompose(p, v, kw):
    u = universe(v, [1, 2], **kw)
    d = decompose(p, u)
    assert d.report.ok, d.report.witnesses
    assert d.report.details["carrier_term"] == "x0"
    for mu in u.all_homs()[::9]:
        assert d.G(d.psi(mu)) == p.phi(mu)


def test_decompose_identity_flags():
    u = universe(Z4, [1, 2])
    det = decompose(ID_Z4, u).report.details
    assert det["psi_identity"] and det["g_identity"]
    det = decompose(FROB, universe(GF, [1, 2])).report.details
    assert not det["psi_identity"]


def test_sharp_algebra_lives_in_the_original():
    A = FreeAlgebra(SEMV, 2)
    sharp = build_sharp(REV, A)
    assert sharp.ambient == A and sharp.label == "#"


def test_quasi_inner_positive_cases():
    u = universe(Z4, [1, 2])
    rep = quasi_inner_witness_check(ID_Z4, lambda A: (lambda a: a), u)
    assert rep.ok
    rep = quasi_inner_witness_check(ID_Z4, lambda A: (lambda a: lc_scale(Z4.ring, 3, a)), u)
    assert rep.ok
    s = universe(SEMV, [1, 2], max_len=3, hom_len=2)
    A2 = s.objects()[1]
    inner = AutomorphismPair.of(Inner({s.objects()[0]: identity(s.objects()[0]),
                                       A2: Hom(A2, A2, ((2,), (1,)))}))
    rep = quasi_inner_witness_check(inner, lambda A: (lambda a: a), s)
    assert not rep.failed


def test_reversal_identity_family_is_not_a_quasi_inner_witness():
    # the composite of the two reversal main functions is the identity, which does
    # not respect the sharp (opposite) product in rank 2
    u = universe(SEMV, [1, 2], max_len=3, hom_len=2)
    rep = quasi_inner_witness_check(REV, lambda A: (lambda a: a), u)
    assert rep.failed
    assert any(w.get("op") == "m" for w in rep.witnesses)
