from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freecat.category import (Category, CategoryError, FreeAlgebra, Hom, Verdict, alpha_morphism,
                              apply, compose, generates, hom_count, hom_enumerate, identity, invert,
                              is_epi_sufficient, is_iso, is_mono, is_surjective, kernel_witness, span)
from freecat.varieties import lincomb, make_variety
from oracles import double_factorization, injective_on, mat_mul_mod

SEMV = make_variety("SEM")
MONV = make_variety("MON")
Z4 = make_variety("MOD(Z/4)")
ZZ = make_variety("MOD(Z)")


def F(v, n):
    return FreeAlgebra(v, n)


def vec(v, *cs):
    return lincomb(v.ring, dict(enumerate(cs, 1)))


def test_objects_and_generators():
    A = F(SEMV, 3)
    assert A.generators() == [(1,), (2,), (3,)]
    with pytest.raises(CategoryError):
        A.generator(4)
    with pytest.raises(CategoryError):
        F(SEMV, 0)
    assert F(Z4, 2).size == 16 and len(F(Z4, 2).elements()) == 16
    assert F(SEMV, 2).size is None


def test_hom_validation():
    A = F(SEMV, 2)
    with pytest.raises(CategoryError):
        Hom(A, A, ((1,),))
    with pytest.raises(CategoryError):
        Hom(A, A, ((1,), (3,)))
    with pytest.raises(CategoryError):
        Hom(A, F(Z4, 2), ((1,), (2,)))


def test_compose_is_substitution_after_substitution():
    A, B, C = F(SEMV, 2), F(SEMV, 3), F(SEMV, 2)
    f = Hom(A, B, ((1, 2), (3,)))
    g = Hom(B, C, ((2,), (1, 1), (2, 1)))
    gf = compose(g, f)
    for w in A.elements(4):
        assert gf(w) == g(f(w))
    with pytest.raises(CategoryError):
        compose(f, f)


def test_module_composition_matches_matrix_product():
    A = F(Z4, 2)
    homs = list(hom_enumerate(A, A))
    assert len(homs) == 256
    mat = lambda h: [[dict(a).get(i, 0) for a in h.images] for i in (1, 2)]
    for f, g in product(homs[::17], homs[::13]):
        assert mat(compose(g, f)) == mat_mul_mod(mat(g), mat(f), 4)


def test_identity_and_alpha():
    A = F(Z4, 2)
    for a in A.elements():
        assert identity(A)(a) == a
        assert alpha_morphism(A, a).images == (a,)


def test_mono_words_against_double_factorization():
    A = F(SEMV, 3)
    B = F(SEMV, 2)
    pool = B.elements(3)
    for imgs in product(pool[:10], repeat=3):
        h = Hom(A, B, imgs)
        brute = len(set(imgs)) == 3 and double_factorization(imgs, 12) is None
        assert is_mono(h) == brute


def test_mono_word_maps_are_injective_on_samples():
    A, B = F(SEMV, 2), F(SEMV, 2)
    for imgs in product(B.elements(2), repeat=2):
        h = Hom(A, B, imgs)
        if is_mono(h):
            assert injective_on(h, A.elements(4))


def test_mono_monoid_rejects_empty_image():
    A = F(MONV, 2)
    assert not is_mono(Hom(A, A, ((), (1,))))
    assert is_mono(Hom(A, A, ((2,), (1,))))


def test_mono_finite_modules_by_kernel():
    A = F(Z4, 1)
    assert [is_mono(Hom(A, A, (vec(Z4, k),))) for k in range(4)] == [False, True, False, True]
    assert kernel_witness(Hom(A, A, (vec(Z4, 2),))) == vec(Z4, 2)


def test_mono_integers_by_rank():
    A, B = F(ZZ, 2), F(ZZ, 2)
    assert is_mono(Hom(A, B, (vec(ZZ, 2, 0), vec(ZZ, 0, 3))))
    assert not is_mono(Hom(A, B, (vec(ZZ, 1, 2), vec(ZZ, 2, 4))))


def test_generates_and_surjective():
    A = F(Z4, 2)
    assert generates(A, [vec(Z4, 1, 1), vec(Z4, 0, 1)])
    assert not generates(A, [vec(Z4, 2, 0), vec(Z4, 0, 1)])
    assert len(span(Z4, [vec(Z4, 2, 0)])) == 2
    Z2 = F(ZZ, 2)
    assert generates(Z2, [vec(ZZ, 2, 0), vec(ZZ, 3, 0), vec(ZZ, 0, 1)])
    assert not generates(Z2, [vec(ZZ, 2, 0), vec(ZZ, 0, 1)])
    S = F(SEMV, 2)
    assert not is_surjective(Hom(S, S, ((1,), (1, 2))))
    assert is_epi_sufficient(Hom(S, S, ((2,), (1,)))) == Verdict.YES
    assert is_epi_sufficient(Hom(S, S, ((1,), (1, 2)))) == Verdict.UNKNOWN


def test_invert_round_trip():
    A = F(Z4, 2)
    isos = [h for h in hom_enumerate(A, A) if is_iso(h)]
    assert len(isos) == 96       # |GL2(Z/4)|
    for h in isos[::7]:
        assert compose(invert(h), h) == identity(A)
    Z2 = F(ZZ, 2)
    h = Hom(Z2, Z2, (vec(ZZ, 2, 1), vec(ZZ, 1, 1)))
    assert compose(h, invert(h)) == identity(Z2)
    S = F(SEMV, 3)
    perm = Hom(S, S, ((3,), (1,), (2,)))
    assert compose(invert(perm), perm) == identity(S)
    with pytest.raises(CategoryError):
        invert(Hom(S, S, ((1,), (1,), (2,))))


def test_hom_count_and_cap():
    A = F(SEMV, 2)
    assert hom_count(A, A, bound=2) == 36
    assert len(list(hom_enumerate(A, A, bound=2))) == 36
    from freecat.budget import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        list(hom_enumerate(A, A, bound=2, cap=10))


def test_category_requires_rank_one():
    with pytest.raises(CategoryError):
        Category(SEMV, (2, 3))
    c = Category(SEMV, (3, 1, 1))
    assert c.ranks == (1, 3)
    assert F(SEMV, 3) in c and F(SEMV, 2) not in c
    assert c.A0 == F(SEMV, 1)


@settings(max_examples=50)
@given(st.lists(st.integers(0, 3), min_size=4, max_size=4), st.lists(st.integers(0, 3), min_size=2, max_size=2))
def test_apply_is_linear(coeffs, a):
    A = F(Z4, 2)
    h = Hom(A, A, (vec(Z4, *coeffs[:2]), vec(Z4, *coeffs[2:])))
    x = vec(Z4, *a)
    expect = vec(Z4, (coeffs[0] * a[0] + coeffs[2] * a[1]) % 4, (coeffs[1] * a[0] + coeffs[3] * a[1]) % 4)
    assert apply(h, x) == expect
