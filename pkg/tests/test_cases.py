import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freecat.cases import ANTI, INCONSISTENT, INNER, mod_conditions, mod_semi_inner, sem_classify
from freecat.category import Category, Hom, identity, is_iso
from freecat.functors import AutomorphismPair, Composite, Identity, Inner, ModTwist, SemReversal
from freecat.mainfn import CBijectionMap, MainFunction
from freecat.reports import REFUSED
from freecat.rings import frobenius, ring_map_laws
from freecat.universe import Universe
from freecat.varieties import lincomb, make_variety

SEMV = make_variety("SEM")
GF = make_variety("MOD(GF4)")


def universe(v, ranks, **kw):
    return Universe(Category(v, tuple(ranks)), **kw)


def vec(v, *cs):
    return lincomb(v.ring, dict(enumerate(cs, 1)))


def permutation_inner(u, rng):
    fam = {}
    for A in u.objects():
        perm = list(range(1, A.rank + 1))
        rng.shuffle(perm)
        fam[A] = Hom(A, A, tuple((i,) for i in perm))
    return Inner(fam)


def test_sem_classify_reversal_is_anti():
    rep = sem_classify(AutomorphismPair.of(SemReversal()), universe(SEMV, [1, 2], max_len=4, hom_len=2))
    assert rep.ok and rep.details["verdict"] == ANTI
    assert rep.details["t"] == "x0"


def test_sem_classify_identity_is_inner():
    rep = sem_classify(AutomorphismPair.of(Identity()), universe(SEMV, [1, 2], max_len=3, hom_len=2))
    assert rep.ok and rep.details["verdict"] == INNER


@pytest.mark.parametrize("seed", range(50))
def test_basis_permutation_conjugation_is_inner(seed):
    u = universe(SEMV, [1, 2, 3], max_len=2, hom_len=1)
    phi = permutation_inner(u, random.Random(seed))
    rep = sem_classify(AutomorphismPair.of(phi), u)
    assert rep.ok and rep.details["verdict"] == INNER
    # the recovered sigma is the permutation family itself
    for A in u.objects():
        assert rep.details["sigma"][str(A.rank)] == [A.fmt(a) for a in phi.sigma(A).images]


def test_sem_classify_refuses_modules():
    rep = sem_classify(AutomorphismPair.of(Identity()), universe(GF, [1]))
    assert rep.status == REFUSED


def test_sem_classify_flags_square_witness():
    u = universe(SEMV, [1, 2], max_len=3, hom_len=2)
    sq = lambda A: CBijectionMap(A, A, lambda w: w + w)
    p = AutomorphismPair.of(Identity())
    rep = sem_classify(p, u, s_family=sq)
    # the witness term comes from the main function and is x0; the family fails in rank 2
    assert rep.failed and rep.details["verdict"] == INCONSISTENT


def test_mod_conditions_frobenius():
    u = universe(GF, [1, 2])
    rep = mod_conditions(AutomorphismPair.of(ModTwist(frobenius(GF.ring))), u)
    assert rep.ok
    assert rep.details["r"] == "1"
    assert rep.details["alpha_name"] == "frobenius"
    assert rep.details["alpha"] == {"0": "0", "1": "1", "w": "w+1", "w+1": "w"}
    assert rep.details["conditions"] == {"1": "pass", "2": "pass", "3": "pass", "4": "pass"}


@pytest.mark.parametrize("ring", ["Z/2", "Z/3", "Z/4", "Z/6"])
def test_mod_conditions_identity(ring):
    v = make_variety(f"MOD({ring})")
    rep = mod_conditions(AutomorphismPair.of(Identity()), universe(v, [1, 2]))
    assert rep.ok and rep.details["alpha_name"] == "id"


def test_mod_conditions_integers():
    v = make_variety("MOD(Z)")
    u = universe(v, [1, 2], int_window=2)
    rep = mod_conditions(AutomorphismPair.of(Identity()), u)
    assert rep.ok and rep.details["r"] == "1"


def test_non_additive_family_detected():
    u = universe(GF, [1, 2])
    p = AutomorphismPair.of(Identity())
    s = MainFunction(p)

    def corrupt(A):
        if A.rank == 1:
            return s(A)
        # swap the two nonzero multiples of x1 + x2 that are not x1 + x2 itself
        a, b = vec(GF, 2, 2), vec(GF, 3, 3)
        return CBijectionMap(A, A, lambda x: {a: b, b: a}.get(x, x))

    rep = mod_conditions(p, u, s_family=corrupt)
    assert rep.failed
    assert rep.details["conditions"]["2"] == "fail"
    assert any(w["from"] == "condition_2" for w in rep.witnesses)


def test_semi_inner_confirmations():
    u = universe(GF, [1, 2])
    rep = mod_semi_inner(AutomorphismPair.of(ModTwist(frobenius(GF.ring))), u)
    assert rep.ok and rep.details["verdict"] == "semi-inner"
    assert rep.details["alpha_laws"] and rep.details["inverse_composes_to_id"]
    for ring in ("Z/5", "Z"):
        v = make_variety(f"MOD({ring})")
        rep = mod_semi_inner(AutomorphismPair.of(Identity()), universe(v, [1, 2]))
        assert rep.details["verdict"] == "semi-inner"


@pytest.mark.parametrize("ring", ["Z/4", "Z/6"])
def test_semi_inner_refuses_zero_divisors(ring):
    v = make_variety(f"MOD({ring})")
    rep = mod_semi_inner(AutomorphismPair.of(Identity()), universe(v, [1]))
    assert rep.status == REFUSED


def test_semi_inner_refuses_semigroups():
    assert mod_semi_inner(AutomorphismPair.of(Identity()), universe(SEMV, [1])).status == REFUSED


def test_alpha_satisfies_the_ring_laws_it_reports():
    u = universe(GF, [1, 2])
    rep = mod_conditions(AutomorphismPair.of(ModTwist(frobenius(GF.ring))), u)
    assert ring_map_laws(GF.ring, rep.alpha, rep.r).ok


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([(1, 0, 0, 1), (0, 1, 1, 0), (1, 1, 0, 1), (2, 0, 0, 3), (1, 2, 3, 1), (3, 1, 1, 0)]),
       st.booleans())
def test_twisted_conjugations_are_semi_inner(m, twist):
    # conjugation by an invertible matrix, optionally after the Frobenius twist
    u = universe(GF, [1, 2])
    A1, A2 = u.objects()
    sig = Hom(A2, A2, (vec(GF, m[0], m[1]), vec(GF, m[2], m[3])))
    if not is_iso(sig):
        return
    inner = Inner({A1: identity(A1), A2: sig})
    phi = Composite([ModTwist(frobenius(GF.ring)), inner]) if twist else inner
    rep = mod_semi_inner(AutomorphismPair.of(phi), u)
    assert rep.ok
    assert rep.details["alpha_name"] == ("frobenius" if twist else "id")
