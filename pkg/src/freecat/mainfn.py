"""Main epimorphisms, main functions, central functions and the witness term.

For an automorphism pair (phi, phi_inv) of a category containing the
monogenic algebra A0 = F(x0):

    eta0 : phi_inv(A0) -> A0      every basis element goes to x0
    eta  = phi(eta0) : A0 -> phi(A0)
    s_A(a) = phi(alpha_a) . eta (x0)       alpha_a : A0 -> A, x0 |-> a

Both epimorphisms are identities when phi fixes A0.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional

from . import budget
from .category import (FreeAlgebra, Hom, alpha_morphism, apply, compose, generates, identity,
                       monogenic)
from .functors import AutomorphismPair
from .reports import UNKNOWN, Report
from .terms import Term
from .universe import Universe
from .varieties import Element, element_size, element_to_term


class ReconstructionError(RuntimeError):
    pass


@dataclass
class MainEpis:
    eta0: Hom
    eta: Hom

    def describe(self):
        return {"eta0": str(self.eta0), "eta": str(self.eta),
                "basis_choice": "canonical ordered basis, every generator -> x0"}


def main_epis(p: AutomorphismPair, A0: FreeAlgebra) -> MainEpis:
    B = p.phi_inv.apply_obj(A0)
    if B == A0 and p.phi.apply_obj(A0) == A0:
        return MainEpis(identity(A0), identity(A0))
    eta0 = Hom(B, A0, tuple(A0.generator(1) for _ in range(B.rank)))
    return MainEpis(eta0, p.phi.apply_hom(eta0))


class CBijectionMap:
    """An element map |dom| -> |cod| with a memo table."""

    def __init__(self, dom: FreeAlgebra, cod: FreeAlgebra, fn: Callable[[Element], Element],
                 name: str = "s"):
        self.dom = dom
        self.cod = cod
        self.fn = fn
        self.name = name
        self._cache: Dict[Element, Element] = {}

    def __call__(self, a: Element) -> Element:
        try:
            return self._cache[a]
        except KeyError:
            b = self._cache[a] = self.fn(a)
            return b

    def preimages(self, elements: Iterable[Element]) -> Dict[Element, Element]:
        """Inverse table over ``elements``; collisions keep the first preimage."""
        table = {}
        for a in elements:
            table.setdefault(self(a), a)
        return table

    def __repr__(self):
        return f"{self.name}[{self.dom}->{self.cod}]"

    __str__ = __repr__


class MainFunction:
    """The family A |-> s_A of main functions of an automorphism pair."""

    def __init__(self, p: AutomorphismPair):
        self.pair = p
        self._maps: Dict[FreeAlgebra, CBijectionMap] = {}
        self._epis: Dict[FreeAlgebra, MainEpis] = {}

    def epis(self, A0: FreeAlgebra) -> MainEpis:
        if A0 not in self._epis:
            self._epis[A0] = main_epis(self.pair, A0)
        return self._epis[A0]

    def __call__(self, A: FreeAlgebra) -> CBijectionMap:
        if A not in self._maps:
            phi = self.pair.phi
            x = self.epis(monogenic(A.variety)).eta.images[0]

            def s(a, A=A):
                return apply(phi.apply_hom(alpha_morphism(A, a)), x)

            self._maps[A] = CBijectionMap(A, phi.apply_obj(A), s)
        return self._maps[A]


def main_function(p: AutomorphismPair, A: FreeAlgebra) -> CBijectionMap:
    return MainFunction(p)(A)


# -- checks -----------------------------------------------------------------

def check_naturality(p: AutomorphismPair, s_family: Callable, mu: Hom,
                     elements: Iterable[Element], universe: Optional[Universe] = None) -> Report:
    """s_B . mu == phi(mu) . s_A on the given elements of dom(mu)."""
    rep = Report("naturality", universe.describe() if universe else {})
    sa, sb = s_family(mu.dom), s_family(mu.cod)
    fmu = p.phi.apply_hom(mu)
    n = 0
    b = budget.active()
    for a in elements:
        n += 1
        b.tick()
        lhs, rhs = sb(mu(a)), fmu(sa(a))
        if lhs != rhs:
            rep.fail({"hom": str(mu), "element": mu.dom.fmt(a),
                      "s_B(mu(a))": fmu.cod.fmt(lhs), "phi(mu)(s_A(a))": fmu.cod.fmt(rhs)})
            break
    return rep.note(hom=str(mu), elements=n)


def check_naturality_all(p: AutomorphismPair, s_family: Callable, universe: Universe,
                         homs=None) -> Report:
    rep = Report("naturality", universe.describe())
    homs = universe.all_homs() if homs is None else homs
    n = 0
    for mu in homs:
        sub = check_naturality(p, s_family, mu, universe.elements(mu.dom))
        n += sub.details["elements"]
        if sub.failed:
            rep.fail(sub.witnesses[0])
    return rep.note(homs=len(homs), element_checks=n)


def c_bijection_check(s: CBijectionMap, universe: Universe) -> Report:
    """Three-valued C-bijection test: injectivity plus separation of morphisms.

    Separation is decided when the image generates the codomain (agreement on
    a generating set forces equality); otherwise pairs of universe morphisms
    out of the codomain are searched for two that s cannot tell apart.
    """
    rep = Report("c_bijection", universe.describe())
    elems = universe.elements(s.dom)
    seen = {}
    for a in elems:
        b = s(a)
        if b in seen:
            rep.note(verdict="no", reason="not injective")
            return rep.fail({"a1": s.dom.fmt(seen[b]), "a2": s.dom.fmt(a), "image": s.cod.fmt(b)})
        seen[b] = a
    image = sorted(seen)
    if generates(s.cod, image):
        return rep.note(verdict="yes", reason="image generates the codomain", elements=len(elems))
    for B in universe.objects():
        groups = defaultdict(list)
        for h in universe.homs(s.cod, B):
            groups[tuple(h(u) for u in image)].append(h)
        for hs in groups.values():
            if len(hs) > 1:
                rep.note(verdict="no", reason="image does not separate morphisms")
                return rep.fail({"alpha1": str(hs[0]), "alpha2": str(hs[1])})
    if universe.complete:
        return rep.note(verdict="yes", reason="exhaustive pair search", elements=len(elems))
    rep.status = UNKNOWN
    return rep.note(verdict="unknown", reason="bounded pair search found no counterexample")


@dataclass
class CentralResult:
    c: Callable
    w: Element
    w_term: Term
    potentially_inner: bool
    report: Report


def main_central(p: AutomorphismPair, A: FreeAlgebra, universe: Universe) -> CentralResult:
    """c_A = s^{phi_inv}_{phi(A)} . s^{phi}_A, checked against w(a) pointwise."""
    s, s_inv = MainFunction(p), MainFunction(p.inverse())
    A0 = monogenic(A.variety)
    FA = p.phi.apply_obj(A)
    sA, sFA = s(A), s_inv(FA)

    def c(a):
        return sFA(sA(a))

    eta0 = s.epis(A0).eta0                 # phi_inv(A0) -> A0
    eta_inv = s_inv.epis(A0).eta           # A0 -> phi_inv(A0)
    w = apply(compose(eta0, eta_inv), A0.generator(1))
    rep = Report("main_central", universe.describe())
    n = 0
    for a in universe.elements(A):
        n += 1
        wa = apply(alpha_morphism(A, a), w)
        ca = c(a)
        if ca != wa:
            rep.fail({"object": str(A), "element": A.fmt(a), "c_A(a)": A.fmt(ca), "w(a)": A.fmt(wa)})
    term = element_to_term(A.variety, w, monogenic=True)
    pot = w == A0.generator(1)
    rep.note(object=str(A), w=str(term), potentially_inner=pot, elements=n)
    return CentralResult(c, w, term, pot, rep)


def central_check(family: Callable, universe: Universe, homs=None) -> Report:
    """c_B . mu == mu . c_A for universe homs, and each c_A injective on samples."""
    rep = Report("central", universe.describe())
    homs = universe.all_homs() if homs is None else homs
    for A in universe.objects():
        cA = family(A)
        seen = {}
        for a in universe.elements(A):
            b = cA(a)
            if b in seen:
                rep.fail({"object": str(A), "reason": "not injective",
                          "a1": A.fmt(seen[b]), "a2": A.fmt(a)})
                break
            seen[b] = a
    n = 0
    b = budget.active()
    for mu in homs:
        ca, cb = family(mu.dom), family(mu.cod)
        for a in universe.elements(mu.dom):
            n += 1
            b.tick()
            lhs, rhs = cb(mu(a)), mu(ca(a))
            if lhs != rhs:
                rep.fail({"hom": str(mu), "element": mu.dom.fmt(a),
                          "c_B(mu(a))": mu.cod.fmt(lhs), "mu(c_A(a))": mu.cod.fmt(rhs)})
                break
    return rep.note(homs=len(homs), element_checks=n)


def witness_element(p: AutomorphismPair, A0: FreeAlgebra) -> Element:
    """s_{phi_inv(A0)}(x1), an element of A0."""
    B = p.phi_inv.apply_obj(A0)
    return MainFunction(p)(B)(B.generator(1))


def witness_term(p: AutomorphismPair, A0: FreeAlgebra) -> Term:
    return element_to_term(A0.variety, witness_element(p, A0), monogenic=True)


def apply_unary(t: Element, B: FreeAlgebra, u: Element) -> Element:
    """t(u) for a unary term t given as an element of A0."""
    return apply(alpha_morphism(B, u), t)


def image_check(p: AutomorphismPair, A: FreeAlgebra, universe: Universe) -> Report:
    """s_A(|A|) == {t(u) : u in phi(A)} on the universe."""
    v = A.variety
    A0 = monogenic(v)
    t = witness_element(p, A0)
    sA = MainFunction(p)(A)
    FA = sA.cod
    rep = Report("image", universe.describe())
    rep.note(object=str(A), t=str(element_to_term(v, t, monogenic=True)))
    S = {sA(a) for a in universe.elements(A)}
    T = {apply_unary(t, FA, u) for u in universe.elements(FA)}
    if universe.complete:
        for x in sorted(S - T)[:5]:
            rep.fail({"in_image_not_t": FA.fmt(x)})
        for y in sorted(T - S)[:5]:
            rep.fail({"t_value_not_in_image": FA.fmt(y)})
        return rep.note(image_size=len(S))
    bound = universe.max_len if v.is_word else universe.int_window
    skipped = unresolved = 0
    for x in sorted(S):
        if element_size(v, x) > bound:
            skipped += 1
        elif x not in T:
            rep.fail({"in_image_not_t": FA.fmt(x)})
    for y in sorted(T):
        if y not in S:
            if element_size(v, y) <= bound and not _longer_preimage_possible(v):
                rep.fail({"t_value_not_in_image": FA.fmt(y)})
            else:
                unresolved += 1
    if unresolved and rep.ok:
        rep.status = UNKNOWN
    return rep.note(image_size=len(S), skipped=skipped, unresolved=unresolved)


def _longer_preimage_possible(v) -> bool:
    # a semigroup hom never shortens words, so s_A cannot map a longer word to
    # a shorter value only in SEM; in MON a preimage may be longer.
    return v.kind != "SEM"


def surjectivity_dichotomy(s: CBijectionMap, universe: Universe) -> Report:
    """Either no basis element of cod is hit, or s is onto (on the sample)."""
    rep = Report("surjectivity_dichotomy", universe.describe())
    image = {s(a) for a in universe.elements(s.dom)}
    hit = [g for g in s.cod.generators() if g in image]
    if not hit:
        return rep.note(horn="no basis element in the image")
    missing = [u for u in universe.elements(s.cod) if u not in image]
    for u in missing[:5]:
        rep.fail({"basis_hit": s.cod.fmt(hit[0]), "not_in_image": s.cod.fmt(u)})
    return rep.note(horn="surjective" if not missing else "violated", basis_hit=len(hit))


def uniq_check(p: AutomorphismPair, A: FreeAlgebra, universe: Universe) -> Report:
    """Homs out of phi(A) agreeing on y_i = s_A(x_i) must coincide."""
    sA = MainFunction(p)(A)
    ys = [sA(x) for x in A.generators()]
    FA = sA.cod
    rep = Report("uniq", universe.describe())
    pairs = 0
    for B in universe.objects():
        groups = defaultdict(list)
        for h in universe.homs(FA, B):
            groups[tuple(h(y) for y in ys)].append(h)
        for hs in groups.values():
            pairs += len(hs) * (len(hs) - 1) // 2
            if len(hs) > 1:
                rep.fail({"beta": str(hs[0]), "gamma": str(hs[1]),
                          "y": [FA.fmt(y) for y in ys]})
    return rep.note(object=str(A), y=[FA.fmt(y) for y in ys], agreeing_pairs=pairs)


def reconstruct_phi_mu(p: AutomorphismPair, s_family: Callable, mu: Hom,
                       universe: Universe) -> Hom:
    """The unique nu with s_B . mu == nu . s_A, solved without calling phi on mu."""
    A, B = mu.dom, mu.cod
    sA, sB = s_family(A), s_family(B)
    FA, FB = sA.cod, sB.cod
    elems = universe.elements(A)
    target = [(sA(a), sB(mu(a))) for a in elems]

    def fits(nu):
        return all(nu(x) == y for x, y in target)

    if not universe.complete:
        pre = sA_preimages = {}
        for a in elems:
            pre.setdefault(sA(a), a)
        gens = FA.generators()
        if all(g in sA_preimages for g in gens):
            nu = Hom(FA, FB, tuple(sB(mu(sA_preimages[g])) for g in gens))
            if not fits(nu):
                raise ReconstructionError(f"no nu satisfies the square for {mu}")
            return nu
    sols = [nu for nu in universe.homs(FA, FB) if fits(nu)]
    if not sols:
        raise ReconstructionError(f"no nu satisfies the square for {mu}")
    if len(sols) > 1:
        raise ReconstructionError(
            f"{len(sols)} solutions for {mu} (uniqueness violated): {sols[0]} / {sols[1]}")
    return sols[0]


def twofunctions_decompose(t_family: Callable, p: AutomorphismPair,
                           universe: Universe):
    """d_A = s^{phi_inv}_{phi(A)} . t_A; returns (d, report).

    Also checks t_A == (c')^{-1} . s_A . d_A where c' = s^{phi}_A . s^{phi_inv}_{phi(A)}
    is the main central function of phi_inv at phi(A); the inverse is only
    taken where defined on the sampled elements of phi(A), and coverage is
    reported.
    """
    s, s_inv = MainFunction(p), MainFunction(p.inverse())

    def d(A):
        sFA, tA = s_inv(p.phi.apply_obj(A)), t_family(A)
        return lambda a: sFA(tA(a))

    rep = Report("twofunctions", universe.describe())
    rep.absorb(central_check(d, universe))
    covered = total = 0
    for A in universe.objects():
        FA = p.phi.apply_obj(A)
        sA, sFA, tA, dA = s(A), s_inv(FA), t_family(A), d(A)
        c_inv = {}
        for u in universe.elements(FA):
            c_inv.setdefault(sA(sFA(u)), u)
        for a in universe.elements(A):
            total += 1
            rhs = sA(dA(a))
            if rhs not in c_inv:
                continue
            covered += 1
            if c_inv[rhs] != tA(a):
                rep.fail({"object": str(A), "element": A.fmt(a), "t_A(a)": FA.fmt(tA(a)),
                          "reconstructed": FA.fmt(c_inv[rhs])})
    rep.note(covered=covered, total=total)
    return d, rep
