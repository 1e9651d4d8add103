"""Transported structures on the images of main functions.

For A in the category, A* is the image of s_A inside phi(A) with operations

    w*(s(a1), ..., s(ak)) = s(w(a1, ..., ak))

so that s_A : A -> A* is an isomorphism. The sharp algebra is the same
construction for the inverse automorphism. ``decompose`` splits phi into an
inner isomorphism Psi : A |-> A* followed by an extension functor G.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import islice, product
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from .category import FreeAlgebra, Hom, apply, monogenic
from .functors import AutomorphismPair, FunctorSpec, check_extension_functor, check_inner_witness
from .mainfn import CBijectionMap, MainFunction, c_bijection_check, central_check, witness_term
from .reports import Report
from .terms import OpSymbol, format_term
from .universe import Universe
from .varieties import DerivedStructure, Element, element_size, element_to_term, eval_op, evaluate


class StarError(ValueError):
    pass


TUPLE_LIMIT = 5000


def _tuples(elems: Sequence, k: int, limit: int = TUPLE_LIMIT):
    return list(islice(product(elems, repeat=k), limit))


class StarAlgebra:
    """Image of a C-bijection s : A -> phi(A), with operations carried over by s."""

    def __init__(self, s: CBijectionMap, label: str = "*", slack: int = 2):
        self.s = s
        self.source: FreeAlgebra = s.dom
        self.ambient: FreeAlgebra = s.cod
        self.variety = self.source.variety
        self.label = label
        self.slack = slack
        self._pre: Dict[Element, Element] = {}
        self._searched = -1

    # the bijection and its inverse
    def star(self, a: Element) -> Element:
        u = self.s(a)
        self._pre.setdefault(u, a)
        return u

    def _extend(self, n: int):
        """Make sure every source element of size <= n has been pushed through s."""
        if n <= self._searched:
            return
        A = self.source
        if self.variety.is_finite_module:
            elems = A.elements()
            n = float("inf")
        elif self.variety.is_word:
            elems = [a for a in A.elements(n) if len(a) > self._searched]
        else:
            elems = [a for a in A.elements(int_window=n)
                     if element_size(self.variety, a) > self._searched]
        for a in elems:
            self.star(a)
        self._searched = n

    def preimage(self, u: Element) -> Optional[Element]:
        """s^-1(u), or None when u lies outside the (searched) carrier."""
        if u in self._pre:
            return self._pre[u]
        if not self.ambient.contains(u):
            return None
        self._extend(element_size(self.variety, u) + self.slack)
        return self._pre.get(u)

    def contains(self, u: Element) -> bool:
        return self.preimage(u) is not None

    def carrier(self, universe: Universe) -> List[Element]:
        """Carrier elements that are images of the universe's sample of A."""
        return sorted({self.star(a) for a in universe.elements(self.source)})

    def op(self, op, args: Sequence[Element]) -> Element:
        if isinstance(op, str):
            op = self.variety.signature[op]
        pre = []
        for u in args:
            a = self.preimage(u)
            if a is None:
                raise StarError(f"{self.ambient.fmt(u)} is not in the carrier of {self}")
            pre.append(a)
        return self.star(eval_op(self.variety, op, pre))

    def generators(self) -> List[Element]:
        return [self.star(x) for x in self.source.generators()]

    def describe(self, universe: Optional[Universe] = None) -> dict:
        d = {"source_rank": self.source.rank, "ambient_rank": self.ambient.rank,
             "generators": [self.ambient.fmt(u) for u in self.generators()]}
        if universe is not None:
            car = self.carrier(universe)
            d["carrier_sample"] = len(car)
            d["carrier_complete"] = universe.complete
            d["carrier_is_ambient"] = set(car) == set(universe.elements(self.ambient))
        return d

    def __repr__(self):
        return f"{self.source.rank}{self.label}<{self.ambient}"

    __str__ = __repr__


def build_star(p: AutomorphismPair, A: FreeAlgebra, s_family: Optional[MainFunction] = None) -> StarAlgebra:
    s_family = s_family or MainFunction(p)
    return StarAlgebra(s_family(A), "*")


def build_sharp(p: AutomorphismPair, A: FreeAlgebra, s_family: Optional[MainFunction] = None) -> StarAlgebra:
    """A^#, the image of s^{phi_inv}_A inside phi_inv(A)."""
    s_family = s_family or MainFunction(p.inverse())
    return StarAlgebra(s_family(A), "#")


class StarHom:
    """Homomorphism A* -> B* given by the images of the star generators s_A(x_i).

    Evaluation reads an element back as a term over the star generators and
    evaluates it with the codomain's transported operations.
    """

    def __init__(self, dom: StarAlgebra, cod: StarAlgebra, images: tuple):
        if len(images) != dom.source.rank:
            raise StarError("one image per star generator is required")
        self.dom, self.cod, self.images = dom, cod, tuple(images)

    def __call__(self, u: Element) -> Element:
        a = self.dom.preimage(u)
        if a is None:
            raise StarError(f"{self.dom.ambient.fmt(u)} is not in the carrier of {self.dom}")
        t = element_to_term(self.dom.variety, a)
        env = {i: img for i, img in enumerate(self.images, 1)}
        return evaluate(self.dom.variety, t, env, op_eval=self.cod.op)

    def __eq__(self, other):
        return (isinstance(other, StarHom) and self.dom is other.dom and self.cod is other.cod
                and self.images == other.images)

    def __hash__(self):
        return hash((id(self.dom), id(self.cod), self.images))

    def __repr__(self):
        fmt = self.cod.ambient.fmt
        return f"{self.dom}->{self.cod}: " + ", ".join(f"s(x{i})->{fmt(u)}" for i, u in enumerate(self.images, 1))

    __str__ = __repr__


class StarIso:
    """s*_A viewed as a morphism A -> A*."""

    def __init__(self, star: StarAlgebra):
        self.star_alg = star
        self.dom = star.source
        self.cod = star

    def __call__(self, a):
        return self.star_alg.star(a)

    def __repr__(self):
        return f"s*[{self.dom}->{self.cod}]"


class StarInner(FunctorSpec):
    """Psi : C -> D, A |-> A*, mu |-> s*_B . mu . (s*_A)^-1."""

    kind = "star_inner"

    def __init__(self, p: AutomorphismPair, s_family: Optional[MainFunction] = None):
        self.pair = p
        self.s = s_family or MainFunction(p)
        self._objs: Dict[FreeAlgebra, StarAlgebra] = {}

    def apply_obj(self, A):
        if A not in self._objs:
            self._objs[A] = build_star(self.pair, A, self.s)
        return self._objs[A]

    def apply_hom(self, mu: Hom) -> StarHom:
        SA, SB = self.apply_obj(mu.dom), self.apply_obj(mu.cod)
        return StarHom(SA, SB, tuple(SB.star(apply(mu, x)) for x in mu.dom.generators()))

    def restore(self, nu: StarHom) -> Hom:
        """Psi^-1 on morphisms."""
        imgs = []
        for u in nu.images:
            a = nu.cod.preimage(u)
            if a is None:
                raise StarError(f"{nu} leaves the carrier of {nu.cod}")
            imgs.append(a)
        return Hom(nu.dom.source, nu.cod.source, tuple(imgs))

    def family(self, A) -> StarIso:
        return StarIso(self.apply_obj(A))


class ExtensionFunctor(FunctorSpec):
    """G : D -> C, A* |-> phi(A), nu |-> phi(Psi^-1(nu))."""

    kind = "extension"

    def __init__(self, psi: StarInner):
        self.psi = psi

    def apply_obj(self, D: StarAlgebra):
        return D.ambient

    def apply_hom(self, nu: StarHom) -> Hom:
        return self.psi.pair.phi.apply_hom(self.psi.restore(nu))


# -- checks -----------------------------------------------------------------

def transport_check(star: StarAlgebra, universe: Universe, limit: int = TUPLE_LIMIT) -> Report:
    """s* is a bijection onto the carrier and preserves every operation."""
    rep = Report("transport", universe.describe())
    A, v = star.source, star.variety
    elems = universe.elements(A)
    seen = {}
    for a in elems:
        u = star.star(a)
        if u in seen and seen[u] != a:
            rep.fail({"reason": "not injective", "a1": A.fmt(seen[u]), "a2": A.fmt(a)})
        seen[u] = a
        if star.preimage(u) != a:
            rep.fail({"reason": "preimage mismatch", "element": A.fmt(a)})
    n = 0
    for op in v.signature.ops:
        for args in _tuples(elems, op.arity, limit):
            n += 1
            lhs = star.star(eval_op(v, op, list(args)))
            rhs = star.op(op, [star.star(a) for a in args])
            if lhs != rhs:
                rep.fail({"op": op.name, "args": [A.fmt(a) for a in args],
                          "s(w(a))": star.ambient.fmt(lhs), "w*(s(a))": star.ambient.fmt(rhs)})
    return rep.note(object=str(A), elements=len(elems), tuples=n)


def restriction_check(p: AutomorphismPair, mu: Hom, universe: Universe,
                      psi: Optional[StarInner] = None, limit: int = 200) -> Report:
    """mu : phi(A) -> phi(B) restricts to a hom A* -> B* whose unique extension is mu."""
    psi = psi or StarInner(p)
    phi_inv = p.phi_inv
    A, B = phi_inv.apply_obj(mu.dom), phi_inv.apply_obj(mu.cod)
    SA, SB = psi.apply_obj(A), psi.apply_obj(B)
    v = A.variety
    rep = Report("restriction", universe.describe())
    car = SA.carrier(universe)
    for u in car:
        if not SB.contains(mu(u)):
            rep.fail({"hom": str(mu), "element": mu.dom.fmt(u), "reason": "leaves the carrier"})
            return rep
    n = 0
    for op in v.signature.ops:
        for args in _tuples(car, op.arity, limit):
            n += 1
            lhs = mu(SA.op(op, list(args)))
            rhs = SB.op(op, [mu(u) for u in args])
            if lhs != rhs:
                rep.fail({"hom": str(mu), "op": op.name, "args": [mu.dom.fmt(u) for u in args]})
                return rep
    nu = StarHom(SA, SB, tuple(mu(u) for u in SA.generators()))
    ext = p.phi.apply_hom(psi.restore(nu))
    if ext != mu:
        rep.fail({"hom": str(mu), "extension": str(ext), "reason": "phi(psi^-1(nu)) differs"})
    extensions = [lam for lam in universe.homs(mu.dom, mu.cod)
                  if all(lam(u) == mu(u) for u in car)]
    if len(extensions) != 1:
        rep.fail({"hom": str(mu), "reason": "extension not unique",
                  "extensions": [str(lam) for lam in extensions[:3]]})
    return rep.note(hom=str(mu), carrier=len(car), tuples=n, extensions=len(extensions))


def restriction_check_all(p: AutomorphismPair, universe: Universe, homs=None,
                          psi: Optional[StarInner] = None) -> Report:
    psi = psi or StarInner(p)
    rep = Report("restriction", universe.describe())
    if homs is None:
        homs = []
        for A in universe.objects():
            for B in universe.objects():
                homs.extend(universe.homs(p.phi.apply_obj(A), p.phi.apply_obj(B)))
    for mu in homs:
        sub = restriction_check(p, mu, universe, psi)
        if sub.failed:
            for w in sub.witnesses:
                rep.fail(w)
    return rep.note(homs=len(homs))


def derived_term(p: AutomorphismPair, F: FreeAlgebra, op: OpSymbol,
                 s_family: Optional[MainFunction] = None):
    """w~ = s_F(w(x1..xk)) read back as a term, with the table it induces.

    The table reproduces the derived operation by plain substitution only
    when s_F fixes the generators of F; otherwise it is None and the general
    route of ``derived_operation`` applies.
    """
    if F.rank < op.arity:
        raise StarError(f"rank {F.rank} is below the arity {op.arity} of {op.name}")
    v = F.variety
    s = (s_family or MainFunction(p))(F)
    w = s(eval_op(v, op, F.generators()[:op.arity]))
    term = element_to_term(v, w)
    table = None
    if all(s(x) == x for x in F.generators()):
        table = DerivedStructure(v, {op.name: term})
    return term, table


def derived_operation(p: AutomorphismPair, A: FreeAlgebra, op: OpSymbol, args: Sequence[Element],
                      star: Optional[StarAlgebra] = None,
                      s_family: Optional[MainFunction] = None) -> Element:
    """w~(u1..uk) = phi(theta)(w~) with theta : F -> A, theta(x_i) = s_A^-1(u_i)."""
    v = A.variety
    s_family = s_family or MainFunction(p)
    star = star or build_star(p, A, s_family)
    F = FreeAlgebra(v, max(v.signature.max_arity, 1))
    w = s_family(F)(eval_op(v, op, F.generators()[:op.arity]))
    pre = []
    for u in args:
        a = star.preimage(u)
        if a is None:
            raise StarError(f"{A.fmt(u)} is not in the carrier")
        pre.append(a)
    filler = A.generator(1)
    theta = Hom(F, A, tuple(pre) + (filler,) * (F.rank - len(pre)))
    return apply(p.phi.apply_hom(theta), w)


def derived_equals_star(p: AutomorphismPair, A: FreeAlgebra, universe: Universe,
                        ops: Optional[Iterable] = None, limit: int = TUPLE_LIMIT) -> Report:
    s_family = MainFunction(p)
    star = build_star(p, A, s_family)
    v = A.variety
    ops = [v.signature[o] if isinstance(o, str) else o for o in (ops or v.signature.ops)]
    car = star.carrier(universe)
    rep = Report("derived_equals_star", universe.describe())
    n = 0
    for op in ops:
        for args in _tuples(car, op.arity, limit):
            n += 1
            d = derived_operation(p, A, op, args, star, s_family)
            s = star.op(op, args)
            if d != s:
                rep.fail({"object": str(A), "op": op.name, "args": [star.ambient.fmt(u) for u in args],
                          "derived": star.ambient.fmt(d), "star": star.ambient.fmt(s)})
    return rep.note(object=str(A), ops=[o.name for o in ops], tuples=n)


@dataclass
class Decomposition:
    psi: StarInner
    G: ExtensionFunctor
    objects: List[StarAlgebra]
    report: Report
    witness: Dict = field(default_factory=dict)


def decompose(p: AutomorphismPair, universe: Universe, homs=None) -> Decomposition:
    """phi = G . Psi with Psi inner (via s*) and G an extension functor."""
    homs = list(universe.all_homs() if homs is None else homs)
    psi = StarInner(p)
    G = ExtensionFunctor(psi)
    objs = universe.objects()
    d_objs = [psi.apply_obj(A) for A in objs]
    rep = Report("decompose", universe.describe())

    for D in d_objs:
        rep.absorb(transport_check(D, universe))

    def iso_check(sigma):
        D = sigma.cod
        return all(D.preimage(D.star(a)) == a for a in universe.elements(sigma.dom))

    rep.absorb(check_inner_witness(psi, psi.family, universe, homs=homs, iso_check=iso_check))

    d_homs = [psi.apply_hom(mu) for mu in homs]
    carriers = {id(D): D.carrier(universe) for D in d_objs}
    rep.absorb(check_extension_functor(
        G.apply_obj, G.apply_hom, d_objs, d_homs,
        carrier=lambda D: carriers[id(D)],
        candidates=universe.homs, universe=universe))

    prod = Report("phi_equals_G_psi", universe.describe())
    for mu, nu in zip(homs, d_homs):
        lhs, rhs = G.apply_hom(nu), p.phi.apply_hom(mu)
        if lhs != rhs:
            prod.fail({"hom": str(mu), "G(psi(mu))": str(lhs), "phi(mu)": str(rhs)})
    rep.absorb(prod.note(homs=len(homs)))

    psi_id = all(D.star(a) == a for D in d_objs for a in universe.elements(D.source))
    g_id = psi_id and all(set(carriers[id(D)]) == set(universe.elements(D.ambient)) for D in d_objs)
    witness = {str(D.source.rank): D.describe(universe) for D in d_objs}
    t = witness_term(p, monogenic(universe.variety))
    rep.note(psi_identity=psi_id, g_identity=g_id, carrier_term=format_term(t), objects=witness)
    return Decomposition(psi, G, d_objs, rep, witness)


def quasi_inner_witness_check(p: AutomorphismPair, family: Callable, universe: Universe,
                              limit: int = TUPLE_LIMIT) -> Report:
    """Is ``family`` (A |-> c_A : A -> phi(A)^#) a central bimorphism family?

    Checks centrality, that c_A lands in the carrier of phi(A)^#, injectivity,
    that c_A respects the sharp operations, and separation of morphisms out of
    phi(A)^# (transported to phi(A) through the sharp isomorphism).
    """
    rep = Report("quasi_inner_witness", universe.describe())
    rep.absorb(central_check(family, universe))
    s_inv = MainFunction(p.inverse())
    for A in universe.objects():
        FA = p.phi.apply_obj(A)
        sharp = build_sharp(p, FA, s_inv)
        cA = family(A)
        elems = universe.elements(A)
        back = {}
        for a in elems:
            u = cA(a)
            b = sharp.preimage(u)
            if b is None:
                rep.fail({"object": str(A), "element": A.fmt(a), "reason": "outside the sharp carrier"})
                break
            back[a] = b
        if len(back) < len(elems):
            continue
        v = A.variety
        for op in v.signature.ops:
            bad = None
            for args in _tuples(elems, op.arity, limit):
                lhs = cA(eval_op(v, op, list(args)))
                rhs = sharp.op(op, [cA(a) for a in args])
                if lhs != rhs:
                    bad = {"object": str(A), "op": op.name, "args": [A.fmt(a) for a in args],
                           "c(w(a))": A.fmt(lhs), "w#(c(a))": A.fmt(rhs)}
                    break
            if bad:
                rep.fail(bad)
        d = CBijectionMap(A, FA, lambda a, back=back: back[a] if a in back else None, name="c")
        rep.absorb(c_bijection_check(d, universe))
    return rep
