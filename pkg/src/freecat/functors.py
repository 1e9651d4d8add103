"""Computable functors on categories of free algebras and their witness checks."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence

from . import budget
from .category import CategoryError, FreeAlgebra, Hom, compose, identity, invert, is_iso
from .reports import Report
from .rings import RingMap
from .universe import Universe
from .varieties import MOD, lincomb


class FunctorError(ValueError):
    pass


class FunctorSpec:
    kind = "functor"

    def apply_obj(self, A: FreeAlgebra) -> FreeAlgebra:
        raise NotImplementedError

    def apply_hom(self, h: Hom) -> Hom:
        raise NotImplementedError

    def inverse(self) -> "FunctorSpec":
        raise NotImplementedError

    def to_json(self):
        return {"kind": self.kind}

    def __call__(self, x):
        # morphisms (plain or transported) carry generator images; objects do not
        if isinstance(x, Hom) or hasattr(x, "images"):
            return self.apply_hom(x)
        return self.apply_obj(x)

    def __repr__(self):
        return f"{type(self).__name__}()"


class Identity(FunctorSpec):
    kind = "identity"

    def apply_obj(self, A):
        return A

    def apply_hom(self, h):
        return h

    def inverse(self):
        return self


class SemReversal(FunctorSpec):
    """mu |-> rev . mu . rev on free semigroups (and monoids); objects fixed."""

    kind = "sem_reversal"

    def apply_obj(self, A):
        if not A.variety.is_word:
            raise FunctorError("reversal acts on semigroup or monoid categories only")
        return A

    def apply_hom(self, h):
        self.apply_obj(h.dom)
        return Hom(h.dom, h.cod, tuple(w[::-1] for w in h.images))

    def inverse(self):
        return self


def reverse_word(w: tuple) -> tuple:
    return w[::-1]


class ModTwist(FunctorSpec):
    """Apply a ring map to every matrix coefficient; objects fixed."""

    kind = "mod_twist"

    def __init__(self, alpha: RingMap):
        self.alpha = alpha

    def apply_obj(self, A):
        if A.variety.kind != MOD or A.variety.ring != self.alpha.source:
            raise FunctorError(f"twist by a map on {self.alpha.source.descriptor} cannot act on {A}")
        return A

    def apply_hom(self, h):
        self.apply_obj(h.dom)
        ring, al = h.dom.variety.ring, self.alpha
        imgs = tuple(lincomb(ring, {i: al(c) for i, c in a}) for a in h.images)
        return Hom(h.dom, h.cod, imgs)

    def inverse(self):
        return ModTwist(self.alpha.inverse())

    def to_json(self):
        return {"kind": self.kind, "alpha": self.alpha.to_json()}

    def __repr__(self):
        return f"ModTwist({self.alpha.name})"


class Inner(FunctorSpec):
    """Conjugation by a family of isomorphisms sigma_A: A -> Inner(A)."""

    kind = "inner"

    def __init__(self, family: Mapping[FreeAlgebra, Hom]):
        self.family = dict(family)
        self._inv: Dict[FreeAlgebra, Hom] = {}

    def sigma(self, A: FreeAlgebra) -> Hom:
        try:
            return self.family[A]
        except KeyError:
            raise FunctorError(f"inner family does not cover {A}") from None

    def sigma_inv(self, A: FreeAlgebra) -> Hom:
        if A not in self._inv:
            self._inv[A] = invert(self.sigma(A))
        return self._inv[A]

    def apply_obj(self, A):
        return self.sigma(A).cod

    def apply_hom(self, h):
        return compose(self.sigma(h.cod), compose(h, self.sigma_inv(h.dom)))

    def inverse(self):
        return Inner({self.sigma(A).cod: self.sigma_inv(A) for A in self.family})

    def to_json(self):
        from .varieties import element_to_json

        sig = {}
        for A, s in sorted(self.family.items(), key=lambda kv: kv[0].rank):
            sig[str(A.rank)] = [element_to_json(A.variety, a, s.cod.rank) for a in s.images]
        return {"kind": self.kind, "sigma": sig}


class Table(FunctorSpec):
    """Extensional functor on a finite category."""

    kind = "table"

    def __init__(self, obj_map: Mapping[FreeAlgebra, FreeAlgebra], hom_map: Mapping[Hom, Hom],
                 name: str = "table"):
        self.obj_map = dict(obj_map)
        self.hom_map = dict(hom_map)
        self.name = name

    def apply_obj(self, A):
        try:
            return self.obj_map[A]
        except KeyError:
            raise FunctorError(f"table functor does not cover object {A}") from None

    def apply_hom(self, h):
        try:
            return self.hom_map[h]
        except KeyError:
            raise FunctorError(f"table functor does not cover morphism {h}") from None

    def inverse(self):
        objs = {v: k for k, v in self.obj_map.items()}
        homs = {v: k for k, v in self.hom_map.items()}
        if len(objs) != len(self.obj_map) or len(homs) != len(self.hom_map):
            raise FunctorError("table functor is not injective")
        return Table(objs, homs, name=f"{self.name}^-1")

    def with_override(self, h: Hom, value: Hom) -> "Table":
        homs = dict(self.hom_map)
        homs[h] = value
        return Table(self.obj_map, homs, name=f"{self.name}*")

    def to_json(self):
        return {"kind": self.kind, "name": self.name}

    def __repr__(self):
        return f"Table({self.name}, {len(self.hom_map)} homs)"


class Composite(FunctorSpec):
    """parts[0] is applied first."""

    kind = "composite"

    def __init__(self, parts: Sequence[FunctorSpec]):
        self.parts = list(parts)

    def apply_obj(self, A):
        for f in self.parts:
            A = f.apply_obj(A)
        return A

    def apply_hom(self, h):
        for f in self.parts:
            h = f.apply_hom(h)
        return h

    def inverse(self):
        return Composite([f.inverse() for f in reversed(self.parts)])

    def to_json(self):
        return {"kind": self.kind, "parts": [f.to_json() for f in self.parts]}

    def __repr__(self):
        return f"Composite({self.parts!r})"


@dataclass
class AutomorphismPair:
    phi: FunctorSpec
    phi_inv: FunctorSpec

    def inverse(self) -> "AutomorphismPair":
        return AutomorphismPair(self.phi_inv, self.phi)

    @classmethod
    def of(cls, phi: FunctorSpec) -> "AutomorphismPair":
        return cls(phi, phi.inverse())


def apply_obj(f: FunctorSpec, A: FreeAlgebra) -> FreeAlgebra:
    return f.apply_obj(A)


def apply_hom(f: FunctorSpec, h: Hom) -> Hom:
    return f.apply_hom(h)


# -- checks -----------------------------------------------------------------

# law checks over the same finite universe recompose the same pairs many times
_compose = lru_cache(maxsize=1 << 18)(compose)


def _objects_of(homs: Iterable[Hom]) -> List[FreeAlgebra]:
    seen = {}
    for h in homs:
        seen.setdefault(h.dom, None)
        seen.setdefault(h.cod, None)
    return sorted(seen, key=lambda A: A.rank)


def check_functor_laws(f: FunctorSpec, universe: Universe,
                       homs: Optional[Sequence[Hom]] = None) -> Report:
    homs = list(universe.all_homs() if homs is None else homs)
    rep = Report("functor_laws", universe.describe())
    image = {}

    def F(h):
        if h not in image:
            image[h] = f.apply_hom(h)
        return image[h]

    objs = _objects_of(homs)
    for A in objs:
        try:
            FA = f.apply_obj(A)
            if F(identity(A)) != identity(FA):
                rep.fail({"law": "identity", "object": str(A)})
        except (FunctorError, CategoryError) as e:
            rep.fail({"law": "identity", "object": str(A), "error": str(e)})
    by_dom = defaultdict(list)
    for h in homs:
        by_dom[h.dom].append(h)
    pairs = 0
    b = budget.active()
    for h in homs:
        for g in by_dom.get(h.cod, ()):
            pairs += 1
            b.tick()
            try:
                lhs = F(_compose(g, h))
                rhs = _compose(F(g), F(h))
            except (FunctorError, CategoryError) as e:
                rep.fail({"law": "composition", "f": str(h), "g": str(g), "error": str(e)})
                continue
            if lhs != rhs:
                rep.fail({"law": "composition", "f": str(h), "g": str(g),
                          "F(g.f)": str(lhs), "F(g).F(f)": str(rhs)})
    return rep.note(homs=len(homs), composable_pairs=pairs)


def check_automorphism_pair(p: AutomorphismPair, universe: Universe,
                            homs: Optional[Sequence[Hom]] = None) -> Report:
    homs = list(universe.all_homs() if homs is None else homs)
    rep = Report("automorphism_pair", universe.describe())
    objs = universe.objects()
    for A in objs:
        try:
            if p.phi_inv.apply_obj(p.phi.apply_obj(A)) != A or p.phi.apply_obj(p.phi_inv.apply_obj(A)) != A:
                rep.fail({"object": str(A)})
        except FunctorError as e:
            rep.fail({"object": str(A), "error": str(e)})
    for h in homs:
        try:
            there = p.phi.apply_hom(h)
            if p.phi_inv.apply_hom(there) != h:
                rep.fail({"round_trip": "phi_inv.phi", "hom": str(h)})
            if p.phi.apply_hom(p.phi_inv.apply_hom(h)) != h:
                rep.fail({"round_trip": "phi.phi_inv", "hom": str(h)})
        except (FunctorError, CategoryError) as e:
            rep.fail({"hom": str(h), "error": str(e)})
    bij = len({p.phi.apply_obj(A) for A in objs if _safe_obj(p.phi, A)}) == len(objs)
    if not bij:
        rep.fail({"object_map": "not a bijection on the object set"})
    return rep.note(homs=len(homs))


def _safe_obj(f, A):
    try:
        f.apply_obj(A)
        return True
    except FunctorError:
        return False


def check_inner_witness(f: FunctorSpec, family: Callable, universe: Universe,
                        homs: Optional[Sequence] = None,
                        elements: Optional[Callable] = None,
                        iso_check: Optional[Callable] = None) -> Report:
    """Check sigma_B . mu == f(mu) . sigma_A elementwise and that every sigma_A is iso.

    ``family(A)`` returns a morphism-like object (callable on elements, with
    ``.dom``/``.cod``). ``iso_check`` defaults to the free-algebra test.
    """
    homs = list(universe.all_homs() if homs is None else homs)
    elements = elements or universe.elements
    iso_check = iso_check or is_iso
    rep = Report("inner_witness", universe.describe())
    for A in _objects_of(homs):
        s = family(A)
        if not iso_check(s):
            rep.fail({"object": str(A), "sigma": str(s), "reason": "not an isomorphism"})
    checked = 0
    for h in homs:
        sa, sb = family(h.dom), family(h.cod)
        fh = f.apply_hom(h)
        for a in elements(h.dom):
            checked += 1
            lhs = sb(h(a))
            rhs = fh(sa(a))
            if lhs != rhs:
                rep.fail({"hom": str(h), "element": h.dom.fmt(a),
                          "sigma_B(mu(a))": repr(lhs), "F(mu)(sigma_A(a))": repr(rhs)})
                break
    return rep.note(homs=len(homs), element_checks=checked)


def check_extension_functor(g_obj: Callable, g_hom: Callable, d_objects: Sequence,
                            d_homs: Sequence, carrier: Callable, candidates: Callable,
                            universe: Universe) -> Report:
    """Extension-functor conditions for G: D -> C.

    (i) carrier(D) is a subset of |G(D)|; (ii) G(nu) restricts to nu on the
    carrier; (iii) any candidate hom G(D)->G(E) restricting to nu equals G(nu).
    Injectivity of G on ``d_homs`` is checked as well.
    """
    rep = Report("extension_functor", universe.describe())
    for D in d_objects:
        GD = g_obj(D)
        bad = [u for u in carrier(D) if not GD.contains(u)]
        if bad:
            rep.fail({"condition": "i", "object": str(D), "element": repr(bad[0])})
    seen = {}
    n_candidates = 0
    # candidate homs G(D) -> G(E), grouped by their values on the carrier of D
    by_restriction = {}
    for nu in d_homs:
        G = g_hom(nu)
        prev = seen.setdefault(G, nu)
        if prev is not nu:
            rep.fail({"condition": "injective", "nu": str(nu), "other": str(prev)})
        pts = list(carrier(nu.dom))
        vals = [nu(u) for u in pts]
        for u, val in zip(pts, vals):
            if G(u) != val:
                rep.fail({"condition": "ii", "nu": str(nu), "element": repr(u),
                          "G(nu)(u)": repr(G(u)), "nu(u)": repr(val)})
                break
        key = (id(nu.dom), id(nu.cod))
        if key not in by_restriction:
            groups = defaultdict(list)
            for lam in candidates(g_obj(nu.dom), g_obj(nu.cod)):
                n_candidates += 1
                groups[tuple(lam(u) for u in pts)].append(lam)
            by_restriction[key] = groups
        for lam in by_restriction[key].get(tuple(vals), ()):
            if lam != G:
                rep.fail({"condition": "iii", "nu": str(nu), "G(nu)": str(G),
                          "other_extension": str(lam)})
                break
    return rep.note(d_homs=len(d_homs), candidates=n_candidates)
