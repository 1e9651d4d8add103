"""Executable classifiers for automorphisms of semigroup and module categories."""

from __future__ import annotations

from itertools import islice, product
from typing import Callable, Dict, List, Optional

from .category import FreeAlgebra, Hom, monogenic
from .functors import AutomorphismPair, check_inner_witness
from .mainfn import MainFunction, c_bijection_check, witness_element
from .reports import REFUSED, UNKNOWN, Report
from .rings import Ring, RingMap, ring_map_laws
from .universe import Universe
from .varieties import MOD, SEM, Element, lc_add, lc_scale

PAIR_LIMIT = 4000

INNER = "inner"
ANTI = "anti"
INCONSISTENT = "inconsistent"


def _pairs(elems, limit=PAIR_LIMIT):
    return list(islice(product(elems, repeat=2), limit))


# -- semigroups -------------------------------------------------------------

def sem_classify(p: AutomorphismPair, universe: Universe, s_family=None) -> Report:
    """Decide whether the main functions are isomorphisms (inner) or anti-isomorphisms.

    The witness term must be x0^k with k = 1; a larger k cannot come from an
    automorphism and is flagged as a defective input. The decision is read
    off s on x1*x2 in rank 2 and then verified on every universe object.
    """
    rep = Report("sem_classify", universe.describe())
    v = universe.variety
    if v.kind != SEM:
        rep.status = REFUSED
        return rep.note(reason=f"semigroup classifier applied to {v.describe()}")
    s = s_family or MainFunction(p)
    A0 = monogenic(v)
    t = witness_element(p, A0)
    k = len(t)
    rep.note(t="x0" if k == 1 else f"x0^{k}", k=k)
    if set(t) != {1} or k != 1:
        rep.note(verdict=INCONSISTENT, reason="witness term is not x0: input is not an automorphism")
        return rep.fail({"t": A0.fmt(t)})
    F = FreeAlgebra(v, 2)
    sF = s(F)
    x1, x2 = F.generators()
    g1, g2, g12 = sF(x1), sF(x2), sF(x1 + x2)
    if len(g1) != 1 or len(g2) != 1 or g1 == g2:
        rep.note(verdict=INCONSISTENT, reason="s does not permute the generators of rank 2")
        return rep.fail({"s(x1)": sF.cod.fmt(g1), "s(x2)": sF.cod.fmt(g2)})
    if g12 == g1 + g2:
        verdict = INNER
    elif g12 == g2 + g1:
        verdict = ANTI
    else:
        rep.note(verdict=INCONSISTENT, reason="s(x1*x2) is neither s(x1)s(x2) nor s(x2)s(x1)")
        return rep.fail({"s(x1*x2)": sF.cod.fmt(g12)})
    rep.note(generator_images={"x1": sF.cod.fmt(g1), "x2": sF.cod.fmt(g2), "x1*x2": sF.cod.fmt(g12)})

    checked = 0
    for A in universe.objects():
        sA = s(A)
        elems = universe.elements(A)
        if len({sA(a) for a in elems}) != len(elems):
            rep.fail({"object": str(A), "reason": "s_A not injective"})
        for a, b in _pairs(elems):
            checked += 1
            want = sA(a) + sA(b) if verdict == INNER else sA(b) + sA(a)
            if sA(a + b) != want:
                rep.note(verdict=INCONSISTENT)
                return rep.fail({"object": str(A), "a": A.fmt(a), "b": A.fmt(b),
                                 "s(ab)": A.fmt(sA(a + b)), "expected": A.fmt(want)})
    rep.note(verdict=verdict, pairs_checked=checked)
    if verdict == INNER:
        def family(A):
            sA = s(A)
            return Hom(A, sA.cod, tuple(sA(x) for x in A.generators()))

        inner = check_inner_witness(p.phi, family, universe)
        rep.absorb(inner)
        rep.note(sigma={str(A.rank): [A.fmt(u) for u in family(A).images] for A in universe.objects()})
    return rep


# -- modules ----------------------------------------------------------------

def _r_of(t: Element, ring: Ring) -> int:
    return t[0][1] if t else ring.zero


def _r_preimages(ring: Ring, r: int, target: Element, FA: FreeAlgebra,
                 table: Optional[Dict] = None) -> List[Element]:
    """All u in phi(A) with r*u == target."""
    if table is not None:
        return table.get(target, [])
    # integers: r*u = target has at most one solution when r != 0
    if r == 0:
        return [()] if not target else []
    if any(c % r for _, c in target):
        return []
    return [tuple((i, c // r) for i, c in target)]


def _kstar_solutions(ring: Ring, r: int, u: Element, target: Element, window) -> Optional[set]:
    """{k* : r*k*.u == target}; None means every ring element works."""
    ru = lc_scale(ring, r, u)
    if not ru:
        return None if not target else set()
    if ring.is_finite:
        return {k for k in ring.elements if lc_scale(ring, k, ru) == target}
    i, c = ru[0]
    tgt = dict(target).get(i, 0)
    if tgt % c:
        return set()
    k = tgt // c
    return {k} if lc_scale(ring, k, ru) == target else set()


def _alpha_map(ring: Ring, reps: Dict[int, int], solve: Callable) -> RingMap:
    if ring.is_finite:
        name = "id" if all(k == v for k, v in reps.items()) else "extracted"
        if name != "id" and ring.descriptor == "GF4" and all(ring.mul(k, k) == v for k, v in reps.items()):
            name = "frobenius"
        return RingMap(ring, ring, name, table=dict(reps))
    return RingMap(ring, ring, "extracted", func=solve)


def mod_conditions(p: AutomorphismPair, universe: Universe, s_family=None) -> Report:
    """Evaluate the four structural conditions on the main functions of a module category."""
    rep = Report("mod_conditions", universe.describe())
    v = universe.variety
    if v.kind != MOD:
        rep.status = REFUSED
        return rep.note(reason=f"module conditions applied to {v.describe()}")
    ring = v.ring
    s = s_family or MainFunction(p)
    A0 = monogenic(v)
    t = witness_element(p, A0)
    r = _r_of(t, ring)
    rep.note(r=ring.label(r))
    conds = {}

    # (1) every value of s_A is r times something
    c1 = Report("condition_1")
    tables = {}
    for A in universe.objects():
        sA = s(A)
        FA = sA.cod
        if ring.is_finite:
            tab: Dict[Element, List[Element]] = {}
            for u in universe.elements(FA):
                tab.setdefault(lc_scale(ring, r, u), []).append(u)
            tables[A] = tab
        for a in universe.elements(A):
            if not _r_preimages(ring, r, sA(a), FA, tables.get(A)):
                c1.fail({"object": str(A), "element": A.fmt(a), "s(a)": FA.fmt(sA(a))})
                break
    conds["1"] = c1.status

    # (2) additivity
    c2 = Report("condition_2")
    for A in universe.objects():
        sA = s(A)
        for a, b in _pairs(universe.elements(A)):
            lhs = sA(lc_add(ring, a, b))
            rhs = lc_add(ring, sA(a), sA(b))
            if lhs != rhs:
                c2.fail({"object": str(A), "a": A.fmt(a), "b": A.fmt(b),
                         "s(a+b)": A.fmt(lhs), "s(a)+s(b)": A.fmt(rhs)})
                break
    conds["2"] = c2.status

    # (3) s_A(k a) = r alpha(k) u with r u = s_A(a)
    c3 = Report("condition_3")
    scalars = ring.elements if ring.is_finite else ring.window(universe.int_window)
    solutions: Dict[int, Optional[set]] = {k: None for k in scalars}
    for A in universe.objects():
        sA = s(A)
        for a in universe.elements(A):
            us = _r_preimages(ring, r, sA(a), sA.cod, tables.get(A))
            if not us:
                continue
            for k in scalars:
                target = sA(lc_scale(ring, k, a))
                sols = set()
                any_u = False
                for u in us:
                    got = _kstar_solutions(ring, r, u, target, scalars)
                    if got is None:
                        any_u = True
                        break
                    sols |= got
                if any_u:
                    continue
                solutions[k] = sols if solutions[k] is None else solutions[k] & sols
    empty = [k for k, sols in solutions.items() if sols is not None and not sols]
    for k in empty:
        c3.fail({"k": ring.label(k), "reason": "no k* satisfies s(ka) = r k* u for all a"})
    reps = {}
    for k, sols in solutions.items():
        if sols is None:
            sols = set(ring.elements) if ring.is_finite else {k}
            solutions[k] = sols
        if sols:
            reps[k] = min(sols)
            weighted = {ring.mul(r, x) for x in sols}
            if len(weighted) > 1:
                c3.fail({"k": ring.label(k), "reason": "r*k* depends on the representative"})
    conds["3"] = c3.status
    rep.note(solution_sets={ring.label(k): sorted(ring.label(x) for x in sols)
                            for k, sols in solutions.items()})

    # (4) the r-weighted ring laws, for the canonical and every alternative representative
    c4 = Report("condition_4")
    alpha = None
    if c3.ok:
        def solve(k):
            x = A0.generator(1)
            target = s(A0)(lc_scale(ring, k, x))
            us = _r_preimages(ring, r, s(A0)(x), s(A0).cod)
            got = _kstar_solutions(ring, r, us[0], target, None) if us else set()
            if not got:
                raise ValueError(f"no alpha({k})")
            return min(got)

        alpha = _alpha_map(ring, reps, solve)
        window = None if ring.is_finite else list(scalars)
        laws = ring_map_laws(ring, alpha, r, window)
        c4.note(laws=laws.to_dict())
        if not laws.ok:
            c4.fail({"violations": laws.violations})
        if ring.is_finite:
            for k, sols in solutions.items():
                for alt in sorted(sols - {reps[k]}):
                    other = dict(reps)
                    other[k] = alt
                    alt_laws = ring_map_laws(ring, RingMap(ring, ring, "alt", table=other), r)
                    if not alt_laws.ok:
                        c4.fail({"k": ring.label(k), "representative": ring.label(alt),
                                 "violations": alt_laws.violations})
        if ring.is_finite:
            rep.note(alpha={ring.label(k): ring.label(x) for k, x in sorted(reps.items())},
                     alpha_name=alpha.name)
        else:
            rep.note(alpha={ring.label(k): ring.label(alpha(k)) for k in scalars},
                     alpha_name="id" if all(alpha(k) == k for k in scalars) else alpha.name)
    else:
        c4.status = UNKNOWN
        c4.note(reason="no alpha to test")
    conds["4"] = c4.status

    for sub in (c1, c2, c3, c4):
        rep.absorb(sub)
    rep.note(conditions=conds)
    rep.alpha = alpha
    rep.r = r
    return rep


def mod_semi_inner(p: AutomorphismPair, universe: Universe, s_family=None) -> Report:
    """Over a ring without zero divisors: r = 1, s_A bijective, alpha a ring automorphism."""
    rep = Report("mod_semi_inner", universe.describe())
    v = universe.variety
    if v.kind != MOD:
        rep.status = REFUSED
        return rep.note(reason=f"module check applied to {v.describe()}")
    ring = v.ring
    if ring.has_zero_divisors:
        rep.status = REFUSED
        return rep.note(reason=f"{ring.descriptor} has zero divisors; the conclusion needs a ring without them")
    s = s_family or MainFunction(p)
    cond = mod_conditions(p, universe, s)
    rep.absorb(cond)
    if cond.r != ring.one:
        rep.fail({"r": ring.label(cond.r), "reason": "r is not 1"})
    for A in universe.objects():
        sA = s(A)
        elems = universe.elements(A)
        image = {sA(a) for a in elems}
        if len(image) != len(elems):
            rep.fail({"object": str(A), "reason": "s_A not injective"})
        if universe.complete and image != set(universe.elements(sA.cod)):
            rep.fail({"object": str(A), "reason": "s_A not surjective"})
        if not universe.complete:
            rep.absorb(c_bijection_check(sA, universe))
    alpha = cond.alpha
    if alpha is not None:
        if ring.is_finite:
            if not alpha.is_bijective():
                rep.fail({"alpha": cond.details.get("alpha"), "reason": "alpha not bijective"})
            else:
                inv_laws = ring_map_laws(ring, alpha.inverse(), ring.one)
                laws = ring_map_laws(ring, alpha, ring.one)
                rep.note(alpha_laws=laws.ok, alpha_inverse_laws=inv_laws.ok)
                if not (laws.ok and inv_laws.ok):
                    rep.fail({"reason": "alpha is not a ring automorphism"})
                back = mod_conditions(p.inverse(), universe)
                if back.alpha is not None:
                    comp = all(back.alpha(alpha(k)) == k for k in ring.elements)
                    rep.note(inverse_alpha=back.details.get("alpha"), inverse_composes_to_id=comp)
                    if not comp:
                        rep.fail({"reason": "alpha of the inverse automorphism is not alpha^-1"})
        else:
            scalars = ring.window(universe.int_window)
            laws = ring_map_laws(ring, alpha, ring.one, list(scalars))
            vals = [alpha(k) for k in scalars]
            rep.note(alpha_laws=laws.ok, alpha_injective_on_window=len(set(vals)) == len(vals))
            if not laws.ok or len(set(vals)) != len(vals):
                rep.fail({"reason": "alpha is not an injective ring map on the window"})
    rep.note(r=cond.details.get("r"), alpha=cond.details.get("alpha"),
             alpha_name=cond.details.get("alpha_name"),
             verdict="semi-inner" if rep.ok else ("unknown" if rep.status == UNKNOWN else "not semi-inner"))
    return rep
