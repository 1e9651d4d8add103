"""Brute-force search for automorphisms of small finite module categories.

Every functor is searched for directly as a map on morphisms: identities are
fixed, each hom-set is mapped injectively into the matching hom-set, and
every assignment is pushed through the composition table. The survivors are
independent of the main-function machinery and are then cross-checked
against it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, List, Sequence, Tuple

from . import budget as budget_mod
from .category import Category, FreeAlgebra, Hom, compose, identity
from .functors import (AutomorphismPair, Composite, FunctorError, ModTwist, Table,
                       check_automorphism_pair, check_functor_laws, check_inner_witness)
from .mainfn import MainFunction, check_naturality_all, image_check
from .reports import Report
from .rings import Ring, ring_automorphisms
from .universe import Universe
from .varieties import MOD, VarietySpec, element_from_json, element_to_json, make_variety

MAX_RING_SIZE = 4
MAX_RANK = 2


class OracleRefused(ValueError):
    pass


@dataclass
class OracleResult:
    category: Category
    automorphisms: List[Table]
    report: Report
    complete: bool = True


class _Search:
    """Backtracking over morphism assignments with composition propagation."""

    def __init__(self, cat: Category, obj_map: Dict[FreeAlgebra, FreeAlgebra], universe: Universe):
        self.cat = cat
        self.obj_map = obj_map
        objs = cat.objects()
        self.homs: List[Hom] = []
        self.hset: Dict[Tuple, List[int]] = {}
        for A in objs:
            for B in objs:
                ids = []
                for h in universe.homs(A, B):
                    ids.append(len(self.homs))
                    self.homs.append(h)
                self.hset[(A, B)] = ids
        self.index = {h: i for i, h in enumerate(self.homs)}
        n = len(self.homs)
        self.after: List[List[Tuple[int, int]]] = [[] for _ in range(n)]   # f -> [(g, g.f)]
        self.before: List[List[Tuple[int, int]]] = [[] for _ in range(n)]  # g -> [(f, g.f)]
        self.comp: Dict[Tuple[int, int], int] = {}
        b = budget_mod.active()
        for A in objs:
            for B in objs:
                for C in objs:
                    for f in self.hset[(A, B)]:
                        for g in self.hset[(B, C)]:
                            b.tick()
                            gf = self.index[compose(self.homs[g], self.homs[f])]
                            self.comp[(g, f)] = gf
                            self.after[f].append((g, gf))
                            self.before[g].append((f, gf))
        self.target = [self.hset[(obj_map[h.dom], obj_map[h.cod])] for h in self.homs]
        self.target_set = [frozenset(t) for t in self.target]
        self.assign = [-1] * n
        self.taken = [False] * n
        self.trail: List[int] = []
        self.nodes = 0

    def _set(self, f: int, x: int, queue: list) -> bool:
        cur = self.assign[f]
        if cur != -1:
            return cur == x
        if self.taken[x] or x not in self.target_set[f]:
            return False
        self.assign[f] = x
        self.taken[x] = True
        self.trail.append(f)
        queue.append(f)
        return True

    def _propagate(self, queue: list) -> bool:
        assign, comp = self.assign, self.comp
        while queue:
            f = queue.pop()
            xf = assign[f]
            for g, gf in self.after[f]:
                xg = assign[g]
                if xg != -1 and not self._set(gf, comp[(xg, xf)], queue):
                    return False
            for e, fe in self.before[f]:
                xe = assign[e]
                if xe != -1 and not self._set(fe, comp[(xf, xe)], queue):
                    return False
        return True

    def _undo(self, mark: int):
        while len(self.trail) > mark:
            f = self.trail.pop()
            self.taken[self.assign[f]] = False
            self.assign[f] = -1

    def order(self) -> List[int]:
        """Small generating-type morphisms first (rank-1 endos, then maps through rank 1)."""
        def key(i):
            h = self.homs[i]
            return (h.dom.rank * h.cod.rank, h.dom.rank, h.cod.rank, i)
        return sorted(range(len(self.homs)), key=key)

    def run(self) -> List[Tuple[int, ...]]:
        queue = []
        for A in self.cat.objects():
            if not self._set(self.index[identity(A)], self.index[identity(self.obj_map[A])], queue):
                return []
        if not self._propagate(queue):
            return []
        order = self.order()
        found = []
        b = budget_mod.active()

        def go(pos):
            while pos < len(order) and self.assign[order[pos]] != -1:
                pos += 1
            if pos == len(order):
                found.append(tuple(self.assign))
                return
            f = order[pos]
            for x in self.target[f]:
                if self.taken[x]:
                    continue
                self.nodes += 1
                b.tick()
                mark = len(self.trail)
                q = []
                if self._set(f, x, q) and self._propagate(q):
                    go(pos + 1)
                self._undo(mark)

        go(0)
        return found


def _object_maps(cat: Category, universe: Universe) -> List[Dict]:
    """Object bijections preserving the hom-set size profile."""
    objs = cat.objects()
    size = {(A, B): len(universe.homs(A, B)) for A in objs for B in objs}
    out = []
    for perm in permutations(objs):
        m = dict(zip(objs, perm))
        if all(size[(A, B)] == size[(m[A], m[B])] for A in objs for B in objs):
            out.append(m)
    return out


def oracle_search(ring: Ring, max_rank: int) -> OracleResult:
    """Enumerate all automorphisms of MOD(ring) restricted to ranks 1..max_rank."""
    if not ring.is_finite or ring.size > MAX_RING_SIZE:
        raise OracleRefused(f"ring {ring.descriptor} exceeds the oracle limit |R| <= {MAX_RING_SIZE}")
    if not 1 <= max_rank <= MAX_RANK:
        raise OracleRefused(f"rank {max_rank} exceeds the oracle limit {MAX_RANK}")
    v = VarietySpec(MOD, ring)
    cat = Category(v, tuple(range(1, max_rank + 1)))
    universe = Universe(cat)
    rep = Report("oracle", universe.describe())
    tables = []
    nodes = 0
    for m in _object_maps(cat, universe):
        s = _Search(cat, m, universe)
        for sol in s.run():
            hom_map = {s.homs[i]: s.homs[x] for i, x in enumerate(sol)}
            tables.append(Table(m, hom_map))
        nodes += s.nodes
    homs = universe.all_homs()
    tables.sort(key=lambda t: [t.hom_map[h].images for h in homs])
    for i, t in enumerate(tables, 1):
        t.name = f"auto{i}"
    rep.note(ring=ring.descriptor, max_rank=max_rank, found=len(tables), morphisms=len(homs),
             search_nodes=nodes)
    return OracleResult(cat, tables, rep)


def table_pair(t: Table) -> AutomorphismPair:
    return AutomorphismPair(t, t.inverse())


def compose_tables(a: Table, b: Table) -> Table:
    """a after b."""
    return Table({A: a.obj_map[B] for A, B in b.obj_map.items()},
                 {h: a.hom_map[k] for h, k in b.hom_map.items()},
                 name=f"{a.name}.{b.name}")


def group_check(tables: Sequence[Table], universe: Universe) -> Report:
    rep = Report("group", universe.describe())
    homs = universe.all_homs()

    def key(t):
        return tuple(t.hom_map[h] for h in homs)

    keys = {key(t) for t in tables}
    ident = tuple(homs)
    if tables and ident not in keys:
        rep.fail({"reason": "identity functor missing"})
    for a in tables:
        if key(a.inverse()) not in keys:
            rep.fail({"reason": "not closed under inverse", "functor": a.name})
        for b in tables:
            if key(compose_tables(a, b)) not in keys:
                rep.fail({"reason": "not closed under composition", "pair": [a.name, b.name]})
    return rep.note(size=len(tables))


def known_construction_check(t: Table, alpha_name_to_map: Dict, universe: Universe) -> Report:
    """Is t an inner automorphism composed with a coefficient twist?

    For each ring automorphism alpha, t . twist(alpha^-1) is tested for
    innerness using its main functions as the isomorphism family.
    """
    rep = Report("known_construction", universe.describe())
    matches = []
    for name, alpha in alpha_name_to_map.items():
        phi = Composite([ModTwist(alpha.inverse()), t])
        p = AutomorphismPair(phi, phi.inverse())
        s = MainFunction(p)

        def family(A, s=s):
            sA = s(A)
            return Hom(A, sA.cod, tuple(sA(x) for x in A.generators()))

        try:
            sub = check_inner_witness(phi, family, universe)
        except FunctorError as e:
            sub = Report("inner_witness").fail({"error": str(e)})
        if sub.ok:
            matches.append({"alpha": name,
                            "sigma": {str(A.rank): [A.fmt(u) for u in family(A).images]
                                      for A in universe.objects()}})
    if not matches:
        rep.fail({"functor": t.name, "reason": "not inner composed with a twist"})
    return rep.note(functor=t.name, matches=matches)


def oracle_enumerate_automorphisms(ring: Ring, max_rank: int, cross_check: bool = True) -> OracleResult:
    """Search, then run every survivor through the main-function pipeline."""
    from .cases import mod_conditions
    from .star import decompose

    res = oracle_search(ring, max_rank)
    universe = Universe(res.category)
    rep = res.report
    if not cross_check:
        return res
    alphas = {}
    for i, a in enumerate(ring_automorphisms(ring)):
        alphas[a.name if a.name != "table" else f"table{i}"] = a
    rep.note(ring_automorphisms=sorted(alphas))
    per = []
    for t in res.automorphisms:
        p = table_pair(t)
        entry = Report(f"survivor:{t.name}", universe.describe())
        entry.absorb(check_functor_laws(t, universe))
        entry.absorb(check_automorphism_pair(p, universe))
        cond = mod_conditions(p, universe)
        entry.absorb(cond)
        entry.absorb(check_naturality_all(p, MainFunction(p), universe))
        for A in universe.objects():
            entry.absorb(image_check(p, A, universe))
        entry.absorb(decompose(p, universe).report)
        entry.absorb(known_construction_check(t, alphas, universe))
        entry.note(r=cond.details.get("r"), alpha=cond.details.get("alpha"))
        per.append(entry)
        rep.absorb(entry)
    rep.absorb(group_check(res.automorphisms, universe))
    return res


# -- table files ------------------------------------------------------------

def table_to_json(t: Table, cat: Category) -> dict:
    v = cat.variety
    homs = []
    for A in cat.objects():
        for B in cat.objects():
            for h in Universe(cat).homs(A, B):
                img = t.hom_map[h]
                homs.append({"dom": A.rank, "cod": B.rank,
                             "images": [element_to_json(v, a, B.rank) for a in h.images],
                             "to": [element_to_json(v, a, img.cod.rank) for a in img.images]})
    return {"kind": "table", "name": t.name, "variety": v.to_json(), "ranks": list(cat.ranks),
            "objects": {str(A.rank): B.rank for A, B in sorted(t.obj_map.items(), key=lambda kv: kv[0].rank)},
            "homs": homs}


def table_from_json(data: dict) -> Tuple[Table, Category]:
    v = make_variety(data["variety"])
    cat = Category(v, tuple(data["ranks"]))
    objs = {FreeAlgebra(v, int(k)): FreeAlgebra(v, int(r)) for k, r in data["objects"].items()}
    homs = {}
    for e in data["homs"]:
        A, B = FreeAlgebra(v, e["dom"]), FreeAlgebra(v, e["cod"])
        FA, FB = objs[A], objs[B]
        h = Hom(A, B, tuple(element_from_json(v, a, B.rank) for a in e["images"]))
        homs[h] = Hom(FA, FB, tuple(element_from_json(v, a, FB.rank) for a in e["to"]))
    return Table(objs, homs, name=data.get("name", "table")), cat


def dump_table(t: Table, cat: Category, path) -> None:
    with open(path, "w") as fh:
        json.dump(table_to_json(t, cat), fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_table(path) -> Tuple[Table, Category]:
    with open(path) as fh:
        return table_from_json(json.load(fh))
