"""Finite-rank free algebras, homomorphisms given by generator images, and
the mono/epi tests available for them."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import gcd
from typing import Iterator, List, Optional, Sequence

from . import budget
from .codes import is_uniquely_decodable
from .varieties import (SEM, Element, VarietySpec, format_element, generator, is_element, lc_add,
                        lc_scale, lc_vector, lincomb, substitute_element)


class CategoryError(ValueError):
    pass


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class FreeAlgebra:
    variety: VarietySpec
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise CategoryError("free algebras here have rank >= 1")

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.variety, self.rank))
            object.__setattr__(self, "_hash", h)
        return h

    def generator(self, i: int) -> Element:
        if not 1 <= i <= self.rank:
            raise CategoryError(f"no generator x{i} in rank {self.rank}")
        return generator(self.variety, i)

    def generators(self) -> List[Element]:
        return [generator(self.variety, i) for i in range(1, self.rank + 1)]

    def contains(self, a) -> bool:
        return is_element(self.variety, a, self.rank)

    def elements(self, max_len: int = 4, int_window: int = 2) -> List[Element]:
        """Finite modules: every element. Otherwise a bounded, ordered sample."""
        return list(_elements(self, max_len, int_window))

    @property
    def is_finite(self) -> bool:
        return self.variety.is_finite_module

    @property
    def size(self) -> Optional[int]:
        if not self.is_finite:
            return None
        return self.variety.ring.size ** self.rank

    def fmt(self, a: Element) -> str:
        return format_element(self.variety, a)

    def __str__(self):
        return f"F{self.rank}[{self.variety.describe()}]"


@lru_cache(maxsize=None)
def _elements(A: FreeAlgebra, max_len: int, int_window: int) -> tuple:
    v = A.variety
    if v.is_word:
        lo = 1 if v.kind == SEM else 0
        out = []
        for n in range(lo, max_len + 1):
            out.extend(product(range(1, A.rank + 1), repeat=n))
        return tuple(out)
    ring = v.ring
    coeffs = ring.elements if ring.is_finite else ring.window(int_window)
    return tuple(lincomb(ring, dict(enumerate(vec, 1))) for vec in product(coeffs, repeat=A.rank))


def monogenic(v: VarietySpec) -> FreeAlgebra:
    return FreeAlgebra(v, 1)


@dataclass(frozen=True)
class Hom:
    dom: FreeAlgebra
    cod: FreeAlgebra
    images: tuple

    def __post_init__(self):
        if self.dom.variety != self.cod.variety:
            raise CategoryError("homomorphism between different varieties")
        if len(self.images) != self.dom.rank:
            raise CategoryError(
                f"{len(self.images)} generator images for a rank-{self.dom.rank} domain")
        for a in self.images:
            if not self.cod.contains(a):
                raise CategoryError(f"{a!r} is not an element of {self.cod}")

    def __hash__(self):
        # homs are hashed constantly by the law checks and the oracle
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.dom.rank, self.cod.rank, self.images))
            object.__setattr__(self, "_hash", h)
        return h

    def __call__(self, a: Element) -> Element:
        return apply(self, a)

    def describe(self) -> str:
        body = ", ".join(f"x{i}->{self.cod.fmt(a)}" for i, a in enumerate(self.images, 1))
        return f"{self.dom}->{self.cod}: {body}"

    def __str__(self):
        return self.describe()


def apply(h: Hom, a: Element) -> Element:
    try:
        return substitute_element(h.dom.variety, a, h.images)
    except IndexError:
        raise CategoryError(f"element {a!r} is not in {h.dom}") from None


def identity(A: FreeAlgebra) -> Hom:
    return Hom(A, A, tuple(A.generators()))


def compose(g: Hom, f: Hom) -> Hom:
    """g after f."""
    if f.cod != g.dom:
        raise CategoryError(f"cannot compose: codomain {f.cod} is not domain {g.dom}")
    return Hom(f.dom, g.cod, tuple(apply(g, a) for a in f.images))


def alpha_morphism(A: FreeAlgebra, a: Element) -> Hom:
    """The unique morphism from the monogenic algebra sending its generator to a."""
    return Hom(monogenic(A.variety), A, (a,))


# -- mono / epi -------------------------------------------------------------

def _matrix(h: Hom):
    """cod.rank x dom.rank coefficient matrix (columns are generator images)."""
    cols = [lc_vector(a, h.cod.rank, 0) for a in h.images]
    return [[cols[j][i] for j in range(h.dom.rank)] for i in range(h.cod.rank)]


def is_mono(h: Hom) -> bool:
    v = h.dom.variety
    if v.is_word:
        imgs = h.images
        if any(len(w) == 0 for w in imgs):
            # e -> e already; a generator sent to e collides with it
            return False
        if len(set(imgs)) < len(imgs):
            return False
        return is_uniquely_decodable(imgs)
    if v.ring.is_finite:
        for a in h.dom.elements():
            budget.active().tick()
            if a and not apply(h, a):
                return False
        return True
    import sympy

    return sympy.Matrix(_matrix(h)).rank() == h.dom.rank


def kernel_witness(h: Hom) -> Optional[Element]:
    """A nonzero element killed by a finite-ring module hom, if any."""
    for a in h.dom.elements():
        if a and not apply(h, a):
            return a
    return None


def span(v: VarietySpec, gens: Sequence[Element]) -> frozenset:
    """Submodule generated by ``gens`` (finite rings only)."""
    ring = v.ring
    acc = {()}
    for g in gens:
        multiples = {lc_scale(ring, k, g) for k in ring.elements}
        acc = {lc_add(ring, s, m) for s in acc for m in multiples}
    return frozenset(acc)


def generates(A: FreeAlgebra, elems) -> bool:
    """Do ``elems`` generate A as an algebra?"""
    v = A.variety
    elems = set(elems)
    if v.is_word:
        # generators of a free (semi)group are indecomposable
        return all(g in elems for g in A.generators())
    if v.ring.is_finite:
        return len(span(v, sorted(elems))) == A.size
    import sympy

    n = A.rank
    cols = [lc_vector(a, n, 0) for a in sorted(elems)]
    if len(cols) < n:
        return False
    g = 0
    for pick in combinations(range(len(cols)), n):
        m = sympy.Matrix([[cols[j][i] for j in pick] for i in range(n)])
        g = gcd(g, int(m.det()))
        if g == 1:
            return True
    return False


def is_surjective(h: Hom) -> bool:
    return generates(h.cod, h.images)


def is_epi_sufficient(h: Hom) -> Verdict:
    """YES when h is onto (hence epi); UNKNOWN otherwise, never NO."""
    return Verdict.YES if is_surjective(h) else Verdict.UNKNOWN


def is_iso(h: Hom) -> bool:
    return h.dom.rank == h.cod.rank and is_mono(h) and is_surjective(h)


def invert(h: Hom) -> Hom:
    """Inverse of an isomorphism, found by preimage search."""
    if not is_iso(h):
        raise CategoryError(f"not an isomorphism: {h}")
    v = h.dom.variety
    if v.is_word:
        candidates = h.dom.generators()
    elif v.ring.is_finite:
        candidates = h.dom.elements()
    else:
        import sympy

        inv = sympy.Matrix(_matrix(h)).inv()
        imgs = tuple(lincomb(v.ring, {i + 1: int(inv[i, j]) for i in range(h.dom.rank)})
                     for j in range(h.cod.rank))
        return Hom(h.cod, h.dom, imgs)
    table = {apply(h, a): a for a in candidates}
    return Hom(h.cod, h.dom, tuple(table[g] for g in h.cod.generators()))


# -- enumeration ------------------------------------------------------------

def hom_count(A: FreeAlgebra, B: FreeAlgebra, bound: int = 3, int_window: int = 2) -> int:
    return len(B.elements(bound, int_window)) ** A.rank


def hom_enumerate(A: FreeAlgebra, B: FreeAlgebra, bound: int = 3,
                  cap: Optional[int] = None, int_window: int = 2) -> Iterator[Hom]:
    """All homs A -> B (finite modules), or those whose generator images lie in
    B's bounded element sample. Lexicographic in the image tuple."""
    if A.variety != B.variety:
        raise CategoryError("homs between different varieties")
    pool = B.elements(bound, int_window)
    b = budget.active()
    for n, imgs in enumerate(product(pool, repeat=A.rank), 1):
        if cap is not None and n > cap:
            raise budget.BudgetExceeded(f"more than {cap} homs {A} -> {B}")
        b.tick()
        yield Hom(A, B, imgs)


@dataclass(frozen=True)
class Category:
    """Full subcategory of finitely generated free algebras, indexed by rank."""

    variety: VarietySpec
    ranks: tuple

    def __post_init__(self):
        ranks = tuple(sorted(set(self.ranks)))
        if 1 not in ranks:
            raise CategoryError("the category must contain the monogenic algebra (rank 1)")
        object.__setattr__(self, "ranks", ranks)

    def objects(self) -> List[FreeAlgebra]:
        return [FreeAlgebra(self.variety, r) for r in self.ranks]

    def obj(self, rank: int) -> FreeAlgebra:
        if rank not in self.ranks:
            raise CategoryError(f"rank {rank} is not in the category")
        return FreeAlgebra(self.variety, rank)

    @property
    def A0(self) -> FreeAlgebra:
        return monogenic(self.variety)

    def __contains__(self, A) -> bool:
        return isinstance(A, FreeAlgebra) and A.variety == self.variety and A.rank in self.ranks
