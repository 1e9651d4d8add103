"""Reified test universes: which elements and morphisms a check quantifies over."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List

from .category import Category, FreeAlgebra, Hom, hom_count, hom_enumerate
from .varieties import Element


@dataclass(frozen=True)
class Universe:
    category: Category
    max_len: int = 4       # word length bound for elements
    hom_len: int = 2       # word length bound for generator images of homs
    int_window: int = 2    # coefficient window for Z-modules
    hom_cap: int = 200_000

    @property
    def variety(self):
        return self.category.variety

    @property
    def complete(self) -> bool:
        """True when every quantifier ranges over the whole (finite) category."""
        return self.variety.is_finite_module

    def objects(self) -> List[FreeAlgebra]:
        return self.category.objects()

    def elements(self, A: FreeAlgebra) -> List[Element]:
        return list(_elements(self, A))

    def homs(self, A: FreeAlgebra, B: FreeAlgebra) -> List[Hom]:
        return list(_homs(self, A, B))

    def all_homs(self) -> List[Hom]:
        out = []
        for A in self.objects():
            for B in self.objects():
                out.extend(_homs(self, A, B))
        return out

    def with_bounds(self, **kw) -> "Universe":
        fields = dict(category=self.category, max_len=self.max_len, hom_len=self.hom_len,
                      int_window=self.int_window, hom_cap=self.hom_cap)
        fields.update(kw)
        return Universe(**fields)

    def sizes(self) -> Dict[str, int]:
        objs = self.objects()
        return {
            "elements": {str(A.rank): len(_elements(self, A)) for A in objs},
            "homs": {f"{A.rank}->{B.rank}": hom_count(A, B, self.hom_len, self.int_window)
                     for A in objs for B in objs},
        }

    def describe(self) -> Dict:
        d = {
            "variety": self.variety.describe(),
            "ranks": list(self.category.ranks),
            "complete": self.complete,
        }
        if self.variety.is_word:
            d.update(max_len=self.max_len, hom_len=self.hom_len)
        elif not self.complete:
            d.update(int_window=self.int_window)
        return d


@lru_cache(maxsize=None)
def _elements(u: Universe, A: FreeAlgebra) -> tuple:
    return tuple(A.elements(u.max_len, u.int_window))


@lru_cache(maxsize=None)
def _homs(u: Universe, A: FreeAlgebra, B: FreeAlgebra) -> tuple:
    return tuple(hom_enumerate(A, B, u.hom_len, cap=u.hom_cap, int_window=u.int_window))
