"""Coefficient rings for module varieties and maps between them."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence


class RingError(ValueError):
    pass


class Ring:
    """Base class; elements are plain Python ints in every implementation."""

    descriptor: str = "?"

    # finite rings expose their elements; the integers return None
    @property
    def elements(self) -> Optional[tuple]:
        return None

    @property
    def is_finite(self) -> bool:
        return self.elements is not None

    @property
    def size(self) -> Optional[int]:
        els = self.elements
        return None if els is None else len(els)

    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        raise NotImplementedError

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def neg(self, a: int) -> int:
        raise NotImplementedError

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    @property
    def has_zero_divisors(self) -> bool:
        raise NotImplementedError

    def label(self, k: int) -> str:
        return str(k)

    def token(self, k: int) -> str:
        """Identifier-safe label, used to name the ``scale_<k>`` symbols."""
        return self.label(k)

    def parse(self, text) -> int:
        raise NotImplementedError

    def contains(self, k) -> bool:
        return isinstance(k, int) and (self.elements is None or k in self.elements)

    def units(self) -> List[int]:
        els = self.elements
        if els is None:
            return [1, -1]
        return [u for u in els if any(self.mul(u, v) == self.one for v in els)]

    def __eq__(self, other):
        return isinstance(other, Ring) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(("ring", self.descriptor))

    def __repr__(self):
        return f"Ring({self.descriptor!r})"


class Zmod(Ring):
    def __init__(self, n: int):
        if n < 2:
            raise RingError("Z/n needs n >= 2")
        self.n = n
        self.descriptor = f"Z/{n}"
        self._elements = tuple(range(n))

    @property
    def elements(self):
        return self._elements

    def add(self, a, b):
        return (a + b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def neg(self, a):
        return (-a) % self.n

    @property
    def has_zero_divisors(self):
        n = self.n
        return any(n % d == 0 for d in range(2, int(n ** 0.5) + 1))

    def parse(self, text):
        k = int(text)
        return k % self.n


class IntegerRing(Ring):
    descriptor = "Z"

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    @property
    def has_zero_divisors(self):
        return False

    def parse(self, text):
        return int(text)

    def window(self, radius: int) -> tuple:
        """Test window -radius..radius, ordered 0, 1, -1, 2, -2, ..."""
        out = [0]
        for k in range(1, radius + 1):
            out += [k, -k]
        return tuple(out)


class GF4(Ring):
    """GF(4) = {0, 1, w, w+1}, encoded as 0, 1, 2, 3 (bit i = coefficient of w^i)."""

    descriptor = "GF4"
    _LABELS = ("0", "1", "w", "w+1")
    _TOKENS = ("0", "1", "w", "w1")
    # w^2 = w + 1
    _MUL = (
        (0, 0, 0, 0),
        (0, 1, 2, 3),
        (0, 2, 3, 1),
        (0, 3, 1, 2),
    )

    @property
    def elements(self):
        return (0, 1, 2, 3)

    def add(self, a, b):
        return a ^ b

    def mul(self, a, b):
        return self._MUL[a][b]

    def neg(self, a):
        return a

    @property
    def has_zero_divisors(self):
        return False

    def label(self, k):
        return self._LABELS[k]

    def token(self, k):
        return self._TOKENS[k]

    def parse(self, text):
        if isinstance(text, int):
            if text in (0, 1, 2, 3):
                return text
            raise RingError(f"not an element of GF4: {text!r}")
        t = str(text).replace(" ", "")
        for table in (self._LABELS, self._TOKENS, ("0", "1", "w", "1+w")):
            if t in table:
                return table.index(t)
        raise RingError(f"not an element of GF4: {text!r}")


def make_ring(descriptor: str) -> Ring:
    d = descriptor.strip()
    if d == "Z":
        return IntegerRing()
    if d.upper() == "GF4":
        return GF4()
    m = re.fullmatch(r"Z/(\d+)", d)
    if m:
        return Zmod(int(m.group(1)))
    raise RingError(f"unknown ring descriptor {descriptor!r}")


@dataclass
class RingMap:
    """A function between rings, either tabulated or in closed form."""

    source: Ring
    target: Ring
    name: str
    table: Optional[Dict[int, int]] = None
    func: Optional[Callable[[int], int]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.table is None and self.func is None:
            raise RingError("ring map needs a table or a function")
        if self.table is not None and self.source.is_finite:
            missing = [k for k in self.source.elements if k not in self.table]
            if missing:
                raise RingError(f"ring map {self.name} not total: missing {missing}")

    def __call__(self, k: int) -> int:
        if self.table is not None:
            return self.table[k]
        return self.func(k)

    def tabulate(self) -> Dict[int, int]:
        if not self.source.is_finite:
            raise RingError("cannot tabulate a map on an infinite ring")
        return {k: self(k) for k in self.source.elements}

    def is_bijective(self) -> bool:
        t = self.tabulate()
        return sorted(t.values()) == sorted(self.source.elements)

    def inverse(self) -> "RingMap":
        if not self.source.is_finite:
            if self.name == "id":
                return self
            raise RingError("inverse of a map on Z is only known for the identity")
        t = self.tabulate()
        if not self.is_bijective():
            raise RingError(f"ring map {self.name} is not bijective")
        inv = {v: k for k, v in t.items()}
        # both named maps are involutions
        name = self.name if self.name in ("id", "frobenius") else f"{self.name}^-1"
        return RingMap(self.target, self.source, name, table=inv)

    def __eq__(self, other):
        if not isinstance(other, RingMap) or other.source != self.source:
            return NotImplemented
        if self.source.is_finite:
            return self.tabulate() == other.tabulate()
        return self.name == other.name

    def __hash__(self):
        if self.source.is_finite:
            return hash(tuple(sorted(self.tabulate().items())))
        return hash(self.name)

    def to_json(self):
        if self.name in ("id", "frobenius"):
            return self.name
        return {self.source.label(k): self.target.label(v) for k, v in self.tabulate().items()}


def identity_map(ring: Ring) -> RingMap:
    return RingMap(ring, ring, "id", func=lambda k: k)


def frobenius(ring: Ring) -> RingMap:
    if not isinstance(ring, GF4):
        raise RingError("frobenius is only provided for GF4")
    return RingMap(ring, ring, "frobenius", table={k: ring.mul(k, k) for k in ring.elements})


def make_ring_map(ring: Ring, descriptor) -> RingMap:
    if descriptor == "id":
        return identity_map(ring)
    if descriptor == "frobenius":
        return frobenius(ring)
    if isinstance(descriptor, dict):
        if not ring.is_finite:
            raise RingError("explicit tables need a finite ring")
        table = {ring.parse(k): ring.parse(v) for k, v in descriptor.items()}
        return RingMap(ring, ring, "table", table=table)
    raise RingError(f"unknown ring map descriptor {descriptor!r}")


def ring_automorphisms(ring: Ring) -> List[RingMap]:
    """All ring automorphisms of a finite ring, by brute force over permutations."""
    from itertools import permutations

    els = ring.elements
    if els is None:
        return [identity_map(ring)]
    found = []
    for perm in permutations(els):
        t = dict(zip(els, perm))
        if t[ring.one] != ring.one:
            continue
        if all(t[ring.add(a, b)] == ring.add(t[a], t[b]) and t[ring.mul(a, b)] == ring.mul(t[a], t[b])
               for a in els for b in els):
            name = "id" if all(k == v for k, v in t.items()) else (
                "frobenius" if isinstance(ring, GF4) else "table")
            found.append(RingMap(ring, ring, name, table=t))
    return found


@dataclass
class LawReport:
    ring: str
    alpha: str
    scale: str
    pairs_tested: int
    violations: Dict[str, list]

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def holds(self, law: str) -> bool:
        return not self.violations[law]

    def to_dict(self):
        return {
            "ring": self.ring,
            "alpha": self.alpha,
            "scale": self.scale,
            "pairs_tested": self.pairs_tested,
            "ok": self.ok,
            "violations": self.violations,
        }


def ring_map_laws(ring: Ring, alpha: RingMap, scale: int,
                  window: Optional[Sequence[int]] = None) -> LawReport:
    """Check the r-weighted homomorphism laws for ``alpha`` with weight ``scale``::

        r*alpha(k1*k2) == r*(alpha(k1)*alpha(k2))
        r*alpha(k1+k2) == r*alpha(k1) + r*alpha(k2)
        r*alpha(1)     == r
    """
    els = ring.elements if ring.is_finite else window
    if els is None:
        raise RingError("the integer ring needs an explicit test window")
    r = scale
    mul, add, lab = ring.mul, ring.add, ring.label
    bad = {"multiplicative": [], "additive": [], "unital": []}
    n = 0
    for k1 in els:
        for k2 in els:
            n += 1
            if mul(r, alpha(mul(k1, k2))) != mul(r, mul(alpha(k1), alpha(k2))):
                bad["multiplicative"].append([lab(k1), lab(k2)])
            if mul(r, alpha(add(k1, k2))) != add(mul(r, alpha(k1)), mul(r, alpha(k2))):
                bad["additive"].append([lab(k1), lab(k2)])
    if mul(r, alpha(ring.one)) != r:
        bad["unital"].append([lab(ring.one)])
    return LawReport(ring.descriptor, alpha.name, lab(r), n, bad)
