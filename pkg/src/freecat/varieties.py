"""Varieties with decidable normal forms: semigroups, monoids, R-modules.

Elements are canonical, hashable values:

* SEM / MON: a word, i.e. a tuple of generator indices (``()`` only in MON);
* MOD(R): a linear combination, a tuple of ``(index, coeff)`` pairs sorted
  by index with no zero coefficients (``()`` is the zero vector).

Two elements are equal iff their tuples are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Mapping, Optional, Sequence

from .rings import Ring, make_ring
from .terms import App, OpSymbol, Signature, Term, TermError, Var, format_term, term_vars

SEM = "SEM"
MON = "MON"
MOD = "MOD"

Element = tuple


class VarietyError(ValueError):
    pass


@dataclass(frozen=True)
class VarietySpec:
    kind: str
    ring: Optional[Ring] = None

    def __post_init__(self):
        if self.kind not in (SEM, MON, MOD):
            raise VarietyError(f"unknown variety kind {self.kind!r}")
        if (self.kind == MOD) != (self.ring is not None):
            raise VarietyError("a ring is required exactly for MOD")

    @property
    def is_word(self) -> bool:
        return self.kind in (SEM, MON)

    @property
    def is_finite_module(self) -> bool:
        return self.kind == MOD and self.ring.is_finite

    @cached_property
    def signature(self) -> Signature:
        if self.kind == SEM:
            return Signature([OpSymbol("m", 2)])
        if self.kind == MON:
            return Signature([OpSymbol("m", 2), OpSymbol("e", 0)])
        ring = self.ring
        base = [OpSymbol("add", 2), OpSymbol("zero", 0)]
        if ring.is_finite:
            return Signature(base + [OpSymbol(f"scale_{ring.token(k)}", 1) for k in ring.elements])

        def resolve(name):
            if name.startswith("scale_"):
                try:
                    int(name[6:])
                except ValueError:
                    return None
                return OpSymbol(name, 1)
            return None

        return Signature(base + [OpSymbol(f"scale_{k}", 1) for k in (0, 1, -1)], resolve)

    def scale_op(self, k: int) -> OpSymbol:
        return self.signature[f"scale_{self.ring.token(k)}"]

    def scalar_of(self, op: OpSymbol) -> int:
        if not op.name.startswith("scale_"):
            raise VarietyError(f"{op.name} is not a scaling")
        return self.ring.parse(op.name[6:])

    def describe(self) -> str:
        return f"MOD({self.ring.descriptor})" if self.kind == MOD else self.kind

    def to_json(self):
        if self.kind == MOD:
            return {"kind": MOD, "ring": self.ring.descriptor}
        return {"kind": self.kind}


def make_variety(desc) -> VarietySpec:
    """Accepts ``"SEM"``, ``"MON"``, ``"MOD(GF4)"`` or the JSON object form."""
    if isinstance(desc, VarietySpec):
        return desc
    if isinstance(desc, dict):
        kind = desc.get("kind")
        if kind == MOD:
            return VarietySpec(MOD, make_ring(desc["ring"]))
        return VarietySpec(kind)
    s = str(desc).strip()
    if s.startswith("MOD(") and s.endswith(")"):
        return VarietySpec(MOD, make_ring(s[4:-1]))
    return VarietySpec(s)


# -- linear combinations ----------------------------------------------------

def lincomb(ring: Ring, coeffs: Mapping[int, int]) -> Element:
    return tuple(sorted((i, c) for i, c in coeffs.items() if c != ring.zero))


def lc_add(ring: Ring, a: Element, b: Element) -> Element:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for i, c in b:
        d[i] = ring.add(d.get(i, ring.zero), c)
    return lincomb(ring, d)


def lc_scale(ring: Ring, k: int, a: Element) -> Element:
    return tuple((i, p) for i, c in a if (p := ring.mul(k, c)) != ring.zero)


def lc_vector(a: Element, rank: int, zero: int = 0) -> list:
    d = dict(a)
    return [d.get(i, zero) for i in range(1, rank + 1)]


# -- operations -------------------------------------------------------------

def eval_op(v: VarietySpec, op: OpSymbol, args: Sequence[Element]) -> Element:
    if len(args) != op.arity:
        raise VarietyError(f"{op.name} expects {op.arity} arguments, got {len(args)}")
    name = op.name
    if v.is_word:
        if name == "m":
            return args[0] + args[1]
        if name == "e" and v.kind == MON:
            return ()
    else:
        if name == "add":
            return lc_add(v.ring, args[0], args[1])
        if name == "zero":
            return ()
        if name.startswith("scale_"):
            return lc_scale(v.ring, v.scalar_of(op), args[0])
    raise VarietyError(f"{name} is not an operation of {v.describe()}")


def evaluate(v: VarietySpec, t: Term, env: Mapping[int, Element],
             op_eval: Optional[Callable[[OpSymbol, list], Element]] = None) -> Element:
    """Value of ``t`` with variables read from ``env``.

    ``op_eval`` replaces the variety's own operations, which is how terms are
    evaluated in transported structures.
    """
    if op_eval is None:
        def op_eval(op, args):
            return eval_op(v, op, args)

    def go(s):
        if isinstance(s, Var):
            try:
                return env[s.index]
            except KeyError:
                raise TermError(f"variable {s} not bound") from None
        return op_eval(s.op, [go(a) for a in s.args])

    return go(t)


def generator(v: VarietySpec, i: int) -> Element:
    if v.is_word:
        return (i,)
    return ((i, v.ring.one),)


def normalize(v: VarietySpec, t: Term, rank: int) -> Element:
    """Canonical element of the rank-``rank`` free algebra denoted by ``t``.

    In rank 1, ``x0`` and ``x1`` both name the single generator.
    """
    env = {i: generator(v, i) for i in range(1, rank + 1)}
    if rank == 1:
        env[0] = generator(v, 1)
    bad = [i for i in term_vars(t) if i not in env]
    if bad:
        raise VarietyError(f"variables x{min(bad)} out of range for rank {rank}")
    return evaluate(v, t, env)


def element_to_term(v: VarietySpec, a: Element, monogenic: bool = False) -> Term:
    """Reinject an element as a term; ``monogenic`` writes the generator as x0."""

    def var(i):
        return Var(0 if monogenic else i)

    sig = v.signature
    if v.is_word:
        if not a:
            if v.kind != MON:
                raise VarietyError("the empty word is not a semigroup element")
            return App(sig["e"], ())
        t = var(a[-1])
        for i in reversed(a[:-1]):
            t = App(sig["m"], (var(i), t))
        return t
    if not a:
        return App(sig["zero"], ())
    ring = v.ring
    parts = [var(i) if c == ring.one else App(v.scale_op(c), (var(i),)) for i, c in a]
    t = parts[-1]
    for p in reversed(parts[:-1]):
        t = App(sig["add"], (p, t))
    return t


def substitute_element(v: VarietySpec, a: Element, images: Sequence[Element]) -> Element:
    """Image of ``a`` under the homomorphism sending generator i to images[i-1]."""
    if v.is_word:
        out = ()
        for i in a:
            out += images[i - 1]
        return out
    ring = v.ring
    acc: Dict[int, int] = {}
    for i, c in a:
        for j, d in images[i - 1]:
            acc[j] = ring.add(acc.get(j, ring.zero), ring.mul(c, d))
    return lincomb(ring, acc)


def is_element(v: VarietySpec, a, rank: int) -> bool:
    if not isinstance(a, tuple):
        return False
    if v.is_word:
        if v.kind == SEM and not a:
            return False
        return all(isinstance(i, int) and 1 <= i <= rank for i in a)
    ring = v.ring
    prev = 0
    for pair in a:
        if not (isinstance(pair, tuple) and len(pair) == 2):
            return False
        i, c = pair
        if not (isinstance(i, int) and prev < i <= rank) or c == ring.zero or not ring.contains(c):
            return False
        prev = i
    return True


def element_size(v: VarietySpec, a: Element) -> int:
    if v.is_word:
        return len(a)
    return max((abs(c) for _, c in a), default=0) if not v.ring.is_finite else 0


def format_element(v: VarietySpec, a: Element) -> str:
    if v.is_word:
        return "*".join(f"x{i}" for i in a) if a else "e"
    if not a:
        return "0"
    ring = v.ring
    out = []
    for i, c in a:
        if c == ring.one:
            out.append(f"x{i}")
        else:
            lab = ring.label(c)
            out.append(f"({lab})x{i}" if "+" in lab or lab.startswith("-") else f"{lab}x{i}")
    return "+".join(out)


def element_to_json(v: VarietySpec, a: Element, rank: int):
    if v.is_word:
        return list(a)
    return [v.ring.label(c) for c in lc_vector(a, rank, v.ring.zero)]


def element_from_json(v: VarietySpec, data, rank: int) -> Element:
    if v.is_word:
        a = tuple(int(i) for i in data)
    else:
        if isinstance(data, dict):
            coeffs = {int(k): v.ring.parse(c) for k, c in data.items()}
        else:
            if len(data) != rank:
                raise VarietyError(f"coefficient vector of length {len(data)} for rank {rank}")
            coeffs = {i + 1: v.ring.parse(c) for i, c in enumerate(data)}
        a = lincomb(v.ring, coeffs)
    if not is_element(v, a, rank):
        raise VarietyError(f"{data!r} is not an element of the rank-{rank} free algebra")
    return a


# -- derived structures -----------------------------------------------------

@dataclass
class DerivedStructure:
    """Operations of a variety reinterpreted by terms: op name -> term over x1..xk."""

    variety: VarietySpec
    table: Dict[str, Term] = field(default_factory=dict)

    def __post_init__(self):
        for name, t in self.table.items():
            op = self.variety.signature[name]
            extra = [i for i in term_vars(t) if not 1 <= i <= op.arity]
            if extra:
                raise VarietyError(f"table entry for {name} uses x{min(extra)} outside x1..x{op.arity}")

    def describe(self) -> dict:
        return {k: format_term(t) for k, t in self.table.items()}


def derived_eval(d: DerivedStructure, op: OpSymbol, args: Sequence[Element]) -> Element:
    if op.name not in d.table:
        raise VarietyError(f"no derived term for {op.name}")
    if len(args) != op.arity:
        raise VarietyError(f"{op.name} expects {op.arity} arguments, got {len(args)}")
    env = {i + 1: a for i, a in enumerate(args)}
    return evaluate(d.variety, d.table[op.name], env)
