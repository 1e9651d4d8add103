"""Signatures, terms and substitution.

Concrete syntax::

    term := var | opname '(' term {',' term} ')' | opname
    var  := 'x' digits

A nullary symbol may be written either bare (``e``) or with empty
parentheses (``e()``); the printer always emits the bare form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Union


class TermError(ValueError):
    pass


class ParseError(TermError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnboundVariable(TermError):
    pass


@dataclass(frozen=True)
class OpSymbol:
    name: str
    arity: int

    def __post_init__(self):
        if not self.name:
            raise TermError("operation name must be nonempty")
        if self.arity < 0:
            raise TermError(f"negative arity for {self.name}")

    def __str__(self):
        return self.name


class Signature:
    """An ordered set of operation symbols.

    ``resolver`` lets a signature carry an infinite symbol family (the
    integer scalings of a Z-module): names not in ``ops`` are handed to it
    and it returns a symbol or None.
    """

    def __init__(self, ops: Iterable[OpSymbol],
                 resolver: Optional[Callable[[str], Optional[OpSymbol]]] = None):
        self.ops = tuple(ops)
        self._by_name = {}
        for op in self.ops:
            if op.name in self._by_name:
                raise TermError(f"duplicate operation name {op.name!r}")
            self._by_name[op.name] = op
        self._resolver = resolver

    @property
    def max_arity(self) -> int:
        return max((op.arity for op in self.ops), default=0)

    def get(self, name: str) -> Optional[OpSymbol]:
        op = self._by_name.get(name)
        if op is None and self._resolver is not None:
            op = self._resolver(name)
        return op

    def __getitem__(self, name: str) -> OpSymbol:
        op = self.get(name)
        if op is None:
            raise TermError(f"unknown operation symbol {name!r}")
        return op

    def __contains__(self, name: str) -> bool:
        return self.get(name) is not None

    def __repr__(self):
        return "Signature(%s)" % ", ".join(f"{o.name}/{o.arity}" for o in self.ops)


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise TermError("variable index must be non-negative")

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class App:
    op: OpSymbol
    args: tuple = ()

    def __post_init__(self):
        if len(self.args) != self.op.arity:
            raise TermError(
                f"{self.op.name} expects {self.op.arity} arguments, got {len(self.args)}")

    def __str__(self):
        return format_term(self)


Term = Union[Var, App]

X0 = Var(0)


def app(op: OpSymbol, *args: Term) -> App:
    return App(op, tuple(args))


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return str(t)
    if not t.args:
        return t.op.name
    return t.op.name + "(" + ",".join(format_term(a) for a in t.args) + ")"


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_+\-]*)|(?P<punct>[(),]))")
_VAR = re.compile(r"x(\d+)$")


def parse_term(text: str, sig: Signature) -> Term:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = "name" if m.group("name") else "punct"
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))

    i = 0

    def peek():
        return tokens[i]

    def expect(value):
        nonlocal i
        kind, tok, at = tokens[i]
        if tok != value or kind == "end":
            raise ParseError(f"expected {value!r}, found {tok or 'end of input'!r}", at)
        i += 1

    def term() -> Term:
        nonlocal i
        kind, tok, at = tokens[i]
        if kind != "name":
            raise ParseError(f"expected a term, found {tok or 'end of input'!r}", at)
        i += 1
        vm = _VAR.match(tok)
        if vm and tok not in sig:
            if peek()[1] == "(":
                raise ParseError(f"variable {tok} cannot be applied", peek()[2])
            return Var(int(vm.group(1)))
        op = sig.get(tok)
        if op is None:
            raise ParseError(f"unknown symbol {tok!r}", at)
        args = []
        if peek()[1] == "(":
            i += 1
            if peek()[1] == ")" and op.arity == 0:
                i += 1
            else:
                args.append(term())
                while peek()[1] == ",":
                    i += 1
                    args.append(term())
                expect(")")
        if len(args) != op.arity:
            raise ParseError(
                f"arity mismatch: {op.name} takes {op.arity} arguments, got {len(args)}", at)
        return App(op, tuple(args))

    result = term()
    kind, tok, at = tokens[i]
    if kind != "end":
        raise ParseError(f"trailing input {tok!r}", at)
    return result


def substitute(t: Term, env: Mapping[int, Term]) -> Term:
    """Simultaneous substitution of ``env[i]`` for ``x<i>``."""
    if isinstance(t, Var):
        try:
            return env[t.index]
        except KeyError:
            raise UnboundVariable(f"variable {t} not bound") from None
    return App(t.op, tuple(substitute(a, env) for a in t.args))


def term_vars(t: Term) -> frozenset:
    out = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            out.add(s.index)
        else:
            stack.extend(s.args)
    return frozenset(out)


def term_depth(t: Term) -> int:
    if isinstance(t, Var):
        return 0
    return 1 + max((term_depth(a) for a in t.args), default=0)
