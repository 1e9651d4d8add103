from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freecat.terms import (App, OpSymbol, ParseError, Signature, TermError, UnboundVariable, Var,
                           format_term, parse_term, substitute, term_depth, term_vars)

M = OpSymbol("m", 2)
N = OpSymbol("n", 1)
SIG = Signature([M, N])


def terms(depth):
    leaves = st.integers(0, 3).map(Var)
    if depth == 0:
        return leaves
    sub = terms(depth - 1)
    return st.one_of(leaves,
                     st.tuples(sub, sub).map(lambda ab: App(M, ab)),
                     sub.map(lambda a: App(N, (a,))))


def all_terms(depth, nvars=2):
    """Every term over m, n and x1..x_nvars up to the given depth."""
    out = [Var(i) for i in range(1, nvars + 1)]
    for _ in range(depth):
        prev = list(out)
        out = prev + [App(N, (a,)) for a in prev] + [App(M, (a, b)) for a, b in product(prev, prev)]
        out = list(dict.fromkeys(out))
    return out


def test_parse_variable():
    assert parse_term("x0", SIG) == Var(0)


def test_parse_application():
    assert parse_term("m(x1,x2)", SIG) == App(M, (Var(1), Var(2)))


def test_parse_nested_round_trip():
    t = parse_term("m(x1,m(x2,x1))", SIG)
    assert term_depth(t) == 2
    assert format_term(t) == "m(x1,m(x2,x1))"


def test_parse_tolerates_spaces():
    assert parse_term(" m( x1 , n(x2) ) ", SIG) == App(M, (Var(1), App(N, (Var(2),))))


@pytest.mark.parametrize("text", ["m(x1)", "m(x1,x2,x3)", "q(x1)", "m(x1,", "x1)", "", "m x1"])
def test_parse_errors(text):
    with pytest.raises(TermError):
        parse_term(text, SIG)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as e:
        parse_term("m(x1,?)", SIG)
    assert e.value.pos == 5


def test_nullary_symbols():
    sig = Signature([M, OpSymbol("e", 0)])
    assert parse_term("m(e,x1)", sig) == parse_term("m(e(),x1)", sig)
    assert format_term(parse_term("e", sig)) == "e"


def test_signature_rejects_duplicates():
    with pytest.raises(TermError):
        Signature([M, OpSymbol("m", 1)])
    assert SIG.max_arity == 2
    assert Signature([]).max_arity == 0


def test_app_checks_arity():
    with pytest.raises(TermError):
        App(M, (Var(1),))


def test_substitute_examples():
    assert substitute(Var(1), {1: Var(2)}) == Var(2)
    swapped = substitute(App(M, (Var(1), Var(2))), {1: Var(2), 2: Var(1)})
    assert swapped == App(M, (Var(2), Var(1)))


def test_substitute_unbound():
    with pytest.raises(UnboundVariable):
        substitute(App(M, (Var(1), Var(2))), {1: Var(1)})


def test_substitute_ignores_extra_bindings():
    assert substitute(Var(1), {1: Var(3), 7: Var(0)}) == Var(3)


def test_term_vars_examples():
    assert term_vars(Var(0)) == {0}
    assert term_vars(App(M, (Var(1), Var(2)))) == {1, 2}
    assert term_vars(App(M, (Var(1), App(M, (Var(1), Var(1)))))) == {1}


@pytest.mark.parametrize("t", all_terms(2))
def test_identity_substitution_exhaustive(t):
    assert substitute(t, {i: Var(i) for i in term_vars(t)}) == t


def test_substitution_composes_exhaustively():
    envs1 = [{1: a, 2: b} for a, b in product(all_terms(1), repeat=2)][:40]
    env2 = {1: App(N, (Var(2),)), 2: App(M, (Var(1), Var(1)))}
    for t in all_terms(2):
        for e1 in envs1:
            composed = {k: substitute(v, env2) for k, v in e1.items()}
            assert substitute(substitute(t, e1), env2) == substitute(t, composed)


@settings(max_examples=200)
@given(terms(5), terms(2), terms(2), terms(2), terms(2))
def test_substitution_composes(t, a0, a1, a2, a3):
    e1 = {0: a0, 1: a1, 2: a2, 3: a3}
    e2 = {i: App(N, (Var((i + 1) % 4),)) for i in range(4)}
    composed = {k: substitute(v, e2) for k, v in e1.items()}
    assert substitute(substitute(t, e1), e2) == substitute(t, composed)


@settings(max_examples=300)
@given(terms(5))
def test_parse_print_round_trip(t):
    text = format_term(t)
    assert " " not in text
    assert parse_term(text, SIG) == t


@given(terms(4))
def test_vars_of_substitution(t):
    env = {i: App(M, (Var(i + 10), Var(20))) for i in range(4)}
    s = substitute(t, env)
    assert term_vars(s) == {20} | {i + 10 for i in term_vars(t)}
