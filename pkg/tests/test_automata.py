from itertools import product

import pytest
from hypothesis import given, strategies as st

from quasiminimal.automata import (
    EVEN_SHIFT, GOLDEN_MEAN, NotAperiodic, Nfa, build_elementary_pt, build_local, build_renewal,
    compile_regex, modular_renewal, parse_regex, syntactic_monoid, word_relation,
)
from quasiminimal.errors import AlphabetError, ParseError
from quasiminimal.words import Alphabet, contains

AB = Alphabet.from_glyphs("ab")
BIN = Alphabet.from_glyphs("01")


def words_upto(alphabet, n):
    for k in range(n + 1):
        yield from product(tuple(alphabet), repeat=k)


def test_regex_basics():
    nfa = compile_regex("a*ba*", AB)
    assert nfa.accepts(AB.parse("aaba"))
    assert nfa.accepts(AB.parse("b"))
    assert not nfa.accepts(AB.parse("abab"))
    assert not nfa.accepts(())


def test_empty_pattern_and_empty_word():
    assert compile_regex("", AB).is_empty()
    eps = compile_regex("()", AB)
    assert eps.accepts(()) and not eps.accepts(AB.parse("a"))


@pytest.mark.parametrize("text", ["(a", "a)", "*a", "c", "a("])
def test_regex_parse_errors(text):
    with pytest.raises(ParseError):
        parse_regex(text, AB)


def test_golden_mean_complement():
    nfa = compile_regex(GOLDEN_MEAN, BIN)
    for w in words_upto(BIN, 6):
        assert nfa.accepts(w) == (not contains(w, (1, 1)))


def test_even_shift_pattern():
    nfa = compile_regex(EVEN_SHIFT, BIN)
    assert nfa.accepts(BIN.parse("1001"))
    assert not nfa.accepts(BIN.parse("10"))


def test_boolean_operations_agree_with_membership():
    x = compile_regex("a*b", AB)
    y = compile_regex("(a+b)*bb", AB)
    both, either = x.intersection(y), x.union(y)
    for w in words_upto(AB, 5):
        assert both.accepts(w) == (x.accepts(w) and y.accepts(w))
        assert either.accepts(w) == (x.accepts(w) or y.accepts(w))
        assert x.complement().accepts(w) == (not x.accepts(w))


def test_operations_need_same_alphabet():
    with pytest.raises(AlphabetError):
        compile_regex("a", AB).intersection(compile_regex("0", Alphabet.range(3)))


def test_minimize_is_deterministic_and_equivalent():
    nfa = compile_regex("(a+b)*a(a+b)", AB)
    m = nfa.minimize()
    assert m.is_deterministic()
    assert m.n_states == 4
    for w in words_upto(AB, 6):
        assert m.accepts(w) == nfa.accepts(w)


def test_factor_closure():
    nfa = compile_regex("bb", AB).factor_closure()
    for w in words_upto(AB, 5):
        assert nfa.accepts(w) == contains(w, (1, 1))


def test_elementary_piecewise_testable():
    nfa = build_elementary_pt(AB, AB.parse("ab"))
    assert nfa.accepts(AB.parse("abbb"))
    assert nfa.accepts(AB.parse("aab"))
    assert not nfa.accepts(AB.parse("bab"))


def test_local_language():
    nfa = build_local(BIN, (0,), (0,), [(1, 1)])
    assert nfa.accepts(BIN.parse("01010"))
    assert not nfa.accepts(BIN.parse("0110"))
    assert not nfa.accepts(BIN.parse("10"))
    with pytest.raises(ValueError):
        build_local(BIN, (0,), (0,), [(1,)])


def test_renewal_language():
    nfa = build_renewal(AB, AB.parse("a"), AB.parse("b"), [AB.parse("ab"), AB.parse("b")])
    assert nfa.accepts(AB.parse("ab"))
    assert nfa.accepts(AB.parse("aabbb"))
    assert not nfa.accepts(AB.parse("aa"))


def test_modular_renewal_counts_residue():
    A = Alphabet.range(3)
    nfa = modular_renewal(A, 0, 1, 2, 1, 3)
    assert nfa.accepts((0, 2, 1))
    assert nfa.accepts((0,) + (2,) * 4 + (1,))
    assert not nfa.accepts((0, 2, 2, 1))


@given(st.lists(st.sampled_from([0, 1]), max_size=8), st.lists(st.sampled_from([0, 1]), max_size=8))
def test_word_relation_is_a_monoid_morphism(u, v):
    nfa = compile_regex("(0+11)*", BIN)
    assert word_relation(nfa, tuple(u) + tuple(v)) == word_relation(nfa, u).compose(word_relation(nfa, v))


def test_idempotent_exponent_of_a_star_b_a_star():
    assert syntactic_monoid(compile_regex("a*ba*", AB)).idempotent_exponent() == 2


def test_even_length_language_is_not_aperiodic():
    A = Alphabet.from_glyphs("a")
    res = syntactic_monoid(compile_regex("(aa)*", A)).idempotent_exponent()
    assert isinstance(res, NotAperiodic)
    assert res.period == 2
    assert res.witness == (0,)


def test_nfa_rejects_undeclared_transitions():
    with pytest.raises(ValueError):
        Nfa(AB, 1, {(0, 0): {3}}, {0}, {0})
