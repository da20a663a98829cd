import pytest
from hypothesis import assume, given, settings, strategies as st

from quasiminimal.automata import compile_regex
from quasiminimal.errors import BudgetExceeded, ParseError
from quasiminimal.ruler import ruler_value
from quasiminimal.substitution import (
    Budget, NonSyndetic, Substitution, Syndetic, brute_force_subsystems, decide_language_intersection,
    decide_regular_intersection, format_substitution, gap_lengths, long_symbols, long_symbols_by_lengths, named,
    parse_substitution, quasiminimal_bound, subsystem_count_B, syndetic_long, xtau_factors,
)
from quasiminimal.words import Alphabet, contains


def test_parse_and_format_round_trip():
    tau = parse_substitution("# ruler gaps\n0 -> 00\n1 -> 1 0 1\n")
    assert tau.image == {0: (0, 0), 1: (1, 0, 1)}
    assert parse_substitution(format_substitution(tau)) == tau


@pytest.mark.parametrize("text", ["", "0 00", "01 -> 0", "0 -> 0\n0 -> 00", "0 -> 1"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_substitution(text)


def test_erasing_rules_are_rejected():
    with pytest.raises(ValueError):
        Substitution(Alphabet.range(2), {0: (0,), 1: ()})


def test_lengths_are_exact_integers():
    tau = named("fibonacci")
    assert [int(tau.lengths(n)[0]) for n in range(8)] == [1, 2, 3, 5, 8, 13, 21, 34]
    big = tau.lengths(200)[0]
    assert isinstance(big, int) and big > 2**128


def test_iterate_respects_the_length_cap():
    tau = named("ruler-gaps")
    assert tau.iterate(1, 2) == (1, 0, 1, 0, 0, 1, 0, 1)
    with pytest.raises(BudgetExceeded):
        tau.iterate(0, 30, cap=1000)


@pytest.mark.parametrize("n", range(1, 7))
def test_ruler_gaps_of_iterates(n):
    tau = named("ruler-gaps")
    gaps = gap_lengths(tau.iterate(1, n), 1)
    assert gaps == [2 ** ruler_value(i) for i in range(len(gaps))]


@pytest.mark.parametrize("name,expected", [
    ("ruler-gaps", {0, 1}),
    ("pumping", {1}),
    ("three-letter", {1, 2}),
    ("fibonacci", {1, 2}),
])
def test_long_symbols(name, expected):
    tau = named(name)
    assert long_symbols(tau) == expected
    assert long_symbols_by_lengths(tau) == expected


def test_long_letter_growing_every_other_step():
    # |tau^n(0)| = 1, 2, 2, 3, 3, ...
    tau = Substitution(Alphabet.range(4), {0: (1,), 1: (0, 2), 2: (2,), 3: (3,)})
    assert long_symbols(tau) == {0, 1}
    assert long_symbols_by_lengths(tau) == {0, 1}


@st.composite
def substitutions(draw):
    k = draw(st.integers(2, 4))
    image = {a: tuple(draw(st.lists(st.integers(0, k - 1), min_size=1, max_size=3))) for a in range(k)}
    return Substitution(Alphabet.range(k), image)


@given(substitutions())
@settings(max_examples=60, deadline=None)
def test_long_symbols_agree_with_growth(tau):
    assert long_symbols(tau) == long_symbols_by_lengths(tau)


def test_syndetic_when_every_letter_grows():
    res = syndetic_long(named("fibonacci"))
    assert isinstance(res, Syndetic)
    assert res.m == 1


def test_pumped_short_letters_are_not_syndetic():
    res = syndetic_long(named("pumping"))
    assert isinstance(res, NonSyndetic)
    assert res.letter == 1


def test_syndetic_with_bounded_short_runs():
    # 2 is short and always sits alone between long letters
    tau = Substitution(Alphabet.range(3), {0: (0, 2, 1), 1: (1, 2, 0), 2: (2,)})
    res = syndetic_long(tau)
    assert isinstance(res, Syndetic)
    assert res.max_run == 1
    word = tau.iterate(0, 5)
    assert not contains(word, (2,) * res.m)


def test_syndetic_budget():
    tau = Substitution(Alphabet.range(3), {0: (0, 2, 1), 1: (1, 2, 0), 2: (2,)})
    assert isinstance(syndetic_long(tau, cap=1), Budget)


@pytest.mark.parametrize("k,b", [(0, 1), (1, 2), (2, 7), (3, 80), (4, 4381), (5, 1069742)])
def test_subsystem_count(k, b):
    assert subsystem_count_B(k) == b


@pytest.mark.parametrize("k", [1, 2, 3])
def test_subsystem_count_matches_enumeration(k):
    assert len(brute_force_subsystems(k)) == subsystem_count_B(k)


def test_subsystem_languages_are_distinct_length_four_sets():
    records = brute_force_subsystems(2)
    assert all(len(w) == 4 for r in records for w in r.language)
    assert len({r.language for r in records}) == len(records) == 7
    both = next(r for r in records if len(r.J) == 2)
    assert (1, 1, 2, 2) in both.language and (2, 2, 1, 1) in both.language


def test_quasiminimal_bound():
    assert quasiminimal_bound(named("fibonacci"), 1) == 2**4


def test_regular_intersection_yes_with_witness():
    tau = named("ruler-gaps")
    nfa = compile_regex("1(0+1)*00(0+1)*", tau.alphabet)
    cert = decide_regular_intersection(tau, 1, nfa)
    assert cert.verdict
    assert nfa.accepts(tau.iterate(1, cert.n))
    assert not any(nfa.accepts(tau.iterate(1, m)) for m in range(cert.n))


def test_regular_intersection_no_with_period():
    tau = named("ruler-gaps")
    nfa = compile_regex("(0+1)*11(0+1)*", tau.alphabet)
    cert = decide_regular_intersection(tau, 1, nfa)
    assert not cert.verdict
    assert cert.p >= 1
    assert not any(nfa.accepts(tau.iterate(1, m)) for m in range(cert.t + cert.p + 2))


def test_regular_intersection_requires_same_alphabet():
    tau = named("fibonacci")
    with pytest.raises(ValueError):
        decide_regular_intersection(tau, 1, compile_regex("0", Alphabet.from_glyphs("01")))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([0, 1]), min_size=1, max_size=3),
       st.lists(st.sampled_from([0, 1]), min_size=1, max_size=3),
       st.sampled_from(["0*", "1(0+1)*", "(0+1)*11(0+1)*", "(00)*1", "(0+1)*010(0+1)*"]))
def test_regular_intersection_agrees_with_iteration(w0, w1, pattern):
    A = Alphabet.from_glyphs("01")
    tau = Substitution(A, {0: tuple(w0), 1: tuple(w1)})
    nfa = compile_regex(pattern, A)
    cert = decide_regular_intersection(tau, 1, nfa)
    assume(max(int(x) for x in tau.lengths(cert.t + cert.p)) <= 10**6)
    brute = any(nfa.accepts(tau.iterate(1, m, cap=10**6)) for m in range(cert.t + cert.p + 1))
    assert brute == cert.verdict


def test_language_intersection_uses_factors():
    tau = named("ruler-gaps")
    res = decide_language_intersection(tau, compile_regex("0000", tau.alphabet))
    assert res.nonempty
    assert contains(tau.iterate(res.letter, res.n), (0, 0, 0, 0))
    assert not decide_language_intersection(tau, compile_regex("11", tau.alphabet)).nonempty


def test_xtau_factors_of_fibonacci():
    words = xtau_factors(named("fibonacci"), 3, 10)
    assert len(words) == 4
    assert (2, 2, 1) not in words


def test_named_unknown():
    with pytest.raises(KeyError):
        named("nope")
