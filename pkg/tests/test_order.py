import pytest

from quasiminimal.errors import NotInLanguage, UnresolvedRepresentative
from quasiminimal.order import (
    LanguageOracle, Proven, Unknown, generator_check, halting_with_tables, leq_semidecide, sft_approx_words,
    tables_from_templates, verify_bound,
)
from quasiminimal.substitution import named
from quasiminimal.words import Alphabet, EventuallyPeriodicPoint


@pytest.fixture
def sunny_oracle(sunny):
    return LanguageOracle.from_templates(sunny, "sunny")


@pytest.fixture
def golden_mean():
    return LanguageOracle.from_forbidden(Alphabet.range(2), [(1, 1)], "golden-mean")


def test_oracle_memoizes(sunny_oracle):
    assert sunny_oracle.words(2) is sunny_oracle.words(2)
    assert sunny_oracle.contains((0, 1, 0))
    assert not sunny_oracle.contains((1, 0, 1))
    assert sunny_oracle.letters() == (0, 1)


def test_sft_language(golden_mean):
    assert golden_mean.words(3) == {(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 0, 1)}


def test_sft_drops_words_that_cannot_extend():
    oracle = LanguageOracle.from_forbidden(Alphabet.range(2), [(1, 0)], "sft")
    assert (0, 1) in oracle.words(2)
    oracle = LanguageOracle.from_forbidden(Alphabet.range(2), [(1, 0), (0, 1)], "sft")
    assert oracle.words(2) == {(0, 0), (1, 1)}


def test_sft_approximation_contains_the_language(sunny_oracle):
    approx = sft_approx_words(sunny_oracle, 2, 5)
    assert sunny_oracle.words(5) <= approx
    with pytest.raises(ValueError):
        sft_approx_words(sunny_oracle, 3, 2)


def test_leq_in_sunny(sunny_oracle):
    res = leq_semidecide(sunny_oracle, (0, 1), (1,))
    assert isinstance(res, Proven)
    assert res.bound.h == 1
    assert verify_bound(sunny_oracle, res.bound)


def test_leq_fails_for_the_fixed_point(sunny_oracle):
    res = leq_semidecide(sunny_oracle, (1,), (0, 0), budget=5)
    assert isinstance(res, Unknown)
    assert res.budget == 5


def test_leq_rejects_words_outside_the_language(sunny_oracle):
    with pytest.raises(NotInLanguage):
        leq_semidecide(sunny_oracle, (1, 1), (1,))


def test_every_word_is_below_itself(golden_mean):
    res = leq_semidecide(golden_mean, (0, 1), (0, 1), budget=2)
    assert isinstance(res, Proven)
    assert res.bound.h == 0


def test_generator_in_golden_mean(golden_mean):
    assert isinstance(generator_check(golden_mean, (0, 1), 2, budget=4), Unknown)


def test_generator_in_fibonacci():
    oracle = LanguageOracle.from_substitution(named("fibonacci"), 12)
    res = generator_check(oracle, (1, 2, 1), 2, budget=6)
    assert isinstance(res, Proven)
    assert set(res.bound) == oracle.words(2)


def test_lookup_tables_for_sunny(sunny):
    words = [(0,), (1,), (0, 1), (0, 0)]
    tables, oracle = tables_from_templates(sunny, words)
    assert tables.resolve((0, 1)) == tables.resolve((1,))
    assert tables.resolve((0,)) == tables.resolve((0, 0))
    assert tables.resolve((0,)) != tables.resolve((1,))
    i, j = tables.resolve((1,)), tables.resolve((0,))
    assert bool(tables.H[i, j])
    assert halting_with_tables(tables, oracle, (1,), (0,))
    with pytest.raises(UnresolvedRepresentative):
        tables.resolve((1, 0, 0, 0))


def test_lookup_tables_need_exponent_free_systems(stairs):
    with pytest.raises(ValueError):
        tables_from_templates(stairs, [(0,)])


def test_from_points():
    p = EventuallyPeriodicPoint((0,), (1, 1), (0,))
    oracle = LanguageOracle.from_points([p])
    assert oracle.contains((1, 1))
    assert oracle.letters() == (0, 1)
    assert oracle.words(2) == {(0, 0), (0, 1), (1, 1), (1, 0)}
