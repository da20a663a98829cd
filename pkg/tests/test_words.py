import pytest
from hypothesis import given, strategies as st

from quasiminimal.errors import AlphabetError, ParseError
from quasiminimal.words import (
    Alphabet, ClopenSet, EventuallyPeriodicPoint, Progression, SemilinearSet, ep_shift, factors, find_all,
    format_point, glyphs, language_n, occurrences, parse_point,
)

small_words = st.lists(st.integers(0, 2), min_size=1, max_size=4).map(tuple)
points = st.builds(EventuallyPeriodicPoint, small_words, st.lists(st.integers(0, 2), max_size=5).map(tuple),
                   small_words, st.integers(-4, 4))


def test_alphabet_from_digit_glyphs_keeps_values():
    a = Alphabet.from_glyphs("2 0 2")
    assert a.letters == (0, 2)
    assert a.parse("202") == (2, 0, 2)
    assert a.format((0, 2)) == "02"


def test_alphabet_from_other_glyphs_numbers_in_order():
    a = Alphabet.from_glyphs("ba")
    assert a.letters == (0, 1)
    assert a.letter("b") == 0
    with pytest.raises(AlphabetError):
        a.letter("c")


def test_decimal_alphabet_reads_integers():
    a = Alphabet.range(12)
    assert a.parse("10 0 11") == (10, 0, 11)
    assert a.format((10, 0)) == "10 0"
    assert glyphs((10, 0)) == "10 0"


@pytest.mark.parametrize("letters,names", [((), None), ((1, 0), None), ((0, 1), ("a",)), ((0, 1), ("a", "a"))])
def test_alphabet_rejects_bad_declarations(letters, names):
    with pytest.raises(AlphabetError):
        Alphabet(letters, names)


def test_factors_and_find_all():
    assert factors((0, 1, 0, 1), 2) == {(0, 1), (1, 0)}
    assert find_all((0, 0, 0), (0, 0)) == [0, 1]


def test_progression_first_after():
    assert Progression(3, 4).first_after(3) == 7
    assert Progression(3, 4).first_after(-10) == 3
    assert Progression(-1, -2).first_after(-4) == -3
    assert Progression(-1, -2).first_after(-1) is None
    assert Progression(5).first_after(4) == 5


def test_semilinear_set_merges_singleton_into_progression():
    s = SemilinearSet((Progression(1), Progression(3, 2)))
    assert s.progressions == (Progression(1, 2),)
    assert s.infimum() == 1


def test_canonical_point_absorbs_center_into_tails():
    p = EventuallyPeriodicPoint((0,), (0, 1, 0), (0,), 0).canonical()
    assert p.center == (1,)
    assert p.origin_offset == 1
    assert p.window(-2, 4) == (0, 0, 0, 1, 0, 0)


def test_periodic_point_detection():
    assert EventuallyPeriodicPoint((0, 1), (0, 1), (0, 1)).is_periodic
    assert not EventuallyPeriodicPoint((0,), (1,), (0,)).is_periodic


@given(points, st.integers(-6, 6))
def test_canonical_form_keeps_every_coordinate(p, i):
    assert p.canonical().letter_at(i) == p.letter_at(i)


@given(points, st.integers(-5, 5))
def test_shift_moves_coordinates(p, k):
    q = ep_shift(p, k)
    assert all(q.letter_at(i) == p.letter_at(i + k) for i in range(-8, 8))
    assert q.same_orbit(p)


@given(points, small_words)
def test_occurrences_match_window_scan(p, u):
    lo, hi = p.span(pad=10)
    brute = {lo + k for k in find_all(p.window(lo, hi), u)}
    assert set(occurrences(p, u).elements_in(lo, hi - len(u) + 1)) == brute


def test_occurrences_in_sunny_point():
    p = EventuallyPeriodicPoint((0,), (1,), (0,), 0)
    occ = occurrences(p, (0, 1))
    assert occ.progressions == (Progression(-1),)
    assert 5 in occurrences(p, (0,))
    assert -5 in occurrences(p, (0,))


def test_language_n_includes_limit_words():
    p = EventuallyPeriodicPoint((0,), (1,), (0,), 0)
    assert language_n([p], 3) == {(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)}


def test_clopen_set_requires_equal_width():
    assert ClopenSet.of((0, 1), (1, 1)).width == 2
    with pytest.raises(ValueError):
        ClopenSet.of((0,), (0, 1))


def test_parse_and_format_point():
    p = parse_point("INF(0) 1 . 2 INF(3)")
    assert p.window(-2, 3) == (0, 1, 2, 3, 3)
    assert parse_point(format_point(p)).window(-6, 6) == p.window(-6, 6)


@pytest.mark.parametrize("text", ["0 1 INF(2)", "INF() 1 INF(0)", "INF(0) 1 . . 2 INF(0)", "INF(0) x INF(0)"])
def test_parse_point_rejects(text):
    with pytest.raises(ParseError):
        parse_point(text)
