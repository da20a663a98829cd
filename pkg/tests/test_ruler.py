import numpy as np
import pytest
from hypothesis import given, strategies as st

from quasiminimal.errors import NotAFactor
from quasiminimal.ruler import (
    deterministic_extension, extend, gaps_between, is_factor, maximal_word, positions, psi_segment, psi_window,
    ruler_value, ruler_window, singularity_threshold,
)
from quasiminimal.words import contains


def test_first_values():
    assert [ruler_value(i) for i in range(8)] == [0, 1, 0, 2, 0, 1, 0, 3]
    assert list(ruler_window(0, 8)) == [0, 1, 0, 2, 0, 1, 0, 3]
    with pytest.raises(ValueError):
        ruler_value(-1)


@given(st.integers(0, 10**6))
def test_window_matches_scalar(i):
    assert int(ruler_window(i, i + 1)[0]) == ruler_value(i)


@pytest.mark.parametrize("j", range(6))
def test_positions_are_the_level_sets(j):
    window = ruler_window(0, 2**10)
    assert set(np.flatnonzero(window == j).tolist()) == set(positions(j).elements_in(0, 2**10))


def test_maximal_word():
    assert "".join(map(str, maximal_word(3))) == "010201030102010"


def test_is_factor():
    assert is_factor((1, 0, 2))
    assert not is_factor((0, 0))
    assert not is_factor((1, 0, 1, 0, 1))
    assert is_factor(())


def test_deterministic_extension_centres_the_top_symbol():
    assert deterministic_extension((0, 2)) == maximal_word(2)
    with pytest.raises(NotAFactor):
        deterministic_extension((2, 2))


def test_extend_with_a_flank():
    u = extend((0, 1, 0), right=2)
    assert u == maximal_word(2)
    assert extend((1,)) == (0, 1, 0)


def test_psi_is_a_ruler_window():
    seg = psi_segment(-20, 21)
    word = tuple(int(a) for a in ruler_window(0, 2**8))
    assert contains(word, seg)
    assert len(psi_window(5)) == 11
    with pytest.raises(ValueError):
        psi_window(0)


def test_psi_segments_agree_on_overlap():
    assert psi_segment(-3, 4) == psi_segment(-10, 10)[7:14]


def test_singularity_threshold_and_gaps():
    assert gaps_between((0, 1, 0, 2, 0, 1, 0), 1) == [4]
    assert singularity_threshold(1, 64) == 1
    assert singularity_threshold(3, 64) == 2
