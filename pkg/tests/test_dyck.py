import pytest

from quasiminimal.dyck import (
    DYCK_ALPHABET, base_level, cfl_check, closer, dyck_levels, next_level, opener, pda_check, pda_run,
    top_invariant_holds,
)
from quasiminimal.errors import BudgetExceeded
from quasiminimal.oracle import HaltingOracle, HaltsAt


@pytest.fixture
def shifted():
    # machine 55 halts at once and 57 late; level i asks about machine 55 + i
    return HaltingOracle({55: HaltsAt(0), 57: HaltsAt(5)}, dovetail=lambda i: 55 + i)


def test_brackets():
    assert DYCK_ALPHABET.format([opener(s) for s in (1, 2, 3)]) == "([{"
    assert DYCK_ALPHABET.format([closer(s) for s in (3, 2, 1)]) == "}])"
    assert base_level().length == 1


def test_level_lengths_without_halting():
    levels = dyck_levels(HaltingOracle.never(), depth=2)
    assert [lv.length for lv in levels] == [1, 57, 57 * 57]
    assert not any(lv.halting for lv in levels)


def test_insertion_lengthens_the_level(shifted):
    lv = next_level(base_level(), shifted)
    assert lv.halting
    assert lv.length == 57 + 2 * 55 + 2
    assert DYCK_ALPHABET.format(lv.open(1)).startswith("{" + "(" * 55 + "[])")


@pytest.mark.parametrize("depth", [1, 2])
def test_level_words_are_balanced(depth):
    (*_, top) = dyck_levels(HaltingOracle.never(), depth=depth)
    for s in (1, 2, 3):
        run = pda_run(top.open(s))
        assert run.accepted and run.stack == (s,)
        run = pda_run(top.close(s))
        assert run.accepted and run.stack == ()


def test_pda_rejects_mismatch_and_skips_unmatched_closers():
    assert not pda_run(DYCK_ALPHABET.parse("(]")).accepted
    run = pda_run(DYCK_ALPHABET.parse(")"))
    assert run.accepted and run.stack == ()


def test_stack_pattern():
    w = DYCK_ALPHABET.parse("{((([]")
    assert pda_check(w, 3)
    assert not pda_check(w, 2)


def test_top_invariant():
    assert top_invariant_holds(DYCK_ALPHABET.parse("{}"))
    assert not top_invariant_holds(DYCK_ALPHABET.parse("()"))


def test_level_caps():
    with pytest.raises(BudgetExceeded):
        dyck_levels(HaltingOracle.never(), depth=4)
    with pytest.raises(BudgetExceeded):
        dyck_levels(HaltingOracle.never(), depth=2, cap=1000)


@pytest.mark.parametrize("j", [55, 56, 57, 58])
def test_cfl_reduction_agrees(shifted, j):
    check = cfl_check(shifted, dyck_levels(shifted, depth=2), j)
    assert check.agrees
    assert check.witness == (j == 55)


def test_short_patterns_are_rejected(shifted):
    with pytest.raises(ValueError):
        cfl_check(shifted, dyck_levels(shifted, depth=1), 54)
