"""
Nested Dyck levels over three bracket pairs, with a deterministic pushdown
reader that watches for the stack pattern 3 1^k 2.

Letters 0..5 are the brackets [1 [2 [3 ]3 ]2 ]1, printed "([{}])". Level i+1
is built from level i:

    [s -> [3 u ]3 [s        ]s -> [3 u ]3 ]s
    u  =  product over s, s' of  [s [s' ]s' ]s [s' ]s'

and when machine h = h(i) halts within i steps the prefix [3 is followed by
([1)^h [2 ]2 (]1)^h, which makes the stack read 3 1^h 2 at one point.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from itertools import product

from quasiminimal.constructions import ReductionCheck
from quasiminimal.errors import BudgetExceeded
from quasiminimal.params import BUDGET
from quasiminimal.words import Alphabet

log = logging.getLogger(__name__)

DYCK_ALPHABET = Alphabet.range(6, "([{}])")
# Patterns 3 1^k 2 with k at most this occur inside u itself.
SHORT_PATTERN_LIMIT = 54


def opener(s):
    return s - 1


def closer(s):
    return 6 - s


@dataclass(frozen=True)
class DyckLevel:
    i: int
    words: tuple     # words[letter] is the level word standing for that bracket
    halting: bool = False

    def __post_init__(self):
        if len({len(w) for w in self.words}) != 1:
            raise ValueError("level words must share one length")

    @property
    def length(self):
        return len(self.words[0])

    def open(self, s):
        return self.words[opener(s)]

    def close(self, s):
        return self.words[closer(s)]


def base_level():
    return DyckLevel(0, tuple((a,) for a in range(6)))


def next_level(level, oracle):
    i = level.i
    o, c = level.open, level.close
    u = ()
    for s, t in product((1, 2, 3), repeat=2):
        u += o(s) + o(t) + c(t) + c(s) + o(t) + c(t)
    h = oracle.h(i)
    halting = oracle.halts_within(h, i)
    head = o(3)
    if halting:
        head += o(1) * h + o(2) + c(2) + c(1) * h
    words = [None] * 6
    for s in (1, 2, 3):
        words[opener(s)] = head + u + c(3) + o(s)
        words[closer(s)] = head + u + c(3) + c(s)
    return DyckLevel(i + 1, tuple(words), halting)


def dyck_levels(oracle, depth=None, cap=None):
    """W_0 .. W_depth."""
    top = BUDGET.dyck_depth
    depth = top if depth is None else depth
    if depth > top:
        raise BudgetExceeded("Dyck depth", top)
    cap = cap or BUDGET.length_cap
    levels = [base_level()]
    for _ in range(depth):
        nxt = next_level(levels[-1], oracle)
        if 6 * nxt.length > cap:
            raise BudgetExceeded(f"Dyck level {nxt.i} ({nxt.length} symbols per word)", cap)
        log.debug("level %d: %d symbols, halting insertion %s", nxt.i, nxt.length, nxt.halting)
        levels.append(nxt)
    return levels


@dataclass(frozen=True)
class PdaRun:
    accepted: bool      # no closer met a different opener
    stack: tuple
    patterns: Counter   # k -> number of steps after which the stack top read 3 1^k 2
    max_depth: int


def pda_run(w, stack=(), observer=None):
    """
    Push s on [s, pop on the matching ]s; a closer on an empty stack is skipped
    (w is read as a factor), a mismatch rejects. observer(n, stack) sees the
    stack after n letters.
    """
    st = list(stack)
    ones = [0] * len(st)
    for d, a in enumerate(st):
        ones[d] = ones[d - 1] + 1 if a == 1 and d else int(a == 1)
    patterns = Counter()
    deepest = len(st)
    for n, a in enumerate(w, start=1):
        if a < 3:
            s = a + 1
            st.append(s)
            ones.append(ones[-1] + 1 if s == 1 and len(ones) else int(s == 1))
            deepest = max(deepest, len(st))
        elif st:
            if st[-1] != 6 - a:
                return PdaRun(False, tuple(st), patterns, deepest)
            st.pop()
            ones.pop()
        if st and st[-1] == 2 and len(st) >= 2:
            k = ones[-2]
            if len(st) - 2 - k >= 0 and st[-2 - k] == 3:
                patterns[k] += 1
        if observer is not None:
            observer(n, st)
    return PdaRun(True, tuple(st), patterns, deepest)


def pda_check(w, k):
    """w is read without mismatch and the stack top reads 3 1^k 2 at some point."""
    run = pda_run(w)
    return run.accepted and run.patterns[k] > 0


def top_invariant_holds(w, stack=()):
    """On every proper prefix the stack is the initial one or extends it by a 3."""
    v = list(stack)
    bad = []

    def watch(n, st):
        if n < len(w) and st != v and st[:len(v) + 1] != v + [3]:
            bad.append(n)

    return pda_run(w, stack, watch).accepted and not bad


def cfl_solver(oracle, j):
    return oracle.halts(j)


def cfl_verify(levels, j):
    return any(pda_check(w, j) for lv in levels for w in lv.words)


def cfl_in_window(oracle, levels, j):
    return any(oracle.h(lv.i) == j and oracle.halts_within(j, lv.i) for lv in levels[:-1])


def cfl_check(oracle, levels, j):
    if j <= SHORT_PATTERN_LIMIT:
        raise ValueError(f"stack patterns with k <= {SHORT_PATTERN_LIMIT} occur without any halting")
    return ReductionCheck(j, cfl_solver(oracle, j), cfl_in_window(oracle, levels, j), cfl_verify(levels, j))
