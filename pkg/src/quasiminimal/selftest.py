"""
Randomized agreement suite: every decision procedure against a brute-force
or generation-side counterpart, one DataFrame row per trial.
"""
import logging
import time

import numpy as np
import pandas as pd

from quasiminimal.automata import AnyLetter, Concat, Letter, Star, Union, compile_regex
from quasiminimal.constructions import (
    Counting, ModularPrimorial, ModularSimple, TransitiveLT, largest_radius, oneminimal_check,
)
from quasiminimal.dyck import cfl_check, dyck_levels
from quasiminimal.errors import BudgetExceeded
from quasiminimal.oracle import HaltingOracle
from quasiminimal.ruler import positions, ruler_window
from quasiminimal.substitution import (
    Substitution, decide_regular_intersection, format_substitution, long_symbols, long_symbols_by_lengths,
)
from quasiminimal.template import (
    BlockTemplate, Reachable, TemplateSubshift, decide_halting, format_template, point_system,
)
from quasiminimal.words import Alphabet, ClopenSet, EventuallyPeriodicPoint, find_all, occurrences

log = logging.getLogger(__name__)


def _word(rng, letters, lo, hi):
    return tuple(int(a) for a in rng.choice(letters, size=int(rng.integers(lo, hi + 1))))


def _point(rng, letters):
    return EventuallyPeriodicPoint(_word(rng, letters, 1, 3), _word(rng, letters, 0, 4),
                                   _word(rng, letters, 1, 3), int(rng.integers(-3, 4)))


def _regex(rng, letters, depth):
    if depth == 0 or rng.random() < 0.3:
        return AnyLetter() if rng.random() < 0.2 else Letter(int(rng.choice(letters)))
    kind = rng.integers(0, 3)
    if kind == 0:
        return Concat((_regex(rng, letters, depth - 1), _regex(rng, letters, depth - 1)))
    if kind == 1:
        return Union((_regex(rng, letters, depth - 1), _regex(rng, letters, depth - 1)))
    return Star(_regex(rng, letters, depth - 1))


def check_occurrences(rng, trials):
    rows = []
    for n in range(trials):
        p = _point(rng, [0, 1, 2])
        u = _word(rng, [0, 1, 2], 1, 3)
        lo, hi = p.span(pad=12)
        window = p.window(lo, hi)
        brute = {lo + k for k in find_all(window, u)}
        occ = occurrences(p, u)
        symbolic = set(occ.elements_in(lo, hi - len(u) + 1))
        rows.append(("occurrences", n, brute == symbolic, f"{u} in {p}"))
    return rows


def check_regular_intersection(rng, trials):
    rows = []
    for n in range(trials):
        k = int(rng.integers(2, 4))
        alphabet = Alphabet.range(k)
        letters = list(range(k))
        tau = Substitution(alphabet, {a: _word(rng, letters, 1, 3) for a in letters})
        nfa = compile_regex(_regex(rng, letters, 3), alphabet)
        a = int(rng.choice(letters))
        cert = decide_regular_intersection(tau, a, nfa)
        try:
            brute = any(nfa.accepts(tau.iterate(a, m, cap=20_000)) for m in range(cert.t + cert.p + 1))
        except BudgetExceeded:
            continue
        rows.append(("regular_intersection", n, brute == cert.verdict, f"t={cert.t} p={cert.p}"))
    return rows


def check_long_symbols(rng, trials):
    rows = []
    for n in range(trials):
        k = int(rng.integers(2, 5))
        letters = list(range(k))
        tau = Substitution(Alphabet.range(k), {a: _word(rng, letters, 1, 3) for a in letters})
        graph, growth = long_symbols(tau), long_symbols_by_lengths(tau)
        rows.append(("long_symbols", n, graph == growth, format_substitution(tau).strip().replace("\n", "; ")))
    return rows


def _reach_by_scan(p, c, d):
    """Some c at or before some d in a window holding two periods of each tail."""
    lo, hi = p.span(pad=2 * (len(p.left_period) + len(p.right_period)))
    window = p.window(lo, hi)
    firsts = [i for i, a in enumerate(window) if a == c]
    return bool(firsts) and any(a == d for a in window[firsts[0]:])


def check_template_halting(rng, trials):
    rows = []
    for n in range(trials):
        p = _point(rng, [0, 1, 2])
        c, d = (int(a) for a in rng.choice([0, 1, 2], size=2))
        res = decide_halting(point_system([p]), ClopenSet.of((c,)), ClopenSet.of((d,)))
        rows.append(("template_halting", n, isinstance(res, Reachable) == _reach_by_scan(p, c, d),
                     f"{c} -> {d} in {p}"))
    return rows


def _reach_after_scan(t, c, d, min_step, cap):
    """Some c with a d at least min_step later, over realizations with exponents <= cap."""
    for _, p in t.realizations(cap):
        lo, hi = p.span(pad=min_step + 2 * (len(p.left_period) + len(p.right_period)))
        window = p.window(lo, hi)
        firsts = [i for i, a in enumerate(window) if a == c]
        if firsts and any(a == d for a in window[firsts[0] + min_step:]):
            return True
    return False


def check_template_min_step(rng, trials):
    rows = []
    letters = [0, 1, 2]
    for n in range(trials):
        t = BlockTemplate(_word(rng, letters, 1, 2), (("C", _word(rng, letters, 1, 2)),
                                                      ("E", _word(rng, letters, 1, 2)),
                                                      ("C", _word(rng, letters, 1, 2))),
                          _word(rng, letters, 1, 2))
        c, d = (int(a) for a in rng.choice(letters, size=2))
        min_step = t.total_length + int(rng.integers(1, 30))
        T = TemplateSubshift((t,), Alphabet.range(3))
        res = decide_halting(T, ClopenSet.of((c,)), ClopenSet.of((d,)), min_step)
        # exponent range of decide_halting for two one-letter clopens
        cap = T.total_length + 4 + min_step
        scan = any(_reach_after_scan(s, c, d, min_step, cap) for s in T)
        rows.append(("template_min_step", n, isinstance(res, Reachable) == scan,
                     f"{c} -> {d} after {min_step} in {format_template(t)}"))
    return rows


def check_ruler(rng, trials):
    window = ruler_window(0, 2**12)
    rows = []
    for n in range(trials):
        j = int(rng.integers(0, 7))
        brute = set(np.flatnonzero(window == j).tolist())
        symbolic = set(positions(j).elements_in(0, 2**12))
        rows.append(("ruler_positions", n, brute == symbolic, f"j={j}"))
    return rows


def _random_oracle(rng, size=20, start=0, max_step=8):
    return HaltingOracle.random(rng, size=size, max_step=max_step, start=start)


def check_reductions(rng, tables):
    rows = []
    for n in range(tables):
        o = _random_oracle(rng)
        for j in range(1, 20):
            rows.append(("oneminimal", n, oneminimal_check(o, j).agrees, f"j={j}"))
        t = TransitiveLT(o)
        window = t.window(largest_radius(t.window))
        # v(j + 1) must fit the code horizon
        for j in range(0, 3):
            rows.append(("transitive_lt", n, t.check(j, window).agrees, f"j={j}"))
        modular, counting = ModularSimple(o), Counting(o)
        for j in range(1, 20):
            rows.append(("modular", n, modular.check(j).agrees, f"j={j}"))
            rows.append(("counting", n, counting.check(j).agrees, f"j={j}"))
        primorial = ModularPrimorial(o)
        for j in range(0, len(primorial.levels)):
            rows.append(("primorial", n, primorial.check(j).agrees, f"j={j}"))
        # dyck patterns need k > 54, so the schedule is shifted onto those indices
        shifted = _random_oracle(rng, size=4, start=55, max_step=1).with_dovetail(lambda i: 55 + i)
        levels = dyck_levels(shifted, depth=2)
        for j in range(55, 59):
            rows.append(("dyck", n, cfl_check(shifted, levels, j).agrees, f"j={j}"))
    return rows


def run_selftest(spec, seed=None):
    """(DataFrame with columns check, trial, agree, detail; metrics per check)."""
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    suites = [
        (check_occurrences, spec.occurrence_trials),
        (check_regular_intersection, spec.automata_trials),
        (check_long_symbols, spec.substitution_trials),
        (check_template_halting, spec.template_trials),
        (check_template_min_step, spec.template_trials),
        (check_ruler, spec.ruler_trials),
        (check_reductions, spec.oracle_tables),
    ]
    rows, seconds = [], {}
    for fn, count in suites:
        t0 = time.perf_counter()
        got = fn(rng, count)
        elapsed = time.perf_counter() - t0
        for name in {r[0] for r in got}:
            seconds[name] = elapsed
        log.debug("%s: %d rows in %.2fs", fn.__name__, len(got), elapsed)
        rows += got

    df = pd.DataFrame(rows, columns=["check", "trial", "agree", "detail"])

    def _agg(group):
        trials = len(group)
        agreements = int(group["agree"].sum())
        return dict(trials=trials, agreements=agreements,
                    agreement_pct=100.0 * agreements / max(trials, 1))

    metrics = {name: {**_agg(group), "seconds": seconds[name]}
               for name, group in df.groupby("check", sort=False)}
    return df, metrics
