import numpy as np
import pytest

from quasiminimal.params import SelftestSpec
from quasiminimal.selftest import (
    _reach_after_scan, _reach_by_scan, check_long_symbols, check_template_halting, check_template_min_step, run_selftest,
)
from quasiminimal.template import parse_templates
from quasiminimal.words import EventuallyPeriodicPoint

SMALL = SelftestSpec(occurrence_trials=4, automata_trials=4, substitution_trials=6, template_trials=6,
                     ruler_trials=2, oracle_tables=1)


@pytest.fixture(scope="module")
def small_run():
    return run_selftest(SMALL)


def test_every_check_agrees(small_run):
    df, metrics = small_run
    assert list(df.columns) == ["check", "trial", "agree", "detail"]
    assert df["agree"].all(), df[~df["agree"]].to_string()
    assert {"occurrences", "long_symbols", "template_halting", "template_min_step", "ruler_positions", "oneminimal",
            "transitive_lt", "modular", "counting", "primorial", "dyck"} <= set(metrics)
    for m in metrics.values():
        assert m["agreements"] == m["trials"]
        assert m["agreement_pct"] == 100.0


def test_runs_are_reproducible(small_run):
    df, _ = small_run
    again, _ = run_selftest(SMALL)
    assert again[["check", "trial", "agree", "detail"]].equals(df[["check", "trial", "agree", "detail"]])


def test_different_seeds_draw_different_substitutions():
    a = check_long_symbols(np.random.default_rng(1), 5)
    b = check_long_symbols(np.random.default_rng(2), 5)
    assert [r[3] for r in a] != [r[3] for r in b]


def test_template_check_rows():
    rows = check_template_halting(np.random.default_rng(0), 10)
    assert len(rows) == 10
    assert all(agree for _, _, agree, _ in rows)


def test_reach_by_scan():
    p = EventuallyPeriodicPoint((0,), (1, 2), (0,))
    assert _reach_by_scan(p, 1, 2)
    assert not _reach_by_scan(p, 2, 1)
    assert _reach_by_scan(p, 0, 0)


def test_template_min_step_rows():
    rows = check_template_min_step(np.random.default_rng(3), 12)
    assert len(rows) == 12
    assert all(agree for _, _, agree, _ in rows), [r for r in rows if not r[2]]


def test_reach_after_scan():
    (t,) = parse_templates("L:0 | C:1 | E:2 | C:3 | R:0").templates
    assert _reach_after_scan(t, 1, 3, 40, 50)
    assert not _reach_after_scan(t, 1, 3, 40, 30)
    assert not _reach_after_scan(t, 3, 1, 1, 50)
