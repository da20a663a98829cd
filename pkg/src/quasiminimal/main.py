"""
Command-line entry point. Every report ends with a single `RESULT: <value>` line.

Exit codes: 0 when a decision was rendered (whatever the verdict), 1 on usage,
parse or I/O errors, 2 when a budget was exceeded.
"""
import argparse
import logging
import os
import sys

import matplotlib.pyplot as plt

from quasiminimal import params
from quasiminimal.automata import (
    build_elementary_pt, build_local, build_renewal, compile_regex, NotAperiodic, syntactic_monoid,
)
from quasiminimal.constructions import (
    TransitiveLT, build_counting, build_modular_primorial, build_modular_simple, build_transitive_lt, fibonacci_oracle,
    largest_radius, oneminimal_check, oneminimal_point, oneminimal_templates,
)
from quasiminimal.dyck import DYCK_ALPHABET, SHORT_PATTERN_LIMIT, cfl_check, dyck_levels
from quasiminimal.errors import BudgetExceeded, QuasiminimalError
from quasiminimal.oracle import HaltingOracle, HaltsAt, parse_oracle
from quasiminimal.order import LanguageOracle, Proven, generator_check, leq_semidecide
from quasiminimal.plots import (
    figure_cb_chains, figure_construction_gaps, figure_gap_exponents, figure_ruler, set_mpl_defaults,
)
from quasiminimal.report_summary import build_summary_sheet, console_summary
from quasiminimal.ruler import deterministic_extension, extend, positions, psi_window, ruler_value, ruler_window
from quasiminimal.substitution import (
    Budget, NonSyndetic, decide_language_intersection, decide_regular_intersection, gap_lengths,
    long_symbols, parse_substitution, subsystem_count_B, syndetic_long,
)
from quasiminimal.selftest import run_selftest
from quasiminimal.template import (
    Reachable, SUNNY, STAIRS, cb_rank, decide_counting, decide_halting, decide_modular, decide_tuple,
    derivative_chain, member, parse_templates,
)
from quasiminimal.words import Alphabet, ClopenSet, decimal, format_point, glyphs

log = logging.getLogger(__name__)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path):
    with open(path, encoding="utf-8") as f:
        return f.read()


def _decimal_word(text):
    try:
        return tuple(int(tok) for tok in text.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"expected space-separated integers, got {text!r}") from None


def _clopen(text, alphabet):
    words = [alphabet.parse(w) for w in text.split(",")]
    return ClopenSet.of(*words)


def _yes(flag):
    return "YES" if flag else "NO"


# ---------- ruler ----------

def cmd_ruler(args):
    if args.action == "value":
        return str(ruler_value(args.i))
    if args.action == "window":
        return decimal(int(a) for a in ruler_window(args.start, args.stop))
    if args.action == "positions":
        (prog,) = positions(args.j).progressions
        return f"{prog.offset} + {prog.step}n"
    if args.action == "extend":
        w = _decimal_word(args.word)
        if args.left is None and args.right is None:
            return decimal(deterministic_extension(w))
        return decimal(extend(w, args.left, args.right))
    return decimal(psi_window(args.radius))


# ---------- regular languages ----------

def _build_language(args):
    alphabet = Alphabet.from_glyphs(args.alphabet)
    spec = args.spec
    if args.family == "regex":
        return compile_regex(spec, alphabet)
    if args.family == "pt":
        return build_elementary_pt(alphabet, alphabet.parse(spec))
    parts = [p.strip() for p in spec.split(";")]
    if args.family == "local":
        if len(parts) != 3:
            raise UsageError("local spec is `A;B;F1,F2,...`")
        A, B = alphabet.parse(parts[0]), alphabet.parse(parts[1])
        F = [alphabet.parse(f) for f in parts[2].split(",") if f.strip()]
        return build_local(alphabet, A, B, F)
    if len(parts) != 3:
        raise UsageError("renewal spec is `u;v;w1,w2,...`")
    ws = [alphabet.parse(w) for w in parts[2].split(",") if w.strip()]
    return build_renewal(alphabet, alphabet.parse(parts[0]), alphabet.parse(parts[1]), ws)


def cmd_lang(args):
    nfa = _build_language(args)
    if args.action == "monoid":
        res = syntactic_monoid(nfa).idempotent_exponent()
        if isinstance(res, NotAperiodic):
            print(f"element {glyphs(res.witness, nfa.alphabet)} cycles with period {res.period}")
            return "NOT-APERIODIC"
        return str(res)
    print(f"states: {nfa.n_states}")
    if args.word is not None:
        return _yes(nfa.accepts(nfa.alphabet.parse(args.word)))
    return f"states={nfa.n_states}"


# ---------- substitutions ----------

def cmd_subst(args):
    if args.action == "count-b":
        return str(subsystem_count_B(args.k))
    tau = parse_substitution(_read(args.file))
    A = tau.alphabet
    if args.action == "iterate":
        return A.format(tau.iterate(A.letter(args.letter), args.n))
    if args.action == "long":
        return A.format(sorted(long_symbols(tau)))
    if args.action == "syndetic":
        res = syndetic_long(tau, args.budget)
        if isinstance(res, NonSyndetic):
            return f"NON-SYNDETIC letter={A.glyph(res.letter)} side={res.side}"
        if isinstance(res, Budget):
            return f"UNKNOWN explored={res.explored}"
        return f"SYNDETIC m={res.m}"
    if args.regex is None:
        raise UsageError("modelcheck needs --regex")
    nfa = compile_regex(args.regex, A)
    if args.letter is None:
        res = decide_language_intersection(tau, nfa)
        if res.nonempty:
            return f"YES letter={A.glyph(res.letter)} n={res.n}"
        return "NO"
    cert = decide_regular_intersection(tau, A.letter(args.letter), nfa)
    print(f"relations repeat: t={cert.t} p={cert.p}")
    return f"YES n={cert.n}" if cert.verdict else f"NO t={cert.t} p={cert.p}"


# ---------- templates ----------

def _reach(res):
    return f"YES j={res.j}" if isinstance(res, Reachable) else "NO"


def cmd_template(args):
    T = parse_templates(_read(args.file))
    A = T.alphabet
    if args.action == "cb-rank":
        return str(cb_rank(T))
    if args.action == "member":
        return _yes(member(T, A.parse(args.word)))
    if args.action == "tuple":
        return _yes(decide_tuple(T, [A.parse(w) for w in args.words.split(",")]))
    C, D = _clopen(args.source, A), _clopen(args.target, A)
    if args.action == "halting":
        res = decide_halting(T, C, D, args.min_step)
    elif args.action == "modular":
        res = decide_modular(T, C, D, args.k, args.m, args.min_step)
    else:
        res = decide_counting(T, C, D, _clopen(args.along, A), _clopen(args.visit, A), args.count,
                              args.min_step)
    if isinstance(res, Reachable):
        print(f"witness: {format_point(res.point, A)} at {res.i}")
    return _reach(res)


# ---------- generating order ----------

def named_system(name):
    if name == "sunny":
        return LanguageOracle.from_templates(parse_templates(SUNNY), name)
    if name == "stairs":
        return LanguageOracle.from_templates(parse_templates(STAIRS), name)
    if name == "golden-mean":
        A = Alphabet.range(2)
        return LanguageOracle.from_forbidden(A, [(1, 1)], name)
    if name == "fibonacci":
        return fibonacci_oracle()
    raise UsageError(f"unknown system {name!r}; known: sunny, stairs, golden-mean, fibonacci")


SYSTEM_NAMES = ("sunny", "stairs", "golden-mean", "fibonacci")


def cmd_order(args):
    oracle = named_system(args.system)
    parse = oracle.alphabet.parse if oracle.alphabet is not None else _decimal_word
    if args.action == "leq":
        res = leq_semidecide(oracle, parse(args.u), parse(args.v), args.budget)
        if isinstance(res, Proven):
            return f"PROVEN h={res.bound.h} k={res.bound.k}"
        return f"UNKNOWN budget={res.budget}"
    res = generator_check(oracle, parse(args.word), args.n, args.budget)
    if isinstance(res, Proven):
        return f"PROVEN words={len(res.bound)}"
    return f"UNKNOWN witness={glyphs(res.witness)}"


# ---------- constructions ----------

CONSTRUCTIONS = ("oneminimal", "translt", "modular", "primorial", "counting", "dyck")
PROBLEMS = {"oneminimal": "halting", "translt": "halting", "modular": "modular",
            "primorial": "modular", "counting": "counting", "dyck": "cfl"}


def _oracle(args):
    return parse_oracle(_read(args.oracle))


def cmd_construct(args):
    o = _oracle(args)
    cap = args.window
    if args.system == "oneminimal":
        for i in range(1, args.count + 1):
            print(f"x_{i} = {format_point(oneminimal_point(o, i, args.padded))}")
        return f"points={args.count}"
    if args.system == "translt":
        radius = largest_radius(TransitiveLT(o).window, cap)
        _, window = build_transitive_lt(o, radius=radius, cap=cap)
        print(f"radius {radius}: {glyphs(window.word[:120])}...")
        return f"length={len(window.word)} blocks={len(window.indices)}"
    if args.system in ("modular", "counting"):
        x = build_modular_simple(o) if args.system == "modular" else build_counting(o)
        count = x.fit(cap)
        word = x.images_window(count, cap)
        print(f"INF(0) . {glyphs(word[:120])}...")
        return f"length={len(word)} images={count}"
    if args.system == "primorial":
        p = build_modular_primorial(o, args.levels, args.toy)
        for lv in p.levels:
            print(f"level {lv.i}: P={lv.prime} h={lv.h} k={lv.k} gap={lv.gap}")
        growth = "skipped" if p.toy else ("OK" if all(p.growth_chain()) else "FAILED")
        inverses = "OK" if p.check_inverses() and p.check_plain_divisibility() else "FAILED"
        return f"levels={len(p.levels)} inverses={inverses} growth={growth}"
    levels = dyck_levels(o, args.depth)
    for lv in levels:
        print(f"W_{lv.i}: {lv.length} symbols per word{' (halting insertion)' if lv.halting else ''}")
    if len(levels) > 1:
        print(f"[^1_1 = {DYCK_ALPHABET.format(levels[1].open(1))}")
    return "lengths=" + ",".join(str(lv.length) for lv in levels)


def cmd_decide(args):
    expected = PROBLEMS[args.system]
    if args.problem != expected:
        raise UsageError(f"system {args.system} encodes the {expected} problem, not {args.problem}")
    o = _oracle(args)
    j, cap = args.j, args.window
    if args.system == "oneminimal":
        check = oneminimal_check(o, j, args.padded)
    elif args.system == "translt":
        t = TransitiveLT(o)
        check = t.check(j, t.window(largest_radius(t.window, cap), cap))
    elif args.system == "modular":
        x = build_modular_simple(o)
        check = x.check(j, x.fit(cap))
    elif args.system == "counting":
        x = build_counting(o)
        check = x.check(j, x.fit(cap))
    elif args.system == "primorial":
        check = build_modular_primorial(o, args.levels, args.toy).check(j)
    else:
        if j <= SHORT_PATTERN_LIMIT:
            raise UsageError(f"--j must exceed {SHORT_PATTERN_LIMIT} for the Dyck system")
        check = cfl_check(o, dyck_levels(o, args.depth), j)
    witness = "found" if check.witness else ("absent" if check.in_window else "outside-window")
    print(f"solver: {_yes(check.solver)} | witness: {witness} | agree: {_yes(check.agrees)}")
    return _yes(check.solver)


# ---------- selftest / plots ----------

def cmd_selftest(args):
    spec = params.SELFTEST
    outdir = os.path.abspath(args.out or spec.outdir)
    df, metrics = run_selftest(spec, args.seed)
    console_summary(metrics)
    figs = {}
    if args.figures or spec.figures:
        figs = render_figures(outdir)
    md_path, html_path = build_summary_sheet(
        outdir, metrics, specs={"budget": params.BUDGET, "selftest": spec, "plots": params.PLOTS}, figs=figs)
    print("[OK] Result sheet:")
    print("  -", md_path)
    print("  -", html_path)
    agreed = int(df["agree"].sum())
    return f"{agreed}/{len(df)}"


def render_figures(outdir):
    os.makedirs(outdir, exist_ok=True)
    set_mpl_defaults()
    spec = params.PLOTS
    tau = parse_substitution(spec.gap_substitution)
    o = HaltingOracle({1: HaltsAt(0), 2: HaltsAt(1)})
    chains = {name: [len(T) for T in derivative_chain(T)] for name, T in (
        ("sunny-side-up", parse_templates(SUNNY)),
        ("stairs", parse_templates(STAIRS)),
        ("one-minimal", oneminimal_templates(o)),
    )}
    modular, counting = build_modular_simple(o), build_counting(o)
    profiles = {
        "modular": gap_lengths(modular.images_window(12), 1),
        "counting": gap_lengths(counting.images_window(60), 2),
    }
    figures = {
        "Ruler sequence": ("graph1_ruler.png", figure_ruler(spec.ruler_extent)),
        "Marker gaps of an iterate": ("graph2_gap_exponents.png",
                                      figure_gap_exponents(tau, tau.alphabet.letter(spec.gap_letter),
                                                           spec.gap_depth)),
        "Cantor-Bendixson chains": ("graph3_cb_chains.png", figure_cb_chains(chains)),
        "Construction windows": ("graph4_construction_gaps.png", figure_construction_gaps(profiles)),
    }
    paths = {}
    for title, (fname, fig) in figures.items():
        path = os.path.join(outdir, fname)
        fig.savefig(path, dpi=300)
        print(f"[OK] Saved: {path}")
        paths[title] = path
        if not spec.show:
            plt.close(fig)
    if spec.show:
        plt.show()
    return paths


def cmd_plot(args):
    paths = render_figures(os.path.abspath(args.out or params.SELFTEST.outdir))
    return f"figures={len(paths)}"


# ---------- argument parsing ----------

def build_parser():
    p = _Parser(prog="quasiminimal", description="Decision procedures and constructions for quasiminimal subshifts.")
    p.add_argument("--budget", type=int, help="search budget (order diagonal depth and syndetic contexts)")
    p.add_argument("--seed", type=int, help="seed for randomized selftest data")
    p.add_argument("--config", help="YAML file with budget/selftest/plots sections")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("ruler")
    r.add_argument("action", choices=["value", "window", "positions", "extend", "psi"])
    r.add_argument("--i", type=int, default=0)
    r.add_argument("--from", dest="start", type=int, default=0)
    r.add_argument("--to", dest="stop", type=int, default=16)
    r.add_argument("--j", type=int, default=0)
    r.add_argument("--word", default="0")
    r.add_argument("--left", type=int)
    r.add_argument("--right", type=int)
    r.add_argument("--radius", type=int, default=8)
    r.set_defaults(func=cmd_ruler)

    lang = sub.add_parser("lang")
    lang.add_argument("action", choices=["build", "monoid"])
    lang.add_argument("--family", choices=["pt", "local", "renewal", "regex"], required=True)
    lang.add_argument("--alphabet", required=True)
    lang.add_argument("--spec", required=True)
    lang.add_argument("--word")
    lang.set_defaults(func=cmd_lang)

    s = sub.add_parser("subst")
    s.add_argument("action", choices=["iterate", "long", "syndetic", "count-b", "modelcheck"])
    s.add_argument("--file")
    s.add_argument("--letter")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--regex")
    s.set_defaults(func=cmd_subst)

    t = sub.add_parser("template")
    t.add_argument("action", choices=["member", "cb-rank", "halting", "modular", "counting", "tuple"])
    t.add_argument("--file", required=True)
    t.add_argument("--word")
    t.add_argument("--words")
    t.add_argument("--from", dest="source")
    t.add_argument("--to", dest="target")
    t.add_argument("--along")
    t.add_argument("--visit")
    t.add_argument("--count", type=int, default=0)
    t.add_argument("--k", type=int, default=0)
    t.add_argument("--m", type=int, default=1)
    t.add_argument("--min-step", type=int, default=0)
    t.set_defaults(func=cmd_template)

    o = sub.add_parser("order")
    o.add_argument("action", choices=["leq", "generator"])
    o.add_argument("--system", choices=SYSTEM_NAMES, required=True)
    o.add_argument("--u")
    o.add_argument("--v")
    o.add_argument("--word")
    o.add_argument("--n", type=int, default=2)
    o.set_defaults(func=cmd_order)

    for name, func in (("construct", cmd_construct), ("decide", cmd_decide)):
        c = sub.add_parser(name)
        if name == "construct":
            c.add_argument("system", choices=CONSTRUCTIONS)
        else:
            c.add_argument("--system", choices=CONSTRUCTIONS, required=True)
            c.add_argument("--problem", choices=sorted(set(PROBLEMS.values())), required=True)
            c.add_argument("--j", type=int, required=True)
        c.add_argument("--oracle", required=True)
        c.add_argument("--window", type=int)
        c.add_argument("--count", type=int, default=5)
        c.add_argument("--padded", action="store_true")
        c.add_argument("--levels", type=int)
        c.add_argument("--toy", action="store_true")
        c.add_argument("--depth", type=int)
        c.set_defaults(func=func)

    st = sub.add_parser("selftest")
    st.add_argument("--out")
    st.add_argument("--figures", action="store_true")
    st.set_defaults(func=cmd_selftest)

    pl = sub.add_parser("plot")
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_plot)
    return p


def _check_args(args):
    needs = {
        ("subst", "iterate"): ("file", "letter"), ("subst", "long"): ("file",),
        ("subst", "syndetic"): ("file",), ("subst", "modelcheck"): ("file", "regex"),
        ("template", "member"): ("word",), ("template", "tuple"): ("words",),
        ("template", "halting"): ("source", "target"), ("template", "modular"): ("source", "target"),
        ("template", "counting"): ("source", "target", "along", "visit"),
        ("order", "leq"): ("u", "v"), ("order", "generator"): ("word",),
    }
    for flag in needs.get((args.command, getattr(args, "action", None)), ()):
        if getattr(args, flag) is None:
            raise UsageError(f"{args.command} {args.action} needs --{flag.replace('source', 'from').replace('target', 'to')}")


def run(argv=None):
    """Parse argv, dispatch, print the report. Returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)
    try:
        if args.config:
            params.apply_params(*params.load_params(args.config))
        if args.budget is not None:
            params.BUDGET.order_budget = args.budget
            params.BUDGET.syndetic_cap = args.budget
        if args.seed is not None:
            params.SELFTEST.seed = args.seed
        args.budget = params.BUDGET.order_budget if args.command == "order" else args.budget
        _check_args(args)
        result = args.func(args)
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 2
    except (UsageError, QuasiminimalError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"RESULT: {result}")
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
