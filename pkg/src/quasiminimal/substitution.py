"""
Substitution systems X_tau: iteration, incidence matrices, long symbols,
syndeticity of long symbols, the subsystem count B(k) and the regular
intersection decision for iterates tau^n(a).

Decision for S* L S* covers the factors of every tau^n(a); that set can be
strictly larger than the language of the bi-infinite subshift (tau = 0->00,
1->10 has "10" in every tau^n(1) but no bi-infinite point containing a 1).
"""
import logging
import math
from dataclasses import dataclass
from itertools import chain, product

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from quasiminimal.automata import word_relation
from quasiminimal.errors import BudgetExceeded, ParseError
from quasiminimal.params import BUDGET
from quasiminimal.words import Alphabet, EventuallyPeriodicPoint, factors, find_all, language_n

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Substitution:
    alphabet: Alphabet
    image: dict   # letter -> nonempty tuple

    def __post_init__(self):
        image = {int(a): tuple(w) for a, w in self.image.items()}
        object.__setattr__(self, "image", image)
        if set(image) != set(self.alphabet):
            missing = sorted(set(self.alphabet) - set(image))
            raise ValueError(f"no image for letters {missing}")
        for a, w in image.items():
            if not w:
                raise ValueError(f"image of {a} is empty (erasing substitutions are not allowed)")
            self.alphabet.check(w)

    def __call__(self, word):
        return tuple(chain.from_iterable(self.image[a] for a in word))

    def __eq__(self, other):
        return isinstance(other, Substitution) and self.alphabet == other.alphabet and self.image == other.image

    def __hash__(self):
        return hash((self.alphabet, tuple(sorted(self.image.items()))))

    @property
    def letters(self):
        return tuple(self.alphabet)

    def incidence_matrix(self):
        """M[a][b] = |tau(a)|_b, exact integers."""
        idx = {a: i for i, a in enumerate(self.letters)}
        M = np.zeros((len(idx), len(idx)), dtype=object)
        for a, w in self.image.items():
            for b in w:
                M[idx[a], idx[b]] += 1
        return M

    def lengths(self, n):
        """Vector of |tau^n(a)| in alphabet order, as Python integers."""
        M = self.incidence_matrix()
        v = np.ones(len(self.letters), dtype=object)
        for _ in range(n):
            v = M.dot(v)
        return v

    def iterate(self, a, n, cap=None):
        cap = cap or BUDGET.length_cap
        length = int(self.lengths(n)[self.letters.index(a)])
        if length > cap:
            raise BudgetExceeded(f"|tau^{n}({a})| = {length}", cap)
        w = (a,)
        for _ in range(n):
            w = self(w)
        return w

    def successor_graph(self):
        idx = {a: i for i, a in enumerate(self.letters)}
        rows, cols = [], []
        for a, w in self.image.items():
            for b in set(w):
                rows.append(idx[a])
                cols.append(idx[b])
        n = len(idx)
        return csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))


# ---------- growth ----------

def long_symbols(tau):
    """a is long iff it reaches a cycle through some d with |tau(d)| >= 2."""
    graph = tau.successor_graph()
    letters = tau.letters
    _, labels = connected_components(graph, directed=True, connection="strong")
    dense = graph.toarray()
    growing = set()
    for comp in set(labels):
        members = np.flatnonzero(labels == comp)
        cyclic = len(members) > 1 or dense[members[0], members[0]]
        if cyclic and any(len(tau.image[letters[i]]) >= 2 for i in members):
            growing.add(comp)
    out = set()
    for i, a in enumerate(letters):
        reach = breadth_first_order(graph, i, directed=True, return_predecessors=False)
        if any(labels[j] in growing for j in reach):
            out.add(a)
    return frozenset(out)


def long_symbols_by_lengths(tau):
    """Cross-check: a is long iff |tau^(2k)(a)| > |tau^k(a)| with k = |S|."""
    k = len(tau.letters)
    before, after = tau.lengths(k), tau.lengths(2 * k)
    return frozenset(a for i, a in enumerate(tau.letters) if after[i] > before[i])


# ---------- syndeticity ----------

@dataclass(frozen=True)
class Syndetic:
    m: int            # every factor of length >= m contains a long letter
    max_run: int
    contexts: int


@dataclass(frozen=True)
class NonSyndetic:
    letter: int       # long letter whose images keep adding short letters on one side
    side: str         # "left" or "right" of the run it flanks
    cycle: int


@dataclass(frozen=True)
class Budget:
    explored: int


def _split(w, long):
    """(short prefix, long letters with the short runs between them, short suffix)."""
    idx = [i for i, a in enumerate(w) if a in long]
    if not idx:
        return w, [], [], None
    runs = [w[i + 1:j] for i, j in zip(idx, idx[1:])]
    return w[:idx[0]], [w[i] for i in idx], runs, w[idx[-1] + 1:]


def _pumping_cycle(tau, long, side):
    """A long letter on a cycle of L -> outermost long letter of tau(L) that sheds short letters."""
    step, shed = {}, {}
    for L in long:
        prefix, longs, _, suffix = _split(tau.image[L], long)
        if side == "right":   # run to the right of L is fed by the short suffix of tau(L)
            step[L], shed[L] = longs[-1], bool(suffix)
        else:
            step[L], shed[L] = longs[0], bool(prefix)
    for start in sorted(long):
        path, cur = [], start
        while cur not in path:
            path.append(cur)
            cur = step[cur]
        cycle = path[path.index(cur):]
        if any(shed[L] for L in cycle):
            return NonSyndetic(min(cycle), side, len(cycle))
    return None


def syndetic_long(tau, cap=None):
    """Syndetic(m) | NonSyndetic | Budget for the long letters of tau."""
    cap = cap or BUDGET.syndetic_cap
    long = long_symbols(tau)
    if long:
        for side in ("right", "left"):
            witness = _pumping_cycle(tau, long, side)
            if witness is not None:
                log.debug("long letters not syndetic: %s", witness)
                return witness

    # context = (left long letter | None, short run, right long letter | None)
    def internal(L):
        prefix, longs, runs, suffix = _split(tau.image[L], long)
        return [(x, r, y) for x, r, y in zip(longs, runs, longs[1:])]

    def step(ctx):
        L, run, R = ctx
        left_run, new_L = (), None
        if L is not None:
            _, longs, _, suffix = _split(tau.image[L], long)
            left_run, new_L = suffix, longs[-1]
        right_run, new_R = (), None
        if R is not None:
            prefix, longs, _, _ = _split(tau.image[R], long)
            right_run, new_R = prefix, longs[0]
        return new_L, left_run + tau(run) + right_run, new_R

    seen = set()
    frontier = []
    for a in tau.letters:
        frontier += [(None, (), a), (a, (), None)] if a in long else [(None, (a,), None)]
    while frontier:
        ctx = frontier.pop()
        if ctx in seen:
            continue
        if len(seen) >= cap:
            log.debug("syndetic fixpoint stopped at %d contexts", len(seen))
            return Budget(len(seen))
        seen.add(ctx)
        frontier.append(step(ctx))
        for L in (ctx[0], ctx[2]):
            if L is not None:
                frontier += internal(L)
    max_run = max(len(run) for _, run, _ in seen)
    log.debug("syndetic fixpoint: %d contexts, longest short run %d", len(seen), max_run)
    return Syndetic(max_run + 1, max_run, len(seen))


def quasiminimal_bound(tau, m):
    """Upper bound 2^(|S|^(m+1)) on the number of subsystems."""
    return 2 ** (len(tau.letters) ** (m + 1))


# ---------- subsystem counting ----------

def subsystem_count_B(k):
    """B(k) = sum_j C(k, j) 2^(j(j-1))."""
    return sum(math.comb(k, j) * 2 ** (j * (j - 1)) for j in range(k + 1))


@dataclass(frozen=True)
class SubsystemRecord:
    K: frozenset       # letters whose fixed point is present
    J: frozenset       # ordered pairs (i, j): the point INF(b_i) b_j INF is present
    language: frozenset


def brute_force_subsystems(k, n=4):
    """Every subsystem of B^-1(union of b_i* b_j*) over k letters, with its B_n."""
    letters = range(1, k + 1)
    out = []
    for mask in range(2**k):
        K = [a for a in letters if mask >> (a - 1) & 1]
        pairs = [(i, j) for i in K for j in K if i != j]
        for pick in product((False, True), repeat=len(pairs)):
            J = frozenset(p for p, keep in zip(pairs, pick) if keep)
            points = [EventuallyPeriodicPoint((a,), (), (a,)) for a in K]
            points += [EventuallyPeriodicPoint((i,), (), (j,)) for i, j in J]
            out.append(SubsystemRecord(frozenset(K), J, frozenset(language_n(points, n))))
    return out


# ---------- regular intersection ----------

@dataclass(frozen=True)
class RegIntersectCertificate:
    verdict: bool
    n: int = None      # witness exponent on a Yes
    t: int = 0         # R_t = R_(t+p)
    p: int = 1


def _relations(tau, nfa, prev):
    """R_(i+1)(s) = composition of R_i over the letters of tau(s)."""
    out = {}
    for s in tau.letters:
        rel = None
        for b in tau.image[s]:
            rel = prev[b] if rel is None else rel.compose(prev[b])
        out[s] = rel
    return out


def decide_regular_intersection(tau, a, nfa, cap=None):
    """Is tau^n(a) in L(nfa) for some n >= 0."""
    cap = cap or BUDGET.determinize_cap
    if a not in tau.alphabet:
        raise ValueError(f"letter {a} not in alphabet")
    if tuple(nfa.alphabet) != tau.letters:
        raise ValueError("automaton and substitution use different alphabets")
    rel = {s: word_relation(nfa, (s,)) for s in tau.letters}
    history = []
    seen = {}
    i = 0
    while True:
        key = tuple(rel[s].key() for s in tau.letters)
        if key in seen:
            t = seen[key]
            p = i - t
            break
        if i >= cap:
            raise BudgetExceeded("relation iterations", cap)
        seen[key] = i
        history.append(rel[a])
        rel = _relations(tau, nfa, rel)
        i += 1
    log.debug("relations repeat: R_%d = R_%d", t, t + p)
    for n, r in enumerate(history):
        if r.reaches(nfa.initial, nfa.final):
            return RegIntersectCertificate(True, n, t, p)
    return RegIntersectCertificate(False, None, t, p)


@dataclass(frozen=True)
class LanguageIntersection:
    nonempty: bool
    letter: int = None
    n: int = None
    certificates: tuple = ()   # (letter, RegIntersectCertificate) per letter


def decide_language_intersection(tau, nfa, cap=None):
    """Does some tau^n(a) have a factor in L(nfa)."""
    padded = nfa.factor_closure()
    certs = tuple((a, decide_regular_intersection(tau, a, padded, cap)) for a in tau.letters)
    hits = [(c.n, a) for a, c in certs if c.verdict]
    if not hits:
        return LanguageIntersection(False, certificates=certs)
    n, a = min(hits)
    return LanguageIntersection(True, a, n, certs)


def xtau_factors(tau, n, depth, cap=None):
    """Length-n factors of tau^l(a) for every letter and l <= depth."""
    cap = cap or BUDGET.length_cap
    out = set()
    for a in tau.letters:
        w = (a,)
        for level in range(depth + 1):
            if level:
                if int(tau.lengths(level)[tau.letters.index(a)]) > cap:
                    raise BudgetExceeded(f"|tau^{level}({a})|", cap)
                w = tau(w)
            out |= factors(w, n)
    return out


def gap_lengths(word, marker):
    """Numbers of symbols strictly between consecutive markers."""
    idx = find_all(word, (marker,))
    return [b - a - 1 for a, b in zip(idx, idx[1:])]


# ---------- file format ----------

def parse_substitution(text):
    """One `letter -> word` rule per line; `#` starts a comment."""
    rules = []
    glyph_order = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ParseError("expected `letter -> word`", line=lineno)
        lhs, rhs = (s.strip() for s in line.split("->", 1))
        rhs = "".join(rhs.split())
        if len(lhs) != 1:
            raise ParseError(f"left side must be one glyph, got {lhs!r}", line=lineno)
        if not rhs:
            raise ParseError("image must be nonempty", line=lineno)
        rules.append((lineno, lhs, rhs))
        glyph_order += [lhs] + list(rhs)
    if not rules:
        raise ParseError("no rules")
    alphabet = Alphabet.from_glyphs(glyph_order)
    image = {}
    for lineno, lhs, rhs in rules:
        a = alphabet.letter(lhs)
        if a in image:
            raise ParseError(f"duplicate rule for {lhs!r}", line=lineno)
        image[a] = alphabet.parse(rhs)
    missing = [alphabet.glyph(a) for a in alphabet if a not in image]
    if missing:
        raise ParseError(f"no rule for {', '.join(missing)}")
    return Substitution(alphabet, image)


def format_substitution(tau):
    return "\n".join(f"{tau.alphabet.glyph(a)} -> {tau.alphabet.format(tau.image[a])}"
                     for a in tau.letters) + "\n"


SUBSTITUTIONS = {
    "ruler-gaps": "0 -> 00\n1 -> 101",
    "pumping": "0 -> 0\n1 -> 010",
    "four-letter": "0 -> 00\n1 -> 11\n2 -> 20\n3 -> 2301",
    "three-letter": "0 -> 0\n1 -> 10\n2 -> 021",
    "one-sided": "0 -> 00\n1 -> 10",
    "fibonacci": "1 -> 12\n2 -> 1",
}


def named(name):
    try:
        return parse_substitution(SUBSTITUTIONS[name])
    except KeyError:
        raise KeyError(f"unknown substitution {name!r}; known: {', '.join(SUBSTITUTIONS)}") from None
