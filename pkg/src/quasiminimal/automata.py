"""
Finite automata over integer alphabets: NFA engine, the regex subset used by
the CLI, builders for the elementary piecewise testable / local / renewal
families, letter relations and the syntactic monoid.

Regex grammar: single glyph letters, juxtaposition = concatenation, `+` union,
`*` star, `~` prefix complement (binds to the following starred atom), `@` any
letter, `()` grouping, whitespace ignored. An empty pattern denotes the empty
language and `()` denotes the empty word.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from quasiminimal.errors import AlphabetError, BudgetExceeded, ParseError
from quasiminimal.params import BUDGET

log = logging.getLogger(__name__)


# ---------- NFA ----------

@dataclass(frozen=True, eq=False)
class Nfa:
    alphabet: object
    n_states: int
    delta: dict = field(default_factory=dict)   # (state, letter) -> frozenset of states
    initial: frozenset = frozenset()
    final: frozenset = frozenset()

    def __post_init__(self):
        delta = {k: frozenset(v) for k, v in self.delta.items() if v}
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        states = range(self.n_states)
        for (q, a), targets in delta.items():
            if q not in states or a not in self.alphabet or any(t not in states for t in targets):
                raise ValueError(f"transition ({q}, {a}) -> {sorted(targets)} is undeclared")
        if any(q not in states for q in self.initial | self.final):
            raise ValueError("initial/final states must be declared")

    def step(self, states, a):
        out = set()
        for q in states:
            out |= self.delta.get((q, a), frozenset())
        return frozenset(out)

    def accepts(self, word):
        states = self.initial
        for a in self.alphabet.check(word):
            states = self.step(states, a)
            if not states:
                return False
        return bool(states & self.final)

    def reachable(self):
        seen = set(self.initial)
        queue = deque(self.initial)
        while queue:
            q = queue.popleft()
            for a in self.alphabet:
                for t in self.delta.get((q, a), ()):
                    if t not in seen:
                        seen.add(t)
                        queue.append(t)
        return seen

    def is_empty(self):
        return not (self.reachable() & self.final)

    # ---------- boolean operations ----------

    def _same_alphabet(self, other):
        if tuple(self.alphabet) != tuple(other.alphabet):
            raise AlphabetError("automata over different alphabets")

    def intersection(self, other):
        self._same_alphabet(other)
        index = {}
        queue = deque()
        for p in sorted(self.initial):
            for q in sorted(other.initial):
                index[(p, q)] = len(index)
                queue.append((p, q))
        delta = {}
        while queue:
            p, q = queue.popleft()
            for a in self.alphabet:
                targets = set()
                for p2 in self.delta.get((p, a), ()):
                    for q2 in other.delta.get((q, a), ()):
                        if (p2, q2) not in index:
                            index[(p2, q2)] = len(index)
                            queue.append((p2, q2))
                        targets.add(index[(p2, q2)])
                delta[(index[(p, q)], a)] = targets
        final = {i for (p, q), i in index.items() if p in self.final and q in other.final}
        initial = {index[(p, q)] for p in self.initial for q in other.initial}
        return Nfa(self.alphabet, len(index), delta, initial, final)

    def union(self, other):
        self._same_alphabet(other)
        k = self.n_states
        delta = dict(self.delta)
        for (q, a), ts in other.delta.items():
            delta[(q + k, a)] = {t + k for t in ts}
        return Nfa(self.alphabet, k + other.n_states, delta,
                   self.initial | {q + k for q in other.initial},
                   self.final | {q + k for q in other.final})

    def concat(self, other):
        self._same_alphabet(other)
        k = self.n_states
        delta = {key: set(ts) for key, ts in self.delta.items()}
        for (q, a), ts in self.delta.items():
            if ts & self.final:
                delta[(q, a)] |= {t + k for t in other.initial}
        for (q, a), ts in other.delta.items():
            delta[(q + k, a)] = {t + k for t in ts}
        initial = set(self.initial)
        if self.initial & self.final:
            initial |= {q + k for q in other.initial}
        final = {q + k for q in other.final}
        if other.initial & other.final:
            final |= self.final
        return Nfa(self.alphabet, k + other.n_states, delta, initial, final)

    def star(self):
        # L+ by looping back into the initial states, plus a fresh accepting start for the empty word
        k = self.n_states
        delta = {key: set(ts) for key, ts in self.delta.items()}
        for (q, a), ts in self.delta.items():
            if ts & self.final:
                delta[(q, a)] |= self.initial
        for q in self.initial:
            for a in self.alphabet:
                if (q, a) in delta:
                    delta.setdefault((k, a), set()).update(delta[(q, a)])
        return Nfa(self.alphabet, k + 1, delta, {k}, self.final | {k})

    @staticmethod
    def universal(alphabet):
        return Nfa(alphabet, 1, {(0, a): {0} for a in alphabet}, {0}, {0})

    def factor_closure(self):
        """S* L S*."""
        everything = Nfa.universal(self.alphabet)
        return everything.concat(self).concat(everything)

    def determinize(self, cap=None):
        """Complete DFA by subset construction (the empty subset is the sink)."""
        cap = cap or BUDGET.determinize_cap
        start = self.initial
        index = {start: 0}
        queue = deque([start])
        delta = {}
        while queue:
            s = queue.popleft()
            for a in self.alphabet:
                t = self.step(s, a)
                if t not in index:
                    if len(index) >= cap:
                        raise BudgetExceeded("determinized state count", cap)
                    index[t] = len(index)
                    queue.append(t)
                delta[(index[s], a)] = {index[t]}
        final = {i for s, i in index.items() if s & self.final}
        log.debug("determinized %d states into %d", self.n_states, len(index))
        return Nfa(self.alphabet, len(index), delta, {0}, final)

    def complement(self, cap=None):
        d = self.determinize(cap)
        return Nfa(d.alphabet, d.n_states, d.delta, d.initial,
                   set(range(d.n_states)) - d.final)

    def minimize(self, cap=None):
        """Minimal complete DFA via partition refinement."""
        d = self.determinize(cap)
        letters = tuple(d.alphabet)
        succ = [tuple(next(iter(d.delta[(q, a)])) for a in letters) for q in range(d.n_states)]
        block = [1 if q in d.final else 0 for q in range(d.n_states)]
        n_blocks = len(set(block))
        while True:
            sig = {}
            new = []
            for q in range(d.n_states):
                key = (block[q],) + tuple(block[t] for t in succ[q])
                new.append(sig.setdefault(key, len(sig)))
            if len(sig) == n_blocks:
                break
            block, n_blocks = new, len(sig)
        # renumber so the initial block is state 0
        order = {}
        for q in range(d.n_states):
            order.setdefault(block[q], len(order))
        delta = {(order[block[q]], a): {order[block[succ[q][k]]]}
                 for q in range(d.n_states) for k, a in enumerate(letters)}
        final = {order[block[q]] for q in d.final}
        return Nfa(d.alphabet, len(order), delta, {order[block[0]]}, final)

    def is_deterministic(self):
        return len(self.initial) == 1 and all(
            len(self.delta.get((q, a), ())) == 1 for q in range(self.n_states) for a in self.alphabet)

    # ---------- relations ----------

    @cached_property
    def letter_relations(self):
        out = {}
        for a in self.alphabet:
            m = np.zeros((self.n_states, self.n_states), dtype=bool)
            for q in range(self.n_states):
                for t in self.delta.get((q, a), ()):
                    m[q, t] = True
            out[a] = LetterRelation(m)
        return out


# ---------- letter relations ----------

class LetterRelation:
    """Boolean matrix over Q x Q; composition reads self first, then other."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        self.matrix = np.asarray(matrix, dtype=bool)

    @staticmethod
    def identity(n):
        return LetterRelation(np.eye(n, dtype=bool))

    def compose(self, other):
        return LetterRelation((self.matrix.astype(np.int64) @ other.matrix.astype(np.int64)) > 0)

    def __eq__(self, other):
        return isinstance(other, LetterRelation) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.matrix.shape, self.matrix.tobytes()))

    def key(self):
        return self.matrix.shape, self.matrix.tobytes()

    def reaches(self, sources, targets):
        rows = self.matrix[sorted(sources)] if sources else np.zeros((0, self.matrix.shape[1]), bool)
        return bool(rows[:, sorted(targets)].any()) if targets else False

    def __repr__(self):
        return f"LetterRelation({self.matrix.astype(int).tolist()})"


def word_relation(nfa, w):
    """(q, q') set iff the automaton can go q -> q' reading w."""
    rel = LetterRelation.identity(nfa.n_states)
    for a in nfa.alphabet.check(w):
        rel = rel.compose(nfa.letter_relations[a])
    return rel


# ---------- regex ----------

class Regex:
    def compile(self, alphabet, cap=None):
        return compile_regex(self, alphabet, cap)


@dataclass(frozen=True)
class Empty(Regex):
    pass


@dataclass(frozen=True)
class Epsilon(Regex):
    pass


@dataclass(frozen=True)
class Letter(Regex):
    letter: int


@dataclass(frozen=True)
class AnyLetter(Regex):
    pass


@dataclass(frozen=True)
class Concat(Regex):
    parts: tuple


@dataclass(frozen=True)
class Union(Regex):
    parts: tuple


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


@dataclass(frozen=True)
class Complement(Regex):
    inner: Regex


def word_regex(word):
    word = tuple(word)
    if not word:
        return Epsilon()
    if len(word) == 1:
        return Letter(word[0])
    return Concat(tuple(Letter(a) for a in word))


class _Parser:
    def __init__(self, text, alphabet):
        self.tokens = [(i, ch) for i, ch in enumerate(text) if not ch.isspace()]
        self.pos = 0
        self.alphabet = alphabet

    def peek(self):
        return self.tokens[self.pos][1] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message):
        column = self.tokens[self.pos][0] + 1 if self.pos < len(self.tokens) else None
        return ParseError(message, line=1, column=column)

    def parse(self):
        if not self.tokens:
            return Empty()
        r = self.union()
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek()!r}")
        return r

    def union(self):
        parts = [self.concat()]
        while self.peek() == "+":
            self.take()
            parts.append(self.concat())
        return parts[0] if len(parts) == 1 else Union(tuple(parts))

    def concat(self):
        parts = []
        while self.peek() not in (None, "+", ")"):
            parts.append(self.unary())
        if not parts:
            return Epsilon()
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def unary(self):
        if self.peek() == "~":
            self.take()
            return Complement(self.unary())
        r = self.atom()
        while self.peek() == "*":
            self.take()
            r = Star(r)
        return r

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of pattern")
        if tok == "(":
            self.take()
            r = self.union()
            if self.peek() != ")":
                raise self.error("missing ')'")
            self.take()
            return r
        if tok == "@":
            self.take()
            return AnyLetter()
        if tok in "*)+":
            raise self.error(f"unexpected {tok!r}")
        try:
            letter = self.alphabet.letter(tok)
        except AlphabetError:
            raise self.error(f"glyph {tok!r} not in alphabet") from None
        self.take()
        return Letter(letter)


def parse_regex(text, alphabet):
    return _Parser(text, alphabet).parse()


class _Builder:
    """Thompson construction with epsilon moves, flattened by compile_regex."""

    def __init__(self, alphabet, cap):
        self.alphabet = alphabet
        self.cap = cap
        self.n = 0
        self.eps = {}
        self.moves = {}

    def state(self):
        self.n += 1
        return self.n - 1

    def edge(self, p, a, q):
        self.moves.setdefault((p, a), set()).add(q)

    def epsilon(self, p, q):
        self.eps.setdefault(p, set()).add(q)

    def build(self, r):
        s, t = self.state(), self.state()
        if isinstance(r, Empty):
            pass
        elif isinstance(r, Epsilon):
            self.epsilon(s, t)
        elif isinstance(r, Letter):
            if r.letter not in self.alphabet:
                raise AlphabetError(f"letter {r.letter} not in alphabet")
            self.edge(s, r.letter, t)
        elif isinstance(r, AnyLetter):
            for a in self.alphabet:
                self.edge(s, a, t)
        elif isinstance(r, Concat):
            cur = s
            for part in r.parts:
                ps, pt = self.build(part)
                self.epsilon(cur, ps)
                cur = pt
            self.epsilon(cur, t)
        elif isinstance(r, Union):
            for part in r.parts:
                ps, pt = self.build(part)
                self.epsilon(s, ps)
                self.epsilon(pt, t)
        elif isinstance(r, Star):
            ps, pt = self.build(r.inner)
            self.epsilon(s, t)
            self.epsilon(s, ps)
            self.epsilon(pt, ps)
            self.epsilon(pt, t)
        elif isinstance(r, Complement):
            inner = compile_regex(r.inner, self.alphabet, self.cap).complement(self.cap)
            base = self.n
            self.n += inner.n_states
            for (q, a), ts in inner.delta.items():
                for x in ts:
                    self.edge(base + q, a, base + x)
            for q in inner.initial:
                self.epsilon(s, base + q)
            for q in inner.final:
                self.epsilon(base + q, t)
        else:
            raise TypeError(f"not a regex node: {r!r}")
        return s, t

    def closure(self, q):
        seen = {q}
        stack = [q]
        while stack:
            p = stack.pop()
            for x in self.eps.get(p, ()):
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        return seen


def compile_regex(r, alphabet, cap=None):
    """Epsilon-free Nfa with L(Nfa) = L(r), trimmed to reachable states."""
    cap = cap or BUDGET.determinize_cap
    if isinstance(r, str):
        r = parse_regex(r, alphabet)
    b = _Builder(alphabet, cap)
    start, accept = b.build(r)
    closures = {}
    index = {start: 0}
    queue = deque([start])
    delta = {}
    while queue:
        q = queue.popleft()
        cl = closures.setdefault(q, b.closure(q))
        for a in alphabet:
            targets = set()
            for p in cl:
                targets |= b.moves.get((p, a), set())
            for x in targets:
                if x not in index:
                    index[x] = len(index)
                    queue.append(x)
            delta[(index[q], a)] = {index[x] for x in targets}
    final = {i for q, i in index.items()
             if accept in closures.setdefault(q, b.closure(q))}
    return Nfa(alphabet, len(index), delta, {0}, final)


# ---------- language families ----------

def build_elementary_pt(alphabet, letters):
    """a_1 S* a_2 S* ... S* a_k."""
    letters = alphabet.check(letters)
    if not letters:
        raise ValueError("at least one letter required")
    k = len(letters)
    delta = {}
    for i in range(k):
        if i > 0:
            for a in alphabet:
                delta.setdefault((i, a), set()).add(i)
        delta.setdefault((i, letters[i]), set()).add(i + 1)
    return Nfa(alphabet, k + 1, delta, {0}, {k})


def build_local(alphabet, A, B, F):
    """(A S* intersect S* B) minus S* F S*, F a set of two-letter words."""
    A, B = set(alphabet.check(A)), set(alphabet.check(B))
    F = {alphabet.check(f) for f in F}
    if any(len(f) != 2 for f in F):
        raise ValueError("forbidden words must have length 2")
    # state 0 = start, state 1 + i = last letter alphabet.letters[i]
    pos = {a: 1 + i for i, a in enumerate(alphabet)}
    delta = {}
    for a in A:
        delta[(0, a)] = {pos[a]}
    for s in alphabet:
        for b in alphabet:
            if (s, b) not in F:
                delta[(pos[s], b)] = {pos[b]}
    return Nfa(alphabet, len(alphabet) + 1, delta, {0}, {pos[b] for b in B})


def build_renewal(alphabet, u, v, ws, cap=None):
    """u (w_1 + ... + w_k)* v."""
    body = Union(tuple(word_regex(alphabet.check(w)) for w in ws)) if ws else Empty()
    r = Concat((word_regex(alphabet.check(u)), Star(body), word_regex(alphabet.check(v))))
    return compile_regex(r, alphabet, cap)


def modular_renewal(alphabet, a1, a2, a3, k, m):
    """The renewal encoding of a modular halting instance: a1 a3^k (a3^m)* a2."""
    return build_renewal(alphabet, (a1,) + (a3,) * k, (a2,), [(a3,) * m])


EVEN_SHIFT = "(1(00)*)*"
GOLDEN_MEAN = "~(@*11@*)"


# ---------- syntactic monoid ----------

@dataclass(frozen=True)
class NotAperiodic:
    witness: tuple   # representative word of an element with a nontrivial cycle
    period: int


@dataclass(frozen=True, eq=False)
class SyntacticMonoid:
    elements: tuple          # transition functions of the minimal DFA, as tuples
    representatives: tuple   # shortest word per element
    table: np.ndarray        # table[i, j] = index of element i followed by element j
    identity: int = 0

    def product(self, i, j):
        return int(self.table[i, j])

    def __len__(self):
        return len(self.elements)

    def idempotent_exponent(self):
        """Least p with m^p = m^(p+1) for every element, or NotAperiodic."""
        p = 1
        for i in range(len(self.elements)):
            seen = {i: 1}
            cur, k = i, 1
            while True:
                cur, k = self.product(cur, i), k + 1
                if cur in seen:
                    index, period = seen[cur], k - seen[cur]
                    break
                seen[cur] = k
            if period > 1:
                return NotAperiodic(self.representatives[i], period)
            p = max(p, index)
        return p


def syntactic_monoid(nfa, cap=None):
    cap = cap or BUDGET.determinize_cap
    dfa = nfa.minimize(cap)
    letters = tuple(dfa.alphabet)
    moves = {a: tuple(next(iter(dfa.delta[(q, a)])) for q in range(dfa.n_states)) for a in letters}
    ident = tuple(range(dfa.n_states))
    index = {ident: 0}
    reps = [()]
    queue = deque([ident])
    while queue:
        f = queue.popleft()
        for a in letters:
            g = tuple(moves[a][x] for x in f)
            if g not in index:
                if len(index) >= cap:
                    raise BudgetExceeded("syntactic monoid size", cap)
                index[g] = len(index)
                reps.append(reps[index[f]] + (a,))
                queue.append(g)
    elements = sorted(index, key=index.get)
    n = len(elements)
    table = np.zeros((n, n), dtype=np.int64)
    for i, f in enumerate(elements):
        for j, g in enumerate(elements):
            table[i, j] = index[tuple(g[x] for x in f)]
    log.debug("syntactic monoid of %d-state DFA has %d elements", dfa.n_states, n)
    return SyntacticMonoid(tuple(elements), tuple(reps), table, 0)
