"""
Generating order u <=_X v (every point containing v contains u), semidecided
through SFT approximations of the language, generator detection, and the
table-driven halting decision for quasiminimal systems.
"""
import logging
import threading
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from quasiminimal.errors import BudgetExceeded, NotInLanguage, UnresolvedRepresentative
from quasiminimal.params import BUDGET
from quasiminimal.substitution import xtau_factors
from quasiminimal.template import Reachable, decide_halting, language
from quasiminimal.words import ClopenSet, EventuallyPeriodicPoint, contains, factors, find_all, language_n

log = logging.getLogger(__name__)


class LanguageOracle:
    """n -> B_n(X), memoized behind a lock."""

    def __init__(self, alphabet, words_of_length, name="X"):
        self.alphabet = alphabet
        self.name = name
        self._fn = words_of_length
        self._memo = {}
        self._lock = threading.Lock()

    def words(self, n):
        with self._lock:
            if n not in self._memo:
                self._memo[n] = frozenset(tuple(w) for w in self._fn(n))
            return self._memo[n]

    def contains(self, w):
        w = tuple(w)
        return not w or w in self.words(len(w))

    def letters(self):
        if self.alphabet is not None:
            return tuple(self.alphabet)
        return tuple(sorted({a for (a,) in self.words(1)}))

    @staticmethod
    def from_templates(T, name="templates"):
        return LanguageOracle(T.alphabet, lambda n: language(T, n), name)

    @staticmethod
    def from_points(points, alphabet=None, name="points"):
        points = list(points)
        return LanguageOracle(alphabet, lambda n: language_n(points, n), name)

    @staticmethod
    def from_substitution(tau, depth, name="substitution"):
        return LanguageOracle(tau.alphabet, lambda n: xtau_factors(tau, n, depth), name)

    @staticmethod
    def from_forbidden(alphabet, forbidden, name="sft"):
        return LanguageOracle(alphabet, _sft_language(alphabet, forbidden), name)

    def __repr__(self):
        return f"LanguageOracle({self.name})"


def _sft_language(alphabet, forbidden):
    """B_n of the SFT: labels of bi-infinitely extendable paths in the block graph."""
    forbidden = [tuple(f) for f in forbidden]
    m = max(2, max((len(f) for f in forbidden), default=2))

    def legal(w):
        return not any(contains(w, f) for f in forbidden)

    vertices = {w for w in product(tuple(alphabet), repeat=m - 1) if legal(w)}
    edges = {u: {u[1:] + (a,) for a in alphabet if legal(u + (a,)) and u[1:] + (a,) in vertices}
             for u in vertices}
    while True:
        has_in = {v for targets in edges.values() for v in targets}
        keep = {u for u in vertices if edges[u] & vertices and u in has_in}
        if keep == vertices:
            break
        vertices = keep
        edges = {u: edges[u] & vertices for u in vertices}

    def words(n):
        if n <= m - 1:
            return set().union(*(factors(u, n) for u in vertices)) if vertices else set()
        out = set()
        stack = [(u, u) for u in vertices]
        while stack:
            u, w = stack.pop()
            if len(w) == n:
                out.add(w)
                continue
            for v in edges[u]:
                stack.append((v, w + v[-1:]))
        return out

    return words


def sft_approx_words(oracle, k, m):
    """Length-m words all of whose length-k factors lie in B_k(X)."""
    if m < k:
        raise ValueError("m must be at least k")
    allowed = oracle.words(k)
    letters = oracle.letters()
    layer = set(allowed)
    for _ in range(m - k):
        layer = {w + (a,) for w in layer for a in letters if w[len(w) - k + 1:] + (a,) in allowed}
    return layer


@dataclass(frozen=True)
class ProvenBound:
    u: tuple
    v: tuple
    h: int
    k: int    # SFT approximation order that certified h


@dataclass(frozen=True)
class Proven:
    bound: object         # ProvenBound, or a dict of them for generator_check


@dataclass(frozen=True)
class Unknown:
    budget: int
    witness: tuple = None  # first word that could not be proven


def _centered(oracle, v, h, k):
    m = len(v) + 2 * h
    return [w for w in sft_approx_words(oracle, k, m) if w[h:h + len(v)] == v]


def leq_semidecide(oracle, u, v, budget=None):
    """Proven(ProvenBound) once some (k, h) certifies u <=_X v, else Unknown."""
    budget = BUDGET.order_budget if budget is None else budget
    u, v = tuple(u), tuple(v)
    for w, name in ((u, "u"), (v, "v")):
        if not oracle.contains(w):
            raise NotInLanguage(f"{name} = {''.join(map(str, w))} is not in B({oracle.name})")
    for s in range(budget + 1):
        for h in range(s + 1):
            k = min(s - h + 1, len(v) + 2 * h)
            candidates = _centered(oracle, v, h, k)
            if candidates and all(contains(w, u) for w in candidates):
                log.debug("u <= v certified at h=%d k=%d (diagonal step %d)", h, k, s)
                return Proven(ProvenBound(u, v, h, k))
    return Unknown(budget)


def verify_bound(oracle, bound, extra_order=1):
    """Exhaustive re-check of a ProvenBound at order k + extra_order."""
    k = min(bound.k + extra_order, len(bound.v) + 2 * bound.h)
    return all(contains(w, bound.u) for w in _centered(oracle, bound.v, bound.h, k))


def generator_check(oracle, w, n, budget=None):
    """Is every u in B_n(X) below w."""
    w = tuple(w)
    bounds = {}
    for u in sorted(oracle.words(n)):
        res = leq_semidecide(oracle, u, w, budget)
        if isinstance(res, Unknown):
            return Unknown(res.budget, u)
        bounds[u] = res.bound
    return Proven(bounds)


# ---------- table-driven halting ----------

@dataclass(frozen=True, eq=False)
class LookupTables:
    reps: tuple                                  # representatives w_1..w_k
    classes: dict                                # word -> representative index (u ~ w_i)
    H: np.ndarray                                # H[i, j]: halting from [w_i] to [w_j]
    bounds: dict = field(default_factory=dict)   # (u, w) -> h with u <= w

    def resolve(self, u):
        try:
            return self.classes[tuple(u)]
        except KeyError:
            raise UnresolvedRepresentative(f"no representative for {''.join(map(str, u))}") from None

    def h(self, u, w):
        try:
            return self.bounds[(tuple(u), tuple(w))]
        except KeyError:
            raise UnresolvedRepresentative(f"no bound h for ({u}, {w})") from None


def _direct_transition(oracle, u, v, length, min_step):
    for w in oracle.words(length):
        starts_v = find_all(w, v)
        for a in find_all(w, u):
            if any(b - a >= min_step for b in starts_v):
                return True
    return False


def halting_with_tables(tables, oracle, u, v, min_step=0):
    u, v = tuple(u), tuple(v)
    i, j = tables.resolve(u), tables.resolve(v)
    wi, wj = tables.reps[i], tables.reps[j]
    window = (len(wi) + tables.h(u, wi) + tables.h(wi, u)
              + len(wj) + tables.h(v, wj) + tables.h(wj, v))
    if _direct_transition(oracle, u, v, window + len(u) + len(v), min_step):
        return True
    return bool(tables.H[i, j])


def tables_from_templates(T, words, budget=None, min_step=0):
    """Look-up data for an exponent-free (quasiminimal) template system."""
    if any(t.exponent_count for t in T):
        raise ValueError("look-up tables are only computed for exponent-free systems")
    points = []
    for t in T:
        p = t.as_point()
        points += [p, EventuallyPeriodicPoint(p.left_period, (), p.left_period),
                   EventuallyPeriodicPoint(p.right_period, (), p.right_period)]

    def signature(w):
        return frozenset(p.orbit_key() for p in points if w in language_n([p], len(w)))

    oracle = LanguageOracle.from_templates(T)
    words = [tuple(w) for w in words]
    reps, classes, by_sig = [], {}, {}
    for w in sorted(words, key=lambda w: (len(w), w)):
        if not oracle.contains(w):
            raise NotInLanguage(f"{''.join(map(str, w))} is not in the language")
        sig = signature(w)
        if sig not in by_sig:
            by_sig[sig] = len(reps)
            reps.append(w)
        classes[w] = by_sig[sig]
    H = np.zeros((len(reps), len(reps)), dtype=bool)
    for a, ra in enumerate(reps):
        for b, rb in enumerate(reps):
            res = decide_halting(T, ClopenSet.of(ra), ClopenSet.of(rb), min_step)
            H[a, b] = isinstance(res, Reachable)
    bounds = {}
    for w in words:
        rep = reps[classes[w]]
        for x, y in ((w, rep), (rep, w)):
            res = leq_semidecide(oracle, x, y, budget)
            if isinstance(res, Unknown):
                raise BudgetExceeded(f"order bound for ({x}, {y})", res.budget)
            bounds[(x, y)] = res.bound.h
    return LookupTables(tuple(reps), classes, H, bounds), oracle
