"""
Subshifts parameterized by a halting table whose halting, modular and counting
problems encode the halting problem of the tabulated machines.

Every construction pairs a solver (the table lookup the reduction promises)
with a verifier that looks for the syntactic witness in a materialized window.
`check(j)` returns both so the agreement can be asserted or tabulated.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import accumulate

from sympy import nextprime, prime, primorial

from quasiminimal.errors import BudgetExceeded, HypothesisViolation
from quasiminimal.order import LanguageOracle
from quasiminimal.params import BUDGET
from quasiminimal.ruler import psi_segment
from quasiminimal.substitution import gap_lengths, named
from quasiminimal.template import BlockTemplate, Reachable, TemplateSubshift, decide_halting, point_system
from quasiminimal.words import Alphabet, ClopenSet, EventuallyPeriodicPoint, contains, find_all

log = logging.getLogger(__name__)

FIBONACCI_DEPTH = 18     # |tau^18(1)| = 6765


@dataclass(frozen=True)
class ReductionCheck:
    j: int
    solver: bool        # what the reduction answers (oracle status)
    in_window: bool     # the h-preimage that would carry a witness is materialized
    witness: bool       # verifier found the syntactic witness

    @property
    def agrees(self):
        return self.witness == (self.solver and self.in_window)


# ---------- OneMinimal ----------

ONEMINIMAL_ALPHABET = Alphabet.range(4)


def oneminimal_point(o, i, padded=False):
    """x_i = INF(0) . 1^i 2^(i+h) INF(3) if machine i halts at step h, else INF(0) . 1^i INF(2)."""
    if i < 1:
        raise ValueError("machines are numbered from 1")
    h = o.step(i)
    if padded:
        center = (1,) + (0,) * i + (2,)
        if h is not None:
            center += (0,) * (i + h) + (3,)
        return EventuallyPeriodicPoint((0,), center, (0,), 0)
    if h is None:
        return EventuallyPeriodicPoint((0,), (1,) * i, (2,), 0)
    return EventuallyPeriodicPoint((0,), (1,) * i + (2,) * (i + h), (3,), 0)


def _runs(w):
    out = []
    for a in w:
        if out and out[-1][0] == a:
            out[-1][1] += 1
        else:
            out.append([a, 1])
    return [(a, n) for a, n in out]


def oneminimal_member(o, w):
    """w is a factor of the closure of {x_i}, by the shape of the generating points."""
    w = tuple(w)
    if not w:
        return True
    runs = _runs(w)
    letters = tuple(a for a, _ in runs)
    counts = [n for _, n in runs]
    if any(a not in ONEMINIMAL_ALPHABET for a in letters):
        return False
    if any(b != a + 1 for a, b in zip(letters, letters[1:])):
        return False
    halting = [j for j in o.halting_indices() if j >= 1]
    if letters == (3,):
        return bool(halting)
    if len(letters) == 1 or letters in ((0, 1), (1, 2)):
        return True
    if letters == (2, 3):
        return any(j + o.step(j) >= counts[0] for j in halting)
    if letters == (0, 1, 2):
        b, c = counts[1], counts[2]
        return not o.halts(b) or c <= b + o.step(b)
    if letters == (1, 2, 3):
        b, c = counts[0], counts[1]
        return any(j >= b and j + o.step(j) == c for j in halting)
    b, c = counts[1], counts[2]   # 0 1^b 2^c 3
    return o.halts(b) and c == b + o.step(b)


def oneminimal_templates(o):
    """Independent-exponent envelope  <0|1*|2>  plus one exponent-free template per halting machine."""
    ts = [BlockTemplate((0,), (("E", (1,)),), (2,))]
    for j in o.halting_indices():
        if j >= 1:
            ts.append(BlockTemplate((0,), (("C", (1,) * j + (2,) * (j + o.step(j))),), (3,)))
    return TemplateSubshift(tuple(ts), ONEMINIMAL_ALPHABET)


def oneminimal_solver(o, i):
    return o.halts(i)


def oneminimal_verify(o, i, padded=False):
    """Scan x_i for a transition [0 1^i 2] -> [3] (padded: [1 0^i 2] -> [3])."""
    p = oneminimal_point(o, i, padded)
    start = (1,) + (0,) * i + (2,) if padded else (0,) + (1,) * i + (2,)
    return isinstance(decide_halting(point_system([p]), ClopenSet.of(start), ClopenSet.of((3,))),
                      Reachable)


def oneminimal_check(o, i, padded=False):
    return ReductionCheck(i, oneminimal_solver(o, i), True, oneminimal_verify(o, i, padded))


# ---------- prefix codes ----------

@dataclass(frozen=True)
class PrefixCode:
    words: tuple

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __getitem__(self, j):
        return self.words[j]

    def is_prefix_free(self):
        return not any(a != b and b[:len(a)] == a for a in self.words for b in self.words)

    def has_compatible_prefixes(self):
        return all(u[:len(u) - 1] == v[:len(u) - 1]
                   for n, u in enumerate(self.words) for v in self.words[n + 1:])

    def match_prefix(self, w):
        w = tuple(w)
        return next((j for j, u in enumerate(self.words) if w[:len(u)] == u), None)

    def match_suffix(self, w):
        w = tuple(w)
        return next((j for j, v in enumerate(self.words) if len(v) <= len(w) and w[len(w) - len(v):] == v),
                    None)


def extract_prefix_code(oracle, count, horizon=None):
    """
    Branch and restrict: the first word (by length, then lexicographically)
    extending the current prefix with two one-letter extensions yields the
    next code word through its first extension; the second becomes the prefix.
    """
    if count < 1:
        raise ValueError("count must be positive")
    horizon = horizon or BUDGET.code_horizon
    letters = oracle.letters()
    prefix, code = (), []
    while len(code) < count:
        found = None
        for n in range(max(1, len(prefix)), horizon + 1):
            longer = oracle.words(n + 1)
            for w in sorted(v for v in oracle.words(n) if v[:len(prefix)] == prefix):
                exts = [a for a in letters if w + (a,) in longer]
                if len(exts) >= 2:
                    found = w, exts
                    break
            if found:
                break
        if found is None:
            raise BudgetExceeded(f"prefix code word {len(code) + 1}", horizon)
        w, exts = found
        code.append(w + (exts[0],))
        prefix = w + (exts[1],)
        log.debug("code word %d: %s", len(code), code[-1])
    return PrefixCode(tuple(code))


def reversed_oracle(oracle):
    return LanguageOracle(oracle.alphabet, lambda n: {w[::-1] for w in oracle.words(n)},
                          f"reversed {oracle.name}")


def extract_suffix_code(oracle, count, horizon=None):
    code = extract_prefix_code(reversed_oracle(oracle), count, horizon)
    return PrefixCode(tuple(w[::-1] for w in code))


def fibonacci_oracle(depth=FIBONACCI_DEPTH):
    return LanguageOracle.from_substitution(named("fibonacci"), depth, "fibonacci")


# ---------- generic quasiminimal builder ----------

@dataclass(frozen=True)
class ConstructionWindow:
    word: tuple
    origin: int      # offset of the block generated by psi[0]
    indices: tuple   # psi symbol behind each block
    starts: tuple    # marker offsets

    def blocks(self):
        """Marker-delimited blocks without their marker, one per entry of indices."""
        ends = self.starts[1:] + (len(self.word),)
        return [self.word[s + 1:e] for s, e in zip(self.starts, ends)]


def _check_growth(lengths):
    tail = list(accumulate(reversed(lengths), min))[::-1]
    if len(tail) >= 2 and tail[-1] <= tail[0]:
        raise HypothesisViolation(f"image lengths {lengths} do not grow on the probed range")


def generic_build(y_oracle, tau, radius, marker=0, cap=None):
    """tau(psi[-radius, radius]) for tau(n) = marker + (word of Y)."""
    cap = cap or BUDGET.window
    psi = psi_segment(-radius, radius + 1)
    top = max(psi)
    images = {}
    for n in range(top + 2):
        img = tuple(tau(n))
        if not img or img[0] != marker or marker in img[1:]:
            raise HypothesisViolation(f"tau({n}) must be the marker followed by a marker-free word")
        if y_oracle is not None and not y_oracle.contains(img[1:]):
            raise HypothesisViolation(f"tau({n}) without its marker is not a word of {y_oracle.name}")
        images[n] = img
    _check_growth([len(images[n]) for n in range(top + 2)])
    total = sum(len(images[n]) for n in psi)
    if total > cap:
        raise BudgetExceeded(f"window of radius {radius} ({total} symbols)", cap)
    word, starts = [], []
    for n in psi:
        starts.append(len(word))
        word += images[n]
    return ConstructionWindow(tuple(word), starts[radius], tuple(psi), tuple(starts))


def largest_radius(build, cap=None):
    """Largest power-of-two radius whose window fits the cap."""
    cap = cap or BUDGET.window
    r = 1
    while True:
        try:
            build(2 * r, cap)
        except BudgetExceeded:
            return r
        r *= 2


# ---------- transitive, with an LT-universal halting problem ----------

class TransitiveLT:
    """
    tau(i) = 0 u_h w_i v_h, or 0 u_h w_i v_(h+1) once machine h = h(i) halted
    before step i, over a minimal subshift Y given by its language oracle.
    """
    marker = 0

    def __init__(self, oracle, y_oracle=None, horizon=None):
        self.oracle = oracle
        self.y = y_oracle or fibonacci_oracle()
        self.horizon = horizon or BUDGET.code_horizon
        self._u = PrefixCode(())
        self._v = PrefixCode(())

    def u(self, j):
        if j >= len(self._u):
            self._u = extract_prefix_code(self.y, j + 1, self.horizon)
        return self._u[j]

    def v(self, j):
        if j >= len(self._v):
            self._v = extract_suffix_code(self.y, j + 1, self.horizon)
        return self._v[j]

    @lru_cache(maxsize=None)
    def filler(self, i):
        """w_i: shortest length >= i joining u_h to both v_h and v_(h+1); cycles through candidates."""
        h = self.oracle.h(i)
        u, v0, v1 = self.u(h), self.v(h), self.v(h + 1)
        for n in range(i, i + self.horizon + 1):
            length = len(u) + n + len(v0)
            candidates = sorted(
                w[len(u):len(u) + n] for w in self.y.words(length)
                if w[:len(u)] == u and w[len(u) + n:] == v0
                and self.y.contains(u + w[len(u):len(u) + n] + v1)
            )
            if candidates:
                return candidates[(i >> (h + 1)) % len(candidates)]
        raise BudgetExceeded(f"filler for symbol {i}", self.horizon)

    def image(self, i):
        h = self.oracle.h(i)
        v = self.v(h + 1) if self.oracle.halts_before(h, i) else self.v(h)
        return (self.marker,) + self.u(h) + self.filler(i) + v

    def window(self, radius, cap=None):
        return generic_build(self.y, self.image, radius, self.marker, cap)

    def decode_block(self, block):
        """(h, halted) read back from a block's prefix and suffix code words."""
        h = self._u_index(block)
        if h is None:
            return None
        if block[len(block) - len(self.v(h + 1)):] == self.v(h + 1):
            return h, True
        return h, False

    def _u_index(self, block):
        for j in range(len(block) + 1):
            u = self.u(j)
            if len(u) > len(block):
                return None
            if block[:len(u)] == u:
                return j
        return None

    def solver(self, j):
        return self.oracle.halts(j)

    def verify(self, window, j):
        """Some block reads u_j (nonzero)* v_(j+1) between two markers."""
        u, v = self.u(j), self.v(j + 1)
        for b in window.blocks():
            if len(b) >= len(u) + len(v) and b[:len(u)] == u and b[len(b) - len(v):] == v:
                return True
        return False

    def in_window(self, window, j):
        return any(self.oracle.h(i) == j and self.oracle.halts_before(j, i) for i in window.indices)

    def check(self, j, window):
        return ReductionCheck(j, self.solver(j), self.in_window(window, j), self.verify(window, j))


def build_transitive_lt(o, y_oracle=None, radius=64, cap=None):
    t = TransitiveLT(o, y_oracle)
    return t, t.window(radius, cap)


# ---------- countable constructions  INF(0) . tau(0) tau(1) tau(2) ... ----------

class CountablePoint:
    """Right-infinite generator over 0 and a few nonzero symbols, zeros to the left."""
    symbols = (1,)
    name = "countable"

    def __init__(self, oracle):
        self.oracle = oracle
        self._starts = [0]
        self._windows = {}

    def image(self, i):
        raise NotImplementedError

    def image_length(self, i):
        return len(self.image(i))

    def start(self, i):
        """Offset of tau(i) in x."""
        while len(self._starts) <= i:
            n = len(self._starts) - 1
            self._starts.append(self._starts[-1] + self.image_length(n))
        return self._starts[i]

    def fit(self, cap=None):
        """Number of whole images (plus the next marker) fitting the cap."""
        cap = cap or BUDGET.window
        count = 0
        while self.start(count + 1) + 1 <= cap:
            count += 1
        return count

    def images_window(self, count, cap=None):
        """tau(0) ... tau(count-1) followed by the marker opening tau(count)."""
        cap = cap or BUDGET.window
        if self.start(count) + 1 > cap:
            raise BudgetExceeded(f"{self.name} window of {count} images", cap)
        if count not in self._windows:
            word = []
            for i in range(count):
                word += self.image(i)
            self._windows[count] = tuple(word) + self.image(count)[:1]
        return self._windows[count]

    def window(self, lo, hi, cap=None):
        """x[lo, hi)."""
        cap = cap or BUDGET.window
        if hi - lo > cap:
            raise BudgetExceeded(f"{self.name} window [{lo}, {hi})", cap)
        right, i = [], 0
        while len(right) < hi:
            right += self.image(i)
            i += 1
        return (0,) * max(0, min(hi, 0) - lo) + tuple(right[max(lo, 0):max(hi, 0)])

    def m_analytic(self, n):
        raise NotImplementedError

    def m_measured(self, n, extent):
        """Least m such that nonzero symbols of x[0, extent) at or beyond m sit more than n apart."""
        word = self.window(0, extent)
        nz = [k for k, a in enumerate(word) if a]
        close = [b for a, b in zip(nz, nz[1:]) if b - a <= n]
        return max(close) + 1 if close else 0

    def limit_table(self):
        """symbol -> True if INF(0) s INF(0) is a limit point, else last offset of s or None."""
        raise NotImplementedError

    def member(self, w):
        return countable_member(self, w)


def countable_member(x, w):
    """Is w a factor of the orbit closure of x."""
    w = tuple(w)
    if any(a != 0 and a not in x.symbols for a in w):
        return False
    nz = [k for k, a in enumerate(w) if a]
    if not nz:
        return True
    if len(nz) >= 2:
        n = min(b - a for a, b in zip(nz, nz[1:]))
        m = x.m_analytic(n)
        return contains(x.window(-len(w), m + len(w)), w)
    limit = x.limit_table().get(w[nz[0]])
    if limit is True:
        return True
    if limit is None:
        return False
    return contains(x.window(-len(w), limit + len(w) + 1), w)


class ModularSimple(CountablePoint):
    """tau(i) = 1 0^(2^i), or 1 0^(p_h 2^i) once machine h = h(i) >= 1 halted before step i."""
    symbols = (1,)
    name = "modular"

    @staticmethod
    def p(j):
        return int(prime(j + 1))

    def _zeros(self, i):
        h = self.oracle.h(i)
        if h >= 1 and self.oracle.halts_before(h, i):
            return self.p(h) * 2**i
        return 2**i

    def image_length(self, i):
        return 1 + self._zeros(i)

    def image(self, i):
        return (1,) + (0,) * self._zeros(i)

    def m_analytic(self, n):
        return self.start(n.bit_length() + 1)

    def limit_table(self):
        return {1: True}

    def solver(self, j):
        if j < 1:
            raise ValueError("modular encoding starts at machine 1")
        return self.oracle.halts(j)

    def verify(self, j, count):
        p = self.p(j)
        return any(g % p == 0 for g in gap_lengths(self.images_window(count), 1))

    def in_window(self, j, count):
        return any(self.oracle.h(i) == j and self.oracle.halts_before(j, i) for i in range(count))

    def check(self, j, count=None):
        count = self.fit() if count is None else count
        return ReductionCheck(j, self.solver(j), self.in_window(j, count), self.verify(j, count))


class Counting(CountablePoint):
    """tau(i) = 2 0^i, or 2 (0^i 1)^h 0^i once machine h = h(i) >= 1 halted before step i."""
    symbols = (1, 2)
    name = "counting"

    def _ones(self, i):
        h = self.oracle.h(i)
        return h if h >= 1 and self.oracle.halts_before(h, i) else 0

    def image_length(self, i):
        return 1 + i + self._ones(i) * (i + 1)

    def image(self, i):
        return (2,) + ((0,) * i + (1,)) * self._ones(i) + (0,) * i

    def m_analytic(self, n):
        return self.start(n + 1)

    def limit_table(self):
        ones = True if any(j >= 1 for j in self.oracle.halting_indices()) else None
        return {1: ones, 2: True}

    def solver(self, j):
        if j < 1:
            raise ValueError("counting encoding starts at machine 1")
        return self.oracle.halts(j)

    def verify(self, j, count):
        """A [2] -> [2] excursion through 0s and 1s meeting exactly j ones."""
        word = self.images_window(count)
        marks = find_all(word, (2,))
        return any(word[a + 1:b].count(1) == j for a, b in zip(marks, marks[1:]))

    def in_window(self, j, count):
        return any(self.oracle.h(i) == j and self.oracle.halts_before(j, i) for i in range(count))

    def check(self, j, count=None):
        count = self.fit() if count is None else count
        return ReductionCheck(j, self.solver(j), self.in_window(j, count), self.verify(j, count))


COUNTING_SUBSYSTEMS = {
    "0*(1+2)0*": {(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (0, 0, 2), (0, 2, 0), (2, 0, 0)},
    "0*20*": {(0, 0, 0), (0, 0, 2), (0, 2, 0), (2, 0, 0)},
    "0*10*": {(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)},
    "0*": {(0, 0, 0)},
}


def build_modular_simple(o):
    return ModularSimple(o)


def build_counting(o):
    return Counting(o)


# ---------- modular, with primorial gaps ----------

@dataclass(frozen=True)
class PrimorialLevel:
    i: int
    prime: int          # P_i
    primorial: int      # P_i#
    h: int
    k: int              # inverse factor, or 0 on the plain level
    gap: int            # distance between consecutive 1s


class ModularPrimorial:
    """
    Gaps P_i#, or P_i# + (P_i#/P_h) k_i with (P_i#/P_h) k_i = 1 (mod P_h) once machine
    h = h(i) halted before step i. Exact mode uses P_0 = 3 and P_i = the least prime
    >= P_(i-1)^P_(i-1); toy mode uses consecutive odd primes and drops the growth
    condition, so its answers carry no guarantee.
    """

    def __init__(self, oracle, levels=None, toy=False):
        cap = BUDGET.toy_primorial_levels if toy else BUDGET.primorial_levels
        levels = cap if levels is None else levels
        if levels > cap:
            raise BudgetExceeded("primorial levels", cap)
        if levels < 1:
            raise ValueError("at least one level")
        if toy:
            log.warning("toy primorial parameters: growth condition dropped, results are non-conforming")
        self.oracle = oracle
        self.toy = toy
        self.levels = [self._level(i) for i in range(levels)]

    @lru_cache(maxsize=None)
    def level_prime(self, i):
        if self.toy:
            return int(prime(i + 2))
        if i == 0:
            return 3
        p = self.level_prime(i - 1)
        return int(nextprime(p**p - 1))

    def _level(self, i):
        p = self.level_prime(i)
        q = int(primorial(p, nth=False))
        h = self.oracle.h(i)
        if not self.oracle.halts_before(h, i):
            return PrimorialLevel(i, p, q, h, 0, q)
        if h > i:
            raise HypothesisViolation(f"dovetail value {h} at level {i} exceeds the level")
        ph = self.level_prime(h)
        quotient = q // ph
        k = pow(quotient % ph, -1, ph)
        return PrimorialLevel(i, p, q, h, k, q + quotient * k)

    @property
    def gaps(self):
        return [lv.gap for lv in self.levels]

    def check_inverses(self):
        """Every k_i lies in (0, P_h) and (P_i#/P_h) k_i = 1 (mod P_h)."""
        for lv in self.levels:
            if lv.k:
                ph = self.level_prime(lv.h)
                quotient = lv.primorial // ph
                if not (0 < lv.k < ph and quotient % ph and quotient * lv.k % ph == 1):
                    return False
        return True

    def check_plain_divisibility(self):
        """Plain gaps are divisible by P_j for every j <= i."""
        return all(lv.gap % self.level_prime(j) == 0
                   for lv in self.levels if not lv.k for j in range(lv.i + 1))

    def growth_chain(self):
        """2 j P_(j-1)# <= P_(j-1)^P_(j-1) <= P_j for every materialized level j >= 1."""
        out = []
        for j in range(1, len(self.levels) + 1):
            p = self.level_prime(j - 1)
            q = int(primorial(p, nth=False))
            out.append(2 * j * q <= p**p <= self.level_prime(j))
        return out

    def solver(self, j):
        return self.oracle.halts(j)

    def symbolic_witness(self, j):
        """Two 1s at a distance = 1 (mod P_j), from range sums of the gap list."""
        p = self.level_prime(j)
        sums = [0] + list(accumulate(self.gaps))
        return any((sums[b] - sums[a]) % p == 1 for a in range(len(sums)) for b in range(a + 1, len(sums)))

    def in_window(self, j):
        return any(lv.h == j and self.oracle.halts_before(j, lv.i) for lv in self.levels)

    def materialize(self, cap=None):
        """1 0^(g0-1) 1 0^(g1-1) ... 1 (toy parameters only)."""
        cap = cap or BUDGET.window
        if not self.toy:
            raise BudgetExceeded("exact primorial words", cap)
        total = sum(self.gaps) + 1
        if total > cap:
            raise BudgetExceeded(f"primorial window ({total} symbols)", cap)
        word = []
        for g in self.gaps:
            word += (1,) + (0,) * (g - 1)
        return tuple(word) + (1,)

    def scan_witness(self, j, word=None):
        word = self.materialize() if word is None else word
        p = self.level_prime(j)
        ones = find_all(word, (1,))
        return any((b - a) % p == 1 for n, a in enumerate(ones) for b in ones[n + 1:])

    def check(self, j):
        return ReductionCheck(j, self.solver(j), self.in_window(j), self.symbolic_witness(j))


def build_modular_primorial(o, levels=None, toy=False):
    return ModularPrimorial(o, levels, toy)
