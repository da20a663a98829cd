"""
Countable subshifts given as finite unions of periodic-block templates

    L:p0 | C:c1 | E:q1 | C:c2 | ... | R:pk

A template denotes the orbit closure of every realization INF(p0) c1 q1^e1 c2 ... INF(pk)
with free exponents e_i >= 0. Closure adds the split points obtained as an
exponent goes to infinity, which makes the Cantor-Bendixson derivative a
symbolic computation. Linked exponents (1^i 2^(i+h)) are represented by their
independent-exponent envelope; from the first derivative on both agree.

The decision procedures bound every exponent (saturation): a block repeated
more often than every clopen width plus the connector lengths only repeats a
local picture already seen at the cap. A lower bound on the travel time is met by
widening one exponent at a time, each extra repetition adding at least one step.
"""
import logging
import math
from dataclasses import dataclass
from itertools import product

from quasiminimal.errors import ParseError
from quasiminimal.words import (
    Alphabet, EventuallyPeriodicPoint, contains, language_n, occurrences, primitive_root,
)

log = logging.getLogger(__name__)

KINDS = ("L", "C", "E", "R")


def _rot_left(w):
    return w[1:] + w[:1]


def _rot_right(w):
    return w[-1:] + w[:-1]


@dataclass(frozen=True)
class BlockTemplate:
    left: tuple
    parts: tuple     # ("C", word) connectors and ("E", word) free-exponent blocks
    right: tuple

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        parts = tuple((kind, tuple(word)) for kind, word in self.parts)
        object.__setattr__(self, "parts", parts)
        if not self.left or not self.right:
            raise ValueError("both tails must be nonempty")
        for kind, word in parts:
            if kind not in ("C", "E"):
                raise ValueError(f"unknown block kind {kind!r}")
            if kind == "E" and not word:
                raise ValueError("E-blocks must be nonempty")

    @staticmethod
    def from_point(p):
        c = p.canonical()
        return BlockTemplate(c.left_period, (("C", c.center),) if c.center else (), c.right_period)

    @property
    def blocks(self):
        return [w for kind, w in self.parts if kind == "E"]

    @property
    def exponent_count(self):
        return len(self.blocks)

    @property
    def total_length(self):
        return len(self.left) + len(self.right) + sum(len(w) for _, w in self.parts)

    def realize(self, exponents=()):
        exponents = iter(exponents)
        center = []
        for kind, w in self.parts:
            center += w if kind == "C" else w * next(exponents)
        return EventuallyPeriodicPoint(self.left, tuple(center), self.right, 0)

    def realizations(self, caps):
        """Realizations with e_i <= caps[i] (an int applies to every block)."""
        if isinstance(caps, int):
            caps = [caps] * self.exponent_count
        for exps in product(*(range(c + 1) for c in caps)):
            yield exps, self.realize(exps)

    def as_point(self):
        if self.exponent_count:
            raise ValueError("template has free exponents")
        return self.realize()

    def canonical(self):
        if not self.exponent_count:
            return BlockTemplate.from_point(self.realize())
        left, right = primitive_root(self.left), primitive_root(self.right)
        parts = [(k, w) for k, w in self.parts if w]
        changed = True
        while changed:
            changed = False
            merged = []
            for kind, w in parts:
                if merged and merged[-1][0] == kind == "C":
                    merged[-1] = ("C", merged[-1][1] + w)
                    changed = True
                elif merged and kind == "E" and merged[-1] == ("E", w):
                    changed = True   # q* q* = q*
                else:
                    merged.append((kind, w))
            parts = merged
            if parts and parts[0][0] == "C" and parts[0][1] and parts[0][1][0] == left[0]:
                left, parts[0] = _rot_left(left), ("C", parts[0][1][1:])
                changed = True
            if parts and parts[-1][0] == "C" and parts[-1][1] and parts[-1][1][-1] == right[-1]:
                right, parts[-1] = _rot_right(right), ("C", parts[-1][1][:-1])
                changed = True
            if parts and parts[0][0] == "E" and primitive_root(parts[0][1]) == left:
                parts = parts[1:]
                changed = True
            if parts and parts[-1][0] == "E" and primitive_root(parts[-1][1]) == right:
                parts = parts[:-1]
                changed = True
            parts = [(k, w) for k, w in parts if w]
        t = BlockTemplate(left, tuple(parts), right)
        return t if t.exponent_count else t.canonical()

    def key(self):
        c = self.canonical()
        if not c.exponent_count:
            return ("point",) + c.as_point().orbit_key()
        return ("template", c.left, c.parts, c.right)

    def split(self, i):
        """The two limit pieces as the i-th free exponent goes to infinity."""
        idx = [n for n, (kind, _) in enumerate(self.parts) if kind == "E"][i]
        q = self.parts[idx][1]
        return (BlockTemplate(self.left, self.parts[:idx], q),
                BlockTemplate(q, self.parts[idx + 1:], self.right))

    def tails(self):
        return (BlockTemplate(self.left, (), self.left), BlockTemplate(self.right, (), self.right))


@dataclass(frozen=True, eq=False)
class TemplateSubshift:
    templates: tuple = ()
    alphabet: Alphabet = None

    def __post_init__(self):
        unique = {}
        for t in self.templates:
            c = t.canonical()
            unique.setdefault(c.key(), c)
        ordered = tuple(unique[k] for k in sorted(unique, key=repr))
        object.__setattr__(self, "templates", ordered)

    def __len__(self):
        return len(self.templates)

    def __iter__(self):
        return iter(self.templates)

    def keys(self):
        return frozenset(t.key() for t in self.templates)

    def __eq__(self, other):
        return isinstance(other, TemplateSubshift) and self.keys() == other.keys()

    def __hash__(self):
        return hash(self.keys())

    @property
    def is_empty(self):
        return not self.templates

    @property
    def total_length(self):
        return sum(t.total_length for t in self.templates)


def _member_caps(t, n):
    return [math.ceil(n / len(q)) + 1 for q in t.blocks]


def member(T, w):
    """Is w a factor of some point of the closure."""
    w = tuple(w)
    if not w:
        return not T.is_empty
    for t in T:
        for _, p in t.realizations(_member_caps(t, len(w))):
            lo, hi = p.span(pad=len(w))
            if contains(p.window(lo, hi), w):
                return True
    return False


def language(T, n):
    """B_n of the closure."""
    out = set()
    for t in T:
        out |= language_n([p for _, p in t.realizations(_member_caps(t, n))], n)
    return out


def realizations(T, cap):
    for t in T:
        for _, p in t.realizations(cap):
            yield p


# ---------- Cantor-Bendixson ----------

def cb_derivative(T):
    out = []
    for t in T:
        if t.exponent_count:
            for i in range(t.exponent_count):
                out += t.split(i)
        elif not t.as_point().is_periodic:
            out += t.tails()
    return TemplateSubshift(tuple(out), T.alphabet)


def derivative_chain(T, limit=64):
    chain = [T]
    while not chain[-1].is_empty:
        if len(chain) > limit:
            raise RuntimeError("derivative chain did not reach the empty set")
        chain.append(cb_derivative(chain[-1]))
    log.debug("derivative chain sizes: %s", [len(c) for c in chain])
    return chain


def cb_rank(T):
    return len(derivative_chain(T)) - 1


# ---------- reachability ----------

@dataclass(frozen=True)
class Reachable:
    point: EventuallyPeriodicPoint
    i: int      # position of the C-occurrence
    j: int      # travel time


@dataclass(frozen=True)
class Unreachable:
    pass


def _saturation(T, *clopens):
    return sum(c.width for c in clopens) + T.total_length + 2


def _widened(t, cap, extra):
    """Realizations with every exponent <= cap, then those with one exponent in (cap, cap + extra]."""
    yield from t.realizations(cap)
    for i in range(t.exponent_count if extra > 0 else 0):
        caps = [cap] * t.exponent_count
        caps[i] = cap + extra
        for exps, p in t.realizations(caps):
            if exps[i] > cap:
                yield exps, p


def _left_infinite(occ):
    return next((p for p in occ.progressions if p.step < 0), None)


def _pair(occ_c, occ_d, min_step):
    """(a, b) with a in occ_c, b in occ_d, b - a >= min_step, or None."""
    if occ_c.is_empty() or occ_d.is_empty():
        return None
    inf_c = occ_c.infimum()
    if inf_c != -math.inf:
        b = occ_d.first_after(inf_c + min_step - 1)
        return (inf_c, b) if b is not None else None
    prog = _left_infinite(occ_c)
    if occ_d.infimum() != -math.inf:
        b = occ_d.infimum()
    else:
        b = _left_infinite(occ_d).offset
    n = max(0, math.ceil((prog.offset - (b - min_step)) / -prog.step))
    return prog.offset + n * prog.step, b


def decide_halting(T, C, D, min_step=0):
    """Is there x in [C] with sigma^j(x) in [D] for some j >= min_step."""
    cap = _saturation(T, C, D)
    for t in T:
        for _, p in _widened(t, cap, min_step):
            found = _pair(C.occurrences(p), D.occurrences(p), min_step)
            if found:
                a, b = found
                return Reachable(p, a, b - a)
    return Unreachable()


def _residue_pair(pc, pd, k, m, min_step):
    growable = pd.step > 0 or pc.step < 0
    for n in range(m if pc.step else 1):
        for n2 in range(m if pd.step else 1):
            a, b = pc.offset + n * pc.step, pd.offset + n2 * pd.step
            if (b - a) % m != k:
                continue
            while b - a < min_step and growable:
                if pd.step > 0:
                    b += m * pd.step
                else:
                    a += m * pc.step
            if b - a >= min_step:
                return a, b
    return None


def decide_modular(T, C, D, k, m, min_step=0):
    """As decide_halting with the extra constraint j = k (mod m)."""
    if m < 1 or not 0 <= k < m:
        raise ValueError("need m >= 1 and 0 <= k < m")
    cap = _saturation(T, C, D) + m
    for t in T:
        for _, p in _widened(t, cap, min_step + m if min_step else 0):
            occ_c, occ_d = C.occurrences(p), D.occurrences(p)
            for pc in occ_c.progressions:
                for pd in occ_d.progressions:
                    found = _residue_pair(pc, pd, k, m, min_step)
                    if found:
                        a, b = found
                        return Reachable(p, a, b - a)
    return Unreachable()


def decide_counting(T, C, D, E, F, k, min_step=0):
    """
    x in [C], sigma^j(x) in [D], and a set A of exactly k steps in [1, j-1] with
    sigma^i(x) in [F] for i in A and in [E] for the other steps.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    cap = _saturation(T, C, D, E, F) + k
    widths = max(c.width for c in (C, D, E, F))
    for t in T:
        for _, p in _widened(t, cap, min_step):
            pad = (cap + k + 2) * (len(p.left_period) + len(p.right_period)) + widths
            lo, hi = p.span(pad=pad)
            word = p.window(lo, hi + widths)

            def hit(clopen, pos):
                i = pos - lo
                return word[i:i + clopen.width] in clopen.words

            for a in range(lo, hi):
                if not hit(C, a):
                    continue
                only_f = both = 0
                for j in range(hi - a):
                    if j >= 2:
                        # step j - 1 joins the visited interval [1, j - 1]
                        in_e, in_f = hit(E, a + j - 1), hit(F, a + j - 1)
                        if not (in_e or in_f):
                            break
                        only_f += in_f and not in_e
                        both += in_e and in_f
                        if only_f > k:
                            break
                    if j >= min_step and hit(D, a + j) and only_f <= k <= only_f + both:
                        return Reachable(p, a, j)
    return Unreachable()


def decide_tuple(T, words):
    """Do the words occur in this order at strictly increasing positions of some point."""
    words = [tuple(w) for w in words]
    if not words:
        raise ValueError("tuple must be nonempty")
    for t in T:
        cap = sum(len(w) for w in words) + t.total_length + 2
        for _, p in t.realizations(cap):
            cur = -math.inf
            for w in words:
                occ = occurrences(p, w)
                if occ.is_empty():
                    break
                if cur == -math.inf:
                    cur = occ.infimum()
                else:
                    nxt = occ.first_after(cur)
                    if nxt is None:
                        break
                    cur = nxt
            else:
                return True
    return False


# ---------- file format ----------

def parse_templates(text, alphabet=None):
    """One template per line: `L:word | C:word | E:word | R:word`, `#` comments."""
    rows = []
    glyphs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = []
        for tok in line.split("|"):
            kind, sep, word = tok.strip().partition(":")
            kind = kind.strip()
            if not sep or kind not in KINDS:
                raise ParseError(f"bad block {tok.strip()!r}", line=lineno)
            word = "".join(word.split())
            tokens.append((kind, word))
            glyphs += list(word)
        if len(tokens) < 2 or tokens[0][0] != "L" or tokens[-1][0] != "R":
            raise ParseError("a template starts with L: and ends with R:", line=lineno)
        if any(kind in "LR" for kind, _ in tokens[1:-1]):
            raise ParseError("tails only at the ends", line=lineno)
        if not tokens[0][1] or not tokens[-1][1]:
            raise ParseError("tails must be nonempty", line=lineno)
        if any(kind == "E" and not w for kind, w in tokens):
            raise ParseError("E-blocks must be nonempty", line=lineno)
        rows.append(tokens)
    if not rows:
        raise ParseError("no templates")
    alphabet = alphabet or Alphabet.from_glyphs(glyphs)
    out = []
    for tokens in rows:
        words = [(kind, alphabet.parse(w)) for kind, w in tokens]
        out.append(BlockTemplate(words[0][1], tuple(words[1:-1]), words[-1][1]))
    return TemplateSubshift(tuple(out), alphabet)


def format_template(t, alphabet=None):
    fmt = alphabet.format if alphabet else (lambda w: "".join(map(str, w)))
    tokens = [f"L:{fmt(t.left)}"] + [f"{k}:{fmt(w)}" for k, w in t.parts] + [f"R:{fmt(t.right)}"]
    return " | ".join(tokens)


def format_templates(T):
    return "\n".join(format_template(t, T.alphabet) for t in T) + "\n"


def point_system(points, alphabet=None):
    return TemplateSubshift(tuple(BlockTemplate.from_point(p) for p in points), alphabet)


SUNNY = "L:0 | C:1 | R:0"
STAIRS = "L:0 | E:1 | E:2 | R:3"
