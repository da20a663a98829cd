"""
Alphabets, finite words, eventually periodic bi-infinite points, clopen sets
and semilinear occurrence sets.

Words are plain tuples of small non-negative integers; glyphs only matter when
reading or printing. A point  INF(u) v . v' INF(w)  is stored with the index of
its first center letter, so  x[origin + k] = center[k].
"""
import math
import re
from dataclasses import dataclass, field

from quasiminimal.errors import AlphabetError, ParseError

Word = tuple  # tuple[int, ...]


# ---------- alphabets ----------

@dataclass(frozen=True)
class Alphabet:
    letters: tuple
    names: tuple = None   # one printable glyph per letter, or None for decimal printing

    def __post_init__(self):
        letters = tuple(int(a) for a in self.letters)
        object.__setattr__(self, "letters", letters)
        if not letters:
            raise AlphabetError("alphabet must be nonempty")
        if letters[0] < 0 or any(b <= a for a, b in zip(letters, letters[1:])):
            raise AlphabetError("letters must be strictly increasing non-negative integers")
        if self.names is not None:
            names = tuple(self.names)
            object.__setattr__(self, "names", names)
            if len(names) != len(letters):
                raise AlphabetError("one glyph per letter")
            if len(set(names)) != len(names) or any(len(g) != 1 or g.isspace() for g in names):
                raise AlphabetError("glyphs must be distinct single characters")
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(letters)})

    @staticmethod
    def range(k, glyphs=None):
        return Alphabet(tuple(range(k)), tuple(glyphs) if glyphs else None)

    @staticmethod
    def from_glyphs(glyphs):
        """Digit glyphs keep their value; any other glyph set is numbered in order."""
        seen = []
        for g in glyphs:
            if not g.isspace() and g not in seen:
                seen.append(g)
        if not seen:
            raise AlphabetError("alphabet must be nonempty")
        if all(g.isdigit() for g in seen):
            seen.sort(key=int)
            return Alphabet(tuple(int(g) for g in seen), tuple(seen))
        return Alphabet(tuple(range(len(seen))), tuple(seen))

    def __contains__(self, letter):
        return letter in self._index

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)

    def glyph(self, letter):
        if letter not in self:
            raise AlphabetError(f"letter {letter} not in alphabet")
        if self.names is None:
            return str(letter)
        return self.names[self._index[letter]]

    def letter(self, glyph):
        if self.names is None:
            try:
                value = int(glyph)
            except ValueError:
                raise AlphabetError(f"glyph {glyph!r} not in alphabet") from None
        else:
            try:
                value = self.letters[self.names.index(glyph)]
            except ValueError:
                raise AlphabetError(f"glyph {glyph!r} not in alphabet") from None
        if value not in self:
            raise AlphabetError(f"glyph {glyph!r} not in alphabet")
        return value

    def check(self, word):
        bad = [a for a in word if a not in self]
        if bad:
            raise AlphabetError(f"letters {sorted(set(bad))} not in alphabet {list(self.letters)}")
        return tuple(word)

    def parse(self, text):
        """Glyph strings ignore whitespace; decimal alphabets read space-separated integers."""
        if self.names is None:
            return tuple(self.letter(tok) for tok in text.split())
        return tuple(self.letter(ch) for ch in text if not ch.isspace())

    def format(self, word):
        if self.names is None:
            return " ".join(str(self.glyph(a)) for a in word)
        return "".join(self.glyph(a) for a in word)


def decimal(word):
    """Words over N print as space-separated decimal symbols."""
    return " ".join(str(a) for a in word)


def glyphs(word, alphabet=None):
    if alphabet is not None:
        return alphabet.format(word)
    if all(0 <= a < 10 for a in word):
        return "".join(str(a) for a in word)
    return decimal(word)


def parse_glyphs(text, alphabet=None):
    if alphabet is not None:
        return alphabet.parse(text)
    out = []
    for ch in text:
        if ch.isspace():
            continue
        if not ch.isdigit():
            raise ParseError(f"unexpected glyph {ch!r}")
        out.append(int(ch))
    return tuple(out)


# ---------- words ----------

def _text(word):
    return "".join(map(chr, word))


def factors(w, n):
    """Length-n factors of w."""
    w = tuple(w)
    if n <= 0:
        raise ValueError("n must be positive")
    return {w[i:i + n] for i in range(len(w) - n + 1)}


def find_all(word, pattern):
    """Start indices of (possibly overlapping) occurrences of pattern in word."""
    hay, needle = _text(word), _text(pattern)
    out, i = [], hay.find(needle)
    while i >= 0:
        out.append(i)
        i = hay.find(needle, i + 1)
    return out


def contains(word, pattern):
    return _text(pattern) in _text(word)


def primitive_root(w):
    w = tuple(w)
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w


def least_rotation(w):
    """(index, rotation) of the lexicographically least rotation."""
    w = tuple(w)
    best = min(range(len(w)), key=lambda t: w[t:] + w[:t])
    return best, w[best:] + w[:best]


def _rot_left(w):
    return w[1:] + w[:1]


def _rot_right(w):
    return w[-1:] + w[:-1]


# ---------- semilinear sets ----------

@dataclass(frozen=True, order=True)
class Progression:
    """{offset + step*n : n >= 0}; step 0 is a singleton, a negative step runs to -inf."""
    offset: int
    step: int = 0

    def __contains__(self, i):
        if self.step == 0:
            return i == self.offset
        d = i - self.offset
        return d % self.step == 0 and d // self.step >= 0

    def first_after(self, b):
        """Smallest element strictly greater than b, or None."""
        if self.step == 0:
            return self.offset if self.offset > b else None
        if self.step > 0:
            if self.offset > b:
                return self.offset
            n = (b + 1 - self.offset + self.step - 1) // self.step
            return self.offset + n * self.step
        if self.offset <= b:
            return None
        n = (self.offset - b - 1) // (-self.step)
        return self.offset + n * self.step

    def includes(self, other):
        if other.step == 0:
            return other.offset in self
        if self.step == 0 or (self.step > 0) != (other.step > 0):
            return False
        return other.step % self.step == 0 and other.offset in self


@dataclass(frozen=True)
class SemilinearSet:
    progressions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "progressions", _canonical_progressions(self.progressions))

    def __contains__(self, i):
        return any(i in p for p in self.progressions)

    def __bool__(self):
        return bool(self.progressions)

    def is_empty(self):
        return not self.progressions

    def infimum(self):
        if not self.progressions:
            return math.inf
        if any(p.step < 0 for p in self.progressions):
            return -math.inf
        return min(p.offset for p in self.progressions)

    def supremum(self):
        if not self.progressions:
            return -math.inf
        if any(p.step > 0 for p in self.progressions):
            return math.inf
        return max(p.offset for p in self.progressions)

    def first_after(self, b):
        hits = [x for x in (p.first_after(b) for p in self.progressions) if x is not None]
        return min(hits) if hits else None

    def elements_in(self, lo, hi):
        return [i for i in range(lo, hi) if i in self]

    def union(self, other):
        return SemilinearSet(self.progressions + other.progressions)


def _canonical_progressions(progs):
    items = set(Progression(int(p.offset), int(p.step)) if isinstance(p, Progression)
                else Progression(*p) for p in progs)
    changed = True
    while changed:
        changed = False
        for p in sorted(items):
            if any(q != p and q.includes(p) for q in items):
                items.discard(p)
                changed = True
                break
        if changed:
            continue
        for s in sorted(q for q in items if q.step == 0):
            for q in sorted(items):
                if q.step != 0 and s.offset == q.offset - q.step:
                    items.discard(s)
                    items.discard(q)
                    items.add(Progression(s.offset, q.step))
                    changed = True
                    break
            if changed:
                break
    return tuple(sorted(items))


# ---------- eventually periodic points ----------

@dataclass(frozen=True)
class EventuallyPeriodicPoint:
    left_period: Word
    center: Word
    right_period: Word
    origin_offset: int = 0   # index of the first center letter

    def __post_init__(self):
        for name in ("left_period", "center", "right_period"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.left_period or not self.right_period:
            raise ValueError("periods must be nonempty")

    def letter_at(self, i):
        a, c = self.origin_offset, len(self.center)
        if a <= i < a + c:
            return self.center[i - a]
        if i >= a + c:
            w = self.right_period
            return w[(i - a - c) % len(w)]
        u = self.left_period
        return u[(i - a) % len(u)]

    def window(self, lo, hi):
        """x[lo, hi) as a word."""
        return tuple(self.letter_at(i) for i in range(lo, hi))

    def canonical(self):
        u = primitive_root(self.left_period)
        w = primitive_root(self.right_period)
        v = list(self.center)
        a = self.origin_offset
        start = 0
        while start < len(v) and v[start] == u[0]:
            u = _rot_left(u)
            start += 1
            a += 1
        v = v[start:]
        while v and v[-1] == w[-1]:
            w = _rot_right(w)
            v.pop()
        if not v:
            for _ in range(len(u) * len(w)):
                if u == w or w[0] != u[0]:
                    break
                u, w = _rot_left(u), _rot_left(w)
                a += 1
            if u == w:
                t, m = least_rotation(u)
                return EventuallyPeriodicPoint(m, (), m, (a + t) % len(m))
        return EventuallyPeriodicPoint(u, tuple(v), w, a)

    @property
    def is_periodic(self):
        c = self.canonical()
        return not c.center and c.left_period == c.right_period

    def same_orbit(self, other):
        p, q = self.canonical(), other.canonical()
        return (p.left_period, p.center, p.right_period) == (q.left_period, q.center, q.right_period)

    def orbit_key(self):
        p = self.canonical()
        return p.left_period, p.center, p.right_period

    def span(self, pad=0):
        """Index range [lo, hi) covering the center, one period of each tail and pad letters."""
        a, c = self.origin_offset, len(self.center)
        return a - len(self.left_period) - pad, a + c + len(self.right_period) + pad


def ep_shift(p, k):
    """Canonical form of sigma^k(p), (sigma x)_i = x_{i+1}."""
    return EventuallyPeriodicPoint(p.left_period, p.center, p.right_period,
                                   p.origin_offset - k).canonical()


def occurrences(p, u):
    """{i : p[i, i+|u|) = u} as a semilinear set."""
    u = tuple(u)
    if not u:
        raise ValueError("pattern must be nonempty")
    p = p.canonical()
    n = len(u)
    a, c = p.origin_offset, len(p.center)
    pl, pr = len(p.left_period), len(p.right_period)
    progs = []
    for i in range(a - n - pl + 1, a + c + pr):
        if p.window(i, i + n) != u:
            continue
        if i >= a + c:
            progs.append(Progression(i, pr))
        elif i <= a - n:
            progs.append(Progression(i, -pl))
        else:
            progs.append(Progression(i, 0))
    return SemilinearSet(tuple(progs))


def language_n(points, n):
    """Length-n factors of the orbit closures of the points, limit points included."""
    out = set()
    for p in points:
        p = p.canonical()
        lo, hi = p.span(pad=n)
        word = p.window(lo, hi)
        out |= factors(word, n)
    return out


# ---------- clopen sets ----------

@dataclass(frozen=True)
class ClopenSet:
    width: int
    words: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        words = frozenset(tuple(w) for w in self.words)
        object.__setattr__(self, "words", words)
        if self.width <= 0:
            raise ValueError("width must be positive")
        if any(len(w) != self.width for w in words):
            raise ValueError("clopen words must all have the set's width")

    @staticmethod
    def of(*words):
        words = [tuple(w) for w in words]
        if not words:
            raise ValueError("at least one word needed to infer the width")
        return ClopenSet(len(words[0]), frozenset(words))

    def __contains__(self, word):
        return tuple(word) in self.words

    def hits(self, p, i):
        return p.window(i, i + self.width) in self.words

    def occurrences(self, p):
        out = SemilinearSet()
        for w in sorted(self.words):
            out = out.union(occurrences(p, w))
        return out


# ---------- point literals ----------

_POINT = re.compile(r"^\s*INF\s*\(([^()]*)\)(.*?)INF\s*\(([^()]*)\)\s*$", re.S)


def parse_point(text, alphabet=None):
    """`INF(u) v . v' INF(w)`; the dot marks coordinate 0 and may be omitted."""
    m = _POINT.match(text)
    if not m:
        raise ParseError(f"malformed point literal {text!r}")
    left, middle, right = m.groups()
    if middle.count(".") > 1:
        raise ParseError("at most one origin dot allowed")
    before, _, after = middle.partition(".")
    u = parse_glyphs(left, alphabet)
    w = parse_glyphs(right, alphabet)
    if not u or not w:
        raise ParseError("periods must be nonempty")
    v1 = parse_glyphs(before, alphabet)
    v2 = parse_glyphs(after, alphabet)
    return EventuallyPeriodicPoint(u, v1 + v2, w, -len(v1)).canonical()


def format_point(p, alphabet=None):
    a, c = p.origin_offset, len(p.center)
    lo, hi = min(a, 0), max(a + c, 0)
    u = p.window(lo - len(p.left_period), lo)
    v1, v2 = p.window(lo, 0), p.window(0, hi)
    w = p.window(hi, hi + len(p.right_period))
    left = f"INF({glyphs(u, alphabet)})"
    mid = " ".join(s for s in (glyphs(v1, alphabet), ".", glyphs(v2, alphabet)) if s)
    return f"{left} {mid} INF({glyphs(w, alphabet)})"
