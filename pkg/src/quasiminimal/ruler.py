"""
The ruler sequence phi (2-adic valuation of i+1), its maximal words and
deterministic extensions, and the two-sided computable point psi.
"""
import logging

import numpy as np

from quasiminimal.errors import BudgetExceeded, NotAFactor
from quasiminimal.params import BUDGET
from quasiminimal.words import Progression, SemilinearSet, contains, find_all

log = logging.getLogger(__name__)


def ruler_value(i):
    if i < 0:
        raise ValueError("ruler index must be non-negative")
    n = i + 1
    return (n & -n).bit_length() - 1


def ruler_window(start, stop):
    """phi[start, stop) as an int64 array."""
    if start < 0:
        raise ValueError("ruler index must be non-negative")
    n = np.arange(start + 1, stop + 1, dtype=np.int64)
    return np.log2(n & -n).astype(np.int64)


def positions(j):
    """{n 2^(j+1) + 2^j - 1 : n >= 0}."""
    return SemilinearSet((Progression(2**j - 1, 2 ** (j + 1)),))


def maximal_word(k):
    return tuple(int(a) for a in ruler_window(0, 2 ** (k + 1) - 1))


def is_factor(w, top=None):
    w = tuple(w)
    if not w:
        return True
    if min(w) < 0:
        return False
    K = max(w)
    top = top or BUDGET.is_factor_top
    if K > top:
        raise BudgetExceeded("ruler top symbol", top)
    window = tuple(int(a) for a in ruler_window(0, 2 ** (K + 2) + len(w)))
    return contains(window, w)


def _locate(w):
    """(K, offset of w inside maximal_word(K))."""
    if not is_factor(w):
        raise NotAFactor(f"{' '.join(map(str, w))} is not a factor of the ruler sequence")
    K = max(w)
    return K, 2**K - 1 - w.index(K)


def deterministic_extension(w):
    w = tuple(w)
    if not w:
        raise NotAFactor("the empty word has no top symbol")
    K, offset = _locate(w)
    u = maximal_word(K)
    assert u[offset:offset + len(w)] == w
    return u


def extend(w, left=None, right=None):
    """Deterministic extension of w, optionally flanked by chosen symbols and extended again."""
    u = deterministic_extension(w)
    if left is None and right is None:
        return u
    flanked = ((left,) if left is not None else ()) + u + ((right,) if right is not None else ())
    return deterministic_extension(flanked)


def psi_segment(lo, hi):
    """psi[lo, hi): psi[i] = phi[origin + i] once the stage covers the extent."""
    word_len, origin, step = 1, 0, 0
    while origin + lo < 0 or word_len - origin < hi:
        step += 1
        if step % 2 == 0:
            origin += 2**step
        word_len = 2 ** (step + 1) - 1
    log.debug("psi[%d, %d) read at stage %d, origin %d", lo, hi, step, origin)
    return tuple(int(a) for a in ruler_window(origin + lo, origin + hi))


def psi_window(radius):
    """psi[-radius, radius]."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    return psi_segment(-radius, radius + 1)


def singularity_threshold(m, extent):
    """Least k such that no two symbols >= k of phi[0, extent) lie within distance m."""
    arr = ruler_window(0, extent)
    for k in range(int(arr.max()) + 2):
        idx = np.flatnonzero(arr >= k)
        if len(idx) < 2 or int(np.diff(idx).min()) > m:
            return k
    return int(arr.max()) + 1


def gaps_between(word, letter):
    """Distances between consecutive occurrences of letter."""
    idx = find_all(word, (letter,))
    return [b - a for a, b in zip(idx, idx[1:])]
