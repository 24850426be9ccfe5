"""In-RAM greedy LZ77 factorization.

Used to build valid inputs for the decoders, not as an external-memory
algorithm. Longest previous factors come from a suffix array and its LCP
array; ties between equally long factors go to the smallest source
position, so parsings are byte-reproducible.
"""

import logging

import numpy as np
from numba import njit

from lz77em.models.phrase import Phrase

logger = logging.getLogger(__name__)

# the prefix-doubling sort starts from 7-byte prefixes, each byte coded in
# 9 bits as value + 1 so that 0 marks the end of the text
SEED_GRAM = 7
SEED_BITS = 9


def lpf(x: bytes, i: int) -> tuple[int, int]:
    """Longest previous factor at ``i`` as ``(p, length)``.

    ``length == 0`` (with ``p == -1``) when ``x[i]`` does not occur before
    ``i``. The source may overlap position ``i``. Binary search over
    ``bytes.find``; meant for single queries, ``LpfIndex`` for many.
    """
    n = len(x)
    if not 0 <= i < n:
        raise IndexError(f"position {i} outside [0, {n})")
    best_p, best = -1, 0
    lo, hi = 1, n - i
    # a match of length L at p < i exists iff find() hits before i + L - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        p = x.find(x[i : i + mid], 0, i + mid - 1)
        if p != -1:
            best_p, best = p, mid
            lo = mid + 1
        else:
            hi = mid - 1
    return best_p, best


def suffix_array(text: np.ndarray) -> np.ndarray:
    """Suffix array of a uint8 array by prefix doubling.

    Ranks start from ``SEED_GRAM``-byte prefixes and double until every
    suffix has its own rank; each round is one stable argsort of packed
    ``(rank, rank at +k)`` keys.
    """
    n = text.size
    if n == 0:
        return np.empty(0, dtype=np.int32)
    if n >= 1 << 31:
        raise ValueError(f"text of {n} bytes is too long for 32-bit suffix ranks")
    padded = np.zeros(n + SEED_GRAM, dtype=np.uint64)
    padded[:n] = text
    padded[:n] += np.uint64(1)
    seed = np.zeros(n, dtype=np.uint64)
    for offset in range(SEED_GRAM):
        seed = (seed << np.uint64(SEED_BITS)) | padded[offset : offset + n]
    del padded
    _, rank = np.unique(seed, return_inverse=True)
    del seed
    rank = rank.reshape(-1).astype(np.uint64) + np.uint64(1)
    k = SEED_GRAM
    while True:
        second = np.zeros(n, dtype=np.uint64)
        if k < n:
            second[: n - k] = rank[k:]
        key = (rank << np.uint64(32)) | second
        del second
        sa = np.argsort(key, kind="stable")
        ordered = key[sa]
        del key
        fresh = np.empty(n, dtype=np.uint64)
        fresh[0] = 1
        np.cumsum(ordered[1:] != ordered[:-1], dtype=np.uint64, out=fresh[1:])
        fresh[1:] += np.uint64(1)
        del ordered
        rank[sa] = fresh
        distinct = int(fresh[-1])
        del fresh
        if distinct == n or k >= n:
            return sa.astype(np.int32)
        k *= 2


@njit(cache=True)
def _lcp_array(text, sa):
    """Kasai: lcp[r] = LCP of the suffixes at ranks r - 1 and r; lcp[0] = 0."""
    n = sa.size
    rank = np.empty(n, dtype=np.int32)
    for r in range(n):
        rank[sa[r]] = r
    lcp = np.zeros(n, dtype=np.int32)
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        while i + h < n and j + h < n and text[i + h] == text[j + h]:
            h += 1
        lcp[r] = h
        if h > 0:
            h -= 1
    return rank, lcp


@njit(cache=True)
def _lpf_lengths(sa, lcp):
    """LPF length per text position from the nearest smaller-position suffixes.

    One stack pass per direction; ``link`` holds the LCP of each stacked
    suffix with the one above it (the top's with the current suffix).
    """
    n = sa.size
    out = np.zeros(n, dtype=np.int32)
    spos = np.empty(n, dtype=np.int32)
    link = np.zeros(n, dtype=np.int32)
    t = -1
    for r in range(n):
        s = sa[r]
        if t >= 0:
            link[t] = lcp[r]
        while t >= 0 and spos[t] > s:
            v = link[t]
            t -= 1
            if t >= 0 and link[t] > v:
                link[t] = v
        if t >= 0:
            out[s] = link[t]
        t += 1
        spos[t] = s
        link[t] = 0
    t = -1
    for r in range(n - 1, -1, -1):
        s = sa[r]
        if t >= 0:
            link[t] = lcp[r + 1]
        while t >= 0 and spos[t] > s:
            v = link[t]
            t -= 1
            if t >= 0 and link[t] > v:
                link[t] = v
        if t >= 0 and link[t] > out[s]:
            out[s] = link[t]
        t += 1
        spos[t] = s
        link[t] = 0
    return out


@njit(cache=True)
def _first_source(sa, rank, lcp, i, length):
    """Smallest start of ``length`` bytes equal to those at ``i``."""
    n = sa.size
    r = rank[i]
    best = sa[r]
    a = r
    while a > 0 and lcp[a] >= length:
        a -= 1
        if sa[a] < best:
            best = sa[a]
    b = r + 1
    while b < n and lcp[b] >= length:
        if sa[b] < best:
            best = sa[b]
        b += 1
    return best


@njit(cache=True)
def _greedy(sa, rank, lcp, lengths):
    n = sa.size
    firsts = np.empty(n, dtype=np.int64)
    sizes = np.empty(n, dtype=np.int64)
    z = 0
    i = 0
    while i < n:
        length = lengths[i]
        if length == 0:
            firsts[z] = -1
            sizes[z] = 0
            i += 1
        else:
            firsts[z] = _first_source(sa, rank, lcp, i, length)
            sizes[z] = length
            i += length
        z += 1
    return firsts[:z], sizes[:z]


class LpfIndex:
    """Longest-previous-factor queries over one text.

    Builds the suffix array, its inverse and LCP array, and the LPF length
    of every position; a query then only widens the LCP interval around
    the position to find the leftmost source.
    """

    def __init__(self, x: bytes):
        self.x = bytes(x)
        self.n = len(self.x)
        self.text = np.frombuffer(self.x, dtype=np.uint8)
        self.sa = suffix_array(self.text)
        if self.n:
            self.rank, self.lcp = _lcp_array(self.text, self.sa)
            self.lengths = _lpf_lengths(self.sa, self.lcp)
        else:
            self.rank = self.lcp = self.lengths = np.empty(0, dtype=np.int32)

    def lpf(self, i: int) -> tuple[int, int]:
        if not 0 <= i < self.n:
            raise IndexError(f"position {i} outside [0, {self.n})")
        length = int(self.lengths[i])
        if length == 0:
            return -1, 0
        return int(_first_source(self.sa, self.rank, self.lcp, i, length)), length

    def parse(self) -> list[Phrase]:
        """Greedy left-to-right parsing into longest previous factors."""
        if not self.n:
            return []
        firsts, sizes = _greedy(self.sa, self.rank, self.lcp, self.lengths)
        x = self.x
        phrases = []
        q = 0
        for first, size in zip(firsts.tolist(), sizes.tolist()):
            if size == 0:
                phrases.append(Phrase(x[q], 0))
                q += 1
            else:
                phrases.append(Phrase(first, size))
                q += size
        return phrases


def factorize_greedy(x: bytes) -> list[Phrase]:
    """Greedy left-to-right LZ77 parsing of ``x`` into longest previous factors.

    Args:
        x: The text; held in RAM together with its suffix and LCP arrays.

    Returns:
        The phrases in text order: ``Phrase(byte, 0)`` where the byte is new,
        otherwise ``Phrase(p, length)`` with the smallest such ``p``.
    """
    phrases = LpfIndex(x).parse()
    logger.debug("factorized %d bytes into %d phrases", len(x), len(phrases))
    return phrases
