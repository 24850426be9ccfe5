"""Hypothesis strategies for valid parsings."""

import random

import hypothesis.strategies as st

from lz77em.models.phrase import Phrase


@st.composite
def parsings(draw, max_phrases: int = 60, max_length: int = 300, alphabet: int = 256):
    """Valid parsings mixing literals, near and far repeats and self-overlaps."""
    count = draw(st.integers(min_value=0, max_value=max_phrases))
    phrases: list[Phrase] = []
    n = 0
    for _ in range(count):
        if n == 0 or draw(st.integers(0, 3)) == 0:
            phrases.append(Phrase(draw(st.integers(0, alphabet - 1)), 0))
            n += 1
        else:
            p = draw(st.integers(0, n - 1))
            length = draw(st.integers(1, max_length))
            phrases.append(Phrase(p, length))
            n += length
    return phrases


def all_literals(text: bytes) -> list[Phrase]:
    return [Phrase(c, 0) for c in text]


# "abaababa": literals a, b then (0,1), (0,3), (1,2)
ABAABABA = [Phrase(97, 0), Phrase(98, 0), Phrase(0, 1), Phrase(0, 3), Phrase(1, 2)]


def random_repeats(n: int, seed: int = 0, mean_length: int = 256) -> list[Phrase]:
    """A parsing of an n-byte text: 256 literals, then repeats from anywhere before."""
    rng = random.Random(seed)
    phrases = [Phrase(c, 0) for c in range(min(n, 256))]
    pos = len(phrases)
    while pos < n:
        length = min(n - pos, rng.randint(1, 2 * mean_length))
        phrases.append(Phrase(rng.randrange(pos), length))
        pos += length
    return phrases
