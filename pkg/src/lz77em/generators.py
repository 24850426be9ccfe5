"""Synthetic corpora and permuting instances for tests and benchmarks."""

import logging

import numpy as np

from lz77em.models.permute import PermuteInstance
from lz77em.models.phrase import Phrase

logger = logging.getLogger(__name__)

CORPUS_KINDS = ("random255", "dna_like", "repetitive")
DEFAULT_ITEM_WIDTH = 8

_DNA_SYMBOLS = np.frombuffer(b"ACGTN\n", dtype=np.uint8)
_DNA_WEIGHTS = [0.29, 0.2, 0.2, 0.29, 0.004, 0.016]


def gen_corpus(kind: str, n: int, seed: int = 0) -> bytes:
    """Deterministic synthetic text of ``n`` bytes.

    random255: i.i.d. uniform over 255 byte values.
    dna_like: skewed i.i.d. over ``ACGTN`` and newline.
    repetitive: a random seed block of 1% of ``n`` over ``ACGT``, repeated,
    with 0.1% of positions mutated to uniform random bytes.
    """
    if n < 1:
        raise ValueError(f"corpus size must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    if kind == "random255":
        data = rng.integers(0, 255, size=n, dtype=np.uint8)
    elif kind == "dna_like":
        data = rng.choice(_DNA_SYMBOLS, size=n, p=_DNA_WEIGHTS)
    elif kind == "repetitive":
        block = _DNA_SYMBOLS[rng.integers(0, 4, size=max(1, n // 100))]
        data = np.resize(block, n)
        mutations = n // 1000
        if mutations:
            where = rng.integers(0, n, size=mutations)
            data[where] = rng.integers(0, 256, size=mutations, dtype=np.uint8)
    else:
        raise ValueError(f"Unknown corpus kind: {kind}. Expected one of {CORPUS_KINDS}")
    return data.tobytes()


def random_permute_instance(
    k: int, h: int = DEFAULT_ITEM_WIDTH, seed: int = 0, sigma: int = 256
) -> PermuteInstance:
    rng = np.random.default_rng(seed)
    items = rng.integers(0, sigma, size=(k, h), dtype=np.uint16).astype(np.uint8)
    perm = rng.permutation(k)
    return PermuteInstance(
        items=[row.tobytes() for row in items],
        perm=perm.tolist(),
        sigma=sigma,
    )


def gen_permute_instance(inst: PermuteInstance) -> list[Phrase]:
    """Parsing whose text is the items followed by the permuted items.

    The first half is spelled with literals; the i-th repeat copies item
    ``perm[i]`` from position ``h * perm[i]``.
    """
    h = inst.h
    if h == 0:
        return []
    phrases = [Phrase(c, 0) for item in inst.items for c in item]
    phrases.extend(Phrase(h * j, h) for j in inst.perm)
    return phrases


def permuted_text(inst: PermuteInstance) -> bytes:
    """The text ``gen_permute_instance(inst)`` decodes to."""
    head = b"".join(inst.items)
    return head + b"".join(inst.items[j] for j in inst.perm)
