"""Splitting phrases at segment boundaries and classifying the pieces."""

from collections.abc import Iterable, Iterator

from lz77em.models.geometry import SegmentGeometry
from lz77em.models.phrase import LocatedPhrase

LITERAL = "literal"
NEAR = "near"
FAR = "far"


def piece_bound(length: int, b: int) -> int:
    """Upper bound on the pieces one phrase of ``length`` splits into."""
    return 2 * -(-length // b) + 1


def split_phrase(phrase: LocatedPhrase, b: int) -> Iterator[LocatedPhrase]:
    """Cut a repeat so every piece and its source each sit in one segment.

    Each cut is the nearest of the next boundary after q, the next boundary
    after p, and the end of the phrase.
    """
    if phrase.char >= 0:
        yield phrase
        return
    p, q, remaining = phrase.p, phrase.q, phrase.length
    while remaining:
        cut = min(b - q % b, b - p % b, remaining)
        yield LocatedPhrase(p, q, cut)
        p += cut
        q += cut
        remaining -= cut


def split_phrases(
    phrases: Iterable[LocatedPhrase], geom: SegmentGeometry
) -> Iterator[LocatedPhrase]:
    b = geom.b
    for phrase in phrases:
        yield from split_phrase(phrase, b)


def kind_of(piece: LocatedPhrase, b: int) -> str:
    if piece.char >= 0:
        return LITERAL
    return FAR if piece.q - piece.p > b else NEAR


def classify(pieces: Iterable[LocatedPhrase], b: int) -> Iterator[tuple[str, LocatedPhrase]]:
    """Tag each split piece as literal, near or far, keeping phrase order."""
    for piece in pieces:
        yield kind_of(piece, b), piece


def partition(
    pieces: Iterable[LocatedPhrase], b: int
) -> tuple[list[LocatedPhrase], list[LocatedPhrase], list[LocatedPhrase]]:
    """In-memory ``(far, near, literal)`` lists."""
    far: list[LocatedPhrase] = []
    near: list[LocatedPhrase] = []
    literal: list[LocatedPhrase] = []
    sinks = {FAR: far, NEAR: near, LITERAL: literal}
    for kind, piece in classify(pieces, b):
        sinks[kind].append(piece)
    return far, near, literal
