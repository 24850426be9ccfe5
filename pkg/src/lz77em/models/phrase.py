"""Phrase models: parsing elements, located phrases and parsing statistics."""

from typing import NamedTuple

from pydantic import BaseModel, Field


class Phrase(NamedTuple):
    """One parsing element in its on-disk pair form.

    ``length == 0`` encodes a literal whose byte is ``first``;
    ``length >= 1`` encodes a repeat copying ``length`` bytes from ``first``.
    """

    first: int
    length: int

    @classmethod
    def literal(cls, char: int) -> "Phrase":
        return cls(char, 0)

    @classmethod
    def repeat(cls, source: int, length: int) -> "Phrase":
        if length < 1:
            raise ValueError(f"Repeat length must be >= 1, got {length}")
        return cls(source, length)

    @property
    def is_literal(self) -> bool:
        return self.length == 0

    @property
    def advance(self) -> int:
        """Number of text positions the phrase covers."""
        return 1 if self.length == 0 else self.length


class LocatedPhrase(NamedTuple):
    """A phrase annotated with its text position ``q``.

    Literals carry ``char >= 0``, ``length == 1`` and ``p == -1``.
    Repeats carry ``char == -1`` and ``p < q``.
    """

    p: int
    q: int
    length: int
    char: int = -1

    @classmethod
    def literal(cls, q: int, char: int) -> "LocatedPhrase":
        return cls(-1, q, 1, char)

    @property
    def is_literal(self) -> bool:
        return self.char >= 0

    @property
    def kind(self) -> str:
        return "literal" if self.char >= 0 else "repeat"

    @property
    def end(self) -> int:
        return self.q + self.length

    def to_phrase(self) -> Phrase:
        if self.char >= 0:
            return Phrase(self.char, 0)
        return Phrase(self.p, self.length)


class ParsingStats(BaseModel):
    """Counts accumulated while scanning a parsing."""

    n: int = Field(default=0, ge=0, description="Text length")
    z: int = Field(default=0, ge=0, description="Total phrase count")
    z_rep: int = Field(default=0, ge=0, description="Repeat phrase count")
    z_lit: int = Field(default=0, ge=0, description="Literal phrase count")
    repeat_length_sum: int = Field(default=0, ge=0, description="Sum of repeat lengths")

    def record(self, phrase: Phrase) -> None:
        """Account for the next phrase of the parsing."""
        self.z += 1
        if phrase.length == 0:
            self.z_lit += 1
            self.n += 1
        else:
            self.z_rep += 1
            self.repeat_length_sum += phrase.length
            self.n += phrase.length

    @property
    def avg_phrase_length(self) -> float | None:
        """n/z, the repetitiveness measure; undefined for an empty parsing."""
        return self.n / self.z if self.z else None
