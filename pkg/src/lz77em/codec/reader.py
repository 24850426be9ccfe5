"""Read ``.lz77`` parsings as streams of located phrases."""

from collections.abc import Iterator
from pathlib import Path

from lz77em.codec.records import WIDTHS, RecordCodec, iter_records
from lz77em.codec.writer import HEADER_BYTES, MAGIC
from lz77em.errors import FormatError
from lz77em.models.geometry import DEFAULT_BLOCK_BYTES
from lz77em.models.iostats import IoStats
from lz77em.models.phrase import LocatedPhrase, ParsingStats, Phrase
from lz77em.streams import BlockReader


def parse_header(header: bytes) -> int:
    """Validate a 16-byte header and return the integer width."""
    if len(header) < HEADER_BYTES:
        raise FormatError(f"Truncated header ({len(header)} bytes)")
    if header[: len(MAGIC)] != MAGIC:
        raise FormatError(f"Bad magic {header[: len(MAGIC)]!r}")
    width = header[len(MAGIC)]
    if width not in WIDTHS:
        raise FormatError(f"Unsupported integer width {width}")
    if any(header[len(MAGIC) + 1 : HEADER_BYTES]):
        raise FormatError("Reserved header bytes must be zero")
    return width


def read_header(path: str | Path) -> int:
    with open(path, "rb") as f:
        return parse_header(f.read(HEADER_BYTES))


def _locate(rows, q: int, stats: ParsingStats) -> Iterator[LocatedPhrase]:
    for first, length in rows:
        if length == 0:
            if first >= 256:
                raise FormatError(f"Literal at q={q} carries value {first} >= 256")
            stats.z += 1
            stats.z_lit += 1
            stats.n += 1
            yield LocatedPhrase(-1, q, 1, first)
            q += 1
        else:
            if first >= q:
                raise FormatError(f"Repeat at q={q} has source p={first} >= q")
            stats.z += 1
            stats.z_rep += 1
            stats.repeat_length_sum += length
            stats.n += length
            yield LocatedPhrase(first, q, length)
            q += length


class ParsingReader:
    """Iterable over the located phrases of a ``.lz77`` file.

    ``stats`` fills in while iterating and is complete once the iterator is
    exhausted. ``start_index``/``start_pos``/``stop_index`` select a phrase
    range; the caller supplies the text position of ``start_index``.
    """

    def __init__(
        self,
        path: str | Path,
        stats: IoStats | None = None,
        buffer_bytes: int = DEFAULT_BLOCK_BYTES,
        *,
        start_index: int = 0,
        start_pos: int = 0,
        stop_index: int | None = None,
        stream_name: str = "parsing",
    ):
        self.path = Path(path)
        self.width = read_header(self.path)
        self.codec = RecordCodec(2, self.width)
        body = self.path.stat().st_size - HEADER_BYTES
        if body % self.codec.size:
            raise FormatError(f"{self.path}: truncated record at end of parsing")
        self.count = body // self.codec.size
        self.file_bytes = body + HEADER_BYTES
        self.io = stats if stats is not None else IoStats()
        self.buffer_bytes = buffer_bytes
        self.start_index = start_index
        self.start_pos = start_pos
        self.stop_index = self.count if stop_index is None else min(stop_index, self.count)
        self.stream_name = stream_name
        self.stats = ParsingStats()

    def __iter__(self) -> Iterator[LocatedPhrase]:
        self.stats = ParsingStats()
        records = self.stop_index - self.start_index
        if records <= 0:
            return
        size = self.codec.size
        reader = BlockReader(
            self.path,
            self.io,
            self.stream_name,
            self.buffer_bytes,
            offset=HEADER_BYTES + self.start_index * size,
            limit=records * size,
        )
        with reader:
            yield from _locate(iter_records(reader, self.codec), self.start_pos, self.stats)


def read_parsing(
    path: str | Path,
    stats: IoStats | None = None,
    buffer_bytes: int = DEFAULT_BLOCK_BYTES,
    **kwargs,
) -> ParsingReader:
    """Open a parsing for streaming.

    Args:
        path: The ``.lz77`` file; its header is validated here.
        stats: Receives the bytes read under the stream name ``parsing``.
        buffer_bytes: Read granularity, one block.
        **kwargs: ``start_index``, ``start_pos``, ``stop_index`` or
            ``stream_name``, passed to ``ParsingReader``.

    Returns:
        A ``ParsingReader``; iterate it for ``LocatedPhrase`` values.

    Raises:
        FormatError: Bad magic, width or reserved bytes, or a truncated body.
    """
    return ParsingReader(path, stats, buffer_bytes, **kwargs)


def decode_parsing_bytes(data: bytes) -> tuple[list[LocatedPhrase], ParsingStats]:
    """Decode an in-memory ``.lz77`` image."""
    width = parse_header(data[:HEADER_BYTES])
    codec = RecordCodec(2, width)
    body = data[HEADER_BYTES:]
    if len(body) % codec.size:
        raise FormatError("truncated record at end of parsing")
    stats = ParsingStats()
    phrases = list(_locate(codec.unpack_array(body).tolist(), 0, stats))
    return phrases, stats


def phrases_of(located: list[LocatedPhrase]) -> list[Phrase]:
    return [phrase.to_phrase() for phrase in located]
