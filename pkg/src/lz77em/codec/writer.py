"""Write LZ77 parsings in the fixed-width ``.lz77`` format."""

from collections.abc import Iterable
from pathlib import Path

from lz77em.codec.records import DEFAULT_WIDTH, WIDTHS, RecordCodec
from lz77em.errors import FormatError
from lz77em.models.geometry import DEFAULT_BLOCK_BYTES
from lz77em.models.iostats import IoStats
from lz77em.models.phrase import ParsingStats, Phrase
from lz77em.streams import BlockWriter

MAGIC = b"LZ77EMD1"
HEADER_BYTES = 16

BATCH_RECORDS = 8192


def make_header(width: int) -> bytes:
    if width not in WIDTHS:
        raise FormatError(f"Unsupported integer width {width}; expected one of {WIDTHS}")
    return MAGIC + bytes([width]) + bytes(HEADER_BYTES - len(MAGIC) - 1)


def _check(phrase: Phrase) -> None:
    first, length = phrase
    if first < 0 or length < 0:
        raise FormatError(f"Negative value in phrase {tuple(phrase)}")
    if length == 0 and first >= 256:
        raise FormatError(f"Literal phrase {tuple(phrase)} carries a value >= 256")


def encode_parsing(phrases: Iterable[Phrase], width: int = DEFAULT_WIDTH) -> bytes:
    """Encode a parsing to bytes in memory."""
    codec = RecordCodec(2, width)
    checked = []
    for phrase in phrases:
        _check(phrase)
        checked.append(phrase)
    return make_header(width) + codec.pack(checked)


def write_parsing(
    phrases: Iterable[Phrase],
    path: str | Path,
    width: int = DEFAULT_WIDTH,
    stats: IoStats | None = None,
    buffer_bytes: int = DEFAULT_BLOCK_BYTES,
) -> ParsingStats:
    """Stream a parsing to ``path``.

    Args:
        phrases: ``(first, length)`` pairs in text order.
        path: Destination file, overwritten.
        width: Integer width in bytes, 5 or 8.
        stats: Receives the bytes written under the stream name ``parsing``.
        buffer_bytes: Write granularity, one block.

    Returns:
        Counts of the written parsing (z, literals, repeats, n).

    Raises:
        FormatError: A negative value, a literal >= 256 or a value too wide
            for ``width``.
    """
    codec = RecordCodec(2, width)
    header = make_header(width)
    io = stats if stats is not None else IoStats()
    parsing_stats = ParsingStats()
    with BlockWriter(path, io, "parsing", buffer_bytes) as writer:
        writer.write(header)
        batch: list[Phrase] = []
        for phrase in phrases:
            _check(phrase)
            parsing_stats.record(phrase)
            batch.append(phrase)
            if len(batch) >= BATCH_RECORDS:
                writer.write(codec.pack(batch))
                batch.clear()
        if batch:
            writer.write(codec.pack(batch))
    return parsing_stats
