"""Fixed-width little-endian integer records.

Bulk packing and unpacking go through numpy; streams encode and decode one
record at a time so nothing larger than a block is ever held.
"""

from collections.abc import Iterator, Sequence

import numpy as np

from lz77em.errors import FormatError
from lz77em.streams import BlockReader

WIDTHS = (5, 8)
DEFAULT_WIDTH = 5


class RecordCodec:
    """Records of ``fields`` unsigned integers, each ``width`` bytes wide."""

    def __init__(self, fields: int, width: int = DEFAULT_WIDTH):
        if not 1 <= width <= 8:
            raise ValueError(f"width must be in [1, 8], got {width}")
        self.fields = fields
        self.width = width
        self.size = fields * width
        self.max_value = (1 << (8 * width)) - 1

    def __repr__(self) -> str:
        return f"RecordCodec(fields={self.fields}, width={self.width})"

    def pack_one(self, values: Sequence[int]) -> bytes:
        width = self.width
        try:
            return b"".join(v.to_bytes(width, "little") for v in values)
        except OverflowError as e:
            raise FormatError(f"value in {tuple(values)} does not fit in {width} bytes") from e

    def unpack_one(self, data: bytes | memoryview, offset: int = 0) -> tuple[int, ...]:
        width = self.width
        return tuple(
            int.from_bytes(data[start : start + width], "little")
            for start in range(offset, offset + self.size, width)
        )

    def pack(self, records: Sequence[Sequence[int]] | np.ndarray) -> bytes:
        """Pack many records at once; accepts a ``(count, fields)`` array."""
        if len(records) == 0:
            return b""
        try:
            values = np.asarray(records, dtype=np.uint64).reshape(-1, self.fields)
        except OverflowError as e:
            raise FormatError(f"record value does not fit in 64 bits: {e}") from e
        if self.width < 8 and int(values.max()) > self.max_value:
            top = int(values.max())
            raise FormatError(f"record value {top} does not fit in {self.width} bytes")
        raw = values.astype("<u8").view(np.uint8).reshape(-1, 8)[:, : self.width]
        return np.ascontiguousarray(raw).tobytes()

    def unpack_array(self, data: bytes | memoryview) -> np.ndarray:
        """Decode whole records into a ``(count, fields)`` uint64 array."""
        if len(data) % self.size:
            raise FormatError(
                f"{len(data)} bytes is not a whole number of {self.size}-byte records"
            )
        raw = np.frombuffer(data, dtype=np.uint8).reshape(-1, self.width)
        padded = np.zeros((raw.shape[0], 8), dtype=np.uint8)
        padded[:, : self.width] = raw
        return padded.view("<u8").reshape(-1, self.fields)


def iter_records(reader: BlockReader, codec: RecordCodec) -> Iterator[tuple[int, ...]]:
    """Stream records from a block reader, decoding each straight from the block."""
    size = codec.size
    leftover = b""
    for chunk in reader.chunks():
        view = memoryview(chunk)
        start = 0
        if leftover:
            # a record straddling two blocks
            start = size - len(leftover)
            if len(chunk) < start:
                leftover += chunk
                continue
            yield codec.unpack_one(leftover + chunk[:start])
        usable = start + (len(chunk) - start) // size * size
        for offset in range(start, usable, size):
            yield codec.unpack_one(view, offset)
        leftover = bytes(view[usable:])
    if leftover:
        raise FormatError(f"{reader.name}: truncated record ({len(leftover)} trailing bytes)")


def read_records(
    path, stats, name: str, codec: RecordCodec, buffer_bytes: int
) -> Iterator[tuple[int, ...]]:
    """Open ``path`` and stream its records; the file is closed when exhausted."""
    with BlockReader(path, stats, name, buffer_bytes) as reader:
        yield from iter_records(reader, codec)


class RecordSink:
    """Packs records one at a time into a block writer."""

    def __init__(self, writer, codec: RecordCodec):
        self.writer = writer
        self.codec = codec
        self.count = 0

    def add(self, record: Sequence[int]) -> None:
        self.writer.write(self.codec.pack_one(record))
        self.count += 1
