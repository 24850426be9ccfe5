"""Per-segment queues of recovered phrases sharing one RAM write-back pool."""

import logging
from collections.abc import Iterator
from pathlib import Path

from lz77em.codec.records import DEFAULT_WIDTH
from lz77em.emkit.scratch import ScratchManager
from lz77em.errors import FormatError
from lz77em.models.iostats import IoStats
from lz77em.streams import BlockReader, BlockWriter

logger = logging.getLogger(__name__)


class QueuePool:
    """Unordered queues Q_k of ``(q, payload)`` items.

    Items are ``q`` and ``len(payload)`` as fixed-width integers followed by
    the raw payload. All queue buffers share ``pool_bytes`` of RAM; when the
    pool is full the largest buffer is appended to its queue file.
    """

    def __init__(
        self,
        scratch: ScratchManager,
        stats: IoStats,
        pool_bytes: int,
        block_bytes: int,
        width: int = DEFAULT_WIDTH,
        name: str = "q",
    ):
        self.scratch = scratch
        self.stats = stats
        self.pool_bytes = pool_bytes
        self.block_bytes = block_bytes
        self.width = width
        self.name = name
        self._buffers: dict[int, bytearray] = {}
        self._paths: dict[int, Path] = {}
        self._buffered = 0
        self.flushes = 0

    def append(self, k: int, q: int, payload: bytes | memoryview) -> None:
        buf = self._buffers.get(k)
        if buf is None:
            buf = self._buffers[k] = bytearray()
        before = len(buf)
        try:
            buf += q.to_bytes(self.width, "little")
            buf += len(payload).to_bytes(self.width, "little")
        except OverflowError as e:
            raise FormatError(f"{self.name}: item at q={q} does not fit width {self.width}") from e
        buf += payload
        self._buffered += len(buf) - before
        self.stats.bump(f"{self.name}.payload_written", len(payload))
        self.stats.bump(f"{self.name}.items")
        while self._buffered > self.pool_bytes:
            self._flush(max(self._buffers, key=lambda key: len(self._buffers[key])))

    def _flush(self, k: int) -> None:
        buf = self._buffers.pop(k)
        self._buffered -= len(buf)
        path = self._paths.get(k)
        if path is None:
            path = self._paths[k] = self.scratch.path(f"{self.name}-{k}")
        with BlockWriter(
            path, self.stats, self.name, self.block_bytes, append=True, scratch=self.scratch
        ) as writer:
            writer.write(buf)
        self.flushes += 1

    def drain(self, k: int) -> Iterator[tuple[int, bytes]]:
        """Yield every item of Q_k once, file part first, then delete it."""
        path = self._paths.pop(k, None)
        if path is not None:
            try:
                with BlockReader(path, self.stats, self.name, self.block_bytes) as reader:
                    yield from self._items(reader.read, str(path))
            finally:
                self.scratch.remove(path)
        buf = self._buffers.pop(k, None)
        if buf is not None:
            self._buffered -= len(buf)
            view = memoryview(buf)
            offset = 0

            def read(size: int) -> bytes:
                nonlocal offset
                chunk = view[offset : offset + size]
                offset += len(chunk)
                return bytes(chunk)

            yield from self._items(read, "buffer")

    def _items(self, read, where: str) -> Iterator[tuple[int, bytes]]:
        width = self.width
        while header := read(2 * width):
            if len(header) < 2 * width:
                raise FormatError(f"{self.name}: truncated item header in {where}")
            q = int.from_bytes(header[:width], "little")
            size = int.from_bytes(header[width:], "little")
            payload = read(size)
            if len(payload) < size:
                raise FormatError(f"{self.name}: truncated payload in {where}")
            self.stats.bump(f"{self.name}.payload_read", size)
            yield q, payload

    @property
    def buffered_bytes(self) -> int:
        return self._buffered

    def close(self) -> None:
        for path in self._paths.values():
            self.scratch.remove(path)
        self._paths.clear()
        self._buffers.clear()
        self._buffered = 0
