"""Budgeted sequential streams with byte-accurate I/O accounting.

Every transfer goes through an unbuffered file object in units of the
stream's buffer size (a final partial block excepted), and is recorded in
an ``IoStats`` under the stream's name.
"""

import errno
import os
from collections.abc import Iterator
from pathlib import Path
from types import TracebackType
from typing import TYPE_CHECKING

from lz77em.errors import DiskFullError, StreamError
from lz77em.models.geometry import DEFAULT_BLOCK_BYTES, MIN_BLOCK_BYTES
from lz77em.models.iostats import IoStats

if TYPE_CHECKING:
    from lz77em.emkit.scratch import ScratchManager


def _open(path: Path, mode: str, name: str):
    try:
        return open(path, mode, buffering=0)
    except OSError as e:
        raise StreamError(name, f"cannot open {path}: {e}") from e


def _check_buffer(buffer_bytes: int) -> None:
    if buffer_bytes < MIN_BLOCK_BYTES:
        raise ValueError(f"buffer must be >= {MIN_BLOCK_BYTES} bytes, got {buffer_bytes}")


class BlockWriter:
    """Sequential writer that hands the OS whole blocks."""

    def __init__(
        self,
        path: str | Path,
        stats: IoStats,
        name: str,
        buffer_bytes: int = DEFAULT_BLOCK_BYTES,
        *,
        append: bool = False,
        scratch: "ScratchManager | None" = None,
    ):
        _check_buffer(buffer_bytes)
        self.path = Path(path)
        self.name = name
        self.buffer_bytes = buffer_bytes
        self.bytes_written = 0
        self._stats = stats
        self._scratch = scratch
        self._buffer = bytearray()
        self._file = _open(self.path, "ab" if append else "wb", name)

    def write(self, data: bytes | bytearray | memoryview) -> None:
        self._buffer += data
        if len(self._buffer) >= self.buffer_bytes:
            self._drain(final=False)

    def close(self) -> None:
        if self._file.closed:
            return
        try:
            self._drain(final=True)
        finally:
            self._file.close()

    @property
    def pending(self) -> int:
        return len(self._buffer)

    def _drain(self, final: bool) -> None:
        block = self.buffer_bytes
        offset = 0
        with memoryview(self._buffer) as view:
            while len(view) - offset >= block:
                self._write_raw(view[offset : offset + block])
                offset += block
            if final and offset < len(view):
                self._write_raw(view[offset:])
                offset = len(view)
        del self._buffer[:offset]

    def _write_raw(self, chunk: memoryview) -> None:
        size = len(chunk)
        done = 0
        try:
            while done < size:
                done += self._file.write(chunk[done:])
        except OSError as e:
            if e.errno == errno.ENOSPC:
                scratch = self._scratch
                live, peak = (scratch.live, scratch.peak) if scratch is not None else (0, 0)
                raise DiskFullError(self.name, live, peak) from e
            raise StreamError(self.name, f"write to {self.path} failed: {e}") from e
        self._stats.record_write(self.name, size)
        self.bytes_written += size
        if self._scratch is not None:
            self._scratch.grow(size, self.path)

    def __enter__(self) -> "BlockWriter":
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        self.close()


class BlockReader:
    """Sequential reader fetching one block at a time.

    ``offset`` and ``limit`` select a byte range of the file; the reader
    never reads past ``offset + limit``.
    """

    def __init__(
        self,
        path: str | Path,
        stats: IoStats,
        name: str,
        buffer_bytes: int = DEFAULT_BLOCK_BYTES,
        *,
        offset: int = 0,
        limit: int | None = None,
    ):
        _check_buffer(buffer_bytes)
        self.path = Path(path)
        self.name = name
        self.buffer_bytes = buffer_bytes
        self.bytes_read = 0
        self._stats = stats
        self._remaining = limit
        self._buf = b""
        self._pos = 0
        self._file = _open(self.path, "rb", name)
        if offset:
            self._file.seek(offset)

    def _read_block(self) -> bytes:
        size = self.buffer_bytes
        if self._remaining is not None:
            size = min(size, self._remaining)
        if size <= 0:
            return b""
        try:
            chunk = self._file.read(size)
        except OSError as e:
            raise StreamError(self.name, f"read from {self.path} failed: {e}") from e
        self._stats.record_read(self.name, len(chunk))
        self.bytes_read += len(chunk)
        if self._remaining is not None:
            self._remaining -= len(chunk)
        return chunk

    def read(self, size: int) -> bytes:
        """Return the next ``size`` bytes, fewer only at end of stream."""
        pos = self._pos
        if pos + size <= len(self._buf):
            self._pos = pos + size
            return self._buf[pos : pos + size]
        parts = [self._buf[pos:]]
        have = len(parts[0])
        self._buf, self._pos = b"", 0
        while have < size:
            chunk = self._read_block()
            if not chunk:
                break
            need = size - have
            if len(chunk) <= need:
                parts.append(chunk)
                have += len(chunk)
            else:
                parts.append(chunk[:need])
                self._buf, self._pos = chunk, need
                have = size
        return b"".join(parts)

    def chunks(self) -> Iterator[bytes]:
        """Yield the rest of the stream block by block."""
        if self._pos < len(self._buf):
            rest = self._buf[self._pos :]
            self._buf, self._pos = b"", 0
            yield rest
        while chunk := self._read_block():
            yield chunk

    def close(self) -> None:
        self._file.close()

    def __enter__(self) -> "BlockReader":
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        self.close()


def buffered_stream(
    path: str | Path,
    mode: str,
    budget_bytes: int,
    stats: IoStats,
    name: str | None = None,
    **kwargs,
) -> BlockReader | BlockWriter:
    """Open a sequential reader (``"r"``) or writer (``"w"``/``"a"``) on ``path``."""
    name = name or os.path.basename(str(path))
    if mode == "r":
        return BlockReader(path, stats, name, budget_bytes, **kwargs)
    if mode in ("w", "a"):
        return BlockWriter(path, stats, name, budget_bytes, append=mode == "a", **kwargs)
    raise ValueError(f"Unknown stream mode: {mode}")
