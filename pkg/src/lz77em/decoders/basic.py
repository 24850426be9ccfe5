"""Baseline decoders: whole text in RAM, and a window with positioned reads."""

import errno
import logging
import os
from collections.abc import Iterable
from pathlib import Path

from lz77em.codec.reader import read_parsing
from lz77em.errors import BudgetError, DiskFullError, StreamError
from lz77em.models.geometry import DEFAULT_BLOCK_BYTES, MemoryBudget
from lz77em.models.iostats import IoStats
from lz77em.models.phrase import LocatedPhrase, Phrase
from lz77em.models.reports import DecodeResult
from lz77em.streams import BlockWriter

logger = logging.getLogger(__name__)


def copy_within(buf: bytearray, src: int, dst: int, length: int) -> None:
    """Copy ``length`` bytes from ``buf[src:]`` to ``buf[dst:]`` as a left-to-right
    bytewise copy would, so ``src < dst < src + length`` repeats the period.

    ``dst`` may equal ``len(buf)``, in which case the buffer grows.
    """
    if src >= dst or src + length <= dst:
        buf[dst : dst + length] = buf[src : src + length]
        return
    period = dst - src
    pattern = bytes(buf[src:dst])
    reps, rest = divmod(length, period)
    buf[dst : dst + length] = pattern * reps + pattern[:rest]


def decode_phrases(phrases: Iterable[Phrase]) -> bytes:
    """Decode an in-memory parsing."""
    out = bytearray()
    for first, length in phrases:
        if length == 0:
            out.append(first)
        else:
            if first >= len(out):
                raise ValueError(f"repeat at q={len(out)} has source p={first} >= q")
            copy_within(out, first, len(out), length)
    return bytes(out)


def decode_located(phrases: Iterable[LocatedPhrase]) -> bytes:
    """Decode located phrases (e.g. split pieces) in phrase order."""
    out = bytearray()
    for p, q, length, char in phrases:
        if q != len(out):
            raise ValueError(f"phrase at q={q} does not continue text of length {len(out)}")
        if char >= 0:
            out.append(char)
        else:
            copy_within(out, p, q, length)
    return bytes(out)


def decode_ram(
    parsing_path: str | Path,
    output_path: str | Path | None = None,
    *,
    ram_limit: int | None = None,
    stats: IoStats | None = None,
    block_bytes: int = DEFAULT_BLOCK_BYTES,
) -> bytes:
    """Scan the parsing and decode the whole text in one RAM buffer.

    Raises ``BudgetError`` once the text outgrows ``ram_limit``.
    """
    io = stats if stats is not None else IoStats()
    out = bytearray()
    for p, q, length, char in read_parsing(parsing_path, io, block_bytes):
        if ram_limit is not None and q + length > ram_limit:
            raise BudgetError(
                f"text exceeds the RAM limit of {ram_limit} bytes; use an EM decoder "
                "(--algorithm pq or plain)"
            )
        if char >= 0:
            out.append(char)
        else:
            copy_within(out, p, q, length)
        io.bump("ram.output_bytes", length)
    if output_path is not None:
        with BlockWriter(output_path, io, "output", block_bytes) as writer:
            writer.write(out)
    logger.info("ram: decoded %d bytes", len(out))
    return bytes(out)


class _Window:
    """Output text with only a suffix ``text[base:]`` held in RAM."""

    def __init__(self, path: Path, io: IoStats, window_bytes: int, block_bytes: int):
        self.io = io
        self.window_bytes = window_bytes
        self.block_bytes = block_bytes
        self.base = 0
        self.buf = bytearray()
        try:
            self.file = open(path, "w+b", buffering=0)
        except OSError as e:
            raise StreamError("output", f"cannot open {path}: {e}") from e

    @property
    def end(self) -> int:
        return self.base + len(self.buf)

    def _write(self, data) -> None:
        done = 0
        try:
            while done < len(data):
                done += self.file.write(data[done:])
        except OSError as e:
            if e.errno == errno.ENOSPC:
                raise DiskFullError("output", 0, 0) from e
            raise StreamError("output", f"write failed: {e}") from e
        self.io.record_write("output", len(data))

    def trim(self) -> None:
        block = self.block_bytes
        while len(self.buf) > self.window_bytes + block:
            self._write(memoryview(self.buf)[:block])
            del self.buf[:block]
            self.base += block

    def pread(self, offset: int, size: int) -> bytes:
        # everything before base is already on disk
        try:
            data = os.pread(self.file.fileno(), size, offset)
        except OSError as e:
            raise StreamError("output", f"positioned read at {offset} failed: {e}") from e
        if len(data) != size:
            raise StreamError("output", f"short positioned read at {offset}")
        self.io.record_read("output", size)
        self.io.bump("naive.random_reads")
        return data

    def close(self) -> None:
        if not self.file.closed:
            try:
                self._write(self.buf)
            finally:
                self.file.close()


def decode_naive_em(
    parsing_path: str | Path,
    output_path: str | Path,
    budget: MemoryBudget,
    *,
    stats: IoStats | None = None,
) -> DecodeResult:
    """Left-to-right decoding with a write-back window of about ``budget.ram_bytes``.

    Sources inside the window are copied in RAM; older ones are fetched from
    the output file with positioned reads of at most one block each.
    """
    io = stats if stats is not None else IoStats()
    block = budget.block_bytes
    window = _Window(Path(output_path), io, budget.ram_bytes - 2 * block, block)
    n = 0
    try:
        for p, q, length, char in read_parsing(parsing_path, io, block):
            if char >= 0:
                window.buf.append(char)
                window.trim()
                n = q + 1
                continue
            done = 0
            while done < length:
                src = p + done
                chunk = min(length - done, block)
                if src >= window.base:
                    copy_within(window.buf, src - window.base, len(window.buf), chunk)
                else:
                    chunk = min(chunk, window.base - src)
                    window.buf += window.pread(src, chunk)
                done += chunk
                window.trim()
            n = q + length
    finally:
        window.close()
    logger.info("naive: decoded %d bytes, %d positioned reads", n, io.counter("naive.random_reads"))
    return DecodeResult(algorithm="naive", n=n, io=io)
