"""Pytest fixtures for lz77em tests."""

import errno
import os
import tempfile
import tracemalloc
from pathlib import Path

import pytest

from lz77em import streams
from lz77em.codec.writer import write_parsing
from lz77em.emkit.scratch import ScratchManager
from lz77em.factorize import factorize_greedy
from lz77em.models.geometry import MemoryBudget
from lz77em.models.iostats import IoStats

SMALL_BLOCK = 4096


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def stats():
    return IoStats()


@pytest.fixture
def budget():
    """The smallest legal budget: 4 blocks of 4 KiB."""
    return MemoryBudget(ram_bytes=4 * SMALL_BLOCK, block_bytes=SMALL_BLOCK)


@pytest.fixture
def scratch(temp_dir):
    manager = ScratchManager(temp_dir / "scratch")
    yield manager
    manager.cleanup()


@pytest.fixture
def peak_ram():
    """Run a callable under tracemalloc and return the peak bytes it allocated."""

    def _measure(fn) -> int:
        tracemalloc.start()
        try:
            base, _ = tracemalloc.get_traced_memory()
            fn()
            _, peak = tracemalloc.get_traced_memory()
        finally:
            tracemalloc.stop()
        return peak - base

    return _measure


@pytest.fixture
def write_phrases(temp_dir):
    """Write a parsing to a fresh .lz77 file and return its path."""
    counter = iter(range(1_000_000))

    def _write(phrases, width: int = 5) -> Path:
        path = temp_dir / f"parsing-{next(counter)}.lz77"
        write_parsing(phrases, path, width)
        return path

    return _write


@pytest.fixture
def write_text_parsing(write_phrases):
    """Factorize a text and write its parsing; returns the parsing path."""

    def _write(text: bytes, width: int = 5) -> Path:
        return write_phrases(factorize_greedy(text), width)

    return _write


class FullDiskFile:
    """An open file on a full file system: every write fails with ENOSPC."""

    def __init__(self, inner):
        self._inner = inner

    @property
    def closed(self) -> bool:
        return self._inner.closed

    def write(self, data) -> int:
        raise OSError(errno.ENOSPC, os.strerror(errno.ENOSPC))

    def close(self) -> None:
        self._inner.close()


@pytest.fixture
def full_disk(monkeypatch):
    """Make writes to the streams with the given names fail as on a full disk."""
    real_open = streams._open

    def _install(*names: str) -> None:
        def _open(path, mode, name):
            file = real_open(path, mode, name)
            return FullDiskFile(file) if name in names and "r" not in mode else file

        monkeypatch.setattr(streams, "_open", _open)

    return _install
