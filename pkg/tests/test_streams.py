"""Tests for budgeted block streams."""

import os

import pytest

from lz77em.errors import DiskFullError, StreamError
from lz77em.models.geometry import MIB
from lz77em.streams import BlockReader, BlockWriter, buffered_stream


class TestBlockWriter:
    def test_whole_block_writes(self, temp_dir, stats):
        path = temp_dir / "out.bin"
        with buffered_stream(path, "w", MIB, stats, name="out") as writer:
            for _ in range(3):
                writer.write(bytes(MIB))
        assert stats.stream("out").write_ops == 3
        assert stats.stream("out").bytes_written == 3 * MIB
        assert path.stat().st_size == 3 * MIB

    def test_final_partial_block(self, temp_dir, stats):
        path = temp_dir / "out.bin"
        with BlockWriter(path, stats, "out", 4096) as writer:
            writer.write(b"x" * 5000)
            assert writer.pending == 5000 - 4096
        assert stats.stream("out").write_ops == 2
        assert path.read_bytes() == b"x" * 5000

    def test_append(self, temp_dir, stats):
        path = temp_dir / "out.bin"
        with BlockWriter(path, stats, "out", 4096) as writer:
            writer.write(b"abc")
        with BlockWriter(path, stats, "out", 4096, append=True) as writer:
            writer.write(b"def")
        assert path.read_bytes() == b"abcdef"

    def test_full_disk_without_scratch(self, temp_dir, stats, full_disk):
        full_disk("out")
        with pytest.raises(DiskFullError) as info:
            with BlockWriter(temp_dir / "out.bin", stats, "out", 4096) as writer:
                writer.write(bytes(4096))
        assert info.value.stream == "out"
        assert info.value.live_bytes == 0
        assert stats.stream("out").bytes_written == 0

    def test_buffer_minimum(self, temp_dir, stats):
        with pytest.raises(ValueError):
            BlockWriter(temp_dir / "out.bin", stats, "out", 1024)

    def test_scratch_accounting(self, scratch, stats):
        path = scratch.path("run")
        with BlockWriter(path, stats, "run", 4096, scratch=scratch) as writer:
            writer.write(bytes(10000))
        assert scratch.live == 10000
        assert scratch.peak == 10000
        scratch.remove(path)
        assert scratch.live == 0
        assert scratch.peak == 10000

    def test_open_failure_names_stream(self, temp_dir, stats):
        with pytest.raises(StreamError, match=r"\[out\]"):
            BlockWriter(temp_dir / "missing" / "out.bin", stats, "out", 4096)


class TestBlockReader:
    def test_read_back(self, temp_dir, stats):
        payload = os.urandom(3 * 4096 + 17)
        path = temp_dir / "in.bin"
        path.write_bytes(payload)
        with buffered_stream(path, "r", 4096, stats, name="in") as reader:
            parts = []
            while chunk := reader.read(1000):
                parts.append(chunk)
        assert b"".join(parts) == payload
        assert stats.stream("in").bytes_read == len(payload)
        assert stats.stream("in").read_ops == 4

    def test_empty_file(self, temp_dir, stats):
        path = temp_dir / "empty.bin"
        path.write_bytes(b"")
        with BlockReader(path, stats, "in", 4096) as reader:
            assert list(reader.chunks()) == []
        assert stats.stream("in").read_ops == 0

    def test_offset_and_limit(self, temp_dir, stats):
        path = temp_dir / "in.bin"
        path.write_bytes(bytes(range(256)) * 64)
        with BlockReader(path, stats, "in", 4096, offset=10, limit=20) as reader:
            assert reader.read(100) == bytes(range(10, 30))

    def test_unknown_mode(self, temp_dir, stats):
        with pytest.raises(ValueError):
            buffered_stream(temp_dir / "x", "rw", 4096, stats)
