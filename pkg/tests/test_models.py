"""Tests for lz77em models."""

import pytest
from pydantic import ValidationError

from lz77em.models.geometry import (
    MIB,
    EmpqConfig,
    MemoryBudget,
    PlainConfig,
    SegmentGeometry,
    empq_segment_size,
    plain_segment_size,
)
from lz77em.models.iostats import IoStats
from lz77em.models.permute import PermuteInstance
from lz77em.models.phrase import LocatedPhrase, ParsingStats, Phrase
from lz77em.models.plan import PartPlan


class TestPhrase:
    def test_literal(self):
        phrase = Phrase.literal(97)
        assert phrase == (97, 0)
        assert phrase.is_literal
        assert phrase.advance == 1

    def test_repeat(self):
        phrase = Phrase.repeat(0, 3)
        assert not phrase.is_literal
        assert phrase.advance == 3

    def test_repeat_needs_length(self):
        with pytest.raises(ValueError):
            Phrase.repeat(0, 0)

    def test_located_literal(self):
        phrase = LocatedPhrase.literal(5, 120)
        assert phrase.is_literal
        assert phrase.kind == "literal"
        assert phrase.end == 6
        assert phrase.to_phrase() == Phrase(120, 0)

    def test_located_repeat(self):
        phrase = LocatedPhrase(1, 8, 6)
        assert phrase.kind == "repeat"
        assert phrase.end == 14
        assert phrase.to_phrase() == Phrase(1, 6)


class TestParsingStats:
    def test_record(self):
        stats = ParsingStats()
        for phrase in [Phrase(97, 0), Phrase(98, 0), Phrase(0, 4)]:
            stats.record(phrase)
        assert stats.z == 3
        assert stats.z_lit == 2
        assert stats.z_rep == 1
        assert stats.n == 6
        assert stats.z == stats.z_lit + stats.z_rep
        assert stats.n == stats.z_lit + stats.repeat_length_sum
        assert stats.avg_phrase_length == 2.0

    def test_empty_ratio_is_none(self):
        assert ParsingStats().avg_phrase_length is None


class TestMemoryBudget:
    def test_defaults(self):
        budget = MemoryBudget()
        assert budget.ram_bytes == 64 * MIB
        assert budget.block_bytes == MIB
        assert budget.fan_out == 63

    def test_block_minimum(self):
        with pytest.raises(ValidationError):
            MemoryBudget(ram_bytes=1 << 20, block_bytes=2048)

    def test_ram_minimum(self):
        with pytest.raises(ValidationError):
            MemoryBudget(ram_bytes=3 * 4096, block_bytes=4096)

    def test_split_clamps(self):
        budget = MemoryBudget(ram_bytes=16 * 4096, block_bytes=4096)
        assert budget.split(4096).ram_bytes == 4 * 4096
        assert budget.split(8 * 4096).ram_bytes == 8 * 4096


class TestSegmentGeometry:
    def test_boundaries(self):
        geom = SegmentGeometry(n=10, b=4)
        assert geom.m == 3
        assert [geom.start(j) for j in range(3)] == [0, 4, 8]
        assert [geom.end(j) for j in range(3)] == [4, 8, 10]
        assert geom.length(2) == 2
        assert geom.segment_of(7) == 1
        assert geom.next_boundary(4) == 8
        assert geom.next_boundary(3) == 4

    def test_every_position_in_one_segment(self):
        geom = SegmentGeometry(n=37, b=5)
        for x in range(geom.n):
            j = geom.segment_of(x)
            assert geom.start(j) <= x < geom.end(j)

    def test_empty_text(self):
        assert SegmentGeometry(n=0, b=4).m == 0


class TestSegmentSizing:
    def test_empq_size_is_half_ram(self):
        budget = MemoryBudget(ram_bytes=10 * MIB, block_bytes=MIB)
        assert empq_segment_size(budget) == 5 * MIB

    def test_plain_size_leaves_room_for_queues(self):
        budget = MemoryBudget(ram_bytes=64 * MIB, block_bytes=MIB)
        b = plain_segment_size(256 * MIB, budget)
        assert b % MIB == 0
        assert b >= 32 * MIB
        assert b + -(-256 * MIB // b) * MIB <= 64 * MIB

    def test_plain_size_falls_back_to_half(self):
        budget = MemoryBudget(ram_bytes=4 * 4096, block_bytes=4096)
        assert plain_segment_size(1 << 30, budget) == 2 * 4096

    def test_config_rejects_oversized_segment(self):
        budget = MemoryBudget(ram_bytes=4 * 4096, block_bytes=4096)
        with pytest.raises(ValidationError):
            EmpqConfig(segment_bytes=3 * 4096, budget=budget)

    def test_plain_segment_may_pass_half_ram(self):
        budget = MemoryBudget(ram_bytes=4 * 4096, block_bytes=4096)
        assert PlainConfig(segment_bytes=3 * 4096, budget=budget).segment_bytes == 3 * 4096
        with pytest.raises(ValidationError):
            PlainConfig(segment_bytes=4 * 4096, budget=budget)

    def test_plain_size_for_empty_text_is_legal(self):
        budget = MemoryBudget(ram_bytes=16 * 4096, block_bytes=4096)
        b = plain_segment_size(0, budget)
        assert PlainConfig(segment_bytes=b, budget=budget).segment_bytes == b

    def test_config_accepts_small_segment(self):
        budget = MemoryBudget(ram_bytes=4 * 4096, block_bytes=4096)
        cfg = PlainConfig(segment_bytes=16, budget=budget)
        assert cfg.segment_bytes == 16

    def test_for_budget(self):
        budget = MemoryBudget(ram_bytes=8 * 4096, block_bytes=4096)
        cfg = EmpqConfig.for_budget(budget, lmax=4)
        assert cfg.segment_bytes == 4 * 4096
        assert cfg.lmax == 4


class TestIoStats:
    def test_totals_sum_streams(self):
        stats = IoStats()
        stats.record_write("a", 100)
        stats.record_write("a", 50)
        stats.record_read("b", 30)
        stats.record_read("b", 0)
        assert stats.stream("a").write_ops == 2
        assert stats.stream("b").read_ops == 1
        assert stats.total_written == 150
        assert stats.total_read == 30
        totals = stats.totals()
        assert totals.write_ops == sum(s.write_ops for s in stats.streams.values())

    def test_counters(self):
        stats = IoStats()
        stats.bump("far.bytes", 7)
        stats.bump("far.bytes", 3)
        assert stats.counter("far.bytes") == 10
        assert stats.counter("missing") == 0
        assert stats.counters == {"far.bytes": 10}


class TestPermuteInstance:
    def test_valid(self):
        inst = PermuteInstance(items=[b"ab", b"cd"], perm=[1, 0])
        assert inst.k == 2
        assert inst.h == 2

    def test_not_a_permutation(self):
        with pytest.raises(ValidationError):
            PermuteInstance(items=[b"ab", b"cd"], perm=[0, 0])

    def test_ragged_items(self):
        with pytest.raises(ValidationError):
            PermuteInstance(items=[b"ab", b"c"], perm=[0, 1])

    def test_symbol_bound(self):
        with pytest.raises(ValidationError):
            PermuteInstance(items=[b"ab", b"cz"], perm=[0, 1], sigma=100)


class TestPartPlan:
    def test_single(self):
        plan = PartPlan.single(z=5, n=8, input_bytes=66)
        assert plan.count == 1
        assert plan.parts[0].phrase_end == 5
        assert plan.parts[0].text_end == 8
        assert plan.disk_budget == 0
