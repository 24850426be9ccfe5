"""Tests for phrase splitting and the sort + priority-queue decoder."""

import math

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from lz77em.codec.reader import decode_parsing_bytes
from lz77em.codec.writer import encode_parsing
from lz77em.decoders.basic import decode_located, decode_phrases
from lz77em.decoders.empq import decode_empq
from lz77em.emkit.pq import ITEM_HEADER
from lz77em.decoders.split import (
    FAR,
    LITERAL,
    NEAR,
    classify,
    kind_of,
    partition,
    piece_bound,
    split_phrase,
    split_phrases,
)
from lz77em.generators import (
    gen_corpus,
    gen_permute_instance,
    permuted_text,
    random_permute_instance,
)
from lz77em.models.geometry import EmpqConfig, MemoryBudget, SegmentGeometry
from lz77em.models.phrase import LocatedPhrase
from tests.strategies import ABAABABA, all_literals, parsings, random_repeats


class TestSplitPhrase:
    def test_example(self):
        pieces = list(split_phrase(LocatedPhrase(1, 8, 6), 4))
        assert pieces == [LocatedPhrase(1, 8, 3), LocatedPhrase(4, 11, 1), LocatedPhrase(5, 12, 2)]

    def test_literal_untouched(self):
        literal = LocatedPhrase.literal(3, 97)
        assert list(split_phrase(literal, 4)) == [literal]

    def test_aligned_phrase_is_one_piece(self):
        assert list(split_phrase(LocatedPhrase(0, 8, 4), 4)) == [LocatedPhrase(0, 8, 4)]

    @settings(max_examples=200, deadline=None)
    @given(parsings(max_length=500), st.sampled_from([1, 2, 3, 7, 16, 64]))
    def test_pieces_stay_in_one_segment(self, phrases, b):
        located, stats = decode_parsing_bytes(encode_parsing(phrases))
        text = decode_located(located)
        pieces = []
        for phrase in located:
            mine = list(split_phrase(phrase, b))
            assert len(mine) <= piece_bound(phrase.length, b)
            assert sum(piece.length for piece in mine) == phrase.length
            pieces.extend(mine)
        for piece in pieces:
            if piece.char < 0:
                assert piece.q // b == (piece.end - 1) // b
                assert piece.p // b == (piece.p + piece.length - 1) // b
        assert decode_located(pieces) == text
        geom = SegmentGeometry(n=stats.n, b=b)
        assert list(split_phrases(located, geom)) == pieces


class TestClassify:
    def test_examples(self):
        pieces = [
            LocatedPhrase.literal(0, 97),
            LocatedPhrase(0, 4, 1),
            LocatedPhrase(0, 5, 1),
        ]
        assert [kind for kind, _ in classify(pieces, 4)] == [LITERAL, NEAR, FAR]
        assert kind_of(pieces[2], 8) == NEAR

    def test_partition(self):
        pieces = [LocatedPhrase.literal(0, 97), LocatedPhrase(0, 1, 1), LocatedPhrase(0, 9, 2)]
        far, near, literal = partition(pieces, 4)
        assert far == [pieces[2]]
        assert near == [pieces[1]]
        assert literal == [pieces[0]]


class TestDecodeEmpq:
    def _decode(self, path, out, budget, b, lmax=16, stats=None, tmp=None):
        cfg = EmpqConfig(segment_bytes=b, lmax=lmax, budget=budget)
        return decode_empq(path, out, cfg, tmp=tmp, stats=stats)

    def test_abaababa_tiny_segments(self, write_phrases, temp_dir, budget, stats):
        out = temp_dir / "out.txt"
        result = self._decode(write_phrases(ABAABABA), out, budget, b=2, lmax=2, stats=stats)
        assert out.read_bytes() == b"abaababa"
        assert result.algorithm == "pq"
        assert result.n == 8
        assert result.segments == 4
        assert stats.counter("far.pieces") == 5

    def test_all_literals_queue_nothing(self, write_phrases, temp_dir, budget, stats):
        text = gen_corpus("random255", 3000)
        out = temp_dir / "out.txt"
        self._decode(write_phrases(all_literals(text)), out, budget, b=256, stats=stats)
        assert out.read_bytes() == text
        assert stats.counter("pq.payload_inserted") == 0
        assert stats.counter("far.pieces") == 0

    def test_far_bytes_all_go_through_queue(self, write_text_parsing, temp_dir, budget, stats):
        text = gen_corpus("repetitive", 40_000, seed=2)
        out = temp_dir / "out.txt"
        self._decode(write_text_parsing(text), out, budget, b=1024, lmax=4, stats=stats)
        assert out.read_bytes() == text
        assert stats.counter("far.bytes") > 0
        assert stats.counter("far.bytes") == stats.counter("pq.payload_inserted")
        assert stats.counter("pq.payload_inserted") == stats.counter("pq.payload_extracted")

    def test_permute_instance(self, write_phrases, temp_dir, budget, stats):
        inst = random_permute_instance(2048, h=8, seed=9)
        out = temp_dir / "out.txt"
        result = self._decode(write_phrases(gen_permute_instance(inst)), out, budget, b=4096)
        assert out.read_bytes() == permuted_text(inst)
        assert result.peak_scratch_bytes > 0

    def test_empty_parsing(self, write_phrases, temp_dir, budget):
        out = temp_dir / "out.txt"
        result = self._decode(write_phrases([]), out, budget, b=4096)
        assert out.read_bytes() == b""
        assert result.segments == 0

    def test_scratch_is_removed(self, write_text_parsing, temp_dir, budget):
        tmp = temp_dir / "tmp"
        tmp.mkdir()
        self._decode(write_text_parsing(b"abcabcabd" * 500), temp_dir / "out", budget, 64, tmp=tmp)
        assert list(tmp.iterdir()) == []

    def test_large_instance_bounds(self, write_phrases, temp_dir, stats, peak_ram):
        budget = MemoryBudget(ram_bytes=64 * 4096, block_bytes=4096)
        phrases = random_repeats(10 * budget.ram_bytes + 12345, seed=21)
        path = write_phrases(phrases)
        out = temp_dir / "out.txt"
        cfg = EmpqConfig.for_budget(budget, lmax=256)
        peak = peak_ram(lambda: decode_empq(path, out, cfg, stats=stats))
        assert out.read_bytes() == decode_phrases(phrases)
        assert peak <= 2 * budget.ram_bytes
        assert stats.counter("far.runs") > 1
        spills = stats.counter("pq.spills")
        assert spills > 1
        queued = stats.counter("far.bytes") + ITEM_HEADER * stats.counter("pq.inserted")
        assert stats.stream("pq").bytes_written <= (1 + math.log2(spills)) * queued

    def test_segment_over_half_ram(self, budget):
        with pytest.raises(ValueError):
            EmpqConfig(segment_bytes=budget.ram_bytes, budget=budget)

    @settings(
        max_examples=60, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture]
    )
    @given(
        parsings(max_phrases=60, max_length=300),
        st.sampled_from([16, 256, 4096]),
        st.sampled_from([1, 4, 16]),
    )
    def test_equivalence(self, write_phrases, temp_dir, budget, phrases, b, lmax):
        out = temp_dir / "pq.txt"
        self._decode(write_phrases(phrases), out, budget, b=b, lmax=lmax)
        assert out.read_bytes() == decode_phrases(phrases)
