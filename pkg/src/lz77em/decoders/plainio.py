"""Segment-at-a-time decoding with distribution and per-segment queues.

Far pieces are distributed by source segment into R_j; recovered far
phrases go to per-destination queues Q_k with their full payload. Each
segment is rebuilt in four phases: near pieces sourced in the previous
segment, literals, the queue Q_j, then near pieces sourced in the same
segment. Under a disk budget the parsing is decoded in parts; a later part
first replays earlier segments from the output file to fill its queues.
"""

import logging
from pathlib import Path

from lz77em.codec.reader import read_parsing
from lz77em.codec.records import RecordCodec, RecordSink, read_records
from lz77em.decoders.basic import copy_within
from lz77em.decoders.planner import distribution_budget, plan_parts
from lz77em.decoders.split import split_phrase
from lz77em.emkit.distribute import Buckets, distribute
from lz77em.emkit.queues import QueuePool
from lz77em.emkit.scratch import ScratchManager
from lz77em.errors import BudgetError, InvariantError
from lz77em.models.geometry import PLAIN_STREAM_BLOCKS, PlainConfig, SegmentGeometry
from lz77em.models.iostats import IoStats
from lz77em.models.plan import Part, PartPlan
from lz77em.models.reports import DecodeResult
from lz77em.streams import BlockReader, BlockWriter

logger = logging.getLogger(__name__)


class DiskMeter:
    """Samples scratch + written output + parsing file against a disk budget."""

    def __init__(self, scratch: ScratchManager, input_bytes: int, disk_budget: int = 0):
        self.scratch = scratch
        self.input_bytes = input_bytes
        self.disk_budget = disk_budget
        self.output_bytes = 0
        self.peak = 0
        scratch.add_listener(lambda _live: self.sample())

    def sample(self) -> int:
        used = self.scratch.live + self.output_bytes + self.input_bytes
        if used > self.peak:
            self.peak = used
        if self.disk_budget and used > self.disk_budget:
            raise BudgetError(
                f"measured disk usage {used} bytes exceeds the budget of {self.disk_budget}"
            )
        return used


class _PartFiles:
    """The phrase-ordered streams and the far-piece buckets of one part."""

    def __init__(self, lit: Path, prev: Path, same: Path, buckets: Buckets):
        self.lit = lit
        self.prev = prev
        self.same = same
        self.buckets = buckets


class PlainDecoder:
    def __init__(
        self,
        parsing_path: str | Path,
        output_path: str | Path,
        cfg: PlainConfig,
        scratch: ScratchManager,
        stats: IoStats,
    ):
        self.parsing_path = Path(parsing_path)
        self.output_path = Path(output_path)
        self.cfg = cfg
        self.b = cfg.segment_bytes
        self.block = cfg.budget.block_bytes
        self.scratch = scratch
        self.io = stats
        width = read_parsing(self.parsing_path, stats).width
        self.lit_codec = RecordCodec(2, width)
        self.rep_codec = RecordCodec(3, width)
        self.width = width
        self.pool_bytes = max(
            self.block, cfg.budget.ram_bytes - self.b - PLAIN_STREAM_BLOCKS * self.block
        )
        self.meter: DiskMeter | None = None

    def run(self, plan: PartPlan) -> None:
        self.meter = DiskMeter(self.scratch, plan.input_bytes, self.cfg.disk_budget)
        for index, part in enumerate(plan.parts):
            logger.debug(
                "part %d: phrases [%d, %d), text [%d, %d)",
                index,
                part.phrase_start,
                part.phrase_end,
                part.text_start,
                part.text_end,
            )
            self._decode_part(part, append=index > 0)

    def _route(self, part: Part, m: int) -> _PartFiles:
        """Split the part's phrases and send every piece to its stream."""
        io, b, block, scratch = self.io, self.b, self.block, self.scratch
        reader = read_parsing(
            self.parsing_path,
            io,
            block,
            start_index=part.phrase_start,
            start_pos=part.text_start,
            stop_index=part.phrase_end,
        )
        paths = [scratch.path(stem) for stem in ("literals", "r-prev", "r-same")]
        with (
            BlockWriter(paths[0], io, "literals", block, scratch=scratch) as lit_out,
            BlockWriter(paths[1], io, "r-prev", block, scratch=scratch) as prev_out,
            BlockWriter(paths[2], io, "r-same", block, scratch=scratch) as same_out,
        ):
            literals = RecordSink(lit_out, self.lit_codec)
            prev = RecordSink(prev_out, self.rep_codec)
            same = RecordSink(same_out, self.rep_codec)

            def far_pieces():
                for phrase in reader:
                    if phrase.char >= 0:
                        literals.add((phrase.q, phrase.char))
                        continue
                    for p, q, length, _ in split_phrase(phrase, b):
                        if q - p > b:
                            io.bump("far.pieces")
                            io.bump("far.bytes", length)
                            yield (p, q, length)
                        elif p // b == q // b:
                            same.add((p, q, length))
                        else:
                            prev.add((p, q, length))

            buckets = distribute(
                far_pieces(),
                lambda record: record[0] // b,
                m,
                self.rep_codec,
                distribution_budget(self.cfg.budget),
                scratch,
                io,
                name="r",
            )
        return _PartFiles(paths[0], paths[1], paths[2], buckets)

    def _read_output(self, y: bytearray, offset: int, size: int) -> None:
        """Fill ``y[:size]`` from the already written text at ``offset``."""
        with BlockReader(
            self.output_path, self.io, "replay", self.block, offset=offset, limit=size
        ) as reader:
            data = reader.read(size)
        if len(data) != size:
            raise InvariantError(offset // self.b, f"output holds {len(data)} of {size} bytes")
        y[:size] = data
        self.io.bump("replay.bytes_read", size)

    def _decode_part(self, part: Part, append: bool) -> None:
        io, b = self.io, self.b
        t0, t1 = part.text_start, part.text_end
        geom = SegmentGeometry(n=t1, b=b)
        j0 = t0 // b
        files = self._route(part, max(1, geom.m))
        buckets = files.buckets
        pool = QueuePool(self.scratch, io, self.pool_bytes, self.block, self.width, name="q")
        y = bytearray(b)

        # replay earlier segments whose far pieces feed this part
        loaded = -1
        for j in range(j0):
            if not buckets.counts[j]:
                continue
            self._read_output(y, j * b, b)
            loaded = j
            for p, q, length in buckets.read(j):
                pool.append(q // b, q, bytes(y[p - j * b : p - j * b + length]))
        if j0 > 0 and loaded != j0 - 1:
            self._read_output(y, (j0 - 1) * b, b)
        if t0 > j0 * b:
            # the head of segment j0 was decoded by an earlier part
            head = bytearray(t0 - j0 * b)
            self._read_output(head, j0 * b, len(head))
            y[: len(head)] = head

        lit_iter = read_records(files.lit, io, "literals", self.lit_codec, self.block)
        prev_iter = read_records(files.prev, io, "r-prev", self.rep_codec, self.block)
        same_iter = read_records(files.same, io, "r-same", self.rep_codec, self.block)
        next_lit = next(lit_iter, None)
        next_prev = next(prev_iter, None)
        next_same = next(same_iter, None)

        with BlockWriter(self.output_path, io, "output", self.block, append=append) as out:
            for j in range(j0, geom.m):
                start, end = geom.start(j), geom.end(j)
                lo = max(start, t0)
                covered = 0

                while next_prev is not None and next_prev[1] < end:
                    p, q, length = next_prev
                    i, src = q - start, p - start + b
                    if src < i:
                        raise InvariantError(
                            j, f"source {p} of the piece at {q} already overwritten"
                        )
                    y[i : i + length] = y[src : src + length]
                    covered += length
                    next_prev = next(prev_iter, None)

                while next_lit is not None and next_lit[0] < end:
                    y[next_lit[0] - start] = next_lit[1]
                    covered += 1
                    next_lit = next(lit_iter, None)

                for q, payload in pool.drain(j):
                    i = q - start
                    y[i : i + len(payload)] = payload
                    covered += len(payload)

                while next_same is not None and next_same[1] < end:
                    p, q, length = next_same
                    if not start <= p < q:
                        raise InvariantError(j, f"source {p} of the piece at {q} not yet recovered")
                    copy_within(y, p - start, q - start, length)
                    covered += length
                    next_same = next(same_iter, None)

                if covered != end - lo:
                    raise InvariantError(j, f"recovered {covered} of {end - lo} bytes")
                out.write(memoryview(y)[lo - start : end - start])
                self.meter.output_bytes = t0 + out.bytes_written
                self.meter.sample()

                for p, q, length in buckets.read(j):
                    pool.append(q // b, q, bytes(y[p - start : p - start + length]))

        if next_lit is not None or next_prev is not None or next_same is not None:
            raise InvariantError(geom.m, "phrases left over after the last segment")
        if pool.buffered_bytes:
            raise InvariantError(geom.m, "queue items left over after the last segment")
        self.meter.output_bytes = t1
        for path in (files.lit, files.prev, files.same):
            self.scratch.remove(path)
        buckets.discard()
        pool.close()


def _run(
    parsing_path: str | Path,
    output_path: str | Path,
    cfg: PlainConfig,
    plan: PartPlan | None,
    tmp: str | Path | None,
    stats: IoStats | None,
) -> DecodeResult:
    io = stats if stats is not None else IoStats()
    b = cfg.segment_bytes
    if plan is None:
        plan = plan_parts(parsing_path, cfg.disk_budget, b, cfg.budget, stats=io)
    geom = SegmentGeometry(n=plan.n, b=b)
    logger.info(
        "plain: n=%d, b=%d, %d segments, %d parts", plan.n, b, geom.m, plan.count
    )
    with ScratchManager(tmp, prefix="lz77em-plain-") as scratch:
        decoder = PlainDecoder(parsing_path, output_path, cfg, scratch, io)
        decoder.run(plan)
        peak_scratch = scratch.peak
        peak_disk = decoder.meter.peak
    return DecodeResult(
        algorithm="plain",
        n=plan.n,
        segment_bytes=b,
        segments=geom.m,
        peak_scratch_bytes=peak_scratch,
        peak_disk_bytes=peak_disk,
        part_count=plan.count,
        io=io,
    )


def decode_plain(
    parsing_path: str | Path,
    output_path: str | Path,
    cfg: PlainConfig,
    *,
    tmp: str | Path | None = None,
    stats: IoStats | None = None,
) -> DecodeResult:
    """Decode in one part with distribution and per-segment queues.

    Args:
        parsing_path: The ``.lz77`` input.
        output_path: Destination of the decoded text, overwritten.
        cfg: RAM budget, segment size b and a disk budget that is only
            metered here, never planned for.
        tmp: Directory for scratch files; the system default when ``None``.
        stats: Receives per-stream I/O and the ``far.*``, ``r.*`` and ``q.*``
            counters.

    Returns:
        A ``DecodeResult`` with the scratch and disk peaks and ``stats``.

    Raises:
        BudgetError: The metered disk use went over a non-zero disk budget.
        InvariantError: A segment could not be fully recovered.
    """
    io = stats if stats is not None else IoStats()
    plan = plan_parts(parsing_path, 0, cfg.segment_bytes, cfg.budget, stats=io)
    return _run(parsing_path, output_path, cfg, plan, tmp, io)


def decode_partwise(
    parsing_path: str | Path,
    output_path: str | Path,
    cfg: PlainConfig,
    *,
    tmp: str | Path | None = None,
    stats: IoStats | None = None,
    plan: PartPlan | None = None,
) -> DecodeResult:
    """Decode part by part so the measured peak disk stays within ``cfg.disk_budget``."""
    return _run(parsing_path, output_path, cfg, plan, tmp, stats)
