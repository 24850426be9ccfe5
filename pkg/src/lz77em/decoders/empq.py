"""Segment-at-a-time decoding with an external sort and an external priority queue.

Phrases are split so that pieces and sources each sit in one segment, then
routed: literals and near pieces to sequential files in phrase order, far
pieces (source more than b positions back) into an external sort by
source. Segments are recovered left to right in one RAM array; once a
segment is complete, the far pieces sourced in it are copied out and queued
by destination in chunks of at most ``lmax`` bytes.
"""

import logging
from pathlib import Path

from lz77em.codec.reader import read_parsing
from lz77em.codec.records import RecordCodec, RecordSink, read_records
from lz77em.decoders.basic import copy_within
from lz77em.decoders.split import split_phrase
from lz77em.emkit.pq import ExternalPQ
from lz77em.emkit.scratch import ScratchManager
from lz77em.emkit.sort import em_sort
from lz77em.errors import ContractError, InvariantError
from lz77em.models.geometry import EmpqConfig, SegmentGeometry
from lz77em.models.iostats import IoStats
from lz77em.models.reports import DecodeResult
from lz77em.streams import BlockWriter

logger = logging.getLogger(__name__)

# stream buffers open during recovery besides the sorter and the queue:
# literals, near pieces, output
RECOVERY_STREAMS = 3


def decode_empq(
    parsing_path: str | Path,
    output_path: str | Path,
    cfg: EmpqConfig,
    *,
    tmp: str | Path | None = None,
    stats: IoStats | None = None,
) -> DecodeResult:
    """Decode a parsing with an external sort of far pieces and an external priority queue.

    Args:
        parsing_path: The ``.lz77`` input.
        output_path: Destination of the decoded text, overwritten.
        cfg: RAM budget, segment size b and the queue payload cap ``lmax``.
        tmp: Directory for scratch files; the system default when ``None``.
        stats: Receives per-stream I/O and the ``far.*`` piece and sort
            counters and the ``pq.*`` queue counters.

    Returns:
        A ``DecodeResult`` with the segment count, the scratch peak and ``stats``.

    Raises:
        FormatError: The parsing file is malformed.
        InvariantError: A segment could not be fully recovered, which means
            the parsing references a position that is not yet decoded.
    """
    io = stats if stats is not None else IoStats()
    budget = cfg.budget
    block = budget.block_bytes
    b = cfg.segment_bytes
    lmax = cfg.lmax
    reader = read_parsing(parsing_path, io, block)
    lit_codec = RecordCodec(2, reader.width)
    rep_codec = RecordCodec(3, reader.width)
    # Y takes b; the sorter (whose final merge stays open) and the queue share the rest
    share = (budget.ram_bytes - b - RECOVERY_STREAMS * block) // 2
    sort_budget = budget.split(share)
    pq_budget = budget.split(share)

    with ScratchManager(tmp, prefix="lz77em-pq-") as scratch:
        lit_path = scratch.path("literals")
        near_path = scratch.path("near")
        with (
            BlockWriter(lit_path, io, "literals", block, scratch=scratch) as lit_out,
            BlockWriter(near_path, io, "near", block, scratch=scratch) as near_out,
        ):
            literals = RecordSink(lit_out, lit_codec)
            near = RecordSink(near_out, rep_codec)

            def route():
                for phrase in reader:
                    if phrase.char >= 0:
                        literals.add((phrase.q, phrase.char))
                        continue
                    for p, q, length, _ in split_phrase(phrase, b):
                        if q - p > b:
                            io.bump("far.pieces")
                            io.bump("far.bytes", length)
                            yield (p, q, length)
                        else:
                            near.add((p, q, length))

            far = em_sort(
                route(),
                key_fields=(0, 1),
                codec=rep_codec,
                budget=sort_budget,
                scratch=scratch,
                stats=io,
                name="far",
            )

        geom = SegmentGeometry(n=reader.stats.n, b=b)
        logger.info(
            "pq: n=%d, b=%d, %d segments, lmax=%d, %d far pieces",
            geom.n,
            b,
            geom.m,
            lmax,
            io.counter("far.pieces"),
        )
        pq = ExternalPQ(pq_budget, scratch, io, payload_max=lmax, name="pq")
        lit_iter = read_records(lit_path, io, "literals", lit_codec, block)
        near_iter = read_records(near_path, io, "near", rep_codec, block)
        next_lit = next(lit_iter, None)
        next_near = next(near_iter, None)
        next_far = next(far, None)
        y = bytearray(b)

        with BlockWriter(output_path, io, "output", block) as out:
            for j in range(geom.m):
                start, end = geom.start(j), geom.end(j)
                x = start
                while x < end:
                    i = x - start
                    if next_lit is not None and next_lit[0] == x:
                        y[i] = next_lit[1]
                        x += 1
                        next_lit = next(lit_iter, None)
                    elif next_near is not None and next_near[1] == x:
                        p, _, length = next_near
                        if p >= start:
                            copy_within(y, p - start, i, length)
                        else:
                            src = p - start + b
                            if src < i:
                                raise InvariantError(
                                    j, f"near source {p} overwritten before phrase at {x}"
                                )
                            y[i : i + length] = y[src : src + length]
                        x += length
                        next_near = next(near_iter, None)
                    elif pq.min_key() == x:
                        _, payload = pq.extract_min()
                        y[i : i + len(payload)] = payload
                        x += len(payload)
                    else:
                        raise InvariantError(j, f"no phrase recovers position {x}")
                out.write(memoryview(y)[: end - start])

                while next_far is not None and next_far[0] < end:
                    p, q, length = next_far
                    if p < start:
                        raise InvariantError(j, f"far source {p} was never queued")
                    offset = p - start
                    try:
                        for c in range(0, length, lmax):
                            chunk = min(lmax, length - c)
                            pq.insert(q + c, bytes(y[offset + c : offset + c + chunk]))
                    except ContractError as e:
                        raise InvariantError(j, str(e)) from e
                    next_far = next(far, None)

        if next_lit is not None or next_near is not None or next_far is not None or pq:
            raise InvariantError(geom.m, "phrases left over after the last segment")
        far.close()
        pq.close()
        peak = scratch.peak

    return DecodeResult(
        algorithm="pq",
        n=geom.n,
        segment_bytes=b,
        lmax=lmax,
        segments=geom.m,
        peak_scratch_bytes=peak,
        io=io,
    )
