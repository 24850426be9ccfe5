"""Multi-round distribution of fixed-size records into bucket files."""

import logging
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from pathlib import Path

from lz77em.codec.records import RecordCodec, iter_records
from lz77em.emkit.scratch import ScratchManager
from lz77em.errors import ContractError
from lz77em.models.geometry import MemoryBudget
from lz77em.models.iostats import IoStats
from lz77em.streams import BlockReader, BlockWriter

logger = logging.getLogger(__name__)

Record = tuple[int, ...]


def distribution_rounds(m: int, fan_out: int) -> int:
    """Rounds needed to split into m buckets with the given fan-out (at least one)."""
    if m < 1:
        raise ValueError(f"bucket count must be >= 1, got {m}")
    if fan_out < 2:
        raise ValueError(f"fan-out must be >= 2, got {fan_out}")
    rounds, reach = 1, fan_out
    while reach < m:
        reach *= fan_out
        rounds += 1
    return rounds


@dataclass
class Buckets:
    """Result of ``distribute``: one optional scratch file per bucket."""

    codec: RecordCodec
    scratch: ScratchManager
    stats: IoStats
    block_bytes: int
    name: str
    rounds: int
    paths: list[Path | None] = field(default_factory=list)
    counts: list[int] = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.paths)

    def __len__(self) -> int:
        return sum(self.counts)

    def read(self, i: int, consume: bool = True) -> Iterator[Record]:
        """Stream bucket ``i``; with ``consume`` the file is deleted afterwards."""
        path = self.paths[i]
        if path is None:
            return
        try:
            with BlockReader(path, self.stats, self.name, self.block_bytes) as reader:
                yield from iter_records(reader, self.codec)
        finally:
            if consume:
                self.scratch.remove(path)
                self.paths[i] = None

    def discard(self) -> None:
        for i, path in enumerate(self.paths):
            if path is not None:
                self.scratch.remove(path)
                self.paths[i] = None


class _GroupWriter:
    """Lazily opened writers for the child groups of one group."""

    def __init__(self, buckets: Buckets, lo: int, width: int):
        self.buckets = buckets
        self.lo = lo
        self.width = width
        self.writers: dict[int, BlockWriter] = {}
        self.counts: dict[int, int] = {}

    def add(self, child: int, record: Record) -> None:
        writer = self.writers.get(child)
        if writer is None:
            b = self.buckets
            path = b.scratch.path(f"{b.name}-{self.lo + child * self.width}")
            writer = self.writers[child] = BlockWriter(
                path, b.stats, b.name, b.block_bytes, scratch=b.scratch
            )
            self.counts[child] = 0
        writer.write(self.buckets.codec.pack_one(record))
        self.counts[child] += 1

    def close(self) -> list[tuple[int, Path, int]]:
        """Close every child and return ``(group_lo, path, count)`` per non-empty child."""
        out = []
        for child in sorted(self.writers):
            writer = self.writers[child]
            writer.close()
            out.append((self.lo + child * self.width, writer.path, self.counts[child]))
        return out


def distribute(
    records: Iterable[Record],
    bucket_of: Callable[[Record], int],
    m: int,
    codec: RecordCodec,
    budget: MemoryBudget,
    scratch: ScratchManager,
    stats: IoStats | None = None,
    name: str = "dist",
) -> Buckets:
    """Partition records into m buckets by ``bucket_of``.

    Every round splits each group of consecutive buckets into at most F
    children (F = budget.fan_out), so rounds = max(1, ceil(log_F m)).
    A single round keeps input order within each bucket.
    """
    io = stats if stats is not None else IoStats()
    fan_out = budget.fan_out
    rounds = distribution_rounds(m, fan_out)
    buckets = Buckets(codec, scratch, io, budget.block_bytes, name, rounds, [None] * m, [0] * m)

    width = fan_out ** (rounds - 1)
    top = _GroupWriter(buckets, 0, width)
    for record in records:
        bucket = bucket_of(record)
        if not 0 <= bucket < m:
            raise ContractError(f"{name}: bucket {bucket} outside [0, {m}) for record {record}")
        top.add(bucket // width, record)
    groups = top.close()

    for level in range(1, rounds):
        width = fan_out ** (rounds - 1 - level)
        next_groups = []
        for lo, path, _ in groups:
            writer = _GroupWriter(buckets, lo, width)
            with BlockReader(path, io, name, budget.block_bytes) as reader:
                for record in iter_records(reader, codec):
                    writer.add((bucket_of(record) - lo) // width, record)
            scratch.remove(path)
            next_groups.extend(writer.close())
        groups = next_groups
        logger.debug("%s: round %d produced %d groups", name, level + 1, len(groups))

    for lo, path, count in groups:
        buckets.paths[lo] = path
        buckets.counts[lo] = count

    io.bump(f"{name}.rounds", rounds)
    logger.info("%s: %d records into %d buckets in %d rounds", name, len(buckets), m, rounds)
    return buckets
