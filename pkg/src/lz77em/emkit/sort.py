"""External merge sort over fixed-size records."""

import heapq
import logging
import operator
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from lz77em.codec.records import RecordCodec, iter_records
from lz77em.emkit.scratch import ScratchManager
from lz77em.models.geometry import MemoryBudget
from lz77em.models.iostats import IoStats
from lz77em.streams import BlockReader, BlockWriter

logger = logging.getLogger(__name__)

Record = tuple[int, ...]


def run_capacity(codec: RecordCodec, budget: MemoryBudget, keys: int) -> int:
    """Records per sorted run.

    A buffered record costs its uint64 row, one index in the sort order and
    one copy of each key column made by ``np.lexsort``, plus one word of
    slack; three blocks stay free for the run writer and the slice being
    packed.
    """
    per_record = 8 * (codec.fields + 2 + keys)
    return max(1, (budget.ram_bytes - 3 * budget.block_bytes) // per_record)


@dataclass
class SortedRun:
    """A scratch file of records in non-decreasing key order."""

    path: Path
    count: int


class SortedStream:
    """Iterator over the sorted output; scratch files go away as runs drain."""

    def __init__(self, source: Iterator[Record], runs: int, rounds: int):
        self._source = source
        self.runs = runs
        self.rounds = rounds

    def __iter__(self) -> "SortedStream":
        return self

    def __next__(self) -> Record:
        return next(self._source)

    def close(self) -> None:
        close = getattr(self._source, "close", None)
        if close is not None:
            close()


class _RunFactory:
    def __init__(
        self,
        codec: RecordCodec,
        budget: MemoryBudget,
        scratch: ScratchManager,
        stats: IoStats,
        name: str,
    ):
        self.codec = codec
        self.budget = budget
        self.scratch = scratch
        self.stats = stats
        self.name = name
        self.step = max(1, budget.block_bytes // codec.size)

    def _writer(self, path: Path) -> BlockWriter:
        return BlockWriter(
            path, self.stats, self.name, self.budget.block_bytes, scratch=self.scratch
        )

    def write_rows(self, rows: np.ndarray, order: np.ndarray) -> SortedRun:
        """Write ``rows`` in ``order``, one block of records per slice."""
        path = self.scratch.path(self.name)
        with self._writer(path) as writer:
            for start in range(0, len(order), self.step):
                writer.write(self.codec.pack(rows[order[start : start + self.step]]))
        return SortedRun(path, len(order))

    def write(self, records: Iterable[Record]) -> SortedRun:
        path = self.scratch.path(self.name)
        count = 0
        with self._writer(path) as writer:
            for record in records:
                writer.write(self.codec.pack_one(record))
                count += 1
        return SortedRun(path, count)

    def read(self, run: SortedRun) -> Iterator[Record]:
        try:
            with BlockReader(run.path, self.stats, self.name, self.budget.block_bytes) as reader:
                yield from iter_records(reader, self.codec)
        finally:
            self.scratch.remove(run.path)


def _sorted_rows(rows: np.ndarray, order: np.ndarray, step: int) -> Iterator[Record]:
    for start in range(0, len(order), step):
        yield from map(tuple, rows[order[start : start + step]].tolist())


def em_sort(
    records: Iterable[Record],
    key_fields: tuple[int, ...],
    codec: RecordCodec,
    budget: MemoryBudget,
    scratch: ScratchManager,
    stats: IoStats | None = None,
    name: str = "sort",
) -> SortedStream:
    """Sort fixed-size records by some of their fields under a RAM budget.

    Runs are formed in a preallocated ``(capacity, fields)`` uint64 array
    and ordered with ``np.lexsort``; merging is lazy. Run formation consumes
    the whole input before this returns.

    Args:
        records: Tuples of ``codec.fields`` non-negative integers.
        key_fields: Field indices compared in order; ``(0, 1)`` sorts by
            the first field, then the second.
        codec: Record layout of the run files.
        budget: RAM and block size; the merge fan-in is ``budget.fan_out``.
        scratch: Owner of the run files.
        stats: Receives the run I/O under ``name`` and the counters
            ``{name}.runs`` and ``{name}.merge_rounds``.
        name: Stream and counter prefix.

    Returns:
        A ``SortedStream`` of tuples in key order; ties keep input order.
        ``rounds`` is ``ceil(log_F(runs))``, and 0 when the input fits in
        one run, in which case nothing touches disk.
    """
    if not key_fields:
        raise ValueError("em_sort needs at least one key field")
    io = stats if stats is not None else IoStats()
    factory = _RunFactory(codec, budget, scratch, io, name)
    capacity = run_capacity(codec, budget, len(key_fields))
    # lexsort treats its last key as the primary one
    columns = tuple(reversed(key_fields))
    fan_in = budget.fan_out

    def order_of(rows: np.ndarray) -> np.ndarray:
        return np.lexsort(tuple(rows[:, field] for field in columns))

    runs: list[SortedRun] = []
    buffer: np.ndarray | None = None
    count = 0
    for record in records:
        if buffer is None:
            buffer = np.empty((capacity, codec.fields), dtype=np.uint64)
        buffer[count] = record
        count += 1
        if count == capacity:
            runs.append(factory.write_rows(buffer, order_of(buffer)))
            count = 0

    if not runs:
        io.bump(f"{name}.runs", 1 if count else 0)
        if not count:
            return SortedStream(iter(()), runs=0, rounds=0)
        rows = buffer[:count]
        return SortedStream(_sorted_rows(rows, order_of(rows), factory.step), runs=1, rounds=0)

    if count:
        rows = buffer[:count]
        runs.append(factory.write_rows(rows, order_of(rows)))
    del buffer

    key = operator.itemgetter(*key_fields)
    run_count = len(runs)
    rounds = 0
    while len(runs) > fan_in:
        merged: list[SortedRun] = []
        for start in range(0, len(runs), fan_in):
            group = runs[start : start + fan_in]
            if len(group) == 1:
                merged.append(group[0])
                continue
            merged.append(
                factory.write(heapq.merge(*(factory.read(run) for run in group), key=key))
            )
        runs = merged
        rounds += 1
        logger.debug("%s: merge round %d left %d runs", name, rounds, len(runs))
    rounds += 1

    io.bump(f"{name}.runs", run_count)
    io.bump(f"{name}.merge_rounds", rounds)
    logger.info("%s: %d runs, %d merge rounds (fan-in %d)", name, run_count, rounds, fan_in)
    return SortedStream(
        heapq.merge(*(factory.read(run) for run in runs), key=key),
        runs=run_count,
        rounds=rounds,
    )
