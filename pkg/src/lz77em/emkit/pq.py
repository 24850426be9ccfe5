"""Merge-based external priority queue with monotone keys."""

import heapq
import itertools
import logging
import sys
from collections.abc import Iterator
from pathlib import Path

from lz77em.emkit.scratch import ScratchManager
from lz77em.errors import ContractError, FormatError
from lz77em.models.geometry import DEFAULT_LMAX, MemoryBudget
from lz77em.models.iostats import IoStats
from lz77em.streams import BlockReader, BlockWriter

logger = logging.getLogger(__name__)

KEY_BYTES = 8
LEN_BYTES = 4
ITEM_HEADER = KEY_BYTES + LEN_BYTES
# in-RAM cost of one buffered item beyond its payload (heap slot, tuple,
# key and sequence ints, bytes header)
ITEM_OVERHEAD = (
    sys.getsizeof((0, 0, b"")) + 8 + 2 * sys.getsizeof(1 << 40) + sys.getsizeof(b"")
)


class _Run:
    """One spilled run with a read cursor at its smallest unread item.

    A spill is level 0; merging runs of level ``k`` yields one run of
    level ``k + 1``.
    """

    def __init__(
        self, run_id: int, path: Path, items: Iterator[tuple[int, bytes]], level: int = 0
    ):
        self.run_id = run_id
        self.level = level
        self.path = path
        self._items = items
        self.head: tuple[int, bytes] | None = next(items, None)

    def advance(self) -> None:
        self.head = next(self._items, None)

    def remaining(self) -> Iterator[tuple[int, bytes]]:
        while self.head is not None:
            yield self.head
            self.advance()


class ExternalPQ:
    """Priority queue of (key, payload) items under a RAM budget.

    Inserts go to a RAM heap; a full heap is spilled as a sorted run.
    ``extract_min`` merges the heap top with the run fronts. When a spill
    would exceed ``max_runs`` open runs, the runs of the lowest crowded
    level are merged into one run a level up, so every item is rewritten
    at most once per level. Keys must not drop below the last extracted key.
    """

    def __init__(
        self,
        budget: MemoryBudget,
        scratch: ScratchManager,
        stats: IoStats | None = None,
        payload_max: int = DEFAULT_LMAX,
        name: str = "pq",
    ):
        self.budget = budget
        self.scratch = scratch
        self.stats = stats if stats is not None else IoStats()
        self.payload_max = payload_max
        self.name = name
        self.buffer_capacity = budget.ram_bytes // 2
        self.max_runs = max(2, (budget.ram_bytes - self.buffer_capacity) // budget.block_bytes - 1)
        self.last_key: int | None = None
        self.spills = 0
        self._heap: list[tuple[int, int, bytes]] = []
        self._heap_bytes = 0
        self._seq = itertools.count()
        self._run_ids = itertools.count()
        self._runs: dict[int, _Run] = {}
        self._fronts: list[tuple[int, int]] = []
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def __bool__(self) -> bool:
        return self._size > 0

    def insert(self, key: int, payload: bytes) -> None:
        if len(payload) > self.payload_max:
            raise ContractError(
                f"{self.name}: payload of {len(payload)} bytes exceeds maximum {self.payload_max}"
            )
        if self.last_key is not None and key < self.last_key:
            raise ContractError(
                f"{self.name}: insert key {key} is below last extracted key {self.last_key}"
            )
        heapq.heappush(self._heap, (key, next(self._seq), payload))
        self._heap_bytes += ITEM_OVERHEAD + len(payload)
        self._size += 1
        self.stats.bump(f"{self.name}.inserted")
        self.stats.bump(f"{self.name}.payload_inserted", len(payload))
        if self._heap_bytes >= self.buffer_capacity:
            self._spill()

    def min_key(self) -> int | None:
        best = self._heap[0][0] if self._heap else None
        if self._fronts and (best is None or self._fronts[0][0] < best):
            best = self._fronts[0][0]
        return best

    def extract_min(self) -> tuple[int, bytes] | None:
        """Remove and return the smallest item, or None when empty."""
        if not self._size:
            return None
        from_heap = bool(self._heap) and (
            not self._fronts or self._heap[0][0] <= self._fronts[0][0]
        )
        if from_heap:
            key, _, payload = heapq.heappop(self._heap)
            self._heap_bytes -= ITEM_OVERHEAD + len(payload)
        else:
            key, run_id = heapq.heappop(self._fronts)
            run = self._runs[run_id]
            _, payload = run.head
            run.advance()
            if run.head is None:
                del self._runs[run_id]
                self.scratch.remove(run.path)
            else:
                heapq.heappush(self._fronts, (run.head[0], run_id))
        self._size -= 1
        self.last_key = key
        self.stats.bump(f"{self.name}.payload_extracted", len(payload))
        return key, payload

    def close(self) -> None:
        for run in self._runs.values():
            self.scratch.remove(run.path)
        self._runs.clear()
        self._fronts.clear()
        self._heap.clear()
        self._size = 0

    def _write_run(self, items) -> Path:
        path = self.scratch.path(self.name)
        with BlockWriter(
            path, self.stats, self.name, self.budget.block_bytes, scratch=self.scratch
        ) as writer:
            for key, payload in items:
                writer.write(
                    key.to_bytes(KEY_BYTES, "little")
                    + len(payload).to_bytes(LEN_BYTES, "little")
                    + payload
                )
        return path

    def _read_run(self, path: Path) -> Iterator[tuple[int, bytes]]:
        with BlockReader(path, self.stats, self.name, self.budget.block_bytes) as reader:
            while header := reader.read(ITEM_HEADER):
                if len(header) < ITEM_HEADER:
                    raise FormatError(f"{self.name}: truncated run item in {path}")
                key = int.from_bytes(header[:KEY_BYTES], "little")
                size = int.from_bytes(header[KEY_BYTES:], "little")
                payload = reader.read(size)
                if len(payload) < size:
                    raise FormatError(f"{self.name}: truncated run payload in {path}")
                yield key, payload

    def _add_run(self, path: Path, level: int = 0) -> None:
        run = _Run(next(self._run_ids), path, self._read_run(path), level)
        if run.head is None:
            self.scratch.remove(path)
            return
        self._runs[run.run_id] = run
        heapq.heappush(self._fronts, (run.head[0], run.run_id))

    def _spill(self) -> None:
        while len(self._runs) >= self.max_runs:
            self._merge_level()
        items = self._heap
        items.sort()
        self._heap = []
        self._heap_bytes = 0
        self._add_run(self._write_run((key, payload) for key, _, payload in items))
        self.spills += 1
        self.stats.bump(f"{self.name}.spills")

    def _merge_level(self) -> None:
        """Merge the runs of the lowest level holding two or more into one run."""
        levels: dict[int, list[_Run]] = {}
        for run in self._runs.values():
            levels.setdefault(run.level, []).append(run)
        crowded = [level for level, runs in levels.items() if len(runs) >= 2]
        if crowded:
            level = min(crowded)
            runs = levels[level]
        else:
            # one run per level: fold the two lowest together
            runs = sorted(self._runs.values(), key=lambda run: run.level)[:2]
            level = runs[1].level
        self._merge(runs, level + 1)

    def _merge(self, runs: list[_Run], level: int) -> None:
        merged = heapq.merge(*(run.remaining() for run in runs), key=lambda item: item[0])
        path = self._write_run(merged)
        gone = {run.run_id for run in runs}
        for run in runs:
            del self._runs[run.run_id]
            self.scratch.remove(run.path)
        self._fronts = [front for front in self._fronts if front[1] not in gone]
        heapq.heapify(self._fronts)
        self._add_run(path, level)
        self.stats.bump(f"{self.name}.merges")
        logger.debug("%s: merged %d runs into level %d", self.name, len(runs), level)
