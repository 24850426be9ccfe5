"""Greedy on-line partitioning of a parsing under a peak-disk budget."""

import logging
from pathlib import Path

from lz77em.codec.reader import read_parsing
from lz77em.decoders.split import split_phrase
from lz77em.emkit.distribute import distribution_rounds
from lz77em.errors import BudgetError
from lz77em.models.geometry import MemoryBudget
from lz77em.models.iostats import IoStats
from lz77em.models.phrase import LocatedPhrase
from lz77em.models.plan import Part, PartPlan

logger = logging.getLogger(__name__)

# writers for literals, R_prev and R_same plus the parsing reader, open while routing
ROUTE_STREAMS = 4


def distribution_budget(budget: MemoryBudget) -> MemoryBudget:
    """RAM left to the far-piece distribution while a part is routed."""
    return budget.split(budget.ram_bytes - ROUTE_STREAMS * budget.block_bytes)


class _PartCost:
    """Scratch bytes a part of the parsing may hold at its peak.

    Literal records, near pieces, far pieces once as distribution records
    (plus one copy per extra distribution round) and once as queue items.
    """

    def __init__(self, width: int, b: int, fan_out: int):
        self.width = width
        self.b = b
        self.fan_out = fan_out
        self.other = 0
        self.far_records = 0
        self.far_items = 0

    def add(self, phrase: LocatedPhrase) -> None:
        w, b = self.width, self.b
        if phrase.char >= 0:
            self.other += 2 * w
            return
        for p, q, length, _ in split_phrase(phrase, b):
            if q - p > b:
                self.far_records += 3 * w
                self.far_items += 2 * w + length
            else:
                self.other += 3 * w

    def scratch(self, text_end: int) -> int:
        m = max(1, -(-text_end // self.b))
        rounds = distribution_rounds(m, self.fan_out)
        return self.other + self.far_records * rounds + self.far_items

    def copy(self) -> "_PartCost":
        clone = _PartCost(self.width, self.b, self.fan_out)
        clone.other = self.other
        clone.far_records = self.far_records
        clone.far_items = self.far_items
        return clone


def minimum_disk_budget(input_bytes: int, n: int, b: int) -> int:
    return input_bytes + n + 2 * b


def plan_parts(
    parsing_path: str | Path,
    disk_budget: int,
    b: int,
    budget: MemoryBudget,
    *,
    stats: IoStats | None = None,
) -> PartPlan:
    """Cut the parsing into parts whose estimated peak disk fits ``disk_budget``.

    One streaming pass. A part's estimate is the parsing file, the text up
    to the part's end, its scratch records and 2b of slack; a part is closed
    when the next phrase would push it over the budget. ``disk_budget == 0``
    means unlimited and gives a single part.
    """
    io = stats if stats is not None else IoStats()
    reader = read_parsing(parsing_path, io, budget.block_bytes, stream_name="plan")
    input_bytes = reader.file_bytes
    slack = 2 * b

    if not disk_budget:
        for _ in reader:
            pass
        return PartPlan.single(reader.count, reader.stats.n, input_bytes)

    parts: list[Part] = []
    fan_out = distribution_budget(budget).fan_out
    cost = _PartCost(reader.width, b, fan_out)
    part_start, text_start, estimate = 0, 0, 0
    blocked: str | None = None
    index = -1
    for index, phrase in enumerate(reader):
        if blocked is not None:
            continue
        grown = cost.copy()
        grown.add(phrase)
        text_end = phrase.end
        candidate = input_bytes + text_end + grown.scratch(text_end) + slack
        if candidate > disk_budget and index > part_start:
            parts.append(
                Part(
                    phrase_start=part_start,
                    phrase_end=index,
                    text_start=text_start,
                    text_end=phrase.q,
                    estimate_bytes=estimate,
                )
            )
            part_start, text_start = index, phrase.q
            grown = _PartCost(reader.width, b, fan_out)
            grown.add(phrase)
            candidate = input_bytes + text_end + grown.scratch(text_end) + slack
        if candidate > disk_budget:
            blocked = f"phrase {index} at q={phrase.q} alone needs an estimated {candidate} bytes"
            continue
        cost, estimate = grown, candidate

    n = reader.stats.n
    minimum = minimum_disk_budget(input_bytes, n, b)
    if disk_budget < minimum:
        raise BudgetError(
            f"disk budget {disk_budget} is infeasible; the minimum is {minimum} bytes "
            f"(parsing {input_bytes} + text {n} + 2 * segment {b})"
        )
    if blocked is not None:
        raise BudgetError(f"disk budget {disk_budget} is infeasible: {blocked}")
    if index >= part_start:
        parts.append(
            Part(
                phrase_start=part_start,
                phrase_end=index + 1,
                text_start=text_start,
                text_end=n,
                estimate_bytes=estimate,
            )
        )
    if not parts:
        parts.append(Part(phrase_start=0, phrase_end=0, text_start=0, text_end=0))
    plan = PartPlan(parts=parts, disk_budget=disk_budget, input_bytes=input_bytes, n=n)
    logger.info("planned %d parts under a disk budget of %d bytes", plan.count, disk_budget)
    return plan
