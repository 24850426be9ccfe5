"""Pydantic models for parsings, budgets, accounting and reports."""

from lz77em.models.geometry import EmpqConfig, MemoryBudget, PlainConfig, SegmentGeometry
from lz77em.models.iostats import IoStats, StreamCounters
from lz77em.models.permute import PermuteInstance
from lz77em.models.phrase import LocatedPhrase, ParsingStats, Phrase
from lz77em.models.plan import Part, PartPlan

__all__ = [
    "EmpqConfig",
    "IoStats",
    "LocatedPhrase",
    "MemoryBudget",
    "ParsingStats",
    "Part",
    "PartPlan",
    "PermuteInstance",
    "Phrase",
    "PlainConfig",
    "SegmentGeometry",
    "StreamCounters",
]
