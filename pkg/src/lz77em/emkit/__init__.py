"""External-memory building blocks: scratch files, sorting, priority queue, distribution."""

from lz77em.emkit.distribute import Buckets, distribute, distribution_rounds
from lz77em.emkit.pq import ExternalPQ
from lz77em.emkit.queues import QueuePool
from lz77em.emkit.scratch import ScratchManager, resolve_tmp
from lz77em.emkit.sort import SortedRun, SortedStream, em_sort

__all__ = [
    "Buckets",
    "ExternalPQ",
    "QueuePool",
    "ScratchManager",
    "SortedRun",
    "SortedStream",
    "distribute",
    "distribution_rounds",
    "em_sort",
    "resolve_tmp",
]
