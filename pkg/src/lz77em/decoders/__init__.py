"""LZ77 decoders: RAM and naive baselines, the sort/PQ decoder and the plain-I/O decoder."""

from lz77em.decoders.basic import (
    copy_within,
    decode_located,
    decode_naive_em,
    decode_phrases,
    decode_ram,
)
from lz77em.decoders.empq import decode_empq
from lz77em.decoders.planner import minimum_disk_budget, plan_parts
from lz77em.decoders.plainio import DiskMeter, decode_partwise, decode_plain
from lz77em.decoders.split import (
    classify,
    kind_of,
    partition,
    piece_bound,
    split_phrase,
    split_phrases,
)

ALGORITHMS = ("ram", "naive", "pq", "plain")

__all__ = [
    "ALGORITHMS",
    "DiskMeter",
    "classify",
    "copy_within",
    "decode_empq",
    "decode_located",
    "decode_naive_em",
    "decode_partwise",
    "decode_phrases",
    "decode_plain",
    "decode_ram",
    "kind_of",
    "minimum_disk_budget",
    "partition",
    "piece_bound",
    "plan_parts",
    "split_phrase",
    "split_phrases",
]
