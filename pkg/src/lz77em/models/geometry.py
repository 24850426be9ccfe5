"""Budget, segment geometry and decoder configuration models."""

import logging

from pydantic import BaseModel, Field, model_validator

logger = logging.getLogger(__name__)

KIB = 1 << 10
MIB = 1 << 20

MIN_BLOCK_BYTES = 4096
DEFAULT_BLOCK_BYTES = 1 * MIB
DEFAULT_RAM_BYTES = 64 * MIB
DEFAULT_LMAX = 16
# stream buffers the plain-I/O decoder keeps open besides its queues
PLAIN_STREAM_BLOCKS = 6


class MemoryBudget(BaseModel):
    """RAM size M and disk block size B, both in bytes."""

    ram_bytes: int = Field(default=DEFAULT_RAM_BYTES, description="RAM budget M in bytes")
    block_bytes: int = Field(default=DEFAULT_BLOCK_BYTES, description="Block size B in bytes")

    @model_validator(mode="after")
    def _check_sizes(self) -> "MemoryBudget":
        if self.block_bytes < MIN_BLOCK_BYTES:
            raise ValueError(f"block_bytes must be >= {MIN_BLOCK_BYTES}, got {self.block_bytes}")
        if self.ram_bytes < 4 * self.block_bytes:
            raise ValueError(
                f"ram_bytes must be >= 4 * block_bytes ({4 * self.block_bytes}), "
                f"got {self.ram_bytes}"
            )
        return self

    @property
    def blocks(self) -> int:
        return self.ram_bytes // self.block_bytes

    @property
    def fan_out(self) -> int:
        """Merge fan-in / distribution fan-out; one block is kept for output."""
        return self.blocks - 1

    def split(self, ram_bytes: int) -> "MemoryBudget":
        """A sub-budget with the same block size, clamped to the minimum legal RAM."""
        return MemoryBudget(
            ram_bytes=max(ram_bytes, 4 * self.block_bytes),
            block_bytes=self.block_bytes,
        )


class SegmentGeometry(BaseModel):
    """Division of a text of length n into ceil(n/b) segments of size b."""

    n: int = Field(ge=0, description="Text length")
    b: int = Field(ge=1, description="Segment size in bytes")

    @property
    def m(self) -> int:
        return -(-self.n // self.b)

    def segment_of(self, x: int) -> int:
        return x // self.b

    def start(self, j: int) -> int:
        return j * self.b

    def end(self, j: int) -> int:
        return min((j + 1) * self.b, self.n)

    def length(self, j: int) -> int:
        return self.end(j) - self.start(j)

    def next_boundary(self, x: int) -> int:
        """First segment boundary strictly after position x."""
        return (x // self.b + 1) * self.b


def empq_segment_size(budget: MemoryBudget) -> int:
    """Largest block multiple not exceeding half the RAM budget."""
    block = budget.block_bytes
    return max(block, budget.ram_bytes // 2 // block * block)


def plain_segment_size(n: int, budget: MemoryBudget) -> int:
    """Segment size for the plain-I/O decoder.

    Prefers the largest block multiple b that leaves one block per queue and
    per open stream, ``b + (ceil(n/b) + PLAIN_STREAM_BLOCKS) * block <= ram``;
    otherwise half the RAM, with the queues sharing the other half.
    """
    block = budget.block_bytes
    half = empq_segment_size(budget)
    b = budget.ram_bytes // block * block - block
    while b >= half:
        if b + (-(-n // b) + PLAIN_STREAM_BLOCKS) * block <= budget.ram_bytes:
            return b
        b -= block
    return half


def check_segment_size(b: int, budget: MemoryBudget, limit: int) -> None:
    """Validate a segment size against the budget and an upper ``limit``."""
    if b < 1:
        raise ValueError(f"segment size must be >= 1, got {b}")
    if b > limit:
        raise ValueError(
            f"segment size {b} exceeds {limit} bytes for a RAM budget of {budget.ram_bytes}"
        )
    if b < budget.block_bytes:
        logger.warning(
            "segment size %d is below the block size %d; expect extra I/O", b, budget.block_bytes
        )


class EmpqConfig(BaseModel):
    """Configuration of the sort + priority-queue decoder."""

    segment_bytes: int = Field(ge=1, description="Segment size b")
    lmax: int = Field(default=DEFAULT_LMAX, ge=1, description="Max payload per queue item")
    budget: MemoryBudget = Field(default_factory=MemoryBudget)

    @model_validator(mode="after")
    def _check_segment(self) -> "EmpqConfig":
        check_segment_size(self.segment_bytes, self.budget, self.budget.ram_bytes // 2)
        return self

    @classmethod
    def for_budget(cls, budget: MemoryBudget, lmax: int = DEFAULT_LMAX) -> "EmpqConfig":
        return cls(segment_bytes=empq_segment_size(budget), lmax=lmax, budget=budget)


class PlainConfig(BaseModel):
    """Configuration of the plain-I/O decoder."""

    segment_bytes: int = Field(ge=1, description="Segment size b")
    budget: MemoryBudget = Field(default_factory=MemoryBudget)
    disk_budget: int = Field(default=0, ge=0, description="Peak disk bytes; 0 = unlimited")

    @model_validator(mode="after")
    def _check_segment(self) -> "PlainConfig":
        budget = self.budget
        check_segment_size(self.segment_bytes, budget, budget.ram_bytes - budget.block_bytes)
        return self
