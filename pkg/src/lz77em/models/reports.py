"""Run reports emitted by the command layer as JSON lines."""

from pydantic import BaseModel, Field

from lz77em.models.iostats import IoStats


class EncodeReport(BaseModel):
    status: str = "ok"
    input_path: str
    output_path: str
    width: int
    n: int
    z: int
    z_rep: int
    n_over_z: float | None = Field(default=None, description="Null for an empty parsing")
    seconds: float = 0.0


class DecodeReport(BaseModel):
    status: str = "ok"
    algorithm: str
    input_path: str
    output_path: str
    n: int
    seconds: float
    mib_per_s: float | None = None
    sha256: str
    segment_bytes: int | None = None
    lmax: int | None = None
    peak_scratch_bytes: int = 0
    peak_disk_bytes: int | None = None
    part_count: int = 1
    io: IoStats = Field(default_factory=IoStats)


class VerifyReport(BaseModel):
    status: str = "ok"
    text_path: str
    parsing_path: str
    n: int = 0
    mismatch_offset: int | None = None
    expected: int | None = Field(default=None, description="Byte of the reference text")
    actual: int | None = Field(default=None, description="Byte decoded from the parsing")


class BenchRow(BaseModel):
    corpus: str
    size: int
    algorithm: str
    status: str = "ok"
    note: str | None = None
    n: int = 0
    z: int = 0
    seconds: float = 0.0
    mib_per_s: float | None = None
    sha256: str | None = None
    verified: bool = False
    peak_scratch_bytes: int = 0
    part_count: int = 1
    disk_factor: float | None = None
    disk_budget: int | None = None
    peak_disk_bytes: int | None = None
    bytes_read: int = 0
    bytes_written: int = 0


class DecodeResult(BaseModel):
    """What a decoder run measured, before the command layer adds timing and hashes."""

    algorithm: str
    n: int = 0
    segment_bytes: int | None = None
    lmax: int | None = None
    segments: int = 0
    peak_scratch_bytes: int = 0
    peak_disk_bytes: int | None = None
    part_count: int = 1
    io: IoStats = Field(default_factory=IoStats)
