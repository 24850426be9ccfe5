"""Byte-accurate I/O accounting per named stream."""


from pydantic import BaseModel, Field


class StreamCounters(BaseModel):
    """Transfer counters of one named stream."""

    bytes_read: int = 0
    bytes_written: int = 0
    read_ops: int = 0
    write_ops: int = 0


class IoStats(BaseModel):
    """Per-stream counters plus free-form named counters.

    Several files may share a stream name (e.g. all bucket files of one
    distribution); their transfers add up under that name.
    """

    streams: dict[str, StreamCounters] = Field(default_factory=dict)
    counters: dict[str, int] = Field(default_factory=dict)

    def stream(self, name: str) -> StreamCounters:
        counters = self.streams.get(name)
        if counters is None:
            counters = self.streams[name] = StreamCounters()
        return counters

    def record_read(self, name: str, nbytes: int) -> None:
        if nbytes <= 0:
            return
        counters = self.stream(name)
        counters.bytes_read += nbytes
        counters.read_ops += 1

    def record_write(self, name: str, nbytes: int) -> None:
        if nbytes <= 0:
            return
        counters = self.stream(name)
        counters.bytes_written += nbytes
        counters.write_ops += 1

    def bump(self, key: str, amount: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + amount

    def counter(self, key: str) -> int:
        return self.counters.get(key, 0)

    @property
    def total_read(self) -> int:
        return sum(s.bytes_read for s in self.streams.values())

    @property
    def total_written(self) -> int:
        return sum(s.bytes_written for s in self.streams.values())

    @property
    def total_read_ops(self) -> int:
        return sum(s.read_ops for s in self.streams.values())

    @property
    def total_write_ops(self) -> int:
        return sum(s.write_ops for s in self.streams.values())

    def totals(self) -> StreamCounters:
        return StreamCounters(
            bytes_read=self.total_read,
            bytes_written=self.total_written,
            read_ops=self.total_read_ops,
            write_ops=self.total_write_ops,
        )
