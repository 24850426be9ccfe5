"""Exception hierarchy shared by the codec, the EM toolkit and the decoders."""


class LZ77EMError(Exception):
    """Base class for every error raised by lz77em."""


class FormatError(LZ77EMError, ValueError):
    """Malformed or unrepresentable parsing data."""


class StreamError(LZ77EMError, OSError):
    """OS-level I/O failure on a named stream."""

    def __init__(self, stream: str, message: str):
        super().__init__(f"[{stream}] {message}")
        self.stream = stream


class DiskFullError(StreamError):
    """The file system ran out of space while writing."""

    def __init__(self, stream: str, live_bytes: int, peak_bytes: int):
        super().__init__(
            stream,
            f"disk full (live scratch {live_bytes} bytes, peak {peak_bytes} bytes)",
        )
        self.live_bytes = live_bytes
        self.peak_bytes = peak_bytes


class BudgetError(LZ77EMError):
    """A RAM or disk budget is infeasible or was exceeded."""


class ContractError(LZ77EMError):
    """A data structure was used outside its contract."""


class InvariantError(LZ77EMError, AssertionError):
    """Internal decoder invariant failed. Always a bug."""

    def __init__(self, segment: int, message: str):
        super().__init__(f"segment {segment}: {message}")
        self.segment = segment
