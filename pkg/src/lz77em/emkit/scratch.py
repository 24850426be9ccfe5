"""Scratch-file manager with live and peak disk accounting."""

import itertools
import logging
import os
import shutil
import tempfile
from collections.abc import Callable
from pathlib import Path
from types import TracebackType

logger = logging.getLogger(__name__)

TMPDIR_ENV = "LZ77EM_TMPDIR"


def resolve_tmp(tmp: str | Path | None = None) -> Path:
    """Explicit directory, then ``$LZ77EM_TMPDIR``, then the system default."""
    if tmp:
        return Path(tmp)
    env = os.environ.get(TMPDIR_ENV)
    if env:
        return Path(env)
    return Path(tempfile.gettempdir())


class ScratchManager:
    """Owns a private scratch directory and accounts every byte written to it.

    Writers report growth through ``grow``; ``remove`` deletes a file and
    subtracts its size. Listeners are called with the live byte count after
    every change, which lets callers sample peak disk usage.
    """

    def __init__(self, root: str | Path | None = None, prefix: str = "lz77em-"):
        base = resolve_tmp(root)
        base.mkdir(parents=True, exist_ok=True)
        self.root = Path(tempfile.mkdtemp(prefix=prefix, dir=base))
        self.live = 0
        self.peak = 0
        self._files: dict[Path, int] = {}
        self._counter = itertools.count()
        self._listeners: list[Callable[[int], None]] = []

    def path(self, stem: str) -> Path:
        """Register a fresh scratch file name."""
        path = self.root / f"{stem}-{next(self._counter):06d}"
        self._files[path] = 0
        return path

    def grow(self, nbytes: int, path: Path | None = None) -> None:
        self.live += nbytes
        if path is not None and path in self._files:
            self._files[path] += nbytes
        if self.live > self.peak:
            self.peak = self.live
        for listener in self._listeners:
            listener(self.live)

    def remove(self, path: Path) -> None:
        """Delete a scratch file and release its bytes."""
        self._files.pop(path, None)
        try:
            size = path.stat().st_size
        except FileNotFoundError:
            return
        path.unlink()
        self.live -= size
        for listener in self._listeners:
            listener(self.live)

    def add_listener(self, listener: Callable[[int], None]) -> None:
        self._listeners.append(listener)

    @property
    def file_count(self) -> int:
        return sum(1 for path in self._files if path.exists())

    def cleanup(self) -> None:
        """Delete every remaining scratch file and the directory itself."""
        for path in list(self._files):
            self.remove(path)
        shutil.rmtree(self.root, ignore_errors=True)
        self.live = 0
        logger.debug("scratch %s cleaned up (peak %d bytes)", self.root, self.peak)

    def __enter__(self) -> "ScratchManager":
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        self.cleanup()
