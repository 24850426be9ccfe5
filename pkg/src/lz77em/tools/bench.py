"""Benchmark tool."""

from typing import Any

from mcp.server.fastmcp import FastMCP
from pydantic import ValidationError

from lz77em.decoders import ALGORITHMS
from lz77em.errors import LZ77EMError
from lz77em.models.geometry import DEFAULT_BLOCK_BYTES, DEFAULT_RAM_BYTES, MemoryBudget
from lz77em.runner import render_table, run_bench


def register(mcp: FastMCP) -> None:
    """Register the benchmark tool with the MCP server."""

    @mcp.tool()
    def run_benchmark(
        corpus: str = "dna_like",
        sizes: list[int] | None = None,
        algorithms: list[str] | None = None,
        mem: int = DEFAULT_RAM_BYTES,
        block_size: int = DEFAULT_BLOCK_BYTES,
        seed: int = 0,
        tmp: str | None = None,
        disk_budgets: list[float] | None = None,
    ) -> dict[str, Any]:
        """Generate, encode and decode synthetic corpora and measure throughput.

        Args:
            corpus: random255, dna_like or repetitive
            sizes: Ascending text sizes in bytes (default one 16 MiB run)
            algorithms: Decoders to run (default all)
            mem: RAM budget in bytes
            block_size: Disk block size in bytes
            seed: Corpus seed
            tmp: Working directory
            disk_budgets: Factors of (parsing + text size); plain also runs once
                under each resulting disk budget

        Returns:
            Rows with MiB/s, sha-256 and I/O totals, plus a text table
        """
        try:
            budget = MemoryBudget(ram_bytes=mem, block_bytes=block_size)
            rows = run_bench(
                corpus,
                sizes or [16 << 20],
                algorithms or list(ALGORITHMS),
                budget,
                seed,
                tmp,
                disk_factors=disk_budgets,
            )
        except (LZ77EMError, ValidationError, ValueError, OSError) as e:
            return {"status": "error", "error": str(e)}
        return {
            "status": "ok",
            "rows": [row.model_dump() for row in rows],
            "table": render_table(rows),
        }
