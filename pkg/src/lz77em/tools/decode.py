"""Decoding and verification tools."""

from typing import Any

from mcp.server.fastmcp import FastMCP
from pydantic import ValidationError

from lz77em.errors import LZ77EMError
from lz77em.models.geometry import DEFAULT_BLOCK_BYTES, DEFAULT_RAM_BYTES, MemoryBudget
from lz77em.runner import DecodeOptions, decode_file, verify_files


def register(mcp: FastMCP) -> None:
    """Register decoding tools with the MCP server."""

    @mcp.tool()
    def decode_parsing(
        input_path: str,
        output_path: str,
        algorithm: str = "plain",
        mem: int = DEFAULT_RAM_BYTES,
        block_size: int = DEFAULT_BLOCK_BYTES,
        segment_size: int | None = None,
        lmax: int | None = None,
        disk_budget: int | None = None,
        tmp: str | None = None,
    ) -> dict[str, Any]:
        """Decode a .lz77 parsing into its text.

        Args:
            input_path: Parsing file
            output_path: Text file to write
            algorithm: ram, naive, pq or plain
            mem: RAM budget in bytes
            block_size: Disk block size in bytes
            segment_size: Segment size for pq/plain (derived from mem if omitted)
            lmax: Queue chunk bound for pq (default 16)
            disk_budget: Peak disk bytes for plain; 0 means unlimited
            tmp: Scratch directory

        Returns:
            Decode report with timing, sha-256, per-stream I/O and peak scratch
        """
        try:
            options = DecodeOptions(
                algorithm=algorithm,
                ram_bytes=mem,
                block_bytes=block_size,
                segment_bytes=segment_size,
                lmax=lmax,
                disk_budget=disk_budget,
                tmp=tmp,
            )
            return decode_file(input_path, output_path, options).model_dump()
        except (LZ77EMError, ValidationError, ValueError, OSError) as e:
            return {"status": "error", "error": str(e)}

    @mcp.tool()
    def verify_parsing(
        text_path: str,
        parsing_path: str,
        mem: int = DEFAULT_RAM_BYTES,
        block_size: int = DEFAULT_BLOCK_BYTES,
        tmp: str | None = None,
    ) -> dict[str, Any]:
        """Check that a parsing decodes to the given text.

        Args:
            text_path: Reference text
            parsing_path: Parsing to decode with the plain decoder
            mem: RAM budget in bytes
            block_size: Disk block size in bytes
            tmp: Scratch directory

        Returns:
            Verify report; status is "mismatch" with the first differing offset on failure
        """
        try:
            budget = MemoryBudget(ram_bytes=mem, block_bytes=block_size)
            return verify_files(text_path, parsing_path, budget, tmp).model_dump()
        except (LZ77EMError, ValidationError, ValueError, OSError) as e:
            return {"status": "error", "error": str(e)}
