"""Corpus generation and encoding tools."""

from pathlib import Path
from typing import Any

from mcp.server.fastmcp import FastMCP

from lz77em.codec.writer import write_parsing
from lz77em.errors import LZ77EMError
from lz77em.generators import (
    gen_corpus,
    gen_permute_instance,
    permuted_text,
    random_permute_instance,
)
from lz77em.runner import DEFAULT_MAX_ENCODE_BYTES, encode_file


def register(mcp: FastMCP) -> None:
    """Register corpus and encoding tools with the MCP server."""

    @mcp.tool()
    def generate_corpus(
        kind: str,
        path: str,
        size: int = 1 << 20,
        seed: int = 0,
        items: int = 1000,
        item_width: int = 8,
    ) -> dict[str, Any]:
        """Write a synthetic text, or the parsing of a permuting instance.

        Args:
            kind: random255, dna_like, repetitive, or permute
            path: Output file (a .lz77 parsing for permute, raw text otherwise)
            size: Text size in bytes (corpus kinds)
            seed: Random seed; equal seeds give identical output
            items: Number of items k (permute)
            item_width: Item width h in bytes (permute)

        Returns:
            Status dict with the text length
        """
        try:
            if kind == "permute":
                inst = random_permute_instance(items, item_width, seed)
                stats = write_parsing(gen_permute_instance(inst), path)
                expected = Path(path).with_suffix(".expected")
                expected.write_bytes(permuted_text(inst))
                return {
                    "status": "created",
                    "path": path,
                    "expected_path": str(expected),
                    "n": stats.n,
                    "z": stats.z,
                }
            Path(path).write_bytes(gen_corpus(kind, size, seed))
            return {"status": "created", "path": path, "n": size}
        except (LZ77EMError, ValueError, OSError) as e:
            return {"status": "error", "error": str(e)}

    @mcp.tool()
    def encode_text(
        input_path: str,
        output_path: str,
        width: int = 5,
        max_ram: int = DEFAULT_MAX_ENCODE_BYTES,
    ) -> dict[str, Any]:
        """Factorize a text file into a .lz77 parsing.

        Args:
            input_path: Raw text file
            output_path: Parsing file to write
            width: Integer width in bytes, 5 or 8
            max_ram: Largest text the in-RAM factorizer accepts

        Returns:
            Encode report with n, z, z_rep and n/z
        """
        try:
            return encode_file(input_path, output_path, width, max_ram).model_dump()
        except (LZ77EMError, ValueError, OSError) as e:
            return {"status": "error", "error": str(e)}
