"""Reading and writing the ``.lz77`` parsing format."""

from lz77em.codec.reader import ParsingReader, decode_parsing_bytes, read_parsing
from lz77em.codec.records import RecordCodec, iter_records
from lz77em.codec.writer import HEADER_BYTES, MAGIC, encode_parsing, write_parsing

__all__ = [
    "HEADER_BYTES",
    "MAGIC",
    "ParsingReader",
    "RecordCodec",
    "decode_parsing_bytes",
    "encode_parsing",
    "iter_records",
    "read_parsing",
    "write_parsing",
]
