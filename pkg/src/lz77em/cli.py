"""Command-line interface: gen, encode, decode, verify and bench.

Reports are printed to stdout as JSON lines; logs go to stderr.
Exit codes: 0 ok, 1 verification mismatch or failure, 2 usage error,
3 infeasible or exhausted RAM/disk budget.
"""

import argparse
import json
import logging
import re
import sys
from pathlib import Path

from pydantic import ValidationError

from lz77em import __version__
from lz77em.codec.records import DEFAULT_WIDTH, WIDTHS
from lz77em.codec.writer import write_parsing
from lz77em.decoders import ALGORITHMS
from lz77em.errors import BudgetError, DiskFullError, FormatError, LZ77EMError
from lz77em.generators import (
    CORPUS_KINDS,
    DEFAULT_ITEM_WIDTH,
    gen_corpus,
    gen_permute_instance,
    permuted_text,
    random_permute_instance,
)
from lz77em.models.geometry import DEFAULT_BLOCK_BYTES, DEFAULT_RAM_BYTES, MemoryBudget
from lz77em.runner import (
    DEFAULT_MAX_ENCODE_BYTES,
    DecodeOptions,
    decode_file,
    encode_file,
    render_table,
    run_bench,
    verify_files,
)

logger = logging.getLogger("lz77em")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

_UNITS = {
    "": 1,
    "B": 1,
    "K": 1 << 10,
    "KIB": 1 << 10,
    "M": 1 << 20,
    "MIB": 1 << 20,
    "G": 1 << 30,
    "GIB": 1 << 30,
}
_SIZE = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*([A-Za-z]*)\s*$")


def parse_size(text: str) -> int:
    """Parse ``4096``, ``64K``, ``16MiB`` or ``1.5G`` into bytes (binary units)."""
    match = _SIZE.match(text)
    if not match or match.group(2).upper() not in _UNITS:
        raise argparse.ArgumentTypeError(f"invalid size: {text!r}")
    return int(float(match.group(1)) * _UNITS[match.group(2).upper()])


def _emit(report) -> None:
    print(report.model_dump_json())


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "permute":
        inst = random_permute_instance(args.items, args.item_width, args.seed)
        stats = write_parsing(gen_permute_instance(inst), args.output, args.width)
        if args.expected:
            Path(args.expected).write_bytes(permuted_text(inst))
        print(json.dumps({"status": "ok", "kind": "permute", "n": stats.n, "z": stats.z}))
        return EXIT_OK
    Path(args.output).write_bytes(gen_corpus(args.kind, args.size, args.seed))
    print(json.dumps({"status": "ok", "kind": args.kind, "n": args.size}))
    return EXIT_OK


def cmd_encode(args: argparse.Namespace) -> int:
    _emit(encode_file(args.input, args.output, args.width, args.max_ram))
    return EXIT_OK


def cmd_decode(args: argparse.Namespace) -> int:
    options = DecodeOptions(
        algorithm=args.algorithm,
        ram_bytes=args.mem,
        block_bytes=args.block_size,
        segment_bytes=args.segment_size,
        lmax=args.lmax,
        disk_budget=args.disk_budget,
        ram_limit=args.max_ram,
        tmp=args.tmp,
    )
    _emit(decode_file(args.input, args.output, options))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    budget = MemoryBudget(ram_bytes=args.mem, block_bytes=args.block_size)
    report = verify_files(args.text, args.parsing, budget, args.tmp)
    _emit(report)
    return EXIT_OK if report.status == "ok" else EXIT_MISMATCH


def cmd_bench(args: argparse.Namespace) -> int:
    budget = MemoryBudget(ram_bytes=args.mem, block_bytes=args.block_size)
    rows = run_bench(
        args.corpus,
        args.sizes,
        args.algorithms,
        budget,
        args.seed,
        args.tmp,
        disk_factors=args.disk_budgets,
    )
    for row in rows:
        _emit(row)
    print(render_table(rows), file=sys.stderr)
    passed = all(r.verified or r.status in ("skipped", "infeasible") for r in rows)
    return EXIT_OK if passed else EXIT_MISMATCH


def _add_budget_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mem", type=parse_size, default=DEFAULT_RAM_BYTES, help="RAM budget")
    parser.add_argument(
        "--block-size", type=parse_size, default=DEFAULT_BLOCK_BYTES, help="Disk block size"
    )
    parser.add_argument("--tmp", help="Scratch directory (default: $LZ77EM_TMPDIR or system temp)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lz77em", description="External-memory LZ77 decoding")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Warnings only")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Write a synthetic corpus or a permuting instance")
    gen.add_argument("kind", choices=[*CORPUS_KINDS, "permute"])
    gen.add_argument("output")
    gen.add_argument("--size", type=parse_size, default=1 << 20, help="Corpus size")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--items", type=int, default=1000, help="Permute: item count k")
    gen.add_argument("--item-width", type=int, default=DEFAULT_ITEM_WIDTH, help="Permute: h")
    gen.add_argument("--width", type=int, choices=WIDTHS, default=DEFAULT_WIDTH)
    gen.add_argument("--expected", help="Permute: also write the decoded text here")
    gen.set_defaults(func=cmd_gen)

    enc = sub.add_parser("encode", help="Factorize a text into a .lz77 parsing")
    enc.add_argument("input")
    enc.add_argument("output")
    enc.add_argument("--width", type=int, choices=WIDTHS, default=DEFAULT_WIDTH)
    enc.add_argument("--max-ram", type=parse_size, default=DEFAULT_MAX_ENCODE_BYTES)
    enc.set_defaults(func=cmd_encode)

    dec = sub.add_parser("decode", help="Decode a .lz77 parsing")
    dec.add_argument("input")
    dec.add_argument("output")
    dec.add_argument("--algorithm", choices=ALGORITHMS, default="plain")
    dec.add_argument("--segment-size", type=parse_size)
    dec.add_argument("--lmax", type=int)
    dec.add_argument("--disk-budget", type=parse_size, help="Peak disk bytes; 0 = unlimited")
    dec.add_argument("--max-ram", type=parse_size, help="ram: refuse texts larger than this")
    _add_budget_flags(dec)
    dec.set_defaults(func=cmd_decode)

    ver = sub.add_parser("verify", help="Check that a parsing decodes to a text")
    ver.add_argument("text")
    ver.add_argument("parsing")
    _add_budget_flags(ver)
    ver.set_defaults(func=cmd_verify)

    bench = sub.add_parser("bench", help="Throughput of the decoders on synthetic corpora")
    bench.add_argument("--corpus", choices=CORPUS_KINDS, default="dna_like")
    bench.add_argument("--sizes", type=parse_size, nargs="+", default=[16 << 20])
    bench.add_argument("--algorithms", choices=ALGORITHMS, nargs="+", default=list(ALGORITHMS))
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument(
        "--disk-budgets",
        type=float,
        nargs="+",
        metavar="FACTOR",
        help="Also run plain under disk budgets of FACTOR x (parsing + text size)",
    )
    _add_budget_flags(bench)
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (BudgetError, DiskFullError) as e:
        logger.error("%s", e)
        return EXIT_RESOURCE
    except (ValidationError, FormatError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except (LZ77EMError, OSError) as e:
        logger.error("%s", e)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
