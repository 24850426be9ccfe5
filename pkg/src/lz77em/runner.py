"""Command implementations shared by the CLI and the MCP tools.

Each command returns a pydantic report; callers decide how to print it.
"""

import hashlib
import logging
import shutil
import time
from pathlib import Path

from pydantic import BaseModel, Field, model_validator

from lz77em.codec.reader import read_parsing
from lz77em.codec.records import DEFAULT_WIDTH
from lz77em.codec.writer import write_parsing
from lz77em.decoders import (
    ALGORITHMS,
    decode_empq,
    decode_naive_em,
    decode_partwise,
    decode_plain,
    decode_ram,
)
from lz77em.emkit.scratch import resolve_tmp
from lz77em.errors import BudgetError
from lz77em.factorize import factorize_greedy
from lz77em.generators import gen_corpus
from lz77em.models.geometry import (
    DEFAULT_BLOCK_BYTES,
    DEFAULT_LMAX,
    DEFAULT_RAM_BYTES,
    MIB,
    EmpqConfig,
    MemoryBudget,
    PlainConfig,
    empq_segment_size,
    plain_segment_size,
)
from lz77em.models.iostats import IoStats
from lz77em.models.reports import BenchRow, DecodeReport, DecodeResult, EncodeReport, VerifyReport

logger = logging.getLogger(__name__)

DEFAULT_MAX_ENCODE_BYTES = 256 * MIB
HASH_CHUNK = 1 * MIB
# generous disk need of one bench size, as a multiple of the text size
BENCH_DISK_FACTOR = 8


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        while chunk := f.read(HASH_CHUNK):
            digest.update(chunk)
    return digest.hexdigest()


def encode_file(
    input_path: str | Path,
    output_path: str | Path,
    width: int = DEFAULT_WIDTH,
    max_ram: int = DEFAULT_MAX_ENCODE_BYTES,
) -> EncodeReport:
    """Factorize a text file in RAM and write its ``.lz77`` parsing."""
    size = Path(input_path).stat().st_size
    if size > max_ram:
        raise BudgetError(
            f"{input_path} has {size} bytes, above the in-RAM factorizer limit of {max_ram}; "
            "raise it with --max-ram"
        )
    started = time.perf_counter()
    text = Path(input_path).read_bytes()
    stats = write_parsing(factorize_greedy(text), output_path, width)
    seconds = time.perf_counter() - started
    logger.info(
        "encoded %s: n=%d z=%d n/z=%s", input_path, stats.n, stats.z, stats.avg_phrase_length
    )
    return EncodeReport(
        input_path=str(input_path),
        output_path=str(output_path),
        width=width,
        n=stats.n,
        z=stats.z,
        z_rep=stats.z_rep,
        n_over_z=stats.avg_phrase_length,
        seconds=seconds,
    )


class DecodeOptions(BaseModel):
    """Decoder selection and budgets, as given on the command line."""

    algorithm: str = Field(default="plain", description="One of ram, naive, pq, plain")
    ram_bytes: int = Field(default=DEFAULT_RAM_BYTES, description="RAM budget (--mem)")
    block_bytes: int = Field(default=DEFAULT_BLOCK_BYTES, description="Block size (--block-size)")
    segment_bytes: int | None = Field(default=None, description="Segment size; derived if unset")
    lmax: int | None = Field(default=None, ge=1, description="Queue chunk bound (pq only)")
    disk_budget: int | None = Field(default=None, ge=0, description="Peak disk (plain only)")
    ram_limit: int | None = Field(default=None, ge=0, description="Text size cap (ram only)")
    tmp: str | None = Field(default=None, description="Scratch directory")

    @model_validator(mode="after")
    def _check_flags(self) -> "DecodeOptions":
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"Unknown algorithm: {self.algorithm}. Expected one of {ALGORITHMS}")
        if self.lmax is not None and self.algorithm != "pq":
            raise ValueError("--lmax only applies to --algorithm pq")
        if self.disk_budget is not None and self.algorithm != "plain":
            raise ValueError("--disk-budget only applies to --algorithm plain")
        if self.segment_bytes is not None and self.algorithm not in ("pq", "plain"):
            raise ValueError("--segment-size only applies to --algorithm pq or plain")
        if self.ram_limit is not None and self.algorithm != "ram":
            raise ValueError("--max-ram only applies to --algorithm ram")
        return self

    @property
    def budget(self) -> MemoryBudget:
        return MemoryBudget(ram_bytes=self.ram_bytes, block_bytes=self.block_bytes)


def text_length(parsing_path: str | Path, stats: IoStats | None = None) -> int:
    """Length of the text a parsing decodes to (one streaming pass)."""
    reader = read_parsing(parsing_path, stats, stream_name="plan")
    for _ in reader:
        pass
    return reader.stats.n


def run_decoder(
    parsing_path: str | Path, output_path: str | Path, options: DecodeOptions, stats: IoStats
) -> DecodeResult:
    budget = options.budget
    algorithm = options.algorithm
    if algorithm == "ram":
        text = decode_ram(
            parsing_path,
            output_path,
            ram_limit=options.ram_limit,
            stats=stats,
            block_bytes=budget.block_bytes,
        )
        return DecodeResult(algorithm="ram", n=len(text), io=stats)
    if algorithm == "naive":
        return decode_naive_em(parsing_path, output_path, budget, stats=stats)
    if algorithm == "pq":
        cfg = EmpqConfig(
            segment_bytes=options.segment_bytes or empq_segment_size(budget),
            lmax=options.lmax or DEFAULT_LMAX,
            budget=budget,
        )
        return decode_empq(parsing_path, output_path, cfg, tmp=options.tmp, stats=stats)
    segment = options.segment_bytes or plain_segment_size(text_length(parsing_path, stats), budget)
    cfg = PlainConfig(segment_bytes=segment, budget=budget, disk_budget=options.disk_budget or 0)
    if cfg.disk_budget:
        return decode_partwise(parsing_path, output_path, cfg, tmp=options.tmp, stats=stats)
    return decode_plain(parsing_path, output_path, cfg, tmp=options.tmp, stats=stats)


def decode_file(
    parsing_path: str | Path, output_path: str | Path, options: DecodeOptions
) -> DecodeReport:
    """Decode with the selected algorithm and report time, throughput and I/O."""
    stats = IoStats()
    started = time.perf_counter()
    result = run_decoder(parsing_path, output_path, options, stats)
    seconds = time.perf_counter() - started
    return DecodeReport(
        algorithm=result.algorithm,
        input_path=str(parsing_path),
        output_path=str(output_path),
        n=result.n,
        seconds=seconds,
        mib_per_s=result.n / MIB / seconds if seconds > 0 else None,
        sha256=sha256_file(output_path),
        segment_bytes=result.segment_bytes,
        lmax=result.lmax,
        peak_scratch_bytes=result.peak_scratch_bytes,
        peak_disk_bytes=result.peak_disk_bytes,
        part_count=result.part_count,
        io=stats,
    )


def compare_files(expected_path: str | Path, actual_path: str | Path) -> VerifyReport:
    """Bytewise comparison; the report carries the first differing offset."""
    report = VerifyReport(text_path=str(expected_path), parsing_path="")
    offset = 0
    with open(expected_path, "rb") as exp, open(actual_path, "rb") as act:
        while True:
            a = exp.read(HASH_CHUNK)
            b = act.read(HASH_CHUNK)
            if a == b:
                if not a:
                    break
                offset += len(a)
                continue
            common = min(len(a), len(b))
            at = next((i for i in range(common) if a[i] != b[i]), common)
            report.status = "mismatch"
            report.mismatch_offset = offset + at
            report.expected = a[at] if at < len(a) else None
            report.actual = b[at] if at < len(b) else None
            break
    report.n = offset if report.status == "ok" else report.mismatch_offset
    return report


def verify_files(
    text_path: str | Path,
    parsing_path: str | Path,
    budget: MemoryBudget | None = None,
    tmp: str | Path | None = None,
) -> VerifyReport:
    """Decode ``parsing_path`` with the plain decoder and compare it to ``text_path``."""
    budget = budget or MemoryBudget()
    workdir = resolve_tmp(tmp)
    workdir.mkdir(parents=True, exist_ok=True)
    decoded = workdir / f"verify-{Path(parsing_path).name}-{time.monotonic_ns()}.out"
    try:
        options = DecodeOptions(
            algorithm="plain",
            ram_bytes=budget.ram_bytes,
            block_bytes=budget.block_bytes,
            tmp=str(workdir),
        )
        run_decoder(parsing_path, decoded, options, IoStats())
        report = compare_files(text_path, decoded)
    finally:
        decoded.unlink(missing_ok=True)
    report.parsing_path = str(parsing_path)
    if report.status != "ok":
        logger.warning(
            "mismatch at offset %d: expected %s, got %s",
            report.mismatch_offset,
            report.expected,
            report.actual,
        )
    return report


def _bench_row(
    corpus: str,
    size: int,
    encoded: EncodeReport,
    report: DecodeReport,
    expected: str,
    **extra,
) -> BenchRow:
    totals = report.io.totals()
    return BenchRow(
        corpus=corpus,
        size=size,
        algorithm=report.algorithm,
        n=report.n,
        z=encoded.z,
        seconds=report.seconds,
        mib_per_s=report.mib_per_s,
        sha256=report.sha256,
        verified=report.sha256 == expected,
        peak_scratch_bytes=report.peak_scratch_bytes,
        peak_disk_bytes=report.peak_disk_bytes,
        part_count=report.part_count,
        bytes_read=totals.bytes_read,
        bytes_written=totals.bytes_written,
        **extra,
    )


def run_bench(
    corpus: str,
    sizes: list[int],
    algorithms: list[str],
    budget: MemoryBudget | None = None,
    seed: int = 0,
    tmp: str | Path | None = None,
    disk_factors: list[float] | None = None,
) -> list[BenchRow]:
    """Generate, encode and decode each size with each algorithm, sequentially.

    Args:
        corpus: Kind passed to ``gen_corpus``.
        sizes: Ascending text sizes in bytes.
        algorithms: Decoders run without a disk budget, in order.
        budget: RAM and block size of every decoder run.
        seed: Corpus seed.
        tmp: Working directory for texts, parsings, outputs and scratch.
        disk_factors: After the algorithms, the plain decoder runs once per
            factor with a disk budget of ``factor * (parsing bytes + n)``.

    Returns:
        One row per size and run; sweep rows carry ``disk_factor``, and a
        budget below the feasible minimum gives an ``infeasible`` row.
    """
    if sizes != sorted(sizes):
        raise ValueError(f"sizes must be ascending, got {sizes}")
    factors = list(disk_factors or ())
    if any(factor <= 0 for factor in factors):
        raise ValueError(f"disk budget factors must be positive, got {factors}")
    budget = budget or MemoryBudget()
    workdir = resolve_tmp(tmp)
    workdir.mkdir(parents=True, exist_ok=True)
    rows: list[BenchRow] = []
    for size in sizes:
        free = shutil.disk_usage(workdir).free
        if free < BENCH_DISK_FACTOR * size:
            note = f"needs about {BENCH_DISK_FACTOR * size} bytes of disk, {free} free"
            logger.warning("skipping %s at %d bytes: %s", corpus, size, note)
            rows.extend(
                BenchRow(corpus=corpus, size=size, algorithm=a, status="skipped", note=note)
                for a in algorithms
            )
            continue
        stem = workdir / f"bench-{corpus}-{size}-{seed}"
        text_path = stem.with_suffix(".txt")
        parsing_path = stem.with_suffix(".lz77")
        output_path = stem.with_suffix(".out")
        try:
            text = gen_corpus(corpus, size, seed)
            text_path.write_bytes(text)
            expected = hashlib.sha256(text).hexdigest()
            del text
            max_ram = max(size, DEFAULT_MAX_ENCODE_BYTES)
            encoded = encode_file(text_path, parsing_path, max_ram=max_ram)

            def decode(algorithm: str, disk_budget: int | None = None) -> DecodeReport:
                options = DecodeOptions(
                    algorithm=algorithm,
                    ram_bytes=budget.ram_bytes,
                    block_bytes=budget.block_bytes,
                    disk_budget=disk_budget,
                    tmp=str(workdir),
                )
                return decode_file(parsing_path, output_path, options)

            for algorithm in algorithms:
                report = decode(algorithm)
                rows.append(_bench_row(corpus, size, encoded, report, expected))
                logger.info(
                    "bench %s %d %s: %.2f MiB/s", corpus, size, algorithm, report.mib_per_s or 0
                )

            volume = parsing_path.stat().st_size + size
            for factor in factors:
                disk_budget = int(factor * volume)
                sweep = {"disk_factor": factor, "disk_budget": disk_budget}
                try:
                    report = decode("plain", disk_budget)
                except BudgetError as e:
                    logger.warning("bench %s %d disk x%g: %s", corpus, size, factor, e)
                    rows.append(
                        BenchRow(
                            corpus=corpus,
                            size=size,
                            algorithm="plain",
                            status="infeasible",
                            note=str(e),
                            z=encoded.z,
                            **sweep,
                        )
                    )
                    continue
                rows.append(_bench_row(corpus, size, encoded, report, expected, **sweep))
                logger.info(
                    "bench %s %d disk x%g: %d parts, peak disk %s, %.2f MiB/s",
                    corpus,
                    size,
                    factor,
                    report.part_count,
                    report.peak_disk_bytes,
                    report.mib_per_s or 0,
                )
        finally:
            for path in (text_path, parsing_path, output_path):
                path.unlink(missing_ok=True)
    return rows


def render_table(rows: list[BenchRow]) -> str:
    """Fixed-width text table of bench rows."""
    header = (
        f"{'corpus':<11} {'size':>12} {'algorithm':<9} {'disk':>6} {'MiB/s':>9} {'parts':>5} "
        f"{'ok':<3} note"
    )
    lines = [header, "-" * len(header)]
    for row in rows:
        speed = f"{row.mib_per_s:9.2f}" if row.mib_per_s is not None else f"{'-':>9}"
        disk = f"x{row.disk_factor:g}" if row.disk_factor is not None else "-"
        ok = "yes" if row.verified else "no"
        lines.append(
            f"{row.corpus:<11} {row.size:>12} {row.algorithm:<9} {disk:>6} {speed} "
            f"{row.part_count:>5} {ok:<3} {row.note or row.status if row.status != 'ok' else ''}"
            .rstrip()
        )
    return "\n".join(lines)
