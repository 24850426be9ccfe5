"""Tests for the lz77em command line."""

import argparse
import hashlib
import json

import pytest

from lz77em.cli import EXIT_MISMATCH, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, main, parse_size

SMALL = ["--mem", "64K", "--block-size", "4K"]


def _last_report(capsys) -> dict:
    lines = [line for line in capsys.readouterr().out.splitlines() if line.strip()]
    return json.loads(lines[-1])


@pytest.fixture
def corpus(temp_dir, capsys):
    """A generated dna_like text and its parsing."""
    text = temp_dir / "text.txt"
    parsing = temp_dir / "text.lz77"
    assert main(["gen", "dna_like", str(text), "--size", "20000", "--seed", "3"]) == EXIT_OK
    assert main(["encode", str(text), str(parsing)]) == EXIT_OK
    capsys.readouterr()
    return text, parsing


class TestParseSize:
    @pytest.mark.parametrize(
        "text,value",
        [("4096", 4096), ("64K", 65536), ("16MiB", 16 << 20), ("1.5G", 3 << 29), ("2 kib", 2048)],
    )
    def test_units(self, text, value):
        assert parse_size(text) == value

    @pytest.mark.parametrize("text", ["", "12Q", "-5", "M"])
    def test_invalid(self, text):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_size(text)


class TestGenEncode:
    def test_gen_is_deterministic(self, temp_dir):
        a, b = temp_dir / "a", temp_dir / "b"
        main(["gen", "repetitive", str(a), "--size", "10K", "--seed", "7"])
        main(["gen", "repetitive", str(b), "--size", "10K", "--seed", "7"])
        assert a.read_bytes() == b.read_bytes()
        assert len(a.read_bytes()) == 10240

    def test_encode_report(self, temp_dir, capsys):
        text = temp_dir / "t.txt"
        text.write_bytes(b"abaababa")
        assert main(["encode", str(text), str(temp_dir / "t.lz77")]) == EXIT_OK
        report = _last_report(capsys)
        assert report["n"] == 8
        assert report["z"] == 5
        assert report["z_rep"] == 3
        assert report["n_over_z"] == pytest.approx(1.6)

    def test_encode_empty_text(self, temp_dir, capsys):
        text = temp_dir / "empty.txt"
        text.write_bytes(b"")
        assert main(["encode", str(text), str(temp_dir / "empty.lz77")]) == EXIT_OK
        report = _last_report(capsys)
        assert report["n"] == 0
        assert report["n_over_z"] is None

    def test_encode_over_ram_limit(self, temp_dir):
        text = temp_dir / "t.txt"
        text.write_bytes(bytes(10_000))
        args = ["encode", str(text), str(temp_dir / "t.lz77"), "--max-ram", "4K"]
        assert main(args) == EXIT_RESOURCE

    def test_gen_permute(self, temp_dir, capsys):
        parsing, expected, out = temp_dir / "p.lz77", temp_dir / "p.expected", temp_dir / "p.out"
        args = ["gen", "permute", str(parsing), "--items", "3000", "--expected", str(expected)]
        assert main(args) == EXIT_OK
        assert _last_report(capsys)["n"] == 2 * 3000 * 8
        assert main(["decode", str(parsing), str(out), "--algorithm", "pq", *SMALL]) == EXIT_OK
        assert out.read_bytes() == expected.read_bytes()


class TestDecode:
    @pytest.mark.parametrize("algorithm", ["ram", "naive", "pq", "plain"])
    def test_every_algorithm(self, corpus, temp_dir, capsys, algorithm):
        text, parsing = corpus
        out = temp_dir / f"{algorithm}.out"
        args = ["decode", str(parsing), str(out), "--algorithm", algorithm, *SMALL]
        assert main(args) == EXIT_OK
        report = _last_report(capsys)
        assert out.read_bytes() == text.read_bytes()
        assert report["algorithm"] == algorithm
        assert report["n"] == 20000
        assert report["sha256"] == hashlib.sha256(text.read_bytes()).hexdigest()
        assert report["io"]["totals"]["bytes_written"] >= 20000

    def test_disk_budget_runs_in_parts(self, corpus, temp_dir, capsys):
        _, parsing = corpus
        budget = str(parsing.stat().st_size + 20000 + 16384)
        args = ["decode", str(parsing), str(temp_dir / "o"), "--segment-size", "1K", *SMALL]
        assert main([*args, "--disk-budget", budget]) == EXIT_OK
        report = _last_report(capsys)
        assert report["part_count"] >= 1
        assert report["peak_disk_bytes"] <= int(budget)

    def test_lmax_needs_pq(self, corpus, temp_dir):
        _, parsing = corpus
        args = ["decode", str(parsing), str(temp_dir / "o"), "--algorithm", "plain", "--lmax", "4"]
        assert main(args) == EXIT_USAGE

    def test_infeasible_disk_budget(self, corpus, temp_dir):
        _, parsing = corpus
        args = ["decode", str(parsing), str(temp_dir / "o"), "--disk-budget", "100", *SMALL]
        assert main(args) == EXIT_RESOURCE

    def test_ram_limit(self, corpus, temp_dir):
        _, parsing = corpus
        args = ["decode", str(parsing), str(temp_dir / "o"), "--algorithm", "ram"]
        assert main([*args, "--max-ram", "4K"]) == EXIT_RESOURCE

    @pytest.mark.parametrize("algorithm", ["plain", "pq"])
    def test_full_output_disk(self, corpus, temp_dir, full_disk, algorithm):
        _, parsing = corpus
        full_disk("output")
        args = ["decode", str(parsing), str(temp_dir / "o"), "--algorithm", algorithm, *SMALL]
        assert main(args) == EXIT_RESOURCE

    def test_budget_below_four_blocks(self, corpus, temp_dir):
        _, parsing = corpus
        args = ["decode", str(parsing), str(temp_dir / "o"), "--mem", "8K", "--block-size", "4K"]
        assert main(args) == EXIT_USAGE

    def test_not_a_parsing(self, temp_dir):
        bogus = temp_dir / "bogus.lz77"
        bogus.write_bytes(b"hello world, not a parsing")
        assert main(["decode", str(bogus), str(temp_dir / "o"), *SMALL]) == EXIT_USAGE

    def test_missing_arguments(self):
        with pytest.raises(SystemExit) as exc:
            main(["decode"])
        assert exc.value.code == EXIT_USAGE


class TestVerify:
    def test_match(self, corpus, capsys):
        text, parsing = corpus
        assert main(["verify", str(text), str(parsing), *SMALL]) == EXIT_OK
        assert _last_report(capsys)["status"] == "ok"

    def test_mismatch(self, corpus, temp_dir, capsys):
        text, parsing = corpus
        altered = bytearray(text.read_bytes())
        altered[1234] ^= 0xFF
        wrong = temp_dir / "wrong.txt"
        wrong.write_bytes(altered)
        assert main(["verify", str(wrong), str(parsing), *SMALL]) == EXIT_MISMATCH
        report = _last_report(capsys)
        assert report["status"] == "mismatch"
        assert report["mismatch_offset"] == 1234

    def test_shorter_text(self, corpus, temp_dir, capsys):
        text, parsing = corpus
        short = temp_dir / "short.txt"
        short.write_bytes(text.read_bytes()[:500])
        assert main(["verify", str(short), str(parsing), *SMALL]) == EXIT_MISMATCH
        assert _last_report(capsys)["mismatch_offset"] == 500


class TestBench:
    def test_small_sizes(self, temp_dir, capsys):
        args = ["bench", "--sizes", "4K", "8K", "--algorithms", "ram", "plain", "--tmp"]
        assert main([*args, str(temp_dir), *SMALL]) == EXIT_OK
        captured = capsys.readouterr()
        rows = [json.loads(line) for line in captured.out.splitlines() if line.strip()]
        assert [(r["size"], r["algorithm"]) for r in rows] == [
            (4096, "ram"),
            (4096, "plain"),
            (8192, "ram"),
            (8192, "plain"),
        ]
        assert all(r["verified"] for r in rows)
        assert "MiB/s" in captured.err
        assert not list(temp_dir.glob("bench-*"))

    def test_disk_budget_sweep(self, temp_dir, capsys):
        args = ["bench", "--sizes", "16K", "--algorithms", "plain", "--disk-budgets", "0.5", "4"]
        assert main([*args, "--tmp", str(temp_dir), *SMALL]) == EXIT_OK
        captured = capsys.readouterr()
        rows = [json.loads(line) for line in captured.out.splitlines() if line.strip()]
        assert [(r["algorithm"], r["disk_factor"]) for r in rows] == [
            ("plain", None),
            ("plain", 0.5),
            ("plain", 4.0),
        ]
        assert rows[1]["status"] == "infeasible"
        assert not rows[1]["verified"]
        swept = rows[2]
        assert swept["verified"]
        assert swept["peak_disk_bytes"] <= swept["disk_budget"]
        assert "x0.5" in captured.err

    def test_disk_budget_factor_must_be_positive(self, temp_dir):
        args = ["bench", "--sizes", "4K", "--disk-budgets", "0", "--tmp", str(temp_dir), *SMALL]
        assert main(args) == EXIT_USAGE

    def test_sizes_must_ascend(self, temp_dir):
        args = ["bench", "--sizes", "8K", "4K", "--tmp", str(temp_dir), *SMALL]
        assert main(args) == EXIT_USAGE
