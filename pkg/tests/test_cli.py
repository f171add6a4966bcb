import csv
import io

import pytest

from gcindex.cli import BENCH_COLUMNS, main, parse_symbol, show_text


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def stats(out):
    return dict(line.split("=", 1) for line in out.splitlines())


@pytest.fixture
def abra(tmp_path, capsys):
    src = tmp_path / "abra.txt"
    src.write_bytes(b"abracadabra")
    idx = tmp_path / "abra.gci"
    code, out, _ = run(capsys, "build", src, "-o", idx)
    assert code == 0
    return idx, stats(out)


def test_build_reports_stats(abra):
    idx, st = abra
    assert st["engine"] == "unbalanced"
    assert st["N"] == "11" and st["sigma"] == "5"
    assert int(st["bytes"]) == idx.stat().st_size
    for key in ("n", "height", "w"):
        assert key in st


def test_single_queries(abra, capsys):
    idx, _ = abra
    assert run(capsys, "query", idx, "rank", "a", "5")[1] == "rank a 5 -> 2\n"
    assert run(capsys, "query", idx, "access", "3", "5")[1] == "access 3 5 -> rac\n"
    assert run(capsys, "query", idx, "access", "4")[1] == "access 4 -> a\n"
    assert run(capsys, "query", idx, "select", "a", "3")[1] == "select a 3 -> 6\n"


def test_script_continues_past_errors(abra, tmp_path, capsys):
    idx, _ = abra
    script = tmp_path / "q.txt"
    script.write_text("# comment\nrank a 11\nselect z 1\naccess 0 3\nfrob 1\nselect b 2\n\n")
    code, out, _ = run(capsys, "query", idx, "--script", script, "--oracle")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "rank a 11 -> 5  [oracle: agree]"
    assert lines[1].startswith("select z 1 -> error: OccurrenceOutOfRange")
    assert lines[2].startswith("access 0 3 -> error: PositionOutOfRange")
    assert lines[3].startswith("frob 1 -> error: QueryError")
    assert lines[4] == "select b 2 -> 9  [oracle: agree]"
    assert len(lines) == 5


def test_balanced_build(tmp_path, capsys):
    src = tmp_path / "t.txt"
    src.write_bytes(b"abracadabra" * 20)
    idx = tmp_path / "t.gci"
    code, out, _ = run(capsys, "build", src, "-o", idx, "--balanced", "--epsilon", "0.5")
    st = stats(out)
    assert code == 0 and st["engine"] == "balanced" and st["epsilon"] == "0.5"
    assert b"balanced" in idx.read_bytes()[:20]
    assert run(capsys, "query", idx, "rank", "a", "220")[1] == "rank a 220 -> 100\n"


def test_grammar_in_matches_text_build(tmp_path, capsys):
    gcs = tmp_path / "g.gcs"
    gcs.write_text("GCS1 2 4 3\nT 0 97\nT 1 98\nP 2 0 1\nP 3 2 2\n")
    src = tmp_path / "abab.txt"
    src.write_bytes(b"abab")
    a, b = tmp_path / "a.gci", tmp_path / "b.gci"
    assert run(capsys, "build", "--grammar-in", gcs, "-o", a)[0] == 0
    assert run(capsys, "build", src, "-o", b)[0] == 0
    script = tmp_path / "q.txt"
    script.write_text("\n".join(["access 1 4", "rank b 3", "select a 2", "access 2"]))
    assert run(capsys, "query", a, "--script", script)[1] == \
        run(capsys, "query", b, "--script", script)[1]


def test_bad_grammar_file(tmp_path, capsys):
    gcs = tmp_path / "g.gcs"
    gcs.write_text("GCS1 2 4 3\nT 0 97\n")
    code, _, err = run(capsys, "build", "--grammar-in", gcs, "-o", tmp_path / "x.gci")
    assert code == 1 and "header says" in err


def test_corrupt_index_exits_nonzero(abra, capsys):
    idx, _ = abra
    data = bytearray(idx.read_bytes())
    data[len(data) // 2] ^= 0xFF
    idx.write_bytes(bytes(data))
    code, out, err = run(capsys, "query", idx, "rank", "a", "1")
    assert code == 1 and out == "" and "corrupt index" in err


def test_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "query", tmp_path / "none.gci", "rank", "a", "1")
    assert code == 1 and err


def test_bench_csv(abra, capsys):
    idx, _ = abra
    for workload in ("access", "extract", "rank", "select"):
        code, out, _ = run(capsys, "bench", idx, "--workload", workload,
                           "--count", 5, "--length", 4, "--seed", 3)
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and rows[0] == BENCH_COLUMNS and len(rows) == 6
        for row in rows[1:]:
            assert row[0] == workload
            nums = [int(x) for x in row[3:]]
            assert nums[-1] == sum(nums[1:5])
    again = run(capsys, "bench", idx, "--workload", "rank", "--count", 5, "--seed", 3)[1]
    assert again == run(capsys, "bench", idx, "--workload", "rank", "--count", 5, "--seed", 3)[1]
    assert run(capsys, "bench", idx, "--count", 0)[1] == ",".join(BENCH_COLUMNS) + "\n"


def test_pathcount_commands(tmp_path, capsys):
    dag = tmp_path / "g.dag"
    dag.write_text("E u v\nE u w\nE v s1\nE w s1\nE w s2\n")
    idx = tmp_path / "g.gci"
    code, out, _ = run(capsys, "pathcount", "build", dag, "-o", idx)
    st = stats(out)
    assert code == 0 and st["paths"] == "3" and st["sinks"] == "2"
    assert run(capsys, "pathcount", "query", idx, "u", "s1")[1] == "pathcount u s1 -> 2\n"
    out = run(capsys, "pathcount", "query", idx, "u", "v")[1]
    assert out.startswith("pathcount u v -> error: NotASink")
    out = run(capsys, "query", idx, "rank", "a", "1")[1]
    assert "error" in out
    code, _, err = run(capsys, "pathcount", "build", dag, "-o", idx, "--max-paths", 2)
    assert code == 1 and "exceed" in err


def test_symbol_parsing():
    assert parse_symbol("a", True) == 97
    assert parse_symbol("\\x20", True) == 32
    assert parse_symbol("300", False) == 300
    assert show_text([97, 32, 10], True) == "a\\x20\\x0a"
    assert show_text([300, 7], False) == "300 7"


def test_module_entry_point(tmp_path):
    import subprocess
    import sys

    src = tmp_path / "t.txt"
    src.write_bytes(b"hello hello")
    idx = tmp_path / "t.gci"
    r = subprocess.run([sys.executable, "-m", "gcindex", "build", str(src), "-o", str(idx)],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "N=11" in r.stdout
    r = subprocess.run([sys.executable, "-m", "gcindex", "query", str(idx), "rank", "l", "11"],
                       capture_output=True, text=True)
    assert r.stdout == "rank l 11 -> 4\n"


def test_bench_bounds(tmp_path, capsys):
    import math
    import random

    from textgen import versioned_text

    src = tmp_path / "v.txt"
    src.write_bytes(versioned_text(20000, 4, random.Random(8)))
    idx = tmp_path / "v.gci"
    st = stats(run(capsys, "build", src, "-o", idx)[1])
    N, w = int(st["N"]), int(st["w"])
    out = run(capsys, "bench", idx, "--workload", "access", "--count", 300, "--seed", 1)[1]
    rows = list(csv.DictReader(io.StringIO(out)))
    assert all(int(r["light_transitions"]) <= int(math.log2(N)) for r in rows)
    out = run(capsys, "bench", idx, "--workload", "extract", "--count", 3,
              "--length", N, "--seed", 1)[1]
    rows = list(csv.DictReader(io.StringIO(out)))
    assert all(int(r["decompress_nodes"]) <= 8 * (1 + N / w) for r in rows)
