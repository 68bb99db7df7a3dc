import csv
import io
import subprocess
import sys

import pytest

from rmatch.cli import SWEEP_COLUMNS, TIMING_COLUMNS, main
from rmatch.hypergraph import parse_hypergraph, validate_matching


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def write(tmp_path, capsys):
    def _write(*gen_args, name="h.txt"):
        code, out, _ = run(capsys, "gen", *gen_args)
        assert code == 0
        path = tmp_path / name
        path.write_text(out)
        return path

    return _write


def test_gen_examples(capsys):
    code, out, _ = run(capsys, "gen", "complete", "--r", 3, "--n", 2)
    assert code == 0 and len(parse_hypergraph(out)) == 8
    code, out, _ = run(capsys, "gen", "parity", "--r", 3, "--n", 2)
    assert code == 0 and len(parse_hypergraph(out)) == 4
    assert "# spec family=parity" in out
    code, out, _ = run(capsys, "gen", "latin", "--n", 3, "--rule", "cyclic")
    assert code == 0 and len(parse_hypergraph(out)) == 9


def test_gen_no_spec_header(capsys):
    _, out, _ = run(capsys, "gen", "complete", "--r", 2, "--n", 2, "--no-spec")
    assert "#" not in out


@pytest.mark.parametrize("args", [
    ["complete", "--r", 3, "--n", 3],
    ["parity", "--r", 5, "--n", 2],
    ["union-cover", "--r", 3, "--n", 4, "--k", 2],
    ["latin", "--n", 4],
    ["random", "--r", 4, "--n", 3, "--p", 0.5, "--seed", 11],
])
def test_round_trip_is_byte_identical(capsys, tmp_path, args):
    _, out, _ = run(capsys, "gen", *args)
    path = tmp_path / "h.txt"
    path.write_bytes(out.encode())
    assert parse_hypergraph(path.read_text()).to_text().encode() == path.read_bytes()


def test_gen_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["gen", "nonsense", "--n", "2"])
    assert info.value.code == 2
    code, _, err = run(capsys, "gen", "union-cover", "--r", 3, "--n", 2, "--k", 5)
    assert code == 2 and "ERROR k must" in err


def test_gen_latin_table(capsys, tmp_path):
    table = tmp_path / "t.txt"
    table.write_text("0 1\n1 0\n")
    code, out, _ = run(capsys, "gen", "latin", "--n", 2, "--table", table)
    assert code == 0 and len(parse_hypergraph(out)) == 4
    table.write_text("0 1\n0 1\n")
    code, _, _ = run(capsys, "gen", "latin", "--n", 2, "--table", table)
    assert code == 2


def test_check_examples(capsys, write):
    parity = write("parity", "--r", 3, "--n", 2, name="p.txt")
    code, out, _ = run(capsys, "check", parity, "--condition", "main", "--strict", 0, "--weak", 2)
    assert code == 1 and "VIOLATION" in out
    code, out, _ = run(capsys, "check", parity, "--condition", "fractional", "--I", "0")
    assert code == 0
    code, _, _ = run(capsys, "check", parity, "--condition", "fractional", "--I", "0", "--strict-fractional")
    assert code == 1
    complete = write("complete", "--r", 3, "--n", 3, name="c.txt")
    for cond in ["main", "ituple", "vertex"]:
        code, out, _ = run(capsys, "check", complete, "--condition", cond)
        assert code == 0, cond
    # n/2 + sqrt(n ln n) exceeds n = 3, so even the complete graph misses it
    assert run(capsys, "check", complete, "--condition", "ko")[0] == 1
    latin = write("latin", "--n", 3, name="l.txt")
    assert run(capsys, "check", latin, "--condition", "latin")[0] == 0


def test_match_and_verify_trace(capsys, write, tmp_path):
    h_path = write("complete", "--r", 4, "--n", 3)
    code, out, _ = run(capsys, "match", h_path)
    assert code == 0
    pm = [tuple(int(v) for v in line.split()[1].split(",")) for line in out.splitlines() if line.startswith("PM")]
    h = parse_hypergraph(h_path.read_text())
    assert validate_matching(h, pm).perfect
    trace = tmp_path / "trace.txt"
    trace.write_text(out)
    code, out, _ = run(capsys, "verify_trace", h_path, trace)
    assert code == 0 and out.strip() == "REPLAY OK"


def test_verify_trace_rejects_tampering(capsys, tmp_path):
    h_path = tmp_path / "h.txt"
    h_path.write_text(open("tests/data/exchange_cases_n4.txt").read())
    code, out, _ = run(capsys, "match", h_path)
    assert code == 0
    lines = out.splitlines()
    pm_lines = [i for i, line in enumerate(lines) if line.startswith("PM")]
    # drop one claimed edge
    del lines[pm_lines[-1]]
    trace = tmp_path / "bad.txt"
    trace.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "verify_trace", h_path, trace)
    assert code == 1 and out.startswith("REPLAY FAILED")


def test_exit_code_table(capsys, write, monkeypatch):
    parity = write("parity", "--r", 3, "--n", 2, name="p.txt")
    code, _, err = run(capsys, "match", parity)
    assert code == 3 and "CONDITION" in err
    code, out, _ = run(capsys, "oracle", parity)
    assert code == 4 and out.startswith("size=1 perfect=no")
    big = write("parity", "--r", 3, "--n", 5, name="big.txt")
    monkeypatch.setenv("RMATCH_BUDGET", "3")
    code, _, err = run(capsys, "oracle", big)
    assert code == 5 and "ERROR" in err
    code, _, _ = run(capsys, "oracle", big, "--budget", 10**6)
    assert code == 4
    assert run(capsys, "oracle", "/nonexistent/file")[0] == 2


def test_lp_output(capsys, write):
    parity = write("parity", "--r", 3, "--n", 2)
    code, out, _ = run(capsys, "lp", parity)
    assert code == 0 and out.splitlines()[0] == "nu*=2/1 tau*=2/1 duality=ok"
    code, out, _ = run(capsys, "lp", parity, "--I", "0", "--weights")
    assert code == 0
    assert "0,0,1 1/2" in out and "perfect_fractional=yes total=2/1" in out
    assert "cover_bound=" in out


def test_lp_condition_failure(capsys, tmp_path):
    path = tmp_path / "h.txt"
    path.write_text("3 2\n0 0 0\n")
    code, out, _ = run(capsys, "lp", path, "--I", "0")
    assert code == 3 and "VIOLATION" in out


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--n", 2, "--k", 2)
    assert code == 0
    assert out.splitlines() == ["MATCHING 0 0,0 1,1", "MATCHING 1 0,1 1,0"]


SWEEP_ARGS = ["sweep", "--r", 3, "--n-range", "4", "--p-range", "0.95", "--count", 10, "--seed0", 5]


def _rows(out):
    lines = out.splitlines()
    assert lines[0] == "# rmatch-sweep v1"
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_sweep_shape_and_properties(capsys):
    code, out, _ = run(capsys, *SWEEP_ARGS)
    assert code == 0
    rows = _rows(out)
    assert len(rows) == 10
    assert all(list(row) == SWEEP_COLUMNS and all(row.values()) for row in rows)
    for row in rows:
        if row["main"] == "HOLDS":
            assert row["solver"] == "PM"
        a, b = row["nu_star"].split("/")
        assert int(a) / int(b) >= int(row["oracle_max"])


def test_sweep_is_deterministic(capsys):
    first = run(capsys, *SWEEP_ARGS)[1]
    again = run(capsys, *SWEEP_ARGS)[1]
    parallel = run(capsys, *SWEEP_ARGS, "--jobs", 2)[1]
    assert first.encode() == again.encode() == parallel.encode()


def test_sweep_timing_columns(capsys):
    rows = _rows(run(capsys, *SWEEP_ARGS[:-4], "--count", 2, "--timing")[1])
    assert list(rows[0]) == SWEEP_COLUMNS + TIMING_COLUMNS


def test_console_script(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "rmatch.cli", "decompose", "--n", "3", "--k", "1"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "MATCHING 0 0 1 2\n"
