import csv
import io
import subprocess
import sys

import pytest

from oshusp import cli
from oshusp.osums_plus import mine_osums_plus

from conftest import DATA

EX = ["--db", DATA + ".db", "--utils", DATA + ".ut", "--shelf", DATA + ".sh"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mine_example_line(capsys):
    code, out, _ = run(capsys, "mine", "--algo", "osums-plus", *EX, "--threshold", "0.3")
    assert code == 0
    assert "{1}{3}\t28\t0.368421\t2,3" in out.splitlines()


def test_output_sorted(capsys):
    _, out, _ = run(capsys, "mine", "--algo", "osums", *EX, "--threshold", "0.05")
    pats = [line.split("\t")[0] for line in out.splitlines()]
    from oshusp.model import Pattern
    keys = [Pattern.parse(p).sort_key() for p in pats]
    assert keys == sorted(keys) and len(pats) == 239


def test_threshold_out_of_range(capsys):
    code, _, err = run(capsys, "mine", *EX, "--threshold", "1.5")
    assert code == 2 and "threshold" in err


def test_strategy_flag_mismatch(capsys):
    assert run(capsys, "mine", "--algo", "osums", "--no-gdp", *EX, "--threshold", "0.3")[0] == 1
    assert run(capsys, "mine", "--algo", "osums-plus", "--no-arc", *EX, "--threshold", "0.3")[0] == 1
    assert run(capsys, "mine", "--algo", "oracle", "--no-ldp", *EX, "--threshold", "0.3")[0] == 1


def test_bad_usage(capsys):
    assert run(capsys, "mine", "--threshold", "0.3")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


def test_inconsistent_shelf(capsys):
    argv = ["mine", "--db", DATA + ".db", "--utils", DATA + ".ut",
            "--shelf", DATA + "_table3.sh", "--threshold", "0.3"]
    code, _, err = run(capsys, *argv)
    assert code == 2 and "not on shelf" in err
    code, out, _ = run(capsys, *argv, "--relax-shelf")
    assert code == 0 and "{1}{3}\t28\t0.368421\t2,3" in out


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "mine", "--db", str(tmp_path / "no.db"), "--utils", DATA + ".ut",
                     "--threshold", "0.3")
    assert code == 2


def test_oracle_max_len_matches_osums(capsys):
    _, a, _ = run(capsys, "mine", "--algo", "oracle", "--max-len", "3", *EX, "--threshold", "0.1")
    _, b, _ = run(capsys, "mine", "--algo", "osums", *EX, "--threshold", "0.1")
    short = [line for line in b.splitlines() if len(line.split("\t")[0].replace("}{", " ").split()) <= 3]
    assert a.splitlines() == short and a


def test_stats_and_out_files(capsys, tmp_path):
    out, stats = tmp_path / "p.tsv", tmp_path / "s.csv"
    code, printed, _ = run(capsys, "mine", *EX, "--threshold", "0.3", "--out", str(out),
                           "--stats", str(stats))
    assert code == 0 and printed == ""
    assert len(out.read_text().splitlines()) == 93
    rows = list(csv.reader(stats.open()))
    assert rows[0] == ["algo", "xi", "patterns", "candidates", "time_ms", "peak_mem_bytes", "flags"]
    assert rows[1][0] == "osums-plus" and rows[1][2] == "93" and rows[1][6] == "gdp=on;gwp=on"


def test_limits_exit_three(capsys, tmp_path):
    stats = tmp_path / "s.csv"
    code, _, err = run(capsys, "mine", *EX, "--threshold", "0.05", "--max-mem", "100",
                       "--stats", str(stats))
    assert code == 3 and "aborted" in err
    assert "aborted=" in stats.read_text()
    assert run(capsys, "mine", *EX, "--threshold", "0.05", "--time-limit", "0")[0] == 3


@pytest.mark.parametrize("xi", ["0.3", "0.05"])
def test_verify_ok(capsys, xi):
    code, out, _ = run(capsys, "verify", *EX, "--threshold", xi)
    assert code == 0 and "agree" in out


def test_verify_detects_mutant(capsys, monkeypatch):
    def mutant(db, xi, **kw):
        report = mine_osums_plus(db, xi, **kw)
        report.patterns = report.patterns[1:]
        return report

    monkeypatch.setattr(cli, "mine_osums_plus", mutant)
    code, out, _ = run(capsys, "verify", *EX, "--threshold", "0.3")
    assert code == cli.EXIT_MISMATCH
    assert "only in oracle" in out


def test_verify_budget_refusal(capsys, tmp_path):
    prefix = str(tmp_path / "big")
    assert run(capsys, "gen", "--random-base", "100", "--seed", "3", "--out-prefix", prefix)[0] == 0
    code, _, err = run(capsys, "verify", "--db", prefix + ".db", "--utils", prefix + ".ut",
                       "--threshold", "0.3")
    assert code == 4 and "shrink" in err


def test_gen_deterministic(capsys, tmp_path):
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    for p in (a, b):
        code, _, _ = run(capsys, "gen", "--base", DATA, "--scale", "4", "--periods", "5",
                         "--seed", "7", "--out-prefix", p)
        assert code == 0
    with open(a + ".db") as fa, open(b + ".db") as fb:
        text = fa.read()
        assert text == fb.read()
    assert len(text.splitlines()) == 20


def test_bench_thresholds_monotone(capsys):
    code, out, _ = run(capsys, "bench", *EX, "--thresholds", "0.2,0.3,0.4")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 6
    for algo in ("osums", "osums-plus"):
        counts = [int(r["patterns"]) for r in rows if r["algo"] == algo]
        assert counts == sorted(counts, reverse=True)


def test_bench_ablate(capsys, tmp_path):
    prefix = str(tmp_path / "base")
    run(capsys, "gen", "--random-base", "300", "--seed", "1", "--out-prefix", prefix)
    code, out, _ = run(capsys, "bench", "--db", prefix + ".db", "--utils", prefix + ".ut",
                       "--shelf", prefix + ".sh", "--thresholds", "0.05", "--ablate")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4 + 3
    for algo in ("osums", "osums-plus"):
        mine = [r for r in rows if r["algo"] == algo]
        full = int(mine[0]["candidates"])
        assert all(int(r["candidates"]) >= full for r in mine[1:])
        assert len({r["patterns"] for r in mine}) == 1


def test_bench_flags_aborted_runs(capsys):
    code, out, _ = run(capsys, "bench", *EX, "--thresholds", "0.05", "--max-mem", "100")
    assert code == 0
    assert all("aborted=" in r["flags"] for r in csv.DictReader(io.StringIO(out)))


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "oshusp", "mine", *EX, "--threshold", "0.36"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "{1}{3}\t28\t0.368421\t2,3"


def test_csv_threshold_text():
    from fractions import Fraction
    from oshusp.cli import _xi_text
    assert [_xi_text(Fraction(n, d)) for n, d in ((3, 10), (1, 40), (1, 3), (1, 1))] == \
        ["0.3", "0.025", "1/3", "1"]
