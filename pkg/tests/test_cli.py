import json
import subprocess
import sys

import pytest

from ndqc import cli, report
from ndqc.boolfn import make_named
from ndqc.polys import parse_poly, verify_ndet


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr().out
    return code, out


class TestAnalyze:
    def test_or4_measures(self, capsys):
        code, out = run_cli(["analyze", "--family", "OR", "--n", "4"], capsys)
        assert code == 0
        rep = json.loads(out)
        m = rep["measures"]
        assert m["ndeg"] == 1 and m["C1"] == 1 and m["C0"] == 4
        assert m["N"] == 1 and m["NQ"] == 1

    def test_parity_table(self, capsys):
        code, out = run_cli(["analyze", "--table", "n=2;hex=6"], capsys)
        assert code == 0
        rep = json.loads(out)
        assert rep["measures"]["deg"] == 2
        assert rep["measures"]["ndeg"] == 1
        w = parse_poly(rep["witness"], 2)
        assert w.degree == 1
        assert verify_ndet(w, make_named("PARITY", 2))

    def test_const0_error_entry(self, capsys):
        code, out = run_cli(["analyze", "--family", "CONST0", "--n", "3"],
                            capsys)
        assert code == 0
        rep = json.loads(out)
        assert rep["measures"]["ndeg"] == {"error": "IdenticallyZero"}
        assert rep["witness"] is None

    def test_bad_table_exits_nonzero(self, capsys):
        code, _ = run_cli(["analyze", "--table", "n=2;hex=zz"], capsys)
        assert code == 2

    def test_requires_one_source(self, capsys):
        code, _ = run_cli(["analyze"], capsys)
        assert code == 2

    def test_determinism(self, capsys):
        _, out1 = run_cli(["analyze", "--family", "PARITY", "--n", "3"],
                          capsys)
        _, out2 = run_cli(["analyze", "--family", "PARITY", "--n", "3"],
                          capsys)
        assert out1 == out2

    def test_seed_echoed(self, capsys):
        _, out = run_cli(["--seed", "77", "analyze", "--family", "OR",
                          "--n", "2"], capsys)
        assert json.loads(out)["seed"] == 77


class TestTheorems:
    def test_n1_exhaustive(self, capsys):
        code, out = run_cli(["theorems", "--n", "1", "--exhaustive"], capsys)
        assert code == 0
        rep = json.loads(out)
        assert rep["all_pass"]
        assert all(iq["passes"] == 4 and iq["total"] == 4
                   for iq in rep["inequalities"])

    def test_n2_exhaustive(self, capsys):
        code, out = run_cli(["theorems", "--n", "2", "--exhaustive"], capsys)
        assert code == 0
        rep = json.loads(out)
        assert all(iq["passes"] == 16 for iq in rep["inequalities"])

    def test_sampled(self, capsys):
        code, out = run_cli(["theorems", "--n", "4", "--samples", "40",
                             "--seed", "7"], capsys)
        assert code == 0
        rep = json.loads(out)
        assert rep["samples"] == 40 and rep["all_pass"]

    def test_cap(self, capsys):
        code, _ = run_cli(["theorems", "--n", "4", "--exhaustive"], capsys)
        assert code == 2


class TestSeparation:
    def test_query_n4(self, capsys):
        code, out = run_cli(["separation", "query", "--n", "4"], capsys)
        assert code == 0
        rep = json.loads(out)
        assert rep["all_pass"]
        assert rep["values"]["NQ"] == 1 and rep["values"]["N"] == 4
        assert rep["values"]["ndeg_complement"] >= 3

    def test_query_n2_witness(self, capsys):
        code, out = run_cli(["separation", "query", "--n", "2"], capsys)
        rep = json.loads(out)
        assert code == 0
        names = [c["name"] for c in rep["checks"]]
        assert "complement_witness_x1_minus_x2" in names

    def test_comm_n3(self, capsys):
        code, out = run_cli(["separation", "comm", "--n", "3"], capsys)
        assert code == 0
        rep = json.loads(out)
        assert rep["values"]["rank"] <= 4
        assert rep["values"]["protocol_cost"] <= 3
        assert rep["values"]["fooling_bound"] == 4

    def test_ne_n6(self, capsys):
        code, out = run_cli(["separation", "ne", "--n", "6"], capsys)
        assert code == 0
        assert json.loads(out)["values"]["cost"] == 2

    def test_query_float_mode(self, capsys):
        code, out = run_cli(["--mode", "float", "separation", "query",
                             "--n", "3"], capsys)
        assert code == 0 and json.loads(out)["all_pass"]


class TestExport:
    def test_json_round_trip_bit_exact(self, tmp_path, capsys):
        p = tmp_path / "r.json"
        cli.main(["--out", str(p), "analyze", "--family", "OR", "--n", "3"])
        capsys.readouterr()
        q = tmp_path / "r2.json"
        code = cli.main(["export", str(p), "--format", "json", "--out",
                         str(q)])
        assert code == 0
        assert p.read_bytes() == q.read_bytes()

    def test_csv_measure_report(self, tmp_path, capsys):
        p = tmp_path / "r.json"
        cli.main(["--out", str(p), "analyze", "--family", "AND", "--n", "3"])
        capsys.readouterr()
        code, out = run_cli(["export", str(p), "--format", "csv"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "key,value"
        assert "ndeg,3" in out

    def test_csv_theorem_suite_one_row_per_pair(self, tmp_path, capsys):
        p = tmp_path / "t.json"
        cli.main(["--out", str(p), "theorems", "--n", "1", "--exhaustive"])
        capsys.readouterr()
        code, out = run_cli(["export", str(p), "--format", "csv"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "function,inequality,pass"
        assert len(lines) == 1 + 4 * 6  # 4 functions x 6 inequalities

    def test_reanalyze_from_embedded_table(self, tmp_path, capsys):
        p = tmp_path / "r.json"
        cli.main(["--out", str(p), "analyze", "--family", "NOT_ONE",
                  "--n", "3"])
        capsys.readouterr()
        rep = json.loads(p.read_text())
        code, out = run_cli(["analyze", "--table", rep["function"]], capsys)
        assert code == 0
        rep2 = json.loads(out)
        assert rep2["measures"] == rep["measures"]

    def test_missing_file(self, capsys):
        assert cli.main(["export", "/nonexistent.json"]) == 2


class TestReportLoader:
    def test_strict_keys(self, tmp_path):
        rep = report.build_measure_report(make_named("OR", 2), 1,
                                          {"mode": "exact"})
        text = report.dump_report(rep)
        assert report.load_measure_report(text) == json.loads(text)
        bad = dict(json.loads(text))
        bad["extra"] = 1
        with pytest.raises(ValueError, match="unknown"):
            report.load_measure_report(json.dumps(bad))
        missing = dict(json.loads(text))
        del missing["seed"]
        with pytest.raises(ValueError, match="missing"):
            report.load_measure_report(json.dumps(missing))

    def test_witness_reverification(self):
        rep = report.build_measure_report(make_named("OR", 2), 1,
                                          {"mode": "exact"})
        rep["witness"] = "basis=MONOMIAL; terms=1*x{}"
        with pytest.raises(ValueError, match="witness"):
            report.load_measure_report(report.dump_report(rep))

    def test_depth_skipped_above_cap(self):
        rep = report.build_measure_report(make_named("OR", 6), 1,
                                          {"mode": "exact"})
        assert "skipped" in rep["measures"]["D"]
        assert rep["measures"]["ndeg"] == 1


def test_console_script_end_to_end():
    proc = subprocess.run(
        [sys.executable, "-m", "ndqc.cli", "analyze", "--family", "OR",
         "--n", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["measures"]["ndeg"] == 1
    assert "seed=" in proc.stderr
