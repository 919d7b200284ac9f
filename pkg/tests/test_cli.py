import csv
import io
import json
import subprocess
import sys

import pytest

from mult123.cli import choose_algorithm, main
from mult123.graph import complete_graph, cycle_graph, petersen_graph


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {"k2.g6": "A_\n", "k3.g6": "Bw\n", "k4.g6": "C~\n", "p3.edges": "0 1\n1 2\n"}.items():
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestLabel:
    def test_complete_n3(self, capsys):
        code, out, _ = run(capsys, "label", "--alg", "complete", "--n", "3")
        rep = json.loads(out)
        assert code == 0
        assert rep["verdicts"]["one-edge"] is True
        assert rep["labelling"]["edges"] == [[0, 1, 1], [0, 2, 2], [1, 2, 2]]

    def test_auto_k4(self, capsys, files):
        code, out, _ = run(capsys, "label", "--alg", "auto", "--in", files["k4.g6"])
        rep = json.loads(out)
        assert code == 0
        assert rep["algorithm"] == "four-chromatic"
        assert rep["verdicts"]["p-proper"] is True

    def test_bipartite_on_triangle(self, capsys, files):
        code, out, err = run(capsys, "label", "--alg", "bipartite", "--in", files["k3.g6"])
        assert code == 2
        assert "odd cycle" in err
        assert len(json.loads(out)["odd_cycle"]) == 3

    def test_roundtrip_through_verify(self, capsys, files, tmp_path):
        out_path = tmp_path / "rep.json"
        code, _, _ = run(capsys, "label", "--in", files["p3.edges"], "--out", str(out_path),
                         "--trace", str(tmp_path / "trace.json"))
        assert code == 0
        rep = json.loads(out_path.read_text())
        lab = tmp_path / "lab.json"
        lab.write_text(json.dumps(rep["labelling"]))
        code, out, _ = run(capsys, "verify", "--graph", files["p3.edges"], "--labelling", str(lab),
                           "--require", rep["requirement"])
        assert code == 0
        assert json.loads((tmp_path / "trace.json").read_text())["algorithm"]

    def test_total(self, capsys, files):
        code, out, _ = run(capsys, "label", "--alg", "total", "--in", files["k3.g6"])
        rep = json.loads(out)
        assert code == 0 and rep["verdicts"]["total-p-proper"]
        assert "vertices" in rep["labelling"]

    def test_missing_input(self, capsys):
        code, _, err = run(capsys, "label", "--alg", "generic")
        assert code == 2

    def test_unknown_flag(self, capsys):
        assert run(capsys, "label", "--bogus")[0] == 2

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.TextIOWrapper(io.BytesIO(b"Bw\n")))
        code, out, _ = run(capsys, "label", "--in", "-", "--alg", "generic")
        assert code == 0 and json.loads(out)["graph"]["n"] == 3


@pytest.mark.parametrize("g,alg", [
    (complete_graph(6), "complete"),
    (complete_graph(4), "four-chromatic"),
    (cycle_graph(6), "bipartite"),
    (cycle_graph(5), "subcubic"),
    (petersen_graph(), "subcubic"),
])
def test_choose_algorithm(g, alg):
    assert choose_algorithm(g) == alg


class TestVerify:
    def write(self, tmp_path, obj):
        p = tmp_path / "lab.json"
        p.write_text(json.dumps(obj))
        return str(p)

    def test_proper(self, capsys, files, tmp_path):
        lab = self.write(tmp_path, {"k": 3, "edges": [[0, 1, 1], [1, 2, 2], [0, 2, 3]]})
        assert run(capsys, "verify", "--graph", files["k3.g6"], "--labelling", lab, "--require", "p-proper")[0] == 0

    def test_all_one_forests(self, capsys, files, tmp_path):
        lab = self.write(tmp_path, {"k": 3, "edges": [[0, 1, 1], [1, 2, 1], [0, 2, 1]]})
        code, out, _ = run(capsys, "verify", "--graph", files["k3.g6"], "--labelling", lab, "--require", "forests")
        rep = json.loads(out)
        assert code == 1
        assert rep["classes"][0]["product"] == "1" and rep["classes"][0]["shape"] == "cyclic"

    def test_missing_edge(self, capsys, files, tmp_path):
        lab = self.write(tmp_path, {"k": 3, "edges": [[0, 1, 1], [1, 2, 1]]})
        assert run(capsys, "verify", "--graph", files["k3.g6"], "--labelling", lab, "--require", "forests")[0] == 2


class TestOracle:
    def test_chi_p_p3(self, capsys, files):
        code, out, _ = run(capsys, "oracle", "--param", "chi-p", "--in", files["p3.edges"])
        rep = json.loads(out)
        assert code == 0 and rep["value"] == 2
        assert rep["lower_bound"]["outcome"] == "exhausted"

    def test_chi_p_k2(self, capsys, files):
        code, out, _ = run(capsys, "oracle", "--param", "chi-p", "--in", files["k2.g6"])
        assert code == 0 and json.loads(out)["result"] == "undefined (not nice)"

    def test_forest2(self, capsys, files):
        code, out, _ = run(capsys, "oracle", "--param", "forest2", "--in", files["k3.g6"])
        rep = json.loads(out)
        assert code == 0 and rep["outcome"] == "witness" and rep["witness"]["k"] == 2

    def test_budget(self, capsys, tmp_path):
        p = tmp_path / "pet.g6"
        from mult123.graph import to_graph6
        p.write_bytes(to_graph6(petersen_graph()))
        assert run(capsys, "oracle", "--param", "chi-m", "--in", str(p), "--max-nodes", "2")[0] == 4

    def test_regular_precondition(self, capsys, files):
        assert run(capsys, "oracle", "--param", "regular-obs", "--in", files["p3.edges"])[0] == 2


class TestSweep:
    def rows(self, path):
        with open(path) as fh:
            return list(csv.DictReader(fh))

    def test_p123_builtin(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        code, _, err = run(capsys, "sweep", "--check", "p123", "--max-n", "5", "--csv", str(out))
        rows = self.rows(out)
        assert code == 0 and len(rows) == 1 + 1 + 2 + 6 + 21
        assert rows[1]["verdict"] == "skipped: not nice"
        assert all(int(r["value"]) <= 3 for r in rows if r["verdict"] == "pass")

    def test_weak_forest_n6(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        code, _, _ = run(capsys, "sweep", "--check", "weak-forest", "--max-n", "6", "--csv", str(out))
        assert code == 0 and all(r["verdict"] == "pass" for r in self.rows(out))

    def test_stream_with_bad_line(self, capsys, tmp_path, monkeypatch):
        src = tmp_path / "in.g6"
        src.write_text("A_\nBw\n#bad\nC~\n")
        out = tmp_path / "s.csv"
        code, _, _ = run(capsys, "sweep", "--check", "p123", "--in", str(src), "--csv", str(out))
        rows = self.rows(out)
        assert code == 0
        assert [r["verdict"] for r in rows][:2] == ["skipped: not nice", "pass"]
        assert rows[2]["verdict"].startswith("error")
        code, _, _ = run(capsys, "sweep", "--check", "p123", "--in", str(src), "--csv", str(out), "--strict")
        assert code != 0

    def test_jobs(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        code, _, _ = run(capsys, "sweep", "--check", "mult123-via-alg", "--max-n", "5", "--jobs", "2", "--csv", str(out))
        rows = self.rows(out)
        assert code == 0 and [int(r["id"]) for r in rows] == list(range(len(rows)))

    def test_anomaly_dir_written(self, capsys, tmp_path, monkeypatch):
        import mult123.cli as cli

        def broken(check, g, *a):
            return "fail", "", 0, {"note": "forced"}
        monkeypatch.setattr(cli, "_check_graph", broken)
        src = tmp_path / "in.g6"
        src.write_text("Bw\n")
        code, _, _ = run(capsys, "sweep", "--check", "total", "--in", str(src),
                         "--anomaly-dir", str(tmp_path / "anom"), "--csv", str(tmp_path / "s.csv"))
        assert code == 3
        (report,) = (tmp_path / "anom").iterdir()
        assert json.loads(report.read_text())["note"] == "forced"

    def test_max_n_limit(self, capsys):
        assert run(capsys, "sweep", "--check", "p123", "--max-n", "9")[0] == 2


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "mult123", "label", "--alg", "complete", "--n", "4"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["ok"] is True
