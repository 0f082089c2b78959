import csv
import json
import os

import pytest

from sailswarm.cli import main
from sailswarm.results import COMPARISON_HEADER, METRICS_HEADER, SUMMARY_HEADER

SMALL = ["--environments", '["steady5", "gusty5"]', "--gammas", "[0.01, 10]", "--horizon", "12",
         "--window", "[4, 12]"]


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestRun:
    def test_metrics_csv(self, tmp_path):
        out = tmp_path / "m.csv"
        assert main(["run", "--seed", "1", "--out", str(out)]) == 0
        rows = read_rows(out)
        assert rows[0] == METRICS_HEADER
        assert len(rows) - 1 == 301

    def test_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (a, b):
            assert main(["run", "--seed", "3", "--horizon", "30", "--out", str(p)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_trajectory(self, tmp_path):
        m, t = tmp_path / "m.csv", tmp_path / "t.csv"
        assert main(["run", "--horizon", "5", "--out", str(m), "--trajectory", str(t)]) == 0
        rows = read_rows(t)
        assert rows[0] == ["t", "robot", "x", "y", "heading", "speed", "trim", "tack"]
        assert len(rows) - 1 == 6 * 10

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"horizon": 10, "n_robots": 4}))
        out = tmp_path / "m.csv"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        assert len(read_rows(out)) == 12

    def test_missing_config(self, tmp_path, capsys):
        out = tmp_path / "m.csv"
        assert main(["run", "--config", str(tmp_path / "nope.json"), "--out", str(out)]) == 2
        assert "nope.json" in capsys.readouterr().err
        assert os.listdir(tmp_path) == []

    def test_bad_config_is_line_anchored(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text('{\n  "horizon": 10,\n  "dt": "fast"\n}\n')
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "m.csv")]) == 2
        assert "c.json:3:" in capsys.readouterr().err
        assert not (tmp_path / "m.csv").exists()

    def test_bad_flag_value(self, tmp_path):
        assert main(["run", "--n_robots", "1", "--out", str(tmp_path / "m.csv")]) == 2


class TestSweep:
    def test_rows_and_manifest(self, tmp_path):
        out = tmp_path / "sw"
        assert main(["sweep", "--seeds", "2", "--out", str(out), *SMALL]) == 0
        rows = read_rows(out / "summaries.csv")
        assert rows[0] == SUMMARY_HEADER
        assert len(rows) - 1 == 2 * 3 * 2
        assert rows[1][:4] == ["steady5", "baseline", "", "0"]
        man = json.loads((out / "manifest.json").read_text())
        assert man["seeds"] == [0, 1] and man["rows"] == 12 and len(man["digest"]) == 64
        assert man["version"] and man["timestamp"] and len(man["outputs"]) == 2
        assert sorted(p.name for p in out.iterdir()) == ["config.json", "manifest.json", "summaries.csv"]

    def test_jobs_do_not_change_output(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["sweep", "--seeds", "2", "--jobs", "1", "--out", str(a), *SMALL]) == 0
        assert main(["sweep", "--seeds", "2", "--jobs", "4", "--out", str(b), *SMALL]) == 0
        assert (a / "summaries.csv").read_bytes() == (b / "summaries.csv").read_bytes()

    def test_digest_changes_with_config(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        main(["sweep", "--seeds", "1", "--out", str(a), *SMALL])
        main(["sweep", "--seeds", "1", "--out", str(b), *SMALL, "--k_p", "0.5"])
        da = json.loads((a / "manifest.json").read_text())["digest"]
        db = json.loads((b / "manifest.json").read_text())["digest"]
        assert da != db

    def test_bad_jobs(self, tmp_path):
        assert main(["sweep", "--jobs", "0", "--out", str(tmp_path / "x"), *SMALL]) == 2


class TestAnalyze:
    @pytest.fixture
    def summaries(self, tmp_path):
        out = tmp_path / "sw"
        assert main(["sweep", "--seeds", "3", "--out", str(out), *SMALL]) == 0
        return out / "summaries.csv"

    def test_round_trip(self, summaries, tmp_path, capsys):
        comp = tmp_path / "comp.csv"
        assert main(["analyze", str(summaries), "--out", str(comp), "--table3"]) == 0
        rows = read_rows(comp)
        assert rows[0] == COMPARISON_HEADER
        assert len(rows) - 1 == 2 * 2 * 3
        text = capsys.readouterr().out
        assert "steady5" in text and "gusty5" in text and "Holm" in text

    def test_svg(self, summaries, tmp_path):
        pytest.importorskip("matplotlib")
        svg = tmp_path / "f.svg"
        assert main(["analyze", str(summaries), "--out", str(tmp_path / "c.csv"), "--svg", str(svg)]) == 0
        assert svg.read_text().lstrip().startswith("<?xml") and "<svg" in svg.read_text()

    def test_identical_input_not_significant(self, tmp_path):
        p = tmp_path / "s.csv"
        lines = [",".join(SUMMARY_HEADER)]
        for kind, g in (("baseline", ""), ("speed_weighted", "0.01")):
            lines += [f"steady5,{kind},{g},{s},0.{50 + s},{100 + s}.5,{s}" for s in range(8)]
        p.write_text("\n".join(lines) + "\n")
        comp = tmp_path / "c.csv"
        assert main(["analyze", str(p), "--out", str(comp)]) == 0
        assert {r[-1] for r in read_rows(comp)[1:]} == {"false"}

    def test_unpaired_exits_3(self, summaries, tmp_path, capsys):
        rows = summaries.read_text().splitlines()
        broken = tmp_path / "broken.csv"
        broken.write_text("\n".join(r for r in rows if not r.startswith("gusty5,baseline,,2")) + "\n")
        out = tmp_path / "c.csv"
        assert main(["analyze", str(broken), "--out", str(out)]) == 3
        err = capsys.readouterr().err
        assert "env=gusty5" in err and "treated-only [2]" in err
        assert not out.exists()

    def test_bad_header_exits_3(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("a,b\n1,2\n")
        assert main(["analyze", str(p), "--out", str(tmp_path / "c.csv")]) == 3

    def test_missing_file_exits_3(self, tmp_path):
        assert main(["analyze", str(tmp_path / "none.csv"), "--out", str(tmp_path / "c.csv")]) == 3


def test_table3_stars():
    from sailswarm.harness import ComparisonRow, MetricComparison
    from sailswarm.results import table3

    def mc(p):
        return MetricComparison(-1.0, (-2.0, 0.0), p, p, -0.5, p < 0.05, 0)

    text = table3([ComparisonRow("steady5", 0.01, {"hull_area": mc(1e-6), "polarization": mc(5e-4),
                                                   "unsafe_events": mc(0.2)})])
    line = text.splitlines()[1]
    assert "-1.0***" in line and "-1.000**" in line and "-1.0 [" in line


def test_interrupted_write_leaves_nothing(tmp_path):
    from sailswarm.results import atomic_write

    target = tmp_path / "out.csv"
    with pytest.raises(RuntimeError):
        with atomic_write(target) as fh:
            fh.write("partial")
            raise RuntimeError("crash")
    assert os.listdir(tmp_path) == []
