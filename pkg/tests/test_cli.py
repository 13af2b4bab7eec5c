import json

import pytest

from cli.main import main
from core import branch_model
from core.entropy_core import LN2
from readers.curve_reader import read_curve


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


class TestGhzJunk:
    def test_objective_configuration(self, tmp_path):
        out, report = tmp_path / "curve.csv", tmp_path / "report.json"
        code = main(["ghz-junk", "--n", "1000", "--m", "50", "--mode", "averaged",
                     "--out", str(out), "--report", str(report)])
        assert code == 0
        data = read_json(report)
        assert data["consensus"] == 11
        assert data["redundancy"] == 50
        assert isinstance(data["redundancy"], int)
        assert data["redundancy_kind"] == "exact"
        assert data["plateau_present"] is True
        assert data["plateau_level_unit"] == "normalized"
        assert len(out.read_text(encoding="utf-8").splitlines()) == 1002

    def test_non_objective_configuration(self, tmp_path):
        report = tmp_path / "report.json"
        assert main(["ghz-junk", "--n", "100", "--m", "5", "--out", str(tmp_path / "c.csv"),
                     "--report", str(report)]) == 0
        data = read_json(report)
        assert (data["consensus"], data["redundancy"], data["f0"]) == (1, 5, 1.0)
        assert data["plateau_present"] is False

    def test_scenario_c(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert main(["ghz-junk", "--n", "100", "--m", "5", "--mode", "scenario-c",
                     "--out", str(out)]) == 0
        curve = read_curve(str(out), LN2)
        values = [round(p.mi_normalized, 12) for p in curve.points]
        assert values[1:100] == [1.0] * 99
        assert values[100] == 2.0

    def test_count_full(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert main(["ghz-junk", "--n", "10", "--m", "3", "--count-full", "--out", str(out)]) == 0
        curve = read_curve(str(out), LN2)
        assert curve.point(4).mi_normalized == pytest.approx(1 - 28 / 210, abs=1e-12)

    def test_no_normalize_quotes_nats(self, tmp_path):
        report = tmp_path / "report.json"
        assert main(["ghz-junk", "--n", "200", "--m", "20", "--no-normalize",
                     "--out", str(tmp_path / "c.csv"), "--report", str(report)]) == 0
        data = read_json(report)
        assert data["plateau_level_unit"] == "nats"
        assert data["plateau_level"] == pytest.approx(LN2, rel=0.01)

    def test_curve_to_stdout(self, capsys):
        assert main(["ghz-junk", "--n", "4", "--m", "2"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "l,f,mi_nats,mi_normalized,stderr,samples"
        assert len(lines) == 6

    def test_config_file_and_flag_precedence(self, tmp_path):
        out = tmp_path / "curve.csv"
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"n": 10, "m": 3, "mode": "scenario-a", "out": str(out)}),
                          encoding="utf-8")
        assert main(["ghz-junk", "--config", str(config), "--mode", "averaged"]) == 0
        curve = read_curve(str(out), LN2)
        assert curve.point(4).mi_normalized == pytest.approx(0.8, abs=1e-12)

    def test_unknown_config_key(self, tmp_path, capsys):
        config = tmp_path / "run.json"
        config.write_text('{"n": 10, "m": 3, "colour": "blue"}', encoding="utf-8")
        assert main(["ghz-junk", "--config", str(config)]) == 2
        assert "colour" in capsys.readouterr().err

    def test_m_larger_than_n(self, capsys):
        assert main(["ghz-junk", "--n", "3", "--m", "5"]) == 2
        assert "exceeds" in capsys.readouterr().err

    def test_missing_n(self):
        assert main(["ghz-junk", "--m", "1"]) == 2

    def test_bad_choice_is_a_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["ghz-junk", "--n", "4", "--m", "1", "--mode", "scenario-z"])
        assert exc.value.code == 2

    def test_pure_system_is_a_computation_error(self, tmp_path, capsys):
        code = main(["ghz-junk", "--n", "5", "--m", "0", "--out", str(tmp_path / "c.csv"),
                     "--report", str(tmp_path / "r.json")])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_bad_thread_setting(self, monkeypatch):
        monkeypatch.setenv("QDARWIN_THREADS", "lots")
        assert main(["ghz-junk", "--n", "4", "--m", "1"]) == 2


class TestIcnot:
    def run(self, tmp_path, name, *extra):
        out, report = tmp_path / f"{name}.csv", tmp_path / f"{name}.json"
        code = main(["icnot", "--n", "20", "--dist", "flat", "--samples", "3000",
                     "--out", str(out), "--report", str(report), *extra])
        return code, out, report

    @pytest.mark.parametrize("mode", ["averaged", "max", "subset"])
    def test_outputs_identical_across_thread_counts(self, tmp_path, monkeypatch, mode):
        outputs = []
        for threads in ("1", "2", "8"):
            monkeypatch.setenv("QDARWIN_THREADS", threads)
            code, out, report = self.run(tmp_path, f"t{threads}", "--seed", "17", "--mode", mode)
            assert code == 0
            outputs.append((out.read_bytes(), report.read_bytes()))
        assert outputs[0] == outputs[1] == outputs[2]

    def test_report_provenance(self, tmp_path):
        code, out, report = self.run(tmp_path, "r", "--seed", "3")
        assert code == 0
        data = read_json(report)
        assert data["model"] == "icnot"
        assert data["distribution"] == "flat"
        assert (data["seed"], data["n_draws"], data["mode"]) == (3, 3000, "averaged")
        assert data["redundancy_kind"] == "greedy_lower_bound"
        curve = read_curve(str(out), LN2)
        assert curve.point(10).stderr > 0

    def test_generated_seed_is_reported(self, tmp_path, capsys):
        code, _, report = self.run(tmp_path, "g")
        assert code == 0
        err = capsys.readouterr().err
        assert "generated seed:" in err
        seed = int(err.split("generated seed:")[1].split()[0])
        assert read_json(report)["seed"] == seed

    def test_perfect_records_from_file(self, tmp_path):
        p_file = tmp_path / "p.txt"
        p_file.write_text("1\n1\n1\n1\n1\n", encoding="utf-8")
        out = tmp_path / "curve.csv"
        assert main(["icnot", "--n", "5", "--dist", "fixed", "--p-file", str(p_file),
                     "--samples", "10", "--seed", "0", "--out", str(out)]) == 0
        curve = read_curve(str(out), LN2)
        assert [p.mi_nats for p in curve.points[1:]] == pytest.approx([LN2] * 5, abs=1e-15)

    def test_fixed_needs_a_file(self):
        assert main(["icnot", "--n", "5", "--dist", "fixed", "--seed", "0"]) == 2

    def test_max_mode(self, tmp_path):
        code, _, report = self.run(tmp_path, "m", "--seed", "1", "--mode", "max")
        assert code == 0
        assert read_json(report)["consensus"] >= 4

    def test_subset_mode(self, tmp_path):
        code, _, report = self.run(tmp_path, "s", "--seed", "1", "--mode", "subset")
        assert code == 0
        data = read_json(report)
        assert data["redundancy_stderr"] == 0.0
        assert data["redundancy"] == int(data["redundancy"])

    def test_saved_flip_probabilities_replay_the_run(self, tmp_path):
        p_file = tmp_path / "drawn" / "p.txt"
        code, out, _ = self.run(tmp_path, "first", "--seed", "9", "--mode", "subset",
                                "--p-out", str(p_file))
        assert code == 0
        assert len(p_file.read_text(encoding="utf-8").splitlines()) == 20
        code, again, _ = self.run(tmp_path, "again", "--seed", "9", "--mode", "subset",
                                  "--dist", "fixed", "--p-file", str(p_file))
        assert code == 0
        assert again.read_bytes() == out.read_bytes()

    def test_p_out_needs_subset_mode(self, tmp_path):
        code, _, _ = self.run(tmp_path, "x", "--seed", "9", "--p-out", str(tmp_path / "p.txt"))
        assert code == 2


class TestValidate:
    def test_smoke(self, capsys):
        assert main(["validate", "--n-max", "3", "--cases", "5"]) == 0
        out = capsys.readouterr().out
        assert "qmi_exact_vs_oracle" in out
        assert "FAIL" not in out

    def test_injected_fault_fails(self, monkeypatch, capsys):
        exact = branch_model.qmi_exact
        monkeypatch.setattr(branch_model, "qmi_exact", lambda ov, sel: exact(ov, sel) + 0.1)
        assert main(["validate", "--n-max", "3", "--cases", "5"]) == 1
        captured = capsys.readouterr()
        assert "FAIL" in captured.out
        first = json.loads(captured.err.splitlines()[0])
        assert first["check"] == "qmi_exact_vs_oracle"
        assert "overlaps" in first and "system_spectrum" in first

    def test_oracle_limit(self):
        assert main(["validate", "--n-max", "20"]) == 2


class TestReport:
    def test_report_from_saved_curve(self, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        assert main(["ghz-junk", "--n", "1000", "--m", "50", "--out", str(out)]) == 0
        capsys.readouterr()
        assert main(["report", "--curve", str(out), "--s-system", repr(LN2)]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["consensus"] == 11
        assert data["n"] == 1000
        assert data["plateau"]["present"] is True

    def test_report_in_nats(self, tmp_path):
        out, report = tmp_path / "curve.csv", tmp_path / "report.json"
        assert main(["ghz-junk", "--n", "200", "--m", "20", "--out", str(out)]) == 0
        assert main(["report", "--curve", str(out), "--s-system", repr(LN2), "--no-normalize",
                     "--report", str(report)]) == 0
        plateau = read_json(report)["plateau"]
        assert plateau["level_nats"] == pytest.approx(plateau["level_normalized"] * LN2)

    def test_curve_is_required(self):
        assert main(["report", "--s-system", "0.5"]) == 2
