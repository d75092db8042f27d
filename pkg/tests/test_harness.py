"""Experiment harness and CLI: generators, deterministic batch sweeps, CSV
emission, figure rendering, and the command-line contract end to end."""

import json
import math
import subprocess
import sys

import pytest

from thinpath import (
    CSV_HEADER,
    ExperimentConfig,
    ExperimentRow,
    build_hypergraph,
    dist2,
    gen_line_benchmark,
    gen_random_disk,
    gen_random_graph,
    gen_random_line,
    nbi_operation_count,
    nbi_solve,
    rows_to_csv,
    run_experiment,
    trial_rng,
)
from thinpath.cli import main


class TestTrialRng:
    def test_reproducible(self):
        a = trial_rng(3, 10, 7).random(4)
        b = trial_rng(3, 10, 7).random(4)
        assert (a == b).all()

    def test_streams_differ_across_keys(self):
        base = trial_rng(3, 10, 7).random()
        assert trial_rng(3, 10, 8).random() != base
        assert trial_rng(3, 11, 7).random() != base
        assert trial_rng(4, 10, 7).random() != base


class TestGenerators:
    def test_disk_instance_shape(self):
        cfg = ExperimentConfig(n_values=(10,), seed=2)
        g = gen_random_disk(10, cfg, 0)
        assert g.model == "disk_hypergraph"
        assert g.n_points == 10
        assert all(r == 0.0 for r in g.rmin)
        side = 10 / cfg.rho
        assert all(0 <= c <= side for p in g.points for c in p)
        assert all(1.0 <= r <= 5.0 for r in g.rmax)

    def test_disk_endpoints_are_max_distance_pair(self):
        cfg = ExperimentConfig(n_values=(8,), seed=5)
        g = gen_random_disk(8, cfg, 3)
        d_st = dist2(g.points[g.source], g.points[g.target])
        best = max(
            dist2(g.points[i], g.points[j])
            for i in range(8)
            for j in range(i + 1, 8)
        )
        assert d_st == best

    def test_disk_instance_deterministic(self):
        cfg = ExperimentConfig(n_values=(9,), seed=7)
        assert gen_random_disk(9, cfg, 4) == gen_random_disk(9, cfg, 4)

    def test_line_disk_model(self):
        inst = gen_random_line(12, seed=1, trial=0)
        assert inst.model == "disk"
        assert list(inst.x) == sorted(inst.x)
        assert inst.source != inst.target

    def test_line_interval_model_ratio_homogeneous(self):
        inst = gen_random_line(12, seed=1, trial=0, model="interval")
        assert inst.model == "interval"
        ratios = {
            (0.0 if b == 0 else a / b) for a, b in inst.ab
        }
        assert len(ratios) == 1  # one asymmetry constant per instance

    def test_line_benchmark_always_solvable(self):
        for n in (10, 100, 1000):
            inst = gen_line_benchmark(n, seed=3)
            assert nbi_solve(inst).width is not None
            assert nbi_operation_count(inst) <= 4 * n

    def test_random_graph_valid(self):
        g = gen_random_graph(7, seed=11, trial=2)
        assert g.n == 7
        assert all(u != v for u, v in g.edges)


class TestExperimentConfig:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError, match="non-empty"):
            ExperimentConfig(n_values=())
        with pytest.raises(ValueError, match="rho"):
            ExperimentConfig(n_values=(8,), rho=0.0)
        with pytest.raises(ValueError, match="trials"):
            ExperimentConfig(n_values=(8,), trials=0)
        with pytest.raises(ValueError, match="dimension 2"):
            ExperimentConfig(n_values=(8,), dimension=3)
        with pytest.raises(ValueError, match="r_range"):
            ExperimentConfig(n_values=(8,), r_range=(3.0, 1.0))


class TestRunExperiment:
    CFG = ExperimentConfig(n_values=(8, 10), trials=25, seed=13)

    def test_row_accounting(self):
        rows = run_experiment(self.CFG)
        assert [r.n for r in rows] == [8, 10]
        for r in rows:
            assert r.completed + r.skipped_unreachable + r.skipped_budget == 25
            assert r.reference in ("exact", "min_heuristic", "mixed")
            if r.completed:
                assert r.mean_spba >= 1.0 and r.mean_tsba >= 1.0

    def test_deterministic(self):
        assert run_experiment(self.CFG) == run_experiment(self.CFG)

    def test_trial_callback_sees_every_trial(self):
        seen = []
        run_experiment(
            ExperimentConfig(n_values=(8,), trials=5, seed=1),
            on_trial=lambda n, t: seen.append((n, t)),
        )
        assert seen == [(8, t) for t in range(5)]

    def test_budget_fallback_labels_reference(self):
        cfg = ExperimentConfig(n_values=(8,), trials=10, seed=13, budget=2)
        rows = run_experiment(cfg)
        assert rows[0].reference in ("min_heuristic", "mixed")
        assert rows[0].skipped_budget == 0

    def test_budget_skip_without_fallback(self):
        cfg = ExperimentConfig(n_values=(8,), trials=10, seed=13, budget=2,
                               allow_fallback=False)
        rows = run_experiment(cfg)
        assert rows[0].skipped_budget > 0
        assert rows[0].reference == "exact"


class TestCsv:
    def test_header_and_formatting(self):
        rows = [ExperimentRow(n=8, mean_spba=1.25, mean_tsba=1.0,
                              completed=20, skipped_unreachable=5,
                              skipped_budget=0, reference="exact")]
        text = rows_to_csv(rows)
        lines = text.splitlines()
        assert lines[0] == CSV_HEADER
        assert lines[0] == ("n,mean_spba,mean_tsba,completed,"
                            "skipped_unreachable,skipped_budget,reference")
        assert lines[1] == "8,1.250000,1.000000,20,5,0,exact"
        assert text.endswith("\n")

    def test_empty_batch_prints_nan(self):
        rows = [ExperimentRow(n=8, mean_spba=float("nan"),
                              mean_tsba=float("nan"), completed=0,
                              skipped_unreachable=3, skipped_budget=0,
                              reference="exact")]
        assert "nan" in rows_to_csv(rows)


class TestPlotting:
    def test_figure_written(self, tmp_path):
        from thinpath.plotting import plot_experiment_rows

        rows = run_experiment(ExperimentConfig(n_values=(8,), trials=10, seed=3))
        out = plot_experiment_rows(rows, str(tmp_path / "sweep.png"))
        assert out == str(tmp_path / "sweep.png")
        data = (tmp_path / "sweep.png").read_bytes()
        assert data[:8] == b"\x89PNG\r\n\x1a\n"


class TestCliGen:
    def test_family_with_expected_side_file(self, tmp_path, capsys):
        out = tmp_path / "worst.json"
        assert main(["gen", "family", "--family", "tsba_worst", "--k", "3",
                     "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["n"] == 10
        side = json.loads((tmp_path / "worst.expected.json").read_text())
        assert side["opt_width"] == 6 and side["approx_width"] == 10

    def test_random_instance_records_endpoint_rule(self, tmp_path):
        out = tmp_path / "inst.json"
        assert main(["gen", "random", "--n", "8", "--seed", "3",
                     "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["meta"]["st_rule"] == "max_distance_pair"
        assert doc["model"] == "disk_hypergraph"

    def test_line_instance(self, tmp_path):
        out = tmp_path / "line.json"
        assert main(["gen", "line", "--n", "9", "--seed", "2",
                     "--model", "interval", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["reach"]["model"] == "interval"


class TestCliSolve:
    @pytest.fixture()
    def worst3(self, tmp_path):
        out = tmp_path / "w3.json"
        main(["gen", "family", "--family", "tsba_worst", "--k", "3",
              "--out", str(out)])
        return out

    def test_exact_width_six(self, worst3, capsys):
        assert main(["solve", str(worst3), "--alg", "exact"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["width"] == 6

    def test_tsba_tie_break_flag(self, worst3, capsys):
        assert main(["solve", str(worst3), "--alg", "tsba"]) == 0
        det = json.loads(capsys.readouterr().out)
        assert main(["solve", str(worst3), "--alg", "tsba",
                     "--tie-break", "reverse_edge_order"]) == 0
        rev = json.loads(capsys.readouterr().out)
        assert det["width"] == 10 and rev["width"] == 6

    def test_adversarial_mode_not_exposed(self, worst3, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve", str(worst3), "--alg", "tsba",
                  "--tie-break", "adversarial_oracle"])
        assert exc.value.code == 1
        assert "invalid choice" in capsys.readouterr().err

    def test_nbi_rejects_2d_instance(self, tmp_path, capsys):
        inst = tmp_path / "flat.json"
        main(["gen", "random", "--n", "8", "--seed", "3", "--out", str(inst)])
        rc = main(["solve", str(inst), "--alg", "nbi"])
        assert rc == 1
        assert "nbi requires 1-D instance" in capsys.readouterr().err

    def test_nbi_on_line_file(self, tmp_path, capsys):
        inst = tmp_path / "line.json"
        main(["gen", "line", "--n", "10", "--seed", "4", "--out", str(inst)])
        assert main(["solve", str(inst), "--alg", "nbi"]) == 0
        nbi_doc = json.loads(capsys.readouterr().out)
        assert main(["solve", str(inst), "--alg", "exact"]) == 0
        exact_doc = json.loads(capsys.readouterr().out)
        assert nbi_doc["width"] == exact_doc["width"]

    def test_budget_exhaustion_exit_2(self, tmp_path):
        inst = tmp_path / "w5.json"
        main(["gen", "family", "--family", "tsba_worst", "--k", "5",
              "--out", str(inst)])
        assert main(["solve", str(inst), "--alg", "exact",
                     "--budget", "3"]) == 2

    def test_malformed_json_names_field(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": 4, "edges": [{"src": "x", "dst": [1]}], '
                       '"source": 0, "target": 3}')
        assert main(["solve", str(bad), "--alg", "spba"]) == 1
        assert "edges[0].src" in capsys.readouterr().err

    def test_unrecognized_schema_diagnosed(self, tmp_path, capsys):
        odd = tmp_path / "odd.json"
        odd.write_text('{"foo": 1}')
        assert main(["solve", str(odd), "--alg", "spba"]) == 1
        assert "unrecognized instance schema" in capsys.readouterr().err

    def test_missing_file_exit_1(self):
        assert main(["solve", "/no/such/file.json", "--alg", "spba"]) == 1


class TestCliReduceMds:
    def test_end_to_end(self, tmp_path, capsys):
        graph = tmp_path / "p4.txt"
        graph.write_text("4\n0 1\n1 2\n2 3\n")
        out = tmp_path / "red.json"
        assert main(["reduce-mds", str(graph), "--out", str(out)]) == 0
        side = json.loads((tmp_path / "red.expected.json").read_text())
        assert side["mds"] == 2
        assert side["expected_width"] == 2 * 6 + 4 + 1
        assert main(["solve", str(out), "--alg", "exact"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["width"] == side["expected_width"]

    def test_malformed_graph_file(self, tmp_path, capsys):
        graph = tmp_path / "bad.txt"
        graph.write_text("4\n0 1 2\n")
        assert main(["reduce-mds", str(graph)]) == 1
        assert "expected a vertex count" in capsys.readouterr().err


class TestCliExperiment:
    def test_csv_and_figure(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        rc = main(["experiment", "--n", "8", "--trials", "6", "--seed", "2",
                   "--out", str(out)])
        assert rc == 0
        text = out.read_text()
        assert text.splitlines()[0] == CSV_HEADER
        assert (tmp_path / "sweep.png").exists()

    def test_no_plot_flag(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["experiment", "--n", "8", "--trials", "4", "--seed", "2",
                     "--no-plot", "--out", str(out)]) == 0
        assert not (tmp_path / "sweep.png").exists()

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["experiment", "--n", "8", "--n", "10", "--trials", "8",
                "--seed", "21", "--no-plot"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestCliVerify:
    def test_family_instance_report(self, tmp_path, capsys):
        inst = tmp_path / "w3.json"
        main(["gen", "family", "--family", "tsba_worst", "--k", "3",
              "--out", str(inst)])
        assert main(["verify", str(inst)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["complete"] is True
        assert doc["exact_width"] == 6
        assert doc["tsba_bound_ok"] is True and doc["ok"] is True

    def test_budget_starved_verify_exits_2(self, tmp_path, capsys):
        inst = tmp_path / "w6.json"
        main(["gen", "family", "--family", "tsba_worst", "--k", "6",
              "--out", str(inst)])
        assert main(["verify", str(inst), "--budget", "2"]) == 2
        doc = json.loads(capsys.readouterr().out)
        assert doc["complete"] is False and doc["ok"] is False


class TestConsoleScript:
    def test_installed_entry_point(self, tmp_path):
        out = tmp_path / "w2.json"
        proc = subprocess.run(
            [sys.executable, "-m", "thinpath.cli", "gen", "family",
             "--family", "tsba_worst", "--k", "2", "--out", str(out)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert json.loads(out.read_text())["n"] == 5

    def test_usage_error_exits_1(self):
        proc = subprocess.run(
            [sys.executable, "-m", "thinpath.cli", "solve", "x.json",
             "--alg", "bogus"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 1
        assert "invalid choice" in proc.stderr
