import json
import os

import numpy as np
import pytest

from spinqrc.experiments import (
    DEFAULT_JS_GRID,
    ConfigError,
    ExperimentConfig,
    emit_figure_data,
    invariant_suite_ok,
    parse_config_file,
    read_sweep_results,
    run_cell,
    run_invariant_suite,
    run_sweep,
    seed_averaged_metric,
    sweep_cells,
)
from spinqrc.reservoir import RunConfig

TINY_RUN = RunConfig(t_final=750.0, washout_steps=30)


def tiny_config(**overrides):
    base = dict(experiment_name="sweep_js", js_values=(0.1, 1.0), f_values=(2.0,),
                n_coupling_seeds=2, base_seed=777, run=TINY_RUN, tau_max=10,
                output_dir="unused")
    base.update(overrides)
    return ExperimentConfig(**base)


TINY_CONFIG_TEXT = """\
# pinned tiny sweep used by the determinism and golden-file tests
experiment = sweep_js
js_values = 0.1, 1.0
f_values = 2
n_coupling_seeds = 2
base_seed = 777
t_final = 750
delta_t = 7.5
dt = 0.025
washout_steps = 30
tau_max = 10
output_dir = results/tiny
"""


class TestConfigParsing:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text(TINY_CONFIG_TEXT)
        cfg = parse_config_file(path)
        assert cfg.js_values == (0.1, 1.0)
        assert cfg.f_values == (2.0,)
        assert cfg.n_coupling_seeds == 2
        assert cfg.base_seed == 777
        assert cfg.run.t_final == 750.0
        assert cfg.run.washout_steps == 30
        assert cfg.tau_max == 10
        assert cfg.output_dir == "results/tiny"

    def test_default_grids(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("experiment = sweep_js\njs_values = default\nlambda_grid = default\n")
        cfg = parse_config_file(path)
        assert cfg.js_values == DEFAULT_JS_GRID
        assert len(cfg.lambda_grid) == 21

    def test_unknown_key_reports_line(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("experiment = sweep_js\nbogus_key = 3\n")
        with pytest.raises(ConfigError) as err:
            parse_config_file(path)
        assert err.value.line == 2
        assert "bogus_key" in str(err.value)

    def test_bad_value_reports_line(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("# comment\nn_coupling_seeds = many\n")
        with pytest.raises(ConfigError) as err:
            parse_config_file(path)
        assert err.value.line == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            parse_config_file(tmp_path / "absent.cfg")

    def test_semantic_validation(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("js_values = -1\n")
        with pytest.raises(ConfigError, match="nonnegative"):
            parse_config_file(path)


class TestFingerprint:
    def test_changes_with_semantic_fields(self):
        base = tiny_config()
        assert base.fingerprint() != tiny_config(base_seed=778).fingerprint()
        assert base.fingerprint() != tiny_config(js_values=(0.1, 2.0)).fingerprint()
        assert base.fingerprint() != tiny_config(
            run=RunConfig(t_final=750.0, washout_steps=31)).fingerprint()
        assert base.fingerprint() != tiny_config(
            dissipator_convention="sigma_minus").fingerprint()

    def test_ignores_output_location(self):
        assert tiny_config().fingerprint() == tiny_config(output_dir="elsewhere").fingerprint()

    def test_default_grid_spans_named_extremes(self):
        assert DEFAULT_JS_GRID[0] == pytest.approx(0.005)
        assert DEFAULT_JS_GRID[-1] == pytest.approx(75.0)
        assert len(DEFAULT_JS_GRID) == 20

    def test_run_length_invariant_enforced(self):
        # K = 100 cannot host washout 50 plus 2*(tau_max + 10) = 68 steps.
        with pytest.raises(ValueError, match="run too short"):
            tiny_config(tau_max=24, run=RunConfig(t_final=750.0, washout_steps=50))


class TestSweep:
    def test_degenerate_sweep_reproduces_single_cell(self):
        cfg = tiny_config(js_values=(0.3,), n_coupling_seeds=1)
        sweep = run_sweep(cfg)
        assert len(sweep.rows) == 1
        single = run_cell(cfg, 0.3, 2.0, 0)
        row = sweep.rows[0]
        assert row.status == single.status == "ok"
        assert np.array_equal(row.capacity.per_tau, single.capacity.per_tau)
        assert row.entanglement.means == single.entanglement.means

    def test_cells_enumerated_in_config_order(self):
        cfg = tiny_config()
        assert sweep_cells(cfg) == [(0.1, 2.0, 0), (0.1, 2.0, 1), (1.0, 2.0, 0), (1.0, 2.0, 1)]

    def test_outputs_deterministic_across_runs_and_threads(self, tmp_path):
        cfg = tiny_config()
        texts = {}
        for name, threads in (("a", 1), ("b", 1), ("c", 8)):
            out = tmp_path / name
            run_sweep(cfg, threads=threads, out_dir=out)
            texts[name] = (out / "sweep_results.csv").read_bytes()
        assert texts["a"] == texts["b"]
        assert texts["a"] == texts["c"]

    def test_failed_cells_are_isolated(self, tmp_path, monkeypatch):
        import spinqrc.experiments as exp

        original = exp.random_model

        def exploding(js, seed, **kw):
            if seed[-1] == 1:
                raise RuntimeError("synthetic cell failure")
            return original(js, seed, **kw)

        monkeypatch.setattr(exp, "random_model", exploding)
        cfg = tiny_config(js_values=(0.2,))
        sweep = run_sweep(cfg, out_dir=tmp_path)
        statuses = [r.status for r in sweep.rows]
        assert statuses == ["ok", "error"]
        assert "synthetic cell failure" in sweep.rows[1].error
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert [c["status"] for c in manifest["cells"]] == ["ok", "error"]

    def test_manifest_contents(self, tmp_path):
        cfg = tiny_config(js_values=(0.5,), n_coupling_seeds=1)
        sweep = run_sweep(cfg, out_dir=tmp_path)
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["fingerprint"] == sweep.fingerprint == cfg.fingerprint()
        assert manifest["code_version"]
        assert manifest["config"]["base_seed"] == 777
        assert (tmp_path / "cells.jsonl").read_text().count("\n") == 1

    def test_round_trip_through_files(self, tmp_path):
        cfg = tiny_config()
        sweep = run_sweep(cfg, out_dir=tmp_path)
        back = read_sweep_results(tmp_path)
        assert back.fingerprint == sweep.fingerprint
        assert back.config.semantic_dict() == cfg.semantic_dict()
        for a, b in zip(back.rows, sweep.rows):
            assert a.status == b.status
            assert np.allclose(a.capacity.per_tau, b.capacity.per_tau, atol=0)
            assert a.entanglement.means == b.entanglement.means

    def test_holdout_lambda_selection_mode(self):
        # The clean protocol selects lambda on the held-out sequences 4,5 and
        # scores the test run once with the winner.
        cfg_test = tiny_config(js_values=(0.3,), n_coupling_seeds=1)
        cfg_holdout = tiny_config(js_values=(0.3,), n_coupling_seeds=1,
                                  lambda_selection="holdout")
        a = run_cell(cfg_test, 0.3, 2.0, 0)
        b = run_cell(cfg_holdout, 0.3, 2.0, 0)
        assert a.status == b.status == "ok"
        assert np.all(b.capacity.per_tau >= 0.0) and np.all(b.capacity.per_tau <= 1.0)
        # Test-set selection takes the per-tau maximum over the grid, so it
        # can never lose to holdout selection on the same test run.
        assert np.all(a.capacity.per_tau >= b.capacity.per_tau - 1e-12)
        assert cfg_test.fingerprint() != cfg_holdout.fingerprint()

    def test_sigma_minus_convention_runs(self):
        cfg = tiny_config(js_values=(0.3,), n_coupling_seeds=1,
                          dissipator_convention="sigma_minus")
        row = run_cell(cfg, 0.3, 2.0, 0)
        assert row.status == "ok"
        baseline = run_cell(tiny_config(js_values=(0.3,), n_coupling_seeds=1), 0.3, 2.0, 0)
        assert not np.array_equal(row.capacity.per_tau, baseline.capacity.per_tau)

    def test_desk_scale_capacity_ordering(self):
        # Miniature of the coupling sweep: capacity peaks between the
        # extremes (three seeds keep it fast; the acceptance suite runs the
        # full-size version).
        cfg = ExperimentConfig(js_values=(0.005, 0.325, 6.0), f_values=(2.0,),
                               n_coupling_seeds=3, base_seed=2024,
                               run=RunConfig(t_final=1500.0), tau_max=24,
                               output_dir="unused")
        sweep = run_sweep(cfg, threads=2)
        caps = seed_averaged_metric(sweep, 2.0, lambda c: c.capacity.total)
        assert caps[0.325] > caps[0.005]
        assert caps[0.325] > caps[6.0]


@pytest.fixture(scope="module")
def sweep():
    return run_sweep(tiny_config(), threads=2)


class TestEmitFigureData:
    def test_fig2a_schema(self, sweep, tmp_path):
        paths = emit_figure_data(sweep, "fig2a", tmp_path)
        assert [os.path.basename(p) for p in paths] == ["fig2a_f2.csv"]
        lines = open(paths[0]).read().strip().splitlines()
        assert lines[0] == "J_s,capacity_mean,capacity_stderr"
        js_col = [float(l.split(",")[0]) for l in lines[1:]]
        assert js_col == sorted(js_col) == [0.1, 1.0]

    def test_fig2b_fig2c_schema(self, sweep, tmp_path):
        (p2b,) = emit_figure_data(sweep, "fig2b", tmp_path)
        (p2c,) = emit_figure_data(sweep, "fig2c", tmp_path)
        assert open(p2b).readline().strip() == (
            "J_s,E1_mean,E1_stderr,E2_mean,E2_stderr,E3_mean,E3_stderr,E4_mean,E4_stderr")
        assert open(p2c).readline().strip() == (
            "J_s,E12_mean,E12_stderr,E13_mean,E13_stderr,E14_mean,E14_stderr")

    def test_fig2d_consistent_with_fig2b_fig2c(self, sweep, tmp_path):
        # Cross-file oracle: the difference aggregates must equal what one
        # recomputes from the per-partition files.
        (p2b,) = emit_figure_data(sweep, "fig2b", tmp_path)
        (p2c,) = emit_figure_data(sweep, "fig2c", tmp_path)
        (p2d,) = emit_figure_data(sweep, "fig2d", tmp_path)

        def rows(path):
            lines = open(path).read().strip().splitlines()[1:]
            return {float(l.split(",")[0]): [float(x) for x in l.split(",")[1:]] for l in lines}

        b, c, d = rows(p2b), rows(p2c), rows(p2d)
        for js in b:
            diff_single = (b[js][0] + b[js][2]) - (b[js][4] + b[js][6])
            diff_pair = (c[js][2] + c[js][4]) - 2 * c[js][0]
            assert d[js][0] == pytest.approx(diff_single, abs=1e-12)
            assert d[js][2] == pytest.approx(diff_pair, abs=1e-12)

    def test_fig2e_schema(self, sweep, tmp_path):
        (p,) = emit_figure_data(sweep, "fig2e", tmp_path)
        header = open(p).readline().strip()
        assert header == "J_s,ratio_single,ratio_single_stderr,ratio_pair,ratio_pair_stderr"

    def test_fig3_blocks(self, sweep, tmp_path):
        (p,) = emit_figure_data(sweep, "fig3", tmp_path)
        text = open(p).read()
        assert text.startswith("tau,capacity_mean,capacity_stderr")
        assert "# J_s=0.1\n" in text
        assert "# J_s=1\n" in text

    def test_fig4_single_js_blocks(self, tmp_path):
        cfg = tiny_config(js_values=(1.5,), f_values=(1.0, 2.0))
        sweep = run_sweep(cfg, threads=2)
        (p,) = emit_figure_data(sweep, "fig4", tmp_path)
        lines = open(p).read().strip().splitlines()
        assert lines[0] == "tau,capacity"
        assert "# f=1" in lines and "# f=2" in lines
        data_lines = [l for l in lines[1:] if not l.startswith("#")]
        assert len(data_lines) == 2 * 11
        assert all(len(l.split(",")) == 2 for l in data_lines)

    def test_fig4_rejects_multiple_js(self, sweep, tmp_path):
        with pytest.raises(ValueError, match="single J_s"):
            emit_figure_data(sweep, "fig4", tmp_path)

    def test_unknown_figure_rejected(self, sweep, tmp_path):
        with pytest.raises(ValueError, match="unknown figure"):
            emit_figure_data(sweep, "fig9", tmp_path)


def test_invariant_suite_small():
    report = run_invariant_suite(n_runs=6, n_injections=20, base_seed=3)
    assert invariant_suite_ok(report)
    assert report["max_trace_error"] <= 1e-9
    assert report["min_eigenvalue"] >= -1e-7
