import json
import os

import numpy as np
import pytest

import roughir as ri
from roughir.cli import main

from .conftest import CACHE_DIR, GAUSSIAN_BUILD, STABLE_BUILD


@pytest.fixture()
def table_dir(tmp_path, variance_table, stable_table):
    """A table directory pre-seeded with the session tables, so estimate
    commands never fall back to slow auto-builds."""
    d = tmp_path / "tables"
    d.mkdir()
    ri.save_variance_table(variance_table, str(d / "gaussian.tsv"))
    ri.save_stable_table(stable_table, str(d / "stable.tsv"))
    return str(d)


def run(*argv):
    return main(list(argv))


class TestSimulate:
    def test_fbm_file_deterministic(self, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        assert run("simulate", "--kind", "fbm", "--h", "0.7", "--n", "1024",
                   "--seed", "1", "--out", str(a)) == 0
        assert run("simulate", "--kind", "fbm", "--h", "0.7", "--n", "1024",
                   "--seed", "1", "--out", str(b)) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_invalid_h_nonzero_exit(self, tmp_path, capsys):
        code = run("simulate", "--kind", "fbm", "--h", "1.2", "--n", "64",
                   "--seed", "1", "--out", str(tmp_path / "x.tsv"))
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "sim.cfg"
        cfg.write_text("kind=levy-stable\nn=512\nseed=3\nalpha=1.5\n")
        out = tmp_path / "p.tsv"
        assert run("simulate", "--config", str(cfg), "--out", str(out)) == 0
        path, meta = ri.read_path(str(out))
        assert meta["kind"] == "levy_stable"
        assert path.n == 512

    def test_trend_preset(self, tmp_path):
        out = tmp_path / "t.tsv"
        assert run("simulate", "--kind", "brownian", "--n", "128", "--seed", "2",
                   "--trend", "smooth", "--out", str(out)) == 0
        path, _ = ri.read_path(str(out))
        assert path.values[0] == 0.0  # beta(0) = 0

    def test_every_kind_reachable(self, tmp_path):
        cases = [
            ("mbm", ["--h-start", "0.3", "--h-end", "0.7"]),
            ("multiscale-fbm", ["--band", "1:0.8", "--band", "1:0.4",
                                "--breaks", "32"]),
            ("diffusion", ["--diffusion", "mean-reverting", "--refine", "16"]),
            ("levy-compound", ["--a-weight", "1.0", "--rate", "4.0"]),
        ]
        for kind, extra in cases:
            out = tmp_path / f"{kind}.tsv"
            code = run("simulate", "--kind", kind, "--n", "128", "--seed", "3",
                       *extra, "--out", str(out))
            assert code == 0, kind
            path, meta = ri.read_path(str(out))
            assert path.n == 128
            assert meta["kind"] == kind.replace("-", "_")


class TestEstimate:
    def test_hurst_round_trip(self, tmp_path, table_dir):
        f = tmp_path / "p.tsv"
        run("simulate", "--kind", "fbm", "--h", "0.5", "--n", "4096",
            "--seed", "4", "--out", str(f))
        code = run("--table-dir", table_dir, "estimate", "--input", str(f),
                   "--method", "hurst")
        assert code == 0

    def test_hurst_output_values(self, tmp_path, table_dir, capsys):
        f = tmp_path / "p.tsv"
        run("simulate", "--kind", "fbm", "--h", "0.5", "--n", "4096",
            "--seed", "4", "--out", str(f))
        run("--table-dir", table_dir, "estimate", "--input", str(f))
        text = capsys.readouterr().out
        h_hat = float([l for l in text.splitlines() if l.startswith("h_hat=")][0]
                      .split("=")[1])
        assert abs(h_hat - 0.5) < 0.2

    def test_alpha_method(self, tmp_path, table_dir, capsys):
        f = tmp_path / "p.tsv"
        run("simulate", "--kind", "levy-stable", "--alpha", "1.2", "--n", "8192",
            "--seed", "5", "--out", str(f))
        assert run("--table-dir", table_dir, "estimate", "--input", str(f),
                   "--method", "alpha") == 0
        text = capsys.readouterr().out
        a_hat = float([l for l in text.splitlines() if l.startswith("alpha_hat=")][0]
                      .split("=")[1])
        assert abs(a_hat - 1.2) < 0.4

    def test_local_method(self, tmp_path, table_dir):
        f = tmp_path / "p.tsv"
        run("simulate", "--kind", "fbm", "--h", "0.6", "--n", "4096",
            "--seed", "6", "--out", str(f))
        assert run("--table-dir", table_dir, "estimate", "--input", str(f),
                   "--method", "local", "--t0", "0.5", "--window", "0.7") == 0

    def test_p_option_prints_raw_statistic(self, tmp_path, table_dir, capsys):
        f = tmp_path / "p.tsv"
        run("simulate", "--kind", "fbm", "--h", "0.5", "--n", "1024",
            "--seed", "8", "--out", str(f))
        assert run("--table-dir", table_dir, "estimate", "--input", str(f),
                   "--p", "1") == 0
        assert "r_p1=" in capsys.readouterr().out

    def test_constant_file_verdict_failure(self, tmp_path, table_dir, capsys):
        f = tmp_path / "c.tsv"
        ri.write_path(ri.SampledPath(np.full(64, 3.0)), str(f), kind="data")
        code = run("--table-dir", table_dir, "estimate", "--input", str(f))
        assert code == 1
        err = capsys.readouterr().err
        assert "0/0" in err

    def test_nan_file_parse_error(self, tmp_path, table_dir, capsys):
        f = tmp_path / "bad.tsv"
        f.write_text("0\t0.0\n0.5\tnan\n1\t1.0\n")
        code = run("--table-dir", table_dir, "estimate", "--input", str(f))
        assert code == 2
        assert "line 2" in capsys.readouterr().err

    def test_strict_requires_tables(self, tmp_path, capsys):
        f = tmp_path / "p.tsv"
        run("simulate", "--kind", "fbm", "--h", "0.5", "--n", "1024",
            "--seed", "7", "--out", str(f))
        code = run("--table-dir", str(tmp_path / "none"), "estimate",
                   "--input", str(f), "--strict")
        assert code == 2
        assert "strict" in capsys.readouterr().err


class TestTables:
    def test_rebuild_identical(self, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        for out in (a, b):
            assert run("tables", "--kind", "stable", "--reps", "20000",
                       "--seed", "9", "--out", str(out)) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_gaussian_columns_positive(self, tmp_path):
        out = tmp_path / "g.tsv"
        assert run("tables", "--kind", "gaussian", "--reps", "100",
                   "--path-len", "256", "--seed", "10", "--out", str(out)) == 0
        t = ri.load_variance_table(str(out))
        assert t.sigma2.min() > 0

    def test_stable_columns_bounded(self, tmp_path):
        out = tmp_path / "s.tsv"
        assert run("tables", "--kind", "stable", "--reps", "20000",
                   "--seed", "11", "--out", str(out)) == 0
        t = ri.load_stable_table(str(out))
        assert t.lam.min() >= 0.5
        assert t.lam.max() <= 1.0


class TestExperimentCommand:
    def test_smooth_limit_report(self, tmp_path, capsys):
        out = tmp_path / "rep.json"
        code = run("experiment", "--name", "smooth-limit", "--out", str(out))
        assert code == 0
        assert "PASS" in capsys.readouterr().out
        doc = json.loads(out.read_text())
        assert doc["passed"] is True

    def test_trend_small(self, capsys):
        code = run("experiment", "--name", "trend-robustness", "--n", "512",
                   "--reps", "10", "--seed", "3")
        assert code == 0

    def test_usage_error_exit_two(self):
        assert run("experiment", "--name", "not-an-experiment") == 2


class TestEnvTableDir:
    def test_env_variable_respected(self, tmp_path, monkeypatch, variance_table,
                                    stable_table, capsys):
        d = tmp_path / "envtables"
        d.mkdir()
        ri.save_variance_table(variance_table, str(d / "gaussian.tsv"))
        monkeypatch.setenv("ROUGHIR_TABLE_DIR", str(d))
        f = tmp_path / "p.tsv"
        run("simulate", "--kind", "fbm", "--h", "0.5", "--n", "2048",
            "--seed", "12", "--out", str(f))
        assert run("estimate", "--input", str(f)) == 0
        # no auto-build warning: the env-resolved table was found
        assert "building" not in capsys.readouterr().err
