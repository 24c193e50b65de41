import numpy as np
import pytest

import roughir as ri
from roughir.errors import ParseError


class TestPathFiles:
    def test_round_trip_bit_exact(self, tmp_path):
        p = ri.sim_fbm(257, 0.37, seed=5)
        fn = tmp_path / "path.tsv"
        ri.write_path(p, str(fn), kind="fbm", seed=5, params={"H": 0.37})
        q, meta = ri.read_path(str(fn))
        assert np.array_equal(p.values, q.values)
        assert meta["kind"] == "fbm"
        assert meta["seed"] == "5"
        assert meta["params"] == "H=0.37"
        assert meta["n"] == "257"

    def test_rewrite_is_identical(self, tmp_path):
        p = ri.sim_levy_stable(100, 1.5, seed=9)
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        ri.write_path(p, str(a), kind="levy_stable", seed=9)
        ri.write_path(p, str(b), kind="levy_stable", seed=9)
        assert a.read_bytes() == b.read_bytes()

    def test_nan_row_reports_line(self, tmp_path):
        fn = tmp_path / "bad.tsv"
        fn.write_text("# n=2\n0\t0.0\n0.5\tnan\n1\t1.0\n")
        with pytest.raises(ParseError) as exc:
            ri.read_path(str(fn))
        assert exc.value.line == 3

    def test_malformed_row_reports_line(self, tmp_path):
        fn = tmp_path / "bad.tsv"
        fn.write_text("0\t0.0\nhello world\n")
        with pytest.raises(ParseError) as exc:
            ri.read_path(str(fn))
        assert exc.value.line == 2

    def test_header_count_mismatch(self, tmp_path):
        fn = tmp_path / "bad.tsv"
        fn.write_text("# n=5\n0\t0.0\n1\t1.0\n")
        with pytest.raises(ParseError, match="n=5"):
            ri.read_path(str(fn))


class TestTableFiles:
    def test_variance_round_trip(self, tmp_path):
        t = ri.build_variance_table(reps=100, path_len=256, seed=3,
                                    h_grid=[0.3, 0.5, 0.7, 0.8])
        fn = tmp_path / "g.tsv"
        ri.save_variance_table(t, str(fn))
        u = ri.load_variance_table(str(fn))
        assert np.array_equal(t.h_grid, u.h_grid)
        assert np.array_equal(t.sigma2, u.sigma2)
        assert np.array_equal(t.sigma2_stderr, u.sigma2_stderr)
        # p=1 column keeps its gap above H=3/4
        assert np.isnan(u.sigma1[-1])
        assert not np.isnan(u.sigma1[0])
        assert (u.reps, u.path_len, u.seed) == (100, 256, 3)

    def test_stable_round_trip(self, tmp_path):
        grid = np.round(np.arange(0.25, 2.01, 0.25), 10)
        t = ri.build_stable_table(reps=20_000, seed=4, alpha_grid=grid)
        fn = tmp_path / "s.tsv"
        ri.save_stable_table(t, str(fn))
        u = ri.load_stable_table(str(fn))
        assert np.array_equal(t.lam, u.lam)
        assert np.array_equal(t.sigma_sq, u.sigma_sq)
        assert np.array_equal(t.dlam, u.dlam)

    def test_rebuild_same_seed_identical_file(self, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        for fn in (a, b):
            t = ri.build_variance_table(reps=100, path_len=128, seed=77,
                                        h_grid=[0.4, 0.6])
            ri.save_variance_table(t, str(fn))
        assert a.read_bytes() == b.read_bytes()

    def test_schema_checked(self, tmp_path):
        fn = tmp_path / "x.tsv"
        fn.write_text("# schema=other\n# kind=gaussian\nH\tp\n0.5\t2\n")
        with pytest.raises(ParseError, match="schema"):
            ri.load_variance_table(str(fn))

    def test_kind_checked(self, tmp_path):
        grid = np.round(np.arange(0.5, 2.01, 0.5), 10)
        t = ri.build_stable_table(reps=20_000, seed=4, alpha_grid=grid)
        fn = tmp_path / "s.tsv"
        ri.save_stable_table(t, str(fn))
        with pytest.raises(ParseError, match="kind"):
            ri.load_variance_table(str(fn))
