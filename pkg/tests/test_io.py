import numpy as np
import pytest

from nocean.config import config_items, parse_config, schema
from nocean.errors import (BadMagic, ParseError, TruncatedFile,
                           ValidationError, VersionMismatch)
from nocean.experiment import ErrorSeries, ExperimentConfig
from nocean.grid import build_grid
from nocean.runio import read_error_csv, write_error_csv
from nocean.snapio import read_snapshot, read_snapshot_full, write_snapshot
from nocean.state import zeros_state


class TestConfig:
    def test_empty_gives_defaults(self):
        cfg = parse_config("")
        default = ExperimentConfig()
        assert cfg.nx == default.nx
        assert cfg.physics == default.physics
        assert cfg.assim == default.assim

    def test_valid_mu_dt(self):
        cfg = parse_config("assim.mu = 1e-3\nassim.dt = 100\nassim.dt_obs = 21600")
        assert cfg.assim.mu == 1e-3
        assert cfg.assim.mu_eff * cfg.assim.dt == pytest.approx(0.1)

    def test_explicit_cap_error(self):
        text = "assim.mu = 10\nassim.dt = 100\nassim.dt_obs = 21600"
        with pytest.raises(ValidationError, match="mu\\*dt < 2"):
            parse_config(text)

    def test_unknown_key_line_number(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_config("# comment\ngrid.nx = 32\ngrid.bogus = 1\n")

    def test_bad_value(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_config("grid.nx = many")

    def test_bad_syntax(self):
        with pytest.raises(ParseError, match="key = value"):
            parse_config("grid.nx 32")

    def test_comments_and_whitespace(self):
        cfg = parse_config("\n  # full line comment\n grid.nx = 16  # inline\n")
        assert cfg.nx == 16

    def test_bool_parsing(self):
        cfg = parse_config("grid.periodic_x = true\nphysics.coriolis = false")
        assert cfg.periodic_x is True
        assert cfg.physics.coriolis is False
        with pytest.raises(ParseError):
            parse_config("grid.periodic_x = yes")

    def test_region_round_trip(self):
        cfg = parse_config("assim.region = 0:4:0:8")
        assert cfg.region == (0, 4, 0, 8)
        items = dict(config_items(cfg))
        assert items["assim.region"] == "0:4:0:8"

    def test_config_echo_covers_schema(self):
        cfg = ExperimentConfig()
        keys = {k for k, _ in config_items(cfg)}
        assert keys == set(schema())

    def test_echo_reparses_identically(self):
        cfg = parse_config("grid.nx = 32\nphysics.nu_h = 123.5\nassim.mu = 2e-4\n"
                           "assim.dt_obs = 10800")
        text = "\n".join(f"{k} = {v}" for k, v in config_items(cfg))
        cfg2 = parse_config(text)
        assert cfg2 == cfg


class TestSnapshots:
    def grid_state(self):
        g = build_grid(8, 6, 2, 1e4, 1.5e4, "coastline:3", "ridge:300:900")
        rng = np.random.default_rng(0)
        s = zeros_state(g, t=1234.5)
        for name in ("u", "v", "h", "theta", "sal"):
            getattr(s, name)[:] = rng.standard_normal((2, 6, 8))
        s.h[:] = np.abs(s.h) + 1.0
        return g, s

    def test_round_trip_bit_exact(self, tmp_path):
        g, s = self.grid_state()
        path = tmp_path / "snap.bin"
        write_snapshot(path, g, s)
        back, meta = read_snapshot_full(path)
        for name in ("u", "v", "h", "theta", "sal"):
            assert np.array_equal(getattr(back, name), getattr(s, name))
        assert back.t == s.t
        assert np.array_equal(meta["mask"], g.mask)
        assert meta["nx"] == 8 and meta["ny"] == 6 and meta["nz"] == 2

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"XXXX" + b"\x00" * 64)
        with pytest.raises(BadMagic):
            read_snapshot(path)

    def test_version_mismatch(self, tmp_path):
        g, s = self.grid_state()
        path = tmp_path / "snap.bin"
        write_snapshot(path, g, s)
        buf = bytearray(path.read_bytes())
        buf[4] = 99
        path.write_bytes(bytes(buf))
        with pytest.raises(VersionMismatch):
            read_snapshot(path)

    def test_truncated(self, tmp_path):
        g, s = self.grid_state()
        path = tmp_path / "snap.bin"
        write_snapshot(path, g, s)
        buf = path.read_bytes()
        path.write_bytes(buf[:len(buf) // 2])
        with pytest.raises(TruncatedFile):
            read_snapshot(path)


class TestErrorCsv:
    def test_empty_series(self, tmp_path):
        path = tmp_path / "e.csv"
        series = ErrorSeries(*(np.empty(0) for _ in range(5)))
        write_error_csv(path, series)
        assert path.read_text().strip() == \
            "t_seconds,rms_ke,rms_vel,rms_theta,rms_sal"

    def test_row_count(self, tmp_path):
        path = tmp_path / "e.csv"
        series = ErrorSeries(*(np.arange(3.0) for _ in range(5)))
        write_error_csv(path, series)
        assert len(path.read_text().splitlines()) == 4

    def test_lossless_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        vals = [np.sort(rng.random(7)), rng.random(7) * 1e-13,
                rng.standard_normal(7) ** 9, rng.random(7),
                rng.random(7) * 1e17]
        series = ErrorSeries(*vals)
        path = tmp_path / "e.csv"
        write_error_csv(path, series)
        back = read_error_csv(path)
        for name in ("times", "rms_ke", "rms_vel", "rms_theta", "rms_sal"):
            assert np.array_equal(getattr(back, name), getattr(series, name))
