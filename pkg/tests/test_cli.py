"""Command-line surface: configs in, deterministic files out."""

import json

import numpy as np
import pytest

from langmove import (
    GridGeometry,
    generate_random_field,
    RandomFieldSpec,
    RasterCovariate,
    RsfModel,
    SimConfig,
    read_ascii_grid,
    read_track_csv,
    simulate,
    thin_regular,
    write_ascii_grid,
    write_track_csv,
)
from langmove.cli import main


def write_json(path, payload):
    path.write_text(json.dumps(payload, indent=1))
    return str(path)


@pytest.fixture
def analytic_sim_config(tmp_path):
    return write_json(
        tmp_path / "sim.json",
        {
            "model": {
                "covariates": [{"type": "squared_distance", "center": [0, 0]}],
                "beta": [-0.5],
                "gamma2": 1.0,
            },
            "x0": [0.0, 0.0],
            "dt": 0.01,
            "n_steps": 10,
            "seeds": [3, 4],
        },
    )


class TestSimulateCommand:
    def test_row_count(self, tmp_path, analytic_sim_config):
        out = tmp_path / "out"
        assert main(["simulate", "--config", analytic_sim_config, "--out", str(out)]) == 0
        lines = (out / "track_3.csv").read_text().splitlines()
        assert len(lines) == 12  # header + 11 locations
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["clamp_counts"] == {"3": 0, "4": 0}
        assert manifest["seeds"] == [3, 4]

    def test_rerun_byte_identical(self, tmp_path, analytic_sim_config):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["simulate", "--config", analytic_sim_config, "--out", str(out1)])
        main(["simulate", "--config", analytic_sim_config, "--out", str(out2)])
        for name in ("track_3.csv", "track_4.csv", "manifest.json"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_seed_override(self, tmp_path, analytic_sim_config):
        out = tmp_path / "out"
        main(["simulate", "--config", analytic_sim_config, "--out", str(out), "--seed", "9"])
        assert (out / "track_9.csv").exists()
        assert not (out / "track_3.csv").exists()


class TestFitCommand:
    def test_recovers_sign_on_random_field_track(self, tmp_path):
        # end-to-end: simulate on a generated field, fit through the CLI
        field = generate_random_field(
            RandomFieldSpec(x_min=-25, y_min=-25, cell_size=1.0, n_x=51, n_y=51, rho=5.0, seed=21)
        )
        write_ascii_grid(field, tmp_path / "c1.asc")
        model = RsfModel([RasterCovariate(field)], [3.0], gamma2=1.0)
        sim = simulate(SimConfig(model, (0.0, 0.0), 0.01, 20_000, seed=5))
        assert sim.n_clamped == 0
        track = thin_regular(sim.track, 10)
        write_track_csv(track, tmp_path / "track.csv")
        covs = write_json(tmp_path / "covs.json", {"covariates": [{"type": "raster", "path": "c1.asc"}]})
        out = tmp_path / "fit"
        assert (
            main(["fit", "--tracks", str(tmp_path / "track.csv"), "--covariates", covs, "--out", str(out)])
            == 0
        )
        doc = json.loads((out / "fit.json").read_text())
        assert doc["alpha"] == 0.05
        assert doc["beta_hat"][0] > 0
        lo, hi = doc["ci_beta"][0]
        assert lo < hi
        g_lo, g_hi = doc["ci_gamma2"]
        assert g_lo < doc["gamma2_hat"] < g_hi

    def test_four_covariate_output_shape(self, tmp_path):
        # mirrors a four-covariate coastal fit: 4 estimates + 4 intervals
        rng = np.random.default_rng(22)
        geom = GridGeometry(-20, -20, 2.0, 21, 21)
        paths = []
        covs = []
        from langmove import GridRaster

        for j in range(4):
            raster = GridRaster(geom, rng.normal(size=(21, 21)))
            write_ascii_grid(raster, tmp_path / f"c{j}.asc")
            paths.append({"type": "raster", "path": f"c{j}.asc"})
            covs.append(RasterCovariate(raster))
        model = RsfModel(covs, [0.5, -0.5, 0.2, 0.0], gamma2=2.0)
        tracks = []
        for k in range(3):
            sim = simulate(SimConfig(model, (0.0, 0.0), 0.02, 500, seed=30 + k))
            name = tmp_path / f"t{k}.csv"
            write_track_csv(sim.track, name)
            tracks.append(str(name))
        covs_json = write_json(tmp_path / "covs.json", {"covariates": paths})
        out = tmp_path / "fit4"
        main(["fit", "--tracks", *tracks, "--covariates", covs_json, "--out", str(out)])
        doc = json.loads((out / "fit.json").read_text())
        assert len(doc["beta_hat"]) == 4
        assert len(doc["ci_beta"]) == 4
        assert all(len(ci) == 2 for ci in doc["ci_beta"])
        assert doc["J"] == 4


class TestUdCommand:
    def test_uniform_density_and_round_trip(self, tmp_path):
        cfg = write_json(
            tmp_path / "ud.json",
            {
                "model": {
                    "covariates": [{"type": "squared_distance", "center": [0, 0]}],
                    "beta": [0.0],
                },
                "grid": {"x_min": 0.5, "y_min": 0.5, "cell_size": 1.0, "n_x": 10, "n_y": 10},
            },
        )
        out = tmp_path / "ud"
        main(["ud", "--config", cfg, "--out", str(out)])
        ud = read_ascii_grid(out / "ud.asc")
        np.testing.assert_allclose(ud.values, 0.01, rtol=1e-12)
        assert ud.values.sum() * ud.cell_size**2 == pytest.approx(1.0, abs=1e-9)
        log_ud = read_ascii_grid(out / "ud_log.asc")
        np.testing.assert_allclose(log_ud.values, np.log(ud.values), rtol=1e-12)

    def test_no_log_flag(self, tmp_path):
        cfg = write_json(
            tmp_path / "ud.json",
            {
                "model": {
                    "covariates": [{"type": "squared_distance", "center": [0, 0]}],
                    "beta": [-0.1],
                },
                "grid": {"x_min": -3, "y_min": -3, "cell_size": 0.5, "n_x": 13, "n_y": 13},
            },
        )
        out = tmp_path / "ud"
        main(["ud", "--config", cfg, "--out", str(out), "--no-log"])
        assert (out / "ud.asc").exists()
        assert not (out / "ud_log.asc").exists()


class TestGenCovCommand:
    def test_deterministic_and_normalized(self, tmp_path):
        cfg = write_json(
            tmp_path / "field.json",
            {
                "fields": [
                    {"name": "c1", "x_min": 0, "y_min": 0, "cell_size": 1, "n_x": 31, "n_y": 31, "rho": 4, "seed": 1},
                    {"name": "c2", "x_min": 0, "y_min": 0, "cell_size": 1, "n_x": 31, "n_y": 31, "rho": 4, "seed": 2},
                ]
            },
        )
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["gen-cov", "--config", cfg, "--out", str(out1)])
        main(["gen-cov", "--config", cfg, "--out", str(out2)])
        for name in ("c1.asc", "c2.asc", "manifest.json"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
        c1 = read_ascii_grid(out1 / "c1.asc")
        assert c1.values.min() == 0.0 and c1.values.max() == 1.0
        c2 = read_ascii_grid(out1 / "c2.asc")
        assert not np.array_equal(c1.values, c2.values)


class TestStudyCommands:
    def test_scenario1_tiny(self, tmp_path):
        cfg = write_json(
            tmp_path / "s1.json",
            {"replications": 3, "n_points": 60, "thin_interval": 0.1, "seed": 1},
        )
        out = tmp_path / "s1"
        assert main(["scenario1", "--config", cfg, "--out", str(out)]) == 0
        lines = (out / "estimates.csv").read_text().splitlines()
        provenance = [ln for ln in lines if ln.startswith("#")]
        assert any("second_sine_axis=z1" in ln for ln in provenance)
        assert any("config_sha256=" in ln for ln in provenance)
        data = [ln for ln in lines if not ln.startswith("#")][1:]
        manifest = json.loads((out / "manifest.json").read_text())
        expected = 3 * 2 * 4 - 4 * len(manifest["failures"])
        assert len(data) == expected
        assert manifest["n_clamped"] == 0
        assert manifest["second_sine_axis"] == "z1"

    def test_scenario2_tiny_and_deterministic(self, tmp_path):
        cfg = write_json(
            tmp_path / "s2.json",
            {
                "n_tracks": 2,
                "n_points": 40,
                "levels": [0.05, 0.1],
                "grid_n_x": 41,
                "grid_n_y": 41,
                "grid_x_min": -20,
                "grid_y_min": -20,
                "rho": 4.0,
                "seed": 2,
            },
        )
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["scenario2", "--config", cfg, "--out", str(out1)]) == 0
        main(["scenario2", "--config", cfg, "--out", str(out2)])
        assert (out1 / "estimates_by_level.csv").read_bytes() == (
            out2 / "estimates_by_level.csv"
        ).read_bytes()
        lines = [
            ln
            for ln in (out1 / "estimates_by_level.csv").read_text().splitlines()
            if not ln.startswith("#")
        ]
        assert len(lines) == 1 + 2  # header + one row per level

    def test_irregular_tiny(self, tmp_path):
        cfg = write_json(
            tmp_path / "irr.json",
            {
                "n_tracks": 2,
                "n_points": 40,
                "levels": [0.05, 0.1],
                "mean_intervals": [0.05, 0.1],
                "grid_n_x": 41,
                "grid_n_y": 41,
                "grid_x_min": -20,
                "grid_y_min": -20,
                "rho": 4.0,
                "seed": 3,
            },
        )
        out = tmp_path / "irr"
        assert main(["irregular", "--config", cfg, "--out", str(out)]) == 0
        lines = [
            ln
            for ln in (out / "comparison.csv").read_text().splitlines()
            if not ln.startswith("#")
        ]
        assert len(lines) == 1 + 4  # header + intervals x schemes
        header = lines[0].split(",")
        for col in ("scheme", "mean_interval", "beta1_hat", "beta1_se", "gap_mean"):
            assert col in header


class TestTrackCsvIngestion:
    def test_cli_reads_external_style_csv(self, tmp_path):
        # hand-written file, decimal and scientific notation mixed
        path = tmp_path / "t.csv"
        path.write_text("t,x,y\n0.0,1e-1,2.5\n1.5,0.2,2.25\n3.0,0.35,2.0\n")
        track = read_track_csv(path)
        assert len(track) == 3
        np.testing.assert_allclose(track.xy[0], [0.1, 2.5])

    def test_time_scale_flag_matches_prescaled_fit(self, tmp_path):
        # epoch-second stamps fitted in hours == the same track with
        # hour timestamps fitted directly
        from langmove import Track

        model = RsfModel([RasterCovariate(generate_random_field(
            RandomFieldSpec(-25, -25, 1.0, 51, 51, rho=5.0, seed=44)))], [2.0])
        sim = simulate(SimConfig(model, (0.0, 0.0), 0.02, 2000, seed=6))
        hours = sim.track
        seconds = Track(hours.times * 3600.0, hours.xy)
        write_track_csv(seconds, tmp_path / "sec.csv")
        write_track_csv(hours, tmp_path / "hr.csv")
        field = model.covariates[0].raster
        write_ascii_grid(field, tmp_path / "c.asc")
        covs = write_json(tmp_path / "covs.json", {"covariates": [{"type": "raster", "path": "c.asc"}]})
        main(["fit", "--tracks", str(tmp_path / "sec.csv"), "--covariates", covs,
              "--time-scale", "3600", "--out", str(tmp_path / "a")])
        main(["fit", "--tracks", str(tmp_path / "hr.csv"), "--covariates", covs,
              "--out", str(tmp_path / "b")])
        a = json.loads((tmp_path / "a" / "fit.json").read_text())
        b = json.loads((tmp_path / "b" / "fit.json").read_text())
        np.testing.assert_allclose(a["beta_hat"], b["beta_hat"], rtol=1e-12)
        assert a["gamma2_hat"] == pytest.approx(b["gamma2_hat"], rel=1e-12)
