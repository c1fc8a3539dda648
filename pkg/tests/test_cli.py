import json

import pytest

from rmtcorr.cli import RunConfig, run
from rmtcorr.errors import ConfigError


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("synth")
    rc = run(["synth", "--out", str(root), "--seed", "2", "--n-stocks", "40", "--n-days", "600",
              "--sectors", "6:1.2,6:1.8"])
    assert rc == 0
    return root


def files(d):
    return sorted(p.name for p in d.iterdir())


def test_synth_outputs(dataset):
    assert {"prices.csv", "truth.csv", "manifest.json"} <= set(files(dataset))
    doc = json.loads((dataset / "manifest.json").read_text())
    assert doc["subcommand"] == "synth" and doc["seed"] == 2
    assert doc["results"]["n_stocks"] == 40


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["ingest"], {"prices_aligned.csv", "fill_report.csv"}),
        (["returns"], {"returns.csv", "return_stats.csv"}),
        (["correlate"], {"correlation.csv", "eigenvalue_density.csv", "mp_curve.csv"}),
        (["spectrum"], {"eigenvalues.csv", "ipr_profile.csv", "porter_thomas.csv", "sector_composition.csv"}),
        (["decompose", "--ns", "auto"], {"c_market.csv", "c_sector.csv", "c_random.csv", "element_distribution.csv"}),
        (["network", "--kind", "mst"], {"mst.net", "mst.dot", "mst.csv"}),
        (["network", "--kind", "threshold", "--ns", "2", "--cth", "sweep"], {"threshold.net", "threshold_sweep.csv"}),
        (["network", "--kind", "threshold", "--ns", "2", "--cth", "0.1", "--graph-format", "dot"], {"threshold.dot"}),
        (["temporal", "overlap", "--T", "200", "--tau", "100", "--k", "5"], {"overlap_signed.csv", "overlap_abs.csv"}),
        (["temporal", "rolling", "--T", "125", "--dt", "100", "--top", "10"],
         {"market_mode_contributions.csv", "consistency_rank.csv", "lambda0_series.csv"}),
    ],
)
def test_subcommands(dataset, tmp_path, argv, expected):
    rc = run([*argv, "--input", str(dataset / "prices.csv"), "--out", str(tmp_path)])
    assert rc == 0
    assert expected | {"manifest.json"} <= set(files(tmp_path))
    assert all((tmp_path / f).stat().st_size > 0 for f in files(tmp_path))


def test_spectrum_manifest_records_bounds(dataset, tmp_path):
    assert run(["spectrum", "--input", str(dataset / "prices.csv"), "--out", str(tmp_path)]) == 0
    res = json.loads((tmp_path / "manifest.json").read_text())["results"]
    assert res["Q"] == pytest.approx(600 / 40)
    assert res["n_above"] >= 3


def test_decompose_requires_ns(dataset, tmp_path, capsys):
    rc = run(["decompose", "--input", str(dataset / "prices.csv"), "--out", str(tmp_path)])
    assert rc == ConfigError("").exit_code
    assert "suggested n_s = 2" in capsys.readouterr().err


def test_exit_codes_are_distinct(dataset, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("date,symbol\n2000-01-03,A\n")
    flat = tmp_path / "flat.csv"
    flat.write_text("date,symbol,close\n2000-01-03,A,1\n2000-01-04,A,1\n2000-01-05,A,1\n"
                    "2000-01-03,B,1\n2000-01-04,B,2\n2000-01-05,B,3\n")
    out = str(tmp_path / "o")
    codes = {
        run(["returns", "--input", str(bad), "--out", out]),
        run(["returns", "--input", str(flat), "--out", out]),
        run(["returns", "--input", str(tmp_path / "nope.csv"), "--out", out]),
        run(["returns", "--input", str(flat), "--lag", "5", "--out", out]),
        run(["temporal", "rolling", "--input", str(dataset / "prices.csv"), "--T", "5000", "--out", out]),
    }
    assert len(codes) == 5 and 0 not in codes


def test_config_file_and_precedence(dataset, tmp_path):
    cfg = RunConfig(input=str(dataset / "prices.csv"), ns="auto", kind="threshold", cth="0.2",
                    graph_format="edge-csv", out=str(tmp_path / "from_config"))
    ini = tmp_path / "run.ini"
    ini.write_text(cfg.to_ini())
    assert RunConfig.from_file(ini) == cfg
    assert run(["network", "--config", str(ini), "--cth", "0.3"]) == 0
    doc = json.loads((tmp_path / "from_config" / "manifest.json").read_text())
    assert doc["parameters"]["cth"] == "0.3"
    assert doc["results"]["cth"] == 0.3


def test_unknown_config_key(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[run]\nbogus = 1\n")
    assert run(["synth", "--config", str(ini), "--out", str(tmp_path)]) == ConfigError("").exit_code


def test_output_dir_from_environment(dataset, tmp_path, monkeypatch):
    monkeypatch.setenv("RMTCORR_OUTPUT_DIR", str(tmp_path / "env"))
    assert run(["returns", "--input", str(dataset / "prices.csv")]) == 0
    assert (tmp_path / "env" / "returns.csv").is_file()


def test_pipeline_is_deterministic(dataset, tmp_path):
    base = ["pipeline", "--input", str(dataset / "prices.csv"), "--ns", "auto", "--seed", "4"]
    assert run([*base, "--out", str(tmp_path / "a")]) == 0
    assert run([*base, "--out", str(tmp_path / "b")]) == 0
    names = files(tmp_path / "a")
    assert names == files(tmp_path / "b")
    for n in names:
        assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes(), n
