from __future__ import annotations

import json

import pytest

from nonstat.cli import build_parser, run_cli
from nonstat.utils import SEED_ENV


@pytest.fixture(autouse=True)
def isolated_environment(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    # set then delete so anything a .env file loads is undone afterwards
    monkeypatch.setenv(SEED_ENV, "0")
    monkeypatch.delenv(SEED_ENV)


def _mc_args(*extra: str) -> list[str]:
    return [
        "mc",
        "--n",
        "50",
        "--r",
        "2",
        "--dist",
        "x=uniform(0,1)",
        "--dist",
        "y=uniform(0,1)",
        "--expr",
        "x*y",
        "--format",
        "json",
        *extra,
    ]


def test_parse_table(capsys):
    assert run_cli(["parse", "x*y"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines() == ["x * y", "variables: x, y"]


def test_parse_json(capsys):
    assert run_cli(["parse", "--format", "json", "--", "-x^2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["expression"] == "-x^2"
    assert payload["variables"] == ["x"]
    assert payload["ast"]["op"] == "neg"


def test_parse_error_reports_offset(capsys):
    assert run_cli(["parse", "x*"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "offset 2" in err


def test_stats_json(d1_csv, capsys):
    assert run_cli(["stats", "--input", str(d1_csv), "--expr", "x*y", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    mean = payload["statistics"]["mean"]
    assert mean["classical"] == pytest.approx(10.666667, abs=1e-6)
    assert mean["chen"] == 10.0
    assert payload["statistics"]["mode"]["classical"] is None
    assert payload["product_decomposition"]["covariance_term"] == pytest.approx(2 / 3)


def test_stats_identity_variance(d1_csv, capsys):
    code = run_cli(
        ["stats", "--input", str(d1_csv), "--expr", "x", "--stat", "variance", "--format", "json"]
    )
    assert code == 0
    variance = json.loads(capsys.readouterr().out)["statistics"]["variance"]
    assert variance["classical"] == 1.0
    assert variance["chen"] == 1.0
    assert variance["abs_gap"] == 0.0


def test_stats_mode_filter(d1_csv, capsys):
    code = run_cli(
        ["stats", "--input", str(d1_csv), "--expr", "x*y", "--mode", "chen", "--stat", "mean", "--format", "json"]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["statistics"] == {"mean": {"chen": 10.0}}
    assert "product_decomposition" not in payload


def test_stats_table(d1_csv, capsys):
    assert run_cli(["stats", "--input", str(d1_csv), "--expr", "x*y", "--stat", "mean"]) == 0
    out = capsys.readouterr().out
    assert "x * y" in out
    assert "covariance term" in out


def test_stats_undefined_mode_exit_codes(d1_csv, capsys):
    assert run_cli(["stats", "--input", str(d1_csv), "--expr", "x", "--stat", "mode"]) == 4
    assert "undefined" in capsys.readouterr().err
    assert run_cli(["stats", "--input", str(d1_csv), "--expr", "x", "--stat", "mode", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["statistics"]["mode"]["chen"] is None
    assert payload["warnings"]


def test_stats_unknown_column(d1_csv, capsys):
    assert run_cli(["stats", "--input", str(d1_csv), "--expr", "x*z"]) == 2
    assert "'z'" in capsys.readouterr().err


def test_stats_data_errors(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("x\n1\nabc\n", encoding="utf-8")
    assert run_cli(["stats", "--input", str(bad), "--expr", "x"]) == 3
    assert "abc" in capsys.readouterr().err


def test_missing_input_file(capsys):
    assert run_cli(["stats", "--input", "nope.csv", "--expr", "x"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_stats_csv_output(d1_csv, capsys):
    assert run_cli(["stats", "--input", str(d1_csv), "--expr", "x*y", "--stat", "mean", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "key,value"
    assert "statistics.mean.chen,10.0" in lines


def test_describe(d1_csv, capsys):
    assert run_cli(["describe", "--input", str(d1_csv), "--columns", "y", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["n_rows"] == 3
    assert payload["columns"] == {
        "y": {"n": 3, "mean": 5.0, "variance": 1.0, "median": 5.0, "mode": None, "min": 4.0, "max": 6.0}
    }


def test_describe_without_header(tmp_path, capsys):
    path = tmp_path / "plain.csv"
    path.write_text("1;2\n3;4\n", encoding="utf-8")
    assert run_cli(["describe", "--input", str(path), "--no-header", "--delimiter", ";", "--format", "json"]) == 0
    assert sorted(json.loads(capsys.readouterr().out)["columns"]) == ["c1", "c2"]


def test_mc_output_is_byte_identical(capsys):
    assert run_cli(_mc_args("--seed", "42")) == 0
    first = capsys.readouterr().out
    assert run_cli(_mc_args("--seed", "42", "--max-workers", "1")) == 0
    assert capsys.readouterr().out == first
    payload = json.loads(first)
    assert payload["spec"]["seed"] == 42
    assert len(payload["replications"]) == 2


def test_mc_invalid_spec(capsys):
    assert run_cli(["mc", "--n", "50", "--r", "0", "--dist", "x=uniform(0,1)", "--expr", "x"]) == 2
    assert "r:" in capsys.readouterr().err


def test_mc_bad_dist_flag(capsys):
    assert run_cli(["mc", "--n", "50", "--dist", "uniform(0,1)", "--expr", "x"]) == 2


def test_mc_seed_precedence(monkeypatch, capsys):
    monkeypatch.setenv(SEED_ENV, "7")
    assert run_cli(_mc_args()) == 0
    assert json.loads(capsys.readouterr().out)["spec"]["seed"] == 7
    assert run_cli(_mc_args("--seed", "0x10")) == 0
    assert json.loads(capsys.readouterr().out)["spec"]["seed"] == 16


def test_mc_seed_from_dotenv(tmp_path, capsys):
    (tmp_path / ".env").write_text(f"{SEED_ENV}=11\n", encoding="utf-8")
    assert run_cli(_mc_args()) == 0
    assert json.loads(capsys.readouterr().out)["spec"]["seed"] == 11


def test_mc_spec_file_and_table(tmp_path, capsys):
    spec = tmp_path / "run.yaml"
    spec.write_text("seed: 5\nn: 20\nr: 2\nexpr: x*y\ndist:\n  x: uniform(0, 1)\n  y: copy(x)\n", encoding="utf-8")
    assert run_cli(["mc", "--spec", str(spec)]) == 0
    out = capsys.readouterr().out
    assert "seed: 5" in out
    assert "y ~ copy(x)" in out


def test_subcommand_is_required():
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args([])
    assert info.value.code == 2


def test_stats_input_format_errors(tmp_path, capsys):
    undecodable = tmp_path / "latin.csv"
    undecodable.write_bytes(b"x\n\xff\xfe\n")
    assert run_cli(["stats", "--input", str(undecodable), "--expr", "x"]) == 3
    assert "line 2" in capsys.readouterr().err
    huge = tmp_path / "huge.csv"
    huge.write_text("x\n" + "1" * 200_000 + "\n", encoding="utf-8")
    assert run_cli(["stats", "--input", str(huge), "--expr", "x"]) == 3
    assert "line 2" in capsys.readouterr().err


def test_stats_rejects_multi_character_delimiter(d1_csv, capsys):
    assert run_cli(["stats", "--input", str(d1_csv), "--expr", "x", "--delimiter", "::"]) == 2
    assert "delimiter" in capsys.readouterr().err


def test_stats_json_with_variance_beyond_double_range(tmp_path, capsys):
    extreme = tmp_path / "extreme.csv"
    extreme.write_text("x\n-1e308\n1e308\n", encoding="utf-8")
    assert run_cli(["stats", "--input", str(extreme), "--expr", "x", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["statistics"]["mean"]["classical"] == 0.0
    assert payload["statistics"]["median"]["chen"] == 0.0
    assert payload["statistics"]["variance"] == {
        "classical": None,
        "chen": None,
        "abs_gap": None,
        "rel_gap": None,
    }
    assert any("double range" in warning for warning in payload["warnings"])


def test_parse_json_infinite_literal(capsys):
    assert run_cli(["parse", "--format", "json", "1e999"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["expression"] == "1e999"
    assert payload["ast"] == {"node": "constant", "value": "1e999"}


def test_mc_rejects_invalid_variable_names(tmp_path, capsys):
    spec = tmp_path / "run.conf"
    spec.write_text("n = 10\nexpr = 2\ndist. = uniform(0, 1)\n", encoding="utf-8")
    assert run_cli(["mc", "--spec", str(spec), "--dist", "1x=uniform(0,1)"]) == 2
    err = capsys.readouterr().err
    assert "dist.1x: not a valid variable name" in err
    assert "dist.: not a valid variable name" in err
