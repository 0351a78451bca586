"""CLI contract tests: exit codes, JSON-only output mode, config
resolution, and bundle emission, all driven through cli.main in-process."""

import json
from pathlib import Path

import pytest

from k3gaps import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_reduce_identity(capsys):
    code, out, _ = run(capsys, "words", "reduce", "x y y x")
    assert code == 0
    assert "(identity)" in out


def test_reduce_unknown_letter_is_usage_error(capsys):
    code, _, err = run(capsys, "words", "reduce", "q")
    assert code == 2
    assert "q" in err


def test_json_mode_is_single_document(capsys):
    code, out, _ = run(capsys, "words", "reduce", "x y x", "--json")
    assert code == 0
    doc = json.loads(out)  # would fail if anything else were printed
    assert doc["reduced"] == "x y x"


def test_words_ramify(capsys):
    code, out, _ = run(capsys, "words", "ramify", "--trials", "200", "--json")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_words_level_prefix(capsys):
    code, out, _ = run(capsys, "words", "level", "--n", "2", "--count", "5", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["count"] == 5 and doc["truncated"] is True


def test_words_tree_count(capsys):
    code, out, _ = run(capsys, "words", "tree-count", "--depth", "2", "--json")
    assert code == 0
    assert json.loads(out)["path_lower_bound"] == 9


def test_lattice_classify_fixtures(capsys):
    code, out, _ = run(capsys, "lattice", "classify", "x y z", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "loxodromic"
    assert abs(doc["spectral_radius"] - 17.944271909999159) < 1e-9

    code, out, _ = run(capsys, "lattice", "classify", "x y", "--json")
    assert json.loads(out)["kind"] == "parabolic"

    code, out, _ = run(capsys, "lattice", "classify", "", "--json")
    assert json.loads(out)["kind"] == "elliptic"


def test_lattice_matrix(capsys):
    code, out, _ = run(capsys, "lattice", "matrix", "x", "--json")
    assert code == 0
    assert json.loads(out)["matrix"] == [[-1, 0, 0], [2, 1, 0], [2, 0, 1]]


def test_lattice_lambda_and_limit(capsys, tmp_path):
    code, out, _ = run(capsys, "lattice", "lambda", "--depth", "4", "--json")
    assert code == 0
    steps = json.loads(out)["steps"]
    assert [s["n"] for s in steps] == [1, 2, 3, 4]
    svg = tmp_path / "limit.svg"
    code, out, _ = run(
        capsys, "lattice", "limit", "--depth", "6", "--svg", str(svg), "--json"
    )
    assert code == 0
    assert svg.read_text().startswith("<svg")
    assert abs(json.loads(out)["self_pairing"]) < 1e-9


def test_missing_config_names_path(capsys):
    code, _, err = run(capsys, "verify", "gap", "--config", "/nope/missing.toml")
    assert code == 2
    assert "/nope/missing.toml" in err


def test_bad_override_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "gap", "--set", "germ_samples")
    assert code == 2
    assert "key=value" in err


def test_unknown_config_key_is_usage_error(capsys, tmp_path):
    cfgfile = tmp_path / "c.toml"
    cfgfile.write_text("no_such_key = 1\n")
    code, _, err = run(capsys, "verify", "gap", "--config", str(cfgfile))
    assert code == 2
    assert "no_such_key" in err


def test_verify_gap_smoke(capsys, tmp_path):
    out_dir = tmp_path / "bundle"
    code, out, _ = run(
        capsys,
        "verify",
        "gap",
        "--set", "max_level=1",
        "--set", "germ_samples=60",
        "--set", "seed_samples=50",
        "--set", "full_levels=1",
        "--set", "level_cap=4",
        "--set", "mass_samples=1000",
        "--out", str(out_dir),
    )
    assert code == 0
    # resolved-config echo precedes the verdict
    assert out.index("preset =") < out.index("PASS")
    assert (out_dir / "report.json").is_file()


def test_verify_gap_json_mode(capsys, tmp_path):
    code, out, _ = run(
        capsys,
        "verify",
        "gap",
        "--json",
        "--set", "max_level=1",
        "--set", "germ_samples=60",
        "--set", "seed_samples=50",
        "--set", "full_levels=1",
        "--set", "level_cap=4",
        "--set", "mass_samples=1000",
    )
    assert code == 0
    doc = json.loads(out)  # single document, no config echo mixed in
    assert doc["ok"] is True and doc["scenario"] == "gap-theorem"


def test_verify_failure_exit_code(capsys):
    code, _, err = run(
        capsys,
        "verify",
        "gap",
        "--set", "magnitude=10.0",
        "--set", "max_level=1",
        "--set", "germ_samples=40",
        "--set", "seed_samples=40",
        "--json",
    )
    assert code == 1
    assert "verification failure" in err


def test_shipped_config_files_resolve(capsys):
    root = Path(__file__).resolve().parents[1]
    for name, scenario in (("wehler.toml", "gap"), ("sphere.toml", "real-locus")):
        path = root / "configs" / name
        cfg = cli._load_scenario_config(
            type("A", (), {"config": str(path), "set": None, "out": None})(),
            {},
        )
        assert cfg.seed == 1
