"""Scenario-runner tests at smoke scale.

The full-budget runs live in the acceptance suite; here the pipelines
are exercised end to end with reduced level depths and sample counts,
plus the failure modes (oversized perturbations, broken covers).
"""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from k3gaps import experiments as E
from k3gaps import lattice as L
from k3gaps import words as W
from k3gaps.germs import Chart
from k3gaps.surface import PRESETS, SurfaceCoefficients


def small_gap_config(**kw):
    base = dict(
        magnitude=1e-3,
        seed=1,
        max_level=2,
        path_depth=6,
        germ_samples=80,
        seed_samples=60,
        full_levels=1,
        level_cap=6,
        mass_samples=2000,
    )
    base.update(kw)
    return E.ScenarioConfig(**base)


def small_real_config(**kw):
    base = dict(
        preset="sphere",
        mode="real",
        magnitude=1e-3,
        seed=1,
        rho=0.4,
        cover_test_samples=1500,
        chart_samples=6,
        max_level=1,
        full_levels=0,
        level_cap=4,
        path_depth=6,
    )
    base.update(kw)
    return E.ScenarioConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        E.ScenarioConfig(preset="nope")
    with pytest.raises(ValueError):
        E.ScenarioConfig(germ_samples=0)
    with pytest.raises(ValueError):
        E.resolve_config({"not_a_key": 1})


def test_resolve_config_precedence():
    cfg = E.resolve_config({"seed": 9}, seed=2, magnitude=0.5)
    assert cfg.seed == 9  # overrides beat kwargs
    assert cfg.magnitude == 0.5


# ---------------------------------------------------------------------------
# flat area and mass ratios


def test_flat_area_of_plane():
    # the surface z = 0: the slice of B_0(r) is the flat (x, y) 4-ball
    # with unit density, so the measure is exactly pi^2 r^4 / 2
    c = np.zeros((3, 3, 3), dtype=complex)
    c[0, 0, 1] = 1.0
    plane = SurfaceCoefficients(c)
    r = 0.3
    est = E.flat_area(plane, r, samples=40000, seed=0)
    assert est == pytest.approx(math.pi**2 * r**4 / 2, rel=0.02)


def test_flat_area_deterministic():
    c = PRESETS["sphere"]()
    # centered on a point of the surface so the slice is nonempty
    a = E.flat_area(c, 0.4, samples=5000, seed=3, center=(0, 0, 1))
    b = E.flat_area(c, 0.4, samples=5000, seed=3, center=(0, 0, 1))
    assert a == b > 0


def test_mass_ratios_scaling():
    path = L.canonical_path(W.schreier_generators(), 4)
    seq = L.lambda_sequence(path)
    logs, ratios = E.mass_ratios(2.0, seq)
    assert logs is not None
    lam1 = float(seq.steps[0].lam)
    assert ratios[0] == pytest.approx(2.0 / lam1, rel=1e-9)
    # doubling A shifts every log ratio by exactly log10(2)
    logs2, _ = E.mass_ratios(4.0, seq)
    for a, b in zip(logs, logs2):
        assert b - a == pytest.approx(math.log10(2), abs=1e-12)
    # identity map: ratio equals A itself
    ident = L.lambda_sequence([L.IsometryMatrix(L.IDENTITY)])
    _, r_id = E.mass_ratios(2.0, ident)
    assert r_id == [2.0]


def test_mass_ratios_empty_slice():
    seq = L.lambda_sequence(L.canonical_path(W.schreier_generators(), 3))
    logs, ratios = E.mass_ratios(0.0, seq)
    assert logs is None
    assert ratios == [0.0, 0.0, 0.0]


# ---------------------------------------------------------------------------
# chart cover


@pytest.fixture(scope="module")
def cover():
    return E.build_chart_cover(0.4, test_samples=1500, seed=1)


def test_cover_spacing_and_verification(cover):
    assert cover.covering_radius <= 0.4 / 8
    pts = E.fibonacci_sphere(500) @ np.linalg.qr(
        np.random.default_rng(5).standard_normal((3, 3))
    )[0]
    E.verify_cover(cover, pts)  # must not raise


def test_cover_failure_names_witness(cover):
    broken = E.ChartCover(cover.rho, cover.charts[: len(cover.charts) // 4], 1.0, 0)
    with pytest.raises(E.CoverFailureError) as exc:
        E.verify_cover(broken, E.fibonacci_sphere(500))
    assert "distance" in str(exc.value)


def test_cover_rejects_bad_rho():
    with pytest.raises(ValueError):
        E.build_chart_cover(0.9)


def test_good_cover_condition_unperturbed_sphere(cover):
    """At the base sphere every kernel generator acts as the identity,
    so all chart deviations sit at rounding level."""
    rep = E.good_cover_condition(PRESETS["sphere"](), cover, samples=4, seed=0)
    assert rep.ok
    assert rep.worst_deviation < 1e-12


# ---------------------------------------------------------------------------
# gap scenario


def test_gap_scenario_smoke(tmp_path):
    cfg = small_gap_config(output_dir=str(tmp_path / "bundle"))
    rep = E.run_gap_theorem(cfg)
    assert rep.ok
    assert 0 < rep.epsilon < 1
    assert all(d <= 1 / 64 for d in rep.derivative_deviations)
    assert rep.decay.max_ratio <= 1.0
    lams = [s.log10_lambda for s in rep.lambda_steps]
    assert all(b > a for a, b in zip(lams, lams[1:]))
    for rel in (
        "report.json",
        "config.resolved.toml",
        "tables/decay.csv",
        "tables/lambda.csv",
        "plots/decay.svg",
        "plots/lambda.svg",
        "plots/limit.svg",
    ):
        assert (tmp_path / "bundle" / rel).is_file()
    doc = json.loads((tmp_path / "bundle" / "report.json").read_text())
    assert doc["schema_version"] == 1
    assert doc["ok"] is True
    assert doc["norm"] == "euclidean-C3"


def test_gap_scenario_unperturbed_has_tiny_derivatives():
    rep = E.run_gap_theorem(small_gap_config(magnitude=0.0, max_level=1))
    # finite differencing leaves ~1e-10 noise on the exact identity
    assert all(d < 1e-8 for d in rep.derivative_deviations)


def test_gap_scenario_rejects_huge_perturbation():
    with pytest.raises(E.StageError):
        E.run_gap_theorem(small_gap_config(magnitude=10.0))


def test_gap_scenario_fixed_epsilon_honored():
    rep = E.run_gap_theorem(small_gap_config(epsilon=0.01, max_level=1))
    assert rep.epsilon == 0.01


def test_gap_scenario_requires_wehler_preset():
    with pytest.raises(E.StageError):
        E.run_gap_theorem(small_gap_config(preset="sphere", mode="real"))


def test_gap_bundle_deterministic(tmp_path):
    digests = []
    for name in ("a", "b"):
        out = tmp_path / name
        E.run_gap_theorem(small_gap_config(output_dir=str(out)))
        digests.append(
            {
                p.relative_to(out).as_posix(): p.read_bytes()
                for p in sorted(out.rglob("*"))
                if p.is_file()
            }
        )
    assert digests[0] == digests[1]


# ---------------------------------------------------------------------------
# real-locus scenario


def test_real_locus_scenario_smoke(cover, tmp_path):
    cfg = small_real_config(output_dir=str(tmp_path / "bundle"))
    rep = E.run_real_locus_theorem(cfg, cover)
    assert rep.ok
    assert rep.condition.worst_deviation <= 1 / 64
    assert rep.real_point_residual <= 1e-9
    assert all(r.ratio <= 1.0 for r in rep.decay_rows)
    assert (tmp_path / "bundle" / "report.json").is_file()
    doc = json.loads((tmp_path / "bundle" / "report.json").read_text())
    assert doc["scenario"] == "real-locus"
    assert doc["chart_count"] == len(cover.charts)


def test_real_locus_requires_real_mode():
    with pytest.raises(E.StageError):
        E.run_real_locus_theorem(small_real_config(mode="complex"))


def test_bisect_magnitude_monotone(cover):
    cfg = small_real_config(bisect_iterations=6, chart_samples=4)
    mag = E.bisect_real_magnitude(cfg, cover, hi=0.05)
    assert 0 < mag <= 0.05
    # the found magnitude passes, double it and the margin must shrink
    from k3gaps.surface import PerturbationSpec

    bound = (1 / 64) * (1 - cfg.bisect_margin)
    c_ok = PerturbationSpec(PRESETS["sphere"](), mag, "real", cfg.seed).realize()
    assert E.good_cover_condition(c_ok, cover, 4, cfg.seed, bound).ok
