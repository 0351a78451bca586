"""Surface model tests.

Polynomial evaluation is checked against a naive triple loop, gradients
against central finite differences, and the involution Jacobians against
both finite differences and the closed-form sign matrices at the origin
of the two preset surfaces.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3gaps import surface as S
from k3gaps.words import Word


def rng_points(n, seed=0, scale=0.8):
    rng = np.random.default_rng(seed)
    return scale * (rng.uniform(-1, 1, (n, 3)) + 1j * rng.uniform(-1, 1, (n, 3)))


def naive_evaluate(c, p):
    total = 0j
    x, y, z = p
    for i in range(3):
        for j in range(3):
            for k in range(3):
                total += c.c[i, j, k] * x**i * y**j * z**k
    return total


@pytest.fixture(scope="module")
def perturbed():
    return S.PerturbationSpec(S.wehler_example(), 0.05, "complex", 7).realize()


def test_evaluate_matches_naive_loop(perturbed):
    pts = rng_points(50, seed=1)
    vals = S.evaluate(perturbed, pts)
    for p, v in zip(pts, vals):
        assert abs(v - naive_evaluate(perturbed, p)) < 1e-12


def test_gradient_matches_finite_differences(perturbed):
    pts = rng_points(20, seed=2)
    grad = S.gradient(perturbed, pts)
    h = 1e-6
    for axis in range(3):
        e = np.zeros(3, dtype=complex)
        e[axis] = h
        fd = (S.evaluate(perturbed, pts + e) - S.evaluate(perturbed, pts - e)) / (2 * h)
        assert np.max(np.abs(grad[:, axis] - fd)) < 1e-6


def test_coefficient_validation():
    with pytest.raises(ValueError):
        S.SurfaceCoefficients(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        S.SurfaceCoefficients(np.zeros((3, 3, 3)))


def test_wehler_example_fixture():
    c = S.wehler_example()
    # (1+x^2)(1+y^2)(1+z^2) + xyz - 1 at a few points
    for p in [(0, 0, 0), (1, 1, 1), (0.5, -0.3, 2.0)]:
        x, y, z = p
        expect = (1 + x * x) * (1 + y * y) * (1 + z * z) + x * y * z - 1
        assert abs(S.evaluate(c, np.array(p, dtype=complex)) - expect) < 1e-12
    assert S.is_singular_at(c, (0, 0, 0))


def test_sphere_fixture():
    c = S.sphere()
    assert abs(S.evaluate(c, np.array([1, 0, 0], dtype=complex))) < 1e-15
    assert not S.is_singular_at(c, (1.0, 0.0, 0.0))
    # sigma_x on the sphere is exactly x -> -x
    p = S.SurfacePoint((0.6, 0.8, 0.0), 0.0)
    q = S.vieta_involution("x", c, p)
    assert np.allclose(q.as_array(), [-0.6, 0.8, 0.0], atol=1e-14)


# ---------------------------------------------------------------------------
# Vieta involutions


def surface_points(c, n, seed=0):
    return S.sample_points(c, S.BallRegion((0, 0, 0), 1.2), n, seed=seed)


def test_involution_is_involution(perturbed):
    for p in surface_points(perturbed, 10, seed=3):
        for axis in ("x", "y", "z"):
            try:
                q = S.vieta_involution(axis, perturbed, p)
            except S.PoleError:
                continue
            assert q.residual < 1e-8  # image stays on the surface
            back = S.vieta_involution(axis, perturbed, q.as_array())
            assert np.linalg.norm(back.as_array() - p.as_array()) < 1e-8


def test_involution_root_swap_identity(perturbed):
    """Vieta: the two roots of the fiber quadratic multiply to C/A, so
    t * (-B/A - t) = C/A on the surface."""
    for p in surface_points(perturbed, 10, seed=4):
        pts = p.as_array()[None, :]
        A, B, C = S.axis_quadratic(perturbed, "z", pts)
        t = p.coords[2]
        q = S.vieta_involution("z", perturbed, p)
        assert abs(t * q.coords[2] - C[0] / A[0]) < 1e-9


def test_jacobian_matches_finite_differences(perturbed):
    p = surface_points(perturbed, 1, seed=5)[0].as_array()
    for axis in ("x", "y", "z"):
        J = S.jacobian_of_involution(axis, perturbed, p)
        h = 1e-6
        for col in range(3):
            e = np.zeros(3, dtype=complex)
            e[col] = h
            hi, _ = S.vieta_batch(perturbed, axis, (p + e)[None, :])
            lo, _ = S.vieta_batch(perturbed, axis, (p - e)[None, :])
            fd = (hi[0] - lo[0]) / (2 * h)
            assert np.max(np.abs(J[:, col] - fd)) < 1e-5


def test_origin_derivatives_are_sign_matrices():
    """At the singular origin of the base surface each involution fixes
    the point with derivative the diagonal sign matrix."""
    c = S.wehler_example()
    for axis, idx in (("x", 0), ("y", 1), ("z", 2)):
        J = S.derivative_at_fixed_point(axis, c, (0, 0, 0))
        expect = np.eye(3, dtype=complex)
        expect[idx, idx] = -1
        assert np.max(np.abs(J - expect)) < 1e-10


def test_pole_error_raised():
    # surface x^2*z^2 + z + y: along z the leading coefficient A = x^2
    # vanishes on the plane x = 0
    c = np.zeros((3, 3, 3), dtype=complex)
    c[2, 0, 2] = 1.0
    c[0, 0, 1] = 1.0
    c[0, 1, 0] = 1.0
    coeffs = S.SurfaceCoefficients(c)
    with pytest.raises(S.PoleError):
        S.vieta_involution("z", coeffs, np.array([0, 0, 0], dtype=complex))


# ---------------------------------------------------------------------------
# words acting on points


def test_apply_word_is_right_to_left_composition(perturbed):
    pts = np.array([p.coords for p in surface_points(perturbed, 6, seed=6)])
    w = Word.parse("x y")
    out_word, ok_word = S.apply_word_batch(w, perturbed, pts)
    step1, ok1 = S.vieta_batch(perturbed, "y", pts)
    step2, ok2 = S.vieta_batch(perturbed, "x", step1)
    assert np.allclose(out_word[ok_word], step2[ok_word & ok1 & ok2])


def test_apply_word_identity(perturbed):
    pts = rng_points(5, seed=7)
    out, ok = S.apply_word_batch(Word(), perturbed, pts)
    assert ok.all() and np.array_equal(out, pts)


def test_apply_word_rejects_abstract_letters(perturbed):
    with pytest.raises(S.SurfaceDomainError):
        S.apply_word_batch(Word.parse("g1"), perturbed, rng_points(2))


def test_apply_word_single_point_drift(perturbed):
    p = surface_points(perturbed, 1, seed=8)[0]
    q, drift = S.apply_word(Word.parse("x y x y"), perturbed, p)
    assert drift.steps == 4
    assert q.residual < 1e-7
    assert drift.max_step_residual < 1e-7


def test_escape_radius_masks_batch():
    c = S.wehler_example()
    opts = S.WordOptions(escape_radius=1.5)
    pts = np.array([[1.4, 1.4, 1.4]], dtype=complex)
    out, ok = S.apply_word_batch(Word.parse("x"), c, pts, opts)
    assert not ok[0]
    assert np.array_equal(out, pts)  # failed points keep their input


# ---------------------------------------------------------------------------
# sampling and serialization


def test_sample_points_on_surface(perturbed):
    pts = S.sample_points(perturbed, S.BallRegion((0, 0, 0), 1.0), 25, seed=9)
    assert len(pts) == 25
    for p in pts:
        assert p.residual <= 1e-9
        assert np.linalg.norm(p.as_array()) <= 1.0 + 1e-12


def test_sample_points_real_mode():
    pts = S.sample_points(S.sphere(), S.BallRegion((0, 0, 0), 1.5), 25, mode="real", seed=10)
    for p in pts:
        arr = p.as_array()
        assert np.max(np.abs(arr.imag)) == 0.0
        assert abs(np.linalg.norm(arr.real) - 1.0) < 1e-9


def test_sample_points_empty_region():
    with pytest.raises(S.EmptySampleError):
        S.sample_points(
            S.sphere(), S.BallRegion((10, 10, 10), 0.1), 5, mode="real", attempt_budget=5
        )


def test_perturbation_deterministic_and_bounded():
    base = S.wehler_example()
    a = S.PerturbationSpec(base, 1e-3, "complex", 42).realize()
    b = S.PerturbationSpec(base, 1e-3, "complex", 42).realize()
    assert np.array_equal(a.c, b.c)
    assert np.max(np.abs(a.c - base.c)) <= 1e-3 * np.sqrt(2) + 1e-15
    zero = S.PerturbationSpec(base, 0.0, "real", 42).realize()
    assert np.array_equal(zero.c, base.c)


def test_real_perturbation_is_real():
    d = S.PerturbationSpec(S.sphere(), 1e-2, "real", 3).realize()
    assert np.max(np.abs(d.c.imag)) == 0.0


def test_toml_round_trip(perturbed):
    for c in (S.wehler_example(), S.sphere(), perturbed):
        text = S.coefficients_to_toml(c)
        back = S.coefficients_from_toml(text)
        assert np.array_equal(back.c, c.c)


def test_toml_preset_shorthand():
    c = S.coefficients_from_toml('preset = "sphere"')
    assert np.array_equal(c.c, S.sphere().c)


def test_packaged_fixture_files_load():
    from importlib import resources

    for name in ("wehler-example", "sphere"):
        text = (
            resources.files("k3gaps") / "fixtures" / f"{name}.toml"
        ).read_text()
        c = S.coefficients_from_toml(text)
        assert np.array_equal(c.c, S.PRESETS[name]().c)
