"""Exact lattice-isometry tests.

The integer characteristic polynomial is the oracle for the spectral
fixtures; commutator-tree matrices are cross-checked against matrices
of fully expanded words; frozen exact normalizer values guard the
canonical path against regressions.
"""

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3gaps import lattice as L
from k3gaps import words as W
from k3gaps.words import Word

FIXTURES = json.loads(
    (Path(__file__).parent / "data" / "lambda_fixtures.json").read_text()
)


def char_poly_int(m):
    """Exact integer characteristic polynomial coefficients of a 3x3
    integer matrix: t^3 - tr t^2 + c2 t - det."""
    tr = m[0][0] + m[1][1] + m[2][2]
    c2 = (
        m[1][1] * m[2][2] - m[1][2] * m[2][1]
        + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[0][0] * m[1][1] - m[0][1] * m[1][0]
    )
    return (1, -tr, c2, -L.mat_det(m))


def involution_words(max_size=12):
    return st.lists(st.sampled_from(["x", "y", "z"]), max_size=max_size).map(
        lambda ls: Word.parse(" ".join(ls))
    )


def test_involutions_preserve_gram_and_square_to_identity():
    for axis in ("x", "y", "z"):
        m = L.involution_matrix(axis).m
        assert L.mat_mul(L.mat_T(m), L.mat_mul(L.GRAM, m)) == L.GRAM
        assert L.mat_mul(m, m) == L.IDENTITY
        assert L.mat_det(m) == -1


def test_involution_matrix_columns():
    # sigma_x sends L_x to -L_x + 2 L_y + 2 L_z and fixes L_y, L_z
    m = L.involution_matrix("x").m
    assert [m[r][0] for r in range(3)] == [-1, 2, 2]
    assert [m[r][1] for r in range(3)] == [0, 1, 0]
    assert [m[r][2] for r in range(3)] == [0, 0, 1]


@given(involution_words(), involution_words())
def test_word_matrix_is_homomorphism(u, v):
    mu, mv = L.word_matrix(u), L.word_matrix(v)
    assert L.word_matrix(u * v).m == L.mat_mul(mu.m, mv.m)


@given(involution_words())
def test_det_is_parity_of_length(w):
    assert L.mat_det(L.word_matrix(w).m) == (-1) ** len(w)


@given(involution_words())
def test_inverse_exact(w):
    m = L.word_matrix(w)
    assert L.mat_mul(m.m, m.inverse().m) == L.IDENTITY


def test_non_isometry_rejected():
    with pytest.raises(L.LatticeError):
        L.IsometryMatrix(((1, 1, 0), (0, 1, 0), (0, 0, 1)))


def test_pairing_symmetric_and_even():
    assert L.pairing((1, 0, 0), (0, 1, 0)) == 2
    assert L.pairing((1, 0, 0), (1, 0, 0)) == 0
    assert L.pairing((1, 1, 1), (1, 1, 1)) == 12


def test_gram_signature():
    vals = np.linalg.eigvalsh(np.array(L.GRAM, dtype=float))
    assert (vals > 0).sum() == 1 and (vals < 0).sum() == 2


# ---------------------------------------------------------------------------
# spectral fixtures


def test_xyz_characteristic_polynomial_and_radius():
    m = L.word_matrix(Word.parse("x y z"))
    # (t + 1)(t^2 - 18 t + 1) = t^3 - 17 t^2 - 17 t + 1
    assert char_poly_int(m.m) == (1, -17, -17, 1)
    cls = L.classify(m)
    assert cls.kind == "loxodromic"
    assert abs(cls.spectral_radius - (9 + 4 * math.sqrt(5))) < 1e-9


def test_xy_parabolic():
    assert L.classify(L.word_matrix(Word.parse("x y"))).kind == "parabolic"


def test_identity_and_involutions_elliptic():
    assert L.classify(L.word_matrix(Word())).kind == "elliptic"
    assert L.classify(L.word_matrix(Word.parse("x"))).kind == "elliptic"


def test_loxodromic_radius_squares_under_squaring():
    m = L.word_matrix(Word.parse("x y z"))
    r1 = L.classify(m).spectral_radius
    r2 = L.classify(m @ m).spectral_radius
    assert abs(r2 - r1 * r1) < 1e-6 * r1 * r1


def test_classify_survives_huge_entries():
    path = L.canonical_path(W.schreier_generators(), 6)
    m = L.word_matrix(path[-1])
    cls = L.classify(m)
    assert cls.kind == "loxodromic"
    assert cls.spectral_radius == math.inf or cls.spectral_radius > 1e100


# ---------------------------------------------------------------------------
# commutator trees


def test_tree_matrix_matches_expanded_word():
    seeds = [Word.parse(t) for t in ("x y", "y x", "y z", "z y")]
    for n in (1, 2):
        memo = {}
        for tree in W.derived_level(seeds, n):
            via_tree = L.word_matrix(tree, memo)
            via_word = L.word_matrix(tree.word)
            assert via_tree.m == via_word.m


def test_word_matrix_rejects_abstract_letters():
    with pytest.raises(L.LatticeError):
        L.word_matrix(Word.parse("g1"))


# ---------------------------------------------------------------------------
# robust Fraction helpers


def test_frac_to_float_matches_float_on_moderate_values():
    for f in (Fraction(3, 7), Fraction(-22, 7), Fraction(10**20, 3)):
        assert L.frac_to_float(f) == pytest.approx(float(f), rel=1e-15)
    assert L.frac_to_float(Fraction(0)) == 0.0


def test_frac_to_float_handles_huge_values():
    big = Fraction(10**500, 3)
    assert L.frac_to_float(big) == math.inf or L.frac_to_float(big) > 1e308
    tiny = Fraction(3, 10**500)
    assert L.frac_to_float(tiny) == 0.0 or L.frac_to_float(tiny) < 1e-308


def test_frac_log10():
    assert L.frac_log10(Fraction(1000)) == pytest.approx(3.0, abs=1e-12)
    assert L.frac_log10(Fraction(1, 1000)) == pytest.approx(-3.0, abs=1e-12)
    huge = Fraction(7**4000)
    assert L.frac_log10(huge) == pytest.approx(4000 * math.log10(7), rel=1e-12)
    with pytest.raises(ValueError):
        L.frac_log10(Fraction(0))


# ---------------------------------------------------------------------------
# canonical path, normalizers, boundary limit


@pytest.fixture(scope="module")
def path6():
    return L.canonical_path(W.schreier_generators(), 6)


def test_lambda_sequence_exact_regression(path6):
    seq = L.lambda_sequence(path6)
    expected = {int(e["n"]): Fraction(e["value"]) for e in FIXTURES["lambdas"]}
    for s in seq.steps:
        assert s.lam == expected[s.n]
        assert s.self_pairing_residual == 0.0
    assert not seq.stagnation


def test_lambda_strictly_increasing_and_divergent(path6):
    lams = L.lambda_sequence(path6).lambdas()
    assert all(b > a for a, b in zip(lams, lams[1:]))
    assert lams[-1] > lams[0] * 10


def test_normalized_classes_shrink_in_self_pairing(path6):
    seq = L.lambda_sequence(path6)
    # exactly <v, v> / <v, one>^2 * 12 = 1/lambda_n^2; in floats this
    # bottoms out at cancellation noise around 1e-15
    pairings = [L.pairing(s.normalized, s.normalized) for s in seq.steps]
    assert abs(pairings[0]) == pytest.approx(
        float(1 / L.lambda_sequence(path6).lambdas()[0] ** 2), rel=1e-6
    )
    assert all(abs(p) < 1e-6 for p in pairings[2:])


def test_boundary_limit_is_null_ray(path6):
    ray, conv = L.boundary_limit(path6)
    assert abs(ray.self_pairing()) < 1e-9
    # geometric decrease until the classes agree to float precision
    assert all(
        b <= 0.9 * a or b < 1e-14
        for a, b in zip(conv.differences, conv.differences[1:])
    )
    assert L.pairing(ray.v, (1, 1, 1)) == pytest.approx(math.sqrt(12.0), rel=1e-9)


def test_boundary_limit_rejects_short_paths():
    with pytest.raises(L.LatticeError):
        L.boundary_limit([Word.parse("x y")])  # parabolic: lambda stays small


def test_eigenray_of_loxodromic_matches_iteration():
    m = L.word_matrix(Word.parse("x y z"))
    ray = L.eigenray(m)
    assert abs(ray.self_pairing()) < 1e-9
    # pushing the reference class forward must converge to the same ray
    seq = L.lambda_sequence([Word.parse(" ".join(["x y z"] * k)) for k in (8, 9)])
    last = L.RayClass(seq.steps[-1].normalized, False)
    assert L.ray_distance(ray, last) < 1e-6


def test_ray_distance_scale_invariant():
    r1 = L.RayClass((1.0, 2.0, 3.0), False)
    r2 = L.RayClass((2.0, 4.0, 6.0), False)
    assert L.ray_distance(r1, r2) < 1e-12


def test_disk_coordinates_null_ray_on_circle(path6):
    ray, _ = L.boundary_limit(path6)
    x, y = L.disk_coordinates(ray.v)
    assert math.hypot(x, y) == pytest.approx(1.0, abs=1e-6)
    # the ample reference class sits strictly inside
    xa, ya = L.disk_coordinates((1.0, 1.0, 1.0))
    assert math.hypot(xa, ya) < 1.0


def test_canonical_path_structure(path6):
    gens = W.schreier_generators()
    assert path6[0] == W.commutator(gens[0], gens[1])
    for w in path6:
        assert W.klein_image(w) == (0, 0, 0)
