"""Integer isometries of the rank-3 Neron-Severi lattice.

The basis is (L_x, L_y, L_z), the pullbacks of the coordinate lines;
intersection numbers are L_i^2 = 0 and L_i . L_j = 2, giving the Gram
matrix below, of signature (1, 2).  The three coordinate involutions
act by explicit integer matrices, verified here against the form.
All matrix arithmetic is exact (arbitrary-precision integers, then
Fractions for normalized quantities); floating point appears only in
spectral classification and in reported logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import words as W
from .words import CommutatorTree, Word

Mat = tuple[tuple[int, int, int], ...]

GRAM: Mat = ((0, 2, 2), (2, 0, 2), (2, 2, 0))
IDENTITY: Mat = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


class LatticeError(ValueError):
    pass


class StagnationWarning(UserWarning):
    """lambda_n failed to increase along the chosen path."""


class NonConvergenceError(RuntimeError):
    """Normalized classes did not converge to a boundary ray."""


def mat_mul(a: Mat, b: Mat) -> Mat:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )


def mat_T(a: Mat) -> Mat:
    return tuple(tuple(a[j][i] for j in range(3)) for i in range(3))


def mat_vec(a: Mat, v: Sequence[int]) -> tuple[int, int, int]:
    return tuple(sum(a[i][k] * v[k] for k in range(3)) for i in range(3))


def mat_det(a: Mat) -> int:
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def mat_inverse(a: Mat) -> Mat:
    """Exact inverse of a unimodular integer matrix (adjugate / det)."""
    d = mat_det(a)
    if d not in (1, -1):
        raise LatticeError("matrix is not unimodular")
    # adjugate via cyclic index shifts; the cyclic ordering absorbs the
    # cofactor signs
    adj = tuple(
        tuple(
            a[(j + 1) % 3][(i + 1) % 3] * a[(j + 2) % 3][(i + 2) % 3]
            - a[(j + 1) % 3][(i + 2) % 3] * a[(j + 2) % 3][(i + 1) % 3]
            for j in range(3)
        )
        for i in range(3)
    )
    return tuple(tuple(x * d for x in row) for row in adj)


def pairing(u: Sequence, v: Sequence):
    """Intersection pairing u^T G v; exact on int/Fraction input."""
    return sum(u[i] * GRAM[i][j] * v[j] for i in range(3) for j in range(3))


def is_gram_isometry(m: Mat) -> bool:
    return mat_mul(mat_T(m), mat_mul(GRAM, m)) == GRAM


def preserves_forward_cone(m: Mat) -> bool:
    return pairing(mat_vec(m, (1, 1, 1)), (1, 1, 1)) > 0


@dataclass(frozen=True)
class IsometryMatrix:
    m: Mat
    provenance: Word = Word()

    def __post_init__(self):
        if not is_gram_isometry(self.m):
            raise LatticeError("matrix does not preserve the Gram form")
        if mat_det(self.m) not in (1, -1):
            raise LatticeError("matrix is not unimodular")
        if not preserves_forward_cone(self.m):
            raise LatticeError("matrix does not preserve the forward cone")

    def __matmul__(self, other: "IsometryMatrix") -> "IsometryMatrix":
        return IsometryMatrix(
            mat_mul(self.m, other.m), self.provenance * other.provenance
        )

    def inverse(self) -> "IsometryMatrix":
        return IsometryMatrix(mat_inverse(self.m), self.provenance.inverse())

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.m], "word": str(self.provenance)}


def involution_matrix(axis: str) -> IsometryMatrix:
    """The action of sigma_axis: L_axis -> -L_axis + 2 (sum of the other
    two line classes); the complementary classes are fixed."""
    i = {"x": 0, "y": 1, "z": 2}[axis]
    cols = [[1 if r == c else 0 for r in range(3)] for c in range(3)]
    cols[i] = [2, 2, 2]
    cols[i][i] = -1
    m = tuple(tuple(cols[c][r] for c in range(3)) for r in range(3))
    return IsometryMatrix(m, Word.parse(axis))


_INVOLUTION_MATS = {a: involution_matrix(a) for a in ("x", "y", "z")}


def word_matrix(
    w: Union[Word, CommutatorTree],
    memo: Optional[dict] = None,
) -> IsometryMatrix:
    """Pushforward matrix of a word in the involution alphabet, or of a
    commutator tree over such words (children memoized by identity)."""
    if isinstance(w, CommutatorTree):
        if memo is None:
            memo = {}
        return _tree_matrix(w, memo)
    m = IDENTITY
    for l in w.letters:
        if l.gen not in _INVOLUTION_MATS:
            raise LatticeError(f"letter {l} has no lattice action")
        m = mat_mul(m, _INVOLUTION_MATS[l.gen].m)
    return IsometryMatrix(m, w)


def _tree_matrix(t: CommutatorTree, memo: dict) -> IsometryMatrix:
    key = id(t)
    if key in memo:
        return memo[key]
    if t.left is None:
        out = word_matrix(t.word)
    else:
        a = _tree_matrix(t.left, memo)
        b = _tree_matrix(t.right, memo)
        out = IsometryMatrix(
            mat_mul(mat_mul(a.m, b.m), mat_mul(mat_inverse(a.m), mat_inverse(b.m))),
            t.word,
        )
    memo[key] = out
    return out


# ---------------------------------------------------------------------------
# spectral classification


@dataclass
class Classification:
    kind: str  # elliptic / parabolic / loxodromic
    spectral_radius: float


def _finite_order(m: Mat, max_order: int = 12) -> bool:
    p = m
    for _ in range(max_order):
        if p == IDENTITY:
            return True
        p = mat_mul(p, m)
    return False


def classify(m: IsometryMatrix, tol: float = 1e-6) -> Classification:
    """Loxodromic / parabolic / elliptic trichotomy by spectral radius.

    Numerical eigenvalues of a parabolic (Jordan-block) matrix split off
    the unit circle by about sqrt(machine epsilon), so the loxodromic
    threshold is 1e-6; integer isometries with all eigenvalues on the
    unit circle are torsion of order at most 12, checked exactly, which
    separates elliptic from parabolic without floating point.
    """
    # entries can exceed float range for deep commutators; rescale by a
    # power of two before handing off to floating point
    bits = max(abs(x).bit_length() for row in m.m for x in row)
    shift = max(0, bits - 500)
    arr = np.array([[frac_to_float(Fraction(x, 1 << shift)) for x in row] for row in m.m])
    scaled = float(np.max(np.abs(np.linalg.eigvals(arr))))
    try:
        radius = scaled * math.pow(2.0, shift)
    except OverflowError:
        radius = math.inf
    if radius > 1 + tol:
        return Classification("loxodromic", radius)
    if _finite_order(m.m):
        return Classification("elliptic", radius)
    return Classification("parabolic", radius)


# ---------------------------------------------------------------------------
# classes, rays, and limits


@dataclass(frozen=True)
class NSClass:
    v: tuple[float, float, float]
    exact: Optional[tuple[Fraction, Fraction, Fraction]] = None

    def self_pairing(self) -> float:
        if self.exact is not None:
            return pairing(self.exact, self.exact)
        return pairing(self.v, self.v)


def omega0() -> NSClass:
    """The reference class (1,1,1)/sqrt(12), normalized to self-pairing 1."""
    s = 1 / math.sqrt(12.0)
    return NSClass((s, s, s))


def frac_to_float(f: Fraction) -> float:
    """float(Fraction) robust against huge numerators/denominators."""
    if f == 0:
        return 0.0
    n, d = f.numerator, f.denominator
    shift = n.bit_length() - d.bit_length()
    # bring the ratio near [1, 2) then rescale
    if shift > 0:
        return (n / (d << shift)) * 2.0**shift if shift < 1000 else math.inf
    if shift < 0:
        s = -shift
        return ((n << s) / d) * 2.0**-s if s < 1000 else 0.0
    return n / d


def _log10_int(n: int) -> float:
    k = max(0, n.bit_length() - 900)
    return math.log10(n >> k) + k * math.log10(2)


def frac_log10(f: Fraction) -> float:
    if f <= 0:
        raise ValueError("log of nonpositive value")
    return _log10_int(f.numerator) - _log10_int(f.denominator)


@dataclass
class LambdaStep:
    n: int
    lam: Fraction
    log10_lambda: float
    normalized: tuple[float, float, float]
    self_pairing_residual: float


@dataclass
class LambdaSequence:
    steps: list[LambdaStep]
    stagnation: bool

    def lambdas(self) -> list[Fraction]:
        return [s.lam for s in self.steps]


def canonical_path(
    generators: Sequence[Word], depth: int, cap: int = W.DEFAULT_LEVEL_CAP
) -> list[Word]:
    """s_1 = [g1, g2]; s_{n+1} = [s_n, t_n] with t_n the lexicographically
    first level-n element distinct from s_n and its inverse."""
    seeds = list(generators) + [g.inverse() for g in generators]
    s = W.commutator(seeds[0], seeds[1])
    path = [s]
    for n in range(1, depth):
        t = None
        for cand in W.level_prefix(seeds, n, 4, cap):
            if cand.word != path[-1] and cand.word != path[-1].inverse():
                t = cand.word
                break
        if t is None:
            raise LatticeError(f"no admissible continuation at level {n}")
        path.append(W.commutator(path[-1], t))
    return path


def lambda_sequence(
    path: Sequence[Union[Word, IsometryMatrix]],
) -> LambdaSequence:
    """Normalizing scalars lambda_n = <(s_n)_* [w0], [w0]> along a path,
    with the normalized classes and their exact self-pairing residuals.

    With w0 = (1,1,1)/sqrt(12), lambda_n = <M (1,1,1), (1,1,1)> / 12
    exactly; pushforward classes keep self-pairing 1 because M is an
    isometry, which is verified exactly.
    """
    one = (1, 1, 1)
    steps: list[LambdaStep] = []
    stagnation = False
    prev = Fraction(0)
    for n, item in enumerate(path, start=1):
        mat = item if isinstance(item, IsometryMatrix) else word_matrix(item)
        v = mat_vec(mat.m, one)
        lam = Fraction(pairing(v, one), 12)
        if lam <= 0:
            raise LatticeError("pushforward left the forward cone")
        # exact self-pairing of (s_n)_* [w0]: v G v / 12 must equal 1
        residual = Fraction(pairing(v, v), 12) - 1
        # normalized class lambda^-1 M w0 has components v_i * sqrt(12) / <v, (1,1,1)>
        normalized = tuple(
            frac_to_float(Fraction(x, pairing(v, one))) * math.sqrt(12.0) for x in v
        )
        steps.append(
            LambdaStep(n, lam, frac_log10(lam), normalized, abs(frac_to_float(residual)))
        )
        if lam <= prev:
            stagnation = True
        prev = lam
    return LambdaSequence(steps, stagnation)


@dataclass(frozen=True)
class RayClass:
    """A null boundary class, normalized to pair to 1 against omega0."""

    v: tuple[float, float, float]
    rational: bool

    def self_pairing(self) -> float:
        return pairing(self.v, self.v)


@dataclass
class ConvergenceReport:
    differences: list[float]
    final_self_pairing: float
    geometric: bool


def _rationality_flag(v: tuple[float, float, float], den_bound: int = 10**6) -> bool:
    """Heuristic: does a small-denominator rational vector span this ray?"""
    idx = max(range(3), key=lambda i: abs(v[i]))
    if v[idx] == 0:
        return False
    ratios = [x / v[idx] for x in v]
    approx = [Fraction(r).limit_denominator(den_bound) for r in ratios]
    err = max(abs(float(a) - r) for a, r in zip(approx, ratios))
    return err < 1e-12


def boundary_limit(
    path: Sequence[Union[Word, IsometryMatrix]],
    divergence_threshold: float = 1e3,
) -> tuple[RayClass, ConvergenceReport]:
    """Limit of the normalized pushforward classes along a path; must
    converge to a null ray with geometrically decreasing differences."""
    seq = lambda_sequence(path)
    if seq.stagnation:
        raise LatticeError("lambda sequence stagnates; re-select the path")
    if frac_to_float(seq.steps[-1].lam) < divergence_threshold:
        raise LatticeError(
            f"final lambda below divergence threshold {divergence_threshold!r}"
        )
    classes = [np.array(s.normalized) for s in seq.steps]
    diffs = [
        float(np.linalg.norm(b - a)) for a, b in zip(classes[:-1], classes[1:])
    ]
    geometric = all(
        diffs[i + 1] <= 0.9 * diffs[i] or diffs[i + 1] < 1e-14
        for i in range(len(diffs) - 1)
    )
    if len(diffs) >= 2 and not geometric:
        raise NonConvergenceError("successive differences do not decrease geometrically")
    limit = tuple(float(x) for x in classes[-1])
    report = ConvergenceReport(diffs, float(pairing(limit, limit)), geometric)
    return RayClass(limit, _rationality_flag(limit)), report


def eigenray(m: IsometryMatrix, expanding: bool = True) -> RayClass:
    """Diagnostic: the expanding (or contracting) eigenray of a
    loxodromic isometry, normalized like boundary limits."""
    arr = np.array([[float(x) for x in row] for row in m.m])
    vals, vecs = np.linalg.eig(arr)
    idx = int(np.argmax(np.abs(vals)) if expanding else np.argmin(np.abs(vals)))
    v = np.real(vecs[:, idx])
    w0 = np.array(omega0().v)
    p = pairing(v, w0)
    if p == 0:
        raise LatticeError("eigenvector is not a forward null vector")
    v = v / p
    out = tuple(float(x) for x in v)
    return RayClass(out, _rationality_flag(out))


def ray_distance(r1: RayClass, r2: RayClass) -> float:
    """Angle between spanning vectors; projective (scaling-invariant)."""
    a, b = np.array(r1.v, dtype=float), np.array(r2.v, dtype=float)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise LatticeError("zero vector spans no ray")
    c = abs(np.dot(a, b)) / (na * nb)
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


# ---------------------------------------------------------------------------
# null-cone disk coordinates (for plots)

_diag_cache: Optional[tuple[np.ndarray, np.ndarray]] = None


def disk_coordinates(v: Sequence[float]) -> tuple[float, float]:
    """Map a forward-cone class to the projectivized null-cone disk via a
    diagonalizing basis of the (1,2) form."""
    global _diag_cache
    if _diag_cache is None:
        g = np.array(GRAM, dtype=float)
        vals, vecs = np.linalg.eigh(g)
        order = np.argsort(-vals)  # positive eigenvalue first
        vals, vecs = vals[order], vecs[:, order]
        # v = basis @ coords gives form(v) = c0^2 - c1^2 - c2^2
        basis = vecs / np.sqrt(np.abs(vals))  # columns
        _diag_cache = (basis, vals)
    basis, vals = _diag_cache
    coords = np.linalg.solve(basis, np.asarray(v, dtype=float))
    t = coords[0]
    if t == 0:
        raise LatticeError("class lies outside the forward cone chart")
    if t < 0:
        coords = -coords
        t = -t
    return (float(coords[1] / t), float(coords[2] / t))
