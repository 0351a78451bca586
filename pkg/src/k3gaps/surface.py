"""The (2,2,2) surface model.

A surface is the zero locus in the affine chart C^3 of a polynomial of
degree two in each of x, y, z, stored as the 27 coefficients c[i,j,k].
Each coordinate projection is 2:1, so the surface carries three Vieta
involutions t -> -B/A - t obtained by swapping the roots of the fiber
quadratic.  All maps here are rational self-maps of ambient C^3 that
restrict to automorphisms of the surface.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .words import INVOLUTION_GENS, Word

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

AXIS_INDEX = {"x": 0, "y": 1, "z": 2}

DEFAULT_MEMBERSHIP_TOL = 1e-9
DEFAULT_POLE_TOL = 1e-8
DEFAULT_ESCAPE_RADIUS = 1e3


class PoleError(ArithmeticError):
    """The fiber quadratic degenerates: the Vieta map is undefined here."""


class DivergenceError(ArithmeticError):
    """Orbit left the configured escape radius."""


class SurfaceDomainError(ValueError):
    """A point failed a surface-membership or fixed-point precondition."""


class EmptySampleError(RuntimeError):
    """No surface points found within the attempt budget."""


@dataclass(frozen=True)
class SurfaceCoefficients:
    """The 27 complex coefficients c[i][j][k] of a (2,2,2) surface."""

    c: np.ndarray
    label: str = ""

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex)
        if c.shape != (3, 3, 3):
            raise ValueError("coefficient tensor must have shape (3,3,3)")
        if not np.any(c):
            raise ValueError("coefficients must not all vanish")
        c.flags.writeable = False
        object.__setattr__(self, "c", c)


def wehler_example() -> SurfaceCoefficients:
    """(1+x^2)(1+y^2)(1+z^2) + xyz - 1 = 0; singular at the origin."""
    c = np.zeros((3, 3, 3), dtype=complex)
    for i in (0, 2):
        for j in (0, 2):
            for k in (0, 2):
                c[i, j, k] = 1.0
    c[0, 0, 0] = 0.0  # constant term 1 - 1
    c[1, 1, 1] = 1.0
    return SurfaceCoefficients(c, "wehler-example")


def sphere() -> SurfaceCoefficients:
    """x^2 + y^2 + z^2 - 1 = 0; real locus a 2-sphere."""
    c = np.zeros((3, 3, 3), dtype=complex)
    c[2, 0, 0] = c[0, 2, 0] = c[0, 0, 2] = 1.0
    c[0, 0, 0] = -1.0
    return SurfaceCoefficients(c, "sphere")


PRESETS = {"wehler-example": wehler_example, "sphere": sphere}


@dataclass(frozen=True)
class PerturbationSpec:
    """Seeded coefficient perturbation, bounded in max-norm by ``magnitude``."""

    base: SurfaceCoefficients
    magnitude: float
    mode: str = "complex"  # "real" or "complex"
    seed: int = 0

    def __post_init__(self):
        if self.magnitude < 0:
            raise ValueError("magnitude must be nonnegative")
        if self.mode not in ("real", "complex"):
            raise ValueError(f"unknown perturbation mode {self.mode!r}")

    def realize(self) -> SurfaceCoefficients:
        rng = np.random.default_rng(self.seed)
        d = rng.uniform(-1.0, 1.0, (3, 3, 3)).astype(complex)
        if self.mode == "complex":
            d = d + 1j * rng.uniform(-1.0, 1.0, (3, 3, 3))
        label = (
            f"{self.base.label}+pert(mag={self.magnitude!r},"
            f"mode={self.mode},seed={self.seed})"
        )
        return SurfaceCoefficients(self.base.c + self.magnitude * d, label)


@dataclass(frozen=True)
class SurfacePoint:
    coords: tuple[complex, complex, complex]
    residual: float

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)


def _as_points(p) -> tuple[np.ndarray, bool]:
    """Normalize input to an (m,3) complex array; report if it was single."""
    if isinstance(p, SurfacePoint):
        return p.as_array()[None, :], True
    a = np.asarray(p, dtype=complex)
    if a.ndim == 1:
        return a[None, :], True
    return a, False


def _monomials(t: np.ndarray) -> np.ndarray:
    return np.stack([np.ones_like(t), t, t * t])


def evaluate(c: SurfaceCoefficients, p) -> Union[complex, np.ndarray]:
    """F(p) = sum c_ijk x^i y^j z^k, vectorized over points."""
    pts, single = _as_points(p)
    xm, ym, zm = (_monomials(pts[:, i]) for i in range(3))
    vals = np.einsum("ijk,im,jm,km->m", c.c, xm, ym, zm)
    return complex(vals[0]) if single else vals


def gradient(c: SurfaceCoefficients, p) -> np.ndarray:
    """Exact partial derivatives of F at p; shape (3,) or (m,3)."""
    pts, single = _as_points(p)
    xm, ym, zm = (_monomials(pts[:, i]) for i in range(3))
    out = np.empty_like(pts)
    dx = np.stack([np.zeros_like(pts[:, 0]), np.ones_like(pts[:, 0]), 2 * pts[:, 0]])
    dy = np.stack([np.zeros_like(pts[:, 1]), np.ones_like(pts[:, 1]), 2 * pts[:, 1]])
    dz = np.stack([np.zeros_like(pts[:, 2]), np.ones_like(pts[:, 2]), 2 * pts[:, 2]])
    out[:, 0] = np.einsum("ijk,im,jm,km->m", c.c, dx, ym, zm)
    out[:, 1] = np.einsum("ijk,im,jm,km->m", c.c, xm, dy, zm)
    out[:, 2] = np.einsum("ijk,im,jm,km->m", c.c, xm, ym, dz)
    return out[0] if single else out


def is_singular_at(c: SurfaceCoefficients, p, tol: float = DEFAULT_MEMBERSHIP_TOL) -> bool:
    pts, _ = _as_points(p)
    if abs(evaluate(c, pts[0])) > tol:
        raise SurfaceDomainError("point is not on the surface within tolerance")
    return bool(np.linalg.norm(gradient(c, pts[0])) <= tol)


def axis_quadratic(c: SurfaceCoefficients, axis: str, pts: np.ndarray):
    """Coefficients (A, B, C) of F as A t^2 + B t + C in the axis variable,
    with the other two coordinates frozen at the given points."""
    i = AXIS_INDEX[axis]
    oth = [j for j in range(3) if j != i]
    cm = np.moveaxis(c.c, i, 0)
    um = _monomials(pts[:, oth[0]])
    vm = _monomials(pts[:, oth[1]])
    abc = np.einsum("djk,jm,km->dm", cm, um, vm)
    return abc[2], abc[1], abc[0]


def vieta_batch(
    c: SurfaceCoefficients,
    axis: str,
    pts: np.ndarray,
    pole_tol: float = DEFAULT_POLE_TOL,
    escape_radius: float = DEFAULT_ESCAPE_RADIUS,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Vieta flip t -> -B/A - t along one axis.

    Returns (new points, ok mask); failed entries (pole or escape) keep
    their input coordinates and are masked out.
    """
    i = AXIS_INDEX[axis]
    A, B, _ = axis_quadratic(c, axis, pts)
    ok = np.abs(A) >= pole_tol
    out = pts.copy()
    safe_A = np.where(ok, A, 1.0)
    out[:, i] = np.where(ok, -B / safe_A - pts[:, i], pts[:, i])
    ok &= np.max(np.abs(out), axis=1) <= escape_radius
    return out, ok


def vieta_involution(
    axis: str,
    c: SurfaceCoefficients,
    p,
    pole_tol: float = DEFAULT_POLE_TOL,
    membership_tol: float = DEFAULT_MEMBERSHIP_TOL,
) -> SurfacePoint:
    """The Vieta involution on a single surface point."""
    pts, _ = _as_points(p)
    res_in = abs(evaluate(c, pts[0]))
    if isinstance(p, SurfacePoint) and res_in > membership_tol:
        raise SurfaceDomainError("input point is off the surface")
    out, ok = vieta_batch(c, axis, pts, pole_tol=pole_tol)
    if not ok[0]:
        raise PoleError(
            f"fiber quadratic along {axis} degenerates at this point "
            f"(|A| < {pole_tol!r})"
        )
    q = out[0]
    return SurfacePoint(tuple(q), abs(evaluate(c, q)))


def jacobian_of_involution(axis: str, c: SurfaceCoefficients, p) -> np.ndarray:
    """Jacobian of the Vieta flip at a point, from the closed form
    (t, u, v) -> (-B(u,v)/A(u,v) - t, u, v)."""
    pts, _ = _as_points(p)
    i = AXIS_INDEX[axis]
    oth = [j for j in range(3) if j != i]
    cm = np.moveaxis(c.c, i, 0)
    u, v = pts[0, oth[0]], pts[0, oth[1]]
    um, vm = np.array([1, u, u * u]), np.array([1, v, v * v])
    dum, dvm = np.array([0, 1, 2 * u]), np.array([0, 1, 2 * v])
    A = um @ cm[2] @ vm
    B = um @ cm[1] @ vm
    if abs(A) < DEFAULT_POLE_TOL:
        raise PoleError("fiber quadratic degenerates at this point")
    dA_u, dA_v = dum @ cm[2] @ vm, um @ cm[2] @ dvm
    dB_u, dB_v = dum @ cm[1] @ vm, um @ cm[1] @ dvm
    J = np.eye(3, dtype=complex)
    J[i, i] = -1.0
    # d(-B/A)/du = (B dA - A dB) / A^2
    J[i, oth[0]] = (B * dA_u - A * dB_u) / A**2
    J[i, oth[1]] = (B * dA_v - A * dB_v) / A**2
    return J


def derivative_at_fixed_point(
    axis: str,
    c: SurfaceCoefficients,
    p,
    fixed_tol: float = 1e-8,
) -> np.ndarray:
    """Jacobian of the involution at one of its fixed points."""
    pts, _ = _as_points(p)
    q = vieta_involution(axis, c, pts[0])
    if np.linalg.norm(q.as_array() - pts[0]) > fixed_tol:
        raise SurfaceDomainError("point is not fixed by this involution")
    return jacobian_of_involution(axis, c, pts[0])


@dataclass
class DriftReport:
    steps: int
    max_step_residual: float
    residuals: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class WordOptions:
    newton_project: bool = False
    pole_tol: float = DEFAULT_POLE_TOL
    escape_radius: float = DEFAULT_ESCAPE_RADIUS
    membership_tol: float = DEFAULT_MEMBERSHIP_TOL


def _newton_project_z(c: SurfaceCoefficients, pts: np.ndarray, iters: int = 3) -> np.ndarray:
    out = pts.copy()
    for _ in range(iters):
        f = evaluate(c, out)
        dz = gradient(c, out)[:, 2]
        safe = np.abs(dz) > 1e-12
        out[:, 2] = np.where(safe, out[:, 2] - f / np.where(safe, dz, 1.0), out[:, 2])
    return out


def apply_word_batch(
    w: Word,
    c: SurfaceCoefficients,
    pts: np.ndarray,
    options: WordOptions = WordOptions(),
) -> tuple[np.ndarray, np.ndarray]:
    """Apply a word in the involution alphabet to a batch of ambient
    points (function composition: rightmost letter acts first).

    Returns (points, ok mask); failures are sticky per point.
    """
    if not w.in_involution_alphabet():
        raise SurfaceDomainError("apply_word requires a word in x, y, z")
    out = np.array(pts, dtype=complex)
    ok = np.ones(len(out), dtype=bool)
    for l in reversed(w.letters):
        nxt, step_ok = vieta_batch(
            c, l.gen, out, pole_tol=options.pole_tol, escape_radius=options.escape_radius
        )
        out = np.where((ok & step_ok)[:, None], nxt, out)
        ok &= step_ok
        if options.newton_project:
            out = np.where(ok[:, None], _newton_project_z(c, out), out)
    return out, ok


def apply_word(
    w: Word,
    c: SurfaceCoefficients,
    p,
    options: WordOptions = WordOptions(),
) -> tuple[SurfacePoint, DriftReport]:
    """Apply a word to a single surface point, tracking per-step drift."""
    if not w.in_involution_alphabet():
        raise SurfaceDomainError("apply_word requires a word in x, y, z")
    pts, _ = _as_points(p)
    cur = pts
    residuals: list[float] = []
    for step, l in enumerate(reversed(w.letters)):
        nxt, ok = vieta_batch(
            c, l.gen, cur, pole_tol=options.pole_tol, escape_radius=options.escape_radius
        )
        if not ok[0]:
            if np.max(np.abs(nxt)) > options.escape_radius:
                raise DivergenceError(f"orbit escaped at step {step} ({l})")
            raise PoleError(f"pole at step {step} ({l})")
        residuals.append(float(abs(evaluate(c, nxt[0]))))
        if options.newton_project:
            nxt = _newton_project_z(c, nxt)
        cur = nxt
    q = cur[0]
    report = DriftReport(len(w), max(residuals, default=0.0), residuals)
    return SurfacePoint(tuple(q), abs(evaluate(c, q))), report


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class BallRegion:
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    radius: float = 1.0

    def contains(self, pts: np.ndarray) -> np.ndarray:
        d = pts - np.asarray(self.center, dtype=complex)
        return np.linalg.norm(d, axis=1) <= self.radius


@dataclass(frozen=True)
class BoxRegion:
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    half_width: float = 1.0

    def contains(self, pts: np.ndarray) -> np.ndarray:
        d = pts - np.asarray(self.center, dtype=complex)
        return np.max(np.abs(d), axis=1) <= self.half_width


Region = Union[BallRegion, BoxRegion]


def _region_extent(region: Region) -> tuple[np.ndarray, float]:
    if isinstance(region, BallRegion):
        return np.asarray(region.center, dtype=float), region.radius
    return np.asarray(region.center, dtype=float), region.half_width


def sample_points(
    c: SurfaceCoefficients,
    region: Region,
    count: int,
    mode: str = "complex",
    seed: int = 0,
    attempt_budget: int = 200,
    membership_tol: float = DEFAULT_MEMBERSHIP_TOL,
) -> list[SurfacePoint]:
    """Draw surface points inside a region by sampling (x, y) in its
    projection and solving the fiber quadratic A z^2 + B z + C = 0.
    In real mode only real roots of real-coefficient fibers are kept."""
    if mode not in ("real", "complex"):
        raise ValueError(f"unknown sampling mode {mode!r}")
    rng = np.random.default_rng(seed)
    center, extent = _region_extent(region)
    found: list[SurfacePoint] = []
    for _ in range(attempt_budget):
        m = max(4 * count, 64)
        if mode == "real":
            xy = center[:2] + extent * rng.uniform(-1, 1, (m, 2))
            xy = xy.astype(complex)
        else:
            xy = center[:2] + extent * (
                rng.uniform(-1, 1, (m, 2)) + 1j * rng.uniform(-1, 1, (m, 2))
            )
        pts = np.concatenate([xy, np.zeros((m, 1), dtype=complex)], axis=1)
        A, B, C = axis_quadratic(c, "z", pts)
        ok = np.abs(A) > DEFAULT_POLE_TOL
        disc = np.sqrt((B * B - 4 * A * C).astype(complex))
        for root in (
            (-B + disc) / np.where(ok, 2 * A, 1.0),
            (-B - disc) / np.where(ok, 2 * A, 1.0),
        ):
            cand = pts.copy()
            cand[:, 2] = root
            keep = ok & region.contains(cand)
            if mode == "real":
                keep &= np.max(np.abs(cand.imag), axis=1) <= 1e-12
                cand = cand.real.astype(complex)
            res = np.abs(evaluate(c, cand))
            keep &= res <= membership_tol
            for idx in np.nonzero(keep)[0]:
                found.append(SurfacePoint(tuple(cand[idx]), float(res[idx])))
                if len(found) >= count:
                    return found
    if not found:
        raise EmptySampleError(
            f"no surface points found in {region} after {attempt_budget} attempts"
        )
    return found


# ---------------------------------------------------------------------------
# TOML fixtures


def coefficients_to_toml(c: SurfaceCoefficients) -> str:
    lines = [f'label = "{c.label}"', ""]
    for i in range(3):
        for j in range(3):
            for k in range(3):
                v = complex(c.c[i, j, k])
                lines.append("[[coefficients]]")
                lines.append(f"ijk = [{i}, {j}, {k}]")
                lines.append(f"re = {v.real!r}")
                lines.append(f"im = {v.imag!r}")
                lines.append("")
    return "\n".join(lines)


def coefficients_from_toml(text: str) -> SurfaceCoefficients:
    data = tomllib.loads(text)
    if "preset" in data:
        return PRESETS[data["preset"]]()
    c = np.zeros((3, 3, 3), dtype=complex)
    for entry in data["coefficients"]:
        i, j, k = entry["ijk"]
        c[i, j, k] = complex(entry["re"], entry.get("im", 0.0))
    return SurfaceCoefficients(c, data.get("label", ""))
