"""Numerical analysis of holomorphic germs near a fixed ball.

Deviation from the identity is measured in the Euclidean norm on
C^3 ~ R^6; matrix norms are the induced operator (spectral) norm.
Sup norms over closed balls are estimated by sampling the boundary
sphere (the deviation is plurisubharmonic, so its maximum over the
closed ball is attained there), optionally refined by a local polish.
Estimates are one-sided; slack factors in the checks absorb the
sampling error and are recorded in every report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import words as W
from .surface import SurfaceCoefficients, WordOptions, apply_word_batch
from .words import Word


class GermDomainError(ArithmeticError):
    """A germ evaluation failed (pole, divergence, or domain exit) where
    the theory guarantees definedness."""


class HypothesisViolationError(ValueError):
    """Measured data violates a stated hypothesis of the estimate."""


class IllConditionedError(ArithmeticError):
    """Two probe radii disagree too much for a trustworthy estimate."""


@dataclass(frozen=True)
class BallSpec:
    radius: float
    center: tuple[complex, complex, complex] = (0j, 0j, 0j)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")

    def center_array(self) -> np.ndarray:
        return np.asarray(self.center, dtype=complex)

    def shrunk(self, radius: float) -> "BallSpec":
        return BallSpec(radius, self.center)


@dataclass(frozen=True)
class Chart:
    """Affine chart phi(z) = (z - center) / scale mapping a ball around
    ``center`` to B_0(1)."""

    center: tuple[complex, complex, complex]
    scale: float

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("chart scale must be positive")

    def to_chart(self, pts: np.ndarray) -> np.ndarray:
        return (pts - np.asarray(self.center, dtype=complex)) / self.scale

    def from_chart(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(self.center, dtype=complex) + self.scale * pts


class GermMap:
    """A holomorphic map near a ball, evaluated on point batches.

    Word-backed germs remember their surface word so that commutators
    and derived levels stay in word space (cheap, exactly invertible);
    generic germs fall back to composition with iteratively-computed
    inverses.
    """

    def __init__(
        self,
        apply_fn: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
        domain: BallSpec,
        label: str = "",
        inverse_fn: Optional[Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]] = None,
        word: Optional[Word] = None,
        coeffs: Optional[SurfaceCoefficients] = None,
        chart: Optional[Chart] = None,
        options: WordOptions = WordOptions(),
    ):
        self._apply = apply_fn
        self._inverse_fn = inverse_fn
        self.domain = domain
        self.label = label
        self.word = word
        self.coeffs = coeffs
        self.chart = chart
        self.options = options

    def __call__(self, pts: np.ndarray, check_domain: bool = False) -> tuple[np.ndarray, np.ndarray]:
        pts = np.asarray(pts, dtype=complex)
        ok = np.ones(len(pts), dtype=bool)
        if check_domain:
            d = np.linalg.norm(pts - self.domain.center_array(), axis=1)
            ok &= d <= self.domain.radius * (1 + 1e-12)
        out, apply_ok = self._apply(pts)
        return out, ok & apply_ok

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity(domain: BallSpec) -> "GermMap":
        return GermMap(
            lambda p: (p.copy(), np.ones(len(p), dtype=bool)),
            domain,
            label="id",
            inverse_fn=lambda p: (p.copy(), np.ones(len(p), dtype=bool)),
            word=Word(),
        )

    @staticmethod
    def from_surface_word(
        word: Word,
        coeffs: SurfaceCoefficients,
        domain: BallSpec,
        chart: Optional[Chart] = None,
        options: WordOptions = WordOptions(),
    ) -> "GermMap":
        def apply_fn(pts):
            if chart is not None:
                ambient = chart.from_chart(pts)
            else:
                ambient = pts
            out, ok = apply_word_batch(word, coeffs, ambient, options)
            if chart is not None:
                out = chart.to_chart(out)
            return out, ok

        return GermMap(
            apply_fn,
            domain,
            label=str(word),
            word=word,
            coeffs=coeffs,
            chart=chart,
            options=options,
        )

    @staticmethod
    def from_callable(
        fn: Callable[[np.ndarray], np.ndarray],
        domain: BallSpec,
        label: str = "",
        invert_iterations: int = 60,
    ) -> "GermMap":
        """Wrap an everywhere-finite callable (m,3)->(m,3).  The inverse
        is computed by fixed-point iteration, valid while fn is a small
        perturbation of the identity."""

        def apply_fn(pts):
            out = fn(pts)
            return out, np.isfinite(out).all(axis=1)

        def inverse_fn(pts):
            z = pts.copy()
            for _ in range(invert_iterations):
                z = pts - (fn(z) - z)
            resid = np.linalg.norm(fn(z) - pts, axis=1)
            return z, resid <= 1e-10

        return GermMap(apply_fn, domain, label=label, inverse_fn=inverse_fn)

    # -- algebra ------------------------------------------------------

    def inverse(self) -> "GermMap":
        if self.word is not None and self.coeffs is not None:
            return GermMap.from_surface_word(
                self.word.inverse(), self.coeffs, self.domain, self.chart, self.options
            )
        if self.word is not None and self.word.is_identity():
            return self
        if self._inverse_fn is None:
            raise GermDomainError(f"germ {self.label!r} has no inverse rule")
        return GermMap(
            self._inverse_fn,
            self.domain,
            label=f"({self.label})^-1",
            inverse_fn=self._apply,
        )

    def conjugated(self, chart: Chart) -> "GermMap":
        """chart o germ o chart^-1 on B_0(1)."""
        if self.word is not None and self.coeffs is not None and self.chart is None:
            return GermMap.from_surface_word(
                self.word, self.coeffs, BallSpec(1.0), chart, self.options
            )

        def apply_fn(pts):
            out, ok = self(chart.from_chart(pts))
            return chart.to_chart(out), ok

        return GermMap(apply_fn, BallSpec(1.0), label=f"chart({self.label})")


def compose(*germs: GermMap) -> GermMap:
    """Composition, leftmost germ applied last; each factor checks its
    own domain ball."""

    def apply_fn(pts):
        out = pts
        ok = np.ones(len(pts), dtype=bool)
        for g in reversed(germs):
            out, step_ok = g(out, check_domain=True)
            ok &= step_ok
        return out, ok

    domain = germs[-1].domain
    return GermMap(apply_fn, domain, label="*".join(g.label for g in germs))


def germ_commutator(f: GermMap, g: GermMap) -> GermMap:
    """[f, g] = f g f^-1 g^-1; stays in word space when possible."""
    if (
        f.word is not None
        and g.word is not None
        and f.coeffs is g.coeffs
        and f.coeffs is not None
        and f.chart == g.chart
    ):
        return GermMap.from_surface_word(
            W.commutator(f.word, g.word), f.coeffs, f.domain, f.chart, f.options
        )
    return compose(f, g, f.inverse(), g.inverse())


# ---------------------------------------------------------------------------
# sampling and deviation


def sphere_samples(ball: BallSpec, count: int, seed: int) -> np.ndarray:
    """Deterministic quasi-random points on the boundary 5-sphere."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((count, 6))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    v *= ball.radius
    return ball.center_array() + v[:, :3] + 1j * v[:, 3:]


@dataclass
class DeviationReport:
    sup_estimate: float
    argmax: tuple[complex, complex, complex]
    sample_count: int
    method: str
    failures: int
    seed: int
    radius: float

    @property
    def certifies(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "sup_estimate": self.sup_estimate,
            "argmax": [[z.real, z.imag] for z in self.argmax],
            "sample_count": self.sample_count,
            "method": self.method,
            "failures": self.failures,
            "seed": self.seed,
            "radius": self.radius,
            "norm": "euclidean-C3",
        }


def sup_deviation(
    g: GermMap,
    ball: BallSpec,
    samples: int = 1000,
    seed: int = 0,
    polish: bool = False,
) -> DeviationReport:
    """Estimate sup over the closed ball of ||g(z) - z|| by boundary
    sampling; the report does not certify a bound unless failures == 0."""
    pts = sphere_samples(ball, samples, seed)
    out, ok = g(pts)
    dev = np.linalg.norm(out - pts, axis=1)
    dev = np.where(ok, dev, -np.inf)
    best = int(np.argmax(dev))
    sup, arg = float(dev[best]), pts[best]
    failures = int((~ok).sum())
    method = "sphere-random"
    if polish:
        sup, arg = _polish(g, ball, arg, sup)
        method = "sphere-random+polish"
    if failures == samples:
        raise GermDomainError(f"germ {g.label!r} undefined at every sample")
    return DeviationReport(
        sup, tuple(arg), samples, method, failures, seed, ball.radius
    )


def _polish(g: GermMap, ball: BallSpec, arg: np.ndarray, sup: float, steps: int = 8):
    """Greedy coordinate refinement of the argmax on the boundary sphere."""
    center = ball.center_array()
    u = np.concatenate([(arg - center).real, (arg - center).imag])
    u /= np.linalg.norm(u)
    step = 0.3
    for _ in range(steps):
        cands = [u]
        for i in range(6):
            for s in (+step, -step):
                v = u.copy()
                v[i] += s
                cands.append(v / np.linalg.norm(v))
        cand = np.array(cands)
        pts = center + ball.radius * (cand[:, :3] + 1j * cand[:, 3:])
        out, ok = g(pts)
        dev = np.where(ok, np.linalg.norm(out - pts, axis=1), -np.inf)
        best = int(np.argmax(dev))
        if dev[best] > sup:
            sup, u = float(dev[best]), cand[best]
        step *= 0.5
    arg = center + ball.radius * (u[:3] + 1j * u[3:])
    return sup, arg


# ---------------------------------------------------------------------------
# seed condition and epsilon search


@dataclass
class SeedConditionReport:
    ok: bool
    epsilon: float
    margin: float
    worst_label: str
    deviations: list[float]


def _with_inverses(generators: Sequence[GermMap]) -> list[GermMap]:
    out = list(generators)
    out += [g.inverse() for g in generators]
    return out


def check_seed_condition(
    generators: Sequence[GermMap],
    eps: float,
    samples: int = 400,
    seed: int = 0,
) -> SeedConditionReport:
    """True iff every generator and inverse deviates at most eps/32 on
    B_0(eps); the margin is the worst-case slack."""
    if not 0 < eps <= 1:
        raise HypothesisViolationError("seed condition requires 0 < eps <= 1")
    ball = BallSpec(eps)
    margin = np.inf
    worst = ""
    devs: list[float] = []
    for g in _with_inverses(generators):
        rep = sup_deviation(g, ball, samples, seed)
        if not rep.certifies:
            raise GermDomainError(f"germ {g.label!r} undefined inside B_0(eps)")
        devs.append(rep.sup_estimate)
        m = eps / 32 - rep.sup_estimate
        if m < margin:
            margin, worst = m, g.label
    return SeedConditionReport(margin >= 0, eps, float(margin), worst, devs)


def germ_jacobian_at_center(g: GermMap, h: float = 1e-6) -> np.ndarray:
    """Jacobian at the domain center by central complex differences."""
    c = g.domain.center_array()
    J = np.empty((3, 3), dtype=complex)
    for j in range(3):
        e = np.zeros(3, dtype=complex)
        e[j] = h
        hi, ok1 = g((c + e)[None, :])
        lo, ok2 = g((c - e)[None, :])
        if not (ok1[0] and ok2[0]):
            raise GermDomainError("germ undefined at derivative probes")
        J[:, j] = (hi[0] - lo[0]) / (2 * h)
    return J


def find_epsilon(
    generators: Sequence[GermMap],
    eps_range: tuple[float, float] = (1e-4, 1.0),
    samples: int = 400,
    seed: int = 0,
    margin_fraction: float = 0.1,
    derivative_bound: float = 1.0 / 64,
    iterations: int = 40,
) -> float:
    """Largest eps in range where the seed condition holds with at least
    ``margin_fraction`` of eps/32 to spare; 0.0 flags failure.

    Requires every generator to fix the ball center with derivative
    within ``derivative_bound`` of the identity (spectral norm).
    """
    center = generators[0].domain.center_array()
    for g in _with_inverses(generators):
        img, ok = g(center[None, :])
        if not ok[0] or np.linalg.norm(img[0] - center) > 1e-10:
            return 0.0
        J = germ_jacobian_at_center(g)
        if np.linalg.norm(J - np.eye(3), ord=2) > derivative_bound + 1e-9:
            return 0.0

    def passes(eps: float) -> bool:
        try:
            rep = check_seed_condition(generators, eps, samples, seed)
        except GermDomainError:
            # undefined somewhere in B_0(eps): this radius is too large
            return False
        return rep.margin >= margin_fraction * (eps / 32)

    lo, hi = eps_range
    if passes(hi):
        return hi
    if not passes(lo):
        return 0.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if passes(mid):
            lo = mid
        else:
            hi = mid
    return lo


def estimate_hessian_constant(
    g: GermMap,
    probe_radius: float = 1e-3,
    samples: int = 200,
    seed: int = 0,
) -> float:
    """Size of the quadratic Taylor term of a germ fixing the center,
    from symmetric second differences at two probe radii."""
    center = g.domain.center_array()
    img, ok = g(center[None, :])
    if not ok[0] or np.linalg.norm(img[0] - center) > 1e-10:
        raise HypothesisViolationError("germ must fix the ball center")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((samples, 6))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    dirs = v[:, :3] + 1j * v[:, 3:]

    def est(r: float) -> float:
        hi, ok1 = g(center + r * dirs)
        lo, ok2 = g(center - r * dirs)
        if not (ok1.all() and ok2.all()):
            raise GermDomainError("germ undefined at Hessian probes")
        second = hi + lo - 2 * center
        return float(np.max(np.linalg.norm(second, axis=1)) / (2 * r * r))

    coarse, fine = est(probe_radius), est(probe_radius / 2)
    floor = 1e-8
    if max(coarse, fine) > floor and abs(coarse - fine) > 0.5 * max(coarse, fine):
        raise IllConditionedError(
            f"Hessian probes disagree: {coarse!r} vs {fine!r}"
        )
    return fine


# ---------------------------------------------------------------------------
# contraction inequality


@dataclass(frozen=True)
class ContractionParams:
    r: float
    delta: float
    tau: float

    def __post_init__(self):
        if not (0 < self.r < 1 and 0 < self.delta < 1 and 0 < self.tau < 1):
            raise ValueError("contraction constants must lie in (0, 1)")
        if 4 * self.delta + self.tau >= self.r:
            raise ValueError("need 4*delta + tau < r")


@dataclass
class ContractionReport:
    ok: bool
    dev_f: float
    dev_g: float
    measured: float
    bound: float
    slack: float
    inner_radius: float


def commutator_contraction_check(
    f: GermMap,
    g: GermMap,
    params: ContractionParams,
    samples: int = 300,
    seed: int = 0,
    slack: float = 1.1,
) -> ContractionReport:
    """Check the quadratic-gain commutator inequality: with both maps
    delta-close to the identity on B_0(r), their commutator is defined
    on B_0(r - 4*delta - tau) and its deviation is bounded by
    (2/tau) * dev(f) * dev(g), up to the sampling slack."""
    outer = BallSpec(params.r)
    dev_f = sup_deviation(f, outer, samples, seed).sup_estimate
    dev_g = sup_deviation(g, outer, samples, seed + 1).sup_estimate
    if max(dev_f, dev_g) > params.delta:
        raise HypothesisViolationError(
            f"deviation {max(dev_f, dev_g)!r} exceeds delta={params.delta!r}"
        )
    inner_r = params.r - 4 * params.delta - params.tau
    comm = germ_commutator(f, g)
    pts = sphere_samples(BallSpec(inner_r), samples, seed + 2)
    out, ok = comm(pts)
    if not ok.all():
        raise GermDomainError(
            f"commutator undefined at {int((~ok).sum())} sampled points of "
            f"B_0({inner_r!r})"
        )
    measured = float(np.max(np.linalg.norm(out - pts, axis=1)))
    bound = (2 / params.tau) * dev_f * dev_g * slack
    return ContractionReport(
        measured <= bound, dev_f, dev_g, measured, bound, slack, inner_r
    )


# ---------------------------------------------------------------------------
# the exact radius recursion of the common-domain theorem


def epsilon_n(eps: Fraction, n: int) -> Fraction:
    """eps_n = eps - (eps/4) * sum_{j<n} 2^-j; always >= eps/2."""
    eps = Fraction(eps)
    total = sum(Fraction(1, 2**j) for j in range(n))
    return eps - Fraction(eps, 4) * total


def delta_n(eps: Fraction, n: int) -> Fraction:
    return Fraction(eps) / (2**n * 32)


def tau_n(eps: Fraction, n: int) -> Fraction:
    return Fraction(eps) / (2**n * 8)


def contraction_params_at_level(eps: Fraction, n: int) -> tuple[Fraction, Fraction, Fraction]:
    return epsilon_n(eps, n), delta_n(eps, n), tau_n(eps, n)


# ---------------------------------------------------------------------------
# derived decay table


@dataclass
class DecayRow:
    level: int
    count: int
    max_deviation: float
    bound: float

    @property
    def ratio(self) -> float:
        return self.max_deviation / self.bound


@dataclass
class DecayTable:
    epsilon: float
    samples: int
    seed: int
    rows: list[DecayRow] = field(default_factory=list)

    @property
    def max_ratio(self) -> float:
        return max(r.ratio for r in self.rows)

    def to_records(self) -> list[dict]:
        return [
            {
                "level": r.level,
                "count_evaluated": r.count,
                "max_dev": r.max_deviation,
                "bound": r.bound,
                "ratio": r.ratio,
            }
            for r in self.rows
        ]


def realize_level_germ(
    formal: Word, generators: Sequence[GermMap]
) -> GermMap:
    """Instantiate a formal word in g1..gk as a germ, substituting the
    generators.  Word-backed generator sets collapse to a single reduced
    surface word; generic generators compose."""
    word_backed = all(
        g.word is not None and g.coeffs is not None for g in generators
    ) and all(
        g.coeffs is generators[0].coeffs and g.chart == generators[0].chart
        for g in generators
    )
    if word_backed:
        images = {f"g{i + 1}": g.word for i, g in enumerate(generators)}
        sigma_word = W.substitute(formal, images)
        g0 = generators[0]
        return GermMap.from_surface_word(
            sigma_word, g0.coeffs, g0.domain, g0.chart, g0.options
        )
    factors: list[GermMap] = []
    for letter in formal.letters:
        idx = int(letter.gen[1:]) - 1
        g = generators[idx]
        factors.append(g.inverse() if letter.inv else g)
    if not factors:
        return GermMap.identity(generators[0].domain)
    return compose(*factors)


def derived_decay_table(
    generators: Sequence[GermMap],
    eps: float,
    max_level: int,
    samples: int = 1000,
    seed: int = 0,
    full_levels: int = 2,
    level_cap: int = 64,
    enumeration_cap: int = 20000,
) -> DecayTable:
    """Measure max deviation over each derived level on B_0(eps/2) and
    compare against the geometric bound eps / (2^n * 32).

    Levels up to ``full_levels`` are evaluated exhaustively; beyond that
    a deterministic lexicographic prefix of ``level_cap`` elements is
    used.  Any pole or divergence inside B_0(eps/2) is a hard failure,
    since the theorem asserts the common domain contains that ball.
    """
    k = len(generators)
    seeds = W.abstract_generators(k)
    half = BallSpec(eps / 2, generators[0].domain.center)
    table = DecayTable(eps, samples, seed)
    for n in range(max_level + 1):
        if n <= full_levels:
            elems = [t.word for t in W.derived_level(seeds, n, enumeration_cap)]
        else:
            elems = [t.word for t in W.level_prefix(seeds, n, level_cap)]
        bound = eps / (2**n * 32)
        max_dev = 0.0
        for formal in elems:
            germ = realize_level_germ(formal, generators)
            rep = sup_deviation(germ, half, samples, seed)
            if not rep.certifies:
                raise GermDomainError(
                    f"level-{n} element {formal} undefined inside B_0(eps/2): "
                    f"{rep.failures} failures"
                )
            max_dev = max(max_dev, rep.sup_estimate)
        table.rows.append(DecayRow(n, len(elems), max_dev, bound))
    return table


def chart_conjugate(
    w: Word, c: SurfaceCoefficients, chart: Chart, options: WordOptions = WordOptions()
) -> GermMap:
    """The germ chart o w o chart^-1 on B_0(1)."""
    return GermMap.from_surface_word(w, c, BallSpec(1.0), chart, options)
