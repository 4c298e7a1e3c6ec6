"""2-jet space of the exp-h maxface family and a genericity probe.

For data (e^h, dz) the singular behaviour at p is controlled by the
2-jet of h: with hat-h = u + iv, hat-h1, hat-h2 the jet coordinates,

    alpha-hat = e^{-hat h} hat-h1,
    beta-hat  = e^{-2 hat h} (hat-h2 - hat-h1^2),

and the non-generic jets form three codimension-3 sets

    A = {Re h = 0, alpha = 0},
    B = {Re h = 0, Im alpha = 0, Re beta = 0},
    C = {Re h = 0, Re alpha = 0, Re beta = 0}.

B and C are cut out by explicit real systems (zeta_i) and (xi_i) whose
Jacobian determinants in (u, u1, v1) have the closed forms

    J_B = 2 e^{-3u} (u1 cos v + v1 sin v),
    J_C = 2 e^{-3u} (v1 cos v - u1 sin v),

checked here against central-difference determinants.  Since the
obstruction has codimension 3, a random perturbation of h should wipe
out any degenerate singular point; perturb_and_classify measures that
empirically over seeded trials.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .classification import Classification, Tag, classify_alpha_beta
from .expr import Add, Call, Const, Expression, Mul, Pow, Var, parse
from .tracing import ContinuationError, DegenerateSeedError, Rectangle
from .weierstrass import (DEFAULT_TOLERANCES, Tolerances, WeierstrassData,
                          singular_locus, special_points)

DEGENERATE_TAGS = (Tag.DEGENERATE_POINT, Tag.INDETERMINATE)


@dataclass(frozen=True)
class Jet2Point:
    """A 2-jet of a holomorphic function: P = (p, h, h1, h2)."""

    p: complex
    h: complex
    h1: complex
    h2: complex

    @property
    def alpha_hat(self) -> complex:
        return cmath.exp(-self.h) * self.h1

    @property
    def beta_hat(self) -> complex:
        return cmath.exp(-2.0 * self.h) * (self.h2 - self.h1 * self.h1)

    @property
    def coords(self) -> Tuple[float, ...]:
        """(u, v, u1, v1, u2, v2)."""
        return (self.h.real, self.h.imag, self.h1.real, self.h1.imag,
                self.h2.real, self.h2.imag)


@dataclass(frozen=True)
class Membership:
    in_A: bool
    in_B: bool
    in_C: bool


def membership(P: Jet2Point, eps_zero: float = 1e-8) -> Membership:
    """Zero-band membership flags for the sets A, B, C."""
    alpha, beta = P.alpha_hat, P.beta_hat
    band_a = eps_zero * max(1.0, abs(alpha))
    band_b = eps_zero * max(1.0, abs(beta))
    on_locus = abs(P.h.real) <= eps_zero * max(1.0, abs(P.h))
    re_a = abs(alpha.real) <= band_a
    im_a = abs(alpha.imag) <= band_a
    re_b = abs(beta.real) <= band_b
    return Membership(in_A=on_locus and re_a and im_a,
                      in_B=on_locus and im_a and re_b,
                      in_C=on_locus and re_a and re_b)


def _zeta(u: float, v: float, u1: float, v1: float,
          u2: float, v2: float) -> np.ndarray:
    """The real system cutting out B (first component the locus equation)."""
    e1, e2 = math.exp(-u), math.exp(-2.0 * u)
    z3 = e2 * ((u2 - u1 * u1 + v1 * v1) * math.cos(2.0 * v)
               + (v2 - 2.0 * u1 * v1) * math.sin(2.0 * v))
    return np.array([u, e1 * (v1 * math.cos(v) - u1 * math.sin(v)), z3])


def _xi(u: float, v: float, u1: float, v1: float,
        u2: float, v2: float) -> np.ndarray:
    """The real system cutting out C; third component shared with _zeta."""
    e1 = math.exp(-u)
    z3 = _zeta(u, v, u1, v1, u2, v2)[2]
    return np.array([u, e1 * (u1 * math.cos(v) + v1 * math.sin(v)), z3])


def _numeric_det(system, coords: Tuple[float, ...], h: float = 1e-6) -> float:
    """Central-difference Jacobian determinant in (u, u1, v1)."""
    u, v, u1, v1, u2, v2 = coords
    base = np.array([u, u1, v1])
    cols = []
    for k in range(3):
        dp = base.copy(); dp[k] += h
        dm = base.copy(); dm[k] -= h
        fp = system(dp[0], v, dp[1], dp[2], u2, v2)
        fm = system(dm[0], v, dm[1], dm[2], u2, v2)
        cols.append((fp - fm) / (2.0 * h))
    return float(np.linalg.det(np.column_stack(cols)))


def jacobian_check(P: Jet2Point, h: float = 1e-6) -> dict:
    """Closed-form vs numeric Jacobian determinants for the B/C systems."""
    u, v, u1, v1, u2, v2 = P.coords
    e3 = math.exp(-3.0 * u)
    closed_b = 2.0 * e3 * (u1 * math.cos(v) + v1 * math.sin(v))
    closed_c = 2.0 * e3 * (v1 * math.cos(v) - u1 * math.sin(v))
    return {
        "closed_form_B": closed_b,
        "numeric_B": _numeric_det(_zeta, P.coords, h),
        "closed_form_C": closed_c,
        "numeric_C": _numeric_det(_xi, P.coords, h),
    }


def classify_jet(P: Jet2Point,
                 tolerances: Tolerances = DEFAULT_TOLERANCES) -> Classification:
    """Classification from the jet coordinates alone (locus assumed)."""
    return classify_alpha_beta(P.alpha_hat, P.beta_hat,
                               eps_zero=tolerances.eps_zero,
                               extra={"re_h": P.h.real})


# ---------------------------------------------------------------------------
# Perturbation probe
# ---------------------------------------------------------------------------


@dataclass
class TrialResult:
    index: int
    coefficients: Tuple[complex, complex, complex]
    tags: dict                       # tag -> count over classified points
    degenerate_count: int
    failed: bool = False
    error: Optional[str] = None


@dataclass
class PerturbationReport:
    seed: int
    magnitude: float
    trials: int
    window: Tuple[float, float, float, float]
    failures: int
    generic_fraction: float
    per_trial: List[TrialResult] = field(default_factory=list)
    # The density statement behind this probe refers to a compact set
    # whose role is not pinned down further; the finite window rectangle
    # stands in for it and is recorded here rather than interpreted.
    window_note: str = "window rectangle used as the compact-set stand-in"

    def to_json(self, indent: int = 2) -> str:
        doc = {
            "seed": self.seed,
            "magnitude": self.magnitude,
            "trials": self.trials,
            "window": list(self.window),
            "window_note": self.window_note,
            "failures": self.failures,
            "generic_fraction": self.generic_fraction,
            "per_trial": [
                {
                    "index": t.index,
                    "coefficients": [[c.real, c.imag] for c in t.coefficients],
                    "tags": t.tags,
                    "degenerate_count": t.degenerate_count,
                    "failed": t.failed,
                    "error": t.error,
                }
                for t in self.per_trial
            ],
        }
        return json.dumps(doc, indent=indent)


def _disk_sample(rng: np.random.Generator, radius: float) -> complex:
    r = radius * math.sqrt(rng.uniform())
    theta = rng.uniform(0.0, 2.0 * math.pi)
    return complex(r * math.cos(theta), r * math.sin(theta))


def perturbed_h(h: Expression, coeffs) -> Expression:
    """h + c0 + c1 z + c2 z^2 as an expression tree."""
    c0, c1, c2 = coeffs
    bump = Add(Const(c0), Add(Mul(Const(c1), Var()),
                              Mul(Const(c2), Pow(Var(), 2))))
    return Add(h, bump)


def _trial_tags(h_eps: Expression, window: Rectangle,
                tolerances: Tolerances, grid: Tuple[int, int]) -> dict:
    """Tag counts over curve nodes and refined special points."""
    data = WeierstrassData(g=Call("exp", h_eps), omega_hat=Const(1.0),
                           base_point=0j, domain=window)
    tags: dict = {}
    # Node spacing well below the window size, so that sign changes of
    # Re/Im alpha between consecutive nodes cannot slip through.
    step_scale = min(0.5, 0.1 * window.diameter)
    for curve in singular_locus(data, grid=grid, tolerances=tolerances,
                                step_scale=step_scale, classify=True):
        points = list(curve.points) + special_points(data, curve, tolerances)
        for pt in points:
            name = pt.classification.tag.value
            tags[name] = tags.get(name, 0) + 1
    return tags


def perturb_and_classify(h, magnitude: float, trials: int, seed: int,
                         window: Rectangle,
                         tolerances: Tolerances = DEFAULT_TOLERANCES,
                         grid: Tuple[int, int] = (16, 16)) -> PerturbationReport:
    """Empirical genericity probe around the function h.

    Each trial draws (c0, c1, c2) uniformly from the disk of the given
    radius with the counter-based generator seeded by (seed, trial), so
    any trial reproduces bit-exactly from its index.  The singular locus
    of (e^{h+c0+c1 z+c2 z^2}, dz) is re-traced in the window and every
    node plus every refined special point is classified; a trial is
    generic when no tag is DegeneratePoint or Indeterminate.
    """
    if magnitude < 0.0:
        raise ValueError("magnitude must be >= 0")
    if trials < 1:
        raise ValueError("need at least one trial")
    if isinstance(h, str):
        h = parse(h)

    results: List[TrialResult] = []
    failures = 0
    generic = 0
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        coeffs = tuple(_disk_sample(rng, magnitude) for _ in range(3))
        try:
            tags = _trial_tags(perturbed_h(h, coeffs), window,
                               tolerances, grid)
        except (ContinuationError, DegenerateSeedError, ValueError) as exc:
            failures += 1
            results.append(TrialResult(i, coeffs, {}, 0, failed=True,
                                       error=str(exc)))
            continue
        bad = sum(tags.get(t.value, 0) for t in DEGENERATE_TAGS)
        if bad == 0:
            generic += 1
        results.append(TrialResult(i, coeffs, tags, bad))
    ok = trials - failures
    fraction = generic / ok if ok else 0.0
    return PerturbationReport(
        seed=seed, magnitude=magnitude, trials=trials,
        window=(window.u_min, window.u_max, window.v_min, window.v_max),
        failures=failures, generic_fraction=fraction, per_trial=results)
