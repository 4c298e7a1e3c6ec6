"""Numeric classification of frontal singularities in R^3.

A frontal is a map f:U->R^3 together with a unit normal field nu
perpendicular to the image of df; f need not be an immersion.  The
signed area density lambda = det(f_u, f_v, nu) vanishes on the singular
set; where d(lambda) != 0 that set is a regular curve and each singular
point carries a null direction eta spanning ker df.  The classifier
implements the intrinsic criteria:

  * eta transversal to the singular direction, psi(0) != 0  -> cuspidal edge
  * eta transversal, psi(0) = 0, psi'(0) != 0               -> cuspidal cross cap
  * eta proportional, front, d/dt det(eta, gamma') != 0     -> swallowtail

with psi(t) = det(d(f o gamma)/dt, D_eta nu, nu).  The directional
derivative D_eta is the flat one: for null eta it is independent of the
choice of connection.  Everything here is derivative-based numerics, so
the module doubles as an independent oracle for the closed-form
Weierstrass-data classifiers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from .classification import Tag
from .tracing import Rectangle

Vector3 = np.ndarray
PointFn = Callable[[float, float], np.ndarray]

_PARTIAL_KEYS = ("u", "v", "uu", "uv", "vv")


class FrontalError(Exception):
    """Base class for frontal-pipeline failures."""


class FrontalInvariantError(FrontalError):
    """nu fails the unit-length or orthogonality invariant."""


class DegenerateSingularityError(FrontalError):
    """d(lambda) vanishes where a regular singular curve was required."""


class KernelDimensionError(FrontalError):
    """ker df is not one-dimensional at a traced node."""


class NullDirectionError(FrontalError):
    """A direction passed as null is not in ker df."""


@dataclass
class FrontalMap:
    """A parametrized frontal with its unit normal field.

    Partial derivatives come either from supplied exact evaluators
    (derivative_mode="exact") or from Richardson-extrapolated central
    differences with base step fd_step * max(1, |p|).
    """

    f: PointFn
    nu: PointFn
    domain: Rectangle
    derivative_mode: str = "finite-difference"
    f_partials: Optional[Dict[str, PointFn]] = None
    nu_partials: Optional[Dict[str, PointFn]] = None
    fd_step: float = 1e-5

    def __post_init__(self) -> None:
        if self.derivative_mode not in ("exact", "finite-difference"):
            raise ValueError(f"unknown derivative mode {self.derivative_mode!r}")
        if self.derivative_mode == "exact":
            for name, table in (("f", self.f_partials), ("nu", self.nu_partials)):
                missing = [k for k in _PARTIAL_KEYS
                           if table is None or k not in table]
                if missing:
                    raise ValueError(
                        f"exact mode needs {name} partials {missing}")

    # -- derivative dispatch -------------------------------------------------

    def _fd(self, g: PointFn, u: float, v: float, key: str) -> np.ndarray:
        h = self.fd_step * max(1.0, abs(u), abs(v))

        def d1(axis: int, step: float) -> np.ndarray:
            du, dv = (step, 0.0) if axis == 0 else (0.0, step)
            return (g(u + du, v + dv) - g(u - du, v - dv)) / (2.0 * step)

        def d2(axis: int, step: float) -> np.ndarray:
            du, dv = (step, 0.0) if axis == 0 else (0.0, step)
            return (g(u + du, v + dv) - 2.0 * g(u, v)
                    + g(u - du, v - dv)) / step ** 2

        def dm(step: float) -> np.ndarray:
            return (g(u + step, v + step) - g(u + step, v - step)
                    - g(u - step, v + step) + g(u - step, v - step)) \
                / (4.0 * step ** 2)

        if key in ("u", "v"):
            rule = lambda s: d1(0 if key == "u" else 1, s)
        elif key in ("uu", "vv"):
            rule = lambda s: d2(0 if key == "uu" else 1, s)
        elif key == "uv":
            rule = dm
        else:
            raise ValueError(f"unknown partial {key!r}")
        # One Richardson level: both stencils above have O(h^2) error.
        return (4.0 * rule(h / 2.0) - rule(h)) / 3.0

    def f_d(self, u: float, v: float, key: str) -> np.ndarray:
        if self.derivative_mode == "exact":
            return np.asarray(self.f_partials[key](u, v), dtype=float)
        return self._fd(self.f, u, v, key)

    def nu_d(self, u: float, v: float, key: str) -> np.ndarray:
        if self.derivative_mode == "exact":
            return np.asarray(self.nu_partials[key](u, v), dtype=float)
        return self._fd(self.nu, u, v, key)

    def jacobian(self, u: float, v: float) -> np.ndarray:
        """3x2 matrix [f_u f_v]."""
        return np.column_stack([self.f_d(u, v, "u"), self.f_d(u, v, "v")])

    def validate(self, points: Sequence[Tuple[float, float]],
                 tol_unit: float = 1e-9, tol_orth: float = 1e-7) -> None:
        """Check |nu| = 1 and nu . f_u = nu . f_v = 0 at the given points."""
        for (u, v) in points:
            n = np.asarray(self.nu(u, v), dtype=float)
            if abs(np.linalg.norm(n) - 1.0) > tol_unit:
                raise FrontalInvariantError(
                    f"|nu({u}, {v})| = {np.linalg.norm(n)} != 1")
            J = self.jacobian(u, v)
            scale = max(1.0, float(np.max(np.abs(J))))
            err = float(np.max(np.abs(n @ J)))
            if err > tol_orth * scale:
                raise FrontalInvariantError(
                    f"nu not orthogonal to df at ({u}, {v}): residual {err}")


# -- signed area density and its gradient ------------------------------------


def area_density(F: FrontalMap, u: float, v: float) -> float:
    """lambda(u, v) = det(f_u, f_v, nu)."""
    m = np.column_stack([F.f_d(u, v, "u"), F.f_d(u, v, "v"),
                         np.asarray(F.nu(u, v), dtype=float)])
    return float(np.linalg.det(m))


def lambda_gradient(F: FrontalMap, u: float, v: float,
                    step: Optional[float] = None) -> np.ndarray:
    """(lambda_u, lambda_v) by Richardson-extrapolated central differences."""
    h = (step or 10.0 * F.fd_step) * max(1.0, abs(u), abs(v))

    def d(axis: int, s: float) -> float:
        du, dv = (s, 0.0) if axis == 0 else (0.0, s)
        return (area_density(F, u + du, v + dv)
                - area_density(F, u - du, v - dv)) / (2.0 * s)

    return np.array([(4.0 * d(i, h / 2.0) - d(i, h)) / 3.0 for i in (0, 1)])


def null_direction(F: FrontalMap, u: float, v: float,
                   kernel_gap: float = 1e-3) -> np.ndarray:
    """Unit kernel direction of df, the smallest right singular vector.

    Raises KernelDimensionError when the two singular values are not
    cleanly separated (kernel dimension 0 or 2 at the working accuracy).
    """
    J = F.jacobian(u, v)
    _, s, vt = np.linalg.svd(J)
    scale = max(1.0, s[0])
    if s[0] <= kernel_gap * scale or (s[1] > kernel_gap * scale
                                      and s[1] > 0.5 * s[0]):
        raise KernelDimensionError(
            f"singular values {s} at ({u}, {v}) do not isolate a "
            f"one-dimensional kernel")
    return vt[1]


def covariant_derivative(F: FrontalMap, X: PointFn, eta: np.ndarray,
                         u: float, v: float,
                         null_tol: float = 1e-6) -> np.ndarray:
    """Flat directional derivative of the field X along eta at (u, v).

    Requires eta to be a null direction (df(eta) ~ 0): only then is the
    result independent of the choice of linear connection.
    """
    eta = np.asarray(eta, dtype=float)
    J = F.jacobian(u, v)
    scale = max(1.0, float(np.max(np.abs(J)))) * max(1.0, float(np.linalg.norm(eta)))
    if float(np.linalg.norm(J @ eta)) > null_tol * scale:
        raise NullDirectionError(
            f"direction {eta} is not null at ({u}, {v}): "
            f"|df(eta)| = {np.linalg.norm(J @ eta)}")
    h = F.fd_step * max(1.0, abs(u), abs(v))

    def d(s: float) -> np.ndarray:
        a = np.asarray(X(u + s * eta[0], v + s * eta[1]), dtype=float)
        b = np.asarray(X(u - s * eta[0], v - s * eta[1]), dtype=float)
        return (a - b) / (2.0 * s)

    return (4.0 * d(h / 2.0) - d(h)) / 3.0


# -- singular-curve tracing ---------------------------------------------------


@dataclass
class FrontalCurve:
    """Nodes of a traced singular curve with per-node frames.

    ts are signed cumulative chord lengths; gamma_primes are the unit
    singular directions (lambda-gradient rotated by -90 degrees) and
    etas the sign-aligned unit null directions.
    """

    nodes: np.ndarray            # (n, 2)
    ts: np.ndarray               # (n,)
    gamma_primes: np.ndarray     # (n, 2)
    etas: np.ndarray             # (n, 2)
    center: int                  # index of the seed node

    def __len__(self) -> int:
        return len(self.nodes)


_NEWTON_MAX = 30


def _project_to_curve(F: FrontalMap, u: float, v: float,
                      tol: float) -> Tuple[float, float, np.ndarray]:
    """Newton-project (u, v) onto {lambda = 0}; returns point and gradient."""
    for _ in range(_NEWTON_MAX):
        val = area_density(F, u, v)
        grad = lambda_gradient(F, u, v)
        g2 = float(grad @ grad)
        if g2 == 0.0:
            raise DegenerateSingularityError(
                f"lambda-gradient vanished at ({u}, {v})")
        if abs(val) <= tol * max(1.0, float(np.sqrt(g2))):
            return u, v, grad
        u, v = u - val * grad[0] / g2, v - val * grad[1] / g2
    raise DegenerateSingularityError(
        f"Newton projection onto the singular curve stalled near ({u}, {v})")


def _singular_direction(grad: np.ndarray) -> np.ndarray:
    """Unit tangent of {lambda=0}: the gradient rotated by -90 degrees."""
    t = np.array([grad[1], -grad[0]])
    return t / np.linalg.norm(t)


def trace_singular_curve(F: FrontalMap, seed: Tuple[float, float],
                         step: float = 0.02, half_nodes: int = 3,
                         tol: float = 1e-11,
                         grad_floor: float = 1e-6) -> FrontalCurve:
    """Trace {lambda = 0} through the seed, half_nodes nodes to each side.

    Predictor-corrector continuation: step along the unit singular
    direction, then Newton-project back.  At each node eta is the SVD
    kernel direction, sign-aligned along the curve; at the seed the sign
    is fixed by det(gamma', eta) > 0 when transversal, else by
    gamma'.eta > 0.
    """
    u0, v0, grad0 = _project_to_curve(F, seed[0], seed[1], tol)
    if float(np.linalg.norm(grad0)) < grad_floor:
        raise DegenerateSingularityError(
            f"d(lambda) ~ 0 at seed ({u0}, {v0}); singular curve not regular")
    t0 = _singular_direction(grad0)

    def march(direction: np.ndarray) -> List[Tuple[float, float, np.ndarray]]:
        out = []
        u, v, tang = u0, v0, direction
        for _ in range(half_nodes):
            pu, pv = u + step * tang[0], v + step * tang[1]
            u, v, grad = _project_to_curve(F, pu, pv, tol)
            t_new = _singular_direction(grad)
            if float(t_new @ tang) < 0.0:
                t_new = -t_new
            out.append((u, v, t_new))
            tang = t_new
        return out

    fwd = march(t0)
    bwd = march(-t0)

    nodes, gammas = [], []
    for (u, v, tang) in reversed(bwd):
        nodes.append((u, v))
        gammas.append(-tang)        # orient every tangent along +t0
    nodes.append((u0, v0))
    gammas.append(t0)
    for (u, v, tang) in fwd:
        nodes.append((u, v))
        gammas.append(tang)
    nodes = np.array(nodes)
    gammas = np.array(gammas)
    center = half_nodes

    chords = np.linalg.norm(np.diff(nodes, axis=0), axis=1)
    ts = np.concatenate([[0.0], np.cumsum(chords)])
    ts -= ts[center]

    etas = np.empty_like(gammas)
    eta_c = null_direction(F, *nodes[center])
    cross = gammas[center][0] * eta_c[1] - gammas[center][1] * eta_c[0]
    if (cross if abs(cross) > 1e-12 else float(gammas[center] @ eta_c)) < 0.0:
        eta_c = -eta_c
    etas[center] = eta_c
    for i in range(center + 1, len(nodes)):
        e = null_direction(F, *nodes[i])
        etas[i] = e if float(e @ etas[i - 1]) >= 0.0 else -e
    for i in range(center - 1, -1, -1):
        e = null_direction(F, *nodes[i])
        etas[i] = e if float(e @ etas[i + 1]) >= 0.0 else -e
    return FrontalCurve(nodes, ts, gammas, etas, center)


def psi_along_curve(F: FrontalMap, curve: FrontalCurve) -> np.ndarray:
    """psi(t_i) = det(d(f o gamma)/dt, D_eta nu, nu) at every node.

    The curve derivative uses centered differences of f along the traced
    nodes (one-sided at the ends), so no second derivatives of f enter.
    """
    n = len(curve)
    fs = np.array([F.f(u, v) for (u, v) in curve.nodes], dtype=float)
    psis = np.empty(n)
    for i in range(n):
        lo, hi = max(0, i - 1), min(n - 1, i + 1)
        gamma_tilde_prime = (fs[hi] - fs[lo]) / (curve.ts[hi] - curve.ts[lo])
        u, v = curve.nodes[i]
        dnu = covariant_derivative(F, F.nu, curve.etas[i], u, v)
        m = np.column_stack([gamma_tilde_prime, dnu,
                             np.asarray(F.nu(u, v), dtype=float)])
        psis[i] = np.linalg.det(m)
    return psis


# -- classification ------------------------------------------------------------


@dataclass
class SingularPointReport:
    location: Tuple[float, float]
    tag: Tag
    lambda_grad: np.ndarray
    gamma_prime: np.ndarray
    eta: np.ndarray
    psi_samples: np.ndarray
    psi0: float
    psi1: float
    transversal: bool
    extra: dict = field(default_factory=dict)


def _line_fit(ts: np.ndarray, ys: np.ndarray) -> Tuple[float, float]:
    """Least-squares fit ys ~ a + b*ts; returns (a, b)."""
    coeffs = np.polynomial.polynomial.polyfit(ts, ys, 1)
    return float(coeffs[0]), float(coeffs[1])


def _is_front(F: FrontalMap, u: float, v: float, band: float) -> bool:
    """Rank test on the 6x2 Jacobian of (f, nu): front iff rank 2."""
    m = np.vstack([F.jacobian(u, v),
                   np.column_stack([F.nu_d(u, v, "u"), F.nu_d(u, v, "v")])])
    s = np.linalg.svd(m, compute_uv=False)
    return s[1] > band * max(1.0, s[0])


def classify(F: FrontalMap, p: Tuple[float, float], *,
             step: float = 0.02, eps_zero: float = 1e-8,
             newton_tol: float = 1e-11,
             grad_floor: float = 1e-6) -> SingularPointReport:
    """Classify the singular point nearest p by the intrinsic criteria.

    Traces seven nodes of the singular curve centered at the projected
    point, samples psi there, and fits psi(0), psi'(0) and the drift of
    det(eta, gamma') by least-squares lines.  eps_zero sets the width of
    every zero band; raise it for noisy (finite-difference, quadrature-
    sampled) inputs.
    """
    curve = trace_singular_curve(F, p, step=step, half_nodes=3,
                                 tol=newton_tol, grad_floor=grad_floor)
    c = curve.center
    u0, v0 = curve.nodes[c]
    grad0 = lambda_gradient(F, u0, v0)
    psis = psi_along_curve(F, curve)
    psi0, psi1 = _line_fit(curve.ts, psis)

    dets = (curve.etas[:, 1] * curve.gamma_primes[:, 0]
            - curve.etas[:, 0] * curve.gamma_primes[:, 1])
    det0_fit, det1_fit = _line_fit(curve.ts, dets)
    det0 = float(curve.gamma_primes[c][0] * curve.etas[c][1]
                 - curve.gamma_primes[c][1] * curve.etas[c][0])

    psi_band = eps_zero * max(1.0, abs(psi0), abs(psi1))
    extra = {"det_eta_gamma": det0, "det_eta_gamma_slope": det1_fit,
             "lambda_value": area_density(F, u0, v0)}

    transversal = abs(det0) > eps_zero
    if transversal:
        if abs(psi0) > psi_band:
            tag = Tag.CUSPIDAL_EDGE
        elif abs(psi1) > psi_band:
            tag = Tag.CUSPIDAL_CROSS_CAP
        else:
            tag = Tag.INDETERMINATE
    else:
        if not _is_front(F, u0, v0, eps_zero):
            tag = Tag.DEGENERATE_POINT
        elif abs(det1_fit) > eps_zero * max(1.0, abs(det0_fit)):
            tag = Tag.SWALLOWTAIL
        else:
            tag = Tag.INDETERMINATE

    return SingularPointReport(
        location=(u0, v0), tag=tag, lambda_grad=grad0,
        gamma_prime=curve.gamma_primes[c], eta=curve.etas[c],
        psi_samples=psis, psi0=psi0, psi1=psi1,
        transversal=transversal, extra=extra)


# -- curvature profile ----------------------------------------------------------


@dataclass(frozen=True)
class CurvatureRow:
    t: float
    offset: float
    K: float
    H: float
    II_gamma: float
    ok: bool


def curvature_profile(F: FrontalMap, curve: FrontalCurve,
                      offsets: Sequence[float],
                      metric_floor: float = 1e-12) -> List[CurvatureRow]:
    """Gaussian/mean curvature sampled at eta-offsets from the curve.

    For each node and each nonzero offset s the fundamental forms are
    taken at node + s*eta.  II_gamma is II(gamma', gamma') evaluated on
    the curve itself (offset-independent limit row).  Rows with a
    degenerate first fundamental form carry ok=False and NaN curvatures.
    """
    rows: List[CurvatureRow] = []
    for i, (u0, v0) in enumerate(curve.nodes):
        gp = curve.gamma_primes[i]
        nu0 = np.asarray(F.nu(u0, v0), dtype=float)
        L0 = float(F.f_d(u0, v0, "uu") @ nu0)
        M0 = float(F.f_d(u0, v0, "uv") @ nu0)
        N0 = float(F.f_d(u0, v0, "vv") @ nu0)
        ii_gamma = L0 * gp[0] ** 2 + 2.0 * M0 * gp[0] * gp[1] + N0 * gp[1] ** 2
        for s in offsets:
            u = u0 + s * curve.etas[i][0]
            v = v0 + s * curve.etas[i][1]
            fu, fv = F.f_d(u, v, "u"), F.f_d(u, v, "v")
            nu = np.asarray(F.nu(u, v), dtype=float)
            E, Fm, G = float(fu @ fu), float(fu @ fv), float(fv @ fv)
            L = float(F.f_d(u, v, "uu") @ nu)
            M = float(F.f_d(u, v, "uv") @ nu)
            N = float(F.f_d(u, v, "vv") @ nu)
            det_i = E * G - Fm * Fm
            if det_i <= metric_floor * max(1.0, E, G) ** 2:
                rows.append(CurvatureRow(float(curve.ts[i]), float(s),
                                         float("nan"), float("nan"),
                                         ii_gamma, False))
                continue
            K = (L * N - M * M) / det_i
            H = (E * N - 2.0 * Fm * M + G * L) / (2.0 * det_i)
            rows.append(CurvatureRow(float(curve.ts[i]), float(s),
                                     K, H, ii_gamma, True))
    return rows


# -- tangent developables ---------------------------------------------------------

CurveJets = Callable[[float], np.ndarray]   # t -> (5, 3): gamma .. gamma''''


def _unit_with_derivatives(w: np.ndarray, w1: np.ndarray,
                           w2: Optional[np.ndarray] = None):
    """n = w/|w| with first (and optionally second) t-derivatives."""
    r = float(np.linalg.norm(w))
    if r == 0.0:
        raise DegenerateSingularityError("cannot normalize a zero vector")
    r1 = float(w @ w1) / r
    n = w / r
    n1 = w1 / r - w * (r1 / r ** 2)
    if w2 is None:
        return n, n1
    r2 = (float(w1 @ w1) + float(w @ w2) - r1 ** 2) / r
    n2 = (w2 / r - 2.0 * r1 * w1 / r ** 2
          - w * (r2 / r ** 2) + 2.0 * w * (r1 ** 2 / r ** 3))
    return n, n1, n2


@dataclass
class TangentDevelopable:
    """f(t, u) = gamma(t) + u*xi1(t) with normal nu = xi3(t).

    FrontalMap coordinates are (u, v) = (t, u): the first parameter runs
    along the curve, the second along the ruling.  kappa must stay
    positive on the window; arc-length parametrization is not assumed.
    """

    curve_jets: CurveJets
    frontal: FrontalMap

    def _jets(self, t: float) -> np.ndarray:
        jets = np.asarray(self.curve_jets(t), dtype=float)
        if jets.shape != (5, 3):
            raise ValueError(f"curve jets must be (5, 3), got {jets.shape}")
        return jets

    def kappa(self, t: float) -> float:
        _, g1, g2, _, _ = self._jets(t)
        speed = float(np.linalg.norm(g1))
        return float(np.linalg.norm(np.cross(g1, g2))) / speed ** 3

    def tau(self, t: float) -> float:
        _, g1, g2, g3, _ = self._jets(t)
        w = np.cross(g1, g2)
        return float(np.linalg.det(np.array([g1, g2, g3]))) / float(w @ w)

    def tau_prime(self, t: float) -> float:
        """d(tau)/dt from the quotient rule; needs the 4th derivative."""
        _, g1, g2, g3, g4 = self._jets(t)
        w = np.cross(g1, g2)
        w1 = np.cross(g1, g3)
        num = float(np.linalg.det(np.array([g1, g2, g3])))
        num1 = float(np.linalg.det(np.array([g1, g2, g4])))
        den = float(w @ w)
        return (num1 * den - num * 2.0 * float(w @ w1)) / den ** 2


def tangent_developable(curve_jets: CurveJets,
                        domain: Rectangle) -> TangentDevelopable:
    """Build the tangent developable of a space curve as an exact frontal.

    The curve must be regular with kappa > 0 on the window; the Frenet
    frame is computed from raw derivatives with the chain-rule
    corrections for non-arc-length parametrization.
    """

    def frames(t: float):
        jets = np.asarray(curve_jets(t), dtype=float)
        g0, g1, g2, g3, _ = jets
        xi1, xi1_1, xi1_2 = _unit_with_derivatives(g1, g2, g3)
        w = np.cross(g1, g2)
        if float(np.linalg.norm(w)) < 1e-14 * max(1.0, float(g1 @ g1)):
            raise DegenerateSingularityError(
                f"kappa = 0 at t = {t}: Frenet frame undefined")
        w1 = np.cross(g1, g3)
        xi3, xi3_1 = _unit_with_derivatives(w, w1)
        return g0, g1, g2, xi1, xi1_1, xi1_2, xi3, xi3_1

    def f(t: float, u: float) -> np.ndarray:
        g0, _, _, xi1, _, _, _, _ = frames(t)
        return g0 + u * xi1

    def nu(t: float, u: float) -> np.ndarray:
        return frames(t)[6]

    zero = lambda t, u: np.zeros(3)
    f_partials = {
        "u": lambda t, u: frames(t)[1] + u * frames(t)[4],
        "v": lambda t, u: frames(t)[3],
        "uu": lambda t, u: frames(t)[2] + u * frames(t)[5],
        "uv": lambda t, u: frames(t)[4],
        "vv": zero,
    }
    nu_partials = {
        "u": lambda t, u: frames(t)[7],
        "v": zero,
        "uu": lambda t, u: _nu_tt(curve_jets, t),
        "uv": zero,
        "vv": zero,
    }
    frontal = FrontalMap(f=f, nu=nu, domain=domain, derivative_mode="exact",
                         f_partials=f_partials, nu_partials=nu_partials)
    return TangentDevelopable(curve_jets=curve_jets, frontal=frontal)


def _nu_tt(curve_jets: CurveJets, t: float) -> np.ndarray:
    jets = np.asarray(curve_jets(t), dtype=float)
    _, g1, g2, g3, g4 = jets
    w = np.cross(g1, g2)
    w1 = np.cross(g1, g3)
    w2 = np.cross(g2, g3) + np.cross(g1, g4)
    return _unit_with_derivatives(w, w1, w2)[2]


def curve_jets_from_expressions(components, fd_step: float = 1e-4) -> CurveJets:
    """Curve jets t -> (5, 3) from three single-variable expressions.

    Components are parsed expression trees in the variable z, evaluated
    on the real axis.  Derivatives through order 3 come from the Taylor
    jet; the 4th is a Richardson-extrapolated central difference of the
    cubic jet coefficient.
    """
    from .expr import eval_jet, parse

    exprs = [parse(c) if isinstance(c, str) else c for c in components]

    def jets(t: float) -> np.ndarray:
        out = np.empty((5, 3))
        h = fd_step * max(1.0, abs(t))
        for k, e in enumerate(exprs):
            j = eval_jet(e, complex(t), 3)
            for order in range(4):
                out[order, k] = j.derivative(order).real

            def c3(tt: float) -> float:
                return eval_jet(e, complex(tt), 3).coeffs[3].real

            d = lambda s: (c3(t + s) - c3(t - s)) / (2.0 * s)
            out[4, k] = 6.0 * (4.0 * d(h / 2.0) - d(h)) / 3.0
        return out

    return jets


# -- presets ----------------------------------------------------------------------


def _sympy_frontal(f_syms, nu_syms, domain: Rectangle) -> FrontalMap:
    """Exact-mode FrontalMap from sympy component expressions in u, v."""
    u, v = sp.symbols("u v", real=True)

    def pack(comps):
        vec = sp.Matrix(comps)
        table = {}
        for key in _PARTIAL_KEYS:
            d = vec
            for axis in key:
                d = d.diff(u if axis == "u" else v)
            fn = sp.lambdify((u, v), list(d), modules="numpy")
            table[key] = (lambda fn: lambda uu, vv:
                          np.asarray(fn(uu, vv), dtype=float))(fn)
        fn0 = sp.lambdify((u, v), list(vec), modules="numpy")
        value = lambda uu, vv: np.asarray(fn0(uu, vv), dtype=float)
        return value, table

    f_val, f_table = pack(f_syms)
    nu_val, nu_table = pack(nu_syms)
    return FrontalMap(f=f_val, nu=nu_val, domain=domain,
                      derivative_mode="exact",
                      f_partials=f_table, nu_partials=nu_table)


def _preset_cuspidal_edge() -> FrontalMap:
    u, v = sp.symbols("u v", real=True)
    w = sp.sqrt(9 * u ** 2 + 4)
    return _sympy_frontal([u ** 2, u ** 3, v],
                          [3 * u / w, -2 / w, sp.Integer(0)],
                          Rectangle(-1.0, 1.0, -1.0, 1.0))


def _preset_swallowtail() -> FrontalMap:
    u, v = sp.symbols("u v", real=True)
    w = sp.sqrt(1 + u ** 2 + u ** 4)
    return _sympy_frontal([3 * u ** 4 + u ** 2 * v, 4 * u ** 3 + 2 * u * v, v],
                          [1 / w, -u / w, u ** 2 / w],
                          Rectangle(-1.0, 1.0, -1.0, 1.0))


def _preset_cuspidal_cross_cap() -> FrontalMap:
    u, v = sp.symbols("u v", real=True)
    w = sp.sqrt(4 + 9 * u ** 2 * v ** 2 + 4 * v ** 6)
    return _sympy_frontal([u, v ** 2, u * v ** 3],
                          [-2 * v ** 3 / w, -3 * u * v / w, 2 / w],
                          Rectangle(-1.0, 1.0, -1.0, 1.0))


def _preset_plane() -> FrontalMap:
    u, v = sp.symbols("u v", real=True)
    return _sympy_frontal([u, v, sp.Integer(0)],
                          [sp.Integer(0), sp.Integer(0), sp.Integer(1)],
                          Rectangle(-1.0, 1.0, -1.0, 1.0))


def _preset_tangent_developable(curve=("z", "z^2", "z^4"),
                                domain: Rectangle = Rectangle(-0.5, 0.5,
                                                              -0.5, 0.5)):
    return tangent_developable(curve_jets_from_expressions(curve), domain)


PRESETS = {
    "cuspidal-edge": _preset_cuspidal_edge,
    "swallowtail": _preset_swallowtail,
    "cuspidal-cross-cap": _preset_cuspidal_cross_cap,
    "plane": _preset_plane,
    "tangent-developable": _preset_tangent_developable,
}


def preset(name: str, **kwargs):
    """Look up a preset frontal by name; see PRESETS for the registry."""
    try:
        factory = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; "
                       f"available: {sorted(PRESETS)}") from None
    return factory(**kwargs)
