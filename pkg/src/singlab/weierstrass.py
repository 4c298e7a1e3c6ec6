"""Maxfaces in Lorentz-Minkowski 3-space from Weierstrass data (g, omega).

Builds the surface f(z) = Re int (-2g, 1+g^2, i(1-g^2)) omega, traces the
singular locus {|g| = 1} and classifies its points from alpha =
g'/(g^2 omega_hat) and the second-order test (g/g') alpha'.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field as dc_field
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.integrate import quad_vec
from scipy.optimize import brentq

from .classification import Classification, Tag, classify_alpha, classify_alpha_beta
from .expr import Const, EvalDomainError, Expression, Mul, eval_jet
from .tracing import (Rectangle, TracedPolyline, newton_refine,
                      trace_level_set)


class DataValidityError(Exception):
    """Weierstrass data violated (1+|g|^2)^2 |omega|^2 != 0 at a point."""


class PreconditionError(Exception):
    """An operation was called at a point violating its precondition."""


class QuadratureError(Exception):
    """Adaptive quadrature failed to converge."""


@dataclass(frozen=True)
class Tolerances:
    eps_zero: float = 1e-8     # zero-band width for strict-sign criteria
    eps_curve: float = 1e-8    # |  |g| - 1 | bound for points on the locus
    eps_int: float = 1e-10     # surface-integration tolerance
    eps_ode: float = 1e-10     # lift-ODE local tolerance

    def __post_init__(self):
        for name in ("eps_zero", "eps_curve", "eps_int", "eps_ode"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class WeierstrassData:
    g: Expression
    omega_hat: Expression
    base_point: complex
    domain: Rectangle

    def g_jet(self, z: complex, order: int = 2):
        return eval_jet(self.g, z, order)

    def omega_jet(self, z: complex, order: int = 2):
        jet = eval_jet(self.omega_hat, z, order)
        if jet.value == 0:
            raise DataValidityError(
                f"omega_hat vanishes at {z}: (1+|g|^2)^2 |omega|^2 = 0")
        return jet


@dataclass(frozen=True)
class SingularPoint:
    z: complex
    xi: complex          # singular direction i * conj(g'/g)
    eta: complex         # null direction i / (g * omega_hat)
    classification: Classification


@dataclass
class SingularCurve:
    points: List[SingularPoint]
    closed: bool

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


# ---------------------------------------------------------------------------
# Singular locus
# ---------------------------------------------------------------------------

def locus_field(data: WeierstrassData) -> Callable[[complex], tuple]:
    """Scalar field F = |g|^2 - 1 with gradient Fu + i Fv = 2 g conj(g')."""

    def field(z: complex):
        jet = data.g_jet(z, 1)
        g, gp = jet.value, jet.derivative(1)
        w = g.conjugate() * gp
        return abs(g) ** 2 - 1.0, 2.0 * complex(w.real, -w.imag)

    return field


def _newton_tol(tolerances: Tolerances) -> float:
    # Refine well below eps_curve so the curve-accuracy bound holds with slack.
    return tolerances.eps_curve * 1e-3


def continuation_step(data: WeierstrassData, step_scale: float = 0.5):
    """Step bound step_scale / max(1, |g'/g|)."""

    def step(z: complex) -> float:
        jet = data.g_jet(z, 1)
        ratio = abs(jet.derivative(1) / jet.value) if jet.value != 0 else 1.0
        return step_scale / max(1.0, ratio)

    return step


def refine_to_locus(data: WeierstrassData, z: complex,
                    tolerances: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """Newton-project a nearby point onto {|g| = 1}."""
    return newton_refine(locus_field(data), z, _newton_tol(tolerances))


def singular_directions(data: WeierstrassData, z: complex) -> tuple:
    """(xi, eta) at a locus point."""
    jet = data.g_jet(z, 1)
    omega = data.omega_jet(z, 0).value
    xi = 1j * (jet.derivative(1) / jet.value).conjugate()
    eta = 1j / (jet.value * omega)
    return xi, eta


def singular_locus(data: WeierstrassData, grid: tuple = (32, 32),
                   tolerances: Tolerances = DEFAULT_TOLERANCES,
                   step_scale: float = 0.5,
                   classify: bool = True) -> List[SingularCurve]:
    """All components of {|g| = 1} in the domain at grid resolution."""
    nu, nv = grid
    if nu < 16 or nv < 16:
        raise ValueError("grid must be at least 16 x 16")
    field = locus_field(data)
    polylines = trace_level_set(field, data.domain, nu, nv,
                                continuation_step(data, step_scale),
                                _newton_tol(tolerances))
    curves = []
    for poly in polylines:
        points = [_make_point(data, z, tolerances, classify)
                  for z in poly.points]
        curves.append(SingularCurve(points=points, closed=poly.closed))
    return curves


def _make_point(data: WeierstrassData, z: complex, tolerances: Tolerances,
                classify: bool) -> SingularPoint:
    xi, eta = singular_directions(data, z)
    cls = classify_point(data, z, tolerances) if classify else None
    return SingularPoint(z=z, xi=xi, eta=eta, classification=cls)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def alpha_jet(data: WeierstrassData, p: complex):
    """Order-1 jet of alpha = g'/(g^2 omega_hat) at p."""
    jg = data.g_jet(p, 2)
    jw = data.omega_jet(p, 2)
    gp = jg.shift()                       # jet of g', order 1
    den = (jg * jg * jw).truncate(1)
    return gp / den


def classify_point(data: WeierstrassData, p: complex,
                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> Classification:
    """Closed-form classification of a singular point of the maxface."""
    jg = data.g_jet(p, 2)
    g_abs_minus_1 = abs(jg.value) - 1.0
    if abs(g_abs_minus_1) >= tolerances.eps_curve:
        raise PreconditionError(
            f"point {p} is not singular: | |g| - 1 | = {abs(g_abs_minus_1):.3e}")
    a = alpha_jet(data, p)
    alpha = a.value
    alpha_prime = a.derivative(1)
    gp = jg.derivative(1)
    second = (jg.value / gp) * alpha_prime if gp != 0 else 0j
    return classify_alpha(alpha, second,
                          g_prime_abs=abs(gp),
                          g_abs_minus_1=g_abs_minus_1,
                          eps_zero=tolerances.eps_zero)


def h_alpha_beta(h: Expression, p: complex) -> tuple:
    """(alpha_h, beta_h, Re h) for the maxface with data (e^h, dz)."""
    jet = eval_jet(h, p, 2)
    hv = jet.value
    h1 = jet.derivative(1)
    h2 = jet.derivative(2)
    alpha = cmath.exp(-hv) * h1
    beta = cmath.exp(-2 * hv) * (h2 - h1 * h1)
    return alpha, beta, hv.real


def classify_h(h: Expression, p: complex,
               tolerances: Tolerances = DEFAULT_TOLERANCES) -> Classification:
    """Classification via alpha_h = e^{-h} h', beta_h = e^{-2h}(h'' - h'^2)."""
    alpha, beta, re_h = h_alpha_beta(h, p)
    if abs(re_h) >= tolerances.eps_curve:
        raise PreconditionError(
            f"point {p} is not singular for f_h: |Re h| = {abs(re_h):.3e}")
    return classify_alpha_beta(alpha, beta, eps_zero=tolerances.eps_zero)


def special_points(data: WeierstrassData, curve: SingularCurve,
                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> List[SingularPoint]:
    """Locus points where Re(alpha) or Im(alpha) vanishes along the curve.

    These are the only candidates for tags other than cuspidal edge;
    located by sign change between consecutive nodes plus bisection on
    the refined chord interpolant.
    """
    field = locus_field(data)
    tol = _newton_tol(tolerances)

    def alpha_at(z: complex) -> complex:
        return alpha_jet(data, z).value

    nodes = [pt.z for pt in curve.points]
    pairs = list(zip(nodes[:-1], nodes[1:]))
    if curve.closed and len(nodes) > 2:
        pairs.append((nodes[-1], nodes[0]))

    found: List[SingularPoint] = []
    for z1, z2 in pairs:
        a1, a2 = alpha_at(z1), alpha_at(z2)
        for part in ("real", "imag"):
            f1, f2 = getattr(a1, part), getattr(a2, part)
            if f1 == 0.0:
                root = z1
            elif f1 * f2 < 0.0:
                def on_curve(s):
                    z = newton_refine(field, z1 + s * (z2 - z1), tol)
                    return getattr(alpha_at(z), part)

                s_root = brentq(on_curve, 0.0, 1.0, xtol=1e-14)
                root = newton_refine(field, z1 + s_root * (z2 - z1), tol)
            else:
                continue
            if any(abs(root - q.z) < 1e-9 for q in found):
                continue
            found.append(_make_point(data, root, tolerances, classify=True))
    return found


# ---------------------------------------------------------------------------
# Surface construction
# ---------------------------------------------------------------------------

def _phi(data: WeierstrassData, z: complex) -> np.ndarray:
    g = data.g_jet(z, 0).value
    w = data.omega_jet(z, 0).value
    return np.array([-2.0 * g, 1.0 + g * g, 1j * (1.0 - g * g)]) * w


def integrate_path(data: WeierstrassData, waypoints: Sequence[complex],
                   eps_int: float = DEFAULT_TOLERANCES.eps_int) -> np.ndarray:
    """Integrate the Weierstrass form along a polyline; real parts."""
    total = np.zeros(3, dtype=complex)
    for a, b in zip(waypoints[:-1], waypoints[1:]):
        if a == b:
            continue
        d = b - a
        result, _err, info = quad_vec(
            lambda s: _phi(data, a + s * d) * d, 0.0, 1.0,
            epsabs=eps_int, epsrel=eps_int, full_output=True)
        if not info.success:
            raise QuadratureError(
                f"quadrature did not converge on segment {a} -> {b}")
        total += result
    return total.real


def integrate_surface(data: WeierstrassData, targets: Sequence[complex],
                      eps_int: float = DEFAULT_TOLERANCES.eps_int,
                      threads: int = 1) -> List[np.ndarray]:
    """Surface points f(z) for each target, via the straight segment z0 -> z."""

    def one(z: complex) -> np.ndarray:
        return integrate_path(data, [data.base_point, z], eps_int)

    if threads > 1 and len(targets) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, targets))
    return [one(z) for z in targets]


def conjugate(data: WeierstrassData) -> WeierstrassData:
    """Conjugate maxface data (g, i * omega)."""
    return WeierstrassData(g=data.g,
                           omega_hat=Mul(Const(1j), data.omega_hat),
                           base_point=data.base_point,
                           domain=data.domain)


def euclidean_normal(data: WeierstrassData, z: complex) -> np.ndarray:
    """Unit normal (1+|g|^2, 2 Re g, 2 Im g) / sqrt((1+|g|^2)^2 + 4|g|^2)."""
    g = data.g_jet(z, 0).value
    a2 = abs(g) ** 2
    vec = np.array([1.0 + a2, 2.0 * g.real, 2.0 * g.imag])
    return vec / np.sqrt((1.0 + a2) ** 2 + 4.0 * a2)


def signed_area_density(data: WeierstrassData, z: complex) -> float:
    """lambda = (|g|^2 - 1) |omega_hat|^2 sqrt((1+|g|^2)^2 + 4|g|^2)."""
    g = data.g_jet(z, 0).value
    w = data.omega_jet(z, 0).value
    a2 = abs(g) ** 2
    return (a2 - 1.0) * abs(w) ** 2 * float(np.sqrt((1.0 + a2) ** 2 + 4.0 * a2))


def metric_density(data: WeierstrassData, z: complex) -> float:
    """ds^2 conformal factor (1 - |g|^2)^2 |omega_hat|^2."""
    g = data.g_jet(z, 0).value
    w = data.omega_jet(z, 0).value
    return (1.0 - abs(g) ** 2) ** 2 * abs(w) ** 2


@dataclass
class TriangleMesh:
    vertices: np.ndarray          # (n, 3) float
    faces: np.ndarray             # (m, 3) int, 0-based
    grid_points: List[complex] = dc_field(default_factory=list)


def mesh(data: WeierstrassData, grid: tuple,
         eps_int: float = DEFAULT_TOLERANCES.eps_int,
         threads: int = 1) -> TriangleMesh:
    """Triangulated image of the domain grid; grid counts cells per axis."""
    nu, nv = grid
    if nu < 1 or nv < 1:
        raise ValueError("grid must be at least 1 x 1 cells")
    us = np.linspace(data.domain.u_min, data.domain.u_max, nu + 1)
    vs = np.linspace(data.domain.v_min, data.domain.v_max, nv + 1)
    nodes = [complex(u, v) for v in vs for u in us]
    vertices = np.array(integrate_surface(data, nodes, eps_int, threads))
    faces = []
    for j in range(nv):
        for i in range(nu):
            a = j * (nu + 1) + i
            b = a + 1
            c = a + (nu + 1) + 1
            d = a + (nu + 1)
            faces.append((a, b, c))
            faces.append((a, c, d))
    return TriangleMesh(vertices=vertices, faces=np.array(faces, dtype=int),
                        grid_points=nodes)
