"""CMC-1 faces in de Sitter 3-space via the holomorphic null lift.

Solves F^{-1} dF = [[g, -g^2], [1, -g]] omega with F(z0) = identity,
projects to S^3_1 = {X Hermitian, det X = -1} as f = F e3 F*, and
classifies singular points; the criteria coincide with the maxface case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .classification import Classification
from .weierstrass import (DEFAULT_TOLERANCES, PreconditionError, Tolerances,
                          WeierstrassData, alpha_jet, classify_point)

E0 = np.eye(2, dtype=complex)
E1 = np.array([[0, 1], [1, 0]], dtype=complex)
E2 = np.array([[0, 1j], [-1j, 0]], dtype=complex)
E3 = np.array([[1, 0], [0, -1]], dtype=complex)


class LiftIntegrationError(Exception):
    """Lift ODE integration failed (step underflow or data singularity)."""


class TransversalityError(Exception):
    """The chosen section is tangent to f_* T_p U at the singular point."""


@dataclass(frozen=True)
class SL2Frame:
    matrix: np.ndarray          # 2x2 complex
    det_drift: float            # |det F - 1| accumulated by the integrator

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))


@dataclass(frozen=True)
class HermitianPoint:
    matrix: np.ndarray          # 2x2 complex Hermitian

    @property
    def vec(self) -> np.ndarray:
        """(x0, x1, x2, x3) with X = sum x^k e_k."""
        m = self.matrix
        x0 = (m[0, 0] + m[1, 1]).real / 2.0
        x3 = (m[0, 0] - m[1, 1]).real / 2.0
        x1 = m[0, 1].real
        x2 = m[0, 1].imag
        return np.array([x0, x1, x2, x3])

    @property
    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


def vec_to_hermitian(x: np.ndarray) -> HermitianPoint:
    x0, x1, x2, x3 = (float(c) for c in x)
    return HermitianPoint(x0 * E0 + x1 * E1 + x2 * E2 + x3 * E3)


def minkowski_inner(X: HermitianPoint, Y: HermitianPoint) -> float:
    """<X, Y> = -(1/2) trace(X e2 Y^T e2); satisfies <X, X> = -det X."""
    return float(np.trace(X.matrix @ E2 @ Y.matrix.T @ E2).real) * -0.5


def _coefficient_matrix(data: WeierstrassData, z: complex) -> np.ndarray:
    g = data.g_jet(z, 0).value
    w = data.omega_jet(z, 0).value
    return np.array([[g, -g * g], [1.0, -g]], dtype=complex) * w


def integrate_lift(data: WeierstrassData, target: complex,
                   eps_ode: float = DEFAULT_TOLERANCES.eps_ode,
                   start: Optional[complex] = None,
                   frame: Optional[np.ndarray] = None,
                   renormalize: bool = False,
                   checkpoints: int = 8) -> SL2Frame:
    """Integrate the null lift along the straight segment start -> target.

    Uses an embedded Runge-Kutta 4(5) pair with adaptive local error
    control at tolerance eps_ode.  det F = 1 is conserved by the flow
    (the coefficient matrix is trace-free); the measured drift is
    returned as an integration-quality metric.  With renormalize=True
    the frame is rescaled to det 1 at each checkpoint.
    """
    z_start = data.base_point if start is None else start
    F = np.eye(2, dtype=complex) if frame is None else np.array(frame, dtype=complex)
    if z_start == target:
        return SL2Frame(F, abs(np.linalg.det(F) - 1.0))
    d = target - z_start

    def rhs(s, y):
        F_now = y.view(complex).reshape(2, 2)
        dF = F_now @ _coefficient_matrix(data, z_start + s * d) * d
        return dF.reshape(-1).view(float)

    n_chunks = checkpoints if renormalize else 1
    edges = np.linspace(0.0, 1.0, n_chunks + 1)
    for s0, s1 in zip(edges[:-1], edges[1:]):
        y0 = F.reshape(-1).view(float).copy()
        sol = solve_ivp(rhs, (s0, s1), y0, method="RK45",
                        rtol=eps_ode, atol=eps_ode, dense_output=False)
        if not sol.success:
            raise LiftIntegrationError(
                f"lift integration failed near s={sol.t[-1]:.6f} "
                f"(z={z_start + sol.t[-1] * d}): {sol.message}")
        F = sol.y[:, -1].copy().view(complex).reshape(2, 2)
        if renormalize:
            det = np.linalg.det(F)
            F = F / np.sqrt(det)
    return SL2Frame(F, float(abs(np.linalg.det(F) - 1.0)))


def project(F: SL2Frame) -> HermitianPoint:
    """f = F e3 F*, a point of S^3_1 (det = -1 up to drift)."""
    m = F.matrix
    return HermitianPoint(m @ E3 @ m.conj().T)


def lorentz_normal(F: SL2Frame, g_value: complex) -> HermitianPoint:
    """nu = F beta^2 F* with beta = [[1, g], [conj g, 1]]."""
    beta = np.array([[1.0, g_value], [np.conj(g_value), 1.0]], dtype=complex)
    m = F.matrix
    return HermitianPoint(m @ beta @ beta @ m.conj().T)


def area_density_cmc1(data: WeierstrassData, z: complex) -> float:
    """Signed area density (1 - |g|^2)(1 + |g|^2) |omega_hat|^2."""
    g = data.g_jet(z, 0).value
    w = data.omega_jet(z, 0).value
    a2 = abs(g) ** 2
    return (1.0 - a2) * (1.0 + a2) * abs(w) ** 2


def classify_point_cmc1(data: WeierstrassData, p: complex,
                        tolerances: Tolerances = DEFAULT_TOLERANCES,
                        eps_ode: Optional[float] = None) -> Classification:
    """Same decision tree as the maxface classifier; diagnostics carry the
    det drift of the locally integrated frame."""
    base = classify_point(data, p, tolerances)
    frame = integrate_lift(data, p, eps_ode or tolerances.eps_ode)
    extra = dict(base.extra)
    extra["det_drift"] = frame.det_drift
    return Classification(base.tag, base.alpha, base.second_test,
                          base.g_abs_minus_1, base.g_prime_abs,
                          base.tolerance, extra)


def _section_matrix(g: complex, zeta: complex) -> np.ndarray:
    """Coefficient matrix T of the limiting-tangent-bundle section X = F T F*."""
    diag = np.conj(zeta) * g + zeta * np.conj(g)
    off = abs(g) ** 2 + 1.0
    return np.array([[diag, zeta * off], [np.conj(zeta) * off, diag]],
                    dtype=complex)


def psi_tilde(data: WeierstrassData, p: complex,
              zeta: Optional[complex] = None,
              tolerances: Tolerances = DEFAULT_TOLERANCES,
              fd_step: Optional[float] = None) -> tuple:
    """(closed_form, numeric) values of psi-tilde = <nu, D_eta X> at p.

    Closed form: 2 Re(g'/(g^2 omega_hat)) Im(conj(zeta) g).  The numeric
    value differentiates X = F T F* along the null direction
    eta = i/(g omega_hat) d/dz - conj d/dzbar by central differences of
    locally integrated frames.  Default zeta = i g(p), which is always
    transversal on the singular set.
    """
    jg = data.g_jet(p, 1)
    g_p = jg.value
    if abs(abs(g_p) - 1.0) >= tolerances.eps_curve:
        raise PreconditionError(f"point {p} is not singular")
    if zeta is None:
        zeta = 1j * g_p
    trans = (np.conj(zeta) * g_p).imag
    if abs(trans) <= tolerances.eps_zero * max(1.0, abs(zeta)):
        raise TransversalityError(
            f"section with zeta={zeta} is tangent to the surface at {p}")

    alpha = alpha_jet(data, p).value
    closed_form = 2.0 * alpha.real * trans

    omega_p = data.omega_jet(p, 0).value
    eta_c = 1j / (g_p * omega_p)          # null direction as a complex number
    h = (fd_step or 1e-4) * max(1.0, abs(p))

    F_p = integrate_lift(data, p, tolerances.eps_ode)

    def section_at(z: complex) -> np.ndarray:
        frame = integrate_lift(data, z, tolerances.eps_ode,
                               start=p, frame=F_p.matrix)
        g_z = data.g_jet(z, 0).value
        m = frame.matrix
        return m @ _section_matrix(g_z, zeta) @ m.conj().T

    du = (section_at(p + h) - section_at(p - h)) / (2.0 * h)
    dv = (section_at(p + 1j * h) - section_at(p - 1j * h)) / (2.0 * h)
    DX = HermitianPoint(eta_c.real * du + eta_c.imag * dv)
    # Admissible lifts are defined up to positive rescaling; use the
    # half-normalized one F beta F* (= nu/2 on the singular set, since
    # beta^2 = 2 beta when |g| = 1) so that the pairing reproduces the
    # closed form above.
    beta = np.array([[1.0, g_p], [np.conj(g_p), 1.0]], dtype=complex)
    m = F_p.matrix
    lift = HermitianPoint(m @ beta @ m.conj().T)
    numeric = minkowski_inner(lift, DX)
    return closed_form, numeric
