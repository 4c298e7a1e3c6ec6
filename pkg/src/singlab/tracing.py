"""Implicit-curve detection and continuation in the complex plane.

Works on a real scalar field G(z) with an analytically supplied gradient
(as the complex number Gu + i*Gv).  Seeds come from sign changes on a
grid; each seed is Newton-refined onto {G = 0} and continued with a
predictor-corrector scheme whose tangent is the gradient rotated by 90
degrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np


class ContinuationError(Exception):
    """Newton correction failed to converge during continuation."""


class DegenerateSeedError(Exception):
    """Gradient vanished at a requested seed."""


@dataclass(frozen=True)
class Rectangle:
    u_min: float
    u_max: float
    v_min: float
    v_max: float

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (self.u_min - margin <= z.real <= self.u_max + margin
                and self.v_min - margin <= z.imag <= self.v_max + margin)

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.u_max - self.u_min, self.v_max - self.v_min))


# A field returns (value, gradient) at z; gradient is Gu + i*Gv.
Field = Callable[[complex], Tuple[float, complex]]

NEWTON_MAX_ITER = 25


def newton_refine(field: Field, z: complex, tol: float,
                  max_iter: int = NEWTON_MAX_ITER) -> complex:
    """Project z onto {G=0} by Newton steps along the gradient."""
    for _ in range(max_iter):
        value, grad = field(z)
        g2 = abs(grad) ** 2
        if g2 == 0.0:
            raise DegenerateSeedError(f"vanishing gradient at {z}")
        if abs(value) <= tol * max(1.0, abs(grad)):
            return z
        z = z - value * grad / g2
    value, grad = field(z)
    if abs(value) <= tol * max(1.0, abs(grad)):
        return z
    raise ContinuationError(
        f"Newton failed to converge near {z} after {max_iter} iterations")


def unit_tangent(field: Field, z: complex) -> complex:
    _, grad = field(z)
    if grad == 0:
        raise DegenerateSeedError(f"vanishing gradient at {z}")
    return 1j * grad / abs(grad)


@dataclass
class TracedPolyline:
    points: List[complex]
    closed: bool


def _march_seeds(field: Field, rect: Rectangle, nu: int, nv: int) -> List[complex]:
    """Midpoints of grid edges where the field changes sign."""
    us = np.linspace(rect.u_min, rect.u_max, nu)
    vs = np.linspace(rect.v_min, rect.v_max, nv)
    values = np.empty((nv, nu))
    for j, v in enumerate(vs):
        for i, u in enumerate(us):
            values[j, i] = field(complex(u, v))[0]
    seeds: List[complex] = []
    sign = np.signbit(values)
    # Horizontal edges.
    change_h = sign[:, :-1] != sign[:, 1:]
    for j, i in zip(*np.nonzero(change_h)):
        a, b = values[j, i], values[j, i + 1]
        t = a / (a - b) if a != b else 0.5
        seeds.append(complex(us[i] + t * (us[i + 1] - us[i]), vs[j]))
    # Vertical edges.
    change_v = sign[:-1, :] != sign[1:, :]
    for j, i in zip(*np.nonzero(change_v)):
        a, b = values[j, i], values[j + 1, i]
        t = a / (a - b) if a != b else 0.5
        seeds.append(complex(us[i], vs[j] + t * (vs[j + 1] - vs[j])))
    return seeds


def _continue_from(field: Field, rect: Rectangle, z0: complex,
                   direction: complex, step_fn: Callable[[complex], float],
                   tol: float, max_nodes: int) -> Tuple[List[complex], bool]:
    """Trace in one direction; returns (nodes beyond z0, hit_start_flag)."""
    nodes: List[complex] = []
    z = z0
    tangent = direction
    for _ in range(max_nodes):
        dt = step_fn(z)
        z_pred = z + dt * tangent
        if not rect.contains(z_pred):
            break
        z_new = newton_refine(field, z_pred, tol)
        t_new = unit_tangent(field, z_new)
        if (t_new.real * tangent.real + t_new.imag * tangent.imag) < 0:
            t_new = -t_new
        if len(nodes) > 3 and abs(z_new - z0) < 0.75 * dt:
            return nodes, True
        nodes.append(z_new)
        z, tangent = z_new, t_new
    return nodes, False


def trace_level_set(field: Field, rect: Rectangle, nu: int, nv: int,
                    step_fn: Callable[[complex], float], tol: float,
                    max_nodes: int = 100_000) -> List[TracedPolyline]:
    """All connected components of {G=0} in rect detected at grid resolution."""
    raw_seeds = _march_seeds(field, rect, nu, nv)
    curves: List[TracedPolyline] = []
    refined: List[complex] = []
    for seed in raw_seeds:
        try:
            refined.append(newton_refine(field, seed, tol))
        except (ContinuationError, DegenerateSeedError):
            continue

    def covered(z: complex) -> bool:
        clearance = 1.5 * step_fn(z)
        for curve in curves:
            for p in curve.points:
                if abs(p - z) < clearance:
                    return True
        return False

    for seed in refined:
        if not rect.contains(seed, margin=1e-12) or covered(seed):
            continue
        tangent = unit_tangent(field, seed)
        forward, closed = _continue_from(field, rect, seed, tangent,
                                         step_fn, tol, max_nodes)
        points = [seed] + forward
        if not closed:
            backward, closed_back = _continue_from(field, rect, seed, -tangent,
                                                   step_fn, tol, max_nodes)
            points = list(reversed(backward)) + points
            closed = closed_back
        curves.append(TracedPolyline(points=points, closed=closed))
    return curves


def refine_between(field: Field, z1: complex, z2: complex, s: float,
                   tol: float) -> complex:
    """Point on the level set obtained by refining the chord interpolant."""
    return newton_refine(field, z1 + s * (z2 - z1), tol)
