"""Top-level acceptance checks, one per shipped guarantee.

Each test prints a single pass/fail line with the tolerance it enforced.
"""

import cmath
import functools
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from singlab.classification import Tag
from singlab.cmc1 import classify_point_cmc1, integrate_lift, psi_tilde
from singlab.expr import ComplexJet, eval_jet, parse
from singlab.frontal import (FrontalMap, classify, curvature_profile,
                             curve_jets_from_expressions, null_direction,
                             preset, tangent_developable, trace_singular_curve)
from singlab.genericity import Jet2Point, jacobian_check, perturb_and_classify
from singlab.tracing import Rectangle
from singlab.weierstrass import (WeierstrassData, classify_point, conjugate,
                                 euclidean_normal, integrate_path,
                                 refine_to_locus, singular_locus,
                                 special_points)

SQUARE = Rectangle(-2.0, 2.0, -2.0, 2.0)
SWAP = {Tag.SWALLOWTAIL: Tag.CUSPIDAL_CROSS_CAP,
        Tag.CUSPIDAL_CROSS_CAP: Tag.SWALLOWTAIL,
        Tag.CUSPIDAL_EDGE: Tag.CUSPIDAL_EDGE}


def enneper() -> WeierstrassData:
    return WeierstrassData(g=parse("z"), omega_hat=parse("1"),
                           base_point=0j, domain=SQUARE)


@contextmanager
def criterion(n: int, line: str):
    try:
        yield
    except Exception:
        print(f"[acceptance {n}] FAIL: {line}")
        raise
    print(f"[acceptance {n}] PASS: {line}")


def test_criterion_1_enneper_census():
    with criterion(1, "Enneper census: circle within 1e-8, 4 SW + 4 CCR "
                      "within 1e-6, >= 64 extra CE samples, under 10 s"):
        start = time.perf_counter()
        data = enneper()
        curves = singular_locus(data, grid=(32, 32))
        assert len(curves) == 1 and curves[0].closed
        assert max(abs(abs(pt.z) - 1.0) for pt in curves[0].points) < 1e-8

        specials = special_points(data, curves[0])
        sw = [pt.z for pt in specials
              if pt.classification.tag == Tag.SWALLOWTAIL]
        ccr = [pt.z for pt in specials
               if pt.classification.tag == Tag.CUSPIDAL_CROSS_CAP]
        assert len(sw) == 4 and len(ccr) == 4
        want_sw = [1, 1j, -1, -1j]
        want_ccr = [cmath.exp(1j * t) for t in
                    (math.pi / 4, 3 * math.pi / 4, -3 * math.pi / 4,
                     -math.pi / 4)]
        for want in want_sw:
            assert min(abs(z - want) for z in sw) < 1e-6
        for want in want_ccr:
            assert min(abs(z - want) for z in ccr) < 1e-6

        checked = 0
        for k in range(72):
            t = 2 * math.pi * (k + 0.5) / 72.0
            if min(abs(t - m * math.pi / 4) for m in range(9)) < 0.02:
                continue
            z = refine_to_locus(data, 1.02 * cmath.exp(1j * t))
            assert classify_point(data, z).tag == Tag.CUSPIDAL_EDGE
            checked += 1
        assert checked >= 64
        assert time.perf_counter() - start < 10.0


def test_criterion_2_duality():
    with criterion(2, "duality: conjugation swaps SW/CCR and fixes CE with "
                      "zero violations, maxface and cmc1 classifiers"):
        data = enneper()
        dual = conjugate(data)
        curve = singular_locus(data, grid=(32, 32))[0]
        points = list(curve.points) + special_points(data, curve)
        assert len(points) >= 20
        for pt in points:
            t1 = pt.classification.tag
            assert classify_point(dual, pt.z).tag == SWAP[t1]
            assert classify_point_cmc1(data, pt.z).tag == t1
            assert classify_point_cmc1(dual, pt.z).tag == SWAP[t1]


def test_criterion_3_normal_form_ccr():
    with criterion(3, "normal forms: f_CCR tags CuspidalCrossCap with "
                      "psi(0) = 0 (1e-6) and psi'(0) = -3/2 (1e-3); "
                      "f_C CuspidalEdge; f_S Swallowtail"):
        r = classify(preset("cuspidal-cross-cap"), (0.0, 0.0))
        assert r.tag == Tag.CUSPIDAL_CROSS_CAP
        assert abs(r.psi0) < 1e-6
        assert abs(r.psi1 - (-1.5)) < 1e-3
        assert classify(preset("cuspidal-edge"), (0.0, 0.2)).tag \
            == Tag.CUSPIDAL_EDGE
        assert classify(preset("swallowtail"), (0.0, 0.0), step=0.01).tag \
            == Tag.SWALLOWTAIL


def test_criterion_4_tangent_developable():
    with criterion(4, "tangent developable of (t, t^2, t^4): tau(0) = 0 "
                      "(1e-9), tau'(0) = 12 (1e-6), CuspidalCrossCap at "
                      "origin, K = 0 (1e-8), H = tau/(2 u kappa) (1e-5 rel)"):
        td = preset("tangent-developable")
        assert abs(td.tau(0.0)) < 1e-9
        assert abs(td.tau_prime(0.0) - 12.0) < 1e-6
        assert classify(td.frontal, (0.0, 0.0), step=0.01,
                        eps_zero=1e-6).tag == Tag.CUSPIDAL_CROSS_CAP

        helix = tangent_developable(
            curve_jets_from_expressions(("cos(z)", "sin(z)", "z")),
            Rectangle(-1, 1, -1, 1))
        curve = trace_singular_curve(helix.frontal, (0.3, 0.01), step=0.05)
        offsets = [1e-2, 0.1]
        rows = curvature_profile(helix.frontal, curve, offsets)
        k = 0
        for i, (t, u) in enumerate(curve.nodes):
            for s in offsets:
                row = rows[k]
                k += 1
                assert row.ok and abs(row.K) < 1e-8
                t_off = t + s * curve.etas[i][0]
                u_off = u + s * curve.etas[i][1]
                want = helix.tau(t_off) / (2.0 * u_off * helix.kappa(t_off))
                assert abs(row.H - want) <= 1e-5 * abs(want)


def test_criterion_5_cmc1_conservation_and_agreement():
    with criterion(5, "cmc1: det drift < 1e-9 over 20 lifts at eps_ode 1e-10; "
                      "psi-tilde closed form = finite differences (1e-5 rel) "
                      "at 20 singular points; tags agree at 40 samples"):
        data = enneper()
        rng = np.random.default_rng(12)
        for _ in range(20):
            target = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            assert integrate_lift(data, target, 1e-10).det_drift < 1e-9
        for k in range(20):
            p = cmath.exp(1j * (2 * math.pi * k / 20.0 + 0.05))
            closed, numeric = psi_tilde(data, p)
            assert abs(numeric - closed) <= 1e-5 * max(1.0, abs(closed))
        for k in range(40):
            p = cmath.exp(1j * (2 * math.pi * k / 40.0))
            assert classify_point_cmc1(data, p).tag \
                == classify_point(data, p).tag


def test_criterion_6_jet_space_jacobians():
    with criterion(6, "jet-space Jacobians: closed forms match "
                      "central-difference determinants within 1e-6 relative "
                      "on 100 random jets with |h1| > 0.1"):
        rng = np.random.default_rng(20260823)
        checked = 0
        while checked < 100:
            c = rng.uniform(-1, 1, size=8)
            P = Jet2Point(complex(c[0], c[1]), complex(c[2], c[3]),
                          complex(c[4], c[5]), complex(c[6], c[7]))
            if abs(P.h1) <= 0.1:
                continue
            out = jacobian_check(P)
            for name in ("B", "C"):
                closed = out[f"closed_form_{name}"]
                numeric = out[f"numeric_{name}"]
                assert abs(closed - numeric) <= 1e-6 * max(1.0, abs(closed))
            checked += 1


def test_criterion_7_genericity_probe():
    with criterion(7, "genericity probe on h = z + z^2/2: >= 95% generic "
                      "trials at magnitude 1e-3 and 100% degenerate at "
                      "magnitude 0, 100 seeded trials each"):
        window = Rectangle(-0.5, 0.5, -0.5, 0.5)
        rep = perturb_and_classify("z + z^2/2", 1e-3, 100, 2026, window)
        assert rep.failures == 0
        assert rep.generic_fraction >= 0.95
        rep0 = perturb_and_classify("z + z^2/2", 0.0, 100, 2026, window)
        assert rep0.failures == 0
        assert all(t.degenerate_count > 0 for t in rep0.per_trial)


def test_criterion_8_cross_pipeline_oracle():
    with criterion(8, "cross-pipeline oracle: numeric frontal classifier on "
                      "the quadrature-sampled Enneper surface reproduces the "
                      "closed-form tags at all 8 exceptional points (plus 4 "
                      "generic controls)"):
        data = enneper()

        @functools.lru_cache(maxsize=None)
        def f_cached(u, v):
            return tuple(integrate_path(data, [0j, complex(u, v)], 1e-9))

        F = FrontalMap(
            f=lambda u, v: np.array(f_cached(u, v)),
            nu=lambda u, v: euclidean_normal(data, complex(u, v)),
            domain=SQUARE, fd_step=1e-4)
        points = [cmath.exp(1j * k * math.pi / 4) for k in range(8)]
        points += [cmath.exp(1j * (k * math.pi / 2 + 0.4)) for k in range(4)]
        for p in points:
            report = classify(F, (p.real, p.imag),
                              eps_zero=1e-4, newton_tol=1e-9)
            assert report.tag == classify_point(data, p).tag, \
                f"pipelines disagree at {p}"


def test_criterion_9_invariant_suites():
    with criterion(9, "invariant spot-checks green (jet homomorphism, path "
                      "independence, lift determinant, normal orthogonality, "
                      "null direction); full-suite budget enforced by CI "
                      "timing"):
        rng = np.random.default_rng(77)
        # Jet multiplication is the Cauchy product.
        for _ in range(20):
            a = tuple(complex(x, y) for x, y in rng.uniform(-2, 2, (4, 2)))
            b = tuple(complex(x, y) for x, y in rng.uniform(-2, 2, (4, 2)))
            prod = (ComplexJet(0j, 3, a) * ComplexJet(0j, 3, b)).coeffs
            for k in range(4):
                want = sum(a[i] * b[k - i] for i in range(k + 1))
                assert abs(prod[k] - want) <= 1e-12 * max(1.0, abs(want))
        # Contour integration is path independent.
        data = enneper()
        direct = integrate_path(data, [0j, 1j])
        detour = integrate_path(data, [0j, 1.3 - 0.4j, 1j])
        assert np.max(np.abs(direct - detour)) < 1e-8
        # The lift conserves its determinant.
        assert integrate_lift(data, 1.1 + 0.7j, 1e-10).det_drift < 1e-9
        # The Euclidean normal is unit and orthogonal to the surface.
        h = 1e-5
        for z in (0.4 + 0.2j, -1.1 + 0.6j):
            nu = euclidean_normal(data, z)
            assert abs(np.linalg.norm(nu) - 1.0) < 1e-12
            fu = (integrate_path(data, [0j, z + h])
                  - integrate_path(data, [0j, z - h])) / (2 * h)
            assert abs(nu @ fu) < 1e-8
        # The null direction is in the kernel of df on the singular set.
        F = preset("cuspidal-cross-cap")
        eta = null_direction(F, 0.3, 0.0)
        assert np.linalg.norm(F.jacobian(0.3, 0.0) @ eta) < 1e-9
