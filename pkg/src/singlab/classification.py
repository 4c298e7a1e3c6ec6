"""Singular-point tags and the alpha-based decision trees.

The same decision logic is shared by the Weierstrass-data classifier,
the de Sitter classifier and the jet-space classifier.  Every strict
sign test is a zero-band test: a tested real quantity q counts as zero
iff |q| <= eps_zero * s, with s a local scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class Tag(str, Enum):
    CUSPIDAL_EDGE = "CuspidalEdge"
    SWALLOWTAIL = "Swallowtail"
    CUSPIDAL_CROSS_CAP = "CuspidalCrossCap"
    DEGENERATE_POINT = "DegeneratePoint"
    NON_FRONT_OTHER = "NonFrontOther"
    INDETERMINATE = "Indeterminate"


DEFAULT_EPS_ZERO = 1e-8


@dataclass(frozen=True)
class Classification:
    """Tag plus the diagnostic scalars that produced it."""

    tag: Tag
    alpha: complex
    second_test: float
    g_abs_minus_1: float
    g_prime_abs: float
    tolerance: float
    extra: dict = field(default_factory=dict)


def classify_alpha(alpha: complex,
                   second: complex,
                   *,
                   g_prime_abs: float,
                   g_abs_minus_1: float = 0.0,
                   eps_zero: float = DEFAULT_EPS_ZERO,
                   extra: dict | None = None) -> Classification:
    """Decision tree on alpha = g'/(g^2 omega_hat) and second = (g/g') alpha'.

    Branches: both parts of alpha nonzero -> cuspidal edge; alpha real ->
    swallowtail iff Re(second) nonzero; alpha imaginary -> cuspidal cross
    cap iff Im(second) nonzero.  A vanishing second-order test is a
    degenerate point; alpha inside the band on both parts with g' not
    small is reported indeterminate.
    """
    scale = max(1.0, abs(alpha), abs(second))
    band = eps_zero * scale

    def make(tag: Tag, second_test: float) -> Classification:
        return Classification(tag, alpha, second_test, g_abs_minus_1,
                              g_prime_abs, band, dict(extra or {}))

    if g_prime_abs <= band:
        return make(Tag.DEGENERATE_POINT, second.real)

    re_zero = abs(alpha.real) <= band
    im_zero = abs(alpha.imag) <= band
    if not re_zero and not im_zero:
        return make(Tag.CUSPIDAL_EDGE, second.real)
    if im_zero and not re_zero:
        t = second.real
        return make(Tag.SWALLOWTAIL if abs(t) > band else Tag.DEGENERATE_POINT, t)
    if re_zero and not im_zero:
        t = second.imag
        return make(Tag.CUSPIDAL_CROSS_CAP if abs(t) > band
                    else Tag.DEGENERATE_POINT, t)
    # alpha inside the band on both parts but g' not small: cannot
    # assert any strict-sign condition.
    return make(Tag.INDETERMINATE, second.real)


def classify_alpha_beta(alpha: complex,
                        beta: complex,
                        *,
                        eps_zero: float = DEFAULT_EPS_ZERO,
                        extra: dict | None = None) -> Classification:
    """Decision tree in the exp-h form: alpha = e^{-h} h',
    beta = e^{-2h} (h'' - h'^2).  Non-degenerate iff alpha != 0; the
    second-order test for both swallowtails and cuspidal cross caps is
    Re(beta).
    """
    scale = max(1.0, abs(alpha), abs(beta))
    band = eps_zero * scale

    def make(tag: Tag) -> Classification:
        # |g'| = |alpha| on the singular set for data (e^h, 1).
        return Classification(tag, alpha, beta.real, 0.0, abs(alpha), band,
                              dict(extra or {}))

    re_zero = abs(alpha.real) <= band
    im_zero = abs(alpha.imag) <= band
    if re_zero and im_zero:
        return make(Tag.DEGENERATE_POINT)
    if not re_zero and not im_zero:
        return make(Tag.CUSPIDAL_EDGE)
    beta_nonzero = abs(beta.real) > band
    if im_zero:
        return make(Tag.SWALLOWTAIL if beta_nonzero else Tag.DEGENERATE_POINT)
    return make(Tag.CUSPIDAL_CROSS_CAP if beta_nonzero else Tag.DEGENERATE_POINT)


def is_zero_band(value: float, scale: float = 1.0,
                 eps_zero: float = DEFAULT_EPS_ZERO) -> bool:
    return abs(value) <= eps_zero * max(1.0, scale)


def tag_histogram(classifications) -> dict:
    hist: dict = {}
    for c in classifications:
        tag = c.tag.value if isinstance(c, Classification) else Tag(c).value
        hist[tag] = hist.get(tag, 0) + 1
    return hist


def isfinite_complex(value: complex) -> bool:
    return math.isfinite(value.real) and math.isfinite(value.imag)
