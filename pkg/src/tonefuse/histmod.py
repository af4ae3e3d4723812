"""Histogram-modification targets and the tone curves derived from them.

Instead of equalizing the measured histogram directly, the target
histogram is a convex blend of the input histogram, the uniform
distribution, and (optionally) the previous frame's target.  Both blends
are the closed-form minimizers of quadratic objectives of the form

    |h - e|^2 + a*|h - u|^2 (+ b*|h - h_prev|^2)

obtained by setting the gradient to zero, so they can be checked against
a numeric minimizer.  The tone curve is then the scaled cumulative sum of
the target: with weight 0 this reduces to classic histogram equalization,
and as the uniform weight grows the curve approaches the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    InputError,
    uniform_histogram,
    validate_histogram,
)


@dataclass(frozen=True)
class HistogramTarget:
    """A desired histogram plus the weights that produced it."""

    histogram: np.ndarray
    uniform_weight: float
    temporal_weight: float = 0.0


def modified_histogram(e: np.ndarray, uniform_weight: float) -> HistogramTarget:
    """Blend the input histogram toward uniform.

    Returns the minimizer of ``|h - e|^2 + w*|h - u|^2``:
    ``h = (e + w*u) / (1 + w)``.
    """
    e = validate_histogram(e)
    if uniform_weight < 0:
        raise InputError("uniform_weight must be >= 0")
    h = (e + uniform_weight * uniform_histogram()) / (1.0 + uniform_weight)
    return HistogramTarget(h, uniform_weight)


def temporal_modified_histogram(
    e: np.ndarray,
    h_prev: np.ndarray,
    uniform_weight: float,
    temporal_weight: float,
) -> HistogramTarget:
    """Blend the input histogram toward uniform and the previous target.

    Minimizes ``|h - e|^2 + w*|h - u|^2 + g*|h - h_prev|^2`` in closed
    form: ``h = (e + w*u + g*h_prev) / (1 + w + g)``.
    """
    e = validate_histogram(e)
    h_prev = validate_histogram(h_prev)
    if uniform_weight < 0 or temporal_weight < 0:
        raise InputError("weights must be >= 0")
    total = 1.0 + uniform_weight + temporal_weight
    h = (e + uniform_weight * uniform_histogram() + temporal_weight * h_prev) / total
    return HistogramTarget(h, uniform_weight, temporal_weight)


def tone_curve_from_histogram(h: np.ndarray) -> np.ndarray:
    """Tone curve that equalizes an image whose histogram is ``h``.

    ``lut[x] = 255 * sum(h[0..x])`` -- non-decreasing by construction and
    exactly 255 at the top level for a normalized input.
    """
    h = validate_histogram(h)
    return 255.0 * np.cumsum(h)
