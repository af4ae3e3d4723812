"""Objective quality metrics over frame sequences.

All metrics work on the rounded Rec.601 luminance plane:

* ``H`` -- mean per-frame histogram entropy (higher = richer frame);
* ``TAMBE_mu`` -- mean absolute difference of consecutive frame means;
* ``TAMBE_sigma`` -- mean population stddev of consecutive signed
  difference images;
* ``HIBTE`` -- mean of one minus the histogram intersection of
  consecutive frames.

The three temporal metrics are 0 for a perfectly steady sequence and
invariant to reversing it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import InputError, luminance_histogram, luminance_plane, validate_frame
from .temporal import entropy


@dataclass(frozen=True)
class SequenceReport:
    H: float
    TAMBE_mu: float
    TAMBE_sigma: float
    HIBTE: float
    frame_count: int

    def to_dict(self) -> dict:
        return {
            "H": self.H,
            "TAMBE_mu": self.TAMBE_mu,
            "TAMBE_sigma": self.TAMBE_sigma,
            "HIBTE": self.HIBTE,
            "frame_count": self.frame_count,
        }

    def text_block(self) -> str:
        return "\n".join(f"{key}={value}" for key, value in self.to_dict().items())

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _check_sequence(frames, minimum: int) -> list[np.ndarray]:
    frames = [validate_frame(f) for f in frames]
    if len(frames) < minimum:
        raise InputError(f"need at least {minimum} frame(s), got {len(frames)}")
    shape = frames[0].shape
    for i, f in enumerate(frames):
        if f.shape != shape:
            raise InputError(f"frame {i} has shape {f.shape}, expected {shape}")
    return frames


def metric_H(frames, base: float = 2.0) -> float:
    """Mean entropy of the per-frame luminance histograms."""
    frames = _check_sequence(frames, 1)
    return float(np.mean([entropy(luminance_histogram(f), base) for f in frames]))


def metric_TAMBE(frames) -> tuple[float, float]:
    """Temporal brightness error: (mean |delta mean|, mean stddev of diff images)."""
    frames = _check_sequence(frames, 2)
    planes = [luminance_plane(f).astype(np.float64) for f in frames]
    mu_terms = []
    sigma_terms = []
    for prev, cur in zip(planes, planes[1:]):
        diff = cur - prev
        mu_terms.append(abs(cur.mean() - prev.mean()))
        sigma_terms.append(diff.std())
    return float(np.mean(mu_terms)), float(np.mean(sigma_terms))


def metric_HIBTE(frames) -> float:
    """Mean of 1 - histogram intersection over consecutive luminance histograms."""
    frames = _check_sequence(frames, 2)
    hists = [luminance_histogram(f) for f in frames]
    terms = [1.0 - np.minimum(a, b).sum() for a, b in zip(hists, hists[1:])]
    return float(np.mean(terms))


def report(frames, base: float = 2.0) -> SequenceReport:
    """Bundle all metrics; single-frame sequences get temporal metrics of 0."""
    frames = _check_sequence(frames, 1)
    h = metric_H(frames, base)
    if len(frames) < 2:
        return SequenceReport(h, 0.0, 0.0, 0.0, 1)
    mu, sigma = metric_TAMBE(frames)
    return SequenceReport(h, mu, sigma, metric_HIBTE(frames), len(frames))
