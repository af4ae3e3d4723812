"""Region-of-interest statistics, overlap measurement, and pooling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LUMA_WEIGHTS, InputError, RoiBox, validate_frame

# Stands in for an unbounded overlap ratio when a region has zero spread.
SIGMA_SENTINEL = 1e9


@dataclass(frozen=True)
class RoiStats:
    """Per-channel population mean and stddev of one region."""

    mean: np.ndarray  # (3,)
    std: np.ndarray  # (3,)
    pixel_count: int
    label: str = ""

    @property
    def luminance_mean(self) -> float:
        return float(self.mean @ LUMA_WEIGHTS)


@dataclass(frozen=True)
class SeparabilityReport:
    """How much two regions' value bands overlap, per channel.

    ``overlap`` is the length (in gray levels) of the intersection of the
    two ``mean +/- band_sigma*std`` intervals.  ``n_a``/``n_b`` divide
    that length by the respective region's stddev; both are 0 exactly
    when the bands are disjoint.
    """

    overlap: np.ndarray  # (3,)
    n_a: np.ndarray  # (3,)
    n_b: np.ndarray  # (3,)


def roi_stats(frame: np.ndarray, box: RoiBox) -> RoiStats:
    """Population mean/stddev of each channel inside the box."""
    frame = validate_frame(frame)
    box.validate_in(frame.shape[1], frame.shape[0])
    ys, xs = box.slices()
    patch = frame[ys, xs].astype(np.float64)
    return RoiStats(
        mean=patch.mean(axis=(0, 1)),
        std=patch.std(axis=(0, 1)),
        pixel_count=patch.shape[0] * patch.shape[1],
        label=box.label,
    )


def _overlap_ratio(overlap: np.ndarray, std: np.ndarray) -> np.ndarray:
    ratio = np.empty_like(overlap)
    positive = std > 0
    ratio[positive] = overlap[positive] / std[positive]
    # Zero-spread region: no overlap means separable, any overlap cannot
    # anchor a piecewise split, so force the factor branch downstream.
    degenerate = ~positive
    ratio[degenerate] = np.where(overlap[degenerate] == 0, 0.0, SIGMA_SENTINEL)
    return ratio


def separability(a: RoiStats, b: RoiStats, band_sigma: float = 3.0) -> SeparabilityReport:
    """Band-overlap report for two regions at the given sigma multiplier."""
    lo = np.maximum(a.mean - band_sigma * a.std, b.mean - band_sigma * b.std)
    hi = np.minimum(a.mean + band_sigma * a.std, b.mean + band_sigma * b.std)
    overlap = np.clip(hi - lo, 0.0, None)
    return SeparabilityReport(
        overlap=overlap,
        n_a=_overlap_ratio(overlap, a.std),
        n_b=_overlap_ratio(overlap, b.std),
    )


def pool_stats(a: RoiStats, b: RoiStats) -> RoiStats:
    """Exact two-sample pooling of mean and variance.

    For disjoint regions the result equals ``roi_stats`` computed over
    their union.
    """
    if a.pixel_count <= 0 or b.pixel_count <= 0:
        raise InputError("pooled regions must have positive pixel counts")
    na, nb = a.pixel_count, b.pixel_count
    total = na + nb
    mean = (na * a.mean + nb * b.mean) / total
    raw_second = na * (a.std**2 + a.mean**2) + nb * (b.std**2 + b.mean**2)
    var = np.clip(raw_second / total - mean**2, 0.0, None)
    label = f"{a.label}+{b.label}" if a.label or b.label else ""
    return RoiStats(mean=mean, std=np.sqrt(var), pixel_count=total, label=label)
