"""Shared value types and pixel-level primitives.

Conventions used throughout the package:

* a *frame* is an ``(H, W, 3)`` uint8 array, channels in R, G, B order;
* a *histogram* is a length-256 float array; "normalized" means it sums
  to 1 within 1e-9;
* a *tone curve* is a length-256 float LUT mapping input level to output
  level, non-decreasing, with every entry in [0, 255].  Curves stay
  real-valued until they are applied to pixels, where values are rounded
  half away from zero exactly once;
* a *curve set* is a ``(3, 256)`` array holding one tone curve per channel.

Luminance uses fixed Rec.601 weights so every temporal/entropy statistic
in the package is reproducible from the same scalar plane.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

import numpy as np

LEVELS = 256
MAX_LEVEL = 255
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])
HIST_SUM_TOL = 1e-9

_CHANNEL_INDEX = {"R": 0, "G": 1, "B": 2, "r": 0, "g": 1, "b": 2, 0: 0, 1: 1, 2: 2}


class ToneFuseError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ToneFuseError, ValueError):
    """An argument violates a documented precondition."""


class BoundsError(InputError):
    """A region or index falls outside the frame."""


class CurveError(ToneFuseError, ValueError):
    """A tone curve violates its invariants or cannot be constructed."""


class StateError(ToneFuseError, RuntimeError):
    """A stateful operation was called out of sequence."""


class FrameIOError(ToneFuseError):
    """Frame sequence could not be read or written."""


class SidecarError(ToneFuseError):
    """ROI sidecar file is malformed or inconsistent with the frames."""


class ConfigError(ToneFuseError):
    """Configuration file or override is invalid."""


def channel_index(channel) -> int:
    try:
        return _CHANNEL_INDEX[channel]
    except KeyError:
        raise InputError(f"unknown channel {channel!r}; expected R, G, B or 0-2") from None


@dataclass(frozen=True)
class RoiBox:
    """Axis-aligned region of interest, in pixel coordinates.

    ``(x0, y0)`` is the top-left corner; ``w`` and ``h`` are extents and
    must be at least 1.  The box must lie fully inside the frame it is
    applied to.
    """

    x0: int
    y0: int
    w: int
    h: int
    label: str = ""

    def validate_in(self, width: int, height: int) -> None:
        if self.w < 1 or self.h < 1:
            raise BoundsError(f"box {self} has non-positive extent")
        if self.x0 < 0 or self.y0 < 0 or self.x0 + self.w > width or self.y0 + self.h > height:
            raise BoundsError(
                f"box {self} exceeds frame bounds {width}x{height}"
            )

    def slices(self) -> tuple[slice, slice]:
        return slice(self.y0, self.y0 + self.h), slice(self.x0, self.x0 + self.w)

    def to_dict(self) -> dict:
        return {"x0": self.x0, "y0": self.y0, "w": self.w, "h": self.h, "label": self.label}


@dataclass(frozen=True)
class Params:
    """Tuning constants for the whole enhancement chain.

    Defaults are the working values used throughout the test suite; every
    field can be set from a config file or ``--set`` override.

    uniform_weight
        Pull of the histogram target toward the uniform distribution.
    temporal_weight
        Pull of the histogram target toward the previous frame's target.
    separation_threshold, separation_spread
        Decide piecewise vs factor fusion: piecewise is considered when
        ``(m_lo + spread*s_lo) - (m_hi - spread*s_hi) < threshold``.
    band_sigma
        Half-width multiplier of the "major color band" of a region
        (band = mean +/- band_sigma * stddev).
    anchor_keep
        Weight of a region's own local curve at its band-edge anchor.
    anchor_crossover
        Weight of the lower region's curve at the crossover point.
    slope_taper, slope_boost
        Crossover derivative factor, chosen by which local curve is on
        top at the crossover.
    blend_floor
        Lower bound for the temporal curve-blend weight.
    entropy_base
        Log base of all entropy computations.
    temporal_mode
        "curve" blends tone curves across frames; "histogram" re-derives
        curves from temporally constrained histogram targets.
    target_mean, target_sigma
        Output statistics a local curve steers its region toward.
    """

    uniform_weight: float = 2.0
    temporal_weight: float = 3.0
    separation_threshold: float = 50.0
    separation_spread: float = 1.0
    band_sigma: float = 3.0
    anchor_keep: float = 0.9
    anchor_crossover: float = 0.5
    slope_taper: float = 0.5
    slope_boost: float = 1.5
    blend_floor: float = 0.5
    entropy_base: float = 2.0
    temporal_mode: str = "curve"
    target_mean: float = 128.0
    target_sigma: float = 40.0

    def validate(self) -> "Params":
        if self.uniform_weight < 0 or self.temporal_weight < 0:
            raise ConfigError("uniform_weight and temporal_weight must be >= 0")
        if not (0.0 <= self.anchor_keep <= 1.0 and 0.0 <= self.anchor_crossover <= 1.0):
            raise ConfigError("anchor weights must lie in [0, 1]")
        if not (0.0 < self.blend_floor <= 1.0):
            raise ConfigError("blend_floor must lie in (0, 1]")
        if self.band_sigma <= 0 or self.separation_spread <= 0:
            raise ConfigError("band_sigma and separation_spread must be > 0")
        if self.separation_threshold < 0:
            raise ConfigError("separation_threshold must be >= 0")
        if not (0.0 < self.target_mean < 255.0):
            raise ConfigError("target_mean must lie in (0, 255)")
        if self.target_sigma <= 0:
            raise ConfigError("target_sigma must be > 0")
        if self.entropy_base <= 1.0:
            raise ConfigError("entropy_base must be > 1")
        if self.temporal_mode not in ("curve", "histogram"):
            raise ConfigError("temporal_mode must be 'curve' or 'histogram'")
        return self

    def override(self, **kwargs) -> "Params":
        return replace(self, **kwargs).validate()

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


def round_half_up(x: np.ndarray) -> np.ndarray:
    """Round half away from zero; inputs here are always non-negative."""
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5)


def validate_frame(frame: np.ndarray) -> np.ndarray:
    frame = np.asarray(frame)
    if frame.ndim != 3 or frame.shape[2] != 3:
        raise InputError(f"frame must have shape (H, W, 3), got {frame.shape}")
    if frame.shape[0] < 1 or frame.shape[1] < 1:
        raise InputError("frame must be at least 1x1")
    if frame.dtype != np.uint8:
        raise InputError(f"frame must be uint8, got dtype {frame.dtype}")
    return frame


def validate_histogram(hist: np.ndarray, normalized: bool = True) -> np.ndarray:
    hist = np.asarray(hist, dtype=np.float64)
    if hist.shape != (LEVELS,):
        raise InputError(f"histogram must have shape ({LEVELS},), got {hist.shape}")
    if np.any(hist < 0):
        raise InputError("histogram bins must be non-negative")
    if normalized and abs(hist.sum() - 1.0) > HIST_SUM_TOL:
        raise InputError(f"histogram must sum to 1 within {HIST_SUM_TOL}, got {hist.sum()!r}")
    return hist


def validate_curve(lut: np.ndarray) -> np.ndarray:
    lut = np.asarray(lut, dtype=np.float64)
    if lut.shape != (LEVELS,):
        raise CurveError(f"tone curve must have shape ({LEVELS},), got {lut.shape}")
    if np.any(np.diff(lut) < -1e-9):
        raise CurveError("tone curve must be non-decreasing")
    if lut[0] < -1e-9 or lut[-1] > 255.0 + 1e-9:
        raise CurveError("tone curve values must lie in [0, 255]")
    return lut


def validate_curves(curves: np.ndarray) -> np.ndarray:
    curves = np.asarray(curves, dtype=np.float64)
    if curves.shape != (3, LEVELS):
        raise CurveError(f"curve set must have shape (3, {LEVELS}), got {curves.shape}")
    for lut in curves:
        validate_curve(lut)
    return curves


def uniform_histogram() -> np.ndarray:
    return np.full(LEVELS, 1.0 / LEVELS)


def identity_curve() -> np.ndarray:
    return np.arange(LEVELS, dtype=np.float64)


def identity_curves() -> np.ndarray:
    return np.tile(identity_curve(), (3, 1))


def compute_histogram(frame: np.ndarray, channel, region: RoiBox | None = None) -> np.ndarray:
    """Normalized 256-bin histogram of one channel, optionally over a region."""
    frame = validate_frame(frame)
    ch = channel_index(channel)
    if region is not None:
        region.validate_in(frame.shape[1], frame.shape[0])
        ys, xs = region.slices()
        samples = frame[ys, xs, ch]
    else:
        samples = frame[..., ch]
    counts = np.bincount(samples.ravel(), minlength=LEVELS).astype(np.float64)
    return counts / samples.size


def apply_curves(frame: np.ndarray, curves: np.ndarray) -> np.ndarray:
    """Apply one tone curve per channel; quantizes half away from zero.

    Accepts any monotone LUT (non-decreasing or, e.g. for negation,
    non-increasing); curves that wiggle are rejected.  Curves produced
    by the enhancement chain are always non-decreasing.
    """
    frame = validate_frame(frame)
    curves = np.asarray(curves, dtype=np.float64)
    if curves.shape != (3, LEVELS):
        raise CurveError(f"curve set must have shape (3, {LEVELS}), got {curves.shape}")
    out = np.empty_like(frame)
    for ch in range(3):
        lut = curves[ch]
        diffs = np.diff(lut)
        if not (np.all(diffs >= -1e-9) or np.all(diffs <= 1e-9)):
            raise CurveError("tone curve must be monotone")
        if lut.min() < -1e-9 or lut.max() > 255.0 + 1e-9:
            raise CurveError("tone curve values must lie in [0, 255]")
        quantized = np.clip(round_half_up(lut), 0, MAX_LEVEL).astype(np.uint8)
        out[..., ch] = quantized[frame[..., ch]]
    return out


def luminance_plane(frame: np.ndarray) -> np.ndarray:
    """Rec.601 luminance of every pixel, rounded to integer levels."""
    frame = validate_frame(frame)
    luma = frame.astype(np.float64) @ LUMA_WEIGHTS
    return np.clip(round_half_up(luma), 0, MAX_LEVEL).astype(np.uint8)


def luminance_histogram(frame: np.ndarray) -> np.ndarray:
    """Normalized histogram of the rounded Rec.601 luminance plane."""
    plane = luminance_plane(frame)
    counts = np.bincount(plane.ravel(), minlength=LEVELS).astype(np.float64)
    return counts / plane.size
