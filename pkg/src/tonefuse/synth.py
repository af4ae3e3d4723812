"""Synthetic test sequences: every temporal claim checkable at desk scale.

Three kinds:

* ``flicker`` -- a static multi-region scene scaled by a per-frame gain
  ``1 + amplitude*sin(2*pi*t/period)``, clamped to [0, 255];
* ``two_roi`` -- one static scene with a dark and a bright region on a
  mid-gray background (the separable-statistics regime);
* ``ramp`` -- the flicker scene under a linear gain ramp.

Pixel noise is Gaussian, drawn independently per channel (so tone-curve
stretching genuinely spreads the luminance histogram), frozen into the
base scene, and clamped to [0, 255].  Output is deterministic for a
given spec.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import InputError, RoiBox, round_half_up
from .frameio import RoiSidecar

KINDS = ("flicker", "two_roi", "ramp")


@dataclass(frozen=True)
class SynthSpec:
    kind: str = "flicker"
    frames: int = 32
    width: int = 128
    height: int = 96
    gain_amplitude: float = 0.3
    gain_period: float = 8.0
    noise_sigma: float = 10.0
    seed: int = 0
    background_level: float = 120.0
    dark_level: float = 40.0
    bright_level: float = 210.0
    ramp_lo: float = 0.7
    ramp_hi: float = 1.3

    @classmethod
    def two_roi(cls, **kwargs) -> "SynthSpec":
        base = cls(
            kind="two_roi",
            frames=1,
            background_level=115.0,
            dark_level=50.0,
            bright_level=180.0,
        )
        return replace(base, **kwargs)

    def validate(self) -> "SynthSpec":
        if self.kind not in KINDS:
            raise InputError(f"unknown synth kind {self.kind!r}; expected one of {KINDS}")
        if self.frames < 1 or self.width < 1 or self.height < 1:
            raise InputError("frames, width and height must all be >= 1")
        if self.gain_period <= 0:
            raise InputError("gain_period must be > 0")
        if 1.0 - abs(self.gain_amplitude) <= 0:
            raise InputError("gain amplitude must keep all gains positive")
        if self.ramp_lo <= 0 or self.ramp_hi <= 0:
            raise InputError("ramp gains must be positive")
        if self.noise_sigma < 0:
            raise InputError("noise_sigma must be >= 0")
        return self


def region_boxes(width: int, height: int) -> tuple[RoiBox, RoiBox]:
    """Dark-left / bright-right box layout, scaled to the frame size."""
    box_w = max(1, round(width * 0.30))
    box_h = max(1, round(height * 0.60))
    margin = max(0, round(width * 0.08))
    y0 = max(0, round(height * 0.20))
    dark = RoiBox(margin, y0, box_w, box_h, "dark")
    bright = RoiBox(width - margin - box_w, y0, box_w, box_h, "bright")
    return dark, bright


def _base_scene(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    shape = (spec.height, spec.width, 3)
    scene = np.full(shape, spec.background_level, dtype=np.float64)
    dark, bright = region_boxes(spec.width, spec.height)
    scene[dark.slices()] = spec.dark_level
    scene[bright.slices()] = spec.bright_level
    scene += rng.normal(0.0, spec.noise_sigma, shape)
    return np.clip(round_half_up(scene), 0, 255)


def _gains(spec: SynthSpec) -> np.ndarray:
    t = np.arange(spec.frames)
    if spec.kind == "flicker":
        return 1.0 + spec.gain_amplitude * np.sin(2.0 * np.pi * t / spec.gain_period)
    if spec.kind == "ramp":
        if spec.frames == 1:
            return np.array([spec.ramp_lo])
        return spec.ramp_lo + (spec.ramp_hi - spec.ramp_lo) * t / (spec.frames - 1)
    return np.ones(spec.frames)  # two_roi: static


def generate(spec: SynthSpec) -> tuple[np.ndarray, RoiSidecar]:
    """Build the frame stack and the matching ROI sidecar."""
    spec = spec.validate()
    rng = np.random.default_rng(spec.seed)
    base = _base_scene(spec, rng)
    frames = np.empty((spec.frames, spec.height, spec.width, 3), dtype=np.uint8)
    for t, gain in enumerate(_gains(spec)):
        frames[t] = np.clip(round_half_up(base * gain), 0, 255).astype(np.uint8)
    dark, bright = region_boxes(spec.width, spec.height)
    return frames, RoiSidecar(default_boxes=[dark, bright])
