"""Inter-frame stabilization of tone curves.

Two interchangeable mechanisms, selected by ``Params.temporal_mode``:

* **curve** -- the frame's curves are blended pointwise with the previous
  frame's final curves.  The blend weight is chosen by entropy matching:
  scan weights on a 0.01 grid, keep the one whose enhanced-frame entropy
  is closest to the previous frame's, then clamp to ``blend_floor`` so
  the temporal constraint always has teeth.
* **histogram** -- curves are re-derived each frame from the temporally
  constrained histogram target (see ``histmod``); the incoming curves are
  bypassed entirely.

Entropy for the grid search is evaluated cheaply by pushing the frame's
luminance histogram through the luminance response of the blended curve
set instead of re-rendering the frame per candidate.  This treats a
pixel's output luminance as the luminance-weighted blend of the three
per-channel responses at its input luminance -- exact for gray pixels
under channel-identical curves, and an approximation elsewhere that the
test suite bounds against full renders.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    LEVELS,
    LUMA_WEIGHTS,
    MAX_LEVEL,
    InputError,
    Params,
    StateError,
    apply_curves,
    compute_histogram,
    luminance_histogram,
    round_half_up,
    validate_curves,
    validate_frame,
    validate_histogram,
)
from .histmod import modified_histogram, temporal_modified_histogram, tone_curve_from_histogram

WEIGHT_GRID = np.round(np.arange(0, 101) / 100.0, 2)


@dataclass
class TemporalState:
    """What the next frame needs to remember about this one.

    All ``prev_*`` fields are None exactly at frame 0.  ``prev_targets``
    holds the per-channel histogram targets and is only populated in
    histogram mode.
    """

    frame_index: int = 0
    prev_curves: np.ndarray | None = None
    prev_entropy: float | None = None
    prev_targets: np.ndarray | None = None

    def has_history(self) -> bool:
        return self.frame_index > 0


def entropy(hist: np.ndarray, base: float = 2.0) -> float:
    """Shannon entropy of a normalized histogram; 0*log(0) counts as 0."""
    hist = validate_histogram(hist)
    if base <= 1.0:
        raise InputError("entropy base must be > 1")
    positive = hist[hist > 0]
    return float(-(positive * np.log(positive)).sum() / np.log(base))


def blend_curves(current: np.ndarray, previous: np.ndarray, weight: float) -> np.ndarray:
    """Pointwise convex blend of two curve sets: weight pulls toward previous."""
    current = validate_curves(current)
    previous = validate_curves(previous)
    if not (0.0 <= weight <= 1.0):
        raise InputError(f"blend weight must lie in [0, 1], got {weight}")
    return (1.0 - weight) * current + weight * previous


def luminance_response(curves: np.ndarray) -> np.ndarray:
    """Luminance-weighted combination of the three per-channel curves."""
    curves = validate_curves(curves)
    return LUMA_WEIGHTS @ curves


def remap_histogram(hist: np.ndarray, lut: np.ndarray) -> np.ndarray:
    """Push histogram mass through a curve's induced level mapping."""
    hist = validate_histogram(hist)
    idx = np.clip(round_half_up(lut), 0, MAX_LEVEL).astype(np.intp)
    out = np.zeros(LEVELS)
    np.add.at(out, idx, hist)
    return out


def response_entropy(lum_hist: np.ndarray, response: np.ndarray, base: float) -> float:
    """Entropy of a luminance histogram pushed through a luminance response."""
    return entropy(remap_histogram(lum_hist, response), base)


def select_temporal_weight(
    frame: np.ndarray,
    curves: np.ndarray,
    state: TemporalState,
    params: Params,
) -> float:
    """Entropy-matched blend weight, clamped to ``blend_floor``.

    Scans the 0.01 grid, evaluating the enhanced-frame entropy of each
    candidate blend via the luminance-histogram shortcut, and picks the
    candidate closest to the previous frame's entropy (ties break toward
    the smaller weight, preferring the current frame's own enhancement).
    """
    if not state.has_history() or state.prev_curves is None or state.prev_entropy is None:
        raise StateError("select_temporal_weight requires a previous frame")
    frame = validate_frame(frame)
    curves = validate_curves(curves)
    lum_hist = luminance_histogram(frame)
    current_response = luminance_response(curves)
    previous_response = luminance_response(state.prev_curves)
    gaps = np.empty(WEIGHT_GRID.size)
    for i, w in enumerate(WEIGHT_GRID):
        response = (1.0 - w) * current_response + w * previous_response
        gaps[i] = abs(response_entropy(lum_hist, response, params.entropy_base) - state.prev_entropy)
    best = float(WEIGHT_GRID[int(np.argmin(gaps))])  # argmin takes the first minimum
    return max(best, params.blend_floor)


def _histogram_mode_curves(
    frame: np.ndarray, state: TemporalState, params: Params
) -> tuple[np.ndarray, np.ndarray]:
    curves = np.empty((3, LEVELS))
    targets = np.empty((3, LEVELS))
    for ch in range(3):
        e = compute_histogram(frame, ch)
        if state.has_history():
            target = temporal_modified_histogram(
                e, state.prev_targets[ch], params.uniform_weight, params.temporal_weight
            )
        else:
            target = modified_histogram(e, params.uniform_weight)
        targets[ch] = target.histogram
        curves[ch] = tone_curve_from_histogram(target.histogram)
    return curves, targets


def temporal_step(
    frame: np.ndarray,
    curves: np.ndarray | None,
    state: TemporalState,
    params: Params,
) -> tuple[np.ndarray, TemporalState]:
    """Produce the final curves for one frame and the successor state.

    Curve mode: frame 0 passes the incoming curves through unchanged;
    later frames blend them with the previous final curves at the
    entropy-matched weight.  Histogram mode ignores the incoming curves
    and derives them from the (temporally constrained) histogram target.
    The new state stores the final curves, the entropy of the rendered
    enhanced frame, and (in histogram mode) the per-channel targets.
    """
    frame = validate_frame(frame)
    targets = None
    if params.temporal_mode == "histogram":
        if state.has_history() and state.prev_targets is None:
            raise StateError("state carries no histogram targets; was it built in curve mode?")
        final, targets = _histogram_mode_curves(frame, state, params)
    else:
        if curves is None:
            raise StateError("curve mode requires the frame's own curves")
        curves = validate_curves(curves)
        if state.has_history():
            if state.prev_curves is None:
                raise StateError("state carries no previous curves")
            weight = select_temporal_weight(frame, curves, state, params)
            final = blend_curves(curves, state.prev_curves, weight)
        else:
            final = curves

    enhanced = apply_curves(frame, final)
    new_state = TemporalState(
        frame_index=state.frame_index + 1,
        prev_curves=final,
        prev_entropy=entropy(luminance_histogram(enhanced), params.entropy_base),
        prev_targets=targets,
    )
    return final, new_state
