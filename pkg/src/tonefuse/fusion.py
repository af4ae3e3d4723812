"""Fusing per-region local tone curves into one global curve per channel.

Two regions are fused by one of two strategies, chosen per channel:

* **piecewise** -- when the regions' value bands are well separated, the
  global curve is split at a crossover level; each side is rebuilt as
  cubic Hermite segments anchored to a weighted blend of the two local
  curves, so each side stays faithful to "its" region;
* **factor** -- when the bands overlap, the global curve is a convex
  blend ``w*f_lo + (1-w)*f_hi`` whose weight minimizes the summed squared
  deviation from each local curve over that region's own band.

More than two regions fold pairwise in ascending luminance-mean order;
the fused curve and pooled statistics stand in for a single region at
the next step, so the result is independent of input ordering.

Local curves themselves are a parametric stand-in: a monotone cubic
through five anchors that moves a region's band onto a configurable
well-exposed band (see ``local_curve``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .core import (
    LEVELS,
    CurveError,
    Params,
    RoiBox,
    channel_index,
    validate_frame,
)
from .roi import (
    SIGMA_SENTINEL,
    RoiStats,
    SeparabilityReport,
    pool_stats,
    roi_stats,
    separability,
)

PIECEWISE = "piecewise"
FACTOR = "factor"
SINGLE = "single"

_X = np.arange(LEVELS, dtype=np.float64)


@dataclass
class LocalCurve:
    """A region's own tone curve plus the statistics it was built from."""

    lut: np.ndarray
    stats: RoiStats
    anchors: list = field(default_factory=list)


@dataclass
class FusionDecision:
    """Outcome of strategy selection for one channel.

    ``statistic`` is the separation statistic
    ``(m_lo + spread*s_lo) - (m_hi - spread*s_hi)``; piecewise fusion
    additionally requires the two band intervals to be disjoint and the
    crossover knots to be strictly ordered, otherwise ``fallback_reason``
    records why the factor strategy was used instead.
    """

    strategy: str
    statistic: float
    conjunctive_point: float | None = None
    weight: float | None = None
    fallback_reason: str | None = None


def _lut_value(lut: np.ndarray, x) -> np.ndarray | float:
    return np.interp(x, _X, lut)


def _lut_slopes(lut: np.ndarray) -> np.ndarray:
    """Central differences, one-sided at the endpoints."""
    d = np.empty(LEVELS)
    d[1:-1] = (lut[2:] - lut[:-2]) / 2.0
    d[0] = lut[1] - lut[0]
    d[-1] = lut[-1] - lut[-2]
    return d


def _lut_slope_at(lut: np.ndarray, x) -> np.ndarray | float:
    return np.interp(x, _X, _lut_slopes(lut))


def local_curve(stats: RoiStats, channel, params: Params) -> LocalCurve:
    """Monotone cubic stand-in for a learned per-region tone curve.

    Anchors map the region's band onto the configured target band:

        (0, 0)
        (m - a*s,  target_mean - a*target_sigma)
        (m,        target_mean)
        (m + a*s,  target_mean + a*target_sigma)
        (255, 255)

    with ``a = band_sigma`` and both coordinates clamped to [0, 255].
    Interior anchors whose clamped position does not strictly increase
    are dropped (first one wins); the endpoints always survive.  The
    interpolant is shape-preserving (PCHIP), so the curve is monotone and
    hits every kept anchor exactly.
    """
    ch = channel_index(channel)
    m = float(stats.mean[ch])
    s = float(stats.std[ch])
    a = params.band_sigma
    band = a * params.target_sigma
    raw = [
        (0.0, 0.0),
        (np.clip(m - a * s, 0.0, 255.0), np.clip(params.target_mean - band, 0.0, 255.0)),
        (m, params.target_mean),
        (np.clip(m + a * s, 0.0, 255.0), np.clip(params.target_mean + band, 0.0, 255.0)),
    ]
    anchors = [raw[0]]
    for x, y in raw[1:]:
        if x > anchors[-1][0] and x < 255.0:
            anchors.append((float(x), float(y)))
    anchors.append((255.0, 255.0))

    xs = np.array([p[0] for p in anchors])
    ys = np.array([p[1] for p in anchors])
    lut = PchipInterpolator(xs, ys)(_X)
    lut = np.clip(lut, 0.0, 255.0)
    lut[0], lut[-1] = 0.0, 255.0
    return LocalCurve(lut=lut, stats=stats, anchors=anchors)


def _oriented(a: RoiStats, b: RoiStats, ch: int) -> tuple[RoiStats, RoiStats, bool]:
    """Order the pair so the first region has the lower mean in ``ch``."""
    if a.mean[ch] > b.mean[ch]:
        return b, a, True
    return a, b, False


def conjunctive_point(
    a: RoiStats,
    b: RoiStats,
    sep: SeparabilityReport,
    channel,
    params: Params,
) -> float:
    """Crossover level between the two piecewise parts.

    Midpoint of the facing band edges, shifted into the overlap toward
    the narrower region when the bands intersect; clamped into the open
    span of the outer band edges intersected with (1, 254).
    """
    ch = channel_index(channel)
    m_lo, s_lo = float(a.mean[ch]), float(a.std[ch])
    m_hi, s_hi = float(b.mean[ch]), float(b.std[ch])
    if m_lo > m_hi:
        raise CurveError("conjunctive_point expects the lower-mean region first")
    alpha = params.band_sigma
    n_a, n_b = float(sep.n_a[ch]), float(sep.n_b[ch])
    upper_lo = m_lo + alpha * s_lo
    lower_hi = m_hi - alpha * s_hi
    if n_a >= n_b:
        point = (upper_lo + (lower_hi + (n_a - n_b) * s_lo)) / 2.0
    else:
        point = ((upper_lo - (n_b - n_a) * s_hi) + lower_hi) / 2.0
    lo_bound = max(m_lo - alpha * s_lo, 1.0)
    hi_bound = min(m_hi + alpha * s_hi, 254.0)
    return float(np.clip(point, lo_bound, hi_bound))


def select_strategy(a: RoiStats, b: RoiStats, channel, params: Params) -> FusionDecision:
    """Choose piecewise vs factor fusion for one channel.

    The pair is oriented internally so the lower-mean region plays the
    "lower" role.  Piecewise fusion requires all of:

    * separation statistic below ``separation_threshold``;
    * no zero-spread region with band overlap (sentinel ratio);
    * the two band intervals disjoint, so each side of the crossover
      owns one region's full band;
    * strictly ordered crossover knots ``0 < x1 < Pc < x2 < 255`` after
      clamping.

    Anything else falls back to the factor strategy with the reason
    recorded.
    """
    ch = channel_index(channel)
    lo, hi, _ = _oriented(a, b, ch)
    alpha = params.band_sigma
    rho = params.separation_spread
    m_lo, s_lo = float(lo.mean[ch]), float(lo.std[ch])
    m_hi, s_hi = float(hi.mean[ch]), float(hi.std[ch])
    statistic = (m_lo + rho * s_lo) - (m_hi - rho * s_hi)

    if statistic >= params.separation_threshold:
        return FusionDecision(FACTOR, statistic)

    sep = separability(lo, hi, alpha)
    if sep.n_a[ch] >= SIGMA_SENTINEL or sep.n_b[ch] >= SIGMA_SENTINEL:
        return FusionDecision(
            FACTOR, statistic, fallback_reason="zero-spread region overlaps the other band"
        )
    if m_lo + alpha * s_lo >= m_hi - alpha * s_hi:
        return FusionDecision(
            FACTOR, statistic, fallback_reason="band intervals overlap at this sigma width"
        )

    point = conjunctive_point(lo, hi, sep, ch, params)
    x1 = float(np.clip(m_lo - alpha * s_lo, 1.0, 254.0))
    x2 = float(np.clip(m_hi + alpha * s_hi, 1.0, 254.0))
    if not (0.0 < x1 < point < x2 < 255.0):
        return FusionDecision(
            FACTOR,
            statistic,
            fallback_reason=f"degenerate crossover knots ({x1:.1f}, {point:.1f}, {x2:.1f})",
        )
    return FusionDecision(PIECEWISE, statistic, conjunctive_point=point)


def piecewise_curve(
    f_lo: LocalCurve,
    f_hi: LocalCurve,
    a: RoiStats,
    b: RoiStats,
    point: float,
    channel,
    params: Params,
) -> np.ndarray:
    """Two-part global curve meeting at the crossover ``point``.

    The lower part runs from (0, 0) through an anchor at the lower
    region's low band edge to the crossover; the upper part mirrors it
    (roles and endpoints swapped) up to (255, 255).  Anchor values blend
    the local curves with ``anchor_keep`` at band edges and
    ``anchor_crossover`` at the crossover; endpoint derivatives are half
    the chord slope to avoid early saturation, band-edge derivatives
    blend the local curves' slopes, and the crossover derivative is the
    chord slope scaled by ``slope_taper``/``slope_boost`` depending on
    which local curve is on top there.  The sampled LUT is made monotone
    by a running maximum and clamped to [0, 255]; the parts share the
    crossover value, so the curve is continuous there.
    """
    ch = channel_index(channel)
    m_lo, s_lo = float(a.mean[ch]), float(a.std[ch])
    m_hi, s_hi = float(b.mean[ch]), float(b.std[ch])
    if m_lo > m_hi:
        raise CurveError("piecewise_curve expects the lower-mean region first")
    alpha = params.band_sigma
    x1 = float(np.clip(m_lo - alpha * s_lo, 1.0, 254.0))
    x2 = float(np.clip(m_hi + alpha * s_hi, 1.0, 254.0))
    if not (0.0 < x1 < point < x2 < 255.0):
        raise CurveError(
            f"crossover knots must satisfy 0 < {x1} < {point} < {x2} < 255; "
            "use the factor strategy for this pair"
        )

    k1 = params.anchor_keep
    k2 = params.anchor_crossover
    lo_lut, hi_lut = f_lo.lut, f_hi.lut

    lo_at_point = float(_lut_value(lo_lut, point))
    hi_at_point = float(_lut_value(hi_lut, point))

    # Lower part: (0,0) -> band-edge anchor -> crossover.
    v1 = k1 * float(_lut_value(lo_lut, x1)) + (1 - k1) * float(_lut_value(hi_lut, x1))
    v2 = k2 * lo_at_point + (1 - k2) * hi_at_point
    d0 = 0.5 * v1 / x1
    d1 = k1 * float(_lut_slope_at(lo_lut, x1)) + (1 - k1) * float(_lut_slope_at(hi_lut, x1))
    k3_lower = params.slope_taper if lo_at_point > hi_at_point else params.slope_boost
    d2 = k3_lower * (v2 - v1) / (point - x1)

    # Upper part, mirrored: crossover -> band-edge anchor -> (255,255).
    v3 = k1 * float(_lut_value(hi_lut, x2)) + (1 - k1) * float(_lut_value(lo_lut, x2))
    k3_upper = params.slope_taper if hi_at_point > lo_at_point else params.slope_boost
    d2u = k3_upper * (v3 - v2) / (x2 - point)
    d3 = k1 * float(_lut_slope_at(hi_lut, x2)) + (1 - k1) * float(_lut_slope_at(lo_lut, x2))
    d4 = 0.5 * (255.0 - v3) / (255.0 - x2)

    lut = np.empty(LEVELS)
    lower_mask = _X <= point
    lut[lower_mask] = _eval_segments(
        [(0.0, 0.0, d0), (x1, v1, d1), (point, v2, d2)], _X[lower_mask]
    )
    lut[~lower_mask] = _eval_segments(
        [(point, v2, d2u), (x2, v3, d3), (255.0, 255.0, d4)], _X[~lower_mask]
    )
    lut = np.maximum.accumulate(lut)
    return np.clip(lut, 0.0, 255.0)


def _eval_segments(knots: list[tuple[float, float, float]], xs: np.ndarray) -> np.ndarray:
    """Evaluate chained cubic Hermite segments defined by (x, value, slope) knots."""
    out = np.empty_like(xs, dtype=np.float64)
    for (xa, ya, da), (xb, yb, db) in zip(knots, knots[1:]):
        if xa == xb:
            continue
        mask = (xs >= xa) & (xs <= xb)
        t = (xs[mask] - xa) / (xb - xa)
        h = xb - xa
        h00 = (1 + 2 * t) * (1 - t) ** 2
        h10 = t * (1 - t) ** 2
        h01 = t**2 * (3 - 2 * t)
        h11 = t**2 * (t - 1)
        out[mask] = ya * h00 + h * da * h10 + yb * h01 + h * db * h11
    return out


def factor_lambda(
    f_lo: LocalCurve,
    f_hi: LocalCurve,
    a: RoiStats,
    b: RoiStats,
    channel,
    params: Params,
) -> float:
    """Blend weight minimizing the band-restricted squared deviations.

    With ``S_lo`` the summed squared gap between the local curves over
    the lower region's band and ``S_hi`` the same over the upper band,
    the objective ``(1-w)^2*S_lo + w^2*S_hi`` is minimized by
    ``w = S_lo / (S_lo + S_hi)``; 0.5 when both sums vanish.
    """
    ch = channel_index(channel)
    alpha = params.band_sigma
    diff_sq = (f_lo.lut - f_hi.lut) ** 2

    def band_sum(stats: RoiStats) -> float:
        lo = int(np.ceil(max(stats.mean[ch] - alpha * stats.std[ch], 0.0)))
        hi = int(np.floor(min(stats.mean[ch] + alpha * stats.std[ch], 255.0)))
        if hi < lo:
            return 0.0
        return float(diff_sq[lo : hi + 1].sum())

    s_lo, s_hi = band_sum(a), band_sum(b)
    if s_lo + s_hi == 0.0:
        return 0.5
    return float(np.clip(s_lo / (s_lo + s_hi), 0.0, 1.0))


def factor_curve(f_lo: LocalCurve, f_hi: LocalCurve, weight: float) -> np.ndarray:
    """Pointwise convex blend of the two local curves."""
    if not (0.0 <= weight <= 1.0):
        raise CurveError(f"blend weight must lie in [0, 1], got {weight}")
    # clip only removes float dust: the blend is convex
    return np.clip(weight * f_lo.lut + (1.0 - weight) * f_hi.lut, 0.0, 255.0)


def _fuse_pair_channel(
    stats_a: RoiStats,
    curve_a: LocalCurve,
    stats_b: RoiStats,
    curve_b: LocalCurve,
    ch: int,
    params: Params,
) -> tuple[np.ndarray, FusionDecision]:
    lo_stats, hi_stats, swapped = _oriented(stats_a, stats_b, ch)
    lo_curve, hi_curve = (curve_b, curve_a) if swapped else (curve_a, curve_b)
    decision = select_strategy(lo_stats, hi_stats, ch, params)
    if decision.strategy == PIECEWISE:
        lut = piecewise_curve(
            lo_curve, hi_curve, lo_stats, hi_stats, decision.conjunctive_point, ch, params
        )
    else:
        decision.weight = factor_lambda(lo_curve, hi_curve, lo_stats, hi_stats, ch, params)
        lut = factor_curve(lo_curve, hi_curve, decision.weight)
    return lut, decision


def fuse_global(
    frame: np.ndarray,
    rois: list[RoiBox],
    params: Params,
) -> tuple[np.ndarray, list[FusionDecision]]:
    """Global per-channel curve set for a frame, fused from its regions.

    Regions are sorted by luminance mean (box geometry breaks ties) and
    folded pairwise; after each step the pooled statistics and fused
    curves act as a single region.  An empty region list falls back to
    one region covering the whole frame.  Returns the ``(3, 256)`` curve
    set and the last fusion decision per channel ("single" when only one
    region was given).
    """
    frame = validate_frame(frame)
    height, width = frame.shape[:2]
    boxes = list(rois) if rois else [RoiBox(0, 0, width, height, "frame")]

    entities = []
    for box in boxes:
        stats = roi_stats(frame, box)
        curves = [local_curve(stats, ch, params) for ch in range(3)]
        entities.append((stats, curves, box))
    entities.sort(key=lambda e: (e[0].luminance_mean, e[2].x0, e[2].y0, e[2].w, e[2].h))

    acc_stats, acc_curves, _ = entities[0]
    decisions = [FusionDecision(SINGLE, 0.0) for _ in range(3)]
    for nxt_stats, nxt_curves, _ in entities[1:]:
        fused_curves = []
        pooled = pool_stats(acc_stats, nxt_stats)
        for ch in range(3):
            lut, decision = _fuse_pair_channel(
                acc_stats, acc_curves[ch], nxt_stats, nxt_curves[ch], ch, params
            )
            decisions[ch] = decision
            fused_curves.append(LocalCurve(lut=lut, stats=pooled))
        acc_stats, acc_curves = pooled, fused_curves

    return np.stack([c.lut for c in acc_curves]), decisions
