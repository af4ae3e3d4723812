"""Region-aware, temporally consistent tone-curve enhancement.

A numpy library for enhancing 8-bit RGB frame sequences: per-region
local tone curves are fused into one global monotone curve per channel,
curves are stabilized across frames by entropy-matched blending or
temporally constrained histogram targets, and results are scored with a
small objective metric suite.  See README.md for a tour.
"""

from .core import (
    LEVELS,
    LUMA_WEIGHTS,
    MAX_LEVEL,
    BoundsError,
    ConfigError,
    CurveError,
    FrameIOError,
    InputError,
    Params,
    RoiBox,
    SidecarError,
    StateError,
    ToneFuseError,
    apply_curves,
    compute_histogram,
    identity_curve,
    identity_curves,
    luminance_histogram,
    luminance_plane,
    uniform_histogram,
    validate_curve,
    validate_curves,
    validate_frame,
    validate_histogram,
)
from .frameio import (
    RoiSidecar,
    apply_overrides,
    load_config,
    load_frames,
    load_sidecar,
    read_curve_dump,
    store_frames,
    write_curve_dump,
    write_report,
    write_sidecar,
)
from .fusion import (
    FACTOR,
    PIECEWISE,
    SINGLE,
    FusionDecision,
    LocalCurve,
    conjunctive_point,
    factor_curve,
    factor_lambda,
    fuse_global,
    local_curve,
    piecewise_curve,
    select_strategy,
)
from .histmod import (
    HistogramTarget,
    modified_histogram,
    temporal_modified_histogram,
    tone_curve_from_histogram,
)
from .metrics import SequenceReport, metric_H, metric_HIBTE, metric_TAMBE, report
from .pipeline import ACB_ONLY, ECB_ONLY, FULL_AECB, HEM_ONLY, MODES, Job, run
from .roi import RoiStats, SeparabilityReport, pool_stats, roi_stats, separability
from .synth import KINDS, SynthSpec, generate, region_boxes
from .temporal import (
    TemporalState,
    blend_curves,
    entropy,
    luminance_response,
    remap_histogram,
    response_entropy,
    select_temporal_weight,
    temporal_step,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
