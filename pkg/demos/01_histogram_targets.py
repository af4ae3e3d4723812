# Histogram-modification targets and the tone curves they induce.
#
# Builds a skewed synthetic frame, blends its histogram toward uniform at
# several weights, and shows how the derived curve moves from full
# equalization (weight 0) to the identity (large weight).  Curve tables
# are written next to this script for external plotting.

from pathlib import Path

import numpy as np

import tonefuse as tf

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

rng = np.random.default_rng(0)
dark_scene = np.clip(rng.normal(60, 18, (96, 128, 3)), 0, 255).astype(np.uint8)

hist = tf.compute_histogram(dark_scene, "R")
print(f"input R-channel: mean={dark_scene[..., 0].mean():6.1f}  "
      f"entropy={tf.entropy(hist):5.2f} bits")

for weight in (0.0, 0.5, 2.0, 8.0, 1e6):
    target = tf.modified_histogram(hist, weight)
    lut = tf.tone_curve_from_histogram(target.histogram)
    curves = np.tile(lut, (3, 1))
    enhanced = tf.apply_curves(dark_scene, curves)
    out_hist = tf.compute_histogram(enhanced, "R")
    print(f"uniform_weight={weight:>9.1f}: out mean={enhanced[..., 0].mean():6.1f}  "
          f"out entropy={tf.entropy(out_hist):5.2f} bits  "
          f"max |lut - identity|={np.max(np.abs(lut - np.arange(256))):6.1f}")
    tf.write_curve_dump(out_dir / f"hm_curve_w{weight:g}.tsv", curves)

print(f"\ncurve tables written to {out_dir}/hm_curve_w*.tsv (level, R, G, B)")
print("weight 0 is classic equalization; large weights approach the identity.")
