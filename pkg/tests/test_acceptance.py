"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as
they execute.  Criteria pin their tolerances here; nothing is deferred
to later calibration.
"""

import time

import numpy as np

from tonefuse import (
    Job,
    Params,
    SynthSpec,
    apply_curves,
    factor_lambda,
    fuse_global,
    generate,
    identity_curves,
    load_frames,
    local_curve,
    luminance_histogram,
    luminance_response,
    metric_H,
    piecewise_curve,
    report,
    response_entropy,
    run,
    select_strategy,
    select_temporal_weight,
    separability,
    store_frames,
    temporal_modified_histogram,
    uniform_histogram,
    write_sidecar,
)
from tonefuse.fusion import _fuse_pair_channel
from tonefuse.temporal import WEIGHT_GRID, TemporalState

from conftest import factor_pair, piecewise_pair, piecewise_pair_integer, stats_of


def announce(number, label, passed):
    print(f"ACCEPTANCE {number:02d} {'PASS' if passed else 'FAIL'}: {label}")
    assert passed, f"criterion {number} failed: {label}"


def test_criterion_01_classic_equalization_bit_exact(tmp_path):
    """hem mode with uniform_weight=0 equals classic equalization, bit-exact."""
    start = time.monotonic()
    rng = np.random.default_rng(101)
    frames = rng.integers(0, 256, (50, 64, 64, 3), dtype=np.uint8)
    store_frames(tmp_path / "in", frames, "ppm")
    run(
        Job(
            input_dir=tmp_path / "in",
            output_dir=tmp_path / "out",
            mode="hem",
            params=Params(uniform_weight=0.0),
        )
    )
    out = load_frames(tmp_path / "out")
    exact = True
    for t in range(50):
        for ch in range(3):
            counts = np.bincount(frames[t, ..., ch].ravel(), minlength=256)
            lut = np.floor(255.0 * np.cumsum(counts) / 4096.0 + 0.5).astype(np.uint8)
            exact &= bool(np.array_equal(out[t, ..., ch], lut[frames[t, ..., ch]]))
    elapsed = time.monotonic() - start
    announce(1, f"HE equivalence bit-exact on 50 frames in {elapsed:.2f}s", exact and elapsed < 5.0)


def _project_to_simplex(points):
    """Euclidean projection of each row onto the probability simplex."""
    sorted_pts = np.sort(points, axis=1)[:, ::-1]
    cumulative = np.cumsum(sorted_pts, axis=1) - 1.0
    indices = np.arange(1, points.shape[1] + 1)
    conditions = sorted_pts - cumulative / indices > 0
    rho = conditions.shape[1] - np.argmax(conditions[:, ::-1], axis=1) - 1
    theta = cumulative[np.arange(points.shape[0]), rho] / (rho + 1.0)
    return np.clip(points - theta[:, None], 0.0, None)


def test_criterion_02_temporal_target_optimality():
    """Closed-form temporal target beats 10^4 simplex perturbations per input."""
    rng = np.random.default_rng(202)
    u = uniform_histogram()
    worst = -np.inf
    for _ in range(100):
        e = rng.random(256)
        e /= e.sum()
        prev = rng.random(256)
        prev /= prev.sum()
        h = temporal_modified_histogram(e, prev, 2.0, 3.0).histogram

        def objective(candidates):
            return (
                ((candidates - e) ** 2).sum(axis=1)
                + 2.0 * ((candidates - u) ** 2).sum(axis=1)
                + 3.0 * ((candidates - prev) ** 2).sum(axis=1)
            )

        scale = rng.choice([1e-4, 1e-2, 1e-1])
        perturbed = _project_to_simplex(h[None, :] + rng.normal(0, scale, (10_000, 256)))
        gap = objective(h[None, :])[0] - objective(perturbed).min()
        worst = max(worst, gap)
    announce(2, f"closed form never loses (worst margin {worst:.3e} <= 1e-9)", worst <= 1e-9)


def test_criterion_03_monotonicity_sweep():
    """1000 random stat pairs per strategy produce monotone in-range LUTs."""
    rng = np.random.default_rng(303)
    params = Params()
    violations = 0
    for maker, expected in ((piecewise_pair, "piecewise"), (factor_pair, "factor")):
        for _ in range(1000):
            a, b = maker(rng)
            fa = local_curve(a, 0, params)
            fb = local_curve(b, 0, params)
            lut, decision = _fuse_pair_channel(a, fa, b, fb, 0, params)
            ok = (
                decision.strategy == expected
                and np.all(np.diff(lut) >= -1e-9)
                and lut[0] >= 0.0
                and lut[255] <= 255.0
                and lut.min() >= 0.0
                and lut.max() <= 255.0
            )
            violations += 0 if ok else 1
    announce(3, f"monotone LUTs, endpoints in range ({violations} violations)", violations == 0)


def test_criterion_04_anchor_interpolation():
    """Piecewise curves hit all anchors within 0.5; crossover matches the formula.

    Pairs are drawn with integer band edges and crossover so the 256-entry
    LUT samples the construction exactly at the anchor abscissas (at a
    fractional crossover the LUT has no sample to compare against).
    """
    params = Params()
    a, b = stats_of(50, 10), stats_of(180, 10)
    from tonefuse import conjunctive_point

    point = conjunctive_point(a, b, separability(a, b, 3.0), 0, params)
    exact = point == 115.0

    rng = np.random.default_rng(404)
    worst = 0.0
    for _ in range(500):
        a, b = piecewise_pair_integer(rng)
        decision = select_strategy(a, b, 0, params)
        assert decision.strategy == "piecewise"
        fa, fb = local_curve(a, 0, params), local_curve(b, 0, params)
        lut = piecewise_curve(fa, fb, a, b, decision.conjunctive_point, 0, params)
        k1, k2 = params.anchor_keep, params.anchor_crossover
        x1 = int(np.clip(a.mean[0] - 3 * a.std[0], 1, 254))
        x2 = int(np.clip(b.mean[0] + 3 * b.std[0], 1, 254))
        p = int(decision.conjunctive_point)
        assert p == decision.conjunctive_point
        targets = (
            (x1, k1 * fa.lut[x1] + (1 - k1) * fb.lut[x1]),
            (p, k2 * fa.lut[p] + (1 - k2) * fb.lut[p]),
            (x2, k1 * fb.lut[x2] + (1 - k1) * fa.lut[x2]),
            (0, 0.0),
            (255, 255.0),
        )
        for x, expected in targets:
            worst = max(worst, abs(float(lut[x]) - expected))
    announce(
        4,
        f"anchors within 0.5 level (worst {worst:.3f}); crossover exact at 115",
        worst <= 0.5 and exact,
    )


def test_criterion_05_factor_weight_closed_form():
    """Closed-form blend weight matches 0.001-step grid search within 0.001."""
    rng = np.random.default_rng(505)
    params = Params()
    grid = np.arange(0, 1001) / 1000.0
    worst = 0.0
    for _ in range(200):
        a, b = factor_pair(rng)
        fa, fb = local_curve(a, 0, params), local_curve(b, 0, params)
        closed = factor_lambda(fa, fb, a, b, 0, params)
        diff_sq = (fa.lut - fb.lut) ** 2

        def band(stats):
            lo = int(np.ceil(max(stats.mean[0] - 3 * stats.std[0], 0.0)))
            hi = int(np.floor(min(stats.mean[0] + 3 * stats.std[0], 255.0)))
            return diff_sq[lo : hi + 1].sum() if hi >= lo else 0.0

        objective = (1 - grid) ** 2 * band(a) + grid**2 * band(b)
        worst = max(worst, abs(closed - grid[int(np.argmin(objective))]))
    announce(5, f"factor weight matches grid search (worst gap {worst:.4f})", worst <= 0.001)


def test_criterion_06_temporal_weight_bounds_and_optimality():
    """Selected blend weight lies in [0.5, 1] and minimizes the grid gap."""
    rng = np.random.default_rng(606)
    params = Params()
    all_ok = True
    for _ in range(100):
        frame = rng.integers(0, 256, (32, 32, 3), dtype=np.uint8)
        prev_lut = np.sort(rng.uniform(0, 255, (3, 256)), axis=1)
        prev_lut[:, 0], prev_lut[:, -1] = 0.0, 255.0
        state = TemporalState(
            frame_index=1, prev_curves=prev_lut, prev_entropy=float(rng.uniform(0, 8))
        )
        current = identity_curves()
        weight = select_temporal_weight(frame, current, state, params)
        in_bounds = 0.5 <= weight <= 1.0

        lum = luminance_histogram(frame)
        resp_cur = luminance_response(current)
        resp_prev = luminance_response(prev_lut)
        gaps = np.array(
            [
                abs(
                    response_entropy(lum, (1 - w) * resp_cur + w * resp_prev, 2.0)
                    - state.prev_entropy
                )
                for w in WEIGHT_GRID
            ]
        )
        # optimal before the floor clamp: the winner's gap equals the grid minimum
        raw_best = WEIGHT_GRID[int(np.argmin(gaps))]
        clamped = max(float(raw_best), params.blend_floor)
        all_ok &= in_bounds and weight == clamped
    announce(6, "temporal weight in [0.5, 1.0] and grid-optimal before clamping", all_ok)


def test_criterion_07_flicker_reduction_versus_per_frame(tmp_path):
    """Temporal-histogram mode vs per-frame mode on the default flicker fixture.

    Required: TAMBE_mu(ecb) <= 0.7 * TAMBE_mu(hem) and HIBTE(ecb) <= HIBTE(hem).

    Known-red, kept faithful rather than weakened.  A static scene under
    a monotone per-frame gain is relabeled, not changed: the mean of a
    per-frame-equalized output depends on the histogram only through
    sum(e^2) (mean = 127.5*(1+sum(e^2)) for the equalizing part), so the
    per-frame mode self-cancels this fixture's flicker almost entirely,
    while the temporally smoothed target applies a stale mapping to moved
    content and re-admits it.  Both arms share the same uniform-blend
    identity leak, so their ratio cannot drop below ~1 on any
    static-scene-times-gain fixture; measured ~1.2-1.5 across scene
    families (wide, bimodal, clamping, near-black, spiky).  The 0.7
    target transfers a reduction measured on real videos, where
    per-frame adaptation itself jitters; a pure relabeling fixture
    cannot reproduce that regime.
    """
    start = time.monotonic()
    frames, sidecar = generate(SynthSpec())  # 32 frames, 128x96, +/-30% gain
    store_frames(tmp_path / "in", frames, "ppm")
    write_sidecar(tmp_path / "rois.json", sidecar)
    results = {}
    for mode in ("hem", "ecb"):
        run(Job(input_dir=tmp_path / "in", output_dir=tmp_path / mode, mode=mode))
        results[mode] = report(load_frames(tmp_path / mode))
    elapsed = time.monotonic() - start
    ratio = results["ecb"].TAMBE_mu / results["hem"].TAMBE_mu
    hibte_ok = results["ecb"].HIBTE <= results["hem"].HIBTE
    passed = ratio <= 0.7 and hibte_ok and elapsed < 30.0
    announce(
        7,
        f"flicker reduction: TAMBE ratio {ratio:.2f} (need <= 0.70), "
        f"HIBTE {results['ecb'].HIBTE:.3f} vs {results['hem'].HIBTE:.3f}, {elapsed:.1f}s",
        passed,
    )


def test_criterion_08_intra_frame_entropy_gain():
    """Region fusion lifts luminance entropy by >= 0.2 bits on 90% of seeds."""
    params = Params()
    wins = 0
    for seed in range(20):
        frames, sidecar = generate(SynthSpec.two_roi(seed=seed))
        frame = frames[0]
        curves, _ = fuse_global(frame, sidecar.default_boxes, params)
        gain = metric_H([apply_curves(frame, curves)]) - metric_H([frame])
        wins += 1 if gain >= 0.2 else 0
    announce(8, f"entropy gain >= 0.2 bits on {wins}/20 seeds (need >= 18)", wins >= 18)


def test_criterion_09_static_sequence_fixed_point(tmp_path):
    """Identical input frames give identical outputs and zero temporal metrics."""
    rng = np.random.default_rng(909)
    frame = rng.integers(0, 256, (48, 64, 3), dtype=np.uint8)
    frames = np.stack([frame] * 8)
    store_frames(tmp_path / "in", frames, "ppm")
    _, sidecar = generate(SynthSpec(width=64, height=48, frames=1))
    write_sidecar(tmp_path / "rois.json", sidecar)
    run(
        Job(
            input_dir=tmp_path / "in",
            output_dir=tmp_path / "out",
            mode="aecb",
            sidecar_path=tmp_path / "rois.json",
        )
    )
    out = load_frames(tmp_path / "out")
    identical = all(np.array_equal(out[t], out[0]) for t in range(8))
    result = report(out)
    zeros = (result.TAMBE_mu, result.TAMBE_sigma, result.HIBTE) == (0.0, 0.0, 0.0)
    announce(9, "static sequence maps to identical outputs, temporal metrics 0", identical and zeros)


def test_criterion_10_determinism(tmp_path):
    """Two runs of the same job produce bit-identical artifacts."""
    frames, sidecar = generate(SynthSpec(frames=8, seed=7))
    store_frames(tmp_path / "in", frames, "png")
    write_sidecar(tmp_path / "rois.json", sidecar)
    for tag in ("a", "b"):
        run(
            Job(
                input_dir=tmp_path / "in",
                output_dir=tmp_path / f"out_{tag}",
                mode="aecb",
                sidecar_path=tmp_path / "rois.json",
                dump_curves_dir=tmp_path / f"curves_{tag}",
                report_path=tmp_path / f"report_{tag}.json",
            )
        )
    same = True
    for sub in ("out", "curves"):
        files_a = sorted((tmp_path / f"{sub}_a").iterdir())
        files_b = sorted((tmp_path / f"{sub}_b").iterdir())
        same &= len(files_a) == len(files_b)
        same &= all(pa.read_bytes() == pb.read_bytes() for pa, pb in zip(files_a, files_b))
    same &= (tmp_path / "report_a.json").read_bytes() == (tmp_path / "report_b.json").read_bytes()
    announce(10, "byte-identical frames, curve dumps and reports across runs", same)
