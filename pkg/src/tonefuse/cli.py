"""Command-line interface.

Verbs:

* ``enhance`` -- run an enhancement job over a frame directory;
* ``metrics`` -- print the quality report of an existing sequence;
* ``curve``   -- dump the per-frame tone curves without writing frames;
* ``synth``   -- generate synthetic fixture sequences plus ROI sidecar.

Exit codes: 0 success; 2 usage or configuration error; 3 frame I/O
error; 4 sidecar/ROI validation error; 5 internal state error.  Set
``TONEFUSE_LOG=debug`` (or any standard level name) for more logging.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace

from .core import (
    BoundsError,
    ConfigError,
    CurveError,
    FrameIOError,
    InputError,
    Params,
    SidecarError,
    StateError,
)
from .frameio import apply_overrides, load_config, load_frames, store_frames, write_report, write_sidecar
from .metrics import report
from .pipeline import MODES, Job, run
from .synth import KINDS, SynthSpec, generate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FRAME_IO = 3
EXIT_SIDECAR = 4
EXIT_STATE = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tonefuse",
        description="Region-aware, temporally consistent tone-curve enhancement "
        "for 8-bit frame sequences.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    enhance = sub.add_parser("enhance", help="enhance a frame sequence")
    enhance.add_argument("--in", dest="input_dir", required=True, metavar="DIR")
    enhance.add_argument("--out", dest="output_dir", required=True, metavar="DIR")
    enhance.add_argument("--rois", dest="sidecar", metavar="FILE")
    enhance.add_argument("--mode", required=True, choices=MODES)
    enhance.add_argument("--config", metavar="FILE")
    enhance.add_argument("--dump-curves", dest="dump_curves", metavar="DIR")
    enhance.add_argument("--report", metavar="FILE")
    enhance.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")

    metrics_p = sub.add_parser("metrics", help="report quality metrics of a sequence")
    metrics_p.add_argument("--in", dest="input_dir", required=True, metavar="DIR")
    metrics_p.add_argument("--report", metavar="FILE")
    metrics_p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")

    curve = sub.add_parser("curve", help="dump per-frame tone curves without writing frames")
    curve.add_argument("--in", dest="input_dir", required=True, metavar="DIR")
    curve.add_argument("--out", dest="dump_curves", required=True, metavar="DIR")
    curve.add_argument("--rois", dest="sidecar", metavar="FILE")
    curve.add_argument("--mode", required=True, choices=MODES)
    curve.add_argument("--config", metavar="FILE")
    curve.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")

    synth = sub.add_parser("synth", help="generate a synthetic fixture sequence")
    synth.add_argument("--kind", required=True, choices=KINDS)
    synth.add_argument("--out", dest="output_dir", required=True, metavar="DIR")
    synth.add_argument("--frames", type=int)
    synth.add_argument("--size", metavar="WxH")
    synth.add_argument("--seed", type=int)
    synth.add_argument("--amplitude", type=float)
    synth.add_argument("--period", type=float)
    synth.add_argument("--noise", type=float)
    synth.add_argument("--format", choices=("png", "ppm"), default="png")
    return parser


def _load_params(args) -> Params:
    params = Params()
    if getattr(args, "config", None):
        params = load_config(args.config, params)
    if getattr(args, "overrides", None):
        params = apply_overrides(params, args.overrides)
    return params.validate()


def _cmd_enhance(args) -> int:
    job = Job(
        input_dir=args.input_dir,
        output_dir=args.output_dir,
        mode=args.mode,
        sidecar_path=args.sidecar,
        params=_load_params(args),
        dump_curves_dir=args.dump_curves,
        report_path=args.report,
    )
    summary = run(job)
    if "report" in summary:
        for side in ("input", "output"):
            print(f"[{side}]")
            for key, value in summary["report"][side].items():
                print(f"{key}={value}")
    print(f"enhanced {summary['frames']} frame(s) -> {args.output_dir}")
    return EXIT_OK


def _cmd_metrics(args) -> int:
    params = _load_params(args)
    frames = load_frames(args.input_dir)
    result = report(frames, params.entropy_base)
    print(result.text_block())
    if args.report:
        write_report(args.report, result.to_dict())
    return EXIT_OK


def _cmd_curve(args) -> int:
    job = Job(
        input_dir=args.input_dir,
        output_dir=None,
        mode=args.mode,
        sidecar_path=args.sidecar,
        params=_load_params(args),
        dump_curves_dir=args.dump_curves,
    )
    summary = run(job)
    print(f"dumped curves for {summary['frames']} frame(s) -> {args.dump_curves}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    spec = SynthSpec.two_roi() if args.kind == "two_roi" else SynthSpec(kind=args.kind)
    updates = {}
    if args.frames is not None:
        updates["frames"] = args.frames
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.amplitude is not None:
        updates["gain_amplitude"] = args.amplitude
    if args.period is not None:
        updates["gain_period"] = args.period
    if args.noise is not None:
        updates["noise_sigma"] = args.noise
    if args.size:
        try:
            w, h = (int(part) for part in args.size.lower().split("x"))
        except ValueError:
            raise ConfigError(f"--size expects WxH, got {args.size!r}") from None
        updates.update(width=w, height=h)
    spec = replace(spec, **updates)
    frames, sidecar = generate(spec)
    store_frames(args.output_dir, frames, args.format)
    sidecar_path = os.path.join(args.output_dir, "rois.json")
    write_sidecar(sidecar_path, sidecar)
    print(f"wrote {len(frames)} {spec.kind} frame(s) and {sidecar_path}")
    return EXIT_OK


def main(argv=None) -> int:
    level = os.environ.get("TONEFUSE_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {
        "enhance": _cmd_enhance,
        "metrics": _cmd_metrics,
        "curve": _cmd_curve,
        "synth": _cmd_synth,
    }[args.verb]
    try:
        return handler(args)
    except (SidecarError, BoundsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIDECAR
    except (ConfigError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FrameIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FRAME_IO
    except (StateError, CurveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STATE


if __name__ == "__main__":
    sys.exit(main())
