"""Frame-sequence, ROI-sidecar, config, curve-dump, and report I/O.

Frames live in a directory as ``frame_%06d.png`` or ``frame_%06d.ppm``
(binary P6), numbered contiguously; both formats are lossless so a
store/load round-trip is bit-identical.  The ROI sidecar is a JSON file
with a ``default`` box list applied to every frame plus an optional
``frames`` map of index -> box list overrides.  Config files are flat
``key=value`` lines mirroring the ``Params`` fields.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import (
    ConfigError,
    FrameIOError,
    Params,
    RoiBox,
    SidecarError,
    validate_frame,
)

FRAME_PATTERN = re.compile(r"^frame_(\d{6})\.(png|ppm)$")
FORMATS = ("png", "ppm")


def frame_name(index: int, fmt: str) -> str:
    return f"frame_{index:06d}.{fmt}"


def _write_ppm(path: Path, frame: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(f"P6\n{frame.shape[1]} {frame.shape[0]}\n255\n".encode("ascii"))
        fh.write(frame.tobytes())


def _read_ppm(path: Path) -> np.ndarray:
    data = path.read_bytes()
    # Header: magic, width, height, maxval, separated by whitespace;
    # '#' comments allowed between tokens.
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FrameIOError(f"{path}: truncated PPM header")
        tokens.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    if tokens[0] != b"P6":
        raise FrameIOError(f"{path}: not a binary PPM (P6) file")
    width, height, maxval = (int(t) for t in tokens[1:])
    if maxval != 255:
        raise FrameIOError(f"{path}: only maxval 255 PPMs are supported")
    expected = width * height * 3
    raster = data[pos : pos + expected]
    if len(raster) != expected:
        raise FrameIOError(f"{path}: raster has {len(raster)} bytes, expected {expected}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3).copy()


def _write_png(path: Path, frame: np.ndarray) -> None:
    from PIL import Image

    Image.fromarray(frame, mode="RGB").save(path, format="PNG")


def _read_png(path: Path) -> np.ndarray:
    from PIL import Image

    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"), dtype=np.uint8).copy()


def store_frames(directory, frames, fmt: str = "png") -> list[Path]:
    """Write frames as frame_000000.fmt, frame_000001.fmt, ..."""
    if fmt not in FORMATS:
        raise FrameIOError(f"unsupported format {fmt!r}; expected one of {FORMATS}")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for index, frame in enumerate(frames):
        frame = validate_frame(frame)
        path = directory / frame_name(index, fmt)
        if fmt == "png":
            _write_png(path, frame)
        else:
            _write_ppm(path, frame)
        paths.append(path)
    return paths


def load_frames(directory) -> np.ndarray:
    """Load a contiguously numbered frame sequence as an (N, H, W, 3) array."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FrameIOError(f"{directory} is not a directory")
    found = {}
    formats = set()
    for entry in sorted(directory.iterdir()):
        match = FRAME_PATTERN.match(entry.name)
        if match:
            found[int(match.group(1))] = entry
            formats.add(match.group(2))
    if not found:
        raise FrameIOError(f"{directory} contains no frame_NNNNNN.png/ppm files")
    if len(formats) > 1:
        raise FrameIOError(f"{directory} mixes frame formats: {sorted(formats)}")
    indices = sorted(found)
    for expected, got in zip(range(indices[0], indices[0] + len(indices)), indices):
        if expected != got:
            raise FrameIOError(
                f"{directory}: frame numbering has a gap, missing index {expected}"
            )
    fmt = formats.pop()
    reader = _read_png if fmt == "png" else _read_ppm
    frames = [reader(found[i]) for i in indices]
    shape = frames[0].shape
    for i, frame in zip(indices, frames):
        if frame.shape != shape:
            raise FrameIOError(
                f"{directory}: frame {i} has shape {frame.shape}, expected {shape}"
            )
    return np.stack(frames)


@dataclass
class RoiSidecar:
    """Default ROI boxes plus optional per-frame overrides."""

    default_boxes: list[RoiBox] = field(default_factory=list)
    frame_overrides: dict[int, list[RoiBox]] = field(default_factory=dict)

    def boxes_for(self, index: int) -> list[RoiBox]:
        return self.frame_overrides.get(index, self.default_boxes)

    def validate(self, width: int, height: int, frame_count: int) -> None:
        for box in self.default_boxes:
            try:
                box.validate_in(width, height)
            except Exception as exc:
                raise SidecarError(f"default box invalid: {exc}") from exc
        for index, boxes in self.frame_overrides.items():
            if not (0 <= index < frame_count):
                raise SidecarError(
                    f"override references frame {index}, but only {frame_count} frames exist"
                )
            for box in boxes:
                try:
                    box.validate_in(width, height)
                except Exception as exc:
                    raise SidecarError(f"override for frame {index} invalid: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "default": [b.to_dict() for b in self.default_boxes],
            "frames": {str(i): [b.to_dict() for b in boxes] for i, boxes in self.frame_overrides.items()},
        }


def _box_from_dict(obj: dict, where: str) -> RoiBox:
    try:
        return RoiBox(
            x0=int(obj["x0"]),
            y0=int(obj["y0"]),
            w=int(obj["w"]),
            h=int(obj["h"]),
            label=str(obj.get("label", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SidecarError(f"{where}: bad box entry {obj!r} ({exc})") from exc


def load_sidecar(path) -> RoiSidecar:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except FileNotFoundError:
        raise SidecarError(f"sidecar file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise SidecarError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    if not isinstance(payload, dict):
        raise SidecarError(f"{path}: top level must be an object")
    default = [
        _box_from_dict(obj, f"{path} default[{i}]")
        for i, obj in enumerate(payload.get("default", []))
    ]
    overrides = {}
    for key, entries in payload.get("frames", {}).items():
        try:
            index = int(key)
        except ValueError:
            raise SidecarError(f"{path}: frame index {key!r} is not an integer") from None
        overrides[index] = [
            _box_from_dict(obj, f"{path} frames[{key}][{i}]") for i, obj in enumerate(entries)
        ]
    return RoiSidecar(default_boxes=default, frame_overrides=overrides)


def write_sidecar(path, sidecar: RoiSidecar) -> None:
    Path(path).write_text(json.dumps(sidecar.to_dict(), indent=2, sort_keys=True) + "\n")


def _parse_param(key: str, raw: str):
    if key not in Params.field_names():
        raise ConfigError(f"unknown parameter {key!r}")
    if key == "temporal_mode":
        return raw.strip()
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"parameter {key!r} expects a number, got {raw!r}") from None


def load_config(path, base: Params | None = None) -> Params:
    """Read flat key=value lines; '#' starts a comment, blank lines ignored."""
    params = base or Params()
    overrides = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in text.split("=", 1))
        overrides[key] = _parse_param(key, raw)
    return params.override(**overrides)


def apply_overrides(params: Params, pairs) -> Params:
    """Apply CLI-style key=value override strings."""
    overrides = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        key, raw = (part.strip() for part in pair.split("=", 1))
        overrides[key] = _parse_param(key, raw)
    return params.override(**overrides)


def write_curve_dump(path, curves: np.ndarray) -> None:
    """One line per level: x <TAB> R <TAB> G <TAB> B, three decimals."""
    lines = [
        f"{x}\t{curves[0][x]:.3f}\t{curves[1][x]:.3f}\t{curves[2][x]:.3f}"
        for x in range(curves.shape[1])
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def read_curve_dump(path) -> np.ndarray:
    rows = []
    for line in Path(path).read_text().splitlines():
        parts = line.split("\t")
        rows.append([float(v) for v in parts[1:4]])
    return np.asarray(rows).T


def write_report(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
