"""Drone-recording CSV ingest.

Reads a tracks file (one row per object per frame) and a tracks-meta file
(one row per track: class and dimensions) into an immutable
:class:`Recording`.  The source schema is configuration, not code: a
:class:`ColumnMap` names the columns, so any of the common top-down drone
dataset layouts loads unchanged.  All values are converted to SI at parse
time and headings normalized to [0, 360).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path


class DataError(Exception):
    """Base class for recoverable input-data problems."""


class MissingColumn(DataError):
    pass


class MalformedRow(DataError):
    pass


class InconsistentMeta(DataError):
    pass


class EmptyRecording(DataError):
    pass


class FrameOutOfRange(DataError):
    pass


class ObjectKind(Enum):
    CAR = "car"
    VAN = "van"
    TRUCK = "truck"
    BUS = "bus"
    TRAILER = "trailer"
    PEDESTRIAN = "pedestrian"
    BICYCLE = "bicycle"
    MOTORCYCLE = "motorcycle"
    OTHER = "other"


VRU_KINDS = frozenset(
    {ObjectKind.PEDESTRIAN, ObjectKind.BICYCLE, ObjectKind.MOTORCYCLE}
)
VEHICLE_KINDS = frozenset(set(ObjectKind) - VRU_KINDS)


def parse_kind(label: str) -> ObjectKind:
    """Dataset class string to kind; unknown labels map to ``other``."""
    try:
        return ObjectKind(label.strip().lower())
    except ValueError:
        return ObjectKind.OTHER


@dataclass(frozen=True)
class ObjectSample:
    track_id: int
    frame: int
    x_m: float
    y_m: float
    heading_deg: float
    speed_mps: float
    length_m: float
    width_m: float
    kind: ObjectKind


@dataclass(frozen=True)
class TrackMeta:
    kind: ObjectKind
    length_m: float
    width_m: float
    first_frame: int
    last_frame: int


@dataclass
class ColumnMap:
    """Names of the source columns for each sample field.

    ``speed`` takes precedence when set; otherwise the speed magnitude is
    computed from the ``vx``/``vy`` component columns.  ``speed_unit``
    accepts ``mps`` or ``kmh``.
    """

    track_id: str = "trackId"
    frame: str = "frame"
    x: str = "xCenter"
    y: str = "yCenter"
    heading: str = "heading"
    speed: str | None = None
    vx: str | None = "xVelocity"
    vy: str | None = "yVelocity"
    meta_track_id: str = "trackId"
    meta_kind: str = "class"
    meta_length: str = "length"
    meta_width: str = "width"
    speed_unit: str = "mps"
    frame_rate_hz: float = 25.0

    def __post_init__(self):
        if self.speed_unit not in ("mps", "kmh"):
            raise ValueError(f"speed_unit must be mps or kmh, got {self.speed_unit!r}")
        if self.frame_rate_hz <= 0:
            raise ValueError("frame_rate_hz must be > 0")
        if self.speed is None and (self.vx is None or self.vy is None):
            raise ValueError("need either a speed column or vx/vy columns")


def parse_column_map(path: str | Path) -> ColumnMap:
    """Read a ``key = value`` config file into a :class:`ColumnMap`."""
    fields = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MalformedRow(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "frame_rate_hz":
            fields[key] = float(value)
        elif key in ("speed", "vx", "vy") and value in ("", "none"):
            fields[key] = None
        else:
            fields[key] = value
    try:
        return ColumnMap(**fields)
    except TypeError as exc:
        raise MalformedRow(f"{path}: unknown column-map key ({exc})") from None


def default_column_map_path() -> Path:
    """Shipped mapping for the common drone-dataset column names."""
    return Path(resources.files("brakesim").joinpath("data/unid_column_map.cfg"))


def normalize_heading(deg: float) -> float:
    return deg % 360.0


@dataclass(frozen=True)
class Recording:
    """All samples of one recording, immutable after load."""

    frame_rate_hz: float
    frames: dict[int, tuple[ObjectSample, ...]]
    tracks_meta: dict[int, TrackMeta]
    recording_id: str = ""

    @property
    def frame_count(self) -> int:
        return max(self.frames) + 1 if self.frames else 0

    def frame_time_s(self, frame: int) -> float:
        return frame / self.frame_rate_hz

    def frame_view(self, frame: int) -> list[ObjectSample]:
        """Samples present at ``frame``, in stable track-id order."""
        if frame < 0 or frame >= self.frame_count:
            raise FrameOutOfRange(
                f"frame {frame} outside [0, {self.frame_count})"
            )
        return list(self.frames.get(frame, ()))


def frame_view(rec: Recording, frame: int) -> list[ObjectSample]:
    return rec.frame_view(frame)


def _float_field(row: dict, column: str, path, lineno: int) -> float:
    raw = row.get(column)
    if raw is None or raw == "":
        raise MalformedRow(f"{path}:{lineno}: missing value for {column!r}")
    try:
        return float(raw)
    except ValueError:
        raise MalformedRow(
            f"{path}:{lineno}: cannot parse {column!r} value {raw!r}"
        ) from None


def _int_field(row: dict, column: str, path, lineno: int) -> int:
    value = _float_field(row, column, path, lineno)
    if value != int(value):
        raise MalformedRow(f"{path}:{lineno}: {column!r} must be an integer")
    return int(value)


def _require_columns(header, needed, path):
    missing = [c for c in needed if c not in header]
    if missing:
        raise MissingColumn(f"{path}: missing column(s) {missing}")


def load_recording(
    tracks_path: str | Path,
    meta_path: str | Path,
    column_map: ColumnMap | None = None,
    recording_id: str | None = None,
) -> Recording:
    """Parse and validate the tracks / tracks-meta CSV pair."""
    cmap = column_map or ColumnMap()
    meta = _load_meta(Path(meta_path), cmap)
    samples = _load_tracks(Path(tracks_path), cmap, meta)
    if not samples:
        raise EmptyRecording(f"{tracks_path}: no samples")

    by_track: dict[int, list[ObjectSample]] = {}
    frames: dict[int, list[ObjectSample]] = {}
    for s in samples:
        by_track.setdefault(s.track_id, []).append(s)
        frames.setdefault(s.frame, []).append(s)

    tracks_meta: dict[int, TrackMeta] = {}
    for tid, ss in by_track.items():
        frame_ids = sorted(s.frame for s in ss)
        if len(set(frame_ids)) != len(frame_ids):
            raise InconsistentMeta(f"track {tid}: duplicate (track, frame) sample")
        if frame_ids[-1] - frame_ids[0] + 1 != len(frame_ids):
            raise InconsistentMeta(f"track {tid}: frames are not contiguous")
        kind, length, width = meta[tid]
        tracks_meta[tid] = TrackMeta(
            kind=kind,
            length_m=length,
            width_m=width,
            first_frame=frame_ids[0],
            last_frame=frame_ids[-1],
        )

    return Recording(
        frame_rate_hz=cmap.frame_rate_hz,
        frames={
            f: tuple(sorted(ss, key=lambda s: s.track_id))
            for f, ss in sorted(frames.items())
        },
        tracks_meta=tracks_meta,
        recording_id=recording_id or Path(tracks_path).stem,
    )


def _load_meta(path: Path, cmap: ColumnMap):
    needed = [cmap.meta_track_id, cmap.meta_kind, cmap.meta_length, cmap.meta_width]
    meta: dict[int, tuple[ObjectKind, float, float]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyRecording(f"{path}: empty file")
        _require_columns(reader.fieldnames, needed, path)
        for lineno, row in enumerate(reader, start=2):
            tid = _int_field(row, cmap.meta_track_id, path, lineno)
            entry = (
                parse_kind(row[cmap.meta_kind]),
                _float_field(row, cmap.meta_length, path, lineno),
                _float_field(row, cmap.meta_width, path, lineno),
            )
            if entry[1] <= 0 or entry[2] <= 0:
                raise MalformedRow(f"{path}:{lineno}: non-positive dimensions")
            if tid in meta and meta[tid] != entry:
                raise InconsistentMeta(
                    f"{path}: conflicting meta rows for track {tid}"
                )
            meta[tid] = entry
    return meta


def _load_tracks(path: Path, cmap: ColumnMap, meta) -> list[ObjectSample]:
    needed = [cmap.track_id, cmap.frame, cmap.x, cmap.y, cmap.heading]
    needed += [cmap.speed] if cmap.speed else [cmap.vx, cmap.vy]
    speed_scale = 1.0 / 3.6 if cmap.speed_unit == "kmh" else 1.0

    samples = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyRecording(f"{path}: empty file")
        _require_columns(reader.fieldnames, needed, path)
        for lineno, row in enumerate(reader, start=2):
            tid = _int_field(row, cmap.track_id, path, lineno)
            frame = _int_field(row, cmap.frame, path, lineno)
            if frame < 0:
                raise MalformedRow(f"{path}:{lineno}: negative frame index")
            if tid not in meta:
                raise InconsistentMeta(
                    f"{path}:{lineno}: track {tid} has no meta row"
                )
            if cmap.speed:
                speed = abs(_float_field(row, cmap.speed, path, lineno)) * speed_scale
            else:
                vx = _float_field(row, cmap.vx, path, lineno)
                vy = _float_field(row, cmap.vy, path, lineno)
                speed = math.hypot(vx, vy) * speed_scale
            kind, length, width = meta[tid]
            samples.append(
                ObjectSample(
                    track_id=tid,
                    frame=frame,
                    x_m=_float_field(row, cmap.x, path, lineno),
                    y_m=_float_field(row, cmap.y, path, lineno),
                    heading_deg=normalize_heading(
                        _float_field(row, cmap.heading, path, lineno)
                    ),
                    speed_mps=speed,
                    length_m=length,
                    width_m=width,
                    kind=kind,
                )
            )
    return samples


def save_recording(
    rec: Recording,
    tracks_path: str | Path,
    meta_path: str | Path,
    column_map: ColumnMap | None = None,
) -> None:
    """Write a recording back out in the column-map schema.

    The written speed goes into the plain speed column (components are not
    reconstructed), so round-tripping uses a map with ``speed`` set.
    """
    cmap = column_map or ColumnMap(speed="speed", vx=None, vy=None)
    if cmap.speed is None:
        raise ValueError("save_recording needs a column map with a speed column")
    with open(meta_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [cmap.meta_track_id, cmap.meta_kind, cmap.meta_length, cmap.meta_width]
        )
        for tid in sorted(rec.tracks_meta):
            m = rec.tracks_meta[tid]
            writer.writerow([tid, m.kind.value, repr(m.length_m), repr(m.width_m)])
    with open(tracks_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([cmap.track_id, cmap.frame, cmap.x, cmap.y, cmap.heading, cmap.speed])
        for frame in sorted(rec.frames):
            for s in rec.frames[frame]:
                writer.writerow(
                    [
                        s.track_id,
                        s.frame,
                        repr(s.x_m),
                        repr(s.y_m),
                        repr(s.heading_deg),
                        repr(s.speed_mps),
                    ]
                )
