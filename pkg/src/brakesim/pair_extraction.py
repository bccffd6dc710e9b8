"""Per-frame extraction of clean car-following pairs from a recording.

Filter chain per frame: all ordered vehicle pairs, heading alignment,
bearing to the lead, lateral offset, VRU proximity corridor, closest lead
per follower; then across frames: minimum following duration and vehicle
type admission.  Survivors become 1-D start scenes by projection onto the
follower's heading axis.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

from .dataset_ingest import (
    VEHICLE_KINDS,
    VRU_KINDS,
    ObjectKind,
    ObjectSample,
    Recording,
    TrackMeta,
)
from .driver_models import VehicleState
from .sim_engine import StartScene


class ProjectionDegenerate(Exception):
    """Projected bumper gap is not positive; the pair is unusable."""


@dataclass(frozen=True)
class FilterConfig:
    heading_max_deg: float = 15.0
    bearing_max_deg: float = 15.0
    lateral_offset_max_m: float = 1.0
    vru_corridor_margin_m: float = 2.0
    min_follow_duration_s: float = 1.0
    follower_kinds: frozenset[ObjectKind] = frozenset(
        {ObjectKind.CAR, ObjectKind.VAN}
    )
    lead_kinds: frozenset[ObjectKind] = frozenset(
        {
            ObjectKind.CAR,
            ObjectKind.VAN,
            ObjectKind.TRUCK,
            ObjectKind.BUS,
            ObjectKind.TRAILER,
        }
    )
    # Applies the follower-kind admission before pairing instead of last.
    # Only the follower side is safe to hoist: dropping leads early would
    # change which lead is "closest" for followers whose nearest lead has
    # an inadmissible type, so the lead-kind check always stays after the
    # closest-lead selection.
    early_type_filter: bool = False

    def __post_init__(self):
        for name in (
            "heading_max_deg",
            "bearing_max_deg",
            "lateral_offset_max_m",
            "vru_corridor_margin_m",
            "min_follow_duration_s",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not self.follower_kinds or not self.lead_kinds:
            raise ValueError("kind sets must be non-empty")


@dataclass(frozen=True)
class FollowingPair:
    follower_id: int
    lead_id: int
    frame: int
    longitudinal_gap_m: float
    follower_speed_mps: float
    lead_speed_mps: float


@dataclass
class ExtractionDiagnostics:
    n_frames: int = 0
    n_candidate_pairs: int = 0
    n_after_geometry: int = 0
    n_after_vru: int = 0
    n_frame_survivors: int = 0
    n_degenerate: int = 0
    n_emitted: int = 0


def shortest_angle_deg(a: float, b: float) -> float:
    """Signed shortest angular distance a - b, in (-180, 180]."""
    d = (a - b) % 360.0
    return d - 360.0 if d > 180.0 else d


def _heading_frame(follower: ObjectSample, other_x: float, other_y: float):
    """(longitudinal, lateral) of a point in the follower-heading frame."""
    theta = math.radians(follower.heading_deg)
    ux, uy = math.cos(theta), math.sin(theta)
    rx, ry = other_x - follower.x_m, other_y - follower.y_m
    return ux * rx + uy * ry, ux * ry - uy * rx


def projected_center_distance(follower: ObjectSample, lead: ObjectSample) -> float:
    """Center distance projected onto the follower's heading axis."""
    lon, _ = _heading_frame(follower, lead.x_m, lead.y_m)
    return lon


def projected_bumper_gap(follower: ObjectSample, lead: ObjectSample) -> float:
    return projected_center_distance(follower, lead) - (
        follower.length_m + lead.length_m
    ) / 2.0


def candidate_pairs(
    frame_samples: list[ObjectSample],
) -> list[tuple[ObjectSample, ObjectSample]]:
    """All ordered (follower, lead) pairs of vehicle-kind samples."""
    vehicles = [s for s in frame_samples if s.kind in VEHICLE_KINDS]
    return [(f, l) for f in vehicles for l in vehicles if f.track_id != l.track_id]


def geometric_filter(
    pair: tuple[ObjectSample, ObjectSample], cfg: FilterConfig
) -> bool:
    """Heading alignment, bearing to the lead center, lateral offset."""
    follower, lead = pair
    if abs(shortest_angle_deg(follower.heading_deg, lead.heading_deg)) > cfg.heading_max_deg:
        return False
    lon, lat = _heading_frame(follower, lead.x_m, lead.y_m)
    bearing = math.degrees(math.atan2(lat, lon))
    if abs(bearing) > cfg.bearing_max_deg:
        return False
    return abs(lat) <= cfg.lateral_offset_max_m


def vru_proximity_filter(
    pair: tuple[ObjectSample, ObjectSample],
    frame_samples: list[ObjectSample],
    cfg: FilterConfig,
) -> bool:
    """Keep the pair unless a VRU sits alongside or between the two.

    The exclusion corridor runs (in the follower-heading frame) from the
    follower's rear to the lead's front; its half width is half the wider
    vehicle plus the configured margin.  VRUs are treated as points.
    """
    follower, lead = pair
    lon_lead, _ = _heading_frame(follower, lead.x_m, lead.y_m)
    lon_lo = -follower.length_m / 2.0
    lon_hi = lon_lead + lead.length_m / 2.0
    half_width = max(follower.width_m, lead.width_m) / 2.0 + cfg.vru_corridor_margin_m
    for s in frame_samples:
        if s.kind not in VRU_KINDS:
            continue
        lon, lat = _heading_frame(follower, s.x_m, s.y_m)
        if lon_lo <= lon <= lon_hi and abs(lat) <= half_width:
            return False
    return True


def select_closest_lead(
    pairs: list[tuple[ObjectSample, ObjectSample]],
) -> tuple[ObjectSample, ObjectSample] | None:
    """Pair with the smallest longitudinal gap; ties go to the lower lead id."""
    if not pairs:
        return None
    return min(
        pairs, key=lambda p: (projected_bumper_gap(p[0], p[1]), p[1].track_id)
    )


def duration_and_type_filter(
    pair_timeline: list[tuple[ObjectSample, ObjectSample]],
    cfg: FilterConfig,
    frame_rate_hz: float,
) -> list[FollowingPair]:
    """Emit per-frame pairs of runs long enough and of admitted types.

    ``pair_timeline`` holds the frame-ordered survivors of one
    (follower, lead) key; a one-frame gap breaks a run.  A run of n frames
    lasts n / frame_rate seconds; runs strictly shorter than the minimum
    following duration emit nothing.
    """
    if not pair_timeline:
        return []
    min_frames = cfg.min_follow_duration_s * frame_rate_hz - 1e-9
    follower, lead = pair_timeline[0]
    if follower.kind not in cfg.follower_kinds or lead.kind not in cfg.lead_kinds:
        return []

    out: list[FollowingPair] = []
    run: list[tuple[ObjectSample, ObjectSample]] = []

    def flush():
        if len(run) >= min_frames:
            for f, l in run:
                out.append(
                    FollowingPair(
                        follower_id=f.track_id,
                        lead_id=l.track_id,
                        frame=f.frame,
                        longitudinal_gap_m=projected_bumper_gap(f, l),
                        follower_speed_mps=f.speed_mps,
                        lead_speed_mps=l.speed_mps,
                    )
                )

    prev_frame: int | None = None
    for f, l in sorted(pair_timeline, key=lambda p: p[0].frame):
        if prev_frame is not None and f.frame != prev_frame + 1:
            flush()
            run = []
        run.append((f, l))
        prev_frame = f.frame
    flush()
    return out


def extract_following_pairs(
    rec: Recording, cfg: FilterConfig | None = None
) -> tuple[list[FollowingPair], ExtractionDiagnostics]:
    """Run the full filter chain over a recording.

    Pairs whose projected bumper gap is not positive are dropped before
    the closest-lead selection and counted as degenerate.
    """
    cfg = cfg or FilterConfig()
    diag = ExtractionDiagnostics(n_frames=rec.frame_count)
    survivors: dict[tuple[int, int], list[tuple[ObjectSample, ObjectSample]]] = {}

    for frame in sorted(rec.frames):
        frame_samples = list(rec.frames[frame])
        pairs = candidate_pairs(frame_samples)
        if cfg.early_type_filter:
            pairs = [p for p in pairs if p[0].kind in cfg.follower_kinds]
        diag.n_candidate_pairs += len(pairs)

        pairs = [p for p in pairs if geometric_filter(p, cfg)]
        diag.n_after_geometry += len(pairs)
        pairs = [p for p in pairs if vru_proximity_filter(p, frame_samples, cfg)]
        diag.n_after_vru += len(pairs)

        usable = []
        for p in pairs:
            if projected_bumper_gap(p[0], p[1]) > 0:
                usable.append(p)
            else:
                diag.n_degenerate += 1

        by_follower: dict[int, list] = {}
        for p in usable:
            by_follower.setdefault(p[0].track_id, []).append(p)
        for follower_pairs in by_follower.values():
            best = select_closest_lead(follower_pairs)
            diag.n_frame_survivors += 1
            key = (best[0].track_id, best[1].track_id)
            survivors.setdefault(key, []).append(best)

    emitted: list[FollowingPair] = []
    for key in sorted(survivors):
        emitted.extend(
            duration_and_type_filter(survivors[key], cfg, rec.frame_rate_hz)
        )
    emitted.sort(key=lambda p: (p.frame, p.follower_id, p.lead_id))
    diag.n_emitted = len(emitted)
    return emitted, diag


def scene_id_for(recording_id: str, pair: FollowingPair) -> str:
    return f"{recording_id}:{pair.follower_id}:{pair.lead_id}:{pair.frame}"


def to_start_scene(
    pair: FollowingPair,
    tracks_meta: dict[int, TrackMeta],
    recording_id: str = "",
) -> StartScene:
    """1-D start scene on the follower-heading axis, follower center at 0."""
    if pair.longitudinal_gap_m <= 0:
        raise ProjectionDegenerate(
            f"non-positive projected gap {pair.longitudinal_gap_m:.3f} m "
            f"for pair ({pair.follower_id}, {pair.lead_id}) at frame {pair.frame}"
        )
    lead_len = tracks_meta[pair.lead_id].length_m
    fol_len = tracks_meta[pair.follower_id].length_m
    return StartScene(
        lead=VehicleState(
            position_m=pair.longitudinal_gap_m + (lead_len + fol_len) / 2.0,
            speed_mps=pair.lead_speed_mps,
            length_m=lead_len,
        ),
        follower=VehicleState(
            position_m=0.0,
            speed_mps=pair.follower_speed_mps,
            length_m=fol_len,
        ),
        scene_id=scene_id_for(recording_id, pair),
    )


SCENES_CSV_COLUMNS = [
    "scene_id",
    "follower_id",
    "lead_id",
    "frame",
    "gap_m",
    "follower_speed_mps",
    "lead_speed_mps",
    "lead_length_m",
    "follower_length_m",
]


def write_scenes_csv(
    path: str | Path,
    pairs: list[FollowingPair],
    tracks_meta: dict[int, TrackMeta],
    recording_id: str = "",
) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCENES_CSV_COLUMNS)
        for p in pairs:
            writer.writerow(
                [
                    scene_id_for(recording_id, p),
                    p.follower_id,
                    p.lead_id,
                    p.frame,
                    repr(p.longitudinal_gap_m),
                    repr(p.follower_speed_mps),
                    repr(p.lead_speed_mps),
                    repr(tracks_meta[p.lead_id].length_m),
                    repr(tracks_meta[p.follower_id].length_m),
                ]
            )


def write_start_scenes_csv(path: str | Path, scenes: list[StartScene]) -> None:
    """Export ready-made scenes (e.g. synthetic ones) in the scenes schema.

    The lead gets track id 0 and the follower 1; the frame column numbers
    the scenes.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCENES_CSV_COLUMNS)
        for i, s in enumerate(scenes):
            bumper_gap = (s.lead.position_m - s.follower.position_m) - (
                s.lead.length_m + s.follower.length_m
            ) / 2.0
            writer.writerow(
                [
                    s.scene_id,
                    1,
                    0,
                    i,
                    repr(bumper_gap),
                    repr(s.follower.speed_mps),
                    repr(s.lead.speed_mps),
                    repr(s.lead.length_m),
                    repr(s.follower.length_m),
                ]
            )


def read_scenes_csv(path: str | Path) -> list[StartScene]:
    """Load exported scenes; follower center sits at the origin."""
    scenes = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not set(SCENES_CSV_COLUMNS) <= set(
            reader.fieldnames
        ):
            raise ValueError(f"{path}: not a scenes CSV (missing columns)")
        for row in reader:
            gap = float(row["gap_m"])
            lead_len = float(row["lead_length_m"])
            fol_len = float(row["follower_length_m"])
            scenes.append(
                StartScene(
                    lead=VehicleState(
                        position_m=gap + (lead_len + fol_len) / 2.0,
                        speed_mps=float(row["lead_speed_mps"]),
                        length_m=lead_len,
                    ),
                    follower=VehicleState(
                        position_m=0.0,
                        speed_mps=float(row["follower_speed_mps"]),
                        length_m=fol_len,
                    ),
                    scene_id=row["scene_id"],
                )
            )
    return scenes
