"""Sweep harness: collision-rate tables over (model, reaction time, braking).

Evaluates every start scene under every parameter cell, aggregates the
collision rate per cell, and optionally keeps per-scenario records with an
impact-severity class.  Cells are independent, so scenes can be chunked
across a worker pool; chunks are reduced in a fixed order, which keeps the
output identical for any worker count.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from .batch_engine import run_batch
from .driver_models import IdmParams, SbmParams, VehicleState
from .sim_engine import (
    FollowerModel,
    SimConfig,
    StartScene,
    Termination,
    run_scenario,
)


class Severity(Enum):
    S0 = "S0"
    AT_LEAST_S1 = "AtLeastS1"


DEFAULT_SEVERITY_THRESHOLD_KMH = 10.0


def classify_severity(
    impact_rel_speed_mps: float,
    threshold_kmh: float = DEFAULT_SEVERITY_THRESHOLD_KMH,
) -> Severity:
    """Rear-impact severity class; strictly above the threshold is at least S1."""
    if impact_rel_speed_mps < 0:
        raise ValueError("impact speed must be >= 0")
    if impact_rel_speed_mps > threshold_kmh / 3.6:
        return Severity.AT_LEAST_S1
    return Severity.S0


@dataclass(frozen=True)
class SweepSpec:
    """Parameter grid plus the follower braking limit.

    ``follower_decel_mps2`` is both the sudden-braking command and the
    acceleration floor of the IDM follower, so e.g. a +/-6.5 m/s^2
    comparison run is pure configuration: set it and the lead decels to
    -6.5.  A moderate follower preset would use half the default, -1.705
    (distinct from the -1.71 moderate lead value).
    """

    reaction_times_s: tuple[float, ...] = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5)
    lead_decels_mps2: tuple[float, ...] = (-3.41, -1.71)
    follower_models: tuple[FollowerModel, ...] = (
        FollowerModel.SBM,
        FollowerModel.IDM,
    )
    follower_decel_mps2: float = -3.41
    idm_params: IdmParams = field(default_factory=IdmParams)
    engine: SimConfig = field(default_factory=SimConfig)

    def __post_init__(self):
        if not (self.reaction_times_s and self.lead_decels_mps2 and self.follower_models):
            raise ValueError("sweep lists must be non-empty")
        if any(t < 0 for t in self.reaction_times_s):
            raise ValueError("reaction times must be >= 0")
        if any(d > 0 for d in self.lead_decels_mps2):
            raise ValueError("lead decelerations must be <= 0")
        if self.follower_decel_mps2 > 0:
            raise ValueError("follower_decel_mps2 must be <= 0")

    def cells(self) -> list[tuple[FollowerModel, float, float]]:
        return [
            (model, tau, lead)
            for lead in self.lead_decels_mps2
            for model in self.follower_models
            for tau in self.reaction_times_s
        ]

    def cell_config(
        self, model: FollowerModel, reaction_time_s: float, lead_decel_mps2: float
    ) -> SimConfig:
        return replace(
            self.engine,
            follower_model=model,
            reaction_time_s=reaction_time_s,
            lead_decel_mps2=lead_decel_mps2,
            follower_idm=replace(
                self.idm_params, decel_floor_mps2=self.follower_decel_mps2
            ),
            follower_sbm=SbmParams(self.follower_decel_mps2),
            capture_trajectory=False,
        )


@dataclass(frozen=True)
class RateCell:
    n_scenarios: int
    n_collisions: int

    @property
    def collision_rate_pct(self) -> float:
        return 100.0 * self.n_collisions / self.n_scenarios


@dataclass(frozen=True)
class RateTable:
    """Collision rates keyed by (model name, reaction time, lead decel)."""

    cells: dict[tuple[str, float, float], RateCell]
    follower_decel_mps2: float


@dataclass(frozen=True)
class ScenarioRecord:
    scene_id: str
    model: str
    reaction_time_s: float
    lead_decel_mps2: float
    follower_decel_mps2: float
    terminated_by: Termination
    collision: bool
    t_end_s: float
    min_gap_m: float
    impact_rel_speed_mps: float | None
    severity: Severity | None


def _chunk_bounds(n: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, n))
    size, extra = divmod(n, workers)
    bounds, start = [], 0
    for i in range(workers):
        end = start + size + (1 if i < extra else 0)
        bounds.append((start, end))
        start = end
    return bounds


def _run_chunk_batch(args):
    scenes, config = args
    res = run_batch(scenes, config)
    return res


def _evaluate_cell(scenes, config, workers: int, executor):
    if executor is None:
        return [run_batch(scenes, config)]
    bounds = _chunk_bounds(len(scenes), workers)
    jobs = [(scenes[a:b], config) for a, b in bounds]
    return list(executor.map(_run_chunk_batch, jobs))


def run_sweep(
    scenes: list[StartScene],
    spec: SweepSpec | None = None,
    *,
    engine: str = "batch",
    workers: int = 1,
    keep_records: bool = False,
    severity_threshold_kmh: float = DEFAULT_SEVERITY_THRESHOLD_KMH,
) -> tuple[RateTable, list[ScenarioRecord] | None]:
    """Tally collisions for every (model, reaction time, lead decel) cell.

    ``engine`` selects the vectorized batch path (default) or the scalar
    reference path; both give the same outcomes.  Aggregation is
    order-independent: chunk results are reduced by fixed chunk index.
    """
    if not scenes:
        raise ValueError("scenes must be non-empty")
    if engine not in ("batch", "scalar"):
        raise ValueError(f"unknown engine {engine!r}")
    spec = spec or SweepSpec()

    cells: dict[tuple[str, float, float], RateCell] = {}
    records: list[ScenarioRecord] | None = [] if keep_records else None

    pool = (
        ProcessPoolExecutor(max_workers=workers)
        if engine == "batch" and workers > 1 and len(scenes) > 1
        else None
    )
    try:
        for model, tau, lead_decel in spec.cells():
            config = spec.cell_config(model, tau, lead_decel)
            if engine == "scalar":
                outcomes = [run_scenario(s, config) for s in scenes]
                n_coll = sum(o.collision for o in outcomes)
                per_scene = (
                    (o.terminated_by, o.collision, o.t_end_s, o.min_gap_m,
                     o.impact_rel_speed_mps)
                    for o in outcomes
                )
            else:
                results = _evaluate_cell(scenes, config, workers, pool)
                n_coll = sum(int(r.collision.sum()) for r in results)
                per_scene = (
                    (
                        r.termination(i),
                        bool(r.collision[i]),
                        float(r.t_end_s[i]),
                        float(r.min_gap_m[i]),
                        float(r.impact_rel_speed_mps[i]) if r.collision[i] else None,
                    )
                    for r in results
                    for i in range(len(r.collision))
                )
            cells[(model.value, tau, lead_decel)] = RateCell(
                n_scenarios=len(scenes), n_collisions=n_coll
            )
            if records is not None:
                for scene, (term, coll, t_end, min_gap, impact) in zip(
                    scenes, per_scene
                ):
                    records.append(
                        ScenarioRecord(
                            scene_id=scene.scene_id,
                            model=model.value,
                            reaction_time_s=tau,
                            lead_decel_mps2=lead_decel,
                            follower_decel_mps2=spec.follower_decel_mps2,
                            terminated_by=term,
                            collision=coll,
                            t_end_s=t_end,
                            min_gap_m=min_gap,
                            impact_rel_speed_mps=impact,
                            severity=(
                                classify_severity(impact, severity_threshold_kmh)
                                if coll
                                else None
                            ),
                        )
                    )
    finally:
        if pool is not None:
            pool.shutdown()

    return RateTable(cells=cells, follower_decel_mps2=spec.follower_decel_mps2), records


def generate_synthetic_scenes(
    n: int,
    seed: int,
    gap_range_m: tuple[float, float] = (2.0, 60.0),
    speed_range_mps: tuple[float, float] = (0.0, 13.89),
    vehicle_length_m: float = 5.0,
) -> list[StartScene]:
    """Deterministic uniform random start scenes for dataset-free runs."""
    if n <= 0:
        raise ValueError("scene count must be positive")
    gap_lo, gap_hi = gap_range_m
    v_lo, v_hi = speed_range_mps
    if gap_lo <= 0 or gap_hi < gap_lo:
        raise ValueError("gap range must satisfy 0 < lo <= hi")
    if v_lo < 0 or v_hi < v_lo:
        raise ValueError("speed range must satisfy 0 <= lo <= hi")
    rng = random.Random(seed)
    scenes = []
    for i in range(n):
        gap = rng.uniform(gap_lo, gap_hi)
        scenes.append(
            StartScene(
                lead=VehicleState(
                    position_m=gap + vehicle_length_m,
                    speed_mps=rng.uniform(v_lo, v_hi),
                    length_m=vehicle_length_m,
                ),
                follower=VehicleState(
                    position_m=0.0,
                    speed_mps=rng.uniform(v_lo, v_hi),
                    length_m=vehicle_length_m,
                ),
                scene_id=f"synth:{seed}:{i}",
            )
        )
    return scenes


def write_records_csv(path: str | Path, records: list[ScenarioRecord]) -> None:
    """One row per (scene, cell); impact and severity are empty unless the
    scenario collided."""
    header = (
        "scene_id,model,reaction_time_s,lead_decel_mps2,follower_decel_mps2,"
        "terminated_by,collision,t_end_s,min_gap_m,impact_rel_speed_mps,severity"
    )
    lines = [header]
    for r in records:
        impact = repr(r.impact_rel_speed_mps) if r.impact_rel_speed_mps is not None else ""
        severity = r.severity.value if r.severity is not None else ""
        lines.append(
            f"{r.scene_id},{r.model},{r.reaction_time_s},{r.lead_decel_mps2},"
            f"{r.follower_decel_mps2},{r.terminated_by.value},"
            f"{str(r.collision).lower()},{repr(r.t_end_s)},{repr(r.min_gap_m)},"
            f"{impact},{severity}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


REPORT_CSV_COLUMNS = (
    "model,reaction_time_s,lead_decel_mps2,follower_decel_mps2,"
    "n_scenarios,n_collisions,collision_rate_pct"
)


def _sorted_keys(table: RateTable):
    return sorted(table.cells, key=lambda k: (k[0], k[2], k[1]))


def emit_report(table: RateTable, fmt: str, out_path: str | Path) -> None:
    """Write the rate table as CSV rows or a markdown grid (one block per
    lead deceleration, reaction times as rows, models as columns)."""
    if not table.cells:
        raise ValueError("rate table is empty")
    if fmt not in ("csv", "markdown"):
        raise ValueError(f"unknown report format {fmt!r}")
    out = Path(out_path)
    if fmt == "csv":
        lines = [REPORT_CSV_COLUMNS]
        for model, tau, lead in _sorted_keys(table):
            cell = table.cells[(model, tau, lead)]
            lines.append(
                f"{model},{tau},{lead},{table.follower_decel_mps2},"
                f"{cell.n_scenarios},{cell.n_collisions},"
                f"{cell.collision_rate_pct:.2f}"
            )
        out.write_text("\n".join(lines) + "\n")
        return

    models = sorted({k[0] for k in table.cells})
    leads = sorted({k[2] for k in table.cells})
    taus = sorted({k[1] for k in table.cells})
    blocks = []
    for lead in leads:
        rows = [
            f"## Lead deceleration {lead} m/s^2 "
            f"(follower {table.follower_decel_mps2} m/s^2)",
            "",
            "| Reaction time (s) | " + " | ".join(f"{m} (%)" for m in models) + " |",
            "|" + "---|" * (len(models) + 1),
        ]
        for tau in taus:
            vals = []
            for m in models:
                cell = table.cells.get((m, tau, lead))
                vals.append(f"{cell.collision_rate_pct:.2f}" if cell else "-")
            rows.append(f"| {tau} | " + " | ".join(vals) + " |")
        blocks.append("\n".join(rows))
    out.write_text("\n\n".join(blocks) + "\n")
