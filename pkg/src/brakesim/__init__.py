"""Longitudinal braking-fallback simulation toolkit.

A remote-operated lead vehicle brakes to a stop; a following human-driven
vehicle reacts after a delay, modeled either as constant braking (SBM) or
as an IDM car-follower.  The package covers scene extraction from drone
trajectory recordings, the two-vehicle scenario engine, a closed-form
verification oracle, and collision-rate parameter sweeps.
"""
from .batch_engine import BatchResult, run_batch
from .dataset_ingest import (
    ColumnMap,
    ObjectKind,
    ObjectSample,
    Recording,
    default_column_map_path,
    frame_view,
    load_recording,
    parse_column_map,
    save_recording,
)
from .driver_models import (
    DelayLine,
    IdmParams,
    SbmParams,
    VehicleState,
    clamp_acceleration,
    delay_queue_length,
    idm_command,
    idm_desired_gap,
    sbm_command,
)
from .harness import (
    RateCell,
    RateTable,
    ScenarioRecord,
    Severity,
    SweepSpec,
    classify_severity,
    emit_report,
    generate_synthetic_scenes,
    run_sweep,
)
from .oracle import BrakeSchedule, OracleOutcome, constant_decel_outcome
from .pair_extraction import (
    FilterConfig,
    FollowingPair,
    ProjectionDegenerate,
    extract_following_pairs,
    read_scenes_csv,
    to_start_scene,
    write_scenes_csv,
    write_start_scenes_csv,
)
from .sim_engine import (
    FollowerModel,
    NumericalFailure,
    SimConfig,
    SimOutcome,
    StartScene,
    Termination,
    detect_collision,
    gap,
    integrate,
    run_scenario,
)
from .verification import OracleCheckResult, sbm_oracle_check

__version__ = "0.1.0"
