"""Two-vehicle 1-D scenario engine.

The lead vehicle applies its fallback braking from t = 0; the follower runs
either the IDM or the sudden braking model behind a reaction-time delay
line.  States advance with semi-implicit Euler and the run terminates on
the first of: collision, both vehicles at standstill, maximum duration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .driver_models import (
    DelayLine,
    IdmParams,
    SbmParams,
    VehicleState,
    clamp_acceleration,
    idm_command,
    sbm_command,
)


class FollowerModel(Enum):
    IDM = "IDM"
    SBM = "SBM"


class Termination(Enum):
    COLLISION = "Collision"
    ALL_STANDSTILL = "AllStandstill"
    MAX_DURATION = "MaxDuration"


class NumericalFailure(RuntimeError):
    """A state variable became non-finite; signals a model/config bug."""


@dataclass(frozen=True)
class StartScene:
    """Initial condition of one scenario on a common 1-D axis."""

    lead: VehicleState
    follower: VehicleState
    scene_id: str = ""

    def __post_init__(self):
        if self.lead.position_m <= self.follower.position_m:
            raise ValueError(
                f"lead must be ahead of follower (scene {self.scene_id!r})"
            )
        if gap(self.lead, self.follower) <= 0:
            raise ValueError(
                f"initial bumper gap must be > 0 (scene {self.scene_id!r})"
            )


@dataclass(frozen=True)
class SimConfig:
    dt_s: float = 0.04
    max_duration_s: float = 60.0
    standstill_eps_mps: float = 0.001
    lead_decel_mps2: float = -3.41
    follower_model: FollowerModel = FollowerModel.SBM
    follower_idm: IdmParams = field(default_factory=IdmParams)
    follower_sbm: SbmParams = field(default_factory=SbmParams)
    reaction_time_s: float = 0.0
    capture_trajectory: bool = False

    def __post_init__(self):
        if self.dt_s <= 0:
            raise ValueError("dt_s must be > 0")
        if self.max_duration_s <= 0:
            raise ValueError("max_duration_s must be > 0")
        if self.standstill_eps_mps < 0:
            raise ValueError("standstill_eps_mps must be >= 0")
        if self.lead_decel_mps2 > 0:
            raise ValueError("lead_decel_mps2 must be <= 0")
        if self.reaction_time_s < 0:
            raise ValueError("reaction_time_s must be >= 0")

    def follower_floor_mps2(self) -> float:
        if self.follower_model is FollowerModel.SBM:
            return self.follower_sbm.decel_mps2
        return self.follower_idm.decel_floor_mps2


@dataclass(frozen=True)
class TrajectoryPoint:
    t_s: float
    lead_position_m: float
    lead_speed_mps: float
    follower_position_m: float
    follower_speed_mps: float
    follower_accel_mps2: float
    gap_m: float


@dataclass(frozen=True)
class SimOutcome:
    terminated_by: Termination
    collision: bool
    t_end_s: float
    min_gap_m: float
    impact_rel_speed_mps: float | None = None
    trajectory: tuple[TrajectoryPoint, ...] | None = None


def gap(lead: VehicleState, follower: VehicleState) -> float:
    """Bumper-to-bumper spacing; positions are vehicle centers."""
    return (lead.position_m - follower.position_m) - (
        lead.length_m + follower.length_m
    ) / 2.0


def detect_collision(lead: VehicleState, follower: VehicleState) -> bool:
    """Vehicles overlap (touching counts)."""
    return gap(lead, follower) <= 0.0


def integrate(state: VehicleState, accel: float, dt: float) -> VehicleState:
    """Semi-implicit Euler step with non-negative speed."""
    v_next = max(state.speed_mps + accel * dt, 0.0)
    return VehicleState(
        position_m=state.position_m + v_next * dt,
        speed_mps=v_next,
        length_m=state.length_m,
    )


def run_scenario(scene: StartScene, config: SimConfig) -> SimOutcome:
    """Advance one scene to termination.

    Pure function of (scene, config): repeated calls give bit-identical
    outcomes.  The follower command is evaluated from the current states,
    delayed by the reaction time, then floored; collision is checked after
    each state update with priority collision > standstill > duration.
    """
    dt = config.dt_s
    eps = config.standstill_eps_mps
    lead_decel = config.lead_decel_mps2
    delay = DelayLine(config.reaction_time_s, dt)
    floor = config.follower_floor_mps2()
    use_idm = config.follower_model is FollowerModel.IDM
    idm_params = config.follower_idm
    sbm_decel = sbm_command(config.follower_sbm)

    # loop on plain floats (the updates are exactly those of integrate());
    # the dataclass shuffling would dominate the runtime of large suites
    lead_x, lead_v = scene.lead.position_m, scene.lead.speed_mps
    fol_x, fol_v = scene.follower.position_m, scene.follower.speed_mps
    half_sum = (scene.lead.length_m + scene.follower.length_m) / 2.0

    t = 0.0
    min_gap = lead_x - fol_x - half_sum
    trace: list[TrajectoryPoint] | None = [] if config.capture_trajectory else None
    # ceil so the run always covers max_duration_s even when it is not a
    # multiple of dt; t is step*dt to avoid float accumulation
    max_steps = int(math.ceil(config.max_duration_s / dt))

    termination = Termination.MAX_DURATION
    for step in range(1, max_steps + 1):
        if use_idm:
            raw = idm_command(
                fol_v, (lead_x - fol_x - half_sum, lead_v), idm_params
            )
        else:
            raw = sbm_decel
        follower_accel = clamp_acceleration(delay.step(raw), floor)

        lead_v = max(lead_v + lead_decel * dt, 0.0)
        lead_x = lead_x + lead_v * dt
        fol_v = max(fol_v + follower_accel * dt, 0.0)
        fol_x = fol_x + fol_v * dt
        t = step * dt

        if not (
            math.isfinite(lead_x)
            and math.isfinite(lead_v)
            and math.isfinite(fol_x)
            and math.isfinite(fol_v)
        ):
            raise NumericalFailure(
                f"non-finite state at t={t:.3f}s (scene {scene.scene_id!r})"
            )

        g = lead_x - fol_x - half_sum
        if g < min_gap:
            min_gap = g
        if trace is not None:
            trace.append(
                TrajectoryPoint(
                    t_s=t,
                    lead_position_m=lead_x,
                    lead_speed_mps=lead_v,
                    follower_position_m=fol_x,
                    follower_speed_mps=fol_v,
                    follower_accel_mps2=follower_accel,
                    gap_m=g,
                )
            )

        if g <= 0.0:
            termination = Termination.COLLISION
            break
        if lead_v <= eps and fol_v <= eps:
            termination = Termination.ALL_STANDSTILL
            break

    return SimOutcome(
        terminated_by=termination,
        collision=termination is Termination.COLLISION,
        t_end_s=t,
        min_gap_m=min_gap,
        impact_rel_speed_mps=(
            fol_v - lead_v if termination is Termination.COLLISION else None
        ),
        trajectory=tuple(trace) if trace is not None else None,
    )
