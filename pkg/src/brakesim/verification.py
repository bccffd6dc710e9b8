"""Randomized equivalence suite: discrete engine vs closed-form kinematics.

For constant-braking followers the whole scenario has an analytic solution
(:mod:`brakesim.oracle`).  This suite draws seeded random scenarios, runs
both routes and compares collision occurrence, collision time and impact
speed.

A fixed-step integrator carries a per-step position error bounded by half
of ``band = v_max * dt`` (v_max: larger initial speed), so the comparison
uses that band as its ambiguity measure twice:

* occurrence is compared only when every local minimum of the analytic
  ghost-gap trajectory lies outside +/- band of zero (a dip inside the
  band is exactly the depth at which the discrete engine cannot be
  expected to make the same call);
* collision time and impact speed are compared only when the crossing
  itself traverses the band within one step (ghost gap one dt past the
  crossing is below -band); slower, grazing-style crossings shift the
  detection step by error/closing-speed, which no step-size-dt integrator
  can bound to one step.

The analytic follower uses the engine's documented reaction-time
quantization (whole steps, rounded half up).
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .driver_models import SbmParams, VehicleState, delay_queue_length
from .oracle import BrakeSchedule, constant_decel_outcome
from .sim_engine import FollowerModel, SimConfig, StartScene, run_scenario


@dataclass(frozen=True)
class OracleCheckResult:
    n_total: int
    n_compared: int
    n_ambiguous: int
    n_collisions: int
    n_crossings_compared: int
    n_crossings_unresolvable: int
    n_decision_mismatches: int
    n_time_violations: int
    n_speed_violations: int
    max_time_err_s: float
    max_speed_err_mps: float

    @property
    def ok(self) -> bool:
        return (
            self.n_decision_mismatches == 0
            and self.n_time_violations == 0
            and self.n_speed_violations == 0
        )

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return (
            f"{status}: {self.n_compared}/{self.n_total} scenarios compared "
            f"({self.n_ambiguous} ambiguous skipped), "
            f"{self.n_collisions} collisions "
            f"({self.n_crossings_compared} timed, "
            f"{self.n_crossings_unresolvable} sub-step crossings untimed), "
            f"mismatches: decision={self.n_decision_mismatches} "
            f"time={self.n_time_violations} speed={self.n_speed_violations}, "
            f"max errors: time={self.max_time_err_s:.4f}s "
            f"speed={self.max_speed_err_mps:.4f}m/s"
        )


def sbm_oracle_check(
    n: int,
    seed: int,
    dt_s: float = 0.04,
    time_tol_s: float | None = None,
    speed_tol_mps: float = 0.15,
    speed_range_mps: tuple[float, float] = (0.0, 13.89),
    gap_range_m: tuple[float, float] = (0.5, 60.0),
    decel_range_mps2: tuple[float, float] = (-6.5, -0.5),
    reaction_range_s: tuple[float, float] = (0.0, 2.5),
    max_duration_s: float = 60.0,
) -> OracleCheckResult:
    """Compare ``run_scenario`` against the analytic solution on ``n`` draws."""
    if n <= 0:
        raise ValueError("n must be positive")
    time_tol = dt_s if time_tol_s is None else time_tol_s
    rng = random.Random(seed)

    n_ambiguous = n_compared = n_collisions = 0
    n_timed = n_unresolvable = 0
    n_decision = n_time = n_speed = 0
    max_time_err = max_speed_err = 0.0

    for i in range(n):
        v_lead = rng.uniform(*speed_range_mps)
        v_fol = rng.uniform(*speed_range_mps)
        gap0 = rng.uniform(*gap_range_m)
        a_lead = rng.uniform(*decel_range_mps2)
        a_fol = rng.uniform(*decel_range_mps2)
        tau = rng.uniform(*reaction_range_s)

        scene = StartScene(
            lead=VehicleState(position_m=gap0 + 5.0, speed_mps=v_lead),
            follower=VehicleState(position_m=0.0, speed_mps=v_fol),
            scene_id=f"oracle:{seed}:{i}",
        )
        config = SimConfig(
            dt_s=dt_s,
            max_duration_s=max_duration_s,
            lead_decel_mps2=a_lead,
            follower_model=FollowerModel.SBM,
            follower_sbm=SbmParams(a_fol),
            reaction_time_s=tau,
        )
        lead_sched = BrakeSchedule(v0=v_lead, decel=a_lead, t_on=0.0)
        fol_sched = BrakeSchedule(
            v0=v_fol, decel=a_fol, t_on=delay_queue_length(tau, dt_s) * dt_s
        )
        expected = constant_decel_outcome(
            gap0, lead=lead_sched, follower=fol_sched, horizon_s=max_duration_s
        )

        band = max(v_lead, v_fol) * dt_s
        if any(abs(d) <= band for d in (*expected.dip_gaps_m, expected.min_gap_m)):
            n_ambiguous += 1
            continue
        n_compared += 1

        actual = run_scenario(scene, config)
        if actual.collision != expected.collision:
            n_decision += 1
            continue
        if not expected.collision:
            continue

        n_collisions += 1
        t_star = expected.t_collision_s
        ghost_after = (
            gap0
            + lead_sched.displacement(t_star + dt_s)
            - fol_sched.displacement(t_star + dt_s)
        )
        if ghost_after > -band:
            n_unresolvable += 1
            continue
        n_timed += 1

        time_err = abs(actual.t_end_s - t_star)
        speed_err = abs(actual.impact_rel_speed_mps - expected.impact_rel_speed_mps)
        max_time_err = max(max_time_err, time_err)
        max_speed_err = max(max_speed_err, speed_err)
        if time_err > time_tol + 1e-9:
            n_time += 1
        if speed_err > speed_tol_mps:
            n_speed += 1

    return OracleCheckResult(
        n_total=n,
        n_compared=n_compared,
        n_ambiguous=n_ambiguous,
        n_collisions=n_collisions,
        n_crossings_compared=n_timed,
        n_crossings_unresolvable=n_unresolvable,
        n_decision_mismatches=n_decision,
        n_time_violations=n_time,
        n_speed_violations=n_speed,
        max_time_err_s=max_time_err,
        max_speed_err_mps=max_speed_err,
    )
