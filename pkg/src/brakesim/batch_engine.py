"""Vectorized twin of :func:`brakesim.sim_engine.run_scenario`.

Advances many scenes in lockstep with numpy so full parameter sweeps stay
fast.  Update order, clamps and termination priority mirror the scalar
engine step for step; the scalar path remains the reference and the two
are cross-checked in the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .driver_models import delay_queue_length
from .sim_engine import (
    FollowerModel,
    NumericalFailure,
    SimConfig,
    StartScene,
    Termination,
)

_TERMINATION_CODES = (
    Termination.COLLISION,
    Termination.ALL_STANDSTILL,
    Termination.MAX_DURATION,
)


@dataclass(frozen=True)
class BatchResult:
    """Per-scene outcomes, aligned with the input scene order."""

    terminated_by: np.ndarray  # int codes, index into _TERMINATION_CODES
    collision: np.ndarray  # bool
    t_end_s: np.ndarray
    min_gap_m: np.ndarray
    impact_rel_speed_mps: np.ndarray  # nan where no collision

    def termination(self, i: int) -> Termination:
        return _TERMINATION_CODES[int(self.terminated_by[i])]


def run_batch(scenes: list[StartScene], config: SimConfig) -> BatchResult:
    """Run every scene to termination under one configuration."""
    n = len(scenes)
    dt = config.dt_s
    eps = config.standstill_eps_mps
    floor = config.follower_floor_mps2()
    use_idm = config.follower_model is FollowerModel.IDM
    p = config.follower_idm
    sqrt_ab = math.sqrt(p.a_max_mps2 * p.b_comfort_mps2)

    lead_x = np.array([s.lead.position_m for s in scenes])
    lead_v = np.array([s.lead.speed_mps for s in scenes])
    fol_x = np.array([s.follower.position_m for s in scenes])
    fol_v = np.array([s.follower.speed_mps for s in scenes])
    half_sum = np.array(
        [(s.lead.length_m + s.follower.length_m) / 2.0 for s in scenes]
    )

    gap = lead_x - fol_x - half_sum
    min_gap = gap.copy()
    active = np.ones(n, dtype=bool)
    term = np.zeros(n, dtype=np.int8)
    t_end = np.zeros(n)
    impact = np.full(n, np.nan)

    queue_len = delay_queue_length(config.reaction_time_s, dt)
    ring = np.zeros((queue_len, n)) if queue_len else None

    max_steps = int(math.ceil(config.max_duration_s / dt))
    for step in range(1, max_steps + 1):
        if not active.any():
            break
        if use_idm:
            gap_safe = np.where(gap > 0.0, gap, 1.0)
            dv = fol_v - lead_v
            desired = p.min_spacing_m + fol_v * p.headway_s + fol_v * dv / (2.0 * sqrt_ab)
            raw = p.a_max_mps2 * (
                1.0
                - np.power(fol_v / p.v_desired_mps, p.accel_exponent)
                - (desired / gap_safe) ** 2
            )
        else:
            raw = np.full(n, config.follower_sbm.decel_mps2)

        if ring is None:
            delayed = raw
        else:
            slot = (step - 1) % queue_len
            delayed = ring[slot].copy()
            ring[slot] = raw
        fol_a = np.maximum(delayed, floor)

        lead_v_next = np.maximum(lead_v + config.lead_decel_mps2 * dt, 0.0)
        fol_v_next = np.maximum(fol_v + fol_a * dt, 0.0)
        lead_v = np.where(active, lead_v_next, lead_v)
        fol_v = np.where(active, fol_v_next, fol_v)
        lead_x = np.where(active, lead_x + lead_v_next * dt, lead_x)
        fol_x = np.where(active, fol_x + fol_v_next * dt, fol_x)

        bad = active & ~(
            np.isfinite(lead_x) & np.isfinite(lead_v)
            & np.isfinite(fol_x) & np.isfinite(fol_v)
        )
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise NumericalFailure(
                f"non-finite state at t={step * dt:.3f}s "
                f"(scene {scenes[i].scene_id!r})"
            )

        gap = lead_x - fol_x - half_sum
        np.minimum(min_gap, gap, out=min_gap, where=active)

        t = step * dt
        collided = active & (gap <= 0.0)
        if collided.any():
            term[collided] = 0
            t_end[collided] = t
            impact[collided] = (fol_v - lead_v)[collided]
            active &= ~collided
        still = active & (lead_v <= eps) & (fol_v <= eps)
        if still.any():
            term[still] = 1
            t_end[still] = t
            active &= ~still

    if active.any():
        term[active] = 2
        t_end[active] = max_steps * dt

    return BatchResult(
        terminated_by=term,
        collision=(term == 0),
        t_end_s=t_end,
        min_gap_m=min_gap,
        impact_rel_speed_mps=impact,
    )
