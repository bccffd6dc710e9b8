"""Engine-vs-oracle agreement beyond the seeded acceptance suite."""
import random

import pytest

from brakesim import (
    BrakeSchedule,
    FollowerModel,
    SbmParams,
    SimConfig,
    StartScene,
    VehicleState,
    constant_decel_outcome,
    delay_queue_length,
    run_scenario,
    sbm_oracle_check,
)


def test_seeded_check_passes_and_is_reproducible():
    a = sbm_oracle_check(2000, seed=99)
    b = sbm_oracle_check(2000, seed=99)
    assert a == b
    assert a.ok, a.summary()
    assert a.n_decision_mismatches == 0
    assert a.n_collisions > 100  # the draw actually exercises collisions


def test_full_coverage_adaptive_tolerances():
    """Every unambiguous collision, with tolerances from the error model.

    The discrete positions trail the analytic ones by at most
    band/2 = v_max*dt/2, so detection shifts by up to one grid step plus
    (band/2) / closing-speed; the impact speed drifts by at most the
    steepest relative braking over that window.
    """
    dt = 0.04
    rng = random.Random(4242)
    n_collisions = 0
    for i in range(4000):
        v_lead = rng.uniform(0.0, 13.89)
        v_fol = rng.uniform(0.0, 13.89)
        gap0 = rng.uniform(0.5, 60.0)
        a_lead = rng.uniform(-6.5, -0.5)
        a_fol = rng.uniform(-6.5, -0.5)
        tau = rng.uniform(0.0, 2.5)

        lead = BrakeSchedule(v_lead, a_lead, 0.0)
        follower = BrakeSchedule(v_fol, a_fol, delay_queue_length(tau, dt) * dt)
        expected = constant_decel_outcome(gap0, lead, follower)
        band = max(v_lead, v_fol) * dt
        if any(abs(d) <= band for d in (*expected.dip_gaps_m, expected.min_gap_m)):
            continue

        scene = StartScene(
            VehicleState(gap0 + 5.0, v_lead), VehicleState(0.0, v_fol), f"adaptive:{i}"
        )
        config = SimConfig(
            dt_s=dt,
            lead_decel_mps2=a_lead,
            follower_model=FollowerModel.SBM,
            follower_sbm=SbmParams(a_fol),
            reaction_time_s=tau,
        )
        actual = run_scenario(scene, config)
        assert actual.collision == expected.collision, scene.scene_id
        if not expected.collision:
            continue

        n_collisions += 1
        closing = expected.impact_rel_speed_mps
        t_tol = dt + band / (2.0 * closing)
        s_tol = max(abs(a_lead), abs(a_fol)) * t_tol + 1e-9
        assert abs(actual.t_end_s - expected.t_collision_s) <= t_tol, scene.scene_id
        assert (
            abs(actual.impact_rel_speed_mps - expected.impact_rel_speed_mps) <= s_tol
        ), scene.scene_id
    assert n_collisions > 500


def test_quantized_reaction_time_is_what_the_engine_realizes():
    # tau = 0.5 s at dt = 0.04 acts as 13 steps = 0.52 s; the oracle fed
    # with the quantized onset nails the collision step while the nominal
    # onset misses it by the quantization residual
    scene = StartScene(VehicleState(10.0, 13.89), VehicleState(0.0, 13.89), "q")
    config = SimConfig(
        lead_decel_mps2=-3.41,
        follower_model=FollowerModel.SBM,
        follower_sbm=SbmParams(-3.41),
        reaction_time_s=0.5,
    )
    actual = run_scenario(scene, config)
    quantized = constant_decel_outcome(
        5.0, BrakeSchedule(13.89, -3.41, 0.0), BrakeSchedule(13.89, -3.41, 0.52)
    )
    nominal = constant_decel_outcome(
        5.0, BrakeSchedule(13.89, -3.41, 0.0), BrakeSchedule(13.89, -3.41, 0.5)
    )
    assert actual.collision and quantized.collision
    assert abs(actual.t_end_s - quantized.t_collision_s) <= 0.04 + 1e-9
    assert abs(actual.t_end_s - nominal.t_collision_s) > abs(
        actual.t_end_s - quantized.t_collision_s
    )


def test_check_rejects_non_positive_n():
    with pytest.raises(ValueError):
        sbm_oracle_check(0, seed=1)
