"""The vectorized engine must reproduce the scalar reference engine."""
import numpy as np
import pytest

from brakesim import (
    FollowerModel,
    IdmParams,
    SbmParams,
    SimConfig,
    generate_synthetic_scenes,
    run_batch,
    run_scenario,
)


def configs():
    yield SimConfig(
        follower_model=FollowerModel.SBM,
        follower_sbm=SbmParams(-3.41),
        lead_decel_mps2=-3.41,
        reaction_time_s=1.0,
    )
    yield SimConfig(
        follower_model=FollowerModel.SBM,
        follower_sbm=SbmParams(-1.705),
        lead_decel_mps2=-1.71,
        reaction_time_s=0.0,
    )
    yield SimConfig(
        follower_model=FollowerModel.SBM,
        follower_sbm=SbmParams(-6.5),
        lead_decel_mps2=-6.5,
        reaction_time_s=2.5,
    )
    yield SimConfig(
        follower_model=FollowerModel.IDM,
        follower_idm=IdmParams(v_desired_mps=13.89),
        lead_decel_mps2=-3.41,
        reaction_time_s=1.5,
    )
    yield SimConfig(
        follower_model=FollowerModel.IDM,
        follower_idm=IdmParams(),
        lead_decel_mps2=-1.71,
        reaction_time_s=0.5,
    )


@pytest.mark.parametrize("config", list(configs()))
def test_batch_matches_scalar_engine(config):
    scenes = generate_synthetic_scenes(300, seed=11)
    batch = run_batch(scenes, config)
    for i, scene in enumerate(scenes):
        scalar = run_scenario(scene, config)
        assert bool(batch.collision[i]) == scalar.collision, scene.scene_id
        assert batch.termination(i) == scalar.terminated_by, scene.scene_id
        assert batch.t_end_s[i] == scalar.t_end_s, scene.scene_id
        assert batch.min_gap_m[i] == pytest.approx(
            scalar.min_gap_m, rel=1e-12, abs=1e-12
        )
        if scalar.collision:
            assert batch.impact_rel_speed_mps[i] == pytest.approx(
                scalar.impact_rel_speed_mps, rel=1e-12, abs=1e-12
            )
        else:
            assert np.isnan(batch.impact_rel_speed_mps[i])


def test_sbm_path_is_bit_identical_to_scalar():
    # no power function on the SBM path, so results must match exactly
    scenes = generate_synthetic_scenes(500, seed=3)
    config = SimConfig(
        follower_model=FollowerModel.SBM,
        follower_sbm=SbmParams(-3.41),
        lead_decel_mps2=-3.41,
        reaction_time_s=0.5,
    )
    batch = run_batch(scenes, config)
    for i, scene in enumerate(scenes):
        scalar = run_scenario(scene, config)
        assert batch.t_end_s[i] == scalar.t_end_s
        assert batch.min_gap_m[i] == scalar.min_gap_m
        if scalar.collision:
            assert batch.impact_rel_speed_mps[i] == scalar.impact_rel_speed_mps


def test_batch_rerun_is_bit_identical():
    scenes = generate_synthetic_scenes(200, seed=5)
    config = SimConfig(
        follower_model=FollowerModel.IDM, lead_decel_mps2=-3.41, reaction_time_s=1.0
    )
    a = run_batch(scenes, config)
    b = run_batch(scenes, config)
    assert np.array_equal(a.t_end_s, b.t_end_s)
    assert np.array_equal(a.min_gap_m, b.min_gap_m)
    assert np.array_equal(a.collision, b.collision)
