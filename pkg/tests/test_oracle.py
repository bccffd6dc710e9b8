import math

import pytest

from brakesim import BrakeSchedule, constant_decel_outcome


class TestBrakeSchedule:
    def test_cruise_then_brake_displacement(self):
        s = BrakeSchedule(v0=10.0, decel=-2.0, t_on=1.0)
        assert s.displacement(1.0) == pytest.approx(10.0)
        assert s.displacement(2.0) == pytest.approx(10.0 + 10.0 - 1.0)
        assert s.stop_time() == pytest.approx(6.0)
        # after the stop the position freezes at t_on*v0 + v0^2/(2|a|)
        assert s.displacement(50.0) == pytest.approx(10.0 + 25.0)
        assert s.speed(50.0) == 0.0

    def test_zero_decel_never_stops(self):
        s = BrakeSchedule(v0=3.0, decel=0.0)
        assert s.stop_time() == math.inf
        assert s.displacement(10.0) == pytest.approx(30.0)

    def test_rejects_positive_decel(self):
        with pytest.raises(ValueError):
            BrakeSchedule(v0=1.0, decel=0.5)


class TestConstantDecelOutcome:
    def test_delayed_equal_braking_reference_case(self):
        # independently derived: gap(1s) = 10 - 1.705, then the closing
        # speed is frozen at 3.41 m/s until the crossing
        out = constant_decel_outcome(
            10.0,
            lead=BrakeSchedule(13.89, -3.41, 0.0),
            follower=BrakeSchedule(13.89, -3.41, 1.0),
        )
        assert out.collision
        expected_t = 1.0 + (10.0 - 0.5 * 3.41) / 3.41
        assert out.t_collision_s == pytest.approx(expected_t, rel=1e-12)
        assert out.impact_rel_speed_mps == pytest.approx(3.41, rel=1e-12)

    def test_cruise_into_stopped_lead(self):
        # 10 = 5t - t^2/2 has the root 5 - sqrt(5); impact speed sqrt(5)
        out = constant_decel_outcome(
            10.0,
            lead=BrakeSchedule(0.0, -1.0, 0.0),
            follower=BrakeSchedule(5.0, -1.0, 0.0),
        )
        assert out.collision
        assert out.t_collision_s == pytest.approx(5.0 - math.sqrt(5.0), rel=1e-12)
        assert out.impact_rel_speed_mps == pytest.approx(math.sqrt(5.0), rel=1e-12)

    def test_graze_without_contact(self):
        # follower stopping distance 12.5 m against a parked lead 13 m away
        out = constant_decel_outcome(
            13.0,
            lead=BrakeSchedule(0.0, -1.0, 0.0),
            follower=BrakeSchedule(5.0, -1.0, 0.0),
        )
        assert not out.collision
        assert out.min_gap_m == pytest.approx(0.5, rel=1e-12)
        assert any(d == pytest.approx(0.5, rel=1e-12) for d in out.dip_gaps_m)

    def test_single_interior_dip_value(self):
        # lead: 5 m/s at -1; follower: 10 m/s at -4 from t=1.  The gap
        # slope 3t - 9 has its rising zero at t=3, where the ghost gap is
        # gap0 + x_l(3) - x_f(3) = gap0 - 11.5
        out = constant_decel_outcome(
            12.0,
            lead=BrakeSchedule(5.0, -1.0, 0.0),
            follower=BrakeSchedule(10.0, -4.0, 1.0),
        )
        assert not out.collision
        assert out.min_gap_m == pytest.approx(0.5, rel=1e-9)
        assert len(out.dip_gaps_m) == 1

    def test_same_dip_becomes_collision_when_gap_smaller(self):
        out = constant_decel_outcome(
            11.0,
            lead=BrakeSchedule(5.0, -1.0, 0.0),
            follower=BrakeSchedule(10.0, -4.0, 1.0),
        )
        assert out.collision
        assert out.t_collision_s < 3.0
        assert out.min_gap_m < 0.0

    def test_identical_schedules_freeze_gap(self):
        out = constant_decel_outcome(
            40.0,
            lead=BrakeSchedule(13.89, -3.41, 0.0),
            follower=BrakeSchedule(13.89, -3.41, 0.0),
        )
        assert not out.collision
        assert out.min_gap_m == pytest.approx(40.0)
        assert out.dip_gaps_m == ()

    def test_never_braking_follower_always_reaches_stopped_lead(self):
        out = constant_decel_outcome(
            100.0,
            lead=BrakeSchedule(10.0, -5.0, 0.0),
            follower=BrakeSchedule(5.0, 0.0, 0.0),
        )
        assert out.collision
        # lead travels 10 m then parks; 5t = 110 gives t = 22
        assert out.t_collision_s == pytest.approx(22.0, rel=1e-12)
        assert out.impact_rel_speed_mps == pytest.approx(5.0, rel=1e-12)

    def test_horizon_truncates_slow_approach(self):
        out = constant_decel_outcome(
            100.0,
            lead=BrakeSchedule(10.0, -5.0, 0.0),
            follower=BrakeSchedule(5.0, 0.0, 0.0),
            horizon_s=10.0,
        )
        assert not out.collision
        # still closing at the horizon, so the boundary value is the dip
        assert out.min_gap_m == pytest.approx(100.0 + 10.0 - 50.0, rel=1e-12)

    def test_rejects_non_positive_gap(self):
        with pytest.raises(ValueError):
            constant_decel_outcome(
                0.0, BrakeSchedule(1.0, -1.0), BrakeSchedule(1.0, -1.0)
            )
