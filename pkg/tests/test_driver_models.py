import math

import pytest
from hypothesis import given, strategies as st

from brakesim import (
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

speeds = st.floats(min_value=0.0, max_value=40.0)


class TestVehicleState:
    def test_rejects_negative_speed(self):
        with pytest.raises(ValueError):
            VehicleState(position_m=0.0, speed_mps=-0.1)

    def test_rejects_non_positive_length(self):
        with pytest.raises(ValueError):
            VehicleState(position_m=0.0, speed_mps=1.0, length_m=0.0)


class TestIdmParams:
    def test_comfort_decel_stored_as_magnitude(self):
        with pytest.raises(ValueError):
            IdmParams(b_comfort_mps2=-1.67)

    def test_floor_must_be_negative(self):
        with pytest.raises(ValueError):
            IdmParams(decel_floor_mps2=0.0)

    def test_sqrt_spacing_term_pinned_to_zero(self):
        with pytest.raises(ValueError):
            IdmParams(s1_m=0.5)


class TestIdmCommand:
    def test_free_road_equilibrium_at_desired_speed(self, table_idm):
        assert idm_command(13.89, None, table_idm) == pytest.approx(0.0, abs=1e-12)

    def test_standstill_free_road_commands_max_accel(self, table_idm):
        assert idm_command(0.0, None, table_idm) == pytest.approx(0.73, abs=1e-12)

    def test_worked_following_example(self, table_idm):
        # v = lead = 10 m/s, gap 18 m: s* = 2 + 16 = 18 so the interaction
        # term is exactly 1 and the command reduces to -a * (10/13.89)^4,
        # precomputed independently to -0.196116384...
        cmd = idm_command(10.0, (18.0, 10.0), table_idm)
        assert cmd == pytest.approx(-0.196116384025, abs=1e-9)
        assert cmd == pytest.approx(-0.196, abs=1e-3)

    def test_rejects_non_positive_gap(self, table_idm):
        with pytest.raises(ValueError):
            idm_command(5.0, (0.0, 5.0), table_idm)

    @given(v=st.floats(min_value=0.01, max_value=40.0))
    def test_equilibrium_gap_leaves_only_free_term(self, v):
        # zero approach rate at gap s0 + v*T makes the interaction term 1
        p = IdmParams()
        gap = p.min_spacing_m + v * p.headway_s
        expected = -p.a_max_mps2 * (v / p.v_desired_mps) ** p.accel_exponent
        got = idm_command(v, (gap, v), p)
        assert got == pytest.approx(expected, rel=1e-12)

    @given(
        v1=st.floats(min_value=0.01, max_value=40.0),
        v2=st.floats(min_value=0.01, max_value=40.0),
    )
    def test_free_road_command_strictly_decreasing_in_speed(self, v1, v2):
        p = IdmParams()
        lo, hi = sorted((v1, v2))
        if hi < lo * 1.001:  # too close for the 4th powers to differ in float
            return
        assert idm_command(lo, None, p) > idm_command(hi, None, p)

    @given(
        v=st.floats(min_value=0.0, max_value=40.0),
        dv=st.floats(min_value=-20.0, max_value=20.0),
    )
    def test_desired_gap_interaction_term_halves_when_ab_quadruple(self, v, dv):
        # sqrt(a*b) scales linearly when both double, so the dynamic part
        # of s* beyond s0 + v*T halves
        p1 = IdmParams()
        p2 = IdmParams(a_max_mps2=2 * p1.a_max_mps2, b_comfort_mps2=2 * p1.b_comfort_mps2)
        base = p1.min_spacing_m + v * p1.headway_s
        dyn1 = idm_desired_gap(v, dv, p1) - base
        dyn2 = idm_desired_gap(v, dv, p2) - base
        assert dyn2 == pytest.approx(dyn1 / 2.0, rel=1e-12, abs=1e-12)


class TestSbm:
    @pytest.mark.parametrize("decel", [-3.41, -1.71, 0.0])
    def test_returns_configured_deceleration(self, decel):
        assert sbm_command(SbmParams(decel)) == decel

    def test_rejects_positive_deceleration(self):
        with pytest.raises(ValueError):
            SbmParams(0.5)


class TestClamp:
    @pytest.mark.parametrize(
        "raw,floor,expected",
        [(-50.0, -3.41, -3.41), (-1.0, -3.41, -1.0), (0.73, -3.41, 0.73)],
    )
    def test_examples(self, raw, floor, expected):
        assert clamp_acceleration(raw, floor) == expected

    @given(
        x=st.floats(min_value=-1e6, max_value=1e6),
        f=st.floats(min_value=-1e6, max_value=0.0),
    )
    def test_never_below_floor_and_identity_above(self, x, f):
        out = clamp_acceleration(x, f)
        assert out >= f
        if x >= f:
            assert out == x


class TestDelayLine:
    def test_zero_delay_is_identity(self):
        line = DelayLine(delay_s=0.0, dt_s=0.04)
        assert len(line) == 0
        assert line.step(-3.41) == -3.41

    def test_half_second_delay_rounds_up_to_13_slots(self):
        # 0.5 / 0.04 = 12.5 rounds half up
        assert delay_queue_length(0.5, 0.04) == 13
        line = DelayLine(delay_s=0.5, dt_s=0.04)
        outputs = [line.step(float(k + 1)) for k in range(20)]
        assert outputs[:13] == [0.0] * 13
        assert outputs[13] == 1.0
        assert outputs[14] == 2.0

    def test_one_second_delay_is_exact_25_step_shift(self):
        line = DelayLine(delay_s=1.0, dt_s=0.04)
        inputs = [math.sin(0.3 * k) for k in range(80)]
        outputs = [line.step(x) for x in inputs]
        for k in range(25, 80):
            assert outputs[k] == inputs[k - 25]

    def test_queue_length_constant_across_steps(self):
        line = DelayLine(delay_s=0.3, dt_s=0.04)
        n = len(line)
        for k in range(50):
            line.step(float(k))
            assert len(line) == n

    @given(
        commands=st.lists(
            st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=1, max_size=60
        ),
        length=st.integers(min_value=0, max_value=30),
    )
    def test_shift_property(self, commands, length):
        line = DelayLine(delay_s=length * 0.04, dt_s=0.04)
        outputs = [line.step(c) for c in commands]
        for k, out in enumerate(outputs):
            expected = commands[k - length] if k >= length else 0.0
            assert out == expected
