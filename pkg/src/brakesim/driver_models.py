"""Longitudinal driver models: IDM car-following and sudden constant braking.

Both models command an acceleration; the command is optionally passed
through a fixed-length FIFO (:class:`DelayLine`) that realizes the driver
reaction time, and finally floored by :func:`clamp_acceleration`.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field


@dataclass(frozen=True)
class VehicleState:
    """1-D kinematic state of one vehicle.

    ``position_m`` is the coordinate of the vehicle's geometric center along
    the travel axis, increasing in the direction of travel.
    """

    position_m: float
    speed_mps: float
    length_m: float = 5.0

    def __post_init__(self):
        if self.speed_mps < 0:
            raise ValueError(f"speed_mps must be >= 0, got {self.speed_mps}")
        if self.length_m <= 0:
            raise ValueError(f"length_m must be > 0, got {self.length_m}")


@dataclass(frozen=True)
class IdmParams:
    """IDM driver parameters.

    ``b_comfort_mps2`` is the magnitude of the desired comfortable
    deceleration (stored positive so that sqrt(a*b) is real).
    ``decel_floor_mps2`` is the hard lower bound applied to the commanded
    acceleration after the model evaluates; without it the interaction term
    produces unbounded deceleration at small gaps.  ``s1_m`` is the
    square-root spacing coefficient, kept at zero (the usual
    simplification) and exposed only so the parametrization is explicit.
    """

    a_max_mps2: float = 0.73
    b_comfort_mps2: float = 1.67
    v_desired_mps: float = 50.0 / 3.6
    headway_s: float = 1.6
    min_spacing_m: float = 2.0
    accel_exponent: float = 4.0
    s1_m: float = 0.0
    decel_floor_mps2: float = -3.41

    def __post_init__(self):
        if self.a_max_mps2 <= 0:
            raise ValueError("a_max_mps2 must be > 0")
        if self.b_comfort_mps2 <= 0:
            raise ValueError("b_comfort_mps2 must be > 0 (magnitude)")
        if self.v_desired_mps <= 0:
            raise ValueError("v_desired_mps must be > 0")
        if self.headway_s < 0:
            raise ValueError("headway_s must be >= 0")
        if self.min_spacing_m < 0:
            raise ValueError("min_spacing_m must be >= 0")
        if self.accel_exponent <= 0:
            raise ValueError("accel_exponent must be > 0")
        if self.s1_m != 0.0:
            raise ValueError("s1_m is fixed to 0 in this parametrization")
        if self.decel_floor_mps2 >= 0:
            raise ValueError("decel_floor_mps2 must be < 0")


@dataclass(frozen=True)
class SbmParams:
    """Sudden braking model: one constant commanded deceleration."""

    decel_mps2: float = -3.41

    def __post_init__(self):
        if self.decel_mps2 > 0:
            raise ValueError("decel_mps2 must be <= 0")


def idm_desired_gap(self_speed: float, approach_rate: float, params: IdmParams) -> float:
    """Dynamic desired spacing s* of the IDM."""
    p = params
    return (
        p.min_spacing_m
        + p.s1_m * math.sqrt(self_speed / p.v_desired_mps)
        + self_speed * p.headway_s
        + self_speed * approach_rate / (2.0 * math.sqrt(p.a_max_mps2 * p.b_comfort_mps2))
    )


def idm_command(
    self_speed: float,
    lead_info: tuple[float, float] | None,
    params: IdmParams,
) -> float:
    """Raw (unclamped) IDM acceleration command in m/s^2.

    ``lead_info`` is ``(gap_m, lead_speed_mps)`` with ``gap_m`` the
    bumper-to-bumper spacing; ``None`` selects the free-road branch where
    the interaction term vanishes.  The approach rate is
    ``self_speed - lead_speed``.
    """
    p = params
    beta_free = (self_speed / p.v_desired_mps) ** p.accel_exponent
    if lead_info is None:
        return p.a_max_mps2 * (1.0 - beta_free)
    gap_m, lead_speed = lead_info
    if gap_m <= 0:
        raise ValueError(f"gap_m must be > 0, got {gap_m}")
    desired_gap = idm_desired_gap(self_speed, self_speed - lead_speed, params)
    beta_follow = (desired_gap / gap_m) ** 2
    return p.a_max_mps2 * (1.0 - beta_free - beta_follow)


def sbm_command(params: SbmParams) -> float:
    """Constant braking command; the reaction delay lives in the delay line."""
    return params.decel_mps2


def clamp_acceleration(raw: float, floor: float) -> float:
    """Floor the commanded acceleration at the vehicle's deceleration limit."""
    return max(raw, floor)


def delay_queue_length(delay_s: float, dt_s: float) -> int:
    """FIFO length realizing ``delay_s`` at step ``dt_s``.

    Rounds half up, so the quantization error is at most ``dt_s / 2``
    (e.g. 0.5 s at 0.04 s becomes 13 slots = 0.52 s).
    """
    return int(math.floor(delay_s / dt_s + 0.5))


@dataclass
class DelayLine:
    """Fixed-length FIFO delaying an acceleration command signal.

    Pre-filled with ``fill`` (default 0.0: the driver coasts during the
    reaction time).  Each :meth:`step` pushes one command and pops the one
    issued ``len(queue)`` steps earlier; with zero delay the input passes
    through unchanged.
    """

    delay_s: float
    dt_s: float
    fill: float = 0.0
    _queue: deque = field(init=False, repr=False)

    def __post_init__(self):
        if self.delay_s < 0:
            raise ValueError("delay_s must be >= 0")
        if self.dt_s <= 0:
            raise ValueError("dt_s must be > 0")
        n = delay_queue_length(self.delay_s, self.dt_s)
        self._queue = deque([self.fill] * n)

    def __len__(self) -> int:
        return len(self._queue)

    def step(self, new_command: float) -> float:
        self._queue.append(new_command)
        return self._queue.popleft()
