"""Closed-form kinematics for two vehicles under piecewise-constant braking.

Independent reference for the discrete engine: speeds are piecewise linear
and the gap piecewise quadratic in continuous time, so collision time,
impact speed and every local gap minimum follow from quadratic roots.  The
gap trajectory is evaluated "ghost-like" past the first overlap, which is
what makes near-zero minima identifiable as discretization-ambiguous.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class BrakeSchedule:
    """One vehicle: cruise at ``v0`` until ``t_on``, then constant ``decel``."""

    v0: float
    decel: float
    t_on: float = 0.0

    def __post_init__(self):
        if self.v0 < 0:
            raise ValueError("v0 must be >= 0")
        if self.decel > 0:
            raise ValueError("decel must be <= 0")
        if self.t_on < 0:
            raise ValueError("t_on must be >= 0")

    def stop_time(self) -> float:
        """Time the vehicle reaches standstill (inf if it never brakes)."""
        if self.decel == 0.0:
            return math.inf if self.v0 > 0 else self.t_on
        return self.t_on + self.v0 / -self.decel

    def speed(self, t: float) -> float:
        if t <= self.t_on:
            return self.v0
        return max(self.v0 + self.decel * (t - self.t_on), 0.0)

    def displacement(self, t: float) -> float:
        if t <= self.t_on:
            return self.v0 * t
        u = t - self.t_on
        if self.decel < 0.0:
            u = min(u, self.v0 / -self.decel)
        return self.v0 * self.t_on + self.v0 * u + 0.5 * self.decel * u * u

    def active_accel(self, t: float) -> float:
        """Acceleration in effect at time t (0 before onset and after stop)."""
        if t < self.t_on or self.speed(t) <= 0.0:
            return 0.0
        return self.decel


@dataclass(frozen=True)
class OracleOutcome:
    collision: bool
    min_gap_m: float
    t_collision_s: float | None = None
    impact_rel_speed_mps: float | None = None
    dip_gaps_m: tuple[float, ...] = ()


def _first_root(a: float, b: float, c: float, hi: float) -> float | None:
    """Smallest u in [0, hi] with a + b*u + c*u**2 = 0, else None."""
    if c == 0.0:
        if b == 0.0:
            return 0.0 if a == 0.0 else None
        u = -a / b
        return u if 0.0 <= u <= hi else None
    disc = b * b - 4.0 * c * a
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    roots = sorted(((-b - sq) / (2.0 * c), (-b + sq) / (2.0 * c)))
    for u in roots:
        if 0.0 <= u <= hi:
            return u
    return None


def constant_decel_outcome(
    gap0: float,
    lead: BrakeSchedule,
    follower: BrakeSchedule,
    horizon_s: float = 60.0,
) -> OracleOutcome:
    """Analytic outcome of a lead/follower pair of braking schedules.

    ``gap0`` is the initial bumper gap.  Returns the first gap zero
    crossing (collision), the relative speed there, and the local minima of
    the ghost gap over [0, horizon].
    """
    if gap0 <= 0:
        raise ValueError("gap0 must be > 0")

    cuts = {0.0, horizon_s, lead.t_on, follower.t_on}
    for s in (lead, follower):
        ts = s.stop_time()
        if ts < horizon_s:
            cuts.add(ts)
    times = sorted(t for t in cuts if 0.0 <= t <= horizon_s)

    def gap_at(t: float) -> float:
        return gap0 + lead.displacement(t) - follower.displacement(t)

    def slope_at(t: float) -> float:
        return lead.speed(t) - follower.speed(t)

    collision_t: float | None = None
    dips: list[float] = []
    for t0, t1 in zip(times, times[1:]):
        span = t1 - t0
        if span <= 0.0:
            continue
        mid = 0.5 * (t0 + t1)
        a_rel = lead.active_accel(mid) - follower.active_accel(mid)
        g0 = gap_at(t0)
        s0 = slope_at(t0)
        c = 0.5 * a_rel
        if collision_t is None:
            u = _first_root(g0, s0, c, span)
            if u is not None:
                collision_t = t0 + u
        # rising zero of the (continuous, piecewise linear) gap slope marks
        # a local minimum; half-open interval avoids double counting at cuts
        if c > 0.0 and s0 < 0.0:
            u_star = -s0 / (2.0 * c)
            if 0.0 < u_star <= span:
                dips.append(g0 + s0 * u_star + c * u_star * u_star)

    end_gap = gap_at(horizon_s)
    if slope_at(horizon_s) < 0.0:
        dips.append(end_gap)
    min_gap = min(dips + [gap0, end_gap])

    if collision_t is None:
        return OracleOutcome(
            collision=False, min_gap_m=min_gap, dip_gaps_m=tuple(dips)
        )
    impact = follower.speed(collision_t) - lead.speed(collision_t)
    return OracleOutcome(
        collision=True,
        min_gap_m=min_gap,
        t_collision_s=collision_t,
        impact_rel_speed_mps=impact,
        dip_gaps_m=tuple(dips),
    )
