"""Node position and attitude as a function of time.

Three models: fixed pose, constant-speed waypoint trajectories, and the
classic random-waypoint process.  Moving nodes derive their attitude from
the motion itself: yaw is the travel bearing, pitch the climb angle, roll
zero.  All models answer `state(t) -> (Position, Attitude)` and are
deterministic: the same configuration (and seed) always yields the same
trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .geom3d import Attitude, Position, ZERO_ATTITUDE, facing


def _leg_attitude(frm: Position, to: Position, previous_yaw: float) -> Attitude:
    """Heading and climb of a travel leg; vertical legs keep the old yaw."""
    dx, dy, dz = to.x - frm.x, to.y - frm.y, to.z - frm.z
    horizontal = math.hypot(dx, dy)
    if horizontal == 0.0:
        yaw = previous_yaw
        pitch = math.copysign(math.pi / 2, dz) if dz != 0.0 else 0.0
    else:
        yaw = facing(frm, to, 0.0)
        pitch = math.atan2(dz, horizontal)
    return Attitude(yaw, pitch, 0.0)


def _interpolate(frm: Position, to: Position, fraction: float) -> Position:
    return Position(frm.x + (to.x - frm.x) * fraction,
                    frm.y + (to.y - frm.y) * fraction,
                    frm.z + (to.z - frm.z) * fraction)


@dataclass(frozen=True)
class FixedPose:
    """A node that never moves."""

    position: Position
    attitude: Attitude = ZERO_ATTITUDE

    def state(self, t: float) -> tuple[Position, Attitude]:
        return self.position, self.attitude


@dataclass(frozen=True)
class Trajectory:
    """Constant-speed piecewise-linear motion along a waypoint polyline.

    Closed trajectories append the leg back to the first waypoint and wrap
    by arc length; open ones stop at the final waypoint.
    """

    waypoints: tuple[Position, ...]
    speed_mps: float
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "waypoints", tuple(self.waypoints))
        if len(self.waypoints) < 2:
            raise ValueError("trajectory needs at least two waypoints")
        if self.speed_mps <= 0.0:
            raise ValueError("trajectory speed must be positive")
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            if a == b:
                raise ValueError("consecutive trajectory waypoints must be distinct")
        if self.closed and self.waypoints[-1] == self.waypoints[0]:
            raise ValueError("closed trajectory must not repeat the first waypoint")

    @cached_property
    def _legs(self) -> tuple[tuple[Position, Position, float], ...]:
        pts = list(self.waypoints)
        if self.closed:
            pts.append(self.waypoints[0])
        return tuple((a, b, math.dist((a.x, a.y, a.z), (b.x, b.y, b.z)))
                     for a, b in zip(pts, pts[1:]))

    @cached_property
    def total_length_m(self) -> float:
        return sum(length for _, _, length in self._legs)

    def state(self, t: float) -> tuple[Position, Attitude]:
        if t < 0.0:
            raise ValueError("time must be non-negative")
        legs = self._legs
        total = self.total_length_m
        s = self.speed_mps * t
        if self.closed:
            s = math.fmod(s, total)
        elif s >= total:
            last_from, last_to, _ = legs[-1]
            return self.waypoints[-1], _leg_attitude(last_from, last_to, 0.0)
        yaw = 0.0
        for frm, to, length in legs:
            if s <= length:
                att = _leg_attitude(frm, to, yaw)
                return _interpolate(frm, to, s / length), att
            s -= length
            yaw = _leg_attitude(frm, to, yaw).yaw
        # fmod rounding can leave s marginally past the last leg
        last_from, last_to, _ = legs[-1]
        return last_to, _leg_attitude(last_from, last_to, yaw)


def trajectory_position(tr: Trajectory, t: float) -> Position:
    return tr.state(t)[0]


@dataclass(frozen=True)
class Area:
    """Axis-aligned horizontal extent for random-waypoint destinations."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if self.x_max <= self.x_min or self.y_max <= self.y_min:
            raise ValueError("area extents must be positive")

    def contains(self, p: Position, tol: float = 1e-9) -> bool:
        return (self.x_min - tol <= p.x <= self.x_max + tol
                and self.y_min - tol <= p.y <= self.y_max + tol)


class RandomWaypoint:
    """Seeded random-waypoint motion at a fixed altitude.

    Destinations are drawn uniformly in the area (x first, then y per
    destination) from a PCG64 generator seeded with `seed`; the node
    travels each leg at constant speed, pauses, and repeats.  The first
    draw is the position at t=0.  Legs are cached lazily, so one instance
    must not be shared by concurrently running simulations.
    """

    def __init__(self, area: Area, altitude_m: float, speed_mps: float,
                 pause_s: float = 0.0, seed: int = 0):
        if speed_mps <= 0.0:
            raise ValueError("speed must be positive")
        if pause_s < 0.0:
            raise ValueError("pause must be non-negative")
        self.area = area
        self.altitude_m = altitude_m
        self.speed_mps = speed_mps
        self.pause_s = pause_s
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        start = self._draw()
        # segments: (t_start, t_end, from, to, attitude); pauses have from == to
        self._segments: list[tuple[float, float, Position, Position, Attitude]] = []
        self._cursor = start
        self._cursor_time = 0.0
        self._yaw = 0.0

    def _draw(self) -> Position:
        x = self._rng.uniform(self.area.x_min, self.area.x_max)
        y = self._rng.uniform(self.area.y_min, self.area.y_max)
        return Position(x, y, self.altitude_m)

    def _extend_to(self, t: float) -> None:
        while self._cursor_time <= t:
            dest = self._draw()
            dist = math.dist((self._cursor.x, self._cursor.y, self._cursor.z),
                             (dest.x, dest.y, dest.z))
            if dist > 0.0:
                att = _leg_attitude(self._cursor, dest, self._yaw)
                self._yaw = att.yaw
                t_end = self._cursor_time + dist / self.speed_mps
                self._segments.append((self._cursor_time, t_end, self._cursor, dest, att))
                self._cursor_time = t_end
                self._cursor = dest
            if self.pause_s > 0.0:
                att = Attitude(self._yaw, 0.0, 0.0)
                self._segments.append((self._cursor_time, self._cursor_time + self.pause_s,
                                       self._cursor, self._cursor, att))
                self._cursor_time += self.pause_s

    def state(self, t: float) -> tuple[Position, Attitude]:
        if t < 0.0:
            raise ValueError("time must be non-negative")
        self._extend_to(t)
        for t0, t1, frm, to, att in self._segments:
            if t0 <= t < t1:
                if frm == to:
                    return frm, att
                return _interpolate(frm, to, (t - t0) / (t1 - t0)), att
        # unreachable: segments are contiguous from 0 past t
        last = self._segments[-1]
        return last[3], last[4]

    def position(self, t: float) -> Position:
        return self.state(t)[0]

    def __eq__(self, other):
        if not isinstance(other, RandomWaypoint):
            return NotImplemented
        return (self.area, self.altitude_m, self.speed_mps, self.pause_s,
                self.seed) == (other.area, other.altitude_m, other.speed_mps,
                               other.pause_s, other.seed)

    def __repr__(self):
        return (f"RandomWaypoint(area={self.area!r}, altitude_m={self.altitude_m!r}, "
                f"speed_mps={self.speed_mps!r}, pause_s={self.pause_s!r}, "
                f"seed={self.seed!r})")


def random_waypoint_position(state: RandomWaypoint, t: float) -> Position:
    return state.position(t)


MobilityModel = FixedPose | Trajectory | RandomWaypoint
