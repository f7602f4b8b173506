"""3D coordinate frames, attitude rotations, and boresight-relative angles.

World frame: x east, y north, z up, meters.  Body frame at zero attitude:
x right (east), y forward (north), z up.  Rotation matrices map body-frame
coordinates to world-frame coordinates; their columns are the body axes
expressed in world coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# |norm(v) - 1| must stay below this for anything treated as a direction.
UNIT_TOL = 1e-9
# Boresights closer than this (in sin of the tilt angle) to the frame's up
# axis use the fallback reference when building the transverse axes.
VERTICAL_TOL = 1e-6

WORLD_UP = np.array([0.0, 0.0, 1.0])
BODY_RIGHT = np.array([1.0, 0.0, 0.0])
BODY_FORWARD = np.array([0.0, 1.0, 0.0])
BODY_UP = np.array([0.0, 0.0, 1.0])


def wrap_angle(angle: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    return math.pi - (math.pi - angle) % TWO_PI


@dataclass(frozen=True)
class Position:
    """World-frame point: x meters east, y meters north, z meters altitude."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise ValueError("position components must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class Attitude:
    """Node orientation in radians.

    yaw: about the up axis, clockwise from north seen from above;
    pitch: nose-up positive, in [-pi/2, pi/2];
    roll: about the forward axis, up-toward-right positive.
    yaw and roll are stored wrapped to (-pi, pi].
    """

    yaw: float
    pitch: float
    roll: float

    def __post_init__(self):
        for name in ("yaw", "pitch", "roll"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"attitude {name} must be finite")
        if not -math.pi / 2 <= self.pitch <= math.pi / 2:
            raise ValueError("pitch must lie in [-pi/2, pi/2]")
        object.__setattr__(self, "yaw", wrap_angle(self.yaw))
        object.__setattr__(self, "roll", wrap_angle(self.roll))


ZERO_ATTITUDE = Attitude(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class SphericalDirection:
    """Boresight-relative direction: theta off-boresight in [0, pi], phi
    about the boresight in [0, 2*pi).  phi is 0 at the poles."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError("theta must lie in [0, pi]")
        if not (0.0 <= self.phi < TWO_PI):
            raise ValueError("phi must lie in [0, 2*pi)")


@dataclass(frozen=True)
class MountSpec:
    """Antenna mount angles relative to the owning node's body, radians.

    phi: azimuth about body up, from body forward toward body right;
    theta: elevation from the body horizontal plane, up positive;
    psi: rotation of the antenna about its own boresight.
    """

    phi: float = 0.0
    theta: float = 0.0
    psi: float = 0.0

    def __post_init__(self):
        for name in ("phi", "theta", "psi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"mount {name} must be finite")
        if not -math.pi / 2 <= self.theta <= math.pi / 2:
            raise ValueError("mount theta must lie in [-pi/2, pi/2]")
        object.__setattr__(self, "phi", wrap_angle(self.phi))
        object.__setattr__(self, "psi", wrap_angle(self.psi))


ZERO_MOUNT = MountSpec()


def require_unit(v: np.ndarray) -> np.ndarray:
    """Return v as a float array after checking it is a unit vector."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError("not a direction: expected a 3-vector")
    norm = math.sqrt(float(v @ v))
    if abs(norm - 1.0) >= UNIT_TOL:
        raise ValueError(f"not a direction: |v| = {norm!r}")
    return v


def facing(current: Position, nxt: Position, yaw: float) -> float:
    """Travel bearing plus yaw, wrapped to (-pi, pi].

    The bearing is the two-argument arctangent of (east displacement,
    north displacement): a compass bearing, clockwise from north.
    """
    dx = nxt.x - current.x
    dy = nxt.y - current.y
    if dx == 0.0 and dy == 0.0:
        raise ValueError("undefined facing: zero horizontal displacement")
    return wrap_angle(math.atan2(dx, dy) + yaw)


def attitude_to_rotation(a: Attitude) -> np.ndarray:
    """Body-to-world rotation for intrinsic yaw -> pitch -> roll.

    At zero attitude body forward is north (0,1,0), right is east (1,0,0)
    and up is (0,0,1).  Positive yaw turns forward toward east, positive
    pitch turns forward toward up, positive roll turns up toward right.
    """
    # Clockwise-from-north yaw is a negative right-handed rotation about z.
    cy, sy = math.cos(-a.yaw), math.sin(-a.yaw)
    cp, sp = math.cos(a.pitch), math.sin(a.pitch)
    cr, sr = math.cos(a.roll), math.sin(a.roll)
    yaw_m = np.array([[cy, -sy, 0.0], [sy, cy, 0.0], [0.0, 0.0, 1.0]])
    pitch_m = np.array([[1.0, 0.0, 0.0], [0.0, cp, -sp], [0.0, sp, cp]])
    roll_m = np.array([[cr, 0.0, sr], [0.0, 1.0, 0.0], [-sr, 0.0, cr]])
    return yaw_m @ pitch_m @ roll_m


def orthonormal_frame(boresight: np.ndarray, up_ref: np.ndarray,
                      fallback_ref: np.ndarray, psi: float) -> np.ndarray:
    """Rotation whose +z axis is `boresight`, as a 3x3 matrix.

    The frame's y axis is `up_ref` projected orthogonally to the boresight;
    when the projection is shorter than VERTICAL_TOL the `fallback_ref` is
    projected instead.  x completes the right-handed triad, and the x/y pair
    is finally rotated by psi about the boresight.
    """
    z = boresight
    y = up_ref - (up_ref @ z) * z
    norm = math.sqrt(float(y @ y))
    if norm < VERTICAL_TOL:
        y = fallback_ref - (fallback_ref @ z) * z
        norm = math.sqrt(float(y @ y))
        if norm < VERTICAL_TOL:
            raise ValueError("degenerate frame: both references parallel to boresight")
    y = y / norm
    x = np.cross(y, z)
    if psi != 0.0:
        c, s = math.cos(psi), math.sin(psi)
        x, y = c * x + s * y, -s * x + c * y
    return np.column_stack((x, y, z))


def mount_boresight_body(mount: MountSpec) -> np.ndarray:
    """Boresight direction in body coordinates for a mount's phi/theta."""
    ct = math.cos(mount.theta)
    return np.array([math.sin(mount.phi) * ct,
                     math.cos(mount.phi) * ct,
                     math.sin(mount.theta)])


def mount_rotation(mount: MountSpec) -> np.ndarray:
    """Antenna-to-body rotation: boresight from phi/theta, twist from psi.

    The transverse reference is body up, falling back to body forward when
    the boresight is vertical in the body frame.
    """
    return orthonormal_frame(mount_boresight_body(mount), BODY_UP,
                             BODY_FORWARD, mount.psi)


def world_to_antenna(node: np.ndarray, mount: MountSpec, v: np.ndarray) -> np.ndarray:
    """Re-express the world direction v in the antenna frame.

    Applies the inverse node rotation followed by the inverse mount
    rotation; the antenna boresight is the resulting frame's +z axis.
    """
    v = require_unit(v)
    rot = node @ mount_rotation(mount)
    return rot.T @ v


def to_spherical(v: np.ndarray) -> SphericalDirection:
    """Antenna-frame unit vector to boresight-relative (theta, phi)."""
    v = require_unit(v)
    theta = math.acos(min(1.0, max(-1.0, float(v[2]))))
    if theta == 0.0 or theta == math.pi:
        return SphericalDirection(theta, 0.0)
    return SphericalDirection(theta, math.atan2(v[1], v[0]) % TWO_PI)


def unit_and_distance(frm: Position, to: Position) -> tuple[np.ndarray, float]:
    """Unit direction from `frm` to `to` and the separating distance."""
    d = to.as_array() - frm.as_array()
    dist = math.sqrt(float(d @ d))
    if dist == 0.0:
        raise ValueError("coincident positions")
    return d / dist, dist


def distance(a: Position, b: Position) -> float:
    return math.hypot(b.x - a.x, b.y - a.y, b.z - a.z)
