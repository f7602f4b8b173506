"""Antenna gain patterns, pointing modes, and the per-link gain stage.

Patterns are parameterized by boresight-relative angles (theta off the
boresight, phi about it) so any pattern can be reused on any mount.  Gains
are in dBi throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geom3d import (
    BODY_FORWARD,
    TWO_PI,
    WORLD_UP,
    MountSpec,
    Position,
    SphericalDirection,
    mount_boresight_body,
    orthonormal_frame,
    to_spherical,
    unit_and_distance,
)

SPEED_OF_LIGHT = 299_792_458.0


def aperture_gain(frequency_hz: float, effective_area_m2: float) -> float:
    """Linear gain of an aperture: 4*pi*f^2*A_e / c^2."""
    if frequency_hz <= 0.0 or effective_area_m2 <= 0.0:
        raise ValueError("frequency and effective area must be positive")
    return 4.0 * math.pi * frequency_hz ** 2 * effective_area_m2 / SPEED_OF_LIGHT ** 2


@dataclass(frozen=True)
class Isotropic:
    """Radiates equally in all directions: 0 dBi everywhere."""


@dataclass(frozen=True)
class Cone:
    """Constant main-lobe gain inside a cone, constant back gain outside.

    The cone boundary is inclusive: theta == half_angle_rad yields the
    main gain.
    """

    g_main_dbi: float
    half_angle_rad: float
    g_back_dbi: float

    def __post_init__(self):
        if not 0.0 < self.half_angle_rad < math.pi:
            raise ValueError("cone half angle must lie in (0, pi)")
        if self.g_back_dbi > self.g_main_dbi:
            raise ValueError("cone back gain must not exceed the main gain")


@dataclass(frozen=True)
class Parabolic:
    """Quadratic main-lobe rolloff: peak - min(3*(theta/theta_h)^2, a_max) dB.

    theta_h_rad is the half-power half-angle (3 dB down by construction);
    a_max_db caps the attenuation.
    """

    g_peak_dbi: float
    theta_h_rad: float
    a_max_db: float

    def __post_init__(self):
        if self.theta_h_rad <= 0.0:
            raise ValueError("parabolic half-power angle must be positive")
        if self.a_max_db <= 0.0:
            raise ValueError("parabolic maximum attenuation must be positive")


@dataclass(frozen=True)
class Tabulated:
    """Gain grid over theta in [0, pi] (inclusive ends) and phi in [0, 2*pi)
    (periodic), uniformly spaced, bilinearly interpolated in the dB domain
    with phi wrapping across the 0/2*pi seam.  source_file records where a
    loaded grid came from; it does not take part in equality."""

    gains_dbi: np.ndarray
    source_file: str | None = None

    def __post_init__(self):
        grid = np.asarray(self.gains_dbi, dtype=float)
        if grid.ndim != 2 or grid.shape[0] < 2 or grid.shape[1] < 2:
            raise ValueError("tabulated pattern needs at least a 2x2 grid")
        if not np.all(np.isfinite(grid)):
            raise ValueError("tabulated gains must be finite")
        object.__setattr__(self, "gains_dbi", grid)

    def __eq__(self, other):
        if not isinstance(other, Tabulated):
            return NotImplemented
        return np.array_equal(self.gains_dbi, other.gains_dbi)

    def __hash__(self):
        return hash(self.gains_dbi.tobytes())


AntennaPattern = Isotropic | Cone | Parabolic | Tabulated


def load_pattern_file(path: str | Path) -> Tabulated:
    """Read a tabulated pattern from a plain-text grid file.

    First line: `theta_samples phi_samples`.  The remaining whitespace-
    separated numbers are gains in dBi, row-major over theta then phi.
    """
    text = Path(path).read_text()
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("pattern file: missing header")
    try:
        n_theta, n_phi = int(tokens[0]), int(tokens[1])
    except ValueError as exc:
        raise ValueError("pattern file: header must be two integers") from exc
    values = tokens[2:]
    if len(values) != n_theta * n_phi:
        raise ValueError(
            f"pattern file: expected {n_theta * n_phi} gains, found {len(values)}")
    try:
        grid = np.array([float(v) for v in values]).reshape(n_theta, n_phi)
    except ValueError as exc:
        raise ValueError("pattern file: gains must be numbers") from exc
    return Tabulated(grid)


def _tabulated_gain(p: Tabulated, d: SphericalDirection) -> float:
    n_theta, n_phi = p.gains_dbi.shape
    u = d.theta / (math.pi / (n_theta - 1))
    i0 = min(int(u), n_theta - 2)
    fu = u - i0
    v = (d.phi % TWO_PI) / (TWO_PI / n_phi)
    j0 = min(int(v), n_phi - 1)
    fv = v - j0
    j1 = (j0 + 1) % n_phi
    g = p.gains_dbi
    top = g[i0, j0] * (1.0 - fv) + g[i0, j1] * fv
    bot = g[i0 + 1, j0] * (1.0 - fv) + g[i0 + 1, j1] * fv
    return float(top * (1.0 - fu) + bot * fu)


def pattern_gain(pattern: AntennaPattern, d: SphericalDirection) -> float:
    """Gain in dBi of `pattern` toward the boresight-relative direction."""
    if isinstance(pattern, Isotropic):
        return 0.0
    if isinstance(pattern, Cone):
        return pattern.g_main_dbi if d.theta <= pattern.half_angle_rad else pattern.g_back_dbi
    if isinstance(pattern, Parabolic):
        attn = 3.0 * (d.theta / pattern.theta_h_rad) ** 2
        return pattern.g_peak_dbi - min(attn, pattern.a_max_db)
    if isinstance(pattern, Tabulated):
        return _tabulated_gain(pattern, d)
    raise TypeError(f"unknown antenna pattern: {pattern!r}")


def pattern_peak_dbi(pattern: AntennaPattern) -> float:
    """Largest gain the pattern can produce, in dBi."""
    if isinstance(pattern, Isotropic):
        return 0.0
    if isinstance(pattern, Cone):
        return pattern.g_main_dbi
    if isinstance(pattern, Parabolic):
        return pattern.g_peak_dbi
    return float(np.max(pattern.gains_dbi))


@dataclass(frozen=True)
class FixedToObject:
    """The antenna rides the node: boresight follows mount and attitude."""


@dataclass(frozen=True)
class LockedToTarget:
    """The antenna always points at the named scenario node."""

    target: str


PointingMode = FixedToObject | LockedToTarget


@dataclass(frozen=True)
class AntennaConfig:
    pattern: AntennaPattern = field(default_factory=Isotropic)
    mount: MountSpec = field(default_factory=MountSpec)
    mode: PointingMode = field(default_factory=FixedToObject)


def boresight(mode: PointingMode, owner_pos: Position, owner_rot: np.ndarray,
              mount: MountSpec, target_pos: Position | None = None) -> np.ndarray:
    """World-frame pointing direction of an antenna.

    FixedToObject: the mount's phi/theta direction carried by the owner's
    rotation.  LockedToTarget: straight at the resolved target position.
    """
    if isinstance(mode, LockedToTarget):
        if target_pos is None:
            raise ValueError("locked-to-target antenna needs a target position")
        if target_pos == owner_pos:
            raise ValueError("degenerate pointing: target coincides with owner")
        direction, _ = unit_and_distance(owner_pos, target_pos)
        return direction
    return owner_rot @ mount_boresight_body(mount)


def antenna_frame(cfg: AntennaConfig, owner_pos: Position, owner_rot: np.ndarray,
                  target_pos: Position | None = None) -> np.ndarray:
    """Antenna-to-world rotation: z is the boresight, y the projection of
    world up (owner's body forward when the boresight is vertical), with
    the psi twist applied about the boresight."""
    z = boresight(cfg.mode, owner_pos, owner_rot, cfg.mount, target_pos)
    body_forward_world = owner_rot @ BODY_FORWARD
    return orthonormal_frame(z, WORLD_UP, body_forward_world, cfg.mount.psi)


def link_gain(cfg: AntennaConfig, owner_pos: Position, owner_rot: np.ndarray,
              peer_pos: Position, target_pos: Position | None = None) -> float:
    """Gain in dBi of the owner's antenna toward a peer position.

    The complete gain stage: point the antenna, express the direction to
    the peer in the antenna frame, look the angles up in the pattern.
    """
    if peer_pos == owner_pos:
        raise ValueError("coincident positions: peer coincides with antenna")
    frame = antenna_frame(cfg, owner_pos, owner_rot, target_pos)
    to_peer, _ = unit_and_distance(owner_pos, peer_pos)
    return pattern_gain(cfg.pattern, to_spherical(frame.T @ to_peer))
