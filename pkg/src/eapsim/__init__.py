"""Deterministic 3D wireless-link simulator with attitude-aware antennas.

A ground transmitter, an aerial receiver, and a mobile jammer move through
a flat Cartesian world; oriented antenna patterns, free-space propagation,
and BPSK error rates turn the geometry into BER and throughput series.
"""

__version__ = "0.1.0"

from .antenna import (
    AntennaConfig,
    AntennaPattern,
    Cone,
    FixedToObject,
    Isotropic,
    LockedToTarget,
    Parabolic,
    PointingMode,
    Tabulated,
    aperture_gain,
    boresight,
    link_gain,
    load_pattern_file,
    pattern_gain,
)
from .engine import (
    Node,
    PacketRecord,
    Scenario,
    ScenarioValidationError,
    SimOutput,
    SimParams,
    Summary,
    run,
    summarize,
    windowed_throughput,
)
from .geom3d import (
    Attitude,
    MountSpec,
    Position,
    SphericalDirection,
    attitude_to_rotation,
    facing,
    to_spherical,
    world_to_antenna,
)
from .mobility import (
    Area,
    FixedPose,
    RandomWaypoint,
    Trajectory,
    random_waypoint_position,
    trajectory_position,
)
from .radio import (
    LinkSample,
    RadioParams,
    TerminalState,
    bpsk_ber,
    evaluate_link,
    friis,
    packet_error_prob,
    sinr,
    thermal_noise,
)

__all__ = [
    "AntennaConfig", "AntennaPattern", "Area", "Attitude", "Cone",
    "FixedPose", "FixedToObject", "Isotropic", "LinkSample",
    "LockedToTarget", "MountSpec", "Node", "PacketRecord", "Parabolic",
    "PointingMode", "Position", "RadioParams", "RandomWaypoint", "Scenario",
    "ScenarioValidationError", "SimOutput", "SimParams",
    "SphericalDirection", "Summary", "Tabulated", "TerminalState",
    "Trajectory", "aperture_gain", "attitude_to_rotation", "boresight",
    "bpsk_ber", "evaluate_link", "facing", "friis", "link_gain",
    "load_pattern_file", "packet_error_prob", "pattern_gain",
    "random_waypoint_position", "run", "sinr", "summarize",
    "thermal_noise", "to_spherical", "trajectory_position",
    "windowed_throughput", "world_to_antenna",
]
