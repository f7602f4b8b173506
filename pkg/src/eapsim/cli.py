"""Scenario files, batch execution, CSV/SVG emission, and the console tool.

Scenario documents are YAML.  The normative key set, nesting, and units
are documented in the README; unknown keys are rejected and every
violation is reported in one pass with the offending key named.
"""

from __future__ import annotations

import argparse
import math
import shutil
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .antenna import (
    AntennaConfig,
    Cone,
    FixedToObject,
    Isotropic,
    LockedToTarget,
    Parabolic,
    Tabulated,
    load_pattern_file,
)
from .engine import Node, Scenario, SimOutput, SimParams, run
from .geom3d import Attitude, MountSpec, Position
from .mobility import Area, FixedPose, RandomWaypoint, Trajectory
from .radio import RadioParams, linear_to_db

LINK_CSV_HEADER = ("t_s,dist_tx_rx_m,dist_jam_rx_m,g_t_dbi,g_r_dbi,p_r_w,p_r_dbw,"
                   "interference_w,noise_w,sinr_db,ber,throughput_norm")
PACKET_CSV_HEADER = "tx_time_s,bits,ber,per,bit_errors,accepted"

# Transmit-antenna variants of the experiment matrix.  The parabolic peak
# matches aperture_gain(2.4 GHz, 0.1 m^2) ~ 80.5 ~ 19 dBi.
VARIANT_PATTERNS = {
    "isotropic": Isotropic(),
    "cone": Cone(g_main_dbi=12.0, half_angle_rad=0.35, g_back_dbi=-20.0),
    "parabolic": Parabolic(g_peak_dbi=19.0, theta_h_rad=0.15, a_max_db=30.0),
}


@dataclass(frozen=True)
class Violation:
    key: str
    reason: str

    def __str__(self):
        return f"{self.key}: {self.reason}"


class ScenarioError(ValueError):
    """Scenario document rejected; carries the complete violation list."""

    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        super().__init__("\n".join(str(v) for v in violations))


class _Collector:
    def __init__(self):
        self.violations: list[Violation] = []

    def add(self, key: str, reason: str) -> None:
        self.violations.append(Violation(key, reason))

    def mapping(self, value, key, required_keys=(), optional_keys=()):
        """Check a mapping's key set; returns the mapping or None."""
        if not isinstance(value, dict):
            self.add(key, "must be a mapping")
            return None
        allowed = set(required_keys) | set(optional_keys)
        for k in value:
            if k not in allowed:
                self.add(f"{key}.{k}", "unknown key")
        for k in required_keys:
            if k not in value:
                self.add(f"{key}.{k}", "required key missing")
        return value

    def number(self, value, key, *, minimum=None, exclusive_minimum=None):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.add(key, "must be a number")
            return None
        value = float(value)
        if not math.isfinite(value):
            self.add(key, "must be finite")
            return None
        if minimum is not None and value < minimum:
            self.add(key, f"must be >= {minimum}")
            return None
        if exclusive_minimum is not None and value <= exclusive_minimum:
            self.add(key, f"must be > {exclusive_minimum}")
            return None
        return value

    def integer(self, value, key, *, minimum=None):
        if isinstance(value, bool) or not isinstance(value, int):
            self.add(key, "must be an integer")
            return None
        if minimum is not None and value < minimum:
            self.add(key, f"must be >= {minimum}")
            return None
        return value

    def string(self, value, key):
        if not isinstance(value, str) or not value:
            self.add(key, "must be a non-empty string")
            return None
        return value

    def xyz(self, value, key):
        if (not isinstance(value, (list, tuple)) or len(value) != 3
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)):
            self.add(key, "must be a list of three numbers")
            return None
        return tuple(float(v) for v in value)


def _derive_mobility_seed(sim_seed: int, node_index: int) -> int:
    """Stable per-node seed for nodes that do not declare their own."""
    seq = np.random.SeedSequence(entropy=sim_seed, spawn_key=(node_index + 1,))
    return int(seq.generate_state(1, np.uint64)[0])


def _parse_sim(col: _Collector, doc: dict) -> SimParams | None:
    m = col.mapping(doc.get("sim"), "sim",
                    required_keys=("duration_s", "sample_interval_s",
                                   "packet_interval_s", "seed"))
    if m is None:
        return None
    duration = col.number(m.get("duration_s"), "sim.duration_s", exclusive_minimum=0)
    sample = col.number(m.get("sample_interval_s"), "sim.sample_interval_s",
                        exclusive_minimum=0)
    packet = col.number(m.get("packet_interval_s"), "sim.packet_interval_s",
                        exclusive_minimum=0)
    seed = col.integer(m.get("seed"), "sim.seed", minimum=0)
    if None in (duration, sample, packet, seed) or "duration_s" not in m:
        return None
    return SimParams(duration_s=duration, sample_interval_s=sample,
                     packet_interval_s=packet, seed=seed)


def _parse_radio(col: _Collector, doc: dict, tx_power_w: float | None) -> RadioParams | None:
    m = col.mapping(doc.get("radio"), "radio",
                    required_keys=("frequency_hz", "bandwidth_hz", "bit_rate_bps",
                                   "packet_bits", "system_loss",
                                   "noise_temperature_k", "noise_figure"))
    if m is None:
        return None
    freq = col.number(m.get("frequency_hz"), "radio.frequency_hz", exclusive_minimum=0)
    band = col.number(m.get("bandwidth_hz"), "radio.bandwidth_hz", exclusive_minimum=0)
    rate = col.number(m.get("bit_rate_bps"), "radio.bit_rate_bps", exclusive_minimum=0)
    bits = col.integer(m.get("packet_bits"), "radio.packet_bits", minimum=1)
    loss = col.number(m.get("system_loss"), "radio.system_loss", minimum=1.0)
    temp = col.number(m.get("noise_temperature_k"), "radio.noise_temperature_k",
                      exclusive_minimum=0)
    nf = col.number(m.get("noise_figure"), "radio.noise_figure", minimum=1.0)
    if None in (freq, band, rate, bits, loss, temp, nf):
        return None
    return RadioParams(frequency_hz=freq, tx_power_w=tx_power_w or 1.0,
                       system_loss=loss, bandwidth_hz=band, bit_rate_bps=rate,
                       noise_temperature_k=temp, noise_figure=nf, packet_bits=bits)


def _parse_pattern(col: _Collector, value, key: str, base_dir: Path):
    kinds = {"isotropic": (), "cone": ("g_main_dbi", "half_angle_rad", "g_back_dbi"),
             "parabolic": ("g_peak_dbi", "theta_h_rad", "a_max_db"),
             "tabulated": ("file",)}
    if not isinstance(value, dict) or "kind" not in value:
        col.add(f"{key}.kind", "required key missing")
        return None
    kind = value.get("kind")
    if kind not in kinds:
        col.add(f"{key}.kind", f"must be one of {sorted(kinds)}")
        return None
    m = col.mapping(value, key, required_keys=("kind",) + kinds[kind])
    if m is None or any(k not in m for k in kinds[kind]):
        return None
    try:
        if kind == "isotropic":
            return Isotropic()
        if kind == "cone":
            g_main = col.number(m.get("g_main_dbi"), f"{key}.g_main_dbi")
            half = col.number(m.get("half_angle_rad"), f"{key}.half_angle_rad")
            g_back = col.number(m.get("g_back_dbi"), f"{key}.g_back_dbi")
            if None in (g_main, half, g_back):
                return None
            return Cone(g_main_dbi=g_main, half_angle_rad=half, g_back_dbi=g_back)
        if kind == "parabolic":
            g_peak = col.number(m.get("g_peak_dbi"), f"{key}.g_peak_dbi")
            theta_h = col.number(m.get("theta_h_rad"), f"{key}.theta_h_rad")
            a_max = col.number(m.get("a_max_db"), f"{key}.a_max_db")
            if None in (g_peak, theta_h, a_max):
                return None
            return Parabolic(g_peak_dbi=g_peak, theta_h_rad=theta_h, a_max_db=a_max)
        path = col.string(m.get("file"), f"{key}.file")
        if path is None:
            return None
        resolved = Path(path)
        if not resolved.is_absolute():
            resolved = base_dir / resolved
        pattern = load_pattern_file(resolved)
        return replace(pattern, source_file=str(resolved))
    except (ValueError, OSError) as exc:
        col.add(key, str(exc))
        return None


def _parse_mount(col: _Collector, value, key: str) -> MountSpec | None:
    if value is None:
        return MountSpec()
    m = col.mapping(value, key, optional_keys=("phi_rad", "theta_rad", "psi_rad"))
    if m is None:
        return None
    phi = col.number(m.get("phi_rad", 0.0), f"{key}.phi_rad")
    theta = col.number(m.get("theta_rad", 0.0), f"{key}.theta_rad")
    psi = col.number(m.get("psi_rad", 0.0), f"{key}.psi_rad")
    if None in (phi, theta, psi):
        return None
    try:
        return MountSpec(phi=phi, theta=theta, psi=psi)
    except ValueError as exc:
        col.add(key, str(exc))
        return None


def _parse_antenna(col: _Collector, value, key: str, base_dir: Path) -> AntennaConfig | None:
    m = col.mapping(value, key, required_keys=("pattern", "mode"),
                    optional_keys=("mount", "target"))
    if m is None:
        return None
    pattern = _parse_pattern(col, m.get("pattern"), f"{key}.pattern", base_dir)
    mount = _parse_mount(col, m.get("mount"), f"{key}.mount")
    mode_name = m.get("mode")
    mode = None
    if mode_name == "fixed_to_object":
        if "target" in m:
            col.add(f"{key}.target", "only valid with mode locked_to_target")
        else:
            mode = FixedToObject()
    elif mode_name == "locked_to_target":
        target = col.string(m.get("target"), f"{key}.target")
        if target is not None:
            mode = LockedToTarget(target)
    elif "mode" in m:
        col.add(f"{key}.mode", "must be fixed_to_object or locked_to_target")
    if pattern is None or mount is None or mode is None:
        return None
    return AntennaConfig(pattern=pattern, mount=mount, mode=mode)


def _parse_mobility(col: _Collector, value, key: str, sim_seed: int, node_index: int):
    if not isinstance(value, dict) or "kind" not in value:
        col.add(f"{key}.kind", "required key missing")
        return None
    kind = value.get("kind")
    try:
        if kind == "fixed":
            m = col.mapping(value, key, required_keys=("kind", "position_m"),
                            optional_keys=("yaw_rad", "pitch_rad", "roll_rad"))
            if m is None:
                return None
            pos = col.xyz(m.get("position_m"), f"{key}.position_m")
            yaw = col.number(m.get("yaw_rad", 0.0), f"{key}.yaw_rad")
            pitch = col.number(m.get("pitch_rad", 0.0), f"{key}.pitch_rad")
            roll = col.number(m.get("roll_rad", 0.0), f"{key}.roll_rad")
            if None in (pos, yaw, pitch, roll):
                return None
            return FixedPose(Position(*pos), Attitude(yaw, pitch, roll))
        if kind == "trajectory":
            m = col.mapping(value, key, required_keys=("kind", "waypoints_m", "speed_mps"),
                            optional_keys=("closed",))
            if m is None:
                return None
            raw = m.get("waypoints_m")
            if not isinstance(raw, list) or len(raw) < 2:
                col.add(f"{key}.waypoints_m", "must be a list of at least two points")
                return None
            waypoints = []
            for i, wp in enumerate(raw):
                p = col.xyz(wp, f"{key}.waypoints_m[{i}]")
                if p is None:
                    return None
                waypoints.append(Position(*p))
            speed = col.number(m.get("speed_mps"), f"{key}.speed_mps", exclusive_minimum=0)
            closed = m.get("closed", False)
            if not isinstance(closed, bool):
                col.add(f"{key}.closed", "must be a boolean")
                return None
            if speed is None:
                return None
            return Trajectory(tuple(waypoints), speed_mps=speed, closed=closed)
        if kind == "random_waypoint":
            m = col.mapping(value, key,
                            required_keys=("kind", "area_m", "altitude_m", "speed_mps"),
                            optional_keys=("pause_s", "seed"))
            if m is None:
                return None
            area_m = col.mapping(m.get("area_m"), f"{key}.area_m",
                                 required_keys=("x_min", "x_max", "y_min", "y_max"))
            if area_m is None:
                return None
            bounds = {k: col.number(area_m.get(k), f"{key}.area_m.{k}")
                      for k in ("x_min", "x_max", "y_min", "y_max")}
            altitude = col.number(m.get("altitude_m"), f"{key}.altitude_m")
            speed = col.number(m.get("speed_mps"), f"{key}.speed_mps", exclusive_minimum=0)
            pause = col.number(m.get("pause_s", 0.0), f"{key}.pause_s", minimum=0)
            seed = m.get("seed", _derive_mobility_seed(sim_seed, node_index))
            seed = col.integer(seed, f"{key}.seed", minimum=0)
            if None in bounds.values() or None in (altitude, speed, pause, seed):
                return None
            return RandomWaypoint(Area(**bounds), altitude_m=altitude,
                                  speed_mps=speed, pause_s=pause, seed=seed)
        col.add(f"{key}.kind", "must be fixed, trajectory, or random_waypoint")
        return None
    except ValueError as exc:
        col.add(key, str(exc))
        return None


def parse_scenario(document: dict, base_dir: str | Path = ".") -> Scenario:
    """Validate a scenario mapping and build the Scenario.

    Raises ScenarioError carrying every schema violation (unknown key,
    missing key, type or constraint failure), each naming one key.
    """
    col = _Collector()
    base_dir = Path(base_dir)
    if not isinstance(document, dict):
        raise ScenarioError([Violation("<document>", "must be a mapping")])
    col.mapping(document, "<document>", required_keys=("sim", "radio", "nodes"))
    doc = {k: v for k, v in document.items() if k in ("sim", "radio", "nodes")}

    sim = _parse_sim(col, doc)
    sim_seed = sim.seed if sim is not None else 0

    raw_nodes = doc.get("nodes")
    nodes: list[Node] = []
    if not isinstance(raw_nodes, list) or not raw_nodes:
        if "nodes" in doc:
            col.add("nodes", "must be a non-empty list")
    else:
        for i, raw in enumerate(raw_nodes):
            key = f"nodes[{i}]"
            m = col.mapping(raw, key,
                            required_keys=("id", "role", "mobility", "antenna"),
                            optional_keys=("tx_power_w",))
            if m is None:
                continue
            node_id = col.string(m.get("id"), f"{key}.id")
            role = m.get("role")
            if role not in ("transmitter", "receiver", "jammer"):
                col.add(f"{key}.role", "must be transmitter, receiver, or jammer")
                role = None
            tx_power = None
            if role in ("transmitter", "jammer"):
                if "tx_power_w" not in m:
                    col.add(f"{key}.tx_power_w", "required key missing")
                else:
                    tx_power = col.number(m.get("tx_power_w"), f"{key}.tx_power_w",
                                          exclusive_minimum=0)
            elif role == "receiver" and "tx_power_w" in m:
                col.add(f"{key}.tx_power_w", "only valid for transmitter or jammer")
            mobility = _parse_mobility(col, m.get("mobility"), f"{key}.mobility",
                                       sim_seed, i)
            antenna = _parse_antenna(col, m.get("antenna"), f"{key}.antenna", base_dir)
            if None in (node_id, role, mobility, antenna):
                continue
            nodes.append(Node(id=node_id, role=role, mobility=mobility,
                              antenna=antenna, tx_power_w=tx_power))

    ids = [n.id for n in nodes]
    for i, n in enumerate(nodes):
        if ids.index(n.id) != i:
            col.add(f"nodes[{i}].id", f"duplicate node id {n.id!r}")
        if isinstance(n.antenna.mode, LockedToTarget):
            target = n.antenna.mode.target
            if target == n.id:
                col.add(f"nodes[{i}].antenna.target", "must not be the owning node")
            elif target not in ids:
                col.add(f"nodes[{i}].antenna.target", f"unknown node id {target!r}")
    if len(raw_nodes or []) == len(nodes):
        for role in ("transmitter", "receiver", "jammer"):
            count = sum(1 for n in nodes if n.role == role)
            if count != 1:
                col.add("nodes", f"expected exactly one {role}, found {count}")

    tx_power = next((n.tx_power_w for n in nodes if n.role == "transmitter"), None)
    radio = _parse_radio(col, doc, tx_power)

    if col.violations:
        raise ScenarioError(col.violations)
    return Scenario(nodes=tuple(nodes), radio=radio, sim=sim)


def load_scenario(path: str | Path) -> Scenario:
    """Read and parse a scenario file (YAML)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError([Violation("<document>", f"cannot read: {exc}")]) from exc
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError([Violation("<document>", f"syntax error: {exc}")]) from exc
    return parse_scenario(document, base_dir=path.parent)


def _mobility_to_mapping(mob) -> dict:
    if isinstance(mob, FixedPose):
        out = {"kind": "fixed", "position_m": [mob.position.x, mob.position.y,
                                               mob.position.z]}
        if mob.attitude != Attitude(0.0, 0.0, 0.0):
            out.update(yaw_rad=mob.attitude.yaw, pitch_rad=mob.attitude.pitch,
                       roll_rad=mob.attitude.roll)
        return out
    if isinstance(mob, Trajectory):
        return {"kind": "trajectory",
                "waypoints_m": [[p.x, p.y, p.z] for p in mob.waypoints],
                "speed_mps": mob.speed_mps, "closed": mob.closed}
    if isinstance(mob, RandomWaypoint):
        return {"kind": "random_waypoint",
                "area_m": {"x_min": mob.area.x_min, "x_max": mob.area.x_max,
                           "y_min": mob.area.y_min, "y_max": mob.area.y_max},
                "altitude_m": mob.altitude_m, "speed_mps": mob.speed_mps,
                "pause_s": mob.pause_s, "seed": mob.seed}
    raise TypeError(f"unknown mobility model: {mob!r}")


def _pattern_to_mapping(pattern) -> dict:
    if isinstance(pattern, Isotropic):
        return {"kind": "isotropic"}
    if isinstance(pattern, Cone):
        return {"kind": "cone", "g_main_dbi": pattern.g_main_dbi,
                "half_angle_rad": pattern.half_angle_rad,
                "g_back_dbi": pattern.g_back_dbi}
    if isinstance(pattern, Parabolic):
        return {"kind": "parabolic", "g_peak_dbi": pattern.g_peak_dbi,
                "theta_h_rad": pattern.theta_h_rad, "a_max_db": pattern.a_max_db}
    if isinstance(pattern, Tabulated):
        if pattern.source_file is None:
            raise ValueError("tabulated pattern has no source file to reference")
        return {"kind": "tabulated", "file": pattern.source_file}
    raise TypeError(f"unknown pattern: {pattern!r}")


def scenario_to_mapping(scenario: Scenario) -> dict:
    """Inverse of parse_scenario over the normative key set."""
    nodes = []
    for n in scenario.nodes:
        antenna = {
            "pattern": _pattern_to_mapping(n.antenna.pattern),
            "mount": {"phi_rad": n.antenna.mount.phi,
                      "theta_rad": n.antenna.mount.theta,
                      "psi_rad": n.antenna.mount.psi},
            "mode": ("locked_to_target"
                     if isinstance(n.antenna.mode, LockedToTarget)
                     else "fixed_to_object"),
        }
        if isinstance(n.antenna.mode, LockedToTarget):
            antenna["target"] = n.antenna.mode.target
        entry = {"id": n.id, "role": n.role,
                 "mobility": _mobility_to_mapping(n.mobility), "antenna": antenna}
        if n.tx_power_w is not None:
            entry["tx_power_w"] = n.tx_power_w
        nodes.append(entry)
    return {
        "sim": {"duration_s": scenario.sim.duration_s,
                "sample_interval_s": scenario.sim.sample_interval_s,
                "packet_interval_s": scenario.sim.packet_interval_s,
                "seed": scenario.sim.seed},
        "radio": {"frequency_hz": scenario.radio.frequency_hz,
                  "bandwidth_hz": scenario.radio.bandwidth_hz,
                  "bit_rate_bps": scenario.radio.bit_rate_bps,
                  "packet_bits": scenario.radio.packet_bits,
                  "system_loss": scenario.radio.system_loss,
                  "noise_temperature_k": scenario.radio.noise_temperature_k,
                  "noise_figure": scenario.radio.noise_figure},
        "nodes": nodes,
    }


def _fmt(x) -> str:
    """Shortest decimal representation that round-trips the value."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def write_bundle(output: SimOutput, out_dir: str | Path) -> None:
    """Write link_metrics.csv, packets.csv, and summary.txt into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    lines = [LINK_CSV_HEADER]
    for s in output.samples:
        lines.append(",".join(_fmt(v) for v in (
            s.time_s, s.tx_rx_distance_m, s.jam_rx_distance_m, s.g_t_dbi,
            s.g_r_dbi, s.p_r_w, linear_to_db(s.p_r_w), s.interference_w,
            s.noise_w, linear_to_db(s.sinr), s.ber, s.throughput_norm)))
    (out_dir / "link_metrics.csv").write_text("\n".join(lines) + "\n")

    lines = [PACKET_CSV_HEADER]
    for p in output.packets:
        lines.append(",".join(_fmt(v) for v in (
            p.tx_time_s, p.bits, p.ber, p.per, p.bit_errors_sampled, p.accepted)))
    (out_dir / "packets.csv").write_text("\n".join(lines) + "\n")

    s = output.summary
    report = [
        f"samples: {len(output.samples)}",
        f"packets offered: {s.packets_offered}",
        f"packets accepted: {s.packets_accepted}",
        f"mean bit error rate: {_fmt(s.mean_ber)}",
        f"peak bit error rate: {_fmt(s.peak_ber)} at t = {_fmt(s.peak_ber_time_s)} s",
        f"mean normalized throughput: {_fmt(s.mean_throughput_norm)}",
        f"min normalized throughput: {_fmt(s.min_throughput_norm)}",
        f"mean received power: {_fmt(s.mean_p_r_w)} W",
        f"received power range: [{_fmt(s.min_p_r_w)}, {_fmt(s.max_p_r_w)}] W",
        f"ber below {_fmt(s.ber_floor)} for the first {_fmt(s.quiet_prefix_s)} s",
        (f"throughput below {_fmt(s.throughput_threshold)} during: "
         + (", ".join(f"[{_fmt(a)} s, {_fmt(b)} s]" for a, b in s.low_throughput_intervals)
            or "never")),
    ]
    (out_dir / "summary.txt").write_text("\n".join(report) + "\n")


# --- static SVG charts ----------------------------------------------------

_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _svg_chart(curves: list[tuple[str, list[float], list[float]]],
               x_label: str, y_label: str, y_max: float | None = None) -> str:
    """Self-contained SVG line chart; one polyline per curve."""
    width, height = 860, 480
    left, right, top, bottom = 70, 20, 20, 50
    plot_w, plot_h = width - left - right, height - top - bottom

    all_x = [x for _, xs, _ in curves for x in xs]
    all_y = [y for _, _, ys in curves for y in ys]
    x_min, x_max = min(all_x), max(all_x)
    if x_max == x_min:
        x_max = x_min + 1.0
    lo = 0.0
    hi = y_max if y_max is not None else max(all_y) * 1.05
    if hi <= lo:
        hi = lo + 1.0

    def px(x):
        return left + (x - x_min) / (x_max - x_min) * plot_w

    def py(y):
        return top + (1.0 - (y - lo) / (hi - lo)) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" '
        f'y2="{top + plot_h}" stroke="black"/>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv = x_min + frac * (x_max - x_min)
        yv = lo + frac * (hi - lo)
        parts.append(f'<text x="{px(xv):.1f}" y="{height - 22}" font-size="12" '
                     f'text-anchor="middle">{xv:.3g}</text>')
        parts.append(f'<text x="{left - 6}" y="{py(yv):.1f}" font-size="12" '
                     f'text-anchor="end" dominant-baseline="middle">{yv:.3g}</text>')
    parts.append(f'<text x="{left + plot_w / 2:.1f}" y="{height - 6}" font-size="13" '
                 f'text-anchor="middle">{x_label}</text>')
    parts.append(f'<text x="16" y="{top + plot_h / 2:.1f}" font-size="13" '
                 f'text-anchor="middle" transform="rotate(-90 16 {top + plot_h / 2:.1f})">'
                 f'{y_label}</text>')
    for i, (label, xs, ys) in enumerate(curves):
        color = _SVG_COLORS[i % len(_SVG_COLORS)]
        points = " ".join(f"{px(x):.2f},{py(min(max(y, lo), hi)):.2f}"
                          for x, y in zip(xs, ys))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                     f'points="{points}"/>')
        if len(curves) > 1:
            ly = top + 16 + 18 * i
            parts.append(f'<line x1="{left + plot_w - 150}" y1="{ly}" '
                         f'x2="{left + plot_w - 120}" y2="{ly}" stroke="{color}" '
                         f'stroke-width="1.5"/>')
            parts.append(f'<text x="{left + plot_w - 114}" y="{ly + 4}" '
                         f'font-size="12">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _read_link_csv(path: Path) -> dict[str, list[float]]:
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0] != LINK_CSV_HEADER:
        raise ValueError(f"malformed CSV {path}: unexpected header")
    if len(lines) < 2:
        raise ValueError("no samples")
    columns = LINK_CSV_HEADER.split(",")
    data: dict[str, list[float]] = {c: [] for c in columns}
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != len(columns):
            raise ValueError(f"malformed CSV {path}: wrong column count")
        try:
            for c, cell in zip(columns, cells):
                data[c].append(float(cell))
        except ValueError as exc:
            raise ValueError(f"malformed CSV {path}: {exc}") from exc
    return data


def plot_bundle(bundle_dir: str | Path) -> list[Path]:
    """Render ber.svg and throughput.svg from a bundle's link_metrics.csv."""
    bundle_dir = Path(bundle_dir)
    data = _read_link_csv(bundle_dir / "link_metrics.csv")
    minutes = [t / 60.0 for t in data["t_s"]]
    out = []
    for column, fname, y_label, y_max in (
            ("ber", "ber.svg", "bit error rate", None),
            ("throughput_norm", "throughput.svg", "normalized throughput", 1.0)):
        svg = _svg_chart([(column, minutes, data[column])],
                         "time (minutes)", y_label, y_max=y_max)
        path = bundle_dir / fname
        path.write_text(svg)
        out.append(path)
    return out


def plot_comparison(bundle_dirs: list[str | Path], labels: list[str],
                    out_dir: str | Path) -> list[Path]:
    """Overlay several bundles' curves in one chart per metric, with legend."""
    if len(bundle_dirs) != len(labels) or not bundle_dirs:
        raise ValueError("need one label per bundle")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    datasets = [_read_link_csv(Path(d) / "link_metrics.csv") for d in bundle_dirs]
    out = []
    for column, fname, y_label, y_max in (
            ("ber", "ber_compare.svg", "bit error rate", None),
            ("throughput_norm", "throughput_compare.svg", "normalized throughput", 1.0)):
        curves = [(label, [t / 60.0 for t in data["t_s"]], data[column])
                  for label, data in zip(labels, datasets)]
        svg = _svg_chart(curves, "time (minutes)", y_label, y_max=y_max)
        path = out_dir / fname
        path.write_text(svg)
        out.append(path)
    return out


# --- batch execution ------------------------------------------------------


def _apply_variant(scenario: Scenario, variant: str | None,
                   tracker: bool | None) -> Scenario:
    """Return the scenario with the transmit antenna swapped per variant
    and/or its pointing mode forced by the tracker flag."""
    tx = scenario.transmitter
    antenna = tx.antenna
    if variant is not None:
        if variant not in VARIANT_PATTERNS:
            raise ValueError(f"unknown variant {variant!r}; choose from "
                             f"{sorted(VARIANT_PATTERNS)}")
        antenna = replace(antenna, pattern=VARIANT_PATTERNS[variant])
    if tracker is True:
        antenna = replace(antenna, mode=LockedToTarget(scenario.receiver.id))
    elif tracker is False:
        antenna = replace(antenna, mode=FixedToObject())
    nodes = tuple(replace(n, antenna=antenna) if n.id == tx.id else n
                  for n in scenario.nodes)
    return replace(scenario, nodes=nodes)


def _run_name(variant: str | None, tracker: bool | None) -> str:
    name = variant or "default"
    if tracker is True:
        return f"{name}_tracker"
    if tracker is False:
        return f"{name}_no_tracker"
    return name


def execute(scenario_path: str | Path, out_dir: str | Path, *,
            seed: int | None = None, sample_interval: float | None = None,
            variants: tuple[str, ...] = (), trackers: tuple[bool | None, ...] | None = None,
            svg: bool = False) -> list[Path]:
    """Run every requested variant and write one output bundle each.

    variants name transmit-antenna patterns (VARIANT_PATTERNS); trackers
    force the transmit antenna onto the receiver (True), onto its mount
    (False), or leave the scenario's mode alone (None).  Defaults: no
    pattern override, and tracker on for named variants.  Bundles land in
    subdirectories of out_dir named `<variant>[_tracker|_no_tracker]`; on
    any failure the directories created by this call are removed.
    """
    scenario_path = Path(scenario_path)
    out_dir = Path(out_dir)
    try:
        document = yaml.safe_load(scenario_path.read_text())
    except OSError as exc:
        raise ScenarioError([Violation("<document>", f"cannot read: {exc}")]) from exc
    except yaml.YAMLError as exc:
        raise ScenarioError([Violation("<document>", f"syntax error: {exc}")]) from exc
    if isinstance(document, dict):
        if seed is not None:
            document.setdefault("sim", {})["seed"] = seed
        if sample_interval is not None:
            document.setdefault("sim", {})["sample_interval_s"] = sample_interval

    combos: list[tuple[str | None, bool | None]] = []
    variant_list: tuple[str | None, ...] = variants or (None,)
    tracker_list = trackers if trackers is not None else ((True,) if variants else (None,))
    for v in variant_list:
        for t in tracker_list:
            combos.append((v, t))

    created: list[Path] = []
    written: list[Path] = []
    try:
        for variant, tracker in combos:
            scenario = parse_scenario(document, base_dir=scenario_path.parent)
            scenario = _apply_variant(scenario, variant, tracker)
            bundle_dir = out_dir / _run_name(variant, tracker)
            output = run(scenario)
            existed = bundle_dir.exists()
            write_bundle(output, bundle_dir)
            if not existed:
                created.append(bundle_dir)
            if svg:
                plot_bundle(bundle_dir)
            written.append(bundle_dir)
    except Exception:
        for path in created:
            shutil.rmtree(path, ignore_errors=True)
        raise
    return written


# --- console entry point --------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eapsim",
        description="Deterministic 3D wireless-link simulator with "
                    "attitude-aware antenna pointing.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario and write CSV bundles")
    sim.add_argument("scenario", help="scenario file (YAML)")
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--seed", type=int, default=None, help="override sim.seed")
    sim.add_argument("--sample-interval", type=float, default=None,
                     help="override sim.sample_interval_s")
    sim.add_argument("--variant", action="append", default=[],
                     choices=sorted(VARIANT_PATTERNS),
                     help="transmit-antenna variant (repeatable)")
    sim.add_argument("--no-tracker", action="store_true",
                     help="force the transmit antenna onto its fixed mount")
    sim.add_argument("--svg", action="store_true", help="also render SVG charts")

    val = sub.add_parser("validate", help="check a scenario file")
    val.add_argument("scenario", help="scenario file (YAML)")

    sub.add_parser("version", help="print the version")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "version":
        print(f"eapsim {__version__}")
        return 0
    if args.command == "validate":
        try:
            load_scenario(args.scenario)
        except ScenarioError as exc:
            for v in exc.violations:
                print(v, file=sys.stderr)
            return 1
        print("OK")
        return 0
    # simulate
    trackers: tuple[bool | None, ...] | None = None
    if args.no_tracker:
        trackers = (False,)
    try:
        bundles = execute(args.scenario, args.out, seed=args.seed,
                          sample_interval=args.sample_interval,
                          variants=tuple(args.variant), trackers=trackers,
                          svg=args.svg)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for b in bundles:
        print(b)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
