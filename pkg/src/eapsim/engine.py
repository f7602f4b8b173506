"""Deterministic simulation loop and output statistics.

Two time bases run side by side: a dense sampling grid produces the
continuous-looking BER / throughput curves, while sparse packet epochs
produce discrete accept/reject records with binomially sampled bit
errors.  Given the scenario (including its seed) the whole output is
reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .antenna import AntennaConfig, LockedToTarget
from .geom3d import Position, attitude_to_rotation
from .mobility import MobilityModel
from .radio import LinkSample, RadioParams, TerminalState, evaluate_link

ROLES = ("transmitter", "receiver", "jammer")


class ScenarioValidationError(ValueError):
    """Raised by run() with every violation found, not just the first."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid scenario: " + "; ".join(self.violations))


@dataclass(frozen=True)
class Node:
    id: str
    role: str
    mobility: MobilityModel
    antenna: AntennaConfig = field(default_factory=AntennaConfig)
    tx_power_w: float | None = None


@dataclass(frozen=True)
class SimParams:
    duration_s: float
    sample_interval_s: float = 1.0
    packet_interval_s: float = 60.0
    seed: int = 0


@dataclass(frozen=True)
class Scenario:
    nodes: tuple[Node, ...]
    radio: RadioParams
    sim: SimParams

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))

    def node_by_role(self, role: str) -> Node:
        matches = [n for n in self.nodes if n.role == role]
        if len(matches) != 1:
            raise ValueError(f"scenario does not have exactly one {role}")
        return matches[0]

    @property
    def transmitter(self) -> Node:
        return self.node_by_role("transmitter")

    @property
    def receiver(self) -> Node:
        return self.node_by_role("receiver")

    @property
    def jammer(self) -> Node:
        return self.node_by_role("jammer")

    def validate(self) -> list[str]:
        """Every violated invariant, in one pass."""
        violations = []
        for role in ROLES:
            count = sum(1 for n in self.nodes if n.role == role)
            if count != 1:
                violations.append(f"expected exactly one {role} node, found {count}")
        for n in self.nodes:
            if n.role not in ROLES:
                violations.append(f"node {n.id!r}: unknown role {n.role!r}")
        ids = [n.id for n in self.nodes]
        for dup in sorted({i for i in ids if ids.count(i) > 1}):
            violations.append(f"duplicate node id {dup!r}")
        id_set = set(ids)
        for n in self.nodes:
            if n.role in ("transmitter", "jammer"):
                if n.tx_power_w is None or not n.tx_power_w > 0.0:
                    violations.append(f"node {n.id!r}: {n.role} needs tx_power_w > 0")
            mode = n.antenna.mode
            if isinstance(mode, LockedToTarget):
                if mode.target not in id_set:
                    violations.append(
                        f"node {n.id!r}: antenna target {mode.target!r} is not a scenario node")
                elif mode.target == n.id:
                    violations.append(f"node {n.id!r}: antenna target must not be the owner")
        if not self.sim.duration_s > 0.0:
            violations.append("sim duration_s must be positive")
        if not self.sim.sample_interval_s > 0.0:
            violations.append("sim sample_interval_s must be positive")
        if not self.sim.packet_interval_s > 0.0:
            violations.append("sim packet_interval_s must be positive")
        if not isinstance(self.sim.seed, int) or self.sim.seed < 0:
            violations.append("sim seed must be a non-negative integer")
        return violations


@dataclass(frozen=True)
class PacketRecord:
    """One broadcast packet: analytic error figures plus the sampled fate."""

    tx_time_s: float
    bits: int
    ber: float
    per: float
    accepted: bool
    bit_errors_sampled: int


@dataclass(frozen=True)
class Summary:
    """Aggregates the acceptance checks and the report file are built from."""

    mean_ber: float
    peak_ber: float
    peak_ber_time_s: float
    mean_throughput_norm: float
    min_throughput_norm: float
    mean_p_r_w: float
    min_p_r_w: float
    max_p_r_w: float
    quiet_prefix_s: float
    low_throughput_intervals: tuple[tuple[float, float], ...]
    throughput_threshold: float
    ber_floor: float
    packets_offered: int
    packets_accepted: int


@dataclass(frozen=True)
class SimOutput:
    samples: tuple[LinkSample, ...]
    packets: tuple[PacketRecord, ...]
    throughput_windows: tuple[tuple[float, float], ...]
    summary: Summary


def _node_states(scenario: Scenario, t: float,
                 include: tuple[Node, ...]) -> dict[str, TerminalState]:
    poses = {n.id: n.mobility.state(t) for n in include}
    states = {}
    for n in include:
        pos, att = poses[n.id]
        target_pos: Position | None = None
        if isinstance(n.antenna.mode, LockedToTarget):
            target = n.antenna.mode.target
            if target in poses:
                target_pos = poses[target][0]
            else:
                # target exists in the scenario but is excluded from this run
                owner = next(sn for sn in scenario.nodes if sn.id == target)
                target_pos = owner.mobility.state(t)[0]
        states[n.id] = TerminalState(pos, attitude_to_rotation(att), n.antenna, target_pos)
    return states


def _grid_times(duration: float, interval: float) -> list[float]:
    count = int(duration / interval + 1e-9) + 1
    return [i * interval for i in range(count)]


def _epoch_times(duration: float, interval: float) -> list[float]:
    count = int(duration / interval + 1e-9)
    return [i * interval for i in range(1, count + 1)]


def run(scenario: Scenario, *, disable_jammer: bool = False) -> SimOutput:
    """Execute the scenario and return its full, deterministic output.

    The link pipeline is evaluated on the sampling grid {0, dt, 2*dt, ...,
    duration} and again at every packet epoch {T, 2*T, ...}; packet bit
    errors are drawn binomially from the analytic bit error rate using a
    generator seeded from sim.seed.  `disable_jammer` evaluates the same
    scenario with the interference path switched off.
    """
    violations = scenario.validate()
    if violations:
        raise ScenarioValidationError(violations)

    tx_node = scenario.transmitter
    rx_node = scenario.receiver
    jam_node = scenario.jammer
    include = tuple(n for n in scenario.nodes
                    if not (disable_jammer and n.role == "jammer"))
    jam_power = 0.0 if disable_jammer else float(jam_node.tx_power_w)
    # the transmitter node's power rides in RadioParams.tx_power_w
    params = scenario.radio
    if params.tx_power_w != tx_node.tx_power_w:
        params = replace(params, tx_power_w=float(tx_node.tx_power_w))

    def sample_at(t: float) -> LinkSample:
        states = _node_states(scenario, t, include)
        jammer_state = None if disable_jammer else states[jam_node.id]
        return evaluate_link(t, states[tx_node.id], states[rx_node.id],
                             jammer_state, jam_power, params)

    samples = tuple(sample_at(t) for t in
                    _grid_times(scenario.sim.duration_s, scenario.sim.sample_interval_s))

    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=scenario.sim.seed, spawn_key=(0,)))
    packets = []
    for t in _epoch_times(scenario.sim.duration_s, scenario.sim.packet_interval_s):
        link = sample_at(t)
        bit_errors = int(rng.binomial(params.packet_bits, link.ber))
        packets.append(PacketRecord(
            tx_time_s=t,
            bits=params.packet_bits,
            ber=link.ber,
            per=link.per,
            accepted=bit_errors == 0,
            bit_errors_sampled=bit_errors,
        ))
    packets = tuple(packets)

    windows = tuple(windowed_throughput(packets, scenario.sim.packet_interval_s))
    summary = _summarize(samples, packets, 0.05, 1e-9)
    return SimOutput(samples=samples, packets=packets,
                     throughput_windows=windows, summary=summary)


def windowed_throughput(records: tuple[PacketRecord, ...] | list[PacketRecord],
                        window_s: float) -> list[tuple[float, float]]:
    """Accepted-bits / offered-bits per time window of width `window_s`.

    The series starts at the first window that offers any bits; later
    windows with nothing offered repeat the preceding value (hold-last).
    Returns (window start time, throughput in [0, 1]) pairs.
    """
    if window_s <= 0.0:
        raise ValueError("window must be positive")
    if not records:
        return []
    last_t = max(r.tx_time_s for r in records)
    n_windows = int(last_t / window_s + 1e-9) + 1
    series: list[tuple[float, float]] = []
    held: float | None = None
    for k in range(n_windows):
        start, end = k * window_s, (k + 1) * window_s
        in_window = [r for r in records if start <= r.tx_time_s < end]
        offered = sum(r.bits for r in in_window)
        if offered > 0:
            held = sum(r.bits for r in in_window if r.accepted) / offered
        if held is not None:
            series.append((start, held))
    return series


def _summarize(samples: tuple[LinkSample, ...], packets: tuple[PacketRecord, ...],
               throughput_threshold: float, ber_floor: float) -> Summary:
    if not samples:
        raise ValueError("cannot summarize an empty sample series")
    bers = [s.ber for s in samples]
    tputs = [s.throughput_norm for s in samples]
    powers = [s.p_r_w for s in samples]
    peak_idx = max(range(len(samples)), key=lambda i: bers[i])

    quiet_prefix = samples[-1].time_s
    for s in samples:
        if s.ber >= ber_floor:
            quiet_prefix = s.time_s
            break

    intervals: list[tuple[float, float]] = []
    start: float | None = None
    for s in samples:
        if s.throughput_norm < throughput_threshold:
            if start is None:
                start = s.time_s
            end = s.time_s
        elif start is not None:
            intervals.append((start, end))
            start = None
    if start is not None:
        intervals.append((start, end))

    return Summary(
        mean_ber=sum(bers) / len(bers),
        peak_ber=bers[peak_idx],
        peak_ber_time_s=samples[peak_idx].time_s,
        mean_throughput_norm=sum(tputs) / len(tputs),
        min_throughput_norm=min(tputs),
        mean_p_r_w=sum(powers) / len(powers),
        min_p_r_w=min(powers),
        max_p_r_w=max(powers),
        quiet_prefix_s=quiet_prefix,
        low_throughput_intervals=tuple(intervals),
        throughput_threshold=throughput_threshold,
        ber_floor=ber_floor,
        packets_offered=len(packets),
        packets_accepted=sum(1 for p in packets if p.accepted),
    )


def summarize(output: SimOutput, *, throughput_threshold: float = 0.05,
              ber_floor: float = 1e-9) -> Summary:
    """Recompute the output's summary against custom thresholds."""
    return _summarize(output.samples, output.packets, throughput_threshold, ber_floor)
