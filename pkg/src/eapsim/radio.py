"""Free-space propagation, noise, interference, and BPSK error rates.

The numeric chain from transmit power to a per-instant link outcome:
antenna gains -> Friis received power -> jammer interference -> thermal
noise -> SINR -> Eb/N0 -> bit error rate -> packet error probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antenna import SPEED_OF_LIGHT, AntennaConfig, LockedToTarget, link_gain
from .geom3d import Position, unit_and_distance

BOLTZMANN = 1.380649e-23  # J/K


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0.0:
        raise ValueError("dB undefined for non-positive values")
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class RadioParams:
    """Link-budget constants shared by every evaluation instant.

    tx_power_w is the transmitter's power; the jammer's own power is
    supplied separately where interference is evaluated.  system_loss is
    the dimensionless L >= 1 of the free-space equation.
    """

    frequency_hz: float = 2.4e9
    tx_power_w: float = 20.0
    system_loss: float = 1.0
    bandwidth_hz: float = 1.0e6
    bit_rate_bps: float = 1.0e6
    noise_temperature_k: float = 290.0
    noise_figure: float = 1.0
    packet_bits: int = 1024

    def __post_init__(self):
        positive = {
            "frequency_hz": self.frequency_hz,
            "tx_power_w": self.tx_power_w,
            "bandwidth_hz": self.bandwidth_hz,
            "bit_rate_bps": self.bit_rate_bps,
            "noise_temperature_k": self.noise_temperature_k,
            "packet_bits": self.packet_bits,
        }
        for name, value in positive.items():
            if not value > 0:
                raise ValueError(f"{name} must be positive")
        if self.system_loss < 1.0:
            raise ValueError("system_loss must be >= 1")
        if self.noise_figure < 1.0:
            raise ValueError("noise_figure must be >= 1")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz


@dataclass(frozen=True)
class LinkSample:
    """One time-instant evaluation of the full pipeline."""

    time_s: float
    tx_rx_distance_m: float
    jam_rx_distance_m: float
    g_t_dbi: float
    g_r_dbi: float
    p_r_w: float
    interference_w: float
    noise_w: float
    sinr: float
    ber: float
    per: float
    throughput_norm: float


def friis(p_t_w: float, g_t: float, g_r: float, wavelength_m: float,
          distance_m: float, loss: float) -> float:
    """Free-space received power: P_t*G_t*G_r*lambda^2 / ((4*pi)^2*d^2*L).

    Gains are linear (dimensionless), powers in watts.
    """
    if distance_m == 0.0:
        raise ValueError("coincident antennas: distance is zero")
    if p_t_w <= 0.0 or g_t <= 0.0 or g_r <= 0.0 or wavelength_m <= 0.0 or distance_m < 0.0:
        raise ValueError("friis inputs must be positive")
    if loss < 1.0:
        raise ValueError("system loss must be >= 1")
    return (p_t_w * g_t * g_r * wavelength_m ** 2
            / ((4.0 * math.pi) ** 2 * distance_m ** 2 * loss))


def thermal_noise(temperature_k: float, bandwidth_hz: float, noise_figure: float) -> float:
    """Receiver noise floor: k_B * T * B * NF, watts."""
    if temperature_k <= 0.0 or bandwidth_hz <= 0.0:
        raise ValueError("temperature and bandwidth must be positive")
    if noise_figure < 1.0:
        raise ValueError("noise figure must be >= 1")
    return BOLTZMANN * temperature_k * bandwidth_hz * noise_figure


def sinr(p_r_w: float, noise_w: float, interference_w: float) -> float:
    """Signal to interference-plus-noise ratio, linear."""
    if noise_w <= 0.0:
        raise ValueError("no noise floor: noise must be positive")
    if p_r_w < 0.0 or interference_w < 0.0:
        raise ValueError("powers must be non-negative")
    return p_r_w / (noise_w + interference_w)


def bpsk_ber(eb_n0: float) -> float:
    """Coherent BPSK over AWGN: Q(sqrt(2*Eb/N0)) = erfc(sqrt(Eb/N0))/2."""
    if eb_n0 < 0.0:
        raise ValueError("Eb/N0 must be non-negative")
    return 0.5 * math.erfc(math.sqrt(eb_n0))


def packet_error_prob(ber: float, bits: int) -> float:
    """Probability that any of `bits` independent bits flips: 1-(1-ber)^bits.

    Evaluated via log1p/expm1 so tiny error rates keep full precision.
    """
    if not 0.0 <= ber <= 1.0:
        raise ValueError("ber must lie in [0, 1]")
    if bits < 1:
        raise ValueError("bits must be >= 1")
    if ber == 1.0:
        return 1.0
    return -math.expm1(bits * math.log1p(-ber))


@dataclass(frozen=True)
class TerminalState:
    """A node's pose and antenna at one instant, targets already resolved."""

    position: Position
    rotation: np.ndarray  # body-to-world
    antenna: AntennaConfig
    target_position: Position | None = None

    def gain_toward(self, peer: Position) -> float:
        return link_gain(self.antenna, self.position, self.rotation, peer,
                         self.target_position)


def evaluate_link(time_s: float, tx: TerminalState, rx: TerminalState,
                  jammer: TerminalState | None, jammer_power_w: float,
                  params: RadioParams) -> LinkSample:
    """Run the whole pipeline for one instant and return the LinkSample.

    Stage order: transmit antenna gain toward the receiver, Friis path
    loss, receive antenna gain toward the transmitter, received power;
    then the jammer's power through the same three stages into the
    interference term; thermal noise; SINR; Eb/N0 = SINR*(B/R_b); BPSK
    bit error rate; packet error probability; analytic normalized
    throughput (1-ber)^packet_bits.  Pass jammer=None to disable the
    interference path (distance reported as inf).
    """
    lam = params.wavelength_m
    _, d_tx_rx = unit_and_distance(tx.position, rx.position)

    g_t_dbi = tx.gain_toward(rx.position)
    g_r_dbi = rx.gain_toward(tx.position)
    p_r = friis(params.tx_power_w, db_to_linear(g_t_dbi), db_to_linear(g_r_dbi),
                lam, d_tx_rx, params.system_loss)

    if jammer is not None:
        _, d_jam_rx = unit_and_distance(jammer.position, rx.position)
        g_jam_dbi = jammer.gain_toward(rx.position)
        g_rx_jam_dbi = rx.gain_toward(jammer.position)
        interference = friis(jammer_power_w, db_to_linear(g_jam_dbi),
                             db_to_linear(g_rx_jam_dbi), lam, d_jam_rx,
                             params.system_loss)
    else:
        d_jam_rx = math.inf
        interference = 0.0

    noise = thermal_noise(params.noise_temperature_k, params.bandwidth_hz,
                          params.noise_figure)
    ratio = sinr(p_r, noise, interference)
    eb_n0 = ratio * params.bandwidth_hz / params.bit_rate_bps
    ber = bpsk_ber(eb_n0)
    per = packet_error_prob(ber, params.packet_bits)
    return LinkSample(
        time_s=time_s,
        tx_rx_distance_m=d_tx_rx,
        jam_rx_distance_m=d_jam_rx,
        g_t_dbi=g_t_dbi,
        g_r_dbi=g_r_dbi,
        p_r_w=p_r,
        interference_w=interference,
        noise_w=noise,
        sinr=ratio,
        ber=ber,
        per=per,
        throughput_norm=1.0 - per,
    )
