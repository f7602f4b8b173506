import math
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "eapsim",
    deadline=None,
    max_examples=100,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("eapsim")

REPO_ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO_ROOT


@pytest.fixture(scope="session")
def default_scenario_path() -> Path:
    return REPO_ROOT / "scenarios" / "default.yaml"


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return REPO_ROOT / "tests" / "golden"


def make_static_scenario(*, rx_north_m=1000.0, jam_east_m=100_000.0,
                         duration_s=10.0, sample_interval_s=1.0,
                         packet_interval_s=2.0, seed=7, bandwidth_hz=1.0e6,
                         bit_rate_bps=1.0e6, jam_power_w=20.0):
    """All-fixed-node scenario for fast deterministic engine tests."""
    from eapsim import (
        AntennaConfig, FixedPose, Node, Position, RadioParams, Scenario,
        SimParams,
    )
    nodes = (
        Node(id="tx", role="transmitter",
             mobility=FixedPose(Position(0.0, 0.0, 0.0)),
             antenna=AntennaConfig(), tx_power_w=20.0),
        Node(id="rx", role="receiver",
             mobility=FixedPose(Position(0.0, rx_north_m, 0.0)),
             antenna=AntennaConfig()),
        Node(id="jam", role="jammer",
             mobility=FixedPose(Position(jam_east_m, 0.0, 0.0)),
             antenna=AntennaConfig(), tx_power_w=jam_power_w),
    )
    return Scenario(
        nodes=nodes,
        radio=RadioParams(frequency_hz=2.4e9, tx_power_w=20.0,
                          bandwidth_hz=bandwidth_hz, bit_rate_bps=bit_rate_bps),
        sim=SimParams(duration_s=duration_s, sample_interval_s=sample_interval_s,
                      packet_interval_s=packet_interval_s, seed=seed),
    )
