from pathlib import Path

import pytest

from antisync import SimConfig, simulate
from antisync.config import load_scenario

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture(scope="session")
def scenario_dir():
    return SCENARIO_DIR


@pytest.fixture(scope="session")
def s4_controlled():
    return load_scenario(SCENARIO_DIR / "paper_s4_controlled.toml")


@pytest.fixture(scope="session")
def s4_uncontrolled():
    return load_scenario(SCENARIO_DIR / "paper_s4_uncontrolled.toml")


@pytest.fixture(scope="session")
def s4_weak():
    return load_scenario(SCENARIO_DIR / "paper_s4_weak_gains.toml")


@pytest.fixture(scope="session")
def controlled_run(s4_controlled):
    """The controlled scenario at its shipped resolution, with the published
    epsilon/rho feeding the monitor columns."""
    sc = s4_controlled
    return simulate(sc.network, sc.gains, sc.sim, weights=sc.weights,
                    epsilon=0.25, rho=0.4)


@pytest.fixture(scope="session")
def uncontrolled_run(s4_uncontrolled):
    sc = s4_uncontrolled
    return simulate(sc.network, None, sc.sim, weights=sc.weights)


@pytest.fixture(scope="session")
def weak_run(s4_weak):
    sc = s4_weak
    return simulate(sc.network, sc.gains, sc.sim, weights=sc.weights)


@pytest.fixture(scope="session")
def controlled_run_half_dt(s4_controlled):
    sc = s4_controlled
    cfg = SimConfig(t_end=sc.sim.t_end, dt=sc.sim.dt / 2,
                    settle_tolerance=sc.sim.settle_tolerance,
                    record_stride=sc.sim.record_stride)
    return simulate(sc.network, sc.gains, cfg, weights=sc.weights)
