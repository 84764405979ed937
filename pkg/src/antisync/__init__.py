"""Finite-time anti-synchronization of delayed complex-valued networks:
split-pair dynamics, discontinuous gain control, admissibility criteria with
convergence certificates, and a fixed-step delay simulator."""

from .config import ConfigError, Scenario, dump_scenario, load_scenario
from .controller import ControllerGains, control
from .criteria import (
    ConvergenceCertificate,
    GainCheck,
    InfeasibleError,
    NormWeights,
    ThresholdReport,
    certificate,
    epsilon_feasible,
    find_epsilon,
    find_rho,
    rho_feasible,
    thresholds,
    verify_gains,
    weighted_inf_norm,
)
from .dde_sim import (
    DivergenceError,
    HistoryBuffer,
    HistoryWindowError,
    SimConfig,
    Trajectory,
    monitor_m,
    monitor_v,
    simulate,
)
from .model import (
    ActivationSpec,
    DelaySpec,
    NetworkSpec,
    analytic_bounds,
    error_rhs,
    estimate_bounds,
    eval_activation,
    eval_delay,
    master_rhs,
    slave_rhs,
)
from .split_complex import SplitComplex, abs_pair, hat, pos_part, product_split

__all__ = [name for name in dir() if not name.startswith("_")]
