"""Gain admissibility criteria and convergence certificates.

Evaluates the per-neuron lower thresholds the control gains must clear,
checks a candidate gain set with per-inequality margins, searches the
auxiliary constants epsilon and rho by bisection, and assembles the
certified times T1 (initial error band reaches 1) and T2 (band reaches 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .controller import ControllerGains
from .model import NetworkSpec, analytic_bounds
from .split_complex import pos_part

# Strict inequalities (mu, rho, epsilon) are verified with this margin to
# rule out floating-point equality; eta is >= as stated and gets a symmetric
# rounding allowance instead.
STRICT_MARGIN = 1e-9
ETA_SLACK = 1e-9

MODES = ("theorem1", "lipschitz")


class InfeasibleError(ValueError):
    """No feasible auxiliary constant exists for the given gain set."""


@dataclass(frozen=True)
class NormWeights:
    """Positive weights of the weighted infinity norm: xi for real parts,
    phi for imaginary parts."""

    xi: tuple[float, ...]
    phi: tuple[float, ...]

    def __post_init__(self):
        if len(self.xi) != len(self.phi):
            raise ValueError("xi and phi must share one length")
        if any(w <= 0 for w in self.xi) or any(w <= 0 for w in self.phi):
            raise ValueError("norm weights must be strictly positive")

    @property
    def n(self) -> int:
        return len(self.xi)


def weighted_inf_norm(v_r: np.ndarray, v_i: np.ndarray, weights: NormWeights) -> float:
    """max over components of |v/weight|; the plain infinity norm when all
    weights are 1."""
    xi = np.asarray(weights.xi)
    phi = np.asarray(weights.phi)
    return float(max(np.max(np.abs(v_r) / xi), np.max(np.abs(v_i) / phi)))


@dataclass(frozen=True)
class ThresholdReport:
    """Right-hand-side values of the gain inequalities.

    mu and eta minima depend only on the network and weights. The rho minima
    additionally subtract the chosen mu gain, so rho_bar_base/rho_tilde_base
    hold the gain-independent part and rho_*_min are filled only when a gain
    set was supplied.
    """

    mode: str
    beta: float
    mu_bar_min: np.ndarray
    mu_tilde_min: np.ndarray
    rho_bar_base: np.ndarray
    rho_tilde_base: np.ndarray
    eta_bar_min: np.ndarray
    eta_tilde_min: np.ndarray
    rho_bar_min: np.ndarray | None = None
    rho_tilde_min: np.ndarray | None = None

    def with_gains(self, gains: ControllerGains) -> "ThresholdReport":
        """Fill the rho minima (base - mu)^+ for a concrete gain set."""
        if abs(gains.beta - self.beta) > 1e-12:
            raise ValueError("gain beta does not match threshold beta")
        return ThresholdReport(
            mode=self.mode, beta=self.beta,
            mu_bar_min=self.mu_bar_min, mu_tilde_min=self.mu_tilde_min,
            rho_bar_base=self.rho_bar_base, rho_tilde_base=self.rho_tilde_base,
            eta_bar_min=self.eta_bar_min, eta_tilde_min=self.eta_tilde_min,
            rho_bar_min=np.maximum(self.rho_bar_base - np.asarray(gains.mu_bar), 0.0),
            rho_tilde_min=np.maximum(self.rho_tilde_base - np.asarray(gains.mu_tilde), 0.0),
        )


def _bound_matrices(net: NetworkSpec):
    lam_bar = [analytic_bounds(s).bar for s in net.f_specs]
    lam_tilde = [analytic_bounds(s).tilde for s in net.f_specs]
    gam_bar = [analytic_bounds(s).bar for s in net.g_specs]
    gam_tilde = [analytic_bounds(s).tilde for s in net.g_specs]
    return lam_bar, lam_tilde, gam_bar, gam_tilde


def _abs_rows(mat):
    # |hat(m_jk)| row vectors as a (n, n, 2) array
    return np.array([[(abs(m.re), abs(m.im)) for m in row] for row in mat])


def thresholds(
    net: NetworkSpec,
    weights: NormWeights,
    beta: float,
    mode: str = "theorem1",
    gains: ControllerGains | None = None,
) -> ThresholdReport:
    """Evaluate the gain inequality right-hand sides.

    theorem1 mode exploits the one-sided derivative sign of the delay-free
    activations on the diagonal terms; lipschitz mode uses plain absolute
    bounds for every term and is never below theorem1 mode.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie strictly inside (0, 1)")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if weights.n != net.n:
        raise ValueError("weights dimension does not match network")

    n = net.n
    xi = np.asarray(weights.xi)
    phi = np.asarray(weights.phi)
    lam_bar, lam_tilde, gam_bar, gam_tilde = _bound_matrices(net)
    abs_a = _abs_rows(net.A)
    abs_b = _abs_rows(net.B)
    p = 1.0 / (beta - 1.0)  # negative exponent
    q = 1.0 / (1.0 - beta)

    w = np.stack([xi, phi], axis=1)            # (n, 2)
    wq = np.stack([xi ** q, phi ** q], axis=1)  # (n, 2)

    mu_bar = np.empty(n)
    mu_tilde = np.empty(n)
    rho_bar = np.empty(n)
    rho_tilde = np.empty(n)
    eta_bar = np.empty(n)
    eta_tilde = np.empty(n)

    for j in range(n):
        a_jj = net.A[j][j]
        lam = lam_bar[j]
        b_sum_bar = sum(abs_b[j, k] @ gam_bar[k] @ w[k] for k in range(n))
        b_sum_tilde = sum(abs_b[j, k] @ gam_tilde[k] @ w[k] for k in range(n))
        eta_bar[j] = sum(abs_b[j, k] @ gam_bar[k] @ np.ones(2) for k in range(n)) \
            + 2.0 * abs(net.H[j].re)
        eta_tilde[j] = sum(abs_b[j, k] @ gam_tilde[k] @ np.ones(2) for k in range(n)) \
            + 2.0 * abs(net.H[j].im)

        if mode == "lipschitz":
            a_sum_bar = sum(abs_a[j, k] @ lam_bar[k] @ w[k] for k in range(n))
            a_sum_tilde = sum(abs_a[j, k] @ lam_tilde[k] @ w[k] for k in range(n))
            mu_bar[j] = -net.d[j] + (a_sum_bar + b_sum_bar) / xi[j]
            mu_tilde[j] = -net.d[j] + (a_sum_tilde + b_sum_tilde) / phi[j]
            rho_bar[j] = -net.d[j] + xi[j] ** p * sum(
                abs_a[j, k] @ lam_bar[k] @ wq[k] for k in range(n))
            rho_tilde[j] = -net.d[j] + phi[j] ** p * sum(
                abs_a[j, k] @ lam_tilde[k] @ wq[k] for k in range(n))
            continue

        # theorem1 mode: diagonal terms keep the derivative-sign refinement.
        off_bar = sum(abs_a[j, k] @ lam_bar[k] @ w[k] for k in range(n) if k != j)
        off_tilde = sum(abs_a[j, k] @ lam_tilde[k] @ w[k] for k in range(n) if k != j)
        off_bar_q = sum(abs_a[j, k] @ lam_bar[k] @ wq[k] for k in range(n) if k != j)
        off_tilde_q = sum(abs_a[j, k] @ lam_tilde[k] @ wq[k] for k in range(n) if k != j)

        diag_sign_bar = pos_part(a_jj.re) * lam[0, 0] + pos_part(-a_jj.im) * lam[1, 0]
        diag_sign_tilde = pos_part(a_jj.im) * lam[0, 1] + pos_part(a_jj.re) * lam[1, 1]
        diag_abs_ri = abs(a_jj.re) * lam[0, 1] + abs(a_jj.im) * lam[1, 1]
        diag_abs_rr = abs(a_jj.im) * lam[0, 0] + abs(a_jj.re) * lam[1, 0]

        mu_bar[j] = (-net.d[j] + diag_sign_bar + (phi[j] / xi[j]) * diag_abs_ri
                     + (off_bar + b_sum_bar) / xi[j])
        mu_tilde[j] = (-net.d[j] + (xi[j] / phi[j]) * diag_abs_rr + diag_sign_tilde
                       + (off_tilde + b_sum_tilde) / phi[j])
        rho_bar[j] = (-net.d[j] + diag_sign_bar
                      + (phi[j] ** -1 * xi[j]) ** p * diag_abs_ri
                      + xi[j] ** p * off_bar_q)
        rho_tilde[j] = (-net.d[j] + diag_sign_tilde
                        + (xi[j] ** -1 * phi[j]) ** p * diag_abs_rr
                        + phi[j] ** p * off_tilde_q)

    report = ThresholdReport(
        mode=mode, beta=beta,
        mu_bar_min=mu_bar, mu_tilde_min=mu_tilde,
        rho_bar_base=rho_bar, rho_tilde_base=rho_tilde,
        eta_bar_min=eta_bar, eta_tilde_min=eta_tilde,
    )
    return report.with_gains(gains) if gains is not None else report


@dataclass(frozen=True)
class GainCheck:
    """Admissibility verdict with per-inequality margins (gain minus its
    threshold; mu/rho require margin > 0 strictly, eta requires >= 0)."""

    admissible: bool
    margins: dict[str, np.ndarray]
    failures: tuple[str, ...]


def verify_gains(report: ThresholdReport, gains: ControllerGains) -> GainCheck:
    """Check all 6n inequalities for one gain set."""
    if len(gains.mu_bar) != len(report.mu_bar_min):
        raise ValueError("gain dimension does not match threshold report")
    filled = report.with_gains(gains)
    margins = {
        "mu_bar": np.asarray(gains.mu_bar) - filled.mu_bar_min,
        "mu_tilde": np.asarray(gains.mu_tilde) - filled.mu_tilde_min,
        "rho_bar": np.asarray(gains.rho_bar) - filled.rho_bar_min,
        "rho_tilde": np.asarray(gains.rho_tilde) - filled.rho_tilde_min,
        "eta_bar": np.asarray(gains.eta_bar) - filled.eta_bar_min,
        "eta_tilde": np.asarray(gains.eta_tilde) - filled.eta_tilde_min,
    }
    failures = []
    for name in ("mu_bar", "mu_tilde", "rho_bar", "rho_tilde"):
        for j, m in enumerate(margins[name]):
            if not m > STRICT_MARGIN:
                failures.append(f"{name}[{j}]")
    for name in ("eta_bar", "eta_tilde"):
        for j, m in enumerate(margins[name]):
            if not m >= -ETA_SLACK:
                failures.append(f"{name}[{j}]")
    return GainCheck(admissible=not failures, margins=margins,
                     failures=tuple(failures))


def epsilon_feasible(
    net: NetworkSpec,
    weights: NormWeights,
    gains: ControllerGains,
    epsilon: float,
) -> bool:
    """True iff both strict exponential-margin inequality families hold at
    this epsilon for every neuron (the delayed sums pick up e^{eps*tau})."""
    if epsilon <= 0:
        return False
    n = net.n
    xi = np.asarray(weights.xi)
    phi = np.asarray(weights.phi)
    lam_bar, lam_tilde, gam_bar, gam_tilde = _bound_matrices(net)
    abs_a = _abs_rows(net.A)
    abs_b = _abs_rows(net.B)
    w = np.stack([xi, phi], axis=1)
    boost = math.exp(epsilon * net.tau)
    for j in range(n):
        a_jj = net.A[j][j]
        lam = lam_bar[j]
        off_bar = sum(abs_a[j, k] @ lam_bar[k] @ w[k] for k in range(n) if k != j)
        off_tilde = sum(abs_a[j, k] @ lam_tilde[k] @ w[k] for k in range(n) if k != j)
        b_sum_bar = sum(abs_b[j, k] @ gam_bar[k] @ w[k] for k in range(n))
        b_sum_tilde = sum(abs_b[j, k] @ gam_tilde[k] @ w[k] for k in range(n))
        lhs_bar = ((epsilon - net.d[j] - gains.mu_bar[j])
                   + pos_part(a_jj.re) * lam[0, 0] + pos_part(-a_jj.im) * lam[1, 0]
                   + (phi[j] / xi[j]) * (abs(a_jj.re) * lam[0, 1] + abs(a_jj.im) * lam[1, 1])
                   + off_bar / xi[j] + boost * b_sum_bar / xi[j])
        lhs_tilde = ((epsilon - net.d[j] - gains.mu_tilde[j])
                     + (xi[j] / phi[j]) * (abs(a_jj.im) * lam[0, 0] + abs(a_jj.re) * lam[1, 0])
                     + pos_part(a_jj.im) * lam[0, 1] + pos_part(a_jj.re) * lam[1, 1]
                     + off_tilde / phi[j] + boost * b_sum_tilde / phi[j])
        if not (lhs_bar < 0.0 and lhs_tilde < 0.0):
            return False
    return True


@dataclass(frozen=True)
class EpsilonSearch:
    sup_epsilon: float
    epsilon: float  # sup scaled by the 0.999 strictness factor


def find_epsilon(
    net: NetworkSpec,
    weights: NormWeights,
    gains: ControllerGains,
    rel_tol: float = 1e-10,
) -> EpsilonSearch:
    """Largest feasible epsilon via bisection (the inequality left sides are
    increasing in epsilon, so feasibility is an interval (0, sup))."""
    if not epsilon_feasible(net, weights, gains, 1e-12):
        raise InfeasibleError("no positive epsilon satisfies the margin inequalities")
    lo, hi = 1e-12, 1.0
    while epsilon_feasible(net, weights, gains, hi):
        lo = hi
        hi *= 2.0
        if hi > 1e12:
            break
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if epsilon_feasible(net, weights, gains, mid):
            lo = mid
        else:
            hi = mid
    return EpsilonSearch(sup_epsilon=lo, epsilon=0.999 * lo)


@dataclass(frozen=True)
class RhoSearch:
    rho_ast: float
    rho_star: float
    rho: float
    bound_ast: np.ndarray   # per-neuron upper bounds, real-part family
    bound_star: np.ndarray  # imaginary-part family


def find_rho(
    net: NetworkSpec,
    weights: NormWeights,
    gains: ControllerGains,
) -> RhoSearch:
    """Per-neuron upper bounds for the two auxiliary decay rates, their
    0.999-scaled minima, and rho = min of the two families."""
    report = thresholds(net, weights, gains.beta, "theorem1", gains)
    xi = np.asarray(weights.xi)
    phi = np.asarray(weights.phi)
    bound_ast = (np.asarray(gains.rho_bar) - report.rho_bar_min) / xi
    bound_star = (np.asarray(gains.rho_tilde) - report.rho_tilde_min) / phi
    if np.any(bound_ast <= 0) or np.any(bound_star <= 0):
        raise InfeasibleError("a rho gain sits at or below its threshold")
    rho_ast = 0.999 * float(bound_ast.min())
    rho_star = 0.999 * float(bound_star.min())
    return RhoSearch(rho_ast=rho_ast, rho_star=rho_star,
                     rho=min(rho_ast, rho_star),
                     bound_ast=bound_ast, bound_star=bound_star)


def rho_feasible(
    net: NetworkSpec,
    weights: NormWeights,
    gains: ControllerGains,
    rho: float,
) -> bool:
    """Whether a user-supplied rho clears both bound families.

    Values exactly on the bound are accepted (up to rounding): the worked
    two-neuron example uses the boundary value itself.
    """
    if rho <= 0:
        return False
    search = find_rho(net, weights, gains)
    limit = min(float(search.bound_ast.min()), float(search.bound_star.min()))
    return rho <= limit + 1e-9


@dataclass(frozen=True)
class ConvergenceCertificate:
    """Everything the convergence accounting produces: the norm
    weights, the auxiliary constants, the initial windowed monitor value,
    and the certified times."""

    weights: NormWeights
    epsilon: float
    rho_ast: float
    rho_star: float
    rho: float
    m_e1_0: float
    t1_r: float
    t1_i: float
    t1: float
    t2: float


def initial_monitor(net: NetworkSpec, weights: NormWeights, epsilon: float) -> float:
    """Windowed monitor value at t = 0 over the constant initial history.

    With constant histories the sup of e^{eps*s}*norm over s in [-tau, 0]
    sits at s = 0; a coarse sample of the window guards the closed form.
    """
    e_r = np.array([net.phi_init[j].re + net.psi_init[j].re for j in range(net.n)])
    e_i = np.array([net.phi_init[j].im + net.psi_init[j].im for j in range(net.n)])
    norm0 = weighted_inf_norm(e_r, e_i, weights)
    if net.tau > 0:
        s = np.linspace(-net.tau, 0.0, 1001)
        sampled = float(np.max(np.exp(epsilon * s) * norm0))
        if sampled > norm0 + 1e-9 * max(1.0, norm0):
            raise AssertionError("windowed-sup self-check failed")
    return norm0


def certificate(
    net: NetworkSpec,
    weights: NormWeights,
    gains: ControllerGains,
    epsilon: float,
    rho: float,
) -> ConvergenceCertificate:
    """Assemble the certified times for given feasible epsilon and rho."""
    if epsilon <= 0 or rho <= 0:
        raise ValueError("epsilon and rho must be positive")
    m0 = initial_monitor(net, weights, epsilon)
    e_r = np.array([net.phi_init[j].re + net.psi_init[j].re for j in range(net.n)])
    e_i = np.array([net.phi_init[j].im + net.psi_init[j].im for j in range(net.n)])
    if np.max(np.abs(e_r)) <= 1.0 and np.max(np.abs(e_i)) <= 1.0:
        t1_r = t1_i = t1 = 0.0
    else:
        t1_r = math.log(max(weights.xi) * m0) / epsilon + net.tau
        t1_i = math.log(max(weights.phi) * m0) / epsilon + net.tau
        t1 = max(t1_r, t1_i)
    min_w = min(min(weights.xi), min(weights.phi))
    t2 = 1.0 / (min_w * rho * (1.0 - gains.beta)) + t1
    search = find_rho(net, weights, gains)
    return ConvergenceCertificate(
        weights=weights, epsilon=epsilon,
        rho_ast=search.rho_ast, rho_star=search.rho_star, rho=rho,
        m_e1_0=m0, t1_r=t1_r, t1_i=t1_i, t1=t1, t2=t2,
    )
