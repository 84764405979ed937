"""Fixed-step integration of the coupled master/slave pair with per-edge
time-varying delays, plus the windowed norm monitors.

The master and slave advance on one shared grid; every past step inside the
delay window is retained (no decimation) so delayed arguments come from
piecewise-linear interpolation with O(dt^2) error. Delay values for every
step and stage are precomputed; the hot loop is jitted when numba is
available and falls back to the same pure-Python code otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .controller import ControllerGains
from .criteria import NormWeights, weighted_inf_norm
from .model import NetworkSpec, eval_delay

try:  # pragma: no cover - exercised implicitly
    from numba import njit as _njit

    def _jit(fn):
        return _njit(cache=True)(fn)
except ImportError:  # pragma: no cover
    def _jit(fn):
        return fn

SCHEMES = ("euler", "rk4-lagged")


class DivergenceError(RuntimeError):
    """State became non-finite; .time holds the last finite grid time."""

    def __init__(self, time: float):
        super().__init__(f"state diverged (non-finite) at t = {time:.6g}")
        self.time = time


class HistoryWindowError(RuntimeError):
    """A delayed-argument lookup preceded the retained window (indicates a
    violated delay bound or an undersized buffer)."""


@dataclass(frozen=True)
class SimConfig:
    t_end: float
    dt: float = 1e-4
    scheme: str = "euler"
    settle_tolerance: float = 1e-2
    record_stride: int = 100
    dead_zone: float = 0.0

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")
        if self.scheme not in ("euler", "rk4", "rk4-lagged"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.settle_tolerance <= 0:
            raise ValueError("settle_tolerance must be positive")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")


@dataclass
class HistoryBuffer:
    """Uniformly spaced past samples starting at start_time, one row per
    grid point."""

    start_time: float
    dt: float
    samples: np.ndarray  # (m, ...) with m >= 2

    def interpolate(self, s: float) -> np.ndarray:
        """Piecewise-linear value at time s; exact at sample points."""
        m = self.samples.shape[0]
        g = (s - self.start_time) / self.dt
        if g < -1e-9 or g > m - 1 + 1e-9:
            raise HistoryWindowError(
                f"lookup at t = {s:.6g} outside retained window "
                f"[{self.start_time:.6g}, {self.start_time + (m - 1) * self.dt:.6g}]"
            )
        g = min(max(g, 0.0), float(m - 1))
        i0 = min(int(g), m - 2)
        frac = g - i0
        return (1.0 - frac) * self.samples[i0] + frac * self.samples[i0 + 1]


def interpolate(buf: HistoryBuffer, s: float) -> np.ndarray:
    return buf.interpolate(s)


@dataclass
class Trajectory:
    """Recorded run of one scenario. Recorded arrays are decimated by
    record_stride; full_* arrays keep every integration sample (history
    segment included) for window-sup monitors and diagnostics.

    State component layout everywhere: [x^R, x^I, y^R, y^I] per neuron.
    """

    times: np.ndarray            # recorded times, >= 0
    x: np.ndarray                # (r, n, 2) real/imag
    y: np.ndarray
    e: np.ndarray
    norm_e1: np.ndarray
    monitor_m: np.ndarray        # NaN when no epsilon was supplied
    norm_e2: np.ndarray          # NaN before phase two
    monitor_v: np.ndarray        # NaN before phase two or without rho
    settling_time: float | None
    chattering_amplitude: float | None
    tau: float
    dt: float
    full_times: np.ndarray       # starts at -pre*dt
    full_e: np.ndarray           # (m, n, 2)
    record_indices: np.ndarray   # indices into the full arrays


def _act_pair(kind, p_r, q_r, p_i, q_i, v_r, v_i):
    u_r = p_r * v_r + q_r * v_i
    u_i = p_i * v_r + q_i * v_i
    if kind == 0:
        return math.tanh(0.5 * u_r), math.tanh(0.5 * u_i)
    return (0.5 * (abs(u_r + 1.0) - abs(u_r - 1.0)),
            0.5 * (abs(u_i + 1.0) - abs(u_i - 1.0)))


def _deriv(hist, cap, pre, dt, n, t_stage, taus_jk,
           a_r, a_i, b_r, b_i, d, h_r, h_i,
           f_kind, f_mix, g_kind, g_mix,
           has_ctrl, mu_b, rho_b, eta_b, mu_t, rho_t, eta_t, beta, dead,
           st, out):
    # Non-delayed activations of both systems at the stage state.
    fx_r = np.empty(n); fx_i = np.empty(n)
    fy_r = np.empty(n); fy_i = np.empty(n)
    for k in range(n):
        vr, vi = _act_pair(f_kind[k], f_mix[k, 0], f_mix[k, 1], f_mix[k, 2],
                           f_mix[k, 3], st[k, 0], st[k, 1])
        fx_r[k] = vr; fx_i[k] = vi
        vr, vi = _act_pair(f_kind[k], f_mix[k, 0], f_mix[k, 1], f_mix[k, 2],
                           f_mix[k, 3], st[k, 2], st[k, 3])
        fy_r[k] = vr; fy_i[k] = vi

    for j in range(n):
        dx_r = -d[j] * st[j, 0] + h_r[j]
        dx_i = -d[j] * st[j, 1] + h_i[j]
        dy_r = -d[j] * st[j, 2] + h_r[j]
        dy_i = -d[j] * st[j, 3] + h_i[j]
        for k in range(n):
            dx_r += a_r[j, k] * fx_r[k] - a_i[j, k] * fx_i[k]
            dx_i += a_r[j, k] * fx_i[k] + a_i[j, k] * fx_r[k]
            dy_r += a_r[j, k] * fy_r[k] - a_i[j, k] * fy_i[k]
            dy_i += a_r[j, k] * fy_i[k] + a_i[j, k] * fy_r[k]

            # Delayed lookup for edge (j, k): neuron k at t_stage - tau_jk.
            s = t_stage - taus_jk[j, k]
            g = s / dt + pre
            if g < -1e-6:
                return 1
            if g < 0.0:
                g = 0.0
            i0 = int(g)
            if i0 > cap - 1:
                i0 = cap - 1
            frac = g - i0
            if frac > 1.0:
                frac = 1.0  # stage time past the newest sample: hold (lagged)
            w0 = 1.0 - frac
            dxr = w0 * hist[i0, k, 0] + frac * hist[i0 + 1, k, 0]
            dxi = w0 * hist[i0, k, 1] + frac * hist[i0 + 1, k, 1]
            dyr = w0 * hist[i0, k, 2] + frac * hist[i0 + 1, k, 2]
            dyi = w0 * hist[i0, k, 3] + frac * hist[i0 + 1, k, 3]

            gxr, gxi = _act_pair(g_kind[k], g_mix[k, 0], g_mix[k, 1],
                                 g_mix[k, 2], g_mix[k, 3], dxr, dxi)
            gyr, gyi = _act_pair(g_kind[k], g_mix[k, 0], g_mix[k, 1],
                                 g_mix[k, 2], g_mix[k, 3], dyr, dyi)
            dx_r += b_r[j, k] * gxr - b_i[j, k] * gxi
            dx_i += b_r[j, k] * gxi + b_i[j, k] * gxr
            dy_r += b_r[j, k] * gyr - b_i[j, k] * gyi
            dy_i += b_r[j, k] * gyi + b_i[j, k] * gyr

        if has_ctrl:
            e_r = st[j, 0] + st[j, 2]
            e_i = st[j, 1] + st[j, 3]
            if abs(e_r) > dead:
                sgn = 1.0 if e_r > 0.0 else -1.0
                dy_r -= sgn * (mu_b[j] * abs(e_r) + rho_b[j] * abs(e_r) ** beta + eta_b[j])
            if abs(e_i) > dead:
                sgn = 1.0 if e_i > 0.0 else -1.0
                dy_i -= sgn * (mu_t[j] * abs(e_i) + rho_t[j] * abs(e_i) ** beta + eta_t[j])

        out[j, 0] = dx_r
        out[j, 1] = dx_i
        out[j, 2] = dy_r
        out[j, 3] = dy_i
    return 0


def _run(hist, pre, nsteps, dt, n, scheme_code, taus,
         a_r, a_i, b_r, b_i, d, h_r, h_i,
         f_kind, f_mix, g_kind, g_mix,
         has_ctrl, mu_b, rho_b, eta_b, mu_t, rho_t, eta_t, beta, dead):
    k1 = np.empty((n, 4)); k2 = np.empty((n, 4))
    k3 = np.empty((n, 4)); k4 = np.empty((n, 4))
    tmp = np.empty((n, 4))
    for step in range(nsteps):
        base = pre + step
        t = step * dt
        st = hist[base]
        if scheme_code == 0:
            err = _deriv(hist, base, pre, dt, n, t, taus[step, 0],
                         a_r, a_i, b_r, b_i, d, h_r, h_i,
                         f_kind, f_mix, g_kind, g_mix,
                         has_ctrl, mu_b, rho_b, eta_b, mu_t, rho_t, eta_t,
                         beta, dead, st, k1)
            if err != 0:
                return 2, step
            for j in range(n):
                for c in range(4):
                    hist[base + 1, j, c] = st[j, c] + dt * k1[j, c]
        else:
            err = _deriv(hist, base, pre, dt, n, t, taus[step, 0],
                         a_r, a_i, b_r, b_i, d, h_r, h_i,
                         f_kind, f_mix, g_kind, g_mix,
                         has_ctrl, mu_b, rho_b, eta_b, mu_t, rho_t, eta_t,
                         beta, dead, st, k1)
            if err != 0:
                return 2, step
            for j in range(n):
                for c in range(4):
                    tmp[j, c] = st[j, c] + 0.5 * dt * k1[j, c]
            err = _deriv(hist, base, pre, dt, n, t + 0.5 * dt, taus[step, 1],
                         a_r, a_i, b_r, b_i, d, h_r, h_i,
                         f_kind, f_mix, g_kind, g_mix,
                         has_ctrl, mu_b, rho_b, eta_b, mu_t, rho_t, eta_t,
                         beta, dead, tmp, k2)
            if err != 0:
                return 2, step
            for j in range(n):
                for c in range(4):
                    tmp[j, c] = st[j, c] + 0.5 * dt * k2[j, c]
            err = _deriv(hist, base, pre, dt, n, t + 0.5 * dt, taus[step, 1],
                         a_r, a_i, b_r, b_i, d, h_r, h_i,
                         f_kind, f_mix, g_kind, g_mix,
                         has_ctrl, mu_b, rho_b, eta_b, mu_t, rho_t, eta_t,
                         beta, dead, tmp, k3)
            if err != 0:
                return 2, step
            for j in range(n):
                for c in range(4):
                    tmp[j, c] = st[j, c] + dt * k3[j, c]
            err = _deriv(hist, base, pre, dt, n, t + dt, taus[step, 2],
                         a_r, a_i, b_r, b_i, d, h_r, h_i,
                         f_kind, f_mix, g_kind, g_mix,
                         has_ctrl, mu_b, rho_b, eta_b, mu_t, rho_t, eta_t,
                         beta, dead, tmp, k4)
            if err != 0:
                return 2, step
            for j in range(n):
                for c in range(4):
                    hist[base + 1, j, c] = st[j, c] + dt / 6.0 * (
                        k1[j, c] + 2.0 * k2[j, c] + 2.0 * k3[j, c] + k4[j, c])
        for j in range(n):
            for c in range(4):
                if not math.isfinite(hist[base + 1, j, c]):
                    return 1, step
    return 0, nsteps


_act_pair = _jit(_act_pair)
_deriv = _jit(_deriv)
_run = _jit(_run)

_KIND_CODE = {"sigmoid-pair": 0, "saturating-linear": 1}


def _precompute_delays(net: NetworkSpec, nsteps: int, dt: float,
                       offsets: tuple[float, ...]) -> np.ndarray:
    """Delay values per step, stage offset, and edge, grid-checked against
    the declared bounds."""
    n = net.n
    base_t = np.arange(nsteps) * dt
    taus = np.empty((nsteps, len(offsets), n, n))
    for si, off in enumerate(offsets):
        ts = base_t + off * dt
        for j in range(n):
            for k in range(n):
                spec = net.delays[j][k]
                vals = np.asarray(eval_delay(spec, ts))
                if np.any(vals < -1e-9) or np.any(vals > spec.bound + 1e-9):
                    raise ValueError(
                        f"delay ({j},{k}) leaves [0, {spec.bound}] on the horizon")
                taus[:, si, j, k] = np.clip(vals, 0.0, spec.bound)
    return taus


def simulate(
    net: NetworkSpec,
    gains: ControllerGains | None,
    cfg: SimConfig,
    weights: NormWeights | None = None,
    epsilon: float | None = None,
    rho: float | None = None,
) -> Trajectory:
    """Advance master and slave together and record states plus monitors.

    gains=None runs the uncontrolled pair. weights default to all ones (the
    plain infinity norm); epsilon/rho, when given, fill the windowed monitor
    columns.
    """
    n = net.n
    if net.tau > 0 and cfg.dt > net.tau / 10 + 1e-15:
        raise ValueError("dt must be <= tau/10 for delayed networks")
    if gains is not None and gains.n != n:
        raise ValueError("gains dimension does not match network")
    if weights is None:
        weights = NormWeights(xi=(1.0,) * n, phi=(1.0,) * n)

    dt = cfg.dt
    pre = max(1, int(math.ceil(net.tau / dt - 1e-9))) if net.tau > 0 else 1
    nsteps = int(math.ceil(cfg.t_end / dt - 1e-9))
    scheme_code = 0 if cfg.scheme == "euler" else 1
    offsets = (0.0,) if scheme_code == 0 else (0.0, 0.5, 1.0)

    hist = np.empty((pre + nsteps + 1, n, 4))
    for j in range(n):
        hist[: pre + 1, j, 0] = net.phi_init[j].re
        hist[: pre + 1, j, 1] = net.phi_init[j].im
        hist[: pre + 1, j, 2] = net.psi_init[j].re
        hist[: pre + 1, j, 3] = net.psi_init[j].im

    taus = _precompute_delays(net, nsteps, dt, offsets)
    a_r = np.array([[m.re for m in row] for row in net.A])
    a_i = np.array([[m.im for m in row] for row in net.A])
    b_r = np.array([[m.re for m in row] for row in net.B])
    b_i = np.array([[m.im for m in row] for row in net.B])
    d = np.asarray(net.d, dtype=float)
    h_r = np.array([h.re for h in net.H])
    h_i = np.array([h.im for h in net.H])
    f_kind = np.array([_KIND_CODE[s.kind] for s in net.f_specs], dtype=np.int64)
    f_mix = np.array([s.mix for s in net.f_specs], dtype=float)
    g_kind = np.array([_KIND_CODE[s.kind] for s in net.g_specs], dtype=np.int64)
    g_mix = np.array([s.mix for s in net.g_specs], dtype=float)

    if gains is not None:
        ctrl = (True, np.asarray(gains.mu_bar), np.asarray(gains.rho_bar),
                np.asarray(gains.eta_bar), np.asarray(gains.mu_tilde),
                np.asarray(gains.rho_tilde), np.asarray(gains.eta_tilde),
                gains.beta)
    else:
        z = np.zeros(n)
        ctrl = (False, z, z, z, z, z, z, 0.5)

    status, fail_step = _run(
        hist, pre, nsteps, dt, n, scheme_code, taus,
        a_r, a_i, b_r, b_i, d, h_r, h_i,
        f_kind, f_mix, g_kind, g_mix,
        ctrl[0], ctrl[1], ctrl[2], ctrl[3], ctrl[4], ctrl[5], ctrl[6], ctrl[7],
        cfg.dead_zone,
    )
    if status == 1:
        raise DivergenceError(fail_step * dt)
    if status == 2:
        raise HistoryWindowError(
            f"delayed lookup before the retained window near t = {fail_step * dt:.6g}")

    full_times = (np.arange(hist.shape[0]) - pre) * dt
    full_e = hist[:, :, 0:2] + hist[:, :, 2:4]

    rec = np.arange(pre, pre + nsteps + 1, cfg.record_stride)
    if rec[-1] != pre + nsteps:
        rec = np.append(rec, pre + nsteps)

    xi = np.asarray(weights.xi)
    phi = np.asarray(weights.phi)
    norm1_full = np.maximum(
        np.max(np.abs(full_e[:, :, 0]) / xi, axis=1),
        np.max(np.abs(full_e[:, :, 1]) / phi, axis=1),
    )
    amax_full = np.max(np.abs(full_e), axis=(1, 2))

    traj = Trajectory(
        times=full_times[rec],
        x=hist[rec, :, 0:2].copy(),
        y=hist[rec, :, 2:4].copy(),
        e=full_e[rec].copy(),
        norm_e1=norm1_full[rec],
        monitor_m=np.full(rec.shape, np.nan),
        norm_e2=np.full(rec.shape, np.nan),
        monitor_v=np.full(rec.shape, np.nan),
        settling_time=None,
        chattering_amplitude=None,
        tau=net.tau,
        dt=dt,
        full_times=full_times,
        full_e=full_e,
        record_indices=rec,
    )

    # Settling: first recorded time whose components stay below tolerance
    # through t_end.
    rec_amax = amax_full[rec]
    below = rec_amax < cfg.settle_tolerance
    if below[-1]:
        idx = len(below) - 1
        while idx > 0 and below[idx - 1]:
            idx -= 1
        traj.settling_time = float(traj.times[idx])
    crossings = np.flatnonzero(below)
    if crossings.size:
        after = rec_amax[crossings[0]:]
        traj.chattering_amplitude = float(after.max())

    if epsilon is not None:
        traj.monitor_m = monitor_m(traj, epsilon, weights)
    beta = gains.beta if gains is not None else None
    if beta is not None:
        traj.norm_e2 = _phase2_series(traj, weights, beta, amax_full)[0]
        if rho is not None:
            traj.monitor_v = monitor_v(traj, weights, beta, rho)
    return traj


def _window_max(series: np.ndarray, rec: np.ndarray, win: int) -> np.ndarray:
    out = np.empty(rec.shape)
    for i, idx in enumerate(rec):
        lo = max(0, idx - win)
        out[i] = series[lo: idx + 1].max()
    return out


def monitor_m(traj: Trajectory, epsilon: float, weights: NormWeights) -> np.ndarray:
    """Sliding-window max of e^{eps*s} * weighted error norm over [t-tau, t]
    at every recorded t, taken over all retained integration samples."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    xi = np.asarray(weights.xi)
    phi = np.asarray(weights.phi)
    norm_full = np.maximum(
        np.max(np.abs(traj.full_e[:, :, 0]) / xi, axis=1),
        np.max(np.abs(traj.full_e[:, :, 1]) / phi, axis=1),
    )
    series = np.exp(epsilon * traj.full_times) * norm_full
    win = int(round(traj.tau / traj.dt))
    return _window_max(series, traj.record_indices, win)


def _phase2_series(traj: Trajectory, weights: NormWeights, beta: float,
                   amax_full: np.ndarray | None = None):
    """Fractional-power error norm at recorded points, NaN before the first
    recorded time whose whole trailing window has all components <= 1."""
    if amax_full is None:
        amax_full = np.max(np.abs(traj.full_e), axis=(1, 2))
    xi = np.asarray(weights.xi)
    phi = np.asarray(weights.phi)
    p = 1.0 - beta
    norm2_full = np.maximum(
        np.max(np.abs(traj.full_e[:, :, 0]) ** p / xi, axis=1),
        np.max(np.abs(traj.full_e[:, :, 1]) ** p / phi, axis=1),
    ) / p
    win = int(round(traj.tau / traj.dt))
    win_amax = _window_max(amax_full, traj.record_indices, win)
    active = win_amax <= 1.0 + 1e-12
    # once active, stay active (phase two is terminal)
    if np.any(active):
        active[np.argmax(active):] = True
    out = np.where(active, norm2_full[traj.record_indices], np.nan)
    return out, norm2_full, active


def monitor_v(traj: Trajectory, weights: NormWeights, beta: float,
              rho: float) -> np.ndarray:
    """Sliding-window max of (fractional-power norm + rho*s) over [t-tau, t]
    at recorded points, NaN before phase two."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    _, norm2_full, active = _phase2_series(traj, weights, beta)
    series = norm2_full + rho * traj.full_times
    win = int(round(traj.tau / traj.dt))
    vals = _window_max(series, traj.record_indices, win)
    return np.where(active, vals, np.nan)
