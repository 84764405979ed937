"""Master/slave network description: parameters, activation catalog with
derivative bound matrices, per-edge delay catalog, and the decomposed
real-pair right-hand sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .split_complex import SplitComplex, product_split

ACTIVATION_KINDS = ("sigmoid-pair", "saturating-linear")
DELAY_KINDS = ("constant", "logistic-shifted", "reciprocal-abs-cos", "reciprocal-abs-sin")


@dataclass(frozen=True)
class ActivationSpec:
    """One catalog activation: kind plus the linear mixing of the two inner
    arguments u_R = p_R*x^R + q_R*x^I and u_I = p_I*x^R + q_I*x^I.

    The catalog is closed (two kinds) so every member ships tight analytic
    derivative bound matrices; user-supplied activation code would break the
    gain criteria, which are meaningless without sound bounds.
    """

    kind: str
    mix: tuple[float, float, float, float]  # (p_R, q_R, p_I, q_I)

    def __post_init__(self):
        if self.kind not in ACTIVATION_KINDS:
            raise ValueError(f"unknown activation kind {self.kind!r}")
        if len(self.mix) != 4:
            raise ValueError("mix must have four coefficients")


@dataclass(frozen=True)
class ActivationBounds:
    """Derivative bound matrices for one activation: the base 2x2 matrix
    (rows: output R/I component, columns: input R/I argument) and its
    row-swapped companion."""

    bar: np.ndarray
    tilde: np.ndarray


def _scalar_sigmoid(u):
    # (1 - e^{-u}) / (1 + e^{-u}), overflow-safe form
    return np.tanh(0.5 * np.asarray(u, dtype=float))


def _scalar_sat(u):
    u = np.asarray(u, dtype=float)
    return 0.5 * (np.abs(u + 1.0) - np.abs(u - 1.0))


def eval_activation(spec: ActivationSpec, x: SplitComplex) -> SplitComplex:
    """Evaluate the activation at a split state."""
    p_r, q_r, p_i, q_i = spec.mix
    u_r = p_r * x.re + q_r * x.im
    u_i = p_i * x.re + q_i * x.im
    if spec.kind == "sigmoid-pair":
        return SplitComplex(float(_scalar_sigmoid(u_r)), float(_scalar_sigmoid(u_i)))
    return SplitComplex(float(_scalar_sat(u_r)), float(_scalar_sat(u_i)))


def analytic_bounds(spec: ActivationSpec) -> ActivationBounds:
    """Tight derivative bound matrices.

    The sigmoid has maximal slope 1/2 at the origin, the saturating-linear
    piece has slope 1 inside [-1, 1]; each partial scales with the absolute
    mixing coefficient.
    """
    p_r, q_r, p_i, q_i = (abs(c) for c in spec.mix)
    if spec.kind == "sigmoid-pair":
        base = 0.5 * np.array([[p_r, q_r], [p_i, q_i]])
    elif spec.kind == "saturating-linear":
        base = np.array([[p_r, q_r], [p_i, q_i]], dtype=float)
    else:  # pragma: no cover - blocked by ActivationSpec validation
        raise ValueError(f"unknown activation kind {spec.kind!r}")
    tilde = base[[1, 0], :].copy()
    return ActivationBounds(bar=base, tilde=tilde)


def grid_partials(
    spec: ActivationSpec, grid_half_width: float, grid_points: int
) -> np.ndarray:
    """Central finite differences of both output components w.r.t. both
    arguments over a uniform grid on [-w, w]^2.

    Returns an array of shape (2, 2, m, m): [output R/I, input R/I, grid].
    """
    if grid_points < 3:
        raise ValueError("grid_points must be >= 3")
    w = float(grid_half_width)
    g = np.linspace(-w, w, grid_points)
    h = 1e-5
    xr, xi = np.meshgrid(g, g, indexing="ij")
    p_r, q_r, p_i, q_i = spec.mix
    f = _scalar_sigmoid if spec.kind == "sigmoid-pair" else _scalar_sat

    out = np.empty((2, 2, grid_points, grid_points))
    for comp, (p, q) in enumerate([(p_r, q_r), (p_i, q_i)]):
        u = p * xr + q * xi
        out[comp, 0] = (f(u + p * h) - f(u - p * h)) / (2.0 * h)
        out[comp, 1] = (f(u + q * h) - f(u - q * h)) / (2.0 * h)
    return out


def estimate_bounds(
    spec: ActivationSpec, grid_half_width: float, grid_points: int
) -> ActivationBounds:
    """Numerical oracle for the analytic bound matrices: maxima of
    |finite-difference partials| over the grid."""
    partials = grid_partials(spec, grid_half_width, grid_points)
    base = np.abs(partials).max(axis=(2, 3))
    return ActivationBounds(bar=base, tilde=base[[1, 0], :].copy())


@dataclass(frozen=True)
class DelaySpec:
    """One catalog delay function with its declared bound."""

    kind: str
    bound: float
    value: float = 0.0  # constant kind
    shift: float = 0.0  # logistic-shifted kind
    omega: float = 0.0  # reciprocal-abs-* kinds

    def __post_init__(self):
        if self.kind not in DELAY_KINDS:
            raise ValueError(f"unknown delay kind {self.kind!r}")
        if self.bound < 0:
            raise ValueError("delay bound must be >= 0")


def eval_delay(spec: DelaySpec, t):
    """Delay value at time t (scalar or array), always within [0, bound].

    The logistic form is rearranged as (1 - c*e^{-t}) / (1 + e^{-t}) so it
    stays finite for large t (e^t overflows doubles near t = 709).
    """
    t = np.asarray(t, dtype=float)
    if spec.kind == "constant":
        out = np.full_like(t, spec.value)
    elif spec.kind == "logistic-shifted":
        en = np.exp(-t)
        out = (1.0 - spec.shift * en) / (1.0 + en)
    elif spec.kind == "reciprocal-abs-cos":
        out = 1.0 / (1.0 + np.abs(np.cos(spec.omega * t)))
    else:
        out = 1.0 / (1.0 + np.abs(np.sin(spec.omega * t)))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class NetworkSpec:
    """Full description of one network (shared by master and slave):
    self-feedback, connection matrices, inputs, activations, delays, and the
    constant initial histories of both systems on [-tau, 0]."""

    n: int
    d: tuple[float, ...]
    A: tuple[tuple[SplitComplex, ...], ...]
    B: tuple[tuple[SplitComplex, ...], ...]
    H: tuple[SplitComplex, ...]
    f_specs: tuple[ActivationSpec, ...]
    g_specs: tuple[ActivationSpec, ...]
    delays: tuple[tuple[DelaySpec, ...], ...]
    tau: float
    phi_init: tuple[SplitComplex, ...]
    psi_init: tuple[SplitComplex, ...]

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise ValueError("n must be positive")
        if len(self.d) != n or any(dj <= 0 for dj in self.d):
            raise ValueError("d must have n strictly positive entries")
        for name, mat in (("A", self.A), ("B", self.B), ("delays", self.delays)):
            if len(mat) != n or any(len(row) != n for row in mat):
                raise ValueError(f"{name} must be {n}x{n}")
        for name, vec in (
            ("H", self.H),
            ("f_specs", self.f_specs),
            ("g_specs", self.g_specs),
            ("phi_init", self.phi_init),
            ("psi_init", self.psi_init),
        ):
            if len(vec) != n:
                raise ValueError(f"{name} must have length {n}")
        if self.tau < 0:
            raise ValueError("tau must be >= 0")
        for row in self.delays:
            for spec in row:
                if spec.bound > self.tau + 1e-12:
                    raise ValueError("tau must dominate every per-edge delay bound")


def master_rhs(
    net: NetworkSpec,
    state: list[SplitComplex],
    delayed: list[list[SplitComplex]],
) -> list[SplitComplex]:
    """Decomposed derivative of the uncontrolled system.

    `delayed[j][k]` is the state of neuron k evaluated at t - tau_jk(t).
    Real parts flow through the M_R bilinear forms, imaginary through M_I;
    product_split carries both at once.
    """
    f_now = [eval_activation(net.f_specs[k], state[k]) for k in range(net.n)]
    out = []
    for j in range(net.n):
        acc = SplitComplex(net.H[j].re - net.d[j] * state[j].re,
                           net.H[j].im - net.d[j] * state[j].im)
        for k in range(net.n):
            acc = acc + product_split(net.A[j][k], f_now[k])
            gd = eval_activation(net.g_specs[k], delayed[j][k])
            acc = acc + product_split(net.B[j][k], gd)
        out.append(acc)
    return out


def slave_rhs(
    net: NetworkSpec,
    state: list[SplitComplex],
    delayed: list[list[SplitComplex]],
    u: list[SplitComplex],
) -> list[SplitComplex]:
    """Controlled system derivative: uncontrolled form plus the control input."""
    base = master_rhs(net, state, delayed)
    return [base[j] + u[j] for j in range(net.n)]


def error_rhs(
    net: NetworkSpec,
    x_state: list[SplitComplex],
    y_state: list[SplitComplex],
    x_delayed: list[list[SplitComplex]],
    y_delayed: list[list[SplitComplex]],
    u: list[SplitComplex],
) -> list[SplitComplex]:
    """Derivative of the sum error e = x + y, written directly in its own
    decomposed form (must agree with master_rhs(x) + slave_rhs(y, u))."""
    fx = [eval_activation(net.f_specs[k], x_state[k]) for k in range(net.n)]
    fy = [eval_activation(net.f_specs[k], y_state[k]) for k in range(net.n)]
    out = []
    for j in range(net.n):
        e_j = x_state[j] + y_state[j]
        acc = SplitComplex(
            2.0 * net.H[j].re - net.d[j] * e_j.re + u[j].re,
            2.0 * net.H[j].im - net.d[j] * e_j.im + u[j].im,
        )
        for k in range(net.n):
            acc = acc + product_split(net.A[j][k], fx[k] + fy[k])
            gx = eval_activation(net.g_specs[k], x_delayed[j][k])
            gy = eval_activation(net.g_specs[k], y_delayed[j][k])
            acc = acc + product_split(net.B[j][k], gx + gy)
        out.append(acc)
    return out
