"""Discontinuous finite-time control law acting on the instantaneous sum
error only: u = -sign(e) * (mu*|e| + rho*|e|^beta + eta), applied separately
to the real and imaginary error components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .split_complex import SplitComplex


@dataclass(frozen=True)
class ControllerGains:
    """The six per-neuron gain vectors (real-part and imaginary-part
    families) and the fractional exponent beta."""

    mu_bar: tuple[float, ...]
    rho_bar: tuple[float, ...]
    eta_bar: tuple[float, ...]
    mu_tilde: tuple[float, ...]
    rho_tilde: tuple[float, ...]
    eta_tilde: tuple[float, ...]
    beta: float

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie strictly inside (0, 1)")
        n = len(self.mu_bar)
        for name in ("rho_bar", "eta_bar", "mu_tilde", "rho_tilde", "eta_tilde"):
            if len(getattr(self, name)) != n:
                raise ValueError("gain vectors must share one length")
        for name in ("mu_bar", "rho_bar", "eta_bar", "mu_tilde", "rho_tilde", "eta_tilde"):
            if any(g < 0 for g in getattr(self, name)):
                raise ValueError(f"{name} entries must be >= 0")

    @property
    def n(self) -> int:
        return len(self.mu_bar)

    def scaled(self, factor: float) -> "ControllerGains":
        """Multiply the mu and rho families by a common factor; eta and beta
        unchanged."""
        s = lambda v: tuple(factor * g for g in v)
        return ControllerGains(
            mu_bar=s(self.mu_bar), rho_bar=s(self.rho_bar), eta_bar=self.eta_bar,
            mu_tilde=s(self.mu_tilde), rho_tilde=s(self.rho_tilde),
            eta_tilde=self.eta_tilde, beta=self.beta,
        )


def _sign(v: float, dead_zone: float) -> float:
    # sign(0) := 0 so the anti-synchronized manifold is an equilibrium and the
    # constant eta term injects no energy at the target.
    if abs(v) <= dead_zone:
        return 0.0
    return 1.0 if v > 0.0 else -1.0


def _component(e: float, mu: float, rho: float, eta: float, beta: float,
               dead_zone: float) -> float:
    s = _sign(e, dead_zone)
    if s == 0.0:
        return 0.0
    a = abs(e)
    return -s * (mu * a + rho * a ** beta + eta)


def control(
    gains: ControllerGains,
    e: list[SplitComplex],
    dead_zone: float = 0.0,
) -> list[SplitComplex]:
    """Control values for one error vector.

    dead_zone widens the sign(0)=0 set to |e| <= dead_zone for chattering
    studies; it defaults to 0 (the discontinuous law of the guarantee).
    """
    if len(e) != gains.n:
        raise ValueError("error vector length does not match gains")
    out = []
    for j in range(gains.n):
        u_r = _component(e[j].re, gains.mu_bar[j], gains.rho_bar[j],
                         gains.eta_bar[j], gains.beta, dead_zone)
        u_i = _component(e[j].im, gains.mu_tilde[j], gains.rho_tilde[j],
                         gains.eta_tilde[j], gains.beta, dead_zone)
        out.append(SplitComplex(u_r, u_i))
    return out


def control_arrays(
    gains: ControllerGains,
    e_r: np.ndarray,
    e_i: np.ndarray,
    dead_zone: float = 0.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized form of `control` on real/imaginary component arrays."""
    def fam(e, mu, rho, eta):
        mu = np.asarray(mu)
        rho = np.asarray(rho)
        eta = np.asarray(eta)
        a = np.abs(e)
        s = np.where(a <= dead_zone, 0.0, np.sign(e))
        return -s * (mu * a + rho * a ** gains.beta + eta)

    return (
        fam(e_r, gains.mu_bar, gains.rho_bar, gains.eta_bar),
        fam(e_i, gains.mu_tilde, gains.rho_tilde, gains.eta_tilde),
    )
