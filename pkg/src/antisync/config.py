"""Scenario files: TOML ingestion with field-identified diagnostics, and a
round-trip serializer for the same schema.

Complex entries are two-element arrays [re, im]; activation and delay kinds
are selected by name with their parameters inline. A scenario may carry a
[reference] table of externally published threshold/certificate values; the
verify report prints them next to the computed ones with match markers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .controller import ControllerGains
from .criteria import NormWeights
from .dde_sim import SimConfig
from .model import ActivationSpec, DelaySpec, NetworkSpec
from .split_complex import SplitComplex


class ConfigError(ValueError):
    """Scenario file problem with a stable diagnostic code."""

    def __init__(self, code: str, message: str):
        super().__init__(f"[{code}] {message}")
        self.code = code


@dataclass(frozen=True)
class Scenario:
    name: str
    mode: str
    network: NetworkSpec
    weights: NormWeights
    gains: ControllerGains | None
    sim: SimConfig
    reference: dict | None = None


def _get(table: dict, key: str, where: str):
    if key not in table:
        raise ConfigError("missing-field", f"{where}.{key} is required")
    return table[key]


def _floats(value, key: str, length: int | None = None) -> tuple[float, ...]:
    if not isinstance(value, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        raise ConfigError("bad-type", f"{key} must be an array of numbers")
    out = tuple(float(v) for v in value)
    if length is not None and len(out) != length:
        raise ConfigError("dimension-mismatch",
                          f"{key} must have {length} entries, got {len(out)}")
    return out


def _split(value, key: str) -> SplitComplex:
    pair = _floats(value, key, 2)
    try:
        return SplitComplex(pair[0], pair[1])
    except ValueError as exc:
        raise ConfigError("bad-value", f"{key}: {exc}") from exc


def _split_vector(value, key: str, n: int) -> tuple[SplitComplex, ...]:
    if not isinstance(value, list) or len(value) != n:
        raise ConfigError("dimension-mismatch", f"{key} must have {n} entries")
    return tuple(_split(v, f"{key}[{i}]") for i, v in enumerate(value))


def _split_matrix(value, key: str, n: int):
    if not isinstance(value, list) or len(value) != n:
        raise ConfigError("dimension-mismatch", f"{key} must have {n} rows")
    return tuple(_split_vector(row, f"{key}[{i}]", n) for i, row in enumerate(value))


def _activation(entry: dict, key: str) -> ActivationSpec:
    kind = _get(entry, "kind", key)
    mix = _floats(_get(entry, "mix", key), f"{key}.mix", 4)
    try:
        return ActivationSpec(kind=kind, mix=mix)
    except ValueError as exc:
        raise ConfigError("bad-kind", f"{key}: {exc}") from exc


def _delay(entry: dict, key: str) -> DelaySpec:
    kind = _get(entry, "kind", key)
    try:
        return DelaySpec(
            kind=kind,
            bound=float(_get(entry, "bound", key)),
            value=float(entry.get("value", 0.0)),
            shift=float(entry.get("shift", 0.0)),
            omega=float(entry.get("omega", 0.0)),
        )
    except ValueError as exc:
        raise ConfigError("bad-kind", f"{key}: {exc}") from exc


def _network(table: dict) -> NetworkSpec:
    n = _get(table, "n", "network")
    if not isinstance(n, int) or n < 1:
        raise ConfigError("bad-value", "network.n must be a positive integer")
    f_entries = _get(table, "f", "network")
    g_entries = _get(table, "g", "network")
    if len(f_entries) != n or len(g_entries) != n:
        raise ConfigError("dimension-mismatch",
                          "network.f and network.g must each list n activations")
    delays_flat = _get(table, "delays", "network")
    if len(delays_flat) != n * n:
        raise ConfigError("dimension-mismatch",
                          f"network.delays must list n*n = {n * n} entries row-major")
    delays = tuple(
        tuple(_delay(delays_flat[j * n + k], f"network.delays[{j * n + k}]")
              for k in range(n))
        for j in range(n)
    )
    try:
        return NetworkSpec(
            n=n,
            d=_floats(_get(table, "d", "network"), "network.d", n),
            A=_split_matrix(_get(table, "A", "network"), "network.A", n),
            B=_split_matrix(_get(table, "B", "network"), "network.B", n),
            H=_split_vector(_get(table, "H", "network"), "network.H", n),
            f_specs=tuple(_activation(e, f"network.f[{i}]") for i, e in enumerate(f_entries)),
            g_specs=tuple(_activation(e, f"network.g[{i}]") for i, e in enumerate(g_entries)),
            delays=delays,
            tau=float(_get(table, "tau", "network")),
            phi_init=_split_vector(_get(table, "phi_init", "network"), "network.phi_init", n),
            psi_init=_split_vector(_get(table, "psi_init", "network"), "network.psi_init", n),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("bad-value", f"network: {exc}") from exc


def _weights(table: dict, n: int) -> NormWeights:
    xi = _floats(_get(table, "xi", "weights"), "weights.xi", n)
    phi = _floats(_get(table, "phi", "weights"), "weights.phi", n)
    try:
        return NormWeights(xi=xi, phi=phi)
    except ValueError as exc:
        raise ConfigError("weight-positivity", f"weights: {exc}") from exc


def _gains(table: dict, n: int) -> ControllerGains:
    beta = float(_get(table, "beta", "gains"))
    if not 0.0 < beta < 1.0:
        raise ConfigError("exponent-range",
                          f"gains.beta must lie in (0, 1), got {beta}")
    try:
        return ControllerGains(
            mu_bar=_floats(_get(table, "mu_bar", "gains"), "gains.mu_bar", n),
            rho_bar=_floats(_get(table, "rho_bar", "gains"), "gains.rho_bar", n),
            eta_bar=_floats(_get(table, "eta_bar", "gains"), "gains.eta_bar", n),
            mu_tilde=_floats(_get(table, "mu_tilde", "gains"), "gains.mu_tilde", n),
            rho_tilde=_floats(_get(table, "rho_tilde", "gains"), "gains.rho_tilde", n),
            eta_tilde=_floats(_get(table, "eta_tilde", "gains"), "gains.eta_tilde", n),
            beta=beta,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("bad-value", f"gains: {exc}") from exc


def _sim(table: dict) -> SimConfig:
    try:
        return SimConfig(
            t_end=float(_get(table, "t_end", "sim")),
            dt=float(table.get("dt", 1e-4)),
            scheme=str(table.get("scheme", "euler")),
            settle_tolerance=float(table.get("settle_tolerance", 1e-2)),
            record_stride=int(table.get("record_stride", 100)),
            dead_zone=float(table.get("dead_zone", 0.0)),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("bad-value", f"sim: {exc}") from exc


def load_scenario(path) -> Scenario:
    """Parse and fully validate a scenario file."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError("missing-file", str(exc)) from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("parse-error", f"{path}: {exc}") from exc
    return scenario_from_dict(raw)


def scenario_from_dict(raw: dict) -> Scenario:
    mode = raw.get("mode", "theorem1")
    if mode not in ("theorem1", "lipschitz"):
        raise ConfigError("bad-value", f"mode must be theorem1 or lipschitz, got {mode!r}")
    net = _network(_get(raw, "network", "scenario"))
    weights = _weights(_get(raw, "weights", "scenario"), net.n)
    gains = _gains(raw["gains"], net.n) if "gains" in raw else None
    sim = _sim(_get(raw, "sim", "scenario"))
    return Scenario(
        name=str(raw.get("name", "unnamed")),
        mode=mode,
        network=net,
        weights=weights,
        gains=gains,
        sim=sim,
        reference=raw.get("reference"),
    )


# --- serializer ------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if value != value or math.isinf(value):
            raise ValueError("cannot serialize non-finite value")
        return repr(value)
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k} = {_fmt(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value)!r}")


def scenario_to_dict(sc: Scenario) -> dict:
    def pair(z: SplitComplex):
        return [z.re, z.im]

    def act(a: ActivationSpec):
        return {"kind": a.kind, "mix": list(a.mix)}

    def delay(dl: DelaySpec):
        out = {"kind": dl.kind, "bound": dl.bound}
        if dl.kind == "constant":
            out["value"] = dl.value
        elif dl.kind == "logistic-shifted":
            out["shift"] = dl.shift
        else:
            out["omega"] = dl.omega
        return out

    net = sc.network
    raw = {
        "name": sc.name,
        "mode": sc.mode,
        "network": {
            "n": net.n,
            "d": list(net.d),
            "tau": net.tau,
            "A": [[pair(z) for z in row] for row in net.A],
            "B": [[pair(z) for z in row] for row in net.B],
            "H": [pair(z) for z in net.H],
            "phi_init": [pair(z) for z in net.phi_init],
            "psi_init": [pair(z) for z in net.psi_init],
            "f": [act(a) for a in net.f_specs],
            "g": [act(a) for a in net.g_specs],
            "delays": [delay(net.delays[j][k]) for j in range(net.n) for k in range(net.n)],
        },
        "weights": {"xi": list(sc.weights.xi), "phi": list(sc.weights.phi)},
        "sim": {
            "t_end": sc.sim.t_end,
            "dt": sc.sim.dt,
            "scheme": sc.sim.scheme,
            "settle_tolerance": sc.sim.settle_tolerance,
            "record_stride": sc.sim.record_stride,
            "dead_zone": sc.sim.dead_zone,
        },
    }
    if sc.gains is not None:
        g = sc.gains
        raw["gains"] = {
            "beta": g.beta,
            "mu_bar": list(g.mu_bar), "rho_bar": list(g.rho_bar),
            "eta_bar": list(g.eta_bar), "mu_tilde": list(g.mu_tilde),
            "rho_tilde": list(g.rho_tilde), "eta_tilde": list(g.eta_tilde),
        }
    if sc.reference is not None:
        raw["reference"] = sc.reference
    return raw


def dump_scenario(sc: Scenario) -> str:
    """Serialize a scenario to TOML text; load_scenario of the result yields
    a structurally identical Scenario."""
    raw = scenario_to_dict(sc)
    lines = []
    for key in ("name", "mode"):
        lines.append(f"{key} = {_fmt(raw[key])}")
    for section in ("network", "weights", "gains", "sim", "reference"):
        if section not in raw:
            continue
        lines.append("")
        lines.append(f"[{section}]")
        for k, v in raw[section].items():
            lines.append(f"{k} = {_fmt(v)}")
    return "\n".join(lines) + "\n"
