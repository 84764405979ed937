"""Command-line front end: verify / bounds / simulate / sweep.

Exit codes: 0 success (admissible where relevant), 1 inadmissible or
infeasible constants, 2 input error, 3 divergence during integration.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import criteria
from .config import ConfigError, Scenario, load_scenario
from .controller import ControllerGains
from .criteria import InfeasibleError
from .dde_sim import DivergenceError, SimConfig, Trajectory, simulate

EXIT_OK = 0
EXIT_INADMISSIBLE = 1
EXIT_INPUT = 2
EXIT_DIVERGED = 3

_FLOAT = "%.17g"


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return _FLOAT % v
    return str(v)


def _threshold_section(sc: Scenario, report, check) -> list[str]:
    lines = ["[thresholds]",
             f"mode = {report.mode}",
             f"beta = {_fmt(report.beta)}"]
    rows = [
        ("mu_bar", report.mu_bar_min, "strict"),
        ("mu_tilde", report.mu_tilde_min, "strict"),
        ("rho_bar", report.rho_bar_min, "strict"),
        ("rho_tilde", report.rho_tilde_min, "strict"),
        ("eta_bar", report.eta_bar_min, "at-least"),
        ("eta_tilde", report.eta_tilde_min, "at-least"),
    ]
    for name, mins, kind in rows:
        if mins is None:
            continue
        for j, m in enumerate(mins):
            line = f"{name}[{j + 1}] {kind} {_fmt(float(m))}"
            if check is not None:
                margin = check.margins[name][j]
                ok = f"{name}[{j}]" not in check.failures
                line += f" margin {_fmt(float(margin))} {'ok' if ok else 'VIOLATED'}"
            lines.append(line)
    lines.append(f"rho_bar_base = {_fmt(list(map(float, report.rho_bar_base)))}")
    lines.append(f"rho_tilde_base = {_fmt(list(map(float, report.rho_tilde_base)))}")
    return lines


def _reference_section(sc: Scenario, report, cert) -> list[str]:
    """Computed values next to the reference values shipped with the
    scenario, each with a match/mismatch marker (tolerance 1e-3: references
    are printed rounded)."""
    ref = sc.reference
    if not ref:
        return []
    lines = ["[reference-comparison]"]
    computed = {
        "mu_bar": report.mu_bar_min,
        "mu_tilde": report.mu_tilde_min,
        "rho_bar_base": report.rho_bar_base,
        "rho_tilde_base": report.rho_tilde_base,
        "eta_bar": report.eta_bar_min,
        "eta_tilde": report.eta_tilde_min,
    }
    for key, ours in computed.items():
        if key not in ref:
            continue
        for j, (c, r) in enumerate(zip(ours, ref[key])):
            mark = "MATCH" if abs(float(c) - float(r)) <= 1e-3 else "MISMATCH"
            lines.append(f"{key}[{j + 1}] computed {_fmt(float(c))} "
                         f"reference {repr(float(r))} {mark}")
    if cert is not None:
        for key, ours in (("t1", cert.t1), ("t2", cert.t2)):
            if key in ref:
                mark = "MATCH" if abs(ours - float(ref[key])) <= 1e-3 else "MISMATCH"
                lines.append(f"{key} computed {_fmt(ours)} "
                             f"reference {repr(float(ref[key]))} {mark}")
    return lines


def _certificate_section(cert, extra=()) -> list[str]:
    lines = ["[certificate]"]
    lines += list(extra)
    lines += [
        f"epsilon = {_fmt(cert.epsilon)}",
        f"rho_ast = {_fmt(cert.rho_ast)}",
        f"rho_star = {_fmt(cert.rho_star)}",
        f"rho = {_fmt(cert.rho)}",
        f"m_e1_0 = {_fmt(cert.m_e1_0)}",
        f"t1_r = {_fmt(cert.t1_r)}",
        f"t1_i = {_fmt(cert.t1_i)}",
        f"t1 = {_fmt(cert.t1)}",
        f"t2 = {_fmt(cert.t2)}",
    ]
    return lines


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def run_verify(sc: Scenario, mode: str | None = None,
               out_path: str | None = None) -> int:
    mode = mode or sc.mode
    beta = sc.gains.beta if sc.gains is not None else 0.5
    report = criteria.thresholds(sc.network, sc.weights, beta, mode, sc.gains)
    lines = [f"scenario = {sc.name}"]
    cert = None
    if sc.gains is None:
        check = None
        lines += _threshold_section(sc, report, None)
        lines.append("admissible = no (no gain set supplied)")
        code = EXIT_INADMISSIBLE
    else:
        check = criteria.verify_gains(report, sc.gains)
        lines += _threshold_section(sc, report, check)
        lines.append(f"admissible = {'yes' if check.admissible else 'no'}")
        if check.admissible:
            eps = criteria.find_epsilon(sc.network, sc.weights, sc.gains)
            rho = criteria.find_rho(sc.network, sc.weights, sc.gains)
            cert = criteria.certificate(sc.network, sc.weights, sc.gains,
                                        eps.epsilon, rho.rho)
            lines += _certificate_section(
                cert, extra=[f"epsilon_sup = {_fmt(eps.sup_epsilon)}"])
            code = EXIT_OK
        else:
            lines.append("violated = " + ", ".join(check.failures))
            code = EXIT_INADMISSIBLE
    lines += _reference_section(sc, report, cert)
    _emit("\n".join(lines) + "\n", out_path)
    return code


def run_bounds(sc: Scenario, epsilon: float | None, rho: float | None,
               out_path: str | None = None) -> int:
    """Certificate with user-supplied constants instead of searched ones."""
    if sc.gains is None:
        sys.stderr.write("bounds requires a gain set in the scenario\n")
        return EXIT_INADMISSIBLE
    report = criteria.thresholds(sc.network, sc.weights, sc.gains.beta,
                                 sc.mode, sc.gains)
    check = criteria.verify_gains(report, sc.gains)
    if not check.admissible:
        sys.stderr.write("gain set is inadmissible: "
                         + ", ".join(check.failures) + "\n")
        return EXIT_INADMISSIBLE
    lines = [f"scenario = {sc.name}"]
    extra = []
    try:
        if epsilon is None:
            eps = criteria.find_epsilon(sc.network, sc.weights, sc.gains)
            epsilon = eps.epsilon
            extra.append(f"epsilon_sup = {_fmt(eps.sup_epsilon)}")
        elif not criteria.epsilon_feasible(sc.network, sc.weights, sc.gains, epsilon):
            sys.stderr.write(f"epsilon = {epsilon} violates the margin inequalities\n")
            return EXIT_INADMISSIBLE
        if rho is None:
            rho = criteria.find_rho(sc.network, sc.weights, sc.gains).rho
        elif not criteria.rho_feasible(sc.network, sc.weights, sc.gains, rho):
            sys.stderr.write(f"rho = {rho} exceeds its feasibility bounds\n")
            return EXIT_INADMISSIBLE
        cert = criteria.certificate(sc.network, sc.weights, sc.gains, epsilon, rho)
    except InfeasibleError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INADMISSIBLE
    lines += _certificate_section(cert, extra=extra)
    lines += _reference_section(sc, report, cert)
    _emit("\n".join(lines) + "\n", out_path)
    return EXIT_OK


def write_trajectory_csv(traj: Trajectory, path: str) -> None:
    """Lossless CSV: 17 significant digits, one row per recorded sample."""
    n = traj.x.shape[1]
    cols = ["t"]
    for j in range(1, n + 1):
        cols += [f"x{j}_re", f"x{j}_im", f"y{j}_re", f"y{j}_im",
                 f"e{j}_re", f"e{j}_im"]
    cols += ["norm_e1", "monitor_m", "norm_e2", "monitor_v", "settled"]

    def cell(v: float) -> str:
        return "" if math.isnan(v) else _FLOAT % v

    with open(path, "w", newline="") as fh:
        fh.write(",".join(cols) + "\n")
        for i, t in enumerate(traj.times):
            row = [_FLOAT % t]
            for j in range(n):
                row += [_FLOAT % traj.x[i, j, 0], _FLOAT % traj.x[i, j, 1],
                        _FLOAT % traj.y[i, j, 0], _FLOAT % traj.y[i, j, 1],
                        _FLOAT % traj.e[i, j, 0], _FLOAT % traj.e[i, j, 1]]
            row += [cell(traj.norm_e1[i]), cell(traj.monitor_m[i]),
                    cell(traj.norm_e2[i]), cell(traj.monitor_v[i])]
            settled = (traj.settling_time is not None
                       and t >= traj.settling_time - 1e-12)
            row.append("1" if settled else "0")
            fh.write(",".join(row) + "\n")


def run_simulate(sc: Scenario, out_csv: str, dt: float | None = None,
                 t_end: float | None = None, scheme: str | None = None) -> int:
    cfg = sc.sim
    if dt is not None or t_end is not None or scheme is not None:
        cfg = SimConfig(
            t_end=t_end if t_end is not None else cfg.t_end,
            dt=dt if dt is not None else cfg.dt,
            scheme=scheme if scheme is not None else cfg.scheme,
            settle_tolerance=cfg.settle_tolerance,
            record_stride=cfg.record_stride,
            dead_zone=cfg.dead_zone,
        )
    cert = None
    epsilon = rho = None
    if sc.gains is not None:
        report = criteria.thresholds(sc.network, sc.weights, sc.gains.beta,
                                     sc.mode, sc.gains)
        if criteria.verify_gains(report, sc.gains).admissible:
            epsilon = criteria.find_epsilon(sc.network, sc.weights, sc.gains).epsilon
            rho = criteria.find_rho(sc.network, sc.weights, sc.gains).rho
            cert = criteria.certificate(sc.network, sc.weights, sc.gains,
                                        epsilon, rho)
    try:
        traj = simulate(sc.network, sc.gains, cfg, weights=sc.weights,
                        epsilon=epsilon, rho=rho)
    except DivergenceError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_DIVERGED
    write_trajectory_csv(traj, out_csv)
    print(f"settling_time = {_fmt(traj.settling_time)}")
    if traj.chattering_amplitude is not None:
        print(f"chattering_amplitude = {_fmt(traj.chattering_amplitude)}")
    if cert is not None:
        settled_in_time = (traj.settling_time is not None
                           and traj.settling_time <= cert.t2)
        print(f"certified_t2 = {_fmt(cert.t2)}")
        print(f"settled_before_t2 = {'yes' if settled_in_time else 'no'}")
    return EXIT_OK


def run_sweep(sc: Scenario, scales: list[float], out_path: str) -> int:
    """Scale the mu/rho gain families, pin eta at its thresholds, and report
    admissibility, settling, and chattering per scale factor."""
    if sc.gains is None:
        sys.stderr.write("sweep requires a gain set in the scenario\n")
        return EXIT_INPUT
    base_report = criteria.thresholds(sc.network, sc.weights, sc.gains.beta,
                                      sc.mode)
    eta_bar = tuple(float(v) for v in base_report.eta_bar_min)
    eta_tilde = tuple(float(v) for v in base_report.eta_tilde_min)
    rows = ["scale,admissible,settling_time,chattering_amplitude"]
    for scale in scales:
        if scale < 0:
            sys.stderr.write("scale factors must be >= 0\n")
            return EXIT_INPUT
        scaled = sc.gains.scaled(scale)
        gains = ControllerGains(
            mu_bar=scaled.mu_bar, rho_bar=scaled.rho_bar, eta_bar=eta_bar,
            mu_tilde=scaled.mu_tilde, rho_tilde=scaled.rho_tilde,
            eta_tilde=eta_tilde, beta=sc.gains.beta,
        )
        report = criteria.thresholds(sc.network, sc.weights, gains.beta,
                                     sc.mode, gains)
        admissible = criteria.verify_gains(report, gains).admissible
        try:
            traj = simulate(sc.network, gains, sc.sim, weights=sc.weights)
            settle = "" if traj.settling_time is None else _FLOAT % traj.settling_time
            chat = ("" if traj.chattering_amplitude is None
                    else _FLOAT % traj.chattering_amplitude)
        except DivergenceError:
            settle = "diverged"
            chat = ""
        rows.append(f"{_FLOAT % scale},{'yes' if admissible else 'no'},{settle},{chat}")
    _emit("\n".join(rows) + "\n", out_path)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="antisync",
        description="Simulate delayed master/slave networks under the "
                    "finite-time anti-synchronization controller and check "
                    "gain certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="thresholds, admissibility, certificate")
    p.add_argument("config")
    p.add_argument("--mode", choices=("theorem1", "lipschitz"))
    p.add_argument("--out")

    p = sub.add_parser("bounds", help="certificate from given epsilon/rho")
    p.add_argument("config")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--out")

    p = sub.add_parser("simulate", help="integrate and export trajectory CSV")
    p.add_argument("config")
    p.add_argument("--out", required=True)
    p.add_argument("--dt", type=float)
    p.add_argument("--t-end", type=float, dest="t_end")
    p.add_argument("--scheme", choices=("euler", "rk4", "rk4-lagged"))

    p = sub.add_parser("sweep", help="gain-scale conservatism study")
    p.add_argument("config")
    p.add_argument("--scales", required=True,
                   help="comma-separated positive factors")
    p.add_argument("--out", required=True)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.config)
    except ConfigError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INPUT
    try:
        if args.command == "verify":
            return run_verify(sc, args.mode, args.out)
        if args.command == "bounds":
            return run_bounds(sc, args.epsilon, args.rho, args.out)
        if args.command == "simulate":
            return run_simulate(sc, args.out, args.dt, args.t_end, args.scheme)
        if args.command == "sweep":
            try:
                scales = [float(s) for s in args.scales.split(",") if s.strip()]
            except ValueError:
                sys.stderr.write("--scales must be a comma-separated number list\n")
                return EXIT_INPUT
            return run_sweep(sc, scales, args.out)
    except ConfigError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INPUT
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
