#!/usr/bin/env python3
"""Reproduce the worked two-neuron example end to end.

Runs the gain verification, the certificate with the externally published
constants (epsilon = 0.25, rho = 0.4), full simulations of the controlled,
uncontrolled, and weak-gain scenarios, and a gain-scale sweep. All artifacts
land in results/.
"""

import argparse
import sys
from pathlib import Path

from antisync.cli import main as cli

ROOT = Path(__file__).resolve().parent.parent


def run(argv):
    print("+ antisync " + " ".join(argv))
    code = cli(argv)
    print(f"  -> exit {code}\n")
    return code


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(ROOT / "results"),
                    help="output directory (default: results/)")
    ap.add_argument("--scenarios", default=str(ROOT / "scenarios"),
                    help="scenario directory")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    scen = Path(args.scenarios)
    controlled = str(scen / "paper_s4_controlled.toml")
    uncontrolled = str(scen / "paper_s4_uncontrolled.toml")
    weak = str(scen / "paper_s4_weak_gains.toml")

    failures = 0
    failures += run(["verify", controlled,
                     "--out", str(out / "verify_controlled.txt")]) != 0
    failures += run(["bounds", controlled, "--epsilon", "0.25", "--rho", "0.4",
                     "--out", str(out / "bounds_published_constants.txt")]) != 0
    failures += run(["simulate", controlled,
                     "--out", str(out / "controlled.csv")]) != 0
    # the next two exit 1 by design: no gains / inadmissible gains
    run(["verify", weak, "--out", str(out / "verify_weak.txt")])
    failures += run(["simulate", uncontrolled,
                     "--out", str(out / "uncontrolled.csv")]) != 0
    failures += run(["simulate", weak, "--out", str(out / "weak_gains.csv")]) != 0
    failures += run(["sweep", controlled,
                     "--scales", "0,0.01,0.1,0.5,1.0",
                     "--out", str(out / "sweep.csv")]) != 0

    print(f"artifacts in {out}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
