"""Amplifier propagator along a time line: closed form against the ODE.

Prints one CSV row per time with both values and their difference, for a
fixed pair of coherent labels. Useful for seeing how the deviation grows
with the squeeze strength r = 2k(t - t0).
"""
import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from parabose import amplifier


@dataclass
class ScanConfig:
    p: int = 2
    omega: float = 1.0
    k: float = 0.2
    t0: float = 0.0
    t_end: float = 2.0
    steps: int = 21
    z: complex = 0.3 + 0.2j
    z0: complex = 0.4j
    dim: int = 96


def scan(cfg: ScanConfig) -> list[amplifier.PropagatorSample]:
    base = amplifier.AmplifierConfig(cfg.omega, cfg.k, cfg.t0, cfg.t_end, cfg.p, cfg.dim)
    times = np.linspace(cfg.t0, cfg.t_end, cfg.steps)
    return amplifier.propagator_scan([cfg.z], [cfg.z0], times, base)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=ScanConfig.p)
    ap.add_argument("--k", type=float, default=ScanConfig.k)
    ap.add_argument("--t-end", type=float, default=ScanConfig.t_end)
    ap.add_argument("--dim", type=int, default=ScanConfig.dim)
    args = ap.parse_args()
    cfg = ScanConfig(p=args.p, k=args.k, t_end=args.t_end, dim=args.dim)
    writer = csv.DictWriter(sys.stdout, fieldnames=[*amplifier.CSV_COLUMNS, "r"], lineterminator="\n")
    writer.writeheader()
    for s in scan(cfg):
        rec = {k: (f"{v:.17g}" if isinstance(v, float) else v) for k, v in s.to_record().items()}
        rec["r"] = f"{2 * cfg.k * (s.t - cfg.t0):.6g}"
        writer.writerow(rec)


if __name__ == "__main__":
    main()
