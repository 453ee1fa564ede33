"""How far into a truncated basis the matrix exponential of the squeeze generator can be trusted.

For each (p, r, N) the script reports the trusted leading block of
exp((z a^2 - conj(z) a+^2)/2) at 1e-9, its deviation from the exact
product form on the default guard block, and the basis size the
leakage heuristic recommends for squeezed number states up to n_max.
"""
import csv
import sys
from dataclasses import dataclass, field

import numpy as np

from parabose import squeeze
from parabose.algebra import build_algebra


@dataclass
class TruncationConfig:
    orders: list[int] = field(default_factory=lambda: [1, 2, 3])
    radii: list[float] = field(default_factory=lambda: [0.2, 0.5, 1.0])
    dims: list[int] = field(default_factory=lambda: [32, 64, 128])
    n_max: int = 10
    tol: float = 1e-9


def main(cfg: TruncationConfig = TruncationConfig()) -> None:
    cols = ["p", "r", "N", "G", "trusted_block", "guard_block_dev", "suggested_N"]
    writer = csv.DictWriter(sys.stdout, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for p in cfg.orders:
        for r in cfg.radii:
            suggested = squeeze.suggest_dim(r, p, cfg.n_max, cfg.tol)
            for dim in cfg.dims:
                alg = build_algebra(p, dim)
                prm = squeeze.SqueezeParams.imaginary(r)
                s = squeeze.squeeze_operator(prm, alg, check=False)
                prod = squeeze.disentangled_squeeze(r, alg)
                m = alg.block
                writer.writerow({
                    "p": p, "r": r, "N": dim, "G": alg.guard,
                    "trusted_block": squeeze.trusted_block(prm, alg, cfg.tol),
                    "guard_block_dev": f"{float(np.abs(s - prod)[:m, :m].max()):.3e}",
                    "suggested_N": suggested,
                })  # fmt: skip


if __name__ == "__main__":
    main()
