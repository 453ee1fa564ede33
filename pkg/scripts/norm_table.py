"""Excitation norms <n,r|n,r> over a grid of squeeze strengths and orders.

Writes CSV with the brute-force value, the Legendre closed form and the
two-term recursion side by side.
"""
import argparse
import csv
import sys
from dataclasses import dataclass, field

from parabose import squeeze
from parabose.algebra import build_algebra


@dataclass
class NormTableConfig:
    orders: list[int] = field(default_factory=lambda: [1, 2, 3])
    radii: list[float] = field(default_factory=lambda: [0.2, 0.5, 1.0])
    n_max: int = 12
    tol: float = 1e-8


def rows(cfg: NormTableConfig):
    for p in cfg.orders:
        for r in cfg.radii:
            alg = build_algebra(p, squeeze.suggest_dim(r, p, cfg.n_max, cfg.tol, kind="norm"))
            rec = squeeze.excitation_norm_recursion(cfg.n_max, r, p)
            for n in range(cfg.n_max + 1):
                e = squeeze.excitation_norm(n, r, alg, cfg.tol)
                yield {"p": p, "r": r, "n": n, "N": alg.dim, "numeric": f"{e.numeric:.17g}",
                       "closed_form": f"{e.closed_form:.17g}", "recursion": f"{rec[n]:.17g}",
                       "rel_diff": f"{e.rel_diff:.3e}"}  # fmt: skip


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=NormTableConfig.n_max)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()
    cfg = NormTableConfig(n_max=args.n_max)
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = None
    for row in rows(cfg):
        if writer is None:
            writer = csv.DictWriter(fh, fieldnames=list(row), lineterminator="\n")
            writer.writeheader()
        writer.writerow(row)
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
