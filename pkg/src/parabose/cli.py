"""Command-line front end: ``parabose {poly,verify,norms,state,propagator}``.

Output is JSON lines or CSV, on stdout or ``--out``. Floats are written as
17-significant-digit strings and exact rationals as ``"num/den"``, so
identical inputs give byte-identical files. Exit codes: 0 success, 1 a
check failed, 2 bad arguments.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Any, Iterable, Sequence

from . import __version__, algebra, amplifier, polynomials, squeeze, suites
from .report import CheckResult, TruncationError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _fmt(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, complex):
        return {"re": format(value.real, ".17g"), "im": format(value.imag, ".17g")}
    if isinstance(value, dict):
        return {k: _fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    if hasattr(value, "item"):
        return _fmt(value.item())
    return str(value)


def _header() -> str:
    import numpy
    import scipy

    return f"parabose {__version__}; numpy {numpy.__version__}; scipy {scipy.__version__}"


def _emit(records: Iterable[dict], fmt: str, out: io.TextIOBase, columns: Sequence[str] | None = None,
          header: bool = False) -> None:  # fmt: skip
    records = [_fmt(r) for r in records]
    if fmt == "json":
        if header:
            out.write(json.dumps({"header": _header()}) + "\n")
        for r in records:
            out.write(json.dumps(r) + "\n")
        return
    if header:
        out.write(f"# {_header()}\n")
    columns = list(columns or (records[0].keys() if records else []))
    writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for r in records:
        writer.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})


# -- argument types ----------------------------------------------------------


def _order(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must be a positive integer, got {text!r}") from None
    if p < 1:
        raise argparse.ArgumentTypeError(f"order must be a positive integer, got {text!r}")
    return p


def _rational_order(text: str) -> Fraction:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"order must be a positive rational, got {text!r}") from None
    if q <= 0:
        raise argparse.ArgumentTypeError(f"order must be positive, got {text!r}")
    return q


def _order_list(text: str) -> list[int]:
    return [_order(t) for t in text.split(",") if t.strip()]


def _complex_list(text: str) -> list[complex]:
    try:
        return [complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse complex list {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse number list {text!r}") from None


def _nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _positive_float(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _output_options(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", default=None, help="write to this path instead of stdout")
    sp.add_argument("--header", action="store_true", help="prepend a version header line")
    sp.add_argument("--config", default=None, help="key=value file; flags override it")


def _truncation_options(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--dim", type=int, default=64, help="Fock basis size N")
    sp.add_argument("--guard", type=int, default=8, help="guard band G")
    sp.add_argument("--no-auto-dim", dest="auto_dim", action="store_false",
                    help="fail instead of enlarging N when truncation is inadequate")  # fmt: skip


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parabose", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"parabose {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("poly", help="exact deformed Hermite/Legendre coefficients")
    sp.add_argument("family", choices=("hermite", "legendre"))
    sp.add_argument("--n", type=_nonneg, required=True)
    sp.add_argument("--p", type=_rational_order, default=Fraction(2))
    sp.add_argument("--method", choices=("closed", "recursion", "rodrigues"), default="closed")
    _output_options(sp)

    sp = sub.add_parser("verify", help="run identity suites; exit 1 on any failure")
    sp.add_argument("--scope", choices=(*suites.SCOPES, "all"), default="all")
    sp.add_argument("--p", type=_order_list, default=[2])
    sp.add_argument("--nmax", type=_nonneg, default=15)
    sp.add_argument("--r", type=float, default=0.5)
    sp.add_argument("--tol", type=_positive_float, default=1e-8)
    sp.add_argument("--omega", type=float, default=1.0)
    sp.add_argument("--k", type=float, default=0.2)
    sp.add_argument("--ode-tol", type=_positive_float, default=1e-10)
    _truncation_options(sp)
    _output_options(sp)

    sp = sub.add_parser("norms", help="excitation norms on the squeezed vacuum")
    sp.add_argument("--nmax", type=_nonneg, default=12)
    sp.add_argument("--r", type=float, default=0.5)
    sp.add_argument("--p", type=_order, default=2)
    sp.add_argument("--tol", type=_positive_float, default=1e-8)
    _truncation_options(sp)
    _output_options(sp)

    sp = sub.add_parser("state", help="squeezed number state amplitudes")
    sp.add_argument("--n", type=_nonneg, default=0)
    sp.add_argument("--r", type=float, default=0.5)
    sp.add_argument("--p", type=_order, default=2)
    sp.add_argument("--tol", type=_positive_float, default=1e-8)
    _truncation_options(sp)
    _output_options(sp)

    sp = sub.add_parser("propagator", help="coherent-state propagator of the amplifier")
    sp.add_argument("--p", type=_order, default=2)
    sp.add_argument("--omega", type=float, default=1.0)
    sp.add_argument("--k", type=float, default=0.2)
    sp.add_argument("--t0", type=float, default=0.0)
    sp.add_argument("--t", type=_float_list, default=None, help="comma-separated times (default t0, t0+0.5, t0+1)")
    sp.add_argument("--z", type=_complex_list, default=list(suites.DEFAULT_LABELS))
    sp.add_argument("--z0", type=_complex_list, default=list(suites.DEFAULT_LABELS))
    sp.add_argument("--ode-tol", type=_positive_float, default=1e-10)
    _truncation_options(sp)
    _output_options(sp)
    return parser


def _read_config(path: str) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("_", "-")] = value
    return values


def parse_args(argv: Sequence[str] | None) -> argparse.Namespace:
    """Parse ``argv``; a ``--config`` file supplies values for absent flags."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    cmd_at = next((i for i, a in enumerate(argv) if a in COMMANDS), None)
    if known.config and cmd_at is not None:
        try:
            cfg = _read_config(known.config)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
        given = {a.split("=", 1)[0] for a in argv if a.startswith("--")}
        extra = []
        for key, value in cfg.items():
            if f"--{key}" in given:
                continue
            # boolean switches take no value
            extra += [f"--{key}"] if value.lower() in ("true", "yes") else [f"--{key}", value]
        argv = [*argv[: cmd_at + 1], *extra, *argv[cmd_at + 1 :]]
    return parser.parse_args(argv)


# -- commands ----------------------------------------------------------------


def cmd_poly(args) -> tuple[list[dict], list[str] | None, int]:
    build = {
        ("hermite", "closed"): polynomials.hermite_deformed,
        ("hermite", "recursion"): polynomials.hermite_via_recursion,
        ("hermite", "rodrigues"): polynomials.hermite_rodrigues,
        ("legendre", "closed"): polynomials.legendre_deformed,
        ("legendre", "recursion"): polynomials.legendre_via_recursion,
        ("legendre", "rodrigues"): polynomials.legendre_rodrigues,
    }[(args.family, args.method)]
    poly = build(args.n, args.p)
    rec = poly.to_json(family=args.family, n=args.n)
    if args.format == "csv":
        rows = [{"p": rec["p"], "n": args.n, "family": args.family, "power": k, "coeff": c}
                for k, c in enumerate(rec["coeffs"])]  # fmt: skip
        return rows, ["p", "n", "family", "power", "coeff"], EXIT_OK
    return [rec], None, EXIT_OK


def cmd_verify(args) -> tuple[list[dict], list[str] | None, int]:
    cfg = suites.SuiteConfig(
        p_list=args.p, dim=args.dim, guard=args.guard, tol=args.tol, nmax=args.nmax, r=args.r,
        omega=args.omega, k=args.k, ode_tol=args.ode_tol, auto_dim=args.auto_dim,
    )  # fmt: skip
    results = suites.run(args.scope, cfg)
    rows = [_check_record(r) for r in results]
    code = EXIT_OK if all(r.passed for r in results) else EXIT_FAIL
    for r in results:
        if not r.passed:
            print(f"FAIL [{r.anchor}] {r.check}: max deviation {r.max_deviation:.3g}", file=sys.stderr)
    return rows, ["check", "anchor", "status", "max_deviation", "params"], code


def _check_record(r: CheckResult) -> dict:
    return {"check": r.check, "anchor": r.anchor, "status": r.status, "max_deviation": r.max_deviation,
            "params": r.params}  # fmt: skip


def _sized_algebra(p: int, args, need) -> algebra.ParaAlgebra:
    alg = algebra.build_algebra(p, args.dim, args.guard)
    if args.auto_dim:
        n_req = need()
        if n_req > alg.dim:
            print(f"note: enlarging basis from N={alg.dim} to N={n_req}", file=sys.stderr)
            return algebra.build_algebra(p, n_req)
    return alg


def cmd_norms(args) -> tuple[list[dict], list[str] | None, int]:
    alg = _sized_algebra(args.p, args, lambda: squeeze.suggest_dim(abs(args.r), args.p, args.nmax, args.tol, "norm"))
    rows = []
    for n in range(args.nmax + 1):
        rec = squeeze.excitation_norm(n, args.r, alg, args.tol).to_record()
        rec["N"] = alg.dim
        rows.append(rec)
    code = EXIT_OK if all(r["rel_diff"] < args.tol for r in rows) else EXIT_FAIL
    return rows, ["p", "n", "r", "N", "numeric", "closed_form", "abs_diff", "rel_diff"], code


def cmd_state(args) -> tuple[list[dict], list[str] | None, int]:
    alg = _sized_algebra(args.p, args, lambda: squeeze.suggest_dim(abs(args.r), args.p, args.n, args.tol))
    num = squeeze.squeezed_number_state_numeric(args.n, args.r, alg, args.tol).vector
    closed = squeeze.squeezed_number_state_closed(args.n, args.r, alg).vector if args.r != 0 else num
    rows = []
    for level in range(alg.block):
        rows.append({
            "p": args.p, "n": args.n, "r": args.r, "level": level,
            "re_numeric": num[level].real, "im_numeric": num[level].imag,
            "re_closed": closed[level].real, "im_closed": closed[level].imag,
            "abs_diff": abs(num[level] - closed[level]),
        })  # fmt: skip
    code = EXIT_OK if max(r["abs_diff"] for r in rows) < args.tol else EXIT_FAIL
    return rows, list(rows[0].keys()), code


def cmd_propagator(args) -> tuple[list[dict], list[str] | None, int]:
    times = args.t if args.t is not None else [args.t0, args.t0 + 0.5, args.t0 + 1.0]
    cfg = amplifier.AmplifierConfig(args.omega, args.k, args.t0, max(times), args.p, args.dim, args.guard, args.ode_tol)
    samples = amplifier.propagator_scan(args.z, args.z0, times, cfg)
    rows = [s.to_record() for s in samples]
    return rows, list(amplifier.CSV_COLUMNS), EXIT_OK


COMMANDS = {
    "poly": cmd_poly,
    "verify": cmd_verify,
    "norms": cmd_norms,
    "state": cmd_state,
    "propagator": cmd_propagator,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        rows, columns, code = COMMANDS[args.command](args)
    except TruncationError as exc:
        print(f"parabose {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"parabose {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            _emit(rows, args.format, fh, columns, args.header)
    else:
        _emit(rows, args.format, sys.stdout, columns, args.header)
    return code


if __name__ == "__main__":
    sys.exit(main())
