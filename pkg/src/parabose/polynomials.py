"""Deformed derivative and the deformed Hermite / Legendre families.

Everything here runs in exact rational arithmetic (``fractions.Fraction``).
The deformed derivative acts on monomials as ``D x^n = [n] x^(n-1)``, which
for polynomials and power series equals

    Df(x) = f'(x) + (p - 1) / (2x) * (f(x) - f(-x)).

The order ``p`` may be any positive rational here; the Fock-space modules
only use integer ``p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .report import Report

__all__ = [
    "ExactPoly",
    "FormalSeries",
    "bracket_q",
    "bracket_factorial_q",
    "deformed_derivative",
    "deformed_derivative_two_term",
    "derivative_recursion_checks",
    "eval_poly",
    "hermite_deformed",
    "hermite_generating_check",
    "hermite_rodrigues",
    "hermite_via_recursion",
    "legendre_deformed",
    "legendre_rodrigues",
    "legendre_via_recursion",
    "ode_residual",
    "eigenvalue",
]

Rational = Union[int, Fraction, str]


def _as_order(p: Rational) -> Fraction:
    q = Fraction(p)
    if q <= 0:
        raise ValueError(f"order p must be positive, got {p!r}")
    return q


def bracket_q(n: int, p: Rational) -> Fraction:
    """``[n]`` for rational ``p``."""
    if n < 0:
        raise ValueError(f"bracket needs n >= 0, got {n}")
    return n + (Fraction(p) - 1) * (n % 2)


def bracket_factorial_q(n: int, p: Rational) -> Fraction:
    out = Fraction(1)
    for m in range(1, n + 1):
        out *= bracket_q(m, p)
    return out


def _strip(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    c = [Fraction(v) for v in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class ExactPoly:
    """Polynomial with exact rational coefficients, ``coeffs[k]`` multiplies ``x^k``.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    coeffs: tuple[Fraction, ...]
    order_p: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))
        object.__setattr__(self, "order_p", Fraction(self.order_p))

    @classmethod
    def monomial(cls, n: int, p: Rational = 1, c: Rational = 1) -> "ExactPoly":
        return cls((Fraction(0),) * n + (Fraction(c),), Fraction(p))

    @classmethod
    def constant(cls, c: Rational, p: Rational = 1) -> "ExactPoly":
        return cls((Fraction(c),), Fraction(p))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def _like(self, coeffs: Iterable[Fraction]) -> "ExactPoly":
        return ExactPoly(tuple(coeffs), self.order_p)

    def __add__(self, other: "ExactPoly") -> "ExactPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return self._like(self.coeff(k) + other.coeff(k) for k in range(n))

    def __sub__(self, other: "ExactPoly") -> "ExactPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return self._like(self.coeff(k) - other.coeff(k) for k in range(n))

    def __neg__(self) -> "ExactPoly":
        return self._like(-c for c in self.coeffs)

    def __mul__(self, other: Union["ExactPoly", Rational]) -> "ExactPoly":
        if not isinstance(other, ExactPoly):
            s = Fraction(other)
            return self._like(s * c for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return self._like(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ExactPoly":
        out = ExactPoly.constant(1, self.order_p)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int = 1) -> "ExactPoly":
        """Multiply by ``x^k``."""
        if self.is_zero():
            return self
        return self._like((Fraction(0),) * k + self.coeffs)

    def reflect(self) -> "ExactPoly":
        """``f(-x)``."""
        return self._like(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs))

    def derivative(self) -> "ExactPoly":
        """Ordinary ``d/dx``."""
        return self._like(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def divide_by_x(self) -> "ExactPoly":
        if self.coeff(0) != 0:
            raise ValueError("polynomial has a nonzero constant term; not divisible by x")
        return self._like(self.coeffs[1:])

    def parity_defect(self, n: int) -> Fraction:
        """Largest coefficient violating parity ``(-1)^n`` under x -> -x."""
        return max((abs(c) for k, c in enumerate(self.coeffs) if (k - n) % 2), default=Fraction(0))

    def __call__(self, x: complex) -> complex:
        return eval_poly(self, x)

    def to_json(self, family: str | None = None, n: int | None = None) -> dict:
        """``{p, n, family, coeffs}`` with coefficients as ``"num/den"`` strings."""
        return {
            "p": _frac_str(self.order_p),
            "n": n,
            "family": family,
            "coeffs": [_frac_str(c) for c in self.coeffs],
        }


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class FormalSeries:
    """Power series known exactly through ``x^order``."""

    coeffs: tuple[Fraction, ...]
    order: int
    order_p: Fraction = Fraction(1)

    def __post_init__(self):
        c = [Fraction(v) for v in self.coeffs[: self.order + 1]]
        c += [Fraction(0)] * (self.order + 1 - len(c))
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "order_p", Fraction(self.order_p))

    @classmethod
    def exp_gaussian(cls, sign: int, order: int, p: Rational = 1) -> "FormalSeries":
        """Series of ``exp(sign * x^2)`` through ``x^order``."""
        c = [Fraction(0)] * (order + 1)
        for k in range(order // 2 + 1):
            c[2 * k] = Fraction(sign**k, math.factorial(k))
        return cls(tuple(c), order, p)

    def __mul__(self, other: Union["FormalSeries", Rational]) -> "FormalSeries":
        if not isinstance(other, FormalSeries):
            s = Fraction(other)
            return FormalSeries(tuple(s * c for c in self.coeffs), self.order, self.order_p)
        m = min(self.order, other.order)
        out = [Fraction(0)] * (m + 1)
        for i in range(m + 1):
            a = self.coeffs[i]
            if a:
                for j in range(m + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return FormalSeries(tuple(out), m, self.order_p)

    __rmul__ = __mul__

    def polynomial_part(self, degree: int) -> ExactPoly:
        return ExactPoly(self.coeffs[: degree + 1], self.order_p)


def deformed_derivative(
    f: Union[ExactPoly, FormalSeries], p: Rational | None = None
) -> Union[ExactPoly, FormalSeries]:
    """Apply ``D`` by the monomial rule ``D x^n = [n] x^(n-1)``.

    A series known through ``x^M`` comes back known through ``x^(M-1)``.
    """
    q = f.order_p if p is None else _as_order(p)
    new = [bracket_q(k, q) * c for k, c in enumerate(f.coeffs) if k > 0]
    if isinstance(f, FormalSeries):
        return FormalSeries(tuple(new), max(f.order - 1, -1), q)
    return ExactPoly(tuple(new), q)


def deformed_derivative_two_term(f: ExactPoly, p: Rational | None = None) -> ExactPoly:
    """``f' + (p-1)/(2x) (f(x) - f(-x))``, evaluated literally."""
    q = f.order_p if p is None else _as_order(p)
    odd_twice = f - f.reflect()
    return ExactPoly(f.derivative().coeffs, q) + ExactPoly(odd_twice.divide_by_x().coeffs, q) * ((q - 1) / 2)


def _dn(f, n: int):
    for _ in range(n):
        f = deformed_derivative(f)
    return f


def hermite_deformed(n: int, p: Rational) -> ExactPoly:
    """Closed-form sum ``[n]! sum_k (-1)^k (2x)^(n-2k) / (k! [n-2k]!)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    q = _as_order(p)
    nf = bracket_factorial_q(n, q)
    c = [Fraction(0)] * (n + 1)
    for k in range(n // 2 + 1):
        c[n - 2 * k] = nf * (-1) ** k * 2 ** (n - 2 * k) / (math.factorial(k) * bracket_factorial_q(n - 2 * k, q))
    return ExactPoly(tuple(c), q)


def legendre_deformed(n: int, p: Rational) -> ExactPoly:
    """Closed-form sum ``sum_k (-1)^k [2n-2k]! x^(n-2k) / (2^n k! (n-k)! [n-2k]!)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    q = _as_order(p)
    c = [Fraction(0)] * (n + 1)
    for k in range(n // 2 + 1):
        num = (-1) ** k * bracket_factorial_q(2 * n - 2 * k, q)
        den = 2**n * math.factorial(k) * math.factorial(n - k) * bracket_factorial_q(n - 2 * k, q)
        c[n - 2 * k] = num / den
    return ExactPoly(tuple(c), q)


def hermite_via_recursion(n: int, p: Rational) -> ExactPoly:
    """``H_(m+1) = 2x H_m - 2[m] H_(m-1)`` from ``H_0 = 1``, ``H_1 = 2x``."""
    q = _as_order(p)
    prev = ExactPoly.constant(1, q)
    if n == 0:
        return prev
    cur = ExactPoly.monomial(1, q, 2)
    for m in range(1, n):
        prev, cur = cur, cur.shift() * 2 - prev * (2 * bracket_q(m, q))
    return cur


def legendre_via_recursion(n: int, p: Rational) -> ExactPoly:
    """``[m+1] P_(m+1) = [2m+1] x P_m - [m] P_(m-1)`` from ``P_0 = 1``, ``P_1 = x``."""
    q = _as_order(p)
    prev = ExactPoly.constant(1, q)
    if n == 0:
        return prev
    cur = ExactPoly.monomial(1, q)
    for m in range(1, n):
        nxt = (cur.shift() * bracket_q(2 * m + 1, q) - prev * bracket_q(m, q)) * (1 / bracket_q(m + 1, q))
        prev, cur = cur, nxt
    return cur


def hermite_rodrigues(n: int, p: Rational, order: int | None = None) -> ExactPoly:
    """``(-1)^n e^(x^2) D^n e^(-x^2)`` on truncated series.

    ``D^n`` costs n orders of accuracy, so a series through ``x^M`` leaves the
    product exact through ``x^(M-n)``; ``M`` defaults to ``2n + 4``. The
    coefficients between ``x^(n+1)`` and ``x^(M-n)`` must vanish for the
    result to be a degree-n polynomial. Exact arithmetic cannot produce a
    nonzero tail from consistent brackets, so one raises ``ArithmeticError``.
    """
    q = _as_order(p)
    m = order if order is not None else 2 * n + 4
    if m < 2 * n + 2:
        raise ValueError(f"series order {m} too short for n={n}; need at least {2 * n + 2}")
    gauss = FormalSeries.exp_gaussian(-1, m, q)
    prod = FormalSeries.exp_gaussian(+1, m, q) * _dn(gauss, n) * (-1) ** n
    if any(prod.coeffs[n + 1 :]):
        raise ArithmeticError(f"differential form for n={n}, p={q} leaves a non-polynomial tail")
    return prod.polynomial_part(n)


def legendre_rodrigues(n: int, p: Rational) -> ExactPoly:
    """``D^n (x^2 - 1)^n / (2^n n!)``."""
    q = _as_order(p)
    base = ExactPoly((Fraction(-1), Fraction(0), Fraction(1)), q) ** n
    return _dn(base, n) * Fraction(1, 2**n * math.factorial(n))


def eigenvalue(kind: str, n: int, p: Rational) -> Fraction:
    """``2[n]`` for Hermite, ``[n][n+1]`` for Legendre."""
    q = _as_order(p)
    if kind == "hermite":
        return 2 * bracket_q(n, q)
    if kind == "legendre":
        return bracket_q(n, q) * bracket_q(n + 1, q)
    raise ValueError(f"unknown family {kind!r}")


def ode_residual(kind: str, n: int, p: Rational) -> ExactPoly:
    """Left-hand side of the deformed second-order equation for the family member.

    Hermite:  ``D^2 f - 2x Df + 2[n] f``
    Legendre: ``(1-x^2) D^2 f - 2x Df + [n][n+1] f``
    """
    q = _as_order(p)
    mu = eigenvalue(kind, n, q)
    if kind == "hermite":
        f = hermite_deformed(n, q)
        df = deformed_derivative(f)
        return deformed_derivative(df) - df.shift() * 2 + f * mu
    f = legendre_deformed(n, q)
    df = deformed_derivative(f)
    d2f = deformed_derivative(df)
    return d2f - d2f.shift(2) - df.shift() * 2 + f * mu


def _max_abs(f: ExactPoly) -> float:
    return float(max((abs(c) for c in f.coeffs), default=0))


def derivative_recursion_checks(n_max: int, p: Rational) -> Report:
    """Neighbour relations between family members and their D-derivatives.

    Every identity is checked as an exact polynomial equation for all
    admissible ``n <= n_max``; the deviation is the largest leftover
    coefficient and the tolerance is zero.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    q = _as_order(p)
    H = [hermite_deformed(n, q) for n in range(n_max + 1)]
    P = [legendre_deformed(n, q) for n in range(n_max + 2)]
    DP = [deformed_derivative(f) for f in P]
    x = ExactPoly.monomial(1, q)
    b = lambda n: bracket_q(n, q)  # noqa: E731

    names = {
        "hermite-lowering": "DH_n - 2[n]H_(n-1) = 0",
        "legendre-derivative-up": "DP_(n+1) - xDP_n - [n+1]P_n = 0",
        "legendre-derivative-down": "xDP_n - DP_(n-1) - [n]P_n = 0",
        "legendre-derivative-span": "DP_(n+1) - DP_(n-1) - [2n+1]P_n = 0",
        "legendre-first-order": "(x^2-1)DP_n - [n]xP_n + [n]P_(n-1) = 0",
    }
    devs = {v: 0.0 for v in names.values()}
    details: list[str] = []

    def record(key: str, n: int, residual: ExactPoly) -> None:
        d = _max_abs(residual)
        label = names[key]
        devs[label] = max(devs[label], d)
        if d:
            details.append(f"{label} fails at n={n}")

    for n in range(1, n_max + 1):
        record("hermite-lowering", n, deformed_derivative(H[n]) - H[n - 1] * (2 * b(n)))
    for n in range(0, n_max + 1):
        record("legendre-derivative-up", n, DP[n + 1] - x * DP[n] - P[n] * b(n + 1))
    for n in range(1, n_max + 1):
        record("legendre-derivative-down", n, x * DP[n] - DP[n - 1] - P[n] * b(n))
        record("legendre-derivative-span", n, DP[n + 1] - DP[n - 1] - P[n] * b(2 * n + 1))
        record(
            "legendre-first-order",
            n,
            (x * x - ExactPoly.constant(1, q)) * DP[n] - x * P[n] * b(n) + P[n - 1] * b(n),
        )
    return Report(devs, 0.0, details, params={"p": str(q), "n_max": n_max})


def hermite_generating_check(p: Rational, order: int) -> Report:
    """Expand ``exp(-t^2) E(2tx)`` in t and compare with ``H_n(x) / [n]!``.

    Both factors are built as series in t whose coefficients are exact
    polynomials in x; their Cauchy product is truncated at ``t^order``.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    q = _as_order(p)
    gauss = [
        ExactPoly.constant(Fraction((-1) ** (j // 2), math.factorial(j // 2)) if j % 2 == 0 else 0, q)
        for j in range(order + 1)
    ]
    dexp = [ExactPoly.monomial(j, q, Fraction(2**j) / bracket_factorial_q(j, q)) for j in range(order + 1)]
    devs: dict[str, float] = {}
    details: list[str] = []
    for n in range(order + 1):
        coeff = ExactPoly((), q)
        for j in range(n + 1):
            coeff = coeff + gauss[n - j] * dexp[j]
        target = hermite_deformed(n, q) * (1 / bracket_factorial_q(n, q))
        d = _max_abs(coeff - target)
        devs[f"t^{n}"] = d
        if d:
            details.append(f"coefficient of t^{n} differs: {coeff.coeffs} vs {target.coeffs}")
    return Report(devs, 0.0, details, params={"p": str(q), "order": order})


def eval_poly(f: ExactPoly | Sequence[Rational], x: complex) -> complex:
    """Horner evaluation in double precision."""
    coeffs = f.coeffs if isinstance(f, ExactPoly) else tuple(Fraction(c) for c in f)
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * x + float(c)
    return acc
