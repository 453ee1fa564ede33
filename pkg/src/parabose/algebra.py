"""Single-mode parabose algebra in a truncated Fock space.

The basis is the number states ``|0>, ..., |N-1>``. The annihilator acts as
``a|n> = sqrt([n]) |n-1>`` with the deformed integer

    [n] = n            (n even)
    [n] = n + p - 1    (n odd)

so ``p = 1`` is the ordinary Bose oscillator. Truncation corrupts the top of
the basis; every identity check here is restricted to the leading ``N - G``
columns, where ``G`` is the guard band.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .report import Report, TruncationError

__all__ = [
    "ParaAlgebra",
    "bracket",
    "bracket_factorial",
    "bracket_identity_check",
    "build_algebra",
    "coherent_overlap",
    "coherent_state",
    "commutator_power_check",
    "default_guard",
    "deformed_exp",
    "su11_check",
    "su11_generators",
    "verify_trilinear",
]


def _check_order(p: int) -> int:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or p < 1:
        raise ValueError(f"parastatistics order must be a positive integer, got {p!r}")
    return int(p)


def bracket(n: int, p: int) -> int:
    """Deformed integer ``[n] = n + (p-1)(1-(-1)^n)/2``."""
    if n < 0:
        raise ValueError(f"bracket needs n >= 0, got {n}")
    return n + (p - 1) * (n % 2)


def bracket_factorial(n: int, p: int) -> int:
    """``[n]! = [n][n-1]...[1]`` with ``[0]! = 1``, as an exact integer."""
    if n < 0:
        raise ValueError(f"bracket_factorial needs n >= 0, got {n}")
    out = 1
    for m in range(1, n + 1):
        out *= bracket(m, p)
    return out


def bracket_identity_check(n: int, p: int) -> bool:
    """True iff ``2[n-1] + 1 + (p-1)(-1)^(n-1) == [2n-1]``."""
    if n < 1:
        raise ValueError("bracket_identity_check needs n >= 1")
    sign = 1 if (n - 1) % 2 == 0 else -1
    return 2 * bracket(n - 1, p) + 1 + (p - 1) * sign == bracket(2 * n - 1, p)


def deformed_exp(x: complex, p: int, tol: float = 1e-16, max_terms: int = 100_000) -> complex:
    """Deformed exponential ``E(x) = sum_n x^n / [n]!``.

    Summation stops once the tail bound ``|t_m| / (1 - |x|/(m+1))`` drops
    below ``tol * (|partial sum| + 1)``; it uses ``[m+j] >= m+j``.
    """
    x = complex(x)
    if not (math.isfinite(x.real) and math.isfinite(x.imag)):
        raise ValueError(f"deformed_exp needs a finite argument, got {x!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    ax = abs(x)
    total = 0j
    term = 1 + 0j
    for m in range(max_terms):
        total += term
        term = term * x / bracket(m + 1, p)
        ratio = ax / (m + 2)
        if ratio < 1 and abs(term) / (1 - ratio) < tol * (abs(total) + 1):
            return total + term
    raise RuntimeError(f"deformed_exp did not converge within {max_terms} terms for x={x!r}")


def default_guard(dim: int) -> int:
    return max(2, dim // 8)


@dataclass(frozen=True)
class ParaAlgebra:
    """Truncated matrices of ``a``, ``a^dagger`` and the reflection ``R``."""

    order: int
    dim: int
    guard: int
    a_matrix: np.ndarray = field(repr=False)
    adag_matrix: np.ndarray = field(repr=False)
    r_matrix: np.ndarray = field(repr=False)

    @property
    def p(self) -> int:
        return self.order

    @property
    def block(self) -> int:
        """Number of leading basis states covered by assertions."""
        return self.dim - self.guard

    def brackets(self) -> np.ndarray:
        """``[n]`` for ``n = 0..N-1`` as floats."""
        return np.array([bracket(n, self.order) for n in range(self.dim)], dtype=float)

    def number_state(self, n: int) -> np.ndarray:
        if not 0 <= n < self.dim:
            raise ValueError(f"level {n} outside the basis of size {self.dim}")
        v = np.zeros(self.dim, dtype=complex)
        v[n] = 1.0
        return v

    def anticommutator(self) -> np.ndarray:
        """``{a^dagger, a}``; diagonal with entries ``[n] + [n+1] = 2n + p``.

        Built from the exact brackets, so the top level is not corrupted the
        way ``adag @ a + a @ adag`` would be.
        """
        n = np.arange(self.dim)
        return np.diag((2 * n + self.order).astype(complex))

    def with_guard(self, guard: int) -> "ParaAlgebra":
        return build_algebra(self.order, self.dim, guard)


def build_algebra(p: int, dim: int, guard: int | None = None) -> ParaAlgebra:
    """Build the truncated representation of order ``p`` on ``dim`` levels."""
    p = _check_order(p)
    if dim < 4:
        raise ValueError(f"basis size must be at least 4, got {dim}")
    if guard is None:
        guard = default_guard(dim)
    if not 0 < guard < dim:
        raise ValueError(f"guard band must satisfy 0 < G < N, got G={guard}, N={dim}")

    a = np.zeros((dim, dim), dtype=complex)
    levels = np.arange(1, dim)
    a[levels - 1, levels] = np.sqrt([bracket(int(n), p) for n in levels])
    adag = a.conj().T.copy()
    refl = np.diag((-1.0) ** np.arange(dim)).astype(complex)
    for m in (a, adag, refl):
        m.setflags(write=False)
    return ParaAlgebra(order=p, dim=dim, guard=guard, a_matrix=a, adag_matrix=adag, r_matrix=refl)


def _comm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def _anti(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y + y @ x


def _dev(x: np.ndarray, y: np.ndarray, cols: int) -> float:
    return float(np.abs(x[:, :cols] - y[:, :cols]).max())


def verify_trilinear(alg: ParaAlgebra, tol: float = 1e-12) -> Report:
    """Trilinear relations and their R-deformed Heisenberg form, guard-banded."""
    a, ad, R = alg.a_matrix, alg.adag_matrix, alg.r_matrix
    eye = np.eye(alg.dim)
    cols = alg.block
    devs = {
        "[a,{a+,a}] = 2a": _dev(_comm(a, _anti(ad, a)), 2 * a, cols),
        "[a,a+^2] = 2a+": _dev(_comm(a, ad @ ad), 2 * ad, cols),
        "[a,a^2] = 0": _dev(_comm(a, a @ a), 0 * a, cols),
        "[a,a+] = 1+(p-1)R": _dev(_comm(a, ad), eye + (alg.p - 1) * R, cols),
        "{R,a} = 0": _dev(_anti(R, a), 0 * a, cols),
        "{R,a+} = 0": _dev(_anti(R, ad), 0 * a, cols),
        "R^2 = 1": _dev(R @ R, eye, cols),
    }
    return Report(devs, tol, params={"p": alg.p, "N": alg.dim, "G": alg.guard})


def commutator_power_check(alg: ParaAlgebra, n_max: int = 6, tol: float = 1e-12) -> Report:
    """``[a, a+^n] = a+^(n-1) (n + (p-1)(1-(-1)^n)/2 R)`` and its adjoint form.

    Columns are restricted to ``N - max(G, n)`` since ``a+^n`` raises by n.
    Deviations are relative to the largest entry of the right-hand side;
    the entries of ``a+^n`` grow like ``N^(n/2)``.
    """
    a, ad, R = alg.a_matrix, alg.adag_matrix, alg.r_matrix
    eye = np.eye(alg.dim)
    devs: dict[str, float] = {}
    ad_pow = eye.astype(complex)
    a_pow = eye.astype(complex)
    for n in range(1, n_max + 1):
        ad_prev, a_prev = ad_pow, a_pow
        ad_pow = ad_pow @ ad
        a_pow = a_pow @ a
        cols = alg.dim - max(alg.guard, n)
        if cols <= 0:
            break
        factor = n * eye + (alg.p - 1) * (n % 2) * R
        rhs_up = ad_prev @ factor
        rhs_down = -a_prev @ factor
        devs[f"[a,a+^{n}]"] = _dev(_comm(a, ad_pow), rhs_up, cols) / np.abs(rhs_up[:, :cols]).max()
        devs[f"[a+,a^{n}]"] = _dev(_comm(ad, a_pow), rhs_down, cols) / np.abs(rhs_down[:, :cols]).max()
    return Report(devs, tol, params={"p": alg.p, "N": alg.dim, "n_max": n_max})


def su11_generators(alg: ParaAlgebra) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``K+ = a+^2/2``, ``K- = a^2/2``, ``K0 = (a+a + aa+)/4``."""
    a, ad = alg.a_matrix, alg.adag_matrix
    k_plus = ad @ ad / 2
    k_minus = a @ a / 2
    k_zero = alg.anticommutator() / 4
    return k_plus, k_minus, k_zero


def su11_check(alg: ParaAlgebra, tol: float = 1e-12) -> Report:
    kp, km, k0 = su11_generators(alg)
    cols = alg.block
    devs = {
        "[K0,K+] = K+": _dev(_comm(k0, kp), kp, cols),
        "[K0,K-] = -K-": _dev(_comm(k0, km), -km, cols),
        "[K+,K-] = -2K0": _dev(_comm(kp, km), -2 * k0, cols),
    }
    return Report(devs, tol, params={"p": alg.p, "N": alg.dim, "G": alg.guard})


def _coherent_dim(modulus: float, p: int, tol: float) -> int:
    # smallest N past the peak with |z|^(2N)/[N]! < tol
    lz = 2 * math.log(modulus)
    log_tol = math.log(tol)
    logf = 0.0
    n = 0
    while not (n > modulus**2 and n * lz - logf < log_tol):
        n += 1
        logf += math.log(bracket(n, p))
    return n


def coherent_state(z: complex, alg: ParaAlgebra, tol: float = 1e-12) -> np.ndarray:
    """Normalized parabose coherent state ``|z>`` on the truncated basis.

    Rejects ``z`` whose weight beyond the basis, ``|z|^(2N) / [N]!``, is
    not below ``tol``; the error message names an adequate ``N``.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"coherent label must be finite, got {z!r}")
    if z != 0:
        needed = _coherent_dim(abs(z), alg.p, tol)
        if needed > alg.dim:
            raise TruncationError(
                f"coherent state z={z!r} needs N >= {needed} levels for tol={tol:g}, "
                f"basis has {alg.dim}",
                required_dim=needed,
            )
    amps = np.zeros(alg.dim, dtype=complex)
    amps[0] = 1.0
    for n in range(1, alg.dim):
        amps[n] = amps[n - 1] * z / math.sqrt(bracket(n, alg.p))
    return amps / math.sqrt(deformed_exp(abs(z) ** 2, alg.p).real)


def coherent_overlap(z: complex, z0: complex, p: int) -> complex:
    """``<z|z0> = E(|z|^2)^(-1/2) E(|z0|^2)^(-1/2) E(conj(z) z0)``."""
    norm = math.sqrt(deformed_exp(abs(z) ** 2, p).real * deformed_exp(abs(z0) ** 2, p).real)
    return deformed_exp(complex(z).conjugate() * z0, p) / norm
