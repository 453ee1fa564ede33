"""Parabose squeeze operator, its disentangled product, and squeezed states.

Conventions
-----------
``S(z) = exp((z a^2 - conj(z) a+^2) / 2)``. The real specialization ``z = r``
gives ``S(r) a S(r)^-1 = cosh r a + sinh r a+``; the imaginary one
``z = -i r`` is the form that disentangles into

    exp(-i tanh r a+^2/2) exp(ln sech r {a+,a}/2) exp(-i tanh r a^2/2).

Two numerical tiers meet here. The matrix exponential of the truncated
generator is exactly unitary but corrupted near the cutoff, and the damage
creeps inward as ``r`` grows. The disentangled product and the closed-form
states only ever raise from the vacuum or lower towards it, so their
truncated entries are exact; they serve as references for the exponential.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import expm_multiply

from .algebra import ParaAlgebra, bracket, bracket_factorial, build_algebra, default_guard
from .polynomials import eval_poly, hermite_deformed, legendre_deformed
from .report import Report, TruncationError

__all__ = [
    "ExcitationNorm",
    "SqueezeParams",
    "SqueezedNumberState",
    "bogoliubov_check",
    "disentangled_squeeze",
    "excitation_norm",
    "excitation_norm_recursion",
    "parity_mixing",
    "squeeze_generator",
    "squeeze_operator",
    "squeezed_number_state_closed",
    "squeezed_number_state_numeric",
    "squeezed_vacuum_eigenrelation_check",
    "squeezed_vacuum_series",
    "suggest_dim",
    "truncation_estimate",
    "trusted_block",
]


@dataclass(frozen=True)
class SqueezeParams:
    """Complex squeeze parameter ``z``."""

    z: complex
    principal_branch: bool = True

    @classmethod
    def real(cls, r: float) -> "SqueezeParams":
        return cls(complex(r, 0.0))

    @classmethod
    def imaginary(cls, r: float) -> "SqueezeParams":
        """``z = -i r``."""
        return cls(complex(0.0, -r))

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"squeeze parameter must be finite, got {self.z!r}")
        object.__setattr__(self, "z", z)

    @property
    def r(self) -> float:
        return abs(self.z)


@dataclass(frozen=True)
class SqueezedNumberState:
    n: int
    params: SqueezeParams
    vector: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))


@dataclass(frozen=True)
class ExcitationNorm:
    """``<n,r||n,r>`` by brute force and by the Legendre closed form."""

    n: int
    r: float
    p: int
    numeric: float
    closed_form: float

    @property
    def abs_diff(self) -> float:
        return abs(self.numeric - self.closed_form)

    @property
    def rel_diff(self) -> float:
        return self.abs_diff / abs(self.closed_form)

    def to_record(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "r": self.r,
            "numeric": self.numeric,
            "closed_form": self.closed_form,
            "abs_diff": self.abs_diff,
            "rel_diff": self.rel_diff,
        }


def _as_params(params: SqueezeParams | complex | float) -> SqueezeParams:
    return params if isinstance(params, SqueezeParams) else SqueezeParams(complex(params))


def squeeze_generator(params: SqueezeParams | complex, alg: ParaAlgebra) -> np.ndarray:
    """``(z a^2 - conj(z) a+^2) / 2``; anti-Hermitian."""
    z = _as_params(params).z
    a, ad = alg.a_matrix, alg.adag_matrix
    return (z * (a @ a) - z.conjugate() * (ad @ ad)) / 2


def _sparse_generator(z: complex, alg: ParaAlgebra) -> csr_matrix:
    a = csr_matrix(alg.a_matrix)
    ad = csr_matrix(alg.adag_matrix)
    return ((a @ a) * z - (ad @ ad) * z.conjugate()) * 0.5


def truncation_estimate(params: SqueezeParams | complex, alg: ParaAlgebra, block: int | None = None) -> float:
    """Max change of the leading block of ``S`` when the basis is enlarged.

    Compares the exponential on ``N`` levels with the one on
    ``N + max(16, N/2)`` levels over the leading ``block`` rows and columns
    (default ``N - G``).
    """
    params = _as_params(params)
    block = alg.block if block is None else block
    pad = alg.dim + max(16, alg.dim // 2)
    big = build_algebra(alg.p, pad)
    s_small = expm(squeeze_generator(params, alg))
    s_big = expm(squeeze_generator(params, big))
    return float(np.abs(s_small[:block, :block] - s_big[:block, :block]).max())


def trusted_block(params: SqueezeParams | complex, alg: ParaAlgebra, tol: float) -> int:
    """Largest leading block on which the truncated ``S`` is accurate to ``tol``.

    Returns 0 when not even the vacuum entry is trustworthy.
    """
    params = _as_params(params)
    pad = alg.dim + max(16, alg.dim // 2)
    s_small = expm(squeeze_generator(params, alg))
    s_big = expm(squeeze_generator(params, build_algebra(alg.p, pad)))
    diff = np.abs(s_small - s_big[: alg.dim, : alg.dim])
    m = 0
    while m < alg.dim and diff[: m + 1, : m + 1].max() < tol:
        m += 1
    return m


def squeeze_operator(
    params: SqueezeParams | complex, alg: ParaAlgebra, tol: float = 1e-8, check: bool = True
) -> np.ndarray:
    """Matrix exponential of the truncated generator.

    With ``check`` the leading ``N - G`` block is compared against a padded
    basis; a change above ``tol`` raises :class:`TruncationError`.
    """
    params = _as_params(params)
    s = expm(squeeze_generator(params, alg))
    if check and params.z != 0:
        err = truncation_estimate(params, alg)
        if err > tol:
            raise TruncationError(
                f"squeeze operator with |z|={params.r:g} is truncation-limited on the "
                f"leading {alg.block} levels (estimated error {err:.3g} > {tol:g}); "
                "increase N or widen the guard band",
                required_dim=None,
            )
    return s


def _raising_exp_matrix(coef: complex, alg: ParaAlgebra) -> np.ndarray:
    """``exp(coef a+^2)``, lower triangular, from its terminating series.

    ``<m+2k| exp(c a+^2) |m> = c^k/k! sqrt([m+2k]!/[m]!)``.
    """
    out = np.zeros((alg.dim, alg.dim), dtype=complex)
    br = alg.brackets()
    for m in range(alg.dim):
        val = 1.0 + 0j
        out[m, m] = val
        for k in range(1, (alg.dim - 1 - m) // 2 + 1):
            top = m + 2 * k
            val = val * coef / k * math.sqrt(br[top] * br[top - 1])
            out[top, m] = val
    return out


def disentangled_squeeze(r: float, alg: ParaAlgebra) -> np.ndarray:
    """Ordered product form of ``S(-i r)``.

    The middle factor is diagonal with entries ``(sech r)^((2n+p)/2)``; the
    outer factors are terminating series. Every entry is exact for the
    truncated basis (no cutoff corruption).
    """
    t = math.tanh(r)
    left = _raising_exp_matrix(-0.5j * t, alg)
    n = np.arange(alg.dim)
    middle = (1.0 / math.cosh(r)) ** ((2 * n + alg.p) / 2)
    right = left.T
    return (left * middle) @ right


def parity_mixing(op: np.ndarray) -> float:
    """Largest entry coupling an even level to an odd one."""
    idx = np.arange(op.shape[0])
    mask = (idx[:, None] + idx[None, :]) % 2 == 1
    return float(np.abs(op[mask]).max(initial=0.0))


def bogoliubov_check(r: float, alg: ParaAlgebra, tol: float = 1e-8, cols: int | None = None) -> Report:
    """``S a S^-1 = cosh r a + sinh r a+`` and the adjoint relation.

    Checked in the multiplied-out form ``S a = (cosh r a + sinh r a+) S``,
    which never touches the inverse. Rows run over the leading ``N - G``
    levels; columns over the leading ``cols`` states, by default those whose
    squeezed image leaves less than ``tol`` in the guard band.
    """
    s = squeeze_operator(SqueezeParams.real(r), alg, check=False)
    a, ad = alg.a_matrix, alg.adag_matrix
    m = alg.block
    if cols is None:
        leaks = np.linalg.norm(s[m:, :m], axis=0)
        cols = int(np.argmax(leaks > tol)) if (leaks > tol).any() else m
    cols = min(cols, m - 1)
    ch, sh = math.cosh(r), math.sinh(r)
    res_a = s @ a - (ch * a + sh * ad) @ s
    res_ad = s @ ad - (ch * ad + sh * a) @ s
    devs = {
        "S a S^-1 = cosh r a + sinh r a+": float(np.abs(res_a[:m, :cols]).max(initial=0.0)),
        "S a+ S^-1 = cosh r a+ + sinh r a": float(np.abs(res_ad[:m, :cols]).max(initial=0.0)),
    }
    return Report(devs, tol, params={"p": alg.p, "N": alg.dim, "r": r, "cols": cols})


def _guard_leak(vec: np.ndarray, alg: ParaAlgebra) -> float:
    return float(np.linalg.norm(vec[alg.block :]))


def squeezed_number_state_numeric(n: int, r: float, alg: ParaAlgebra, tol: float = 1e-8) -> SqueezedNumberState:
    """``S(r)|n>`` from the exponential of the truncated generator.

    Raises :class:`TruncationError` when the result puts more than ``tol``
    of amplitude into the guard band.
    """
    if not 0 <= n < alg.block:
        raise ValueError(f"level {n} must lie below the guard band (N - G = {alg.block})")
    params = SqueezeParams.real(r)
    vec = expm_multiply(_sparse_generator(params.z, alg), alg.number_state(n))
    leak = _guard_leak(vec, alg)
    if leak > tol:
        raise TruncationError(
            f"|r={r:g}, n={n}> leaks {leak:.3g} into the guard band; use N >= "
            f"{suggest_dim(r, alg.p, n, tol)}",
            required_dim=suggest_dim(r, alg.p, n, tol),
        )
    return SqueezedNumberState(n, params, vec)


def squeezed_vacuum_series(r: float, alg: ParaAlgebra) -> np.ndarray:
    """``exp(-tanh r a+^2 / 2)|0>`` summed on the vacuum; even levels only."""
    t = math.tanh(r)
    br = alg.brackets()
    out = np.zeros(alg.dim, dtype=complex)
    out[0] = 1.0
    for m in range(1, (alg.dim - 1) // 2 + 1):
        out[2 * m] = out[2 * m - 2] * (-t / 2) / m * math.sqrt(br[2 * m] * br[2 * m - 1])
    return out


def squeezed_number_state_closed(n: int, r: float, alg: ParaAlgebra) -> SqueezedNumberState:
    """Closed form built from the deformed Hermite polynomial of ``a+``.

    The state is ``(sech r)^(p/2) (-tanh r/2)^(n/2) / sqrt([n]!) H_n(chi)``
    applied to ``exp(-tanh r a+^2/2)|0>``, with ``chi = a+ / (i sqrt(sinh 2r))``.
    Fractional powers take the principal branch for ``r > 0``, which matches
    ``S(r)|n>`` including phase. For ``r < 0`` the root of ``sinh 2r`` is
    taken as ``-i sqrt|sinh 2r|``. Only raising operators act
    on the vacuum, so every component below the cutoff is exact.
    """
    if r == 0:
        raise ValueError("closed form is singular at r = 0; the state is |n>")
    if not 0 <= n < alg.block:
        raise ValueError(f"level {n} must lie below the guard band (N - G = {alg.block})")
    coeffs = [complex(float(c)) for c in hermite_deformed(n, alg.p).coeffs]
    s2r = math.sinh(2 * r)
    # r < 0: the principal root of sinh 2r is off by (-1)^n overall; take the other root
    root = cmath.sqrt(s2r) if r > 0 else -1j * math.sqrt(-s2r)
    chi_scale = 1 / (1j * root)
    base = squeezed_vacuum_series(r, alg)
    ad = alg.adag_matrix
    acc = np.zeros(alg.dim, dtype=complex)
    for c in reversed(coeffs):
        acc = chi_scale * (ad @ acc) + c * base
    pref = (
        (1 / math.cosh(r)) ** (alg.p / 2)
        * complex(-math.tanh(r) / 2) ** (n / 2)
        / math.sqrt(bracket_factorial(n, alg.p))
    )
    return SqueezedNumberState(n, SqueezeParams.real(r), pref * acc)


def _weighted_norm(vec: np.ndarray, n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    # per-level weights [m+1]...[m+n] and each level's share of ||a+^n v||^2
    dim = vec.shape[0]
    weight = np.ones(dim)
    for j in range(1, n + 1):
        weight *= [bracket(m + j, p) for m in range(dim)]
    return weight, np.abs(vec) ** 2 * weight


def excitation_norm(n: int, r: float, alg: ParaAlgebra, tol: float = 1e-8) -> ExcitationNorm:
    """Squared norm of ``a+^n S(r)|0>``, brute force versus closed form.

    The brute-force value applies the raising operator ``n`` times to the
    truncated squeezed vacuum inside a basis extended by ``n`` levels, so
    nothing is pushed off the top. The share of the result that originates
    in the guard band must stay below ``tol``.
    """
    if not 0 <= n < alg.block:
        raise ValueError(f"n={n} must lie below the guard band (N - G = {alg.block})")
    vac = expm_multiply(_sparse_generator(complex(r), alg), alg.number_state(0))
    ext = build_algebra(alg.p, alg.dim + n + 1)
    w = np.zeros(ext.dim, dtype=complex)
    w[: alg.dim] = vac
    for _ in range(n):
        w = ext.adag_matrix @ w
    numeric = float(np.vdot(w, w).real)
    _, contrib = _weighted_norm(vac, n, alg.p)
    leak = float(contrib[alg.block :].sum()) / numeric
    if leak > tol:
        need = suggest_dim(r, alg.p, n, tol, kind="norm")
        raise TruncationError(
            f"excitation norm n={n}, r={r:g}: {leak:.3g} of the weight comes from the guard "
            f"band; use N >= {need}",
            required_dim=need,
        )
    ch = math.cosh(r)
    closed = bracket_factorial(n, alg.p) * ch**n * eval_poly(legendre_deformed(n, alg.p), ch).real
    return ExcitationNorm(n, r, alg.p, numeric, float(closed))


def excitation_norm_recursion(n_max: int, r: float, p: int) -> list[float]:
    """Norms from the two-term recursion

    ``N_n = cosh^2 r ([2n-1] N_(n-1) - [n-1]^2 N_(n-2))``, ``N_0 = 1``.
    """
    c2 = math.cosh(r) ** 2
    out = [1.0]
    for n in range(1, n_max + 1):
        prev2 = out[n - 2] if n >= 2 else 0.0
        out.append(c2 * (bracket(2 * n - 1, p) * out[n - 1] - bracket(n - 1, p) ** 2 * prev2))
    return out


def squeezed_vacuum_eigenrelation_check(r: float, alg: ParaAlgebra, tol: float = 1e-8) -> Report:
    """``(a + tanh r a+) S(r)|0> = 0`` on the leading ``N - G`` components."""
    vac = expm_multiply(_sparse_generator(complex(r), alg), alg.number_state(0))
    res = (alg.a_matrix + math.tanh(r) * alg.adag_matrix) @ vac
    dev = float(np.linalg.norm(res[: alg.block]))
    return Report({"(a + tanh r a+)|0,r> = 0": dev}, tol, params={"p": alg.p, "N": alg.dim, "r": r})


def suggest_dim(r: float, p: int, n: int, tol: float = 1e-8, kind: str = "state", start: int = 32) -> int:
    """Smallest basis size (default guard) passing the leakage test.

    ``kind="state"`` tests ``S(r)|n>``; ``kind="norm"`` tests the guard-band
    share of ``||a+^n S(r)|0>||^2``. The search grows N by 16 levels.
    """
    dim = max(start, 4 * (n + 2))
    while True:
        alg = build_algebra(p, dim, default_guard(dim))
        if n < alg.block:
            gen = _sparse_generator(complex(r), alg)
            if kind == "state":
                vec = expm_multiply(gen, alg.number_state(n))
                if _guard_leak(vec, alg) <= tol * 1e-2:
                    return dim
            elif kind == "norm":
                vac = expm_multiply(gen, alg.number_state(0))
                _, contrib = _weighted_norm(vac, n, p)
                if contrib[alg.block :].sum() <= tol * 1e-2 * contrib.sum():
                    return dim
            else:
                raise ValueError(f"unknown kind {kind!r}")
        dim += 16
