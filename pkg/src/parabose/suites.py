"""Verification suites behind ``parabose verify``.

Each suite runs every invariant of one module for one configuration point
and returns a flat list of :class:`CheckResult`. The ``anchor`` field names
the identity family a check belongs to, so a failure can be traced back
without reading the code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy.polys.orthopolys import hermite_poly, legendre_poly

from . import algebra, amplifier, polynomials, squeeze
from .report import CheckResult, Report, TruncationError

SCOPES = ("algebra", "polynomials", "squeeze", "amplifier")


@dataclass
class SuiteConfig:
    p_list: list[int] = field(default_factory=lambda: [2])
    dim: int = 64
    guard: int | None = 8
    tol: float = 1e-8
    nmax: int = 15
    r: float = 0.5
    n_states: int = 10
    n_norms: int = 12
    omega: float = 1.0
    k: float = 0.2
    ode_tol: float = 1e-10
    auto_dim: bool = True


def _from_report(check: str, anchor: str, rep: Report) -> CheckResult:
    params = dict(rep.params)
    if not rep.passed:
        params["failing"] = rep.failures()
        if rep.details:
            params["details"] = rep.details[:5]
    return CheckResult(check, anchor, rep.passed, rep.max_deviation, params)


def _result(check: str, anchor: str, dev: float, tol: float, **params) -> CheckResult:
    return CheckResult(check, anchor, bool(dev <= tol), float(dev), params)


# -- algebra -----------------------------------------------------------------


def _exact_deformed_exp(x: Fraction, p: int, terms: int = 120) -> float:
    total = Fraction(0)
    term = Fraction(1)
    for n in range(terms):
        total += term
        term = term * x / algebra.bracket(n + 1, p)
    return float(total)


def algebra_suite(p: int, cfg: SuiteConfig) -> list[CheckResult]:
    alg = algebra.build_algebra(p, cfg.dim, cfg.guard)
    out = []
    bad = [(n, q) for q in range(1, 6) for n in range(1, 51) if not algebra.bracket_identity_check(n, q)]
    bad += [(n, p) for n in range(1, 51) if not algebra.bracket_identity_check(n, p)]
    out.append(CheckResult("bracket identity", "bracket-odd-sum", not bad, float(len(bad)), {"n_max": 50}))

    out.append(_from_report("trilinear and R-deformed relations", "trilinear-relations",
                            algebra.verify_trilinear(alg, 1e-12)))  # fmt: skip
    out.append(_from_report("commutators with powers", "ladder-power-commutators",
                            algebra.commutator_power_check(alg, 6, 1e-12)))  # fmt: skip
    out.append(_from_report("su(1,1) relations", "su11-algebra", algebra.su11_check(alg, 1e-12)))

    n = np.arange(alg.dim)
    vac = alg.a_matrix @ alg.adag_matrix @ alg.number_state(0)
    out.append(_result("vacuum relation aa+|0> = p|0>", "fock-vacuum",
                       float(np.abs(vac - p * alg.number_state(0)).max()), 1e-14, p=p))  # fmt: skip
    k0 = algebra.su11_generators(alg)[2]
    out.append(_result("K0 spectrum (2n+p)/4", "su11-algebra",
                       float(np.abs(np.diag(k0) - (2 * n + p) / 4).max()), 1e-15, p=p))  # fmt: skip

    # error scaled by (|E| + 1): alternating series at negative x lose relative accuracy
    devs = []
    for x in (Fraction(1, 2), Fraction(2), Fraction(-3), Fraction(7)):
        ref = _exact_deformed_exp(x, p)
        devs.append(abs(algebra.deformed_exp(float(x), p) - ref) / (abs(ref) + 1))
    if p == 1:
        for x in np.linspace(-10, 10, 21):
            devs.append(abs(algebra.deformed_exp(x, 1) - math.exp(x)) / (math.exp(x) + 1))
    out.append(_result("deformed exponential", "deformed-exponential", max(devs), 1e-12, p=p))

    z = 0.5 + 0.3j
    v = algebra.coherent_state(z, alg, 1e-14)
    eig = float(np.abs((alg.a_matrix @ v - z * v)[: alg.block]).max())
    nrm = abs(np.linalg.norm(v) - 1)
    z0 = 0.3j
    ov = abs(np.vdot(algebra.coherent_state(0.5, alg, 1e-14), algebra.coherent_state(z0, alg, 1e-14))
             - algebra.coherent_overlap(0.5, z0, p))  # fmt: skip
    out.append(_result("coherent state eigenvector and norm", "coherent-state", max(eig, nrm, ov), 1e-12,
                       p=p, z=str(z)))  # fmt: skip
    big = algebra.build_algebra(p, 2 * cfg.dim)
    conv = float(np.abs(algebra.coherent_state(z, big, 1e-14)[: alg.dim] - v).max())
    out.append(_result("coherent state truncation convergence", "coherent-state", conv, 1e-12, p=p))
    return out


# -- polynomials -------------------------------------------------------------


def _poly_dev(f: polynomials.ExactPoly, g: polynomials.ExactPoly) -> float:
    d = f - g
    return float(max((abs(c) for c in d.coeffs), default=0))


def polynomial_suite(p, cfg: SuiteConfig) -> list[CheckResult]:
    q = Fraction(p)
    nmax = cfg.nmax
    out = []
    for family, closed, rec, rod in (
        ("hermite", polynomials.hermite_deformed, polynomials.hermite_via_recursion, polynomials.hermite_rodrigues),
        ("legendre", polynomials.legendre_deformed, polynomials.legendre_via_recursion, polynomials.legendre_rodrigues),
    ):
        dev_rec = dev_rod = 0.0
        parity = 0.0
        for n in range(nmax + 1):
            f = closed(n, q)
            dev_rec = max(dev_rec, _poly_dev(f, rec(n, q)))
            try:
                dev_rod = max(dev_rod, _poly_dev(f, rod(n, q)))
            except ArithmeticError:
                dev_rod = math.inf
            parity = max(parity, float(f.parity_defect(n)))
        out.append(_result(f"{family}: closed form = three-term recursion", f"{family}-recursion", dev_rec, 0.0,
                           p=str(q), n_max=nmax))  # fmt: skip
        out.append(_result(f"{family}: closed form = differential form", f"{family}-differential-form", dev_rod,
                           0.0, p=str(q), n_max=nmax))  # fmt: skip
        out.append(_result(f"{family}: parity", f"{family}-closed-form", parity, 0.0, p=str(q), n_max=nmax))
        ode = max(_poly_dev(polynomials.ode_residual(family, n, q), polynomials.ExactPoly((), q))
                  for n in range(nmax + 1))  # fmt: skip
        out.append(_result(f"{family}: deformed ODE residual", f"{family}-ode", ode, 0.0, p=str(q), n_max=nmax))

    dev_classical = 0.0
    for n in range(nmax + 1):
        for ours, ref in (
            (polynomials.hermite_deformed(n, 1), hermite_poly(n, polys=True)),
            (polynomials.legendre_deformed(n, 1), legendre_poly(n, polys=True)),
        ):
            ref_coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(ref.all_coeffs())]
            dev_classical = max(dev_classical, _poly_dev(ours, polynomials.ExactPoly(tuple(ref_coeffs))))
    out.append(_result("p = 1 reduces to classical families", "classical-limit", dev_classical, 0.0, n_max=nmax))

    out.append(_from_report("neighbour derivative relations", "derivative-recursions",
                            polynomials.derivative_recursion_checks(max(nmax, 2), q)))  # fmt: skip
    out.append(_from_report("Hermite generating function", "hermite-generating-function",
                            polynomials.hermite_generating_check(q, 12)))  # fmt: skip

    mono = 0.0
    for n in range(31):
        xn = polynomials.ExactPoly.monomial(n, q)
        expect = polynomials.ExactPoly.monomial(n - 1, q, polynomials.bracket_q(n, q)) if n else polynomials.ExactPoly((), q)
        mono = max(mono, _poly_dev(polynomials.deformed_derivative_two_term(xn), expect),
                   _poly_dev(polynomials.deformed_derivative(xn), expect))  # fmt: skip
    out.append(_result("deformed derivative monomial rule", "deformed-derivative", mono, 0.0, p=str(q), n_max=30))
    return out


# -- squeeze -----------------------------------------------------------------


def _algebra_for(p: int, cfg: SuiteConfig, need: int | None) -> algebra.ParaAlgebra:
    if need is not None and cfg.auto_dim and need > cfg.dim:
        return algebra.build_algebra(p, need)
    return algebra.build_algebra(p, cfg.dim, cfg.guard)


def squeeze_suite(p: int, cfg: SuiteConfig) -> list[CheckResult]:
    r = cfg.r
    tol = cfg.tol
    alg = algebra.build_algebra(p, cfg.dim, cfg.guard)
    out = []

    s_real = squeeze.squeeze_operator(squeeze.SqueezeParams.real(r), alg, check=False)
    m = alg.block
    unit = float(np.abs(s_real.conj().T @ s_real - np.eye(alg.dim))[:m, :m].max())
    out.append(_result("unitarity of S(r)", "squeeze-operator", unit, tol, p=p, N=alg.dim, r=r))
    out.append(_result("S(z) keeps even and odd levels apart", "squeeze-operator",
                       squeeze.parity_mixing(squeeze.squeeze_operator(complex(0.3 * r, 0.1), alg, check=False)),
                       0.0, p=p, N=alg.dim))  # fmt: skip

    prm = squeeze.SqueezeParams.imaginary(r)
    block = squeeze.trusted_block(prm, alg, tol * 0.1)
    s_im = squeeze.squeeze_operator(prm, alg, check=False)
    prod = squeeze.disentangled_squeeze(r, alg)
    dis = float(np.abs(s_im - prod)[:block, :block].max()) if block else math.inf
    out.append(_result("disentangled product = exponential (trusted block)", "disentangling", dis, tol,
                       p=p, N=alg.dim, r=r, block=block))  # fmt: skip
    ref_dim = squeeze.suggest_dim(abs(r), p, alg.dim, tol)
    s_ref = squeeze.squeeze_operator(prm, algebra.build_algebra(p, ref_dim), check=False)
    dis_full = float(np.abs(s_ref[:m, :m] - prod[:m, :m]).max())
    out.append(_result("disentangled product = converged exponential", "disentangling", dis_full, tol,
                       p=p, N=alg.dim, reference_N=ref_dim, block=m))  # fmt: skip
    vac = abs(prod[0, 0] - (1 / math.cosh(r)) ** (p / 2))
    out.append(_result("vacuum amplitude (sech r)^(p/2)", "disentangling", vac, 1e-9, p=p, r=r))


    st_alg = _algebra_for(p, cfg, squeeze.suggest_dim(abs(r), p, cfg.n_states, tol))
    worst = 0.0
    numeric = []
    for n in range(cfg.n_states + 1):
        a = squeeze.squeezed_number_state_numeric(n, r, st_alg, tol).vector
        numeric.append(a)
        if r != 0:
            b = squeeze.squeezed_number_state_closed(n, r, st_alg).vector
            worst = max(worst, float(np.abs(a - b)[: st_alg.block].max()))
    out.append(_result("squeezed number states: Hermite closed form", "squeezed-number-states", worst, tol,
                       p=p, N=st_alg.dim, r=r, n_max=cfg.n_states))  # fmt: skip
    nm = min(6, cfg.n_states)
    gram = np.array([[np.vdot(numeric[i], numeric[j]) for j in range(nm + 1)] for i in range(nm + 1)])
    out.append(_result("orthonormality of squeezed number states", "squeezed-number-states",
                       float(np.abs(gram - np.eye(nm + 1)).max()), tol, p=p, N=st_alg.dim, n_max=nm))  # fmt: skip

    nr_alg = _algebra_for(p, cfg, squeeze.suggest_dim(abs(r), p, cfg.n_norms, tol, kind="norm"))
    norms = [squeeze.excitation_norm(n, r, nr_alg, tol) for n in range(cfg.n_norms + 1)]
    out.append(_result("excitation norms: Legendre closed form", "excitation-norms",
                       max(x.rel_diff for x in norms), tol, p=p, N=nr_alg.dim, r=r, n_max=cfg.n_norms))  # fmt: skip
    first = abs(norms[1].closed_form - p * math.cosh(r) ** 2) / (p * math.cosh(r) ** 2)
    out.append(_result("first excitation norm p cosh^2 r", "excitation-norms", first, 1e-14, p=p, r=r))
    rec = squeeze.excitation_norm_recursion(cfg.n_norms, r, p)
    out.append(_result("excitation norm recursion", "excitation-norms",
                       max(abs(rec[n] - x.numeric) / x.numeric for n, x in enumerate(norms)), tol, p=p, r=r))  # fmt: skip
    out.append(_from_report("Bogoliubov transformation", "bogoliubov",
                            squeeze.bogoliubov_check(r, st_alg, tol, cols=cfg.n_states + 1)))  # fmt: skip
    out.append(_from_report("squeezed vacuum eigenrelation", "squeezed-vacuum",
                            squeeze.squeezed_vacuum_eigenrelation_check(r, st_alg, tol)))  # fmt: skip
    return out


# -- amplifier ---------------------------------------------------------------

DEFAULT_LABELS = (0.0, 0.3, 0.5j)


def amplifier_suite(p: int, cfg: SuiteConfig) -> list[CheckResult]:
    t0 = 0.25
    base = amplifier.AmplifierConfig(cfg.omega, cfg.k, t0, t0 + 1.0, p, cfg.dim, cfg.guard, cfg.ode_tol)
    alg = base.algebra()
    out = []
    herm = 0.0
    for tc in (0.0, 0.37, 1.9):
        h = amplifier.hamiltonian_schrodinger(tc, base, alg)
        herm = max(herm, float(np.abs(h - h.conj().T).max()))
    out.append(_result("Hermiticity of H_S(t)", "schrodinger-hamiltonian", herm, 0.0, p=p))

    conj = float(np.abs(amplifier.hamiltonian_interaction(0.7, base, alg)
                        - amplifier.hamiltonian_interaction_conjugated(0.7, base, alg))[: alg.block, : alg.block].max())  # fmt: skip
    out.append(_result("interaction picture Hamiltonian", "interaction-picture", conj, 1e-10, p=p))

    times = [t0, t0 + 0.5, t0 + 1.0]
    samples = amplifier.propagator_scan(DEFAULT_LABELS, DEFAULT_LABELS, times, base, alg)
    out.append(_result("propagator: closed form = ODE", "propagator", max(s.abs_diff for s in samples), 1e-6,
                       p=p, N=alg.dim, samples=len(samples)))  # fmt: skip
    bnd = max(abs(s.analytic - algebra.coherent_overlap(s.z, s.z0, p))
              + abs(s.numeric - algebra.coherent_overlap(s.z, s.z0, p)) for s in samples if s.t == t0)  # fmt: skip
    out.append(_result("propagator at t = t0 is the coherent overlap", "propagator", bnd, 1e-10, p=p))

    free = amplifier.AmplifierConfig(cfg.omega, 0.0, t0, t0 + 0.8, p, cfg.dim, cfg.guard, cfg.ode_tol)
    z, z0 = 0.3 + 0.1j, 0.4j
    dt = free.t - free.t0
    expect = np.exp(-0.5j * p * cfg.omega * dt) * algebra.coherent_overlap(z, z0 * np.exp(-1j * cfg.omega * dt), p)
    out.append(_result("free evolution rotates coherent labels", "propagator",
                       abs(amplifier.propagator_numeric(z, z0, free, alg) - expect), 1e-8, p=p))  # fmt: skip

    pic = amplifier.picture_equivalence_check(base.at(t0 + 0.8), alg, 1e-6)
    out.append(_from_report("picture equivalence", "picture-transformation", pic))

    psi = amplifier.evolve_schrodinger(base, alg, algebra.coherent_state(0.5j, alg))
    out.append(_result("norm preservation", "schrodinger-evolution", abs(np.linalg.norm(psi) - 1),
                       10 * cfg.ode_tol, p=p))  # fmt: skip

    der = amplifier.squeeze_derivative_check(0.4, alg)
    out.append(_from_report("dS/dr generator relation", "squeeze-derivative", der))
    return out


SUITES = {
    "algebra": algebra_suite,
    "polynomials": polynomial_suite,
    "squeeze": squeeze_suite,
    "amplifier": amplifier_suite,
}


def run(scope: str, cfg: SuiteConfig) -> list[CheckResult]:
    """Run one scope (or ``"all"``) for every configured order."""
    scopes = SCOPES if scope == "all" else (scope,)
    out: list[CheckResult] = []
    for s in scopes:
        if s not in SUITES:
            raise ValueError(f"unknown scope {s!r}")
        for p in cfg.p_list:
            try:
                results = SUITES[s](p, cfg)
            except TruncationError as exc:
                results = [CheckResult(f"{s} suite", "truncation", False, math.inf, {"p": p, "error": str(exc)})]
            for res in results:
                res.params.setdefault("scope", s)
                res.params.setdefault("p", p)
            out.extend(results)
    return out
