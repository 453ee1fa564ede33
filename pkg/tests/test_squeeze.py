import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from parabose import squeeze as S
from parabose.algebra import build_algebra
from parabose.report import TruncationError

orders = st.integers(1, 4)


def _taylor_expm(m, terms=200):
    out = np.eye(m.shape[0], dtype=complex)
    term = out.copy()
    for k in range(1, terms):
        term = term @ m / k
        out = out + term
    return out


@given(orders, st.integers(4, 16), st.complex_numbers(max_magnitude=1.0))
def test_expm_matches_taylor_oracle(p, dim, z):
    alg = build_algebra(p, dim, guard=2)
    gen = S.squeeze_generator(z, alg)
    assert np.abs(S.squeeze_operator(z, alg, check=False) - _taylor_expm(gen)).max() < 1e-12


@given(orders, st.complex_numbers(max_magnitude=2.0))
def test_generator_anti_hermitian_and_operator_unitary(p, z):
    alg = build_algebra(p, 24)
    gen = S.squeeze_generator(z, alg)
    assert np.abs(gen + gen.conj().T).max() < 1e-14
    s = S.squeeze_operator(z, alg, check=False)
    assert np.abs(s.conj().T @ s - np.eye(24)).max() < 1e-12


@given(orders, st.complex_numbers(max_magnitude=1.0))
def test_parity_preserved(p, z):
    assert S.parity_mixing(S.squeeze_operator(z, build_algebra(p, 20), check=False)) == 0


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("r", [0.2, 0.5, 1.0])
def test_disentangled_product_matches_converged_exponential(p, r):
    alg = build_algebra(p, 64, 8)
    ref = build_algebra(p, S.suggest_dim(r, p, 64, 1e-10))
    s_ref = S.squeeze_operator(S.SqueezeParams.imaginary(r), ref, check=False)
    prod = S.disentangled_squeeze(r, alg)
    m = alg.block
    assert np.abs(s_ref[:m, :m] - prod[:m, :m]).max() < 1e-8
    assert abs(prod[0, 0] - (1 / math.cosh(r)) ** (p / 2)) < 1e-12


def test_truncated_exponential_is_flagged():
    alg = build_algebra(2, 64, 8)
    with pytest.raises(TruncationError):
        S.squeeze_operator(S.SqueezeParams.imaginary(1.0), alg)
    blocks = [S.trusted_block(S.SqueezeParams.imaginary(r), alg, 1e-9) for r in (0.05, 0.5, 1.0)]
    assert blocks == sorted(blocks, reverse=True)
    assert blocks[-1] < alg.block


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("r", [0.3, -0.4])
def test_closed_form_number_states(p, r):
    alg = build_algebra(p, S.suggest_dim(abs(r), p, 8))
    for n in range(9):
        num = S.squeezed_number_state_numeric(n, r, alg).vector
        closed = S.squeezed_number_state_closed(n, r, alg).vector
        assert np.abs(num - closed)[: alg.block].max() < 1e-9


def test_closed_form_rejects_zero_squeeze():
    with pytest.raises(ValueError):
        S.squeezed_number_state_closed(2, 0.0, build_algebra(2, 32))


def test_number_state_leak_diagnostic():
    alg = build_algebra(2, 32)
    with pytest.raises(TruncationError) as info:
        S.squeezed_number_state_numeric(10, 1.0, alg)
    assert info.value.required_dim > 32


@given(orders, st.floats(-0.8, 0.8).filter(lambda v: abs(v) > 1e-3))
def test_squeezed_vacuum_series(p, r):
    alg = build_algebra(p, S.suggest_dim(abs(r), p, 0))
    vac = S.squeezed_number_state_numeric(0, r, alg).vector
    series = (1 / math.cosh(r)) ** (p / 2) * S.squeezed_vacuum_series(r, alg)
    assert np.abs(vac - series)[: alg.block].max() < 1e-10
    assert S.squeezed_vacuum_eigenrelation_check(r, alg).passed


@given(orders, st.floats(0.05, 0.8))
def test_excitation_norms(p, r):
    alg = build_algebra(p, S.suggest_dim(r, p, 6, kind="norm"))
    rec = S.excitation_norm_recursion(6, r, p)
    for n in range(7):
        e = S.excitation_norm(n, r, alg)
        assert e.rel_diff < 1e-9
        assert abs(rec[n] - e.closed_form) < 1e-10 * e.closed_form
    assert abs(S.excitation_norm(1, r, alg).closed_form - p * math.cosh(r) ** 2) < 1e-12


def test_excitation_norm_record_fields():
    rec = S.excitation_norm(1, 0.5, build_algebra(3, 64)).to_record()
    assert list(rec) == ["p", "n", "r", "numeric", "closed_form", "abs_diff", "rel_diff"]
    assert abs(rec["closed_form"] - 3 * math.cosh(0.5) ** 2) < 1e-14


@pytest.mark.parametrize("p", [1, 2, 3])
def test_bogoliubov(p):
    r = 0.5
    alg = build_algebra(p, S.suggest_dim(r, p, 10))
    assert S.bogoliubov_check(r, alg, cols=11).passed


def test_squeeze_params_validation():
    with pytest.raises(ValueError):
        S.SqueezeParams(complex(float("inf"), 0))
    assert S.SqueezeParams.imaginary(0.3).z == -0.3j
    assert S.SqueezeParams.real(-0.3).r == 0.3
