import numpy as np
import pytest
from hypothesis import given

from cohcorr.errors import NotPSDError, ValidationError
from cohcorr.linalg import (
    check_hermitian,
    commutator,
    expm_antihermitian,
    floor_spectrum,
    hermitian_eig,
    is_unitary,
    kron,
    partial_trace,
    psd_sqrt,
    random_haar_unitary,
)
from strategies import random_hermitian, rng_of, seeds, small_dims


def _partial_trace_loops(m, d_a, d_b, keep):
    # index bookkeeping written out by hand, |i>|j> -> i * d_b + j
    if keep == "a":
        out = np.zeros((d_a, d_a), complex)
        for i in range(d_a):
            for k in range(d_a):
                out[i, k] = sum(m[i * d_b + j, k * d_b + j] for j in range(d_b))
    else:
        out = np.zeros((d_b, d_b), complex)
        for j in range(d_b):
            for l in range(d_b):
                out[j, l] = sum(m[i * d_b + j, i * d_b + l] for i in range(d_a))
    return out


@given(seeds, small_dims, small_dims)
def test_partial_trace_matches_loops(seed, d_a, d_b):
    rng = rng_of(seed)
    m = random_hermitian(d_a * d_b, rng)
    for keep in ("a", "b"):
        assert np.allclose(partial_trace(m, d_a, d_b, keep), _partial_trace_loops(m, d_a, d_b, keep), atol=1e-12)


@given(seeds, small_dims, small_dims)
def test_partial_trace_of_product(seed, d_a, d_b):
    rng = rng_of(seed)
    a, b = random_hermitian(d_a, rng), random_hermitian(d_b, rng)
    m = kron(a, b)
    assert np.allclose(partial_trace(m, d_a, d_b, "a"), a * np.trace(b), atol=1e-10)
    assert np.allclose(partial_trace(m, d_a, d_b, "b"), b * np.trace(a), atol=1e-10)


def test_kron_is_a_major():
    e = np.eye(3)
    f = np.eye(2)
    v = kron(e[:, [2]], f[:, [1]])
    assert v[2 * 2 + 1, 0] == 1
    assert np.count_nonzero(v) == 1


def test_partial_trace_rejects_bad_split():
    with pytest.raises(ValidationError):
        partial_trace(np.eye(5), 2, 2)
    with pytest.raises(ValidationError):
        partial_trace(np.eye(4), 2, 2, keep="c")


@given(seeds, small_dims)
def test_psd_sqrt_squares_back(seed, d):
    rng = rng_of(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    r = psd_sqrt(m)
    assert np.allclose(r @ r, m, atol=1e-9 * max(1, np.abs(m).max()))
    assert np.allclose(r, r.conj().T)
    assert np.linalg.eigvalsh(r).min() > -1e-12


def test_psd_sqrt_rejects_negative():
    with pytest.raises(NotPSDError) as err:
        psd_sqrt(np.diag([1.0, -1e-3]))
    assert err.value.eigenvalue == pytest.approx(-1e-3)


def test_psd_sqrt_tolerates_roundoff():
    r = psd_sqrt(np.diag([1.0, -1e-12]))
    assert np.allclose(r, np.diag([1.0, 0.0]))


def test_floor_spectrum():
    w = floor_spectrum(np.array([-1e-15, 3e-16, 1e-10, 0.5]))
    assert list(w[:2]) == [0.0, 0.0]
    assert w[2] == 1e-10


def test_check_hermitian_reports_residual():
    with pytest.raises(ValidationError, match="residual|M - M"):
        check_hermitian(np.array([[0, 1], [0, 0]]))


@given(seeds, small_dims)
def test_hermitian_eig_reconstructs(seed, d):
    m = random_hermitian(d, rng_of(seed))
    spec = hermitian_eig(m)
    assert np.all(np.diff(spec.eigenvalues) >= 0)
    assert np.allclose(spec.reconstruct(), m, atol=1e-10)


@given(seeds, small_dims)
def test_haar_unitary_is_unitary(seed, d):
    assert is_unitary(random_haar_unitary(d, seed), 1e-10)


def test_haar_unitary_first_moment():
    # E|U_00|^2 = 1/d under the Haar measure
    d, n = 3, 4000
    rng = np.random.default_rng(0)
    from cohcorr.linalg import haar_unitary_from_rng
    vals = [abs(haar_unitary_from_rng(d, rng)[0, 0]) ** 2 for _ in range(n)]
    assert abs(np.mean(vals) - 1 / d) < 4 * np.std(vals) / np.sqrt(n)


def _expm_taylor(a, terms=60):
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ a / k
        out = out + term
    return out


@given(seeds, small_dims)
def test_expm_antihermitian_vs_taylor(seed, d):
    h = random_hermitian(d, rng_of(seed))
    h = h / max(1.0, np.linalg.norm(h, 2))
    assert np.allclose(expm_antihermitian(h), _expm_taylor(-1j * h), atol=1e-12)


def test_commutator():
    from cohcorr.linalg import PAULI_X, PAULI_Y, PAULI_Z
    assert np.allclose(commutator(PAULI_X, PAULI_Y), 2j * PAULI_Z)
    with pytest.raises(ValidationError):
        commutator(np.eye(2), np.eye(3))
