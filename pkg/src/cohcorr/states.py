"""Validated density matrices, bipartite structure and random ensembles."""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import as_matrix, haar_unitary_from_rng, hermiticity_residual, partial_trace
from .measurements import LuedersMeasurement

STATE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, PSD, unit-trace matrix. Construct via ``density_from_matrix``."""

    matrix: np.ndarray

    @property
    def dim(self):
        return self.matrix.shape[0]

    def eigenvalues(self, clipped=True):
        w = np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)
        return np.clip(w, 0.0, None) if clipped else w

    def purity(self):
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True, eq=False)
class BipartiteState:
    state: DensityMatrix
    d_a: int
    d_b: int

    def __post_init__(self):
        if self.d_a < 1 or self.d_b < 1 or self.d_a * self.d_b != self.state.dim:
            raise ValidationError(
                f"dims {self.d_a} x {self.d_b} do not match state dimension {self.state.dim}")

    @property
    def matrix(self):
        return self.state.matrix

    @property
    def dim(self):
        return self.state.dim

    @property
    def degenerate(self):
        return self.d_a < 2

    def reduced(self, keep):
        return DensityMatrix(partial_trace(self.matrix, self.d_a, self.d_b, keep))


def density_from_matrix(raw, tol=STATE_TOL):
    """Validate ``raw`` as a density matrix; the array is stored unmodified."""
    m = as_matrix(raw)
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"state matrix is not square: shape {m.shape}")
    herm = hermiticity_residual(m)
    if herm > tol:
        raise ValidationError(f"state is not Hermitian: residual {herm:.3e} > {tol:g}")
    w = np.linalg.eigvalsh((m + m.conj().T) / 2)
    if w[0] < -tol:
        raise ValidationError(f"state is not PSD: eigenvalue {w[0]:.6g} < -{tol:g}")
    tr = np.trace(m)
    if abs(tr - 1) > tol:
        raise ValidationError(f"state trace is {tr.real:.12g}, |tr - 1| = {abs(tr - 1):.3e} > {tol:g}")
    return DensityMatrix(m)


def _clean(m):
    """Symmetrize and renormalize a matrix built by exact algebra from valid states."""
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real)


def bipartite(rho, d_a, d_b):
    if not isinstance(rho, DensityMatrix):
        rho = density_from_matrix(rho)
    return BipartiteState(rho, int(d_a), int(d_b))


def pure_from_vector(v):
    v = np.asarray(v, dtype=complex).ravel()
    n = np.linalg.norm(v)
    if v.size == 0 or n == 0:
        raise ValidationError("cannot build a pure state from the zero vector")
    v = v / n
    return DensityMatrix(np.outer(v, v.conj()))


def haar_vector(d, rng):
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def random_haar_pure(d, seed):
    if d < 1:
        raise ValidationError(f"dimension must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    return pure_from_vector(haar_vector(d, rng))


def mixed_from_rng(d, k, rng):
    """Induced-measure state: trace out a k-dim environment of a Haar pure state."""
    psi = haar_vector(d * k, rng).reshape(d, k)
    return _clean(psi @ psi.conj().T)


def random_mixed_induced(d, k, seed):
    if d < 1 or k < 1:
        raise ValidationError(f"d and k must be >= 1, got d={d}, k={k}")
    return mixed_from_rng(d, k, np.random.default_rng(seed))


def dephase(rho, measurement):
    """Non-selective measurement: sum_i P_i rho P_i."""
    m = rho.matrix if isinstance(rho, (DensityMatrix, BipartiteState)) else as_matrix(rho)
    if m.shape[0] != measurement.dim:
        raise ValidationError(f"state dimension {m.shape[0]} != measurement dimension {measurement.dim}")
    if isinstance(measurement, LuedersMeasurement):
        d_a, d_b = measurement.d_a, measurement.d_b
        u = np.kron(measurement.a_measurement.basis, np.eye(d_b))
        t = (u.conj().T @ m @ u).reshape(d_a, d_b, d_a, d_b)
        mask = np.eye(d_a)[:, None, :, None]
        out = u @ (t * mask).reshape(d_a * d_b, d_a * d_b) @ u.conj().T
    else:
        u = measurement.basis
        t = u.conj().T @ m @ u
        out = u @ np.diag(np.diagonal(t)) @ u.conj().T
    out = (out + out.conj().T) / 2
    if isinstance(rho, BipartiteState):
        return BipartiteState(DensityMatrix(out), rho.d_a, rho.d_b)
    return DensityMatrix(out)


def product_state(rho_a, rho_b):
    return BipartiteState(DensityMatrix(np.kron(rho_a.matrix, rho_b.matrix)), rho_a.dim, rho_b.dim)


def attach_ancilla(rho_a, d_b):
    """rho_a tensor |0><0| on a d_b-dimensional ancilla."""
    if d_b < 1:
        raise ValidationError(f"d_b must be >= 1, got {d_b}")
    zero = np.zeros((d_b, d_b), dtype=complex)
    zero[0, 0] = 1
    return BipartiteState(DensityMatrix(np.kron(rho_a.matrix, zero)), rho_a.dim, int(d_b))


def _probabilities(p, tol=STATE_TOL):
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0 or np.any(p < -tol):
        raise ValidationError("probabilities must be non-negative")
    s = p.sum()
    if abs(s - 1) > tol:
        raise ValidationError(f"probabilities sum to {s:.12g}, not 1")
    return np.clip(p, 0, None) / s


def classical_quantum_state(p, a_basis, b_states):
    """sum_n p_n |phi_n><phi_n| (x) sigma_n with {phi_n} the columns of ``a_basis``."""
    p = _probabilities(p)
    b_states = list(b_states)
    if len(p) != len(b_states) or len(p) > a_basis.dim:
        raise ValidationError(
            f"need one b-state per probability and at most {a_basis.dim} terms; got {len(p)} and {len(b_states)}")
    d_b = b_states[0].dim
    if any(s.dim != d_b for s in b_states):
        raise ValidationError("b-states have inconsistent dimensions")
    m = sum(pn * np.kron(a_basis.projector(n), s.matrix) for n, (pn, s) in enumerate(zip(p, b_states)))
    return BipartiteState(_clean(m), a_basis.dim, d_b)


def is_partial_incoherent(rho, lueders, tol=1e-9):
    return bool(np.linalg.norm(dephase(rho, lueders).matrix - rho.matrix) <= tol)


def is_incoherent(rho, measurement, tol=1e-9):
    return bool(np.linalg.norm(dephase(rho, measurement).matrix - rho.matrix) <= tol)


def apply_unitary(rho, u):
    m = u @ rho.matrix @ u.conj().T
    if isinstance(rho, BipartiteState):
        return BipartiteState(_clean(m), rho.d_a, rho.d_b)
    return _clean(m)


def random_local_unitary_rng(d_a, d_b, rng):
    return np.kron(haar_unitary_from_rng(d_a, rng), haar_unitary_from_rng(d_b, rng))


def bell_state(d=2):
    """Maximally entangled (|00> + ... + |d-1 d-1>)/sqrt(d)."""
    v = np.zeros(d * d, dtype=complex)
    v[[i * d + i for i in range(d)]] = 1
    return BipartiteState(pure_from_vector(v), d, d)


def plus_state(d=2):
    return pure_from_vector(np.ones(d))


def mix(states, weights):
    """Convex combination of states sharing one shape (bipartite structure kept)."""
    weights = _probabilities(weights)
    m = sum(w * s.matrix for w, s in zip(weights, states))
    first = states[0]
    if isinstance(first, BipartiteState):
        return BipartiteState(_clean(m), first.d_a, first.d_b)
    return _clean(m)

