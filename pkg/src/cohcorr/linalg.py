"""Dense complex matrix helpers.

Matrices are plain ``numpy`` arrays of dtype complex128. Bipartite
composites use the a-major convention: basis vector |i>|j> sits at flat
index ``i * d_b + j``, which is what ``numpy.kron`` produces.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotPSDError, ValidationError

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
# eigenvalues this far below the spectral scale are indistinguishable from round-off
SPECTRAL_FLOOR = 1e-14

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m):
    """Coerce to a 2-d complex array, rejecting empty or ragged input."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"expected a non-empty 2-d matrix, got shape {a.shape}")
    return a


def check_square(m, name="matrix"):
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} is not square: shape {m.shape}")
    return m


def hermiticity_residual(m):
    return float(np.max(np.abs(m - m.conj().T)))


def check_hermitian(m, tol=HERMITIAN_TOL, name="matrix"):
    m = check_square(m, name)
    res = hermiticity_residual(m)
    if res > tol:
        raise ValidationError(f"{name} is not Hermitian: max|M - M^dag| = {res:.3e} > {tol:g}")
    return m


def hermitian_eig(m, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    m = check_hermitian(m, tol)
    h = (m + m.conj().T) / 2
    w, v = np.linalg.eigh(h)
    return SpectralDecomposition(w, v)


def floor_spectrum(w):
    """Clip negatives and zero eigenvalues below the round-off floor.

    Square roots amplify eigenvalue noise of order 1e-16 to about 1e-8, so
    this is applied before any sqrt-based functional.
    """
    w = np.clip(w, 0.0, None)
    scale = max(float(np.max(w, initial=0.0)), 1.0)
    return np.where(w <= SPECTRAL_FLOOR * scale, 0.0, w)


def psd_sqrt(m, tol=PSD_TOL, floor=False):
    """Principal square root of a PSD matrix.

    Eigenvalues in [-tol, 0) are treated as round-off and clipped; with
    ``floor`` tiny positive eigenvalues are zeroed as well.
    """
    spec = hermitian_eig(m)
    w = spec.eigenvalues
    if w[0] < -tol:
        raise NotPSDError(w[0], tol)
    v = spec.eigenvectors
    w = floor_spectrum(w) if floor else np.clip(w, 0.0, None)
    r = (v * np.sqrt(w)) @ v.conj().T
    return (r + r.conj().T) / 2


def kron(a, b):
    return np.kron(as_matrix(a), as_matrix(b))


def _keep_tag(keep):
    tag = str(keep).lower()
    if tag not in ("a", "b"):
        raise ValidationError(f"keep must be 'a' or 'b', got {keep!r}")
    return tag


def partial_trace(m, d_a, d_b, keep="a"):
    """Trace out one party of a (d_a*d_b)-dimensional operator."""
    m = check_square(m)
    if d_a < 1 or d_b < 1 or m.shape[0] != d_a * d_b:
        raise ValidationError(f"matrix of side {m.shape[0]} does not split as {d_a} x {d_b}")
    t = m.reshape(d_a, d_b, d_a, d_b)
    if _keep_tag(keep) == "a":
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def commutator(a, b):
    a = check_square(a)
    b = check_square(b)
    if a.shape != b.shape:
        raise ValidationError(f"commutator of mismatched shapes {a.shape} and {b.shape}")
    return a @ b - b @ a


def haar_unitary_from_rng(d, rng):
    """Haar unitary via QR of a Ginibre matrix with phase-fixed R diagonal."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_haar_unitary(d, seed):
    if d < 1:
        raise ValidationError(f"dimension must be >= 1, got {d}")
    return haar_unitary_from_rng(d, np.random.default_rng(seed))


def is_unitary(u, tol=1e-10):
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def expm_antihermitian(h):
    """exp(-i h) for Hermitian h, batched over leading axes."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w)[..., None, :]) @ np.swapaxes(v.conj(), -1, -2)
