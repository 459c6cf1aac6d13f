"""Rank-1 von Neumann measurements and their Lueders extensions."""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import HADAMARD, as_matrix, is_unitary

ORTHO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class VonNeumannMeasurement:
    """Projective measurement onto the columns of ``basis``.

    Projectors are derived on demand; only the basis is stored.
    """

    basis: np.ndarray
    tag: str = "custom"

    def __post_init__(self):
        b = as_matrix(self.basis)
        if b.shape[0] != b.shape[1]:
            raise ValidationError(f"basis matrix must be square, got {b.shape}")
        res = float(np.max(np.abs(b.conj().T @ b - np.eye(b.shape[0]))))
        if res > ORTHO_TOL:
            raise ValidationError(f"basis columns are not orthonormal: residual {res:.3e}")
        object.__setattr__(self, "basis", b)

    @property
    def dim(self):
        return self.basis.shape[0]

    def projector(self, i):
        v = self.basis[:, i]
        return np.outer(v, v.conj())

    def projectors(self):
        return [self.projector(i) for i in range(self.dim)]

    def to_basis(self, m):
        """Matrix elements of ``m`` in this basis."""
        return self.basis.conj().T @ m @ self.basis


@dataclass(frozen=True, eq=False)
class LuedersMeasurement:
    a_measurement: VonNeumannMeasurement
    d_b: int

    def __post_init__(self):
        if self.d_b < 1:
            raise ValidationError(f"d_b must be >= 1, got {self.d_b}")

    @property
    def d_a(self):
        return self.a_measurement.dim

    @property
    def dim(self):
        return self.d_a * self.d_b

    @property
    def tag(self):
        return f"lueders({self.a_measurement.tag}, d_b={self.d_b})"

    def projector(self, i):
        return np.kron(self.a_measurement.projector(i), np.eye(self.d_b))

    def projectors(self):
        return [self.projector(i) for i in range(self.d_a)]


def computational_basis(d):
    if d < 1:
        raise ValidationError(f"dimension must be >= 1, got {d}")
    return VonNeumannMeasurement(np.eye(d, dtype=complex), tag="computational")


def basis_from_unitary(u, tag="unitary"):
    u = as_matrix(u)
    if not is_unitary(u, ORTHO_TOL):
        raise ValidationError("matrix is not unitary within 1e-10")
    return VonNeumannMeasurement(u, tag=tag)


def qubit_basis_matrix(theta, phi):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    ph = np.exp(1j * phi)
    return np.array([[c, -s], [ph * s, ph * c]], dtype=complex)


def qubit_basis(theta, phi):
    """Basis {cos(t/2)|0> + e^{i p} sin(t/2)|1>, its orthogonal complement}."""
    return VonNeumannMeasurement(qubit_basis_matrix(theta, phi), tag=f"qubit(theta={theta:.6g}, phi={phi:.6g})")


def hadamard_basis():
    return VonNeumannMeasurement(HADAMARD.copy(), tag="hadamard")


def lueders_extend(m, d_b):
    return LuedersMeasurement(m, int(d_b))


def same_projectors(m1, m2, tol=1e-10):
    """True when two measurements define the same projector family (ignoring order)."""
    if m1.dim != m2.dim:
        return False
    overlap = np.abs(m1.basis.conj().T @ m2.basis) ** 2
    return bool(np.all(np.abs(np.sort(overlap, axis=1)[:, -1] - 1) <= tol))
