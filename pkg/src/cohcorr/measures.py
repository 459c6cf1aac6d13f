"""Entropy, skew information, quantum Fisher information and the coherence
measures built from them.

Entropies are in bits. QFI uses the normalization F = tr(rho L^2) / 4 with
(L rho + rho L) / 2 = i[rho, H], so that F equals the variance on pure states.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import check_hermitian, floor_spectrum
from .states import BipartiteState, dephase

NEG_CLIP = 1e-9
QFI_EPS = 1e-12


@dataclass(frozen=True)
class MeasureValue:
    value: float
    measure: str
    basis_tag: str

    def __post_init__(self):
        v = float(self.value)
        if -NEG_CLIP <= v < 0:
            v = 0.0
        object.__setattr__(self, "value", v)

    def __float__(self):
        return self.value

    def as_row(self):
        return {"measure": self.measure, "value": self.value, "basis_tag": self.basis_tag}


def _spectrum(rho):
    m = rho.matrix
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return floor_spectrum(w), v


def _check_operator(k, dim, name):
    k = check_hermitian(k, name=name)
    if k.shape[0] != dim:
        raise ValidationError(f"{name} has dimension {k.shape[0]}, state has {dim}")
    return k


def von_neumann_entropy(rho):
    w, _ = _spectrum(rho)
    w = w[w > 0]
    return float(max(-np.sum(w * np.log2(w)), 0.0))


def _skew_from_spectrum(w, v, k):
    kk = v.conj().T @ k @ v
    s = np.sqrt(w)
    return float(0.5 * np.sum((s[:, None] - s[None, :]) ** 2 * np.abs(kk) ** 2))


def _qfi_from_spectrum(w, v, h):
    hh = v.conj().T @ h @ v
    num = (w[:, None] - w[None, :]) ** 2
    den = w[:, None] + w[None, :]
    mask = den > QFI_EPS
    ratio = np.zeros_like(num)
    ratio[mask] = num[mask] / den[mask]
    return float(0.5 * np.sum(ratio * np.abs(hh) ** 2))


def skew_information(sigma, k):
    """Wigner-Yanase skew information -tr([sqrt(sigma), K]^2) / 2, via the spectral sum."""
    k = _check_operator(k, sigma.dim, "observable")
    w, v = _spectrum(sigma)
    return _skew_from_spectrum(w, v, k)


def quantum_fisher_information(sigma, h):
    """SLD quantum Fisher information in the variance-normalized convention."""
    h = _check_operator(h, sigma.dim, "generator")
    w, v = _spectrum(sigma)
    return _qfi_from_spectrum(w, v, h)


def variance(sigma, k):
    m = sigma.matrix
    return float(np.real(np.trace(m @ k @ k) - np.trace(m @ k) ** 2))


def _check_basis(rho, basis):
    if rho.dim != basis.dim:
        raise ValidationError(f"state dimension {rho.dim} != basis dimension {basis.dim}")


def coherence_l1(rho, basis):
    _check_basis(rho, basis)
    m = basis.to_basis(rho.matrix)
    off = np.abs(m).sum() - np.abs(np.diagonal(m)).sum()
    return MeasureValue(off, "l1", basis.tag)


def coherence_rel_entropy(rho, basis):
    _check_basis(rho, basis)
    val = von_neumann_entropy(dephase(rho, basis)) - von_neumann_entropy(rho)
    return MeasureValue(val, "rel_entropy", basis.tag)


def _sum_over_projectors(fn, rho, projectors):
    w, v = _spectrum(rho)
    return sum(fn(w, v, p) for p in projectors)


def coherence_skew(rho, basis):
    _check_basis(rho, basis)
    return MeasureValue(_sum_over_projectors(_skew_from_spectrum, rho, basis.projectors()), "skew", basis.tag)


def coherence_qfi(rho, basis):
    _check_basis(rho, basis)
    return MeasureValue(_sum_over_projectors(_qfi_from_spectrum, rho, basis.projectors()), "qfi", basis.tag)


def _check_lueders(rho, lueders):
    if not isinstance(rho, BipartiteState):
        raise ValidationError("partial coherence needs a bipartite state")
    if (rho.d_a, rho.d_b) != (lueders.d_a, lueders.d_b):
        raise ValidationError(
            f"state split {rho.d_a}x{rho.d_b} != measurement split {lueders.d_a}x{lueders.d_b}")


def partial_coherence_skew(rho, lueders):
    """sum_i I(rho, P_i (x) 1) for the Lueders extension of a local basis."""
    _check_lueders(rho, lueders)
    val = _sum_over_projectors(_skew_from_spectrum, rho, lueders.projectors())
    return MeasureValue(val, "partial_skew", lueders.tag)


def partial_coherence_qfi(rho, lueders):
    _check_lueders(rho, lueders)
    val = _sum_over_projectors(_qfi_from_spectrum, rho, lueders.projectors())
    return MeasureValue(val, "partial_qfi", lueders.tag)
