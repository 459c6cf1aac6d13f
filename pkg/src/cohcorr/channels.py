"""Kraus-operator channels, incoherence classifiers and samplers."""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import as_matrix, haar_unitary_from_rng, is_unitary
from .states import BipartiteState, DensityMatrix

COMPLETENESS_TOL = 1e-9
SELECTIVE_CUTOFF = 1e-12


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus: tuple
    tag: str = "custom"

    @property
    def dim_in(self):
        return self.kraus[0].shape[1]

    @property
    def dim_out(self):
        return self.kraus[0].shape[0]

    def stacked(self):
        return np.stack(self.kraus)


def completeness_residual(ops):
    n = ops[0].shape[1]
    s = sum(k.conj().T @ k for k in ops)
    return float(np.linalg.norm(s - np.eye(n)))


def channel_from_kraus(ops, tol=COMPLETENESS_TOL, tag="custom"):
    ops = [as_matrix(k) for k in ops]
    if not ops:
        raise ValidationError("a channel needs at least one Kraus operator")
    shape = ops[0].shape
    if any(k.shape != shape for k in ops):
        raise ValidationError(f"Kraus operators have inconsistent shapes: {sorted({k.shape for k in ops})}")
    res = completeness_residual(ops)
    if res > tol:
        raise ValidationError(f"Kraus operators are not complete: ||sum K^dag K - I||_F = {res:.3e} > {tol:g}")
    return KrausChannel(tuple(ops), tag)


def _state_matrix(rho, dim):
    m = rho.matrix
    if m.shape[0] != dim:
        raise ValidationError(f"state dimension {m.shape[0]} != channel input dimension {dim}")
    return m


def _wrap_like(rho, m, channel):
    m = (m + m.conj().T) / 2
    if isinstance(rho, BipartiteState) and channel.dim_out == rho.dim:
        return BipartiteState(DensityMatrix(m), rho.d_a, rho.d_b)
    return DensityMatrix(m)


def apply(channel, rho):
    m = _state_matrix(rho, channel.dim_in)
    k = channel.stacked()
    out = np.einsum("kij,jl,kml->im", k, m, k.conj())
    return _wrap_like(rho, out, channel)


def apply_selective(channel, rho):
    """Outcomes (p_l, K_l rho K_l^dag / p_l), dropping p_l below 1e-12."""
    m = _state_matrix(rho, channel.dim_in)
    outcomes = []
    for k in channel.kraus:
        out = k @ m @ k.conj().T
        p = float(np.real(np.trace(out)))
        if p >= SELECTIVE_CUTOFF:
            outcomes.append((p, _wrap_like(rho, out / p, channel)))
    return outcomes


def is_incoherent_channel(channel, basis, tol=1e-9):
    """Every Kraus operator, in ``basis``, has at most one entry above tol per column."""
    if channel.dim_in != basis.dim or channel.dim_out != basis.dim:
        raise ValidationError("channel and basis dimensions differ")
    for k in channel.kraus:
        kb = basis.to_basis(k)
        if np.any(np.sum(np.abs(kb) > tol, axis=0) > 1):
            return False
    return True


def block_diagonal_basis(d_a, d_b):
    """Hermitian basis of the operators block-diagonal in the a-index (d_a * d_b**2 elements)."""
    herm = []
    for j in range(d_b):
        e = np.zeros((d_b, d_b), dtype=complex)
        e[j, j] = 1
        herm.append(e)
        for l in range(j + 1, d_b):
            x = np.zeros((d_b, d_b), dtype=complex)
            x[j, l] = x[l, j] = 1
            y = np.zeros((d_b, d_b), dtype=complex)
            y[j, l], y[l, j] = -1j, 1j
            herm.extend([x, y])
    out = []
    for i in range(d_a):
        p = np.zeros((d_a, d_a), dtype=complex)
        p[i, i] = 1
        out.extend(np.kron(p, h) for h in herm)
    return out


def _block_offdiag_norm(m, d_a, d_b):
    t = m.reshape(d_a, d_b, d_a, d_b)
    mask = 1 - np.eye(d_a)[:, None, :, None]
    return float(np.linalg.norm(t * mask))


def partial_incoherence_residual(channel, lueders):
    """Largest off-block norm of K_l B K_l^dag over the block-diagonal basis B."""
    d_a, d_b = lueders.d_a, lueders.d_b
    if channel.dim_in != lueders.dim or channel.dim_out != lueders.dim:
        raise ValidationError("channel and Lueders measurement dimensions differ")
    u = np.kron(lueders.a_measurement.basis, np.eye(d_b))
    kraus = [u.conj().T @ k @ u for k in channel.kraus]
    worst = 0.0
    for b in block_diagonal_basis(d_a, d_b):
        for k in kraus:
            worst = max(worst, _block_offdiag_norm(k @ b @ k.conj().T, d_a, d_b))
    return worst


def is_partial_incoherent_channel(channel, lueders, tol=1e-9):
    """Every K_l maps every block-diagonal operator to a block-diagonal operator."""
    return partial_incoherence_residual(channel, lueders) <= tol


def identity_channel(d):
    return KrausChannel((np.eye(d, dtype=complex),), "identity")


def unitary_channel(u, tag="unitary"):
    u = as_matrix(u)
    if not is_unitary(u, 1e-10):
        raise ValidationError("operator is not unitary within 1e-10")
    return KrausChannel((u,), tag)


def controlled_unitary_matrix(a_basis, vs):
    vs = [as_matrix(v) for v in vs]
    if len(vs) != a_basis.dim:
        raise ValidationError(f"need {a_basis.dim} conditional unitaries, got {len(vs)}")
    for v in vs:
        if not is_unitary(v, 1e-10):
            raise ValidationError("conditional operator is not unitary within 1e-10")
    return sum(np.kron(a_basis.projector(i), v) for i, v in enumerate(vs))


def controlled_unitary(a_basis, vs, tag="controlled-unitary"):
    """Single Kraus operator sum_i P_i^a (x) V_i."""
    return KrausChannel((controlled_unitary_matrix(a_basis, vs),), tag)


def shift_matrix(d, power=1):
    """Cyclic shift |j> -> |j + power mod d>."""
    return np.roll(np.eye(d, dtype=complex), power, axis=0)


def generalized_cnot(a_basis, d_b):
    """Controlled shifts V_i = X^i on the target."""
    vs = [shift_matrix(d_b, i) for i in range(a_basis.dim)]
    return controlled_unitary(a_basis, vs, tag="generalized-cnot")


def _simplex(n, rng):
    return rng.dirichlet(np.ones(n))


def permutation_phase_kraus(d, n_kraus, rng):
    ops = []
    for p in _simplex(n_kraus, rng):
        perm = np.eye(d, dtype=complex)[:, rng.permutation(d)]
        phases = np.exp(2j * np.pi * rng.random(d))
        ops.append(np.sqrt(p) * perm * phases)
    return ops


def random_incoherent_channel(d, n_kraus, seed):
    """Mixture of permutation-times-phase unitaries sqrt(p_k) P_k D_k."""
    if d < 1 or n_kraus < 1:
        raise ValidationError("d and n_kraus must be >= 1")
    rng = np.random.default_rng(seed)
    return KrausChannel(tuple(permutation_phase_kraus(d, n_kraus, rng)), "incoherent:permutation-phase")


def injective_incoherent_kraus(d, n_kraus, rng):
    """K_l = sum_j c_lj |f_l(j)><j| with each f_l a permutation and sum_l |c_lj|^2 = 1.

    Unlike permutation-phase mixtures the weights depend on the input index, so
    these maps are not mixtures of incoherent unitaries.
    """
    z = rng.standard_normal((n_kraus, d)) + 1j * rng.standard_normal((n_kraus, d))
    c = z / np.linalg.norm(z, axis=0)
    ops = []
    for l in range(n_kraus):
        perm = np.eye(d, dtype=complex)[:, rng.permutation(d)]
        ops.append(perm * c[l])
    return ops


def random_injective_incoherent_channel(d, n_kraus, seed):
    rng = np.random.default_rng(seed)
    return KrausChannel(tuple(injective_incoherent_kraus(d, n_kraus, rng)), "incoherent:injective")


def random_kraus_family(d, n, rng):
    """n Kraus operators of a random CPTP map on C^d (Stinespring from a Haar unitary)."""
    u = haar_unitary_from_rng(d * n, rng)
    iso = u[:, :d]
    return [iso[l * d:(l + 1) * d, :] for l in range(n)]


def block_kraus(perm, families):
    """Kraus operators sum_i |perm[i]><i| (x) families[i][l]; families must share a length."""
    d_a = len(perm)
    n_kraus = len(families[0])
    if len(families) != d_a or any(len(f) != n_kraus for f in families):
        raise ValidationError("need one Kraus family of common length per a-index")
    d_b = as_matrix(families[0][0]).shape[0]
    ops = []
    for l in range(n_kraus):
        k = np.zeros((d_a * d_b, d_a * d_b), dtype=complex)
        for i in range(d_a):
            k[perm[i] * d_b:(perm[i] + 1) * d_b, i * d_b:(i + 1) * d_b] = families[i][l]
        ops.append(k)
    return ops


def partial_incoherent_channel(perm, families, tag="partial-incoherent:block"):
    if sorted(perm) != list(range(len(perm))):
        raise ValidationError(f"{perm!r} is not a permutation")
    return channel_from_kraus(block_kraus(perm, families), tag=tag)


def partial_incoherent_kraus(d_a, d_b, rng, n_kraus=None):
    if n_kraus is None:
        n_kraus = int(rng.integers(1, 4))
    perm = rng.permutation(d_a)
    families = [random_kraus_family(d_b, n_kraus, rng) for _ in range(d_a)]
    return block_kraus(perm, families)


def partial_incoherent_from_rng(d_a, d_b, rng):
    return KrausChannel(tuple(partial_incoherent_kraus(d_a, d_b, rng)), "partial-incoherent:perm-x-conditional-cptp")


def random_partial_incoherent_channel(d_a, d_b, seed):
    """Kraus operators sum_i |pi(i)><i| (x) B_{l,i}, one CPTP family {B_{l,i}}_l per block."""
    if d_a < 1 or d_b < 1:
        raise ValidationError("dimensions must be >= 1")
    return partial_incoherent_from_rng(d_a, d_b, np.random.default_rng(seed))


def compose(outer, inner):
    """Channel outer o inner with Kraus set {K_o K_i}."""
    if inner.dim_out != outer.dim_in:
        raise ValidationError(f"cannot compose: inner output {inner.dim_out} != outer input {outer.dim_in}")
    ops = tuple(ko @ ki for ko in outer.kraus for ki in inner.kraus)
    return KrausChannel(ops, f"({outer.tag})o({inner.tag})")


def local_channel(channel_a, d_b):
    """Extend a channel on party a by the identity on b."""
    return KrausChannel(tuple(np.kron(k, np.eye(d_b)) for k in channel_a.kraus), f"{channel_a.tag}(x)id")

