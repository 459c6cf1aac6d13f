"""Geometric discord by minimization over local measurements, and heuristic
lower bounds on the channel suprema behind the correlation-based and
Fisher-information-based coherence families.

All restarts of a local search run together as one batch. Each restart owns
an independent random stream derived from ``(seed, restart index)``, so the
outcome does not depend on batching or execution order.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .channels import (
    KrausChannel,
    apply,
    controlled_unitary_matrix,
    generalized_cnot,
    injective_incoherent_kraus,
    partial_incoherent_kraus,
    permutation_phase_kraus,
    shift_matrix,
)
from .errors import OptimizationError, ValidationError
from .linalg import PAULI_X, PAULI_Y, PAULI_Z, expm_antihermitian, haar_unitary_from_rng, psd_sqrt
from .measurements import (
    VonNeumannMeasurement,
    computational_basis,
    lueders_extend,
    qubit_basis_matrix,
)
from .measures import coherence_qfi, partial_coherence_qfi
from .states import BipartiteState, attach_ancilla

FD_STEP = 1e-5
ARMIJO = 1e-4
MIN_STEP = 1e-14
OUTER_ITERATIONS = 25
TIE_MARGIN = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 24
    max_iterations: int = 500
    value_tolerance: float = 1e-9
    parameter_tolerance: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.starts < 1 or self.max_iterations < 1:
            raise ValidationError("starts and max_iterations must be >= 1")
        if self.value_tolerance <= 0 or self.parameter_tolerance <= 0:
            raise ValidationError("tolerances must be positive")

    @property
    def gradient_tolerance(self):
        return 0.1 * np.sqrt(self.value_tolerance)


@dataclass(frozen=True, eq=False)
class DiscordResult:
    value: float
    argmin_basis: VonNeumannMeasurement
    starts_converged: int
    oracle_value: float = None

    def to_dict(self):
        out = {
            "value": self.value,
            "argmin_basis": self.argmin_basis.basis,
            "starts_converged": self.starts_converged,
        }
        if self.oracle_value is not None:
            out["oracle_value"] = self.oracle_value
        return out


@dataclass(frozen=True, eq=False)
class LowerBound:
    """Best value found over an explicit search family; never a certified supremum."""

    value: float
    family: str
    best_member: str
    members_evaluated: int

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class StrongEstimate:
    entries: tuple
    measure: str
    monotone: bool
    flags: tuple = field(default_factory=tuple)


# --- batched local search -------------------------------------------------


def _local_search(evaluate, retract, x0, n_params, cfg, maximize=False):
    """Multi-start steepest descent with central-difference gradients.

    Step lengths follow the Barzilai-Borwein rule, safeguarded by halving
    backtracking to an Armijo decrease. ``evaluate`` maps a batch of points to
    values, ``retract(x, delta)`` moves a batch of points along parameter
    displacements. Returns final points, values and per-start convergence flags.
    """
    sign = -1.0 if maximize else 1.0

    def f(x):
        return sign * evaluate(x)

    x = x0
    n = len(x)
    fx = f(x)
    t = np.ones(n)
    g_prev = np.zeros((n, n_params))
    step_prev = np.zeros((n, n_params))
    have_prev = np.zeros(n, dtype=bool)
    converged = np.zeros(n, dtype=bool)
    eye = np.eye(n_params) * FD_STEP
    for _ in range(cfg.max_iterations):
        idx = np.flatnonzero(~converged)
        if idx.size == 0:
            break
        m = idx.size
        rep = np.repeat(x[idx], 2 * n_params, axis=0)
        deltas = np.tile(np.concatenate([eye, -eye]), (m, 1))
        vals = f(retract(rep, deltas)).reshape(m, 2, n_params)
        g = (vals[:, 0] - vals[:, 1]) / (2 * FD_STEP)
        gn = np.linalg.norm(g, axis=1)
        small = gn <= cfg.gradient_tolerance
        converged[idx[small]] = True
        keep = ~small
        idx, g, gn = idx[keep], g[keep], gn[keep]
        # Barzilai-Borwein length from the previous accepted step (chart coordinates)
        bb = have_prev[idx]
        if bb.any():
            s_ = step_prev[idx[bb]]
            y_ = g[bb] - g_prev[idx[bb]]
            sy = np.sum(s_ * y_, axis=1)
            ss = np.sum(s_ * s_, axis=1)
            good = sy > 1e-300
            tb = np.where(good, ss / np.where(good, sy, 1.0), 2 * t[idx[bb]])
            t[idx[bb]] = np.clip(tb, 1e-8, 1e4)
        g_prev[idx] = g
        pending = np.ones(idx.size, dtype=bool)
        while pending.any():
            j = np.flatnonzero(pending)
            ii = idx[j]
            trial = retract(x[ii], -t[ii, None] * g[j])
            ft = f(trial)
            ok = ft <= fx[ii] - ARMIJO * t[ii] * gn[j] ** 2
            acc = ii[ok]
            gain = fx[acc] - ft[ok]
            stalled = (gain < cfg.value_tolerance) & (t[acc] * gn[j][ok] < cfg.parameter_tolerance)
            step_prev[acc] = -t[acc, None] * g[j][ok]
            have_prev[acc] = True
            x[acc] = trial[ok]
            fx[acc] = ft[ok]
            converged[acc[stalled]] = True
            pending[j[ok]] = False
            rej = ii[~ok]
            t[rej] *= 0.5
            dead = t[rej] < MIN_STEP
            # no representable descent step left: stationary to working precision
            converged[rej[dead]] = True
            t[rej[dead]] = 1.0
            pending[j[~ok][dead]] = False
    return x, sign * fx, converged


def _start_rng(seed, index):
    return np.random.default_rng([int(seed) & 0xFFFFFFFF, int(index)])


# --- discord objective ----------------------------------------------------


def _sqrt_blocks(rho):
    s = psd_sqrt(rho.matrix, floor=True)
    return s.reshape(rho.d_a, rho.d_b, rho.d_a, rho.d_b), float(np.real(np.trace(s @ s)))


def _discord_objective(s4, norm, u):
    """sum_i I(rho, u_i u_i^dag (x) 1) = tr(rho) - sum_i ||(u_i^dag (x) 1) sqrt(rho) (u_i (x) 1)||_F^2."""
    d_a, d_b = s4.shape[0], s4.shape[1]
    x = np.matmul(s4.transpose(0, 1, 3, 2).reshape(d_a * d_b * d_b, d_a), u)
    x = x.reshape(len(u), d_a, d_b * d_b, d_a)
    b = np.einsum("nai,naei->nie", u.conj(), x)
    return norm - np.sum(np.abs(b) ** 2, axis=(1, 2))


def _hermitian_from_params(p, d):
    """Batch of Hermitian d x d matrices from d^2 real coordinates."""
    n = p.shape[0]
    h = np.zeros((n, d, d), dtype=complex)
    di = np.arange(d)
    h[:, di, di] = p[:, :d]
    iu = np.triu_indices(d, 1)
    k = len(iu[0])
    z = p[:, d:d + k] + 1j * p[:, d + k:d + 2 * k]
    h[:, iu[0], iu[1]] = z
    h[:, iu[1], iu[0]] = z.conj()
    return h


def _unitary_retract(u, delta):
    d = u.shape[-1]
    return u @ expm_antihermitian(_hermitian_from_params(delta, d))


def _angles_to_unitary(x):
    th, ph = x[:, 0], x[:, 1]
    c, s = np.cos(th / 2), np.sin(th / 2)
    e = np.exp(1j * ph)
    u = np.empty((len(x), 2, 2), dtype=complex)
    u[:, 0, 0], u[:, 0, 1] = c, -s
    u[:, 1, 0], u[:, 1, 1] = e * s, e * c
    return u


def _canonical_key(u):
    """Phase- and order-fixed real vector identifying a projector family."""
    cols = []
    for v in u.T:
        k = int(np.argmax(np.abs(v) > 1e-8))
        v = v * np.exp(-1j * np.angle(v[k]))
        cols.append(np.concatenate([v.real, v.imag]))
    cols.sort(key=lambda c: tuple(np.round(c, 8)))
    return tuple(np.round(np.concatenate(cols), 8))


def _pick(values, keys, converged, tol):
    """Best converged start; near-ties broken by lexicographic key."""
    pool = np.flatnonzero(converged) if converged.any() else np.arange(len(values))
    best = values[pool].min()
    ties = [i for i in pool if values[i] <= best + tol]
    return min(ties, key=lambda i: keys[i])


def _minimize_discord(rho, cfg):
    s4, norm = _sqrt_blocks(rho)
    d = rho.d_a
    if d == 2:
        x0 = np.zeros((cfg.starts, 2))
        for k in range(1, cfg.starts):
            r = _start_rng(cfg.seed, k)
            x0[k] = [np.arccos(1 - 2 * r.random()), 2 * np.pi * r.random()]
        x, vals, conv = _local_search(
            lambda x: _discord_objective(s4, norm, _angles_to_unitary(x)),
            lambda x, dx: x + dx, x0, 2, cfg)
        us = _angles_to_unitary(x)
    else:
        u0 = np.empty((cfg.starts, d, d), dtype=complex)
        u0[0] = np.eye(d)
        for k in range(1, cfg.starts):
            u0[k] = haar_unitary_from_rng(d, _start_rng(cfg.seed, k))
        us, vals, conv = _local_search(
            lambda u: _discord_objective(s4, norm, u), _unitary_retract, u0, d * d, cfg)
    return us, vals, conv


def geometric_discord(rho, cfg=None, check_oracle=True):
    """Minimum over local von Neumann measurements of sum_i I(rho, P_i (x) 1)."""
    cfg = cfg or OptimizerConfig()
    if not isinstance(rho, BipartiteState):
        raise ValidationError("geometric discord needs a bipartite state")
    if rho.d_a == 1:
        return DiscordResult(0.0, computational_basis(1), cfg.starts, None)
    us, vals, conv = _minimize_discord(rho, cfg)
    if not conv.any():
        raise OptimizationError(
            f"no start converged within {cfg.max_iterations} iterations", best_value=float(vals.min()))
    keys = [_canonical_key(u) for u in us]
    i = _pick(vals, keys, conv, cfg.value_tolerance)
    value = max(float(vals[i]), 0.0)
    u = us[i]
    oracle = lqu_qubit_oracle(rho) if (check_oracle and rho.d_a == 2) else None
    basis = VonNeumannMeasurement(u, tag="argmin")
    return DiscordResult(value, basis, int(conv.sum()), oracle)


# --- qubit closed form ------------------------------------------------------


def lqu_qubit_oracle(rho):
    """(1 - lambda_max(W)) / 2 with W_uv = tr(sqrt(rho) s_u sqrt(rho) s_v), s_u Paulis on a."""
    if not isinstance(rho, BipartiteState) or rho.d_a != 2:
        raise ValidationError("closed-form oracle needs d_a = 2")
    s = psd_sqrt(rho.matrix, floor=True)
    ops = [np.kron(p, np.eye(rho.d_b)) for p in (PAULI_X, PAULI_Y, PAULI_Z)]
    w = np.empty((3, 3))
    for a in range(3):
        left = s @ ops[a] @ s
        for b in range(3):
            w[a, b] = np.real(np.trace(left @ ops[b]))
    w = (w + w.T) / 2
    norm = float(np.real(np.trace(s @ s)))
    return max(0.5 * (norm - np.linalg.eigvalsh(w)[-1]), 0.0)


def qubit_projector_objective(rho, theta, phi):
    """Direct projector-sum objective at one Bloch direction (no closed form)."""
    s4, norm = _sqrt_blocks(rho)
    x = np.column_stack([np.atleast_1d(theta), np.atleast_1d(phi)]).astype(float)
    return _discord_objective(s4, norm, _angles_to_unitary(x))


def grid_minimum(rho, coarse=(41, 81), levels=6, zoom=8):
    """Zooming grid search of the projector objective over the Bloch sphere."""
    s4, norm = _sqrt_blocks(rho)

    def f(th, ph):
        tt, pp = np.meshgrid(th, ph, indexing="ij")
        x = np.column_stack([tt.ravel(), pp.ravel()])
        return _discord_objective(s4, norm, _angles_to_unitary(x)).reshape(tt.shape)

    th = np.linspace(0, np.pi, coarse[0])
    ph = np.linspace(0, 2 * np.pi, coarse[1])
    dth, dph = th[1] - th[0], ph[1] - ph[0]
    vals = f(th, ph)
    best = vals.min()
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    c_th, c_ph = th[i], ph[j]
    for _ in range(levels):
        th = np.linspace(c_th - dth, c_th + dth, 2 * zoom + 1)
        ph = np.linspace(c_ph - dph, c_ph + dph, 2 * zoom + 1)
        dth, dph = th[1] - th[0], ph[1] - ph[0]
        vals = f(th, ph)
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        best = min(best, vals[i, j])
        c_th, c_ph = th[i], ph[j]
    return float(best)


@dataclass(frozen=True)
class OracleGateReport:
    states: int
    max_identity_residual: float
    max_grid_gap: float
    passed: bool


def validate_qubit_oracle(n_states=200, seed=0, d_b_choices=(1, 2, 3), grid_tol=1e-5, identity_tol=1e-10):
    """Check the two facts the closed form relies on before it is trusted.

    1. For Pi_pm = (1 +- n.s)/2: sum_pm I(rho, Pi_pm (x) 1) = I(rho, n.s (x) 1) / 2.
    2. Minimizing over n agrees with a dense grid search of the projector objective.
    """
    from .measures import skew_information
    from .states import mixed_from_rng

    rng = np.random.default_rng(seed)
    worst_id = 0.0
    worst_gap = 0.0
    for _ in range(n_states):
        d_b = int(rng.choice(d_b_choices))
        k = int(rng.integers(1, 2 * d_b + 1))
        rho = BipartiteState(mixed_from_rng(2 * d_b, k, rng), 2, d_b)
        th, ph = np.arccos(1 - 2 * rng.random()), 2 * np.pi * rng.random()
        n = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
        ns = np.kron(n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z, np.eye(d_b))
        u = qubit_basis_matrix(th, ph)
        lhs = sum(skew_information(rho.state, np.kron(np.outer(u[:, i], u[:, i].conj()), np.eye(d_b)))
                  for i in range(2))
        rhs = 0.5 * skew_information(rho.state, ns)
        worst_id = max(worst_id, abs(lhs - rhs))
        worst_gap = max(worst_gap, abs(lqu_qubit_oracle(rho) - grid_minimum(rho)))
    return OracleGateReport(n_states, worst_id, worst_gap, worst_id <= identity_tol and worst_gap <= grid_tol)


# --- channel suprema --------------------------------------------------------


def _inner_config(cfg):
    """Cheap discord settings for scoring candidates inside the channel search."""
    return replace(cfg, starts=min(cfg.starts, 4), max_iterations=min(cfg.max_iterations, 150),
                   value_tolerance=max(cfg.value_tolerance, 1e-7))


def _discord_value(cfg):
    def value(state):
        return geometric_discord(state, cfg, check_oracle=False).value
    return value


def _unitary_log_params(v):
    """Real coordinates x with exp(-i H(x)) = v."""
    w, vec = np.linalg.eig(v)
    h = (vec * -np.angle(w)) @ np.linalg.inv(vec)
    h = (h + h.conj().T) / 2
    d = v.shape[0]
    iu = np.triu_indices(d, 1)
    return np.concatenate([np.real(np.diagonal(h)), h[iu].real, h[iu].imag])


def _controlled_member(a_basis, x, d_b):
    p = d_b * d_b
    vs = expm_antihermitian(_hermitian_from_params(x.reshape(a_basis.dim, p), d_b))
    vs = [v for v in vs]
    return KrausChannel((controlled_unitary_matrix(a_basis, vs),), "controlled-unitary")


def _search_family(rho, lueders, cfg, functional, refine, n_random, n_outer_starts,
                   outer_iterations=OUTER_ITERATIONS):
    """Max of ``functional`` over {identity, generalized CNOT, optimized
    controlled unitaries, random partial-incoherent channels}.

    The winning member's output is re-scored with ``refine``.
    """
    a_basis = lueders.a_measurement
    d_a, d_b = rho.d_a, rho.d_b
    candidates = [("identity", rho)]
    cnot = generalized_cnot(a_basis, d_b)
    candidates.append(("generalized-cnot", apply(cnot, rho)))

    p = d_a * d_b * d_b
    x0 = [np.concatenate([_unitary_log_params(shift_matrix(d_b, i)) for i in range(d_a)])]
    for k in range(1, n_outer_starts):
        x0.append(_start_rng(cfg.seed, 1000 + k).normal(scale=1.0, size=p))
    outer = replace(cfg, starts=len(x0), max_iterations=min(cfg.max_iterations, outer_iterations),
                    value_tolerance=max(cfg.value_tolerance, 1e-8))

    def member_value(xs):
        return np.array([functional(apply(_controlled_member(a_basis, x, d_b), rho)) for x in xs])

    if d_b > 1 and n_outer_starts > 0:
        xs, _, _ = _local_search(member_value, lambda x, dx: x + dx, np.array(x0), p, outer, maximize=True)
        for x in xs:
            candidates.append(("controlled-unitary:optimized", apply(_controlled_member(a_basis, x, d_b), rho)))

    for k in range(n_random):
        ops = partial_incoherent_kraus(d_a, d_b, _start_rng(cfg.seed, 2000 + k))
        u = np.kron(a_basis.basis, np.eye(d_b))
        ops = [u @ op @ u.conj().T for op in ops]
        candidates.append((f"random-partial-incoherent[{k}]", apply(KrausChannel(tuple(ops)), rho)))

    scores = [functional(state) for _, state in candidates]
    order = np.argsort(-np.asarray(scores), kind="stable")
    best_name, best_state = candidates[order[0]]
    best = refine(best_state)
    # the refined score of the top candidate may drop; keep the best refined value among leaders
    for j in order[1:3]:
        if scores[j] > best:
            best = max(best, refine(candidates[j][1]))
    family = (f"identity + generalized-cnot + controlled-unitary(local search, {max(n_outer_starts, 0)} starts) "
              f"+ {n_random} random partial-incoherent (perm x conditional CPTP)")
    return LowerBound(float(best), family, best_name, len(candidates))


def weak_partial_coherence_lb(rho, lueders=None, cfg=None, n_random=8, n_outer_starts=2,
                              outer_iterations=OUTER_ITERATIONS):
    """Lower bound on sup over partial incoherent channels of the geometric discord of the output."""
    cfg = cfg or OptimizerConfig()
    lueders = lueders or lueders_extend(computational_basis(rho.d_a), rho.d_b)
    return _search_family(rho, lueders, cfg, _discord_value(_inner_config(cfg)), _discord_value(cfg),
                          n_random, n_outer_starts, outer_iterations)


def weak_coherence_lb(rho_a, d_b, cfg=None, basis=None, n_random=8, n_outer_starts=2):
    basis = basis or computational_basis(rho_a.dim)
    return weak_partial_coherence_lb(attach_ancilla(rho_a, d_b), lueders_extend(basis, d_b), cfg,
                                     n_random, n_outer_starts)


def weak_partial_coherence_qfi_lb(rho, lueders, cfg=None, n_random=8, n_outer_starts=2):
    cfg = cfg or OptimizerConfig()

    def fn(state):
        return partial_coherence_qfi(state, lueders).value

    return _search_family(rho, lueders, cfg, fn, fn, n_random, n_outer_starts)


def strong_coherence_estimate(rho_a, d_b_list, cfg=None, measure="skew", basis=None, n_random=8):
    """Weak lower bounds for each ancilla dimension, reported without extrapolation."""
    cfg = cfg or OptimizerConfig()
    d_b_list = [int(d) for d in d_b_list]
    if d_b_list != sorted(d_b_list):
        raise ValidationError("ancilla dimensions must be ascending")
    if measure not in ("skew", "qfi"):
        raise ValidationError(f"unknown measure {measure!r}; use 'skew' or 'qfi'")
    basis = basis or computational_basis(rho_a.dim)
    entries = []
    for d_b in d_b_list:
        if measure == "skew":
            lb = weak_coherence_lb(rho_a, d_b, cfg, basis, n_random)
        else:
            lb = weak_partial_coherence_qfi_lb(attach_ancilla(rho_a, d_b), lueders_extend(basis, d_b), cfg, n_random)
        entries.append((d_b, lb.value))
    flags = []
    for (d0, v0), (d1, v1) in zip(entries, entries[1:]):
        if v1 < v0 - 1e-7:
            flags.append(f"non-monotone: d_b={d0} -> {d1} drops {v0 - v1:.3e} (optimizer shortfall)")
    return StrongEstimate(tuple(entries), measure, not flags, tuple(flags))


def weak_coherence_qfi_lb(rho, basis=None, cfg=None, n_random=32):
    """Max of C_F over identity and random incoherent channels (two samplers, alternating)."""
    cfg = cfg or OptimizerConfig()
    basis = basis or computational_basis(rho.dim)
    d = rho.dim
    best = coherence_qfi(rho, basis).value
    best_name = "identity"
    for k in range(n_random):
        r = _start_rng(cfg.seed, 3000 + k)
        n_kraus = int(r.integers(1, d + 2))
        if k % 2 == 0:
            ops, name = permutation_phase_kraus(d, n_kraus, r), "permutation-phase"
        else:
            ops, name = injective_incoherent_kraus(d, n_kraus, r), "injective"
        u = basis.basis
        ops = [u @ op @ u.conj().T for op in ops]
        val = coherence_qfi(apply(KrausChannel(tuple(ops)), rho), basis).value
        if val > best + TIE_MARGIN:
            best, best_name = val, f"{name}[{k}]"
    family = f"identity + {n_random} random incoherent (permutation-phase / injective, alternating)"
    return LowerBound(float(best), family, best_name, n_random + 1)
