"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]`` / ``[FAIL]`` line; the same lines are
collected and repeated in the pytest terminal summary. Tolerances and trial
counts are pinned here and never loosened to make a criterion pass.

Run standalone with ``python tests/test_acceptance.py``.
"""

import io
import json
import time
from pathlib import Path

import numpy as np

from cohcorr.cli import main as cli_main
from cohcorr.measurements import computational_basis, lueders_extend
from cohcorr.measures import (
    coherence_l1,
    coherence_qfi,
    coherence_rel_entropy,
    coherence_skew,
    partial_coherence_skew,
    variance,
)
from cohcorr.optim import geometric_discord, lqu_qubit_oracle, strong_coherence_estimate, validate_qubit_oracle
from cohcorr.serialization import channel_from_dict, channel_to_dict, dumps, state_from_dict, state_to_dict
from cohcorr.states import BipartiteState, attach_ancilla, bell_state, mixed_from_rng, plus_state
from cohcorr.verify import replay, run_suite
from cohcorr.channels import apply, generalized_cnot

FIXTURES = Path(__file__).parent / "fixtures"
RESULTS = []
_T0 = time.perf_counter()

ANCHOR_TOL = 1e-6
ANCHOR_SECONDS = 1.0
EQ4_TOL, EQ4_SECONDS, EQ4_TRIALS = 1e-9, 30.0, 500
THM1_TOL, THM1_SECONDS = 1e-7, 600.0
THM2_TOL = 1e-6
SAT_TOL = 1e-6
ORACLE_TOL, GRID_TOL = 1e-6, 1e-5
AXIOM_TRIALS = 200
STRONG_LO, STRONG_HI = 0.5 - 1e-6, 0.5 + 1e-7
TOTAL_SECONDS = 15 * 60.0


def record(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"
    RESULTS.append(line)
    print(line)
    assert passed, line


def test_c01_anchor_values():
    t = time.perf_counter()
    plus = plus_state(2)
    comp = computational_basis(2)
    lm = lueders_extend(comp, 2)
    bell = bell_state(2)
    # second route for each anchor: pure-state variance sums, closed-form qubit discord,
    # binary entropy of the dephased |+>
    p0 = comp.projector(0)
    var_sum = 2 * variance(plus, p0)
    var_sum_bell = 2 * variance(bell.state, np.kron(p0, np.eye(2)))
    anchors = {
        "C_l1(+)": (coherence_l1(plus, comp).value, 2 * abs(plus.matrix[0, 1]), 1.0),
        "C_r(+)": (coherence_rel_entropy(plus, comp).value, -2 * 0.5 * np.log2(0.5), 1.0),
        "C_I(+)": (coherence_skew(plus, comp).value, var_sum, 0.5),
        "C_F(+)": (coherence_qfi(plus, comp).value, var_sum, 0.5),
        "Q_G(Bell)": (geometric_discord(bell).value, lqu_qubit_oracle(bell), 0.5),
        "C_I^a(Bell)": (partial_coherence_skew(bell, lm).value, var_sum_bell, 0.5),
    }
    elapsed = time.perf_counter() - t
    worst = max(max(abs(a - g), abs(b - g)) for a, b, g in anchors.values())
    record(1, "anchor values", worst <= ANCHOR_TOL and elapsed < ANCHOR_SECONDS,
           f"max deviation {worst:.2e} (tol {ANCHOR_TOL:g}), {elapsed:.2f}s (limit {ANCHOR_SECONDS:g}s)")


def test_c02_product_additivity():
    t = time.perf_counter()
    dims = [(a, b) for a in range(2, 5) for b in range(1, 5)]
    per = -(-EQ4_TRIALS // len(dims))
    reports = [run_suite("eq4_additivity", per, d, seed=0, tol=EQ4_TOL) for d in dims]
    elapsed = time.perf_counter() - t
    trials = sum(r.trials for r in reports)
    violations = sum(r.violations for r in reports)
    worst = max(r.max_violation_margin for r in reports)
    record(2, "product additivity of partial skew coherence",
           violations == 0 and trials >= EQ4_TRIALS and elapsed < EQ4_SECONDS,
           f"{trials} trials over d_a, d_b <= 4, {violations} violations, max |diff| {worst:.2e} "
           f"(tol {EQ4_TOL:g}), {elapsed:.1f}s")


def test_c03_conversion_bound():
    t = time.perf_counter()
    a = run_suite("theorem1", 1000, (2, 2), seed=0, tol=THM1_TOL)
    b = run_suite("theorem1", 200, (2, 3), seed=0, tol=THM1_TOL)
    elapsed = time.perf_counter() - t
    record(3, "discord after partial incoherent channel <= partial coherence before",
           a.violations == 0 and b.violations == 0 and elapsed < THM1_SECONDS,
           f"(2,2): {a.violations}/{a.trials}, (2,3): {b.violations}/{b.trials} violations, "
           f"min slack {min(a.min_slack, b.min_slack):.2e}, {elapsed:.1f}s")


def test_c04_no_discord_from_incoherent():
    r = run_suite("theorem2_noncreation", 500, (2, 2), seed=0, tol=THM2_TOL)
    record(4, "partial incoherent inputs never gain discord", r.violations == 0,
           f"{r.violations}/{r.trials} violations, max output Q_G {r.max_violation_margin:.2e} (tol {THM2_TOL:g})")


def test_c05_saturation():
    rho = attach_ancilla(plus_state(2), 2)
    out = apply(generalized_cnot(computational_basis(2), 2), rho)
    q = geometric_discord(out).value
    c = coherence_skew(plus_state(2), computational_basis(2)).value
    ok = abs(q - 0.5) <= SAT_TOL and abs(q - c) <= SAT_TOL
    record(5, "CNOT on |+>|0> attains the bound", ok, f"Q_G = {q:.12f}, C_I(+) = {c:.12f} (tol {SAT_TOL:g})")


def test_c06_qubit_oracle():
    gate = validate_qubit_oracle(n_states=200, seed=0, grid_tol=GRID_TOL)
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(200):
        d_b = int(rng.integers(1, 4))
        rho = BipartiteState(mixed_from_rng(2 * d_b, int(rng.integers(1, 2 * d_b + 1)), rng), 2, d_b)
        worst = max(worst, abs(geometric_discord(rho, check_oracle=False).value - lqu_qubit_oracle(rho)))
    record(6, "optimizer agrees with the qubit closed form", gate.passed and worst <= ORACLE_TOL,
           f"gate grid gap {gate.max_grid_gap:.1e} (tol {GRID_TOL:g}), identity residual "
           f"{gate.max_identity_residual:.1e}; 200 states max gap {worst:.2e} (tol {ORACLE_TOL:g})")


def test_c07_axiom_suites():
    plan = [
        ("monotonicity_partial", None, 1e-7),
        ("convexity", None, 1e-9),
        ("skew_qfi_sandwich", None, 1e-9),
        ("local_unitary_invariance", None, 1e-6),
        ("eq5_flag", (2, 2, 2), 1e-6),
    ]
    parts, ok = [], True
    for name, dims, tol in plan:
        r = run_suite(name, AXIOM_TRIALS, dims, seed=0, tol=tol)
        ok &= r.violations == 0 and r.trials >= AXIOM_TRIALS
        tag = f"{name} {r.violations}/{r.trials}"
        if r.violations:
            tag += f" (worst margin {r.max_violation_margin:.2e}; {r.extra['violations_by_relation']})"
        parts.append(tag)
    record(7, "measure-axiom suites at zero violations", ok, "; ".join(parts))


def test_c08_cf_search():
    r = run_suite("cf_monotonicity_search", 2000, seed=0)
    replayed = all(replay(rec, "cf_monotonicity_search") == rec["margin"] for rec in r.counterexamples)
    json.loads(dumps(r.to_dict()))
    record(8, "C_F monotonicity search completes with a report", r.trials == 2000 and replayed,
           f"{r.trials} trials, {r.violations} candidate counterexamples, replay "
           f"{'deterministic' if replayed else 'MISMATCH'}, status {r.status}")


def test_c09_strong_estimate():
    est = strong_coherence_estimate(plus_state(2), [2, 3, 4], measure="skew")
    ok = all(STRONG_LO <= v <= STRONG_HI for _, v in est.entries)
    vals = ", ".join(f"d_b={d}: {v:.9f}" for d, v in est.entries)
    record(9, "strong skew coherence estimate of |+>", ok, f"{vals} (window [{STRONG_LO}, {STRONG_HI}])")


def _cli(*argv):
    out = io.StringIO()
    return cli_main([str(a) for a in argv], out=out), out.getvalue()


def test_c10_cli_end_to_end(tmp_path):
    f = FIXTURES
    checks = {
        "measure": _cli("measure", "--state", f / "bell.json")[0] == 0,
        "measure csv": _cli("measure", "--state", f / "plus.json", "--format", "csv")[0] == 0,
        "measure bad file": _cli("measure", "--state", tmp_path / "none.json")[0] == 1,
        "discord": _cli("discord", "--state", f / "bell.json")[0] == 0,
        "convert cnot": _cli("convert", "--state", f / "plus_tensor_zero.json", "--channel", "cnot")[0] == 0,
        "convert rejects": _cli("convert", "--state", f / "bell.json", "--channel", f / "hadamard_a.json")[0] == 1,
        "convert violation": _cli("convert", "--state", f / "plus_tensor_zero.json", "--channel", "cnot",
                                  "--bound-tol", "-1")[0] == 2,
        "verify": _cli("verify", "--suite", "theorem1", "--trials", "3")[0] == 0,
        "verify unknown": _cli("verify", "--suite", "nope")[0] == 1,
        "random": _cli("random", "--kind", "mixed", "--dims", "2,2", "--out", tmp_path / "m.json")[0] == 0,
    }
    round_trip = True
    for path in sorted(f.glob("*.json")) + [tmp_path / "m.json"]:
        text = path.read_text()
        data = json.loads(text)
        obj = state_from_dict(data) if "dims" in data else channel_from_dict(data)
        again = dumps(state_to_dict(obj) if "dims" in data else channel_to_dict(obj))
        round_trip &= again == text
    total = time.perf_counter() - _T0
    failed = [k for k, v in checks.items() if not v]
    ok = not failed and round_trip and total < TOTAL_SECONDS
    record(10, "CLI exit codes, byte-identical round trip, total runtime", ok,
           f"{len(checks) - len(failed)}/{len(checks)} command checks"
           + (f" (failed: {', '.join(failed)})" if failed else "")
           + f", round trip {'identical' if round_trip else 'DIFFERS'}, acceptance elapsed {total:.0f}s "
             f"(limit {TOTAL_SECONDS:.0f}s)")


if __name__ == "__main__":
    import sys
    import tempfile

    failures = 0
    for name, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_c")):
        try:
            if "tmp_path" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
                with tempfile.TemporaryDirectory() as d:
                    fn(Path(d))
            else:
                fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
