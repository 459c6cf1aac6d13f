"""Ancilla-dimension scan of the channel lower bound on strong coherence.

Prints, for each ancilla dimension, the best discord found over the search
family for rho_a (x) |0><0|, alongside the closed-form coherence C_I(rho_a).
Values are lower bounds; a dip across dimensions is flagged.

    python scripts/strong_coherence_scan.py --d-a 2 --ancilla 2 3 4 --states 3
"""

import argparse

import numpy as np

from cohcorr.measurements import computational_basis
from cohcorr.measures import coherence_qfi, coherence_skew
from cohcorr.optim import OptimizerConfig, strong_coherence_estimate
from cohcorr.states import mixed_from_rng, plus_state


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--d-a", type=int, default=2)
    p.add_argument("--ancilla", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--states", type=int, default=2)
    p.add_argument("--measure", choices=["skew", "qfi"], default="skew")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = np.random.default_rng(args.seed)
    cfg = OptimizerConfig(seed=args.seed)
    basis = computational_basis(args.d_a)
    closed = coherence_skew if args.measure == "skew" else coherence_qfi
    states = [plus_state(args.d_a)] + [mixed_from_rng(args.d_a, args.d_a, rng) for _ in range(args.states)]
    for i, rho in enumerate(states):
        est = strong_coherence_estimate(rho, args.ancilla, cfg, measure=args.measure)
        row = "  ".join(f"d_b={d}: {v:.8f}" for d, v in est.entries)
        flag = "" if est.monotone else f"  non-monotone {list(est.flags)}"
        print(f"state {i}: closed form {closed(rho, basis).value:.8f} | {row}{flag}")


if __name__ == "__main__":
    main()
