"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 property violation, 3 numerical failure.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import measures as M
from .channels import (
    generalized_cnot,
    identity_channel,
    partial_incoherence_residual,
    partial_incoherent_from_rng,
    random_incoherent_channel,
    apply,
)
from .errors import NotPSDError, OptimizationError, ValidationError
from .measurements import basis_from_unitary, computational_basis, lueders_extend, qubit_basis
from .optim import OptimizerConfig, geometric_discord
from .serialization import (
    channel_to_dict,
    dumps,
    encode_matrix,
    load_channel,
    load_state,
    load_unitary,
    state_from_dict,
    channel_from_dict,
    save,
    state_to_dict,
)
from .states import BipartiteState, mixed_from_rng, random_haar_pure
from .verify import SUITES, run_all, run_suite

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_NUMERIC = 0, 1, 2, 3

SINGLE_MEASURES = ("l1", "rel_entropy", "skew", "qfi")
PARTIAL_MEASURES = ("partial_skew", "partial_qfi")

CONVENTION = ("Bipartite matrices use the a-major index convention: basis vector |i>_a|j>_b "
              "is row/column i*d_b + j (the ordering of numpy.kron). Complex entries are [re, im] pairs.")


class CliError(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _dims(text):
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must be comma-separated integers, got {text!r}") from None
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"dims must be positive, got {text!r}")
    return dims


def _parse_basis(spec, d):
    if spec in (None, "computational"):
        return computational_basis(d)
    text = spec[len("angles:"):] if spec.startswith("angles:") else spec
    parts = text.split(",")
    if len(parts) == 2:
        try:
            theta, phi = (float(p) for p in parts)
        except ValueError:
            pass
        else:
            if d != 2:
                raise ValidationError("angle bases are only defined for a qubit party")
            return qubit_basis(theta, phi)
    u = load_unitary(spec)
    if u.shape != (d, d):
        raise ValidationError(f"basis unitary has shape {u.shape}, party dimension is {d}")
    return basis_from_unitary(u, tag=f"file:{spec}")


def _emit(rows, fmt, out):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["measure", "value", "basis_tag", "dims", "seed"], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
        out.write(buf.getvalue())
    else:
        out.write(dumps(rows))


def cmd_measure(args, out):
    rho = load_state(args.state)
    bip = isinstance(rho, BipartiteState)
    names = args.measures.split(",") if args.measures else (PARTIAL_MEASURES if bip else SINGLE_MEASURES)
    unknown = set(names) - set(SINGLE_MEASURES + PARTIAL_MEASURES)
    if unknown:
        raise ValidationError(f"unknown measures: {', '.join(sorted(unknown))}")
    if not bip and set(names) & set(PARTIAL_MEASURES):
        raise ValidationError("partial measures need a bipartite state (dims of length 2)")
    d_a = rho.d_a if bip else rho.dim
    basis = _parse_basis(args.basis, d_a)
    dims = f"{rho.d_a},{rho.d_b}" if bip else str(rho.dim)
    single = rho.reduced("a") if bip else rho
    fns = {
        "l1": lambda: M.coherence_l1(single, basis),
        "rel_entropy": lambda: M.coherence_rel_entropy(single, basis),
        "skew": lambda: M.coherence_skew(single, basis),
        "qfi": lambda: M.coherence_qfi(single, basis),
        "partial_skew": lambda: M.partial_coherence_skew(rho, lueders_extend(basis, rho.d_b)),
        "partial_qfi": lambda: M.partial_coherence_qfi(rho, lueders_extend(basis, rho.d_b)),
    }
    rows = []
    for name in names:
        mv = fns[name]()
        tag = f"reduced-a:{mv.basis_tag}" if bip and name in SINGLE_MEASURES else mv.basis_tag
        rows.append({"measure": name, "value": mv.value, "basis_tag": tag, "dims": dims, "seed": ""})
    _emit(rows, args.format, out)
    return EXIT_OK


def _bipartite(path):
    rho = load_state(path)
    if not isinstance(rho, BipartiteState):
        raise ValidationError(f"{path} is not bipartite (dims must have length 2)")
    return rho


def _config(args):
    kw = {"seed": args.seed}
    if args.starts is not None:
        kw["starts"] = args.starts
    if args.tol is not None:
        kw["value_tolerance"] = args.tol
    return OptimizerConfig(**kw)


def cmd_discord(args, out):
    rho = _bipartite(args.state)
    res = geometric_discord(rho, _config(args))
    report = {
        "value": res.value,
        "argmin_basis": encode_matrix(res.argmin_basis.basis),
        "starts_converged": res.starts_converged,
    }
    if res.oracle_value is not None:
        report["oracle_value"] = res.oracle_value
    out.write(dumps(report))
    return EXIT_OK


def cmd_convert(args, out):
    rho = _bipartite(args.state)
    lueders = lueders_extend(computational_basis(rho.d_a), rho.d_b)
    if args.channel == "cnot":
        channel = generalized_cnot(computational_basis(rho.d_a), rho.d_b)
    elif args.channel == "identity":
        channel = identity_channel(rho.dim)
    else:
        channel = load_channel(args.channel)
    if channel.dim_in != rho.dim or channel.dim_out != rho.dim:
        raise ValidationError(f"channel acts on dimension {channel.dim_in} -> {channel.dim_out}, state has {rho.dim}")
    residual = partial_incoherence_residual(channel, lueders)
    if residual > args.channel_tol:
        raise ValidationError("channel is not partial incoherent w.r.t. the computational Lueders measurement: "
                              f"off-block residual {residual:.3e} > {args.channel_tol:g}")
    cfg = _config(args)
    out_state = apply(channel, rho)

    def block(state):
        return {"C_I^a": M.partial_coherence_skew(state, lueders).value,
                "Q_G": geometric_discord(state, cfg, check_oracle=False).value}

    before, after = block(rho), block(out_state)
    ok = after["Q_G"] <= before["C_I^a"] + args.bound_tol
    out.write(dumps({"input": before, "output": after, "theorem1_satisfied": bool(ok)}))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_verify(args, out):
    if args.suite == "all":
        reports = run_all(args.trials, args.seed, args.dims, args.tol)
    else:
        if args.suite not in SUITES:
            raise ValidationError(f"unknown suite {args.suite!r}; known: all, {', '.join(SUITES)}")
        reports = [run_suite(args.suite, args.trials, args.dims, args.seed, args.tol)]
    out.write(dumps([r.to_dict() for r in reports]))
    for r in reports:
        print(f"{r.suite}: {r.status} ({r.violations}/{r.trials} violations)", file=sys.stderr)
    return EXIT_VIOLATION if any(r.failed for r in reports) else EXIT_OK


def cmd_random(args, out):
    dims = args.dims
    rng = np.random.default_rng(args.seed)
    if args.kind == "pure":
        d = int(np.prod(dims))
        rho = random_haar_pure(d, args.seed)
        data = state_to_dict(BipartiteState(rho, *dims) if len(dims) == 2 else rho)
        check = state_from_dict
    elif args.kind == "mixed":
        d = int(np.prod(dims))
        rho = mixed_from_rng(d, args.env_dim or d, rng)
        data = state_to_dict(BipartiteState(rho, *dims) if len(dims) == 2 else rho)
        check = state_from_dict
    elif args.kind == "incoherent-channel":
        data = channel_to_dict(random_incoherent_channel(int(np.prod(dims)), args.kraus, args.seed))
        check = channel_from_dict
    else:
        if len(dims) != 2:
            raise ValidationError("partial-incoherent-channel needs --dims d_a,d_b")
        data = channel_to_dict(partial_incoherent_from_rng(dims[0], dims[1], rng))
        check = channel_from_dict
    check(json.loads(dumps(data)))
    if args.out in (None, "-"):
        out.write(dumps(data))
    else:
        try:
            save(data, args.out)
        except OSError as exc:
            raise CliError(EXIT_INPUT, f"cannot write {args.out}: {exc.strerror}") from None
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="cohcorr", description="Coherence, partial coherence and geometric discord.",
                                epilog=CONVENTION)
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", help="closed-form coherence measures of a state", epilog=CONVENTION)
    m.add_argument("--state", required=True)
    m.add_argument("--basis", default="computational",
                   help="'computational', 'angles:theta,phi' (qubit party), or a JSON unitary file")
    m.add_argument("--measures", help="comma list from " + ",".join(SINGLE_MEASURES + PARTIAL_MEASURES))
    m.add_argument("--format", choices=["json", "csv"], default="json")
    m.set_defaults(func=cmd_measure)

    def optimizer_flags(q):
        q.add_argument("--starts", type=int)
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--tol", type=float, help="optimizer value tolerance")

    d = sub.add_parser("discord", help="geometric discord by measurement minimization", epilog=CONVENTION)
    d.add_argument("--state", required=True)
    optimizer_flags(d)
    d.set_defaults(func=cmd_discord)

    c = sub.add_parser("convert", help="push a state through a partial incoherent channel", epilog=CONVENTION)
    c.add_argument("--state", required=True)
    c.add_argument("--channel", required=True, help="channel JSON file, 'cnot' or 'identity'")
    c.add_argument("--bound-tol", type=float, default=1e-7)
    c.add_argument("--channel-tol", type=float, default=1e-9)
    optimizer_flags(c)
    c.set_defaults(func=cmd_convert)

    v = sub.add_parser("verify", help="run randomized property suites")
    v.add_argument("--suite", required=True, help="suite name or 'all'; known: " + ", ".join(SUITES))
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--dims", type=_dims)
    v.add_argument("--tol", type=float)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("random", help="write a random state or channel file", epilog=CONVENTION)
    r.add_argument("--kind", required=True, choices=["pure", "mixed", "incoherent-channel", "partial-incoherent-channel"])
    r.add_argument("--dims", type=_dims, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out")
    r.add_argument("--env-dim", type=int, help="environment dimension for --kind mixed (default: full rank)")
    r.add_argument("--kraus", type=int, default=2, help="Kraus count for --kind incoherent-channel")
    r.set_defaults(func=cmd_random)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NotPSDError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OptimizationError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
