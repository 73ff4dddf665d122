"""Command-line front end: ``adjmi <subcommand> ...``.

Results are CSV (or JSON for ``channel``) with nine significant digits.
Output is fully assembled before anything is written, so a failing command
never leaves a partial file. Exit codes: 0 success, 2 invalid input,
3 numerical non-convergence.
"""

import argparse
import os
import sys
import tempfile

import numpy as np

from adjmi import bounds, channels, deletion, formats
from adjmi.actions import generic_action_set
from adjmi.boolean import cor1_upper, exact_mi_boolean, exhaustive_sweep
from adjmi.core import (
    AdjmiError,
    ConvergenceError,
    FiniteDistribution,
    ValidationError,
    adjacency_of,
    binary_entropy,
    entropy,
    mutual_information,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NONCONVERGENCE = 3


def _grid(lo, hi, steps):
    if steps < 1:
        raise ValidationError("--steps must be at least 1")
    if steps == 1:
        return [lo]
    return [round(float(v), 12) for v in np.linspace(lo, hi, steps)]


def _report_csv(rep):
    keys = sorted(rep.diagnostics)
    header = ["method", "value_bits", "iterations"] + keys
    row = [rep.method, rep.value_bits, rep.iterations] + [rep.diagnostics[k] for k in keys]
    return formats.to_csv(header, [row])


# ------------------------------------------------------------------ commands


def cmd_exact(args):
    j = formats.joint_from_json(formats.load_json(args.joint))
    return formats.to_csv(["mi_bits", "hx_bits", "hy_bits"], [[mutual_information(j), entropy(j.px), entropy(j.py)]])


def _load_problem(path):
    obj = formats.load_json(path)
    if "matrix" in obj:
        j = formats.joint_from_json(obj)
        return j, adjacency_of(j)
    return None, formats.adjacency_from_json(obj)


def _action_model(args, j):
    if args.actions is None:
        raise ValidationError("this method needs --actions FILE|generic")
    px = j.px.probs
    channel = j.matrix / np.where(px > 0, px, 1.0)[:, None]
    channel[px == 0] = 1.0 / j.shape[1]
    if args.actions == "generic":
        return generic_action_set(channel)
    m = formats.actions_from_json(formats.load_json(args.actions), n_outputs=j.shape[1])
    return m


def cmd_bound(args):
    j, adj = _load_problem(args.problem)
    if args.upper or args.method == "thm4":
        if j is None:
            raise ValidationError("action bounds need a joint file ({\"matrix\": ...}), not an adjacency file")
        m = _action_model(args, j)
        if m.n_inputs != j.shape[0]:
            raise ValidationError(f"action maps cover {m.n_inputs} inputs, joint has {j.shape[0]}")
        fn = bounds.thm2_upper if args.upper else bounds.thm4_lower
        return _report_csv(fn(j.px, m))
    method = args.method or "thm1"
    if method == "baseline":
        rep = bounds.baseline_lower(adj)
    elif method == "thm1":
        rep = bounds.thm1_lower(adj)
    else:
        k_max = 10_000 if args.k is None else args.k
        rep, _ = bounds.iterative_lower(adj, k_max=k_max, rel_tol=args.rel_tol)
    return _report_csv(rep)


def cmd_channel(args):
    kind = args.kind
    if kind == "bec":
        c = channels.bec(args.eps)
        m = channels.bec_actions(args.eps)
    elif kind == "bsc":
        c = channels.bsc(args.p)
        m = channels.bsc_xor_actions(args.p)
    else:
        c = channels.z_channel()
        m = channels.z_actions()
    if args.format == "channel":
        return formats.dumps(formats.channel_to_json(c))
    if args.format == "actions":
        return formats.dumps(formats.actions_to_json(m))
    j = channels.joint_of(FiniteDistribution.bernoulli(args.input_p), c)
    if args.format == "joint":
        return formats.dumps(formats.joint_to_json(j))
    return formats.dumps(formats.adjacency_to_json(adjacency_of(j)))


def _deletion_config(args):
    return deletion.DeletionConfig(
        k1_max=args.k1_max, k2_max=args.k2_max, t_grid=args.t_grid, theta_grid=args.theta_grid
    )


def cmd_deletion(args):
    if args.lower:
        rep = deletion.deletion_lower_bound(args.d, _deletion_config(args))
        gal = 1.0 - binary_entropy(args.d)
        return formats.to_csv(
            ["d", "new_lower", "gallager_lower", "g", "argmin_theta"],
            [[args.d, rep.value_bits, gal, rep.diagnostics["g"], rep.diagnostics["argmin_theta"]]],
        )
    if args.upper:
        rep = deletion.deletion_upper_bound(args.d, args.q)
        return formats.to_csv(
            ["d", "q", "new_upper", "dsv_upper", "rho_star"],
            [[args.d, args.q, rep.value_bits, deletion.dsv_upper_bound(args.d, args.q), rep.diagnostics["rho_star"]]],
        )
    if args.sweep:
        rows = deletion.deletion_sweep(_grid(args.d_min, args.d_max, args.steps), _deletion_config(args), q=args.q)
        return formats.to_csv(deletion.SWEEP_HEADER, rows)
    j = deletion.finite_n_joint(args.n, args.d, args.q)
    adj = adjacency_of(j)
    return formats.to_csv(
        ["n", "d", "q", "mi_bits", "thm1_bits", "baseline_bits"],
        [[args.n, args.d, args.q, mutual_information(j), bounds.thm1_lower(adj).value_bits,
          bounds.baseline_lower(adj).value_bits]],
    )


def cmd_boolean(args):
    header = ["n", "alpha", "H_f", "bound_bits", "exact_bits_if_computed"]
    if args.exhaustive is not None:
        rows = exhaustive_sweep(args.exhaustive, args.alpha)
        return formats.to_csv(
            ["truth_table", "alpha", "H_f", "bound_bits", "exact_bits"],
            [[bits, args.alpha, h_f, b, e] for bits, h_f, b, e in rows],
        )
    f = formats.read_truth_table(args.truth_table)
    rep = cor1_upper(f, args.alpha)
    exact = exact_mi_boolean(f, args.alpha) if args.exact else ""
    return formats.to_csv(header, [[f.n, args.alpha, rep.diagnostics["H_f"], rep.value_bits, exact]])


def cmd_zfigure(args):
    rows = channels.figure1_data(_grid(args.p_min, args.p_max, args.steps))
    return formats.to_csv(["p", "simple", "thm1", "conv1", "exact"], rows)


# ------------------------------------------------------------------ parsing


def build_parser():
    p = argparse.ArgumentParser(prog="adjmi", description=__doc__.splitlines()[0])
    p.add_argument("-o", "--output", help="write the result here instead of stdout")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", default=argparse.SUPPRESS, help="output file (default stdout)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("exact", parents=[common], help="exact I(X;Y), H(X), H(Y) of a joint JSON file")
    s.add_argument("joint")
    s.set_defaults(func=cmd_exact)

    s = sub.add_parser("bound", parents=[common], help="adjacency or action bounds for a joint/adjacency JSON file")
    s.add_argument("problem")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--method", choices=["baseline", "thm1", "iterative", "thm4"])
    g.add_argument("--upper", action="store_true", help="action upper bound (needs --actions)")
    s.add_argument("--k", type=int, help="full dual iterations for --method iterative")
    s.add_argument("--rel-tol", type=float, default=1e-10)
    s.add_argument("--actions", help="action model JSON file, or 'generic'")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("channel", parents=[common], help="emit a built-in channel as JSON")
    s.add_argument("kind", choices=["bec", "bsc", "z"])
    s.add_argument("--eps", type=float, default=0.25)
    s.add_argument("--p", type=float, default=0.11)
    s.add_argument("--input-p", type=float, default=0.5, help="P(X=1) for joint/adjacency output")
    s.add_argument("--format", choices=["channel", "joint", "adjacency", "actions"], default="joint")
    s.set_defaults(func=cmd_channel)

    s = sub.add_parser("deletion", parents=[common], help="deletion-channel bounds and exact finite-n values")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--lower", action="store_true")
    g.add_argument("--upper", action="store_true")
    g.add_argument("--sweep", action="store_true")
    g.add_argument("--finite", action="store_true")
    s.add_argument("--d", type=float, default=0.2)
    s.add_argument("--q", type=float, default=0.5)
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--d-min", type=float, default=0.05)
    s.add_argument("--d-max", type=float, default=0.95)
    s.add_argument("--steps", type=int, default=19)
    s.add_argument("--k1-max", type=int, default=60)
    s.add_argument("--k2-max", type=int, default=60)
    s.add_argument("--t-grid", type=int, default=4000)
    s.add_argument("--theta-grid", type=int, default=2001)
    s.set_defaults(func=cmd_deletion)

    s = sub.add_parser("boolean", parents=[common], help="Fourier upper bound on I(Y; f(X)) over a BSC")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--truth-table", help="file with one line of 2^n '0'/'1' characters")
    g.add_argument("--exhaustive", type=int, metavar="N", help="all functions on N <= 4 inputs")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--exact", action="store_true", help="also compute the exact MI (n <= 12)")
    s.set_defaults(func=cmd_boolean)

    s = sub.add_parser("zfigure", parents=[common], help="Z-channel bound curves as CSV")
    s.add_argument("--p-min", type=float, default=0.01)
    s.add_argument("--p-max", type=float, default=0.99)
    s.add_argument("--steps", type=int, default=99)
    s.set_defaults(func=cmd_zfigure)
    return p


def _write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".adjmi-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    label = args.command
    if args.command == "bound":
        label += " (upper)" if args.upper else f" ({args.method or 'thm1'})"
    try:
        text = args.func(args)
    except ConvergenceError as exc:
        print(f"adjmi {label}: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (AdjmiError, ValueError) as exc:
        print(f"adjmi {label}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.output:
        try:
            _write_atomic(args.output, text)
        except OSError as exc:
            print(f"adjmi: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_INVALID
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
