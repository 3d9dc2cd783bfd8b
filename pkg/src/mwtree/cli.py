"""Command-line interface.

Exit codes: 0 success, 1 a check failed (or the closed form does not apply),
2 usage or input error.
"""
import argparse
import json
import sys

import numpy as np

from . import formulas, matrices
from .errors import BetaSingular, Degree2Present, MWTreeError, ParseError, TreeError
from .fuzz import FuzzConfig, fuzz
from .generate import TOPOLOGIES, WEIGHT_MODES
from .io import EXAMPLES, example_text, matrix_to_text, read_tree
from .verify import check_inverse_vs_oracle, run_all

MATRIX_CHOICES = ("D", "delta", "L", "Q", "H", "F", "beta", "eta")
_STATUS_LABEL = {"pass": "Passed", "fail": "FAILED", "skip": "Skipped"}


class UsageError(Exception):
    pass


def _range(text):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _emit(args, payload, human):
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(human)


def _integer_weights(t):
    return bool(np.all(t.weights == np.round(t.weights)))


def cmd_det(args):
    t = read_tree(args.file)
    r = formulas.det_formula(t)
    exact = None
    if _integer_weights(t) and abs(r.value) < 2.0 ** 53:
        exact = int(round(r.value))
    payload = {
        "branch": r.branch.value,
        "value": r.value,
        "sign": r.sign,
        "log_abs": r.log_abs if r.sign else None,
        "overflow": r.overflow,
        "exact": exact,
        "factors": [{"name": f.name, "label": f.label, "value": f.value} for f in r.factors],
    }
    lines = [
        f"branch:     {r.branch.value}",
        f"det(Delta): {r.value:+.11e}" + (f"  (= {exact})" if exact is not None else ""),
        f"factors:    {r.breakdown()}",
    ]
    lines += [f"  {f.name:<24} {f.label}" for f in r.factors]
    if r.overflow:
        lines.append("warning: value saturated; log|det| = %.12g" % r.log_abs)
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_inv(args):
    t = read_tree(args.file)
    res = formulas.inverse_formula(t)
    payload = {"delta_inv": res.delta_inv.tolist(), "beta": res.beta.tolist(), "eta": res.eta.tolist()}
    lines = ["Delta^-1 =", matrix_to_text(res.delta_inv)]
    code = 0
    if args.check:
        rep = check_inverse_vs_oracle(t)
        delta = matrices.squared_distance_matrix(t)
        resid = float(np.linalg.norm(delta @ res.delta_inv - np.eye(delta.shape[0])))
        payload["check"] = rep.to_record()
        payload["check"]["identity_residual"] = resid
        lines += [
            f"|Delta X - I|_F          = {resid:.3e}",
            f"|X - LU inverse| / scale = {rep.ratio:.3e}  ({rep.status}, tol {rep.tolerance:.0e})",
        ]
        code = 1 if rep.failed else 0
    _emit(args, payload, "\n".join(lines))
    return code


def cmd_verify(args):
    t = read_tree(args.file)
    reports = run_all(t)
    if args.json:
        print(json.dumps([r.to_record() for r in reports], sort_keys=True, indent=2))
    else:
        print(f"{'identity':<28} {'ratio':>10} {'tol':>7}  {'status':<7} regime")
        for r in reports:
            ratio = "-" if r.status == "skip" else f"{r.ratio:.2e}"
            flag = "" if r.asserted else " (not asserted)"
            status = _STATUS_LABEL[r.status]
            print(f"{r.identity:<28} {ratio:>10} {r.tolerance:>7.0e}  {status:<7} {r.regime}{flag}")
    return 1 if any(r.failed for r in reports) else 0


def cmd_dump(args):
    t = read_tree(args.file)
    which = args.matrix
    if which == "beta":
        a = formulas.beta(t)
    elif which == "eta":
        a = formulas.eta(t)
    else:
        m = matrices.build(t)
        a = {"D": m.D, "delta": m.Delta, "L": m.L, "Q": m.QI, "H": m.HI, "F": m.F}[which]
    _emit(args, {"matrix": which, "shape": list(a.shape), "data": a.tolist()}, matrix_to_text(a))
    return 0


def cmd_fuzz(args):
    try:
        config = FuzzConfig(
            trials=args.trials, n_range=args.n, s_range=args.s, weight_mode=args.mode,
            seed=args.seed, topology=args.topology, nonsingular_beta=args.nonsingular_beta,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = fuzz(config)
    if args.json:
        print(report.to_json())
    else:
        print(f"{config.trials} trials, n {config.n_range[0]}:{config.n_range[1]}, "
              f"s {config.s_range[0]}:{config.s_range[1]}, mode {config.weight_mode}, "
              f"topology {config.topology}, seed {config.seed}")
        print(f"{'identity':<28} {'pass':>5} {'fail':>5} {'skip':>5} {'max ratio':>10}  worst")
        for name, st in report.identities.items():
            print(f"{name:<28} {st.passed:>5} {st.failed:>5} {st.skipped:>5} {st.max_ratio:>10.2e}  {st.worst_trial}")
        d, inv = report.det_agreement, report.inverse_agreement
        print(f"det: {d['nonsingular_trials']} nonsingular (max rel err {d['max_rel_err']:.2e}), "
              f"{d['singular_trials']} singular (max pivot ratio {d['max_pivot_ratio']:.2e})")
        print(f"inverse: {inv['trials']} trials (max rel err {inv['max_rel_err']:.2e})")
        for f in report.failures[:20]:
            tag = "" if f.asserted else " [not asserted]"
            print(f"  fail {f.identity} seed={f.seed} trial={f.trial} ratio={f.ratio:.3e}{tag}")
        if len(report.failures) > 20:
            print(f"  ... {len(report.failures) - 20} more")
    return 0 if report.ok else 1


def cmd_example(args):
    sys.stdout.write(example_text(args.name))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="mwtree", description="Squared distance matrices of matrix-weighted trees.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, file_arg=True):
        sp = sub.add_parser(name, help=help_)
        if file_arg:
            sp.add_argument("file", help="tree file (JSON)")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=fn)
        return sp

    add("det", cmd_det, "closed-form determinant of Delta")
    sp = add("inv", cmd_inv, "closed-form inverse of Delta")
    sp.add_argument("--check", action="store_true", help="compare against the LU inverse")
    add("verify", cmd_verify, "run every identity check")
    sp = add("dump", cmd_dump, "print one derived matrix")
    sp.add_argument("--matrix", required=True, choices=MATRIX_CHOICES)
    sp = add("fuzz", cmd_fuzz, "seeded random campaign", file_arg=False)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--n", type=_range, default=(3, 12), metavar="A:B")
    sp.add_argument("--s", type=_range, default=(1, 3), metavar="A:B")
    sp.add_argument("--mode", choices=WEIGHT_MODES, default="diagonal")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--topology", choices=("mixed",) + TOPOLOGIES, default="mixed")
    sp.add_argument("--nonsingular-beta", action="store_true",
                    help="redraw weights until beta is invertible")
    sp = add("example", cmd_example, "print a bundled example tree", file_arg=False)
    sp.add_argument("name", choices=EXAMPLES)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, TreeError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (Degree2Present, BetaSingular) as exc:
        print(f"not applicable: {exc}", file=sys.stderr)
        return 1
    except MWTreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
