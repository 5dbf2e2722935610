"""Command-line front end.

Reports go to stdout as JSON, diagnostics to stderr. Exit codes: 0 when every
check passes, 1 on a numeric or check failure, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import geometry, isometry, sampling, suites
from .constants import DEFAULT_GAMMA, DEFAULT_P
from .errors import BudgetExceeded, InvalidInput, NotAnIsometry, SchattenError, UnsupportedExponent
from .matcore import loads_matrix, matrix_to_dict, svd
from .reconstruct import ProfileOracle, reconstruct
from .schatten import schatten_norm

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None


def _emit(obj, out):
    text = obj if isinstance(obj, str) else json.dumps(obj, sort_keys=True, allow_nan=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_norm(args):
    a = loads_matrix(_read(args.input))
    _emit(f"{schatten_norm(a, args.p):.15g}", args.out)
    return EXIT_OK


def cmd_svd(args):
    res = svd(loads_matrix(_read(args.input)))
    _emit({"sigmas": res.sigmas.tolist(), "left": matrix_to_dict(res.left),
           "right": matrix_to_dict(res.right)}, args.out)
    return EXIT_OK


def cmd_profile(args):
    a = loads_matrix(_read(args.input))
    summary = geometry.profile_summary(a, args.gamma, args.p)
    found, _, _ = geometry.sampled_minimum(a, args.gamma, args.p, samples=args.samples,
                                           seed=args.seed)
    _emit({"summary": summary.to_dict(), "sampled_min": found,
           "excess": found - summary.min_value}, args.out)
    return EXIT_OK


def cmd_reconstruct(args):
    a = loads_matrix(_read(args.input))
    trace = open(args.trace, "w", encoding="utf-8") if args.trace else None
    try:
        oracle = ProfileOracle.from_matrix(a, args.gamma, args.p, trace=trace)
        status = EXIT_OK
        try:
            b = reconstruct(oracle, args.budget, seed=args.seed)
        except BudgetExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            b, status = exc.best, EXIT_FAIL
    finally:
        if trace is not None:
            trace.close()
    _emit({"matrix": matrix_to_dict(b), "queries": oracle.count,
           "error": schatten_norm(b - a, args.p)}, args.out)
    return status


def cmd_classify(args):
    T = isometry.CanonicalIsometry.loads(_read(args.input))
    delta = isometry.SphereMap.from_canonical(T, args.p)
    R = isometry.recover_wigner(delta, seed=args.seed)
    err = isometry.verify_extension(delta, R, args.samples, seed=args.seed)
    _emit({"form": R.form.value, "max_error": err, "isometry": R.to_dict()}, args.out)
    return EXIT_OK if err <= 1e-8 else EXIT_FAIL


def cmd_check(args):
    names = suites.SUITES if args.suite == "all" else (args.suite,)
    reports = []
    for name in names:
        takes_samples = name in ("minval", "wigner") and args.samples is not None
        extra = {"samples": args.samples} if takes_samples else {}
        r = suites.run_suite(name, args.trials, args.seed, p=args.p, n=args.n, **extra)
        print(f"{name}: {r.failures}/{r.trials} failures in {r.elapsed:.2f}s", file=sys.stderr)
        reports.append(r.to_dict())
    _emit(reports[0] if len(reports) == 1 else reports, args.out)
    return EXIT_OK if all(r["failures"] == 0 for r in reports) else EXIT_FAIL


def cmd_gen(args):
    rng = sampling.rng_for(args.seed)
    n = args.n
    if args.kind == "unitary":
        obj = matrix_to_dict(sampling.unitary(rng, n))
    elif args.kind == "sphere":
        obj = matrix_to_dict(sampling.sphere_point(rng, n, args.p))
    elif args.kind == "minpi":
        obj = matrix_to_dict(sampling.minimal_pi(rng, n))
    else:
        obj = isometry.random_canonical(rng, n, args.form).to_dict()
    _emit(obj, args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value < 1:
            raise argparse.ArgumentTypeError("must be positive")
        return value
    return parse


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=float, default=DEFAULT_P)
    common.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    common.add_argument("--n", type=_positive(int), default=3)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=_positive(int), default=100)
    common.add_argument("--samples", type=_positive(int), default=None)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = _Parser(prog="schattenkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("norm", parents=[common], help="Schatten p-norm of a matrix file")
    p.add_argument("input")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("svd", parents=[common], help="singular value decomposition")
    p.add_argument("input")
    p.set_defaults(func=cmd_svd)

    p = sub.add_parser("profile", parents=[common], help="minimum of the distance profile")
    p.add_argument("input")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("reconstruct", parents=[common], help="rebuild a matrix from its profile oracle")
    p.add_argument("input")
    p.add_argument("--budget", type=_positive(int), default=500_000)
    p.add_argument("--trace", default=None, help="JSON-lines file for (query, value) pairs")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("classify", parents=[common], help="recover the canonical form of an isometry")
    p.add_argument("input")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check", parents=[common], help="run a property suite")
    p.add_argument("suite", choices=(*suites.SUITES, "all"))
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", parents=[common], help="generate a random instance")
    p.add_argument("kind", choices=("unitary", "sphere", "minpi", "canonical"))
    p.add_argument("--form", choices=[f.value for f in isometry.Form], default="LINEAR_UXV")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    defaults = {"profile": 512, "classify": 500}
    if args.samples is None and args.command in defaults:
        args.samples = defaults[args.command]
    try:
        return args.func(args)
    except UnsupportedExponent as exc:
        print(f"error: unsupported exponent: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotAnIsometry as exc:
        print(f"error: not an isometry: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SchattenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
