"""Command-line interface.

Subcommands:

* ``sample``   — draw correlation matrices and write them as CSV/JSON.
* ``density``  — evaluate log densities for matrices read from a CSV file.
* ``validate`` — run the statistical check suites; exit 1 on any failure.
* ``bench``    — time the three samplers and emit a ratio report.

Exit codes: 0 success, 1 validation failure, 2 usage or parameter
error, 3 I/O failure.  All commands default to the same fixed seed so
repeated runs are byte-identical.
"""

import argparse
import sys

from . import bench as bench_mod
from .densities import lkj_log_density, rw_log_density
from .errors import RandCorrError
from .linalg import check_correlation_matrix
from .matio import (
    read_matrices_csv,
    write_bench_csv,
    write_json,
    write_matrices_csv,
    write_matrices_json,
)
from .samplers import METHODS, sample_batch
from .specfun import dof_to_eta, eta_to_dof
from .streams import DEFAULT_SEED
from .validation import SUITES, run_suite


def _parse_dims(text):
    try:
        dims = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse dimension list {text!r}") from None
    if not dims:
        raise argparse.ArgumentTypeError("dimension list is empty")
    return dims


def _parse_methods(text):
    methods = tuple(part.strip() for part in text.split(",") if part.strip())
    for m in methods:
        if m not in METHODS:
            raise argparse.ArgumentTypeError(f"unknown method {m!r}")
    return methods


def build_parser():
    parser = argparse.ArgumentParser(
        prog="randcorr",
        description="Random correlation matrices: sampling, densities, validation, benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw correlation matrices to CSV or JSON")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--dim", "-T", type=int, required=True, help="matrix dimension")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--dof", "-m", type=float, help="degrees of freedom (> dim - 1)")
    group.add_argument("--eta", type=float, help="shape eta (> 0); m = 2*eta + dim - 1")
    p.add_argument("--n", type=int, default=1, help="number of matrices (default 1)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("density", help="evaluate log densities for matrices in a CSV file")
    p.add_argument("matrix_file", help="CSV file in the packed sample layout")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--dof", "-m", type=float, help="evaluate the dof-parameterized density")
    group.add_argument("--eta", type=float, help="evaluate the eta-parameterized (LKJ) density")
    p.add_argument(
        "--check-theorem",
        action="store_true",
        help="also print |difference| between the two equivalent densities per row",
    )
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("validate", help="run statistical validation suites")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", help="JSON report path (default: stdout)")
    p.add_argument(
        "--perturb",
        type=float,
        default=0.0,
        help="inject a perturbation into the constant checks (sensitivity testing)",
    )
    p.add_argument(
        "--eta-shift",
        type=float,
        default=0.0,
        help="shift the onion sampler's eta in the theorem suite (sensitivity testing)",
    )
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="time the samplers and report ratios")
    p.add_argument("--dims", type=_parse_dims, default=[20, 40, 80],
                   help="comma-separated dimensions (default 20,40,80)")
    p.add_argument("--n", type=int, default=5000, help="matrices per cell (default 5000)")
    p.add_argument("--methods", type=_parse_methods, default=bench_mod.METHOD_ORDER)
    p.add_argument("--eta", type=float, default=1.0,
                   help="shape; degrees of freedom follow as m = 2*eta + dim - 1 (default 1)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_bench)

    return parser


def _output_target(path):
    return path if path else sys.stdout


def cmd_sample(args):
    if args.method == "onion":
        param = args.eta if args.eta is not None else dof_to_eta(args.dim, args.dof)
    else:
        param = args.dof if args.dof is not None else eta_to_dof(args.dim, args.eta)
    batch = sample_batch(args.method, args.dim, param, args.n, args.seed)
    writer = write_matrices_csv if args.format == "csv" else write_matrices_json
    writer(_output_target(args.out), batch)
    return 0


def cmd_density(args):
    matrices, dim = read_matrices_csv(args.matrix_file)
    if args.dof is not None:
        m, eta, primary = args.dof, dof_to_eta(dim, args.dof), "dof"
    else:
        m, eta, primary = eta_to_dof(dim, args.eta), args.eta, "eta"
    for i, P in enumerate(matrices, start=1):
        try:
            check_correlation_matrix(P)
        except RandCorrError as exc:
            print(f"error: row {i}: {exc}", file=sys.stderr)
            return 2
        rw = rw_log_density(P, m).value
        lkj = lkj_log_density(P, eta).value
        value = rw if primary == "dof" else lkj
        if args.check_theorem:
            print(f"{value!r} {abs(rw - lkj)!r}")
        else:
            print(f"{value!r}")
    return 0


def cmd_validate(args):
    reports = run_suite(args.suite, args.seed, args.perturb, args.eta_shift)
    for report in reports:
        for line in report.lines():
            print(line, file=sys.stderr)
    passed = all(r.passed for r in reports)
    payload = {
        "seed": args.seed,
        "passed": passed,
        "suites": [r.to_dict() for r in reports],
    }
    write_json(_output_target(args.out), payload)
    return 0 if passed else 1


def cmd_bench(args):
    report = bench_mod.run_benchmark(
        dims=args.dims,
        n=args.n,
        methods=args.methods,
        seed=args.seed,
        repetitions=args.repetitions,
        eta=args.eta,
    )
    for line in report.lines():
        print(line, file=sys.stderr)
    if args.format == "csv":
        write_bench_csv(_output_target(args.out), report)
    else:
        write_json(_output_target(args.out), report.to_dict())
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RandCorrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
