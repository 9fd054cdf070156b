"""
verify - run one verification suite; exit 1 if any property fails.
"""

import argparse

from config import config
from handlers.common import CommandResult, RunConfig, add_output_arguments, emit_json
from services.exceptions import ConfigurationError
from services.verification import SUITES
from templates.messages import Messages

SUITE_DEFAULTS = {
    "reduce": {"d": 2, "N": 12, "gamma": 1.0, "b1": 1.0, "bm1": 0.0},
    "laplace": {"gamma": 1.0, "lambda0": 0.5},
    "weyl": {"preset": "gaussian", "M": None, "L": None, "d": 2, "gamma": 1.0, "n_lo": None, "n_hi": None},
    "model": {"d": 1, "gamma": 1.0, "b1": 1.0, "bm1": 0.0, "N": 4096, "k": 20},
    "s2": {"N": 10, "interlace_N": 256},
    "doubling": {"d": 1, "gamma": 1.0, "N": 8192, "index": config.DOUBLING_INDEX, "doublings": 2},
}

FLAGS = (
    "d", "N", "gamma", "b1", "bm1", "lambda0", "preset", "M", "L", "n_lo", "n_hi", "k", "interlace_N",
    "index", "doublings",
)


def add_parser(subparsers):
    parser = subparsers.add_parser("verify", help=Messages.HELP_VERIFY)
    parser.add_argument("suite", choices=sorted(SUITES))
    parser.add_argument("--d", type=int)
    parser.add_argument("--N", type=int)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--b1", type=float)
    parser.add_argument("--bm1", type=float)
    parser.add_argument("--lambda0", type=float)
    parser.add_argument("--preset", choices=["gaussian", "model"])
    parser.add_argument("--M", type=int, help="grid points (weyl)")
    parser.add_argument("--L", type=float, help="grid half-width (weyl)")
    parser.add_argument("--n-lo", dest="n_lo", type=int)
    parser.add_argument("--n-hi", dest="n_hi", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--interlace-N", dest="interlace_N", type=int)
    parser.add_argument("--index", type=int, help="fixed n for the N-doubling deviation")
    parser.add_argument("--doublings", type=int, help="number of N -> 2N steps")
    add_output_arguments(parser)
    parser.set_defaults(handler=cmd_verify)


def cmd_verify(args: argparse.Namespace) -> CommandResult:
    defaults = SUITE_DEFAULTS[args.suite]
    unused = [flag for flag in FLAGS if getattr(args, flag) is not None and flag not in defaults]
    if unused:
        raise ConfigurationError(Messages.ERROR_CONFIG_KEYS.format(command=f"verify {args.suite}", keys=", ".join(unused)))

    cfg = RunConfig.resolve(f"verify {args.suite}", defaults, args, args.config)
    kwargs = dict(cfg.values)
    if args.suite == "weyl":
        n_lo, n_hi = kwargs.pop("n_lo"), kwargs.pop("n_hi")
        kwargs["window"] = (n_lo, n_hi) if n_lo is not None and n_hi is not None else None

    report = SUITES[args.suite](**kwargs)
    record = report.to_dict()
    output = emit_json(record, args.out)

    if report.passed:
        print(Messages.VERIFY_PASSED.format(suite=args.suite, count=len(report.properties)))
        code = 0
    else:
        failed = ", ".join(p.name for p in report.properties if not p.passed)
        print(Messages.VERIFY_FAILED.format(suite=args.suite, failed=failed))
        code = 1
    return CommandResult(code, {**cfg.values, "suite": args.suite}, {"passed": report.passed}, output)
