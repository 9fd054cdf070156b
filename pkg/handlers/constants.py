"""
constants - C_{d,gamma} and the signed leading coefficients.
"""

import argparse

from config import config
from handlers.common import (
    SPEC_DEFAULTS,
    CommandResult,
    RunConfig,
    add_output_arguments,
    add_spec_arguments,
    emit_json,
    spec_from_config,
)
from services.constants import ConstantMethod, asymptotic_constants
from services.quadrature import QuadratureConfig
from templates.messages import Messages

DEFAULTS = {**SPEC_DEFAULTS, "tol": config.QUAD_TOL, "method": ConstantMethod.CLOSED.value}


def add_parser(subparsers):
    parser = subparsers.add_parser("constants", help=Messages.HELP_CONSTANTS)
    add_spec_arguments(parser)
    parser.add_argument("--tol", type=float, help="absolute quadrature tolerance")
    parser.add_argument("--method", choices=[m.value for m in ConstantMethod])
    add_output_arguments(parser)
    parser.set_defaults(handler=cmd_constants)


def cmd_constants(args: argparse.Namespace) -> CommandResult:
    """Compute and print (or write) the constants record"""
    cfg = RunConfig.resolve("constants", DEFAULTS, args, args.config)
    spec = spec_from_config(cfg)
    consts = asymptotic_constants(spec, QuadratureConfig(tol=cfg["tol"]), cfg["method"])
    record = consts.to_dict()
    output = emit_json(record, args.out)
    return CommandResult(0, cfg.values, record, output)
