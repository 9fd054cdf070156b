"""
spectrum - signed eigenvalues of Gamma_N as CSV plus a JSON sidecar.
"""

import argparse
import csv
import json
import logging
from pathlib import Path

from config import config
from handlers.common import (
    SPEC_DEFAULTS,
    CommandResult,
    PathLike,
    RunConfig,
    add_output_arguments,
    add_spec_arguments,
    column,
    write_csv,
    write_json,
    spec_from_config,
)
from services.exceptions import ContractError, DomainError
from services.params import SymbolSpec
from services.reduction import build_weighted_hankel
from services.speceng import Solver, SpectrumResult, compute_spectrum
from templates.messages import Messages

logger = logging.getLogger(__name__)

HEADER = ("n", "lambda_plus", "residual_plus", "lambda_minus", "residual_minus")

DEFAULTS = {
    **SPEC_DEFAULTS,
    "N": 1024,
    "k": 20,
    "solver": Solver.AUTO.value,
    "tol": None,
    "max_iter": None,
    "seed": config.SEED,
}


def add_parser(subparsers):
    parser = subparsers.add_parser("spectrum", help=Messages.HELP_SPECTRUM)
    add_spec_arguments(parser)
    parser.add_argument("--N", type=int, help="truncation order")
    parser.add_argument("--k", type=int, help="eigenvalues per sign")
    parser.add_argument("--solver", choices=[s.value for s in Solver])
    parser.add_argument("--tol", type=float, help="Lanczos residual tolerance")
    parser.add_argument("--max-iter", dest="max_iter", type=int)
    parser.add_argument("--seed", type=int)
    add_output_arguments(parser, out_required=True)
    parser.set_defaults(handler=cmd_spectrum)


def cmd_spectrum(args: argparse.Namespace) -> CommandResult:
    cfg = RunConfig.resolve("spectrum", DEFAULTS, args, args.config)
    spec = spec_from_config(cfg)
    N, k = cfg["N"], cfg["k"]
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")

    out = Path(args.out)
    metadata = {"spec": spec.to_dict(), "N": N, "k": k, "seed": cfg["seed"]}
    if k == 0:
        result = SpectrumResult((), (), N, Solver(cfg["solver"]))
    else:
        matrix = build_weighted_hankel(spec, N)
        result = compute_spectrum(matrix, k, cfg["solver"], cfg["tol"], cfg["max_iter"], cfg["seed"]).truncated(k)
        if not result.complete:
            logger.warning(Messages.SPECTRUM_PARTIAL.format(converged=result.converged_count, k=k))

    rows = [
        (
            n,
            column(result.pos, n),
            column(result.residuals_pos, n),
            column(result.neg, n),
            column(result.residuals_neg, n),
        )
        for n in range(1, max(len(result.pos), len(result.neg)) + 1)
    ]
    write_csv(out, HEADER, rows)
    metadata.update(
        solver=result.solver.value,
        converged_count=result.converged_count,
        complete=result.complete,
        kernel_dimension=result.kernel_dimension,
        norm_estimate=result.norm_estimate,
        iterations=result.iterations,
    )
    write_json(out.with_suffix(".json"), metadata)
    return CommandResult(0, cfg.values, metadata, str(out))


def read_spectrum(path: PathLike) -> tuple[SymbolSpec, SpectrumResult]:
    """Load the symbol and spectrum written by the spectrum command"""
    path = Path(path)
    try:
        metadata = json.loads(path.with_suffix(".json").read_text(encoding="utf-8"))
        with path.open(encoding="utf-8", newline="") as fh:
            rows = list(csv.DictReader(fh))
    except (OSError, ValueError) as exc:
        raise ContractError(f"cannot read spectrum output {path}: {exc}") from exc

    def values(name: str) -> list[float]:
        return [float(row[name]) for row in rows if row[name]]

    result = SpectrumResult.from_dict(
        {
            **metadata,
            "pos": values("lambda_plus"),
            "neg": values("lambda_minus"),
            "residuals_pos": values("residual_plus"),
            "residuals_neg": values("residual_minus"),
        }
    )
    return SymbolSpec.from_dict(metadata["spec"]), result
