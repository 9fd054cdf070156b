"""
study - asymptotic, model-compare and parity-split experiments.
"""

import argparse
from pathlib import Path

from config import config
from handlers.common import (
    SPEC_DEFAULTS,
    CommandResult,
    RunConfig,
    add_output_arguments,
    add_spec_arguments,
    column,
    spec_from_config,
    write_csv,
    write_json,
)
from services.lab import StudyKind, asymptotic_study, model_compare, parity_split_study
from services.speceng import Solver
from templates.messages import Messages

HEADER = ("n", "lambda_plus", "lambda_minus", "ratio_plus", "ratio_minus")

DEFAULTS = {
    **SPEC_DEFAULTS,
    "N": 4096,
    "k": 40,
    "n_lo": 2,
    "n_hi": 16,
    "solver": Solver.AUTO.value,
    "tol": None,
    "seed": config.SEED,
    "reference": "model",
}


def add_parser(subparsers):
    parser = subparsers.add_parser("study", help=Messages.HELP_STUDY)
    parser.add_argument("study_kind", metavar="kind", choices=[k.value for k in StudyKind])
    add_spec_arguments(parser)
    parser.add_argument("--N", type=int, help="truncation order")
    parser.add_argument("--k", type=int, help="eigenvalues per sign")
    parser.add_argument("--n-lo", dest="n_lo", type=int, help="fit window start")
    parser.add_argument("--n-hi", dest="n_hi", type=int, help="fit window end")
    parser.add_argument("--solver", choices=[s.value for s in Solver])
    parser.add_argument("--tol", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument(
        "--reference",
        choices=["model", "target"],
        help="model-compare: subtract the model sequence (default) or the target itself",
    )
    parser.add_argument("--plot", action="store_true", help="also write <stem>_plot.py")
    add_output_arguments(parser, out_required=True)
    parser.set_defaults(handler=cmd_study)


def _write_plot_script(out: Path, title: str) -> Path:
    script = out.with_name(f"{out.stem}_plot.py")
    script.write_text(
        Messages.PLOT_SCRIPT.format(
            csv_path=str(out),
            png_path=str(out.with_suffix(".png")),
            title=title,
        ),
        encoding="utf-8",
    )
    return script


def cmd_study(args: argparse.Namespace) -> CommandResult:
    kind = StudyKind(args.study_kind)
    cfg = RunConfig.resolve(f"study {kind.value}", DEFAULTS, args, args.config)
    spec = spec_from_config(cfg)
    N, k = cfg["N"], cfg["k"]
    window = (cfg["n_lo"], cfg["n_hi"])
    solver, tol, seed = cfg["solver"], cfg["tol"], cfg["seed"]

    if kind is StudyKind.ASYMPTOTIC:
        report = asymptotic_study(spec, N, k, window, solver, tol, seed)
    elif kind is StudyKind.MODEL_COMPARE:
        reference = spec.as_model() if cfg["reference"] == "model" else spec
        report = model_compare(spec, reference, N, k, solver, tol, seed)
    else:
        report = parity_split_study(spec, N, k, window, solver, tol, seed)

    out = Path(args.out)
    count = max(len(report.lambda_plus), len(report.lambda_minus))
    rows = [
        (
            n,
            column(report.lambda_plus, n),
            column(report.lambda_minus, n),
            column(report.ratio_plus, n),
            column(report.ratio_minus, n),
        )
        for n in range(1, count + 1)
    ]
    write_csv(out, HEADER, rows)
    write_json(out.with_suffix(".json"), report.to_dict())
    if args.plot:
        _write_plot_script(out, f"{kind.value} d={spec.d} gamma={spec.gamma} N={N}")

    summary = {
        "kind": kind.value,
        "rows": count,
        "checks": report.checks,
        "slope_plus": report.fits["plus"].slope if "plus" in report.fits else None,
    }
    return CommandResult(0, {**cfg.values, "kind": kind.value}, summary, str(out))
