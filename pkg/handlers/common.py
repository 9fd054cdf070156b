"""
Common CLI plumbing - run configuration, symbol flags, output writers.
"""

import argparse
import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

from services.exceptions import ConfigurationError
from services.params import SymbolKind, SymbolSpec
from templates.messages import Messages

logger = logging.getLogger(__name__)

SPEC_DEFAULTS = {"d": 1, "gamma": 1.0, "b1": 1.0, "bm1": 0.0, "kind": None}

PathLike = Union[str, Path]


@dataclass(frozen=True)
class CommandResult:
    """Outcome of a subcommand, as recorded in the run registry"""
    exit_code: int
    params: dict
    summary: dict = field(default_factory=dict)
    output_path: Optional[str] = None


@dataclass(frozen=True)
class RunConfig:
    """Parameters of one subcommand: flags > config file > defaults"""
    command: str
    values: dict

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    @classmethod
    def resolve(
        cls,
        command: str,
        defaults: dict,
        args: argparse.Namespace,
        config_path: Optional[PathLike] = None,
    ) -> "RunConfig":
        values = dict(defaults)
        if config_path:
            values.update(_read_config_file(command, config_path, defaults))
        for key in defaults:
            flag = getattr(args, key, None)
            if flag is not None:
                values[key] = flag
        return cls(command, values)


def _read_config_file(command: str, path: PathLike, defaults: dict) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ConfigurationError(Messages.ERROR_CONFIG_FILE.format(path=path, error=exc)) from exc
    if not isinstance(data, dict):
        raise ConfigurationError(Messages.ERROR_CONFIG_FILE.format(path=path, error="expected a JSON object"))
    unknown = sorted(set(data) - set(defaults))
    if unknown:
        raise ConfigurationError(Messages.ERROR_CONFIG_KEYS.format(command=command, keys=", ".join(unknown)))
    return data


def add_spec_arguments(parser: argparse.ArgumentParser):
    """Flags describing a SymbolSpec (defaults come from RunConfig)"""
    parser.add_argument("--d", type=int, help="number of variables")
    parser.add_argument("--gamma", type=float, help="logarithmic exponent")
    parser.add_argument("--b1", type=float, help="coefficient of the non-oscillating part")
    parser.add_argument("--bm1", type=float, help="coefficient of the (-1)^j part")
    parser.add_argument("--kind", choices=[kind.value for kind in SymbolKind])


def add_output_arguments(parser: argparse.ArgumentParser, out_required: bool = False):
    parser.add_argument("--config", help="JSON file with parameters")
    parser.add_argument("--out", required=out_required, help="output path")


def spec_from_config(cfg: RunConfig) -> SymbolSpec:
    b1, bm1 = float(cfg["b1"]), float(cfg["bm1"])
    kind = cfg["kind"]
    if kind is None:
        kind = SymbolKind.PURE_POWER if (b1, bm1) == (1.0, 0.0) else SymbolKind.GENERAL
    return SymbolSpec(d=cfg["d"], gamma=cfg["gamma"], b1=b1, bm1=bm1, kind=kind)


def format_cell(value: Any) -> str:
    """CSV cell: blank for missing, shortest round-trip repr for floats"""
    if value is None:
        return ""
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return repr(float(value))


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(value) for value in row])
    logger.info(Messages.WROTE.format(path=path))
    return path


def dump_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)


def write_json(path: PathLike, data: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(data) + "\n", encoding="utf-8")
    logger.info(Messages.WROTE.format(path=path))
    return path


def emit_json(data: Any, out: Optional[PathLike]) -> Optional[str]:
    """Write to out, or print to stdout when no path is given"""
    if out:
        return str(write_json(out, data))
    print(dump_json(data))
    return None


def column(values: Sequence[float], n: int) -> Optional[float]:
    """values[n - 1] or None past the end"""
    return values[n - 1] if n <= len(values) else None
