"""
runs - list the run registry.
"""

import argparse
import asyncio

from database import registry_session
from handlers.common import CommandResult
from services.run_service import RunService
from templates.messages import Messages


def add_parser(subparsers):
    parser = subparsers.add_parser("runs", help=Messages.HELP_RUNS)
    parser.add_argument("--limit", type=int, default=20)
    parser.add_argument("--command", dest="filter_command", help="only runs of this subcommand")
    parser.set_defaults(handler=cmd_runs)


async def _list_runs(command, limit):
    async with registry_session() as session:
        return await RunService.list_runs(session, command, limit)


def cmd_runs(args: argparse.Namespace) -> CommandResult:
    runs = asyncio.run(_list_runs(args.filter_command, args.limit))
    if not runs:
        print(Messages.NO_RUNS)
    for run in runs:
        print(
            Messages.RUN_LINE.format(
                id=run.id,
                created_at=run.created_at,
                command=run.command,
                status=run.status.value,
                exit_code=run.exit_code,
                output=run.output_path or "",
            )
        )
    return CommandResult(0, {"limit": args.limit, "command": args.filter_command}, {"count": len(runs)})


async def record(command: str, result: CommandResult):
    """Store one invocation in the registry"""
    async with registry_session() as session:
        await RunService.record_run(
            session,
            command,
            result.exit_code,
            result.params,
            result.summary,
            result.output_path,
        )
