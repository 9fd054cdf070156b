import asyncio
import json

from database import registry_session
from database.models import RunStatus
from services.run_service import RunService


def _run(scenario):
    async def wrapper():
        async with registry_session() as session:
            return await scenario(session)

    return asyncio.run(wrapper())


def test_record_and_fetch():
    async def scenario(session):
        run = await RunService.record_run(
            session, "registry-test", 1, {"N": 12, "d": 2}, {"passed": False}, "out.json"
        )
        return run.id, await RunService.get_run(session, run.id)

    run_id, fetched = _run(scenario)
    assert fetched.id == run_id
    assert fetched.status is RunStatus.VERIFICATION_FAILED
    assert json.loads(fetched.params) == {"N": 12, "d": 2}
    assert json.loads(fetched.summary) == {"passed": False}
    assert fetched.output_path == "out.json"


def test_list_runs_newest_first():
    async def scenario(session):
        for code in (0, 4, 3):
            await RunService.record_run(session, "registry-order", code, {})
        return await RunService.list_runs(session, "registry-order", limit=2)

    runs = _run(scenario)
    assert [run.exit_code for run in runs] == [3, 4]
    assert runs[0].status is RunStatus.NUMERIC_FAILURE
    assert runs[1].status is RunStatus.CAPACITY_EXCEEDED


def test_unknown_exit_code_is_numeric_failure():
    async def scenario(session):
        return await RunService.record_run(session, "registry-odd", 130, {})

    assert _run(scenario).status is RunStatus.NUMERIC_FAILURE


def test_missing_run():
    async def scenario(session):
        return await RunService.get_run(session, 10 ** 9)

    assert _run(scenario) is None
