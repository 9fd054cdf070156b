"""
Service for the run registry.
"""

import json
from datetime import datetime
from typing import Optional

from sqlalchemy import select
from sqlalchemy.ext.asyncio import AsyncSession

from database.models import Run, RunStatus

STATUS_BY_EXIT_CODE = {
    0: RunStatus.OK,
    1: RunStatus.VERIFICATION_FAILED,
    2: RunStatus.USAGE_ERROR,
    3: RunStatus.NUMERIC_FAILURE,
    4: RunStatus.CAPACITY_EXCEEDED,
}


class RunService:
    """Service for recording and listing lab runs"""

    @staticmethod
    async def record_run(
        session: AsyncSession,
        command: str,
        exit_code: int,
        params: dict,
        summary: Optional[dict] = None,
        output_path: Optional[str] = None,
    ) -> Run:
        """Store one run"""
        run = Run(
            command=command,
            status=STATUS_BY_EXIT_CODE.get(exit_code, RunStatus.NUMERIC_FAILURE),
            exit_code=exit_code,
            params=json.dumps(params, sort_keys=True, default=str),
            summary=json.dumps(summary or {}, sort_keys=True, default=str),
            output_path=output_path,
            created_at=datetime.utcnow(),
        )
        session.add(run)
        await session.commit()
        await session.refresh(run)
        return run

    @staticmethod
    async def get_run(session: AsyncSession, run_id: int) -> Optional[Run]:
        """Get run by ID"""
        result = await session.execute(
            select(Run).where(Run.id == run_id)
        )
        return result.scalar_one_or_none()

    @staticmethod
    async def list_runs(
        session: AsyncSession,
        command: Optional[str] = None,
        limit: int = 20,
    ) -> list[Run]:
        """Most recent runs first"""
        query = select(Run).order_by(Run.id.desc()).limit(limit)
        if command:
            query = query.where(Run.command == command)
        result = await session.execute(query)
        return list(result.scalars().all())
