"""
Run registry database: async engine and session factory.
"""

import os
from contextlib import asynccontextmanager
from typing import AsyncIterator

from sqlalchemy.engine import make_url
from sqlalchemy.ext.asyncio import create_async_engine, AsyncSession, async_sessionmaker

from config import config
from database.models import Base


def _ensure_directory(url: str):
    """Create the parent directory of a file-backed SQLite database"""
    database = make_url(url).database
    if database and database != ":memory:":
        os.makedirs(os.path.dirname(os.path.abspath(database)), exist_ok=True)


_ensure_directory(config.DATABASE_URL)

engine = create_async_engine(
    config.DATABASE_URL,
    echo=False,
)

async_session = async_sessionmaker(
    engine,
    class_=AsyncSession,
    expire_on_commit=False,
)


async def init_db():
    """Create the runs table if missing"""
    async with engine.begin() as conn:
        await conn.run_sync(Base.metadata.create_all)


async def dispose_db():
    """Close pooled connections before the event loop ends"""
    await engine.dispose()


@asynccontextmanager
async def registry_session() -> AsyncIterator[AsyncSession]:
    """Session on an initialized registry; the pool is released on exit"""
    await init_db()
    try:
        async with async_session() as session:
            yield session
    finally:
        await dispose_db()
