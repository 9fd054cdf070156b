from database.connection import async_session, init_db, dispose_db, engine, registry_session
from database.models import Base, Run, RunStatus

__all__ = [
    "async_session",
    "init_db",
    "dispose_db",
    "engine",
    "registry_session",
    "Base",
    "Run",
    "RunStatus",
]
