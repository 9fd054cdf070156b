from datetime import datetime
from enum import Enum
from typing import Optional

from sqlalchemy import Integer, String, Text, DateTime, Enum as SQLEnum
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column


class Base(DeclarativeBase):
    pass


class RunStatus(str, Enum):
    """Outcome of a CLI invocation"""
    OK = "ok"
    VERIFICATION_FAILED = "verification_failed"
    USAGE_ERROR = "usage_error"  # bad flags, domain or configuration errors
    NUMERIC_FAILURE = "numeric_failure"
    CAPACITY_EXCEEDED = "capacity_exceeded"


class Run(Base):
    """One recorded lab run"""
    __tablename__ = "runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    command: Mapped[str] = mapped_column(String(64), nullable=False)
    status: Mapped[RunStatus] = mapped_column(SQLEnum(RunStatus), default=RunStatus.OK)
    exit_code: Mapped[int] = mapped_column(Integer, default=0)

    # JSON-encoded parameters and result summary
    params: Mapped[str] = mapped_column(Text, default="{}")
    summary: Mapped[str] = mapped_column(Text, default="{}")
    output_path: Mapped[Optional[str]] = mapped_column(String(1024), nullable=True)

    created_at: Mapped[datetime] = mapped_column(DateTime, default=datetime.utcnow)
