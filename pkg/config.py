import os
from typing import Callable, Optional, TypeVar

from dotenv import load_dotenv

load_dotenv()

T = TypeVar("T", int, float)

# Unparseable environment values, reported by Config.validate()
ENV_ERRORS: list[str] = []


def _env_number(name: str, default: T, cast: Callable[[str], T], errors: Optional[list[str]] = None) -> T:
    """Numeric environment value; a malformed one is recorded and the default used"""
    errors = ENV_ERRORS if errors is None else errors
    value = os.getenv(name, "")
    if not value.strip():
        return default
    try:
        return cast(value)
    except ValueError:
        errors.append(f"{name}={value!r} is not a valid {cast.__name__}")
        return default


def _threads(errors: Optional[list[str]] = None) -> int:
    return max(1, _env_number("HANKEL_SPECTRA_THREADS", os.cpu_count() or 1, int, errors))


class Config:
    """Lab configuration"""

    # Parallelism (FFT workers and study-grid threads)
    THREADS: int = _threads()

    # Quadrature
    QUAD_TOL: float = _env_number("HANKEL_QUAD_TOL", 1e-12, float)
    QUAD_REL_TOL: float = 1e-11
    MATRIX_QUAD_TOL: float = _env_number("HANKEL_MATRIX_QUAD_TOL", 1e-10, float)
    QUAD_LIMIT: int = 200
    # a QUADPACK-flagged result is accepted while its error estimate stays within
    # QUAD_SLACK times the requested tolerance; 1 makes every miss fatal
    QUAD_SLACK: float = _env_number("HANKEL_QUAD_SLACK", 100.0, float)
    PANEL_ORDER: int = 40  # Gauss-Legendre nodes per geometric panel

    # Sequences
    HEAD_INDEX: int = 2  # a(j) := a(2) profile for j < 2

    # Solvers
    DENSE_LIMIT: int = _env_number("HANKEL_DENSE_LIMIT", 4096, int)
    DENSE_AUTO_SIZE: int = 1025  # "auto" picks the dense solver up to this size
    LANCZOS_TOL: float = _env_number("HANKEL_LANCZOS_TOL", 1e-10, float)
    LANCZOS_MAX_ITER: int = _env_number("HANKEL_LANCZOS_MAX_ITER", 1000, int)
    KERNEL_RTOL: float = 1e-12
    BLOCK_MIN: int = 32  # first block of the scale-blocked transform
    SEED: int = 0

    # Studies
    MINUS_FRACTION: float = 0.25
    DECAY_BLOCKS: tuple[int, int] = (1, 4)  # dyadic blocks [2^1, 2^2) ... [2^3, 2^4)
    DECAY_DROP: float = 0.5  # last / first relative median for a difference to count as faster decay
    PARITY_TOLERANCE: float = 0.35
    DOUBLING_INDEX: int = 6  # fixed n for the N-doubling deviation

    # Run registry
    RECORD_RUNS: bool = os.getenv("HANKEL_RECORD_RUNS", "0") == "1"
    DATA_DIR: str = os.getenv("HANKEL_DATA_DIR", "data")
    DATABASE_URL: str = os.getenv(
        "HANKEL_DATABASE_URL",
        f"sqlite+aiosqlite:///{os.path.join(DATA_DIR, 'runs.db')}",
    )

    # Logging
    LOG_LEVEL: str = os.getenv("HANKEL_LOG_LEVEL", "INFO")

    def validate(self):
        """Raise ConfigurationError when an environment value could not be parsed"""
        if ENV_ERRORS:
            from services.exceptions import ConfigurationError

            raise ConfigurationError("invalid environment: " + "; ".join(ENV_ERRORS))


config = Config()
