"""
Quadrature helpers.

Wraps scipy's QUADPACK rules, refines geometrically toward an endpoint
singularity at 0, and provides a fixed Gauss-Legendre panel rule for
vectorized assembly.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from config import config
from services.exceptions import DomainError, NumericError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and subinterval limits for adaptive quadrature"""
    tol: float = config.QUAD_TOL
    rel_tol: float = config.QUAD_REL_TOL
    limit: int = config.QUAD_LIMIT
    ratio: float = 0.5  # geometric panel ratio toward 0
    max_panels: int = 2000
    slack: float = config.QUAD_SLACK  # accepted error / target on a QUADPACK warning

    def __post_init__(self):
        if not (self.tol > 0 and self.rel_tol >= 0):
            raise DomainError(f"quadrature tolerances must be positive, got tol={self.tol}")
        if not 0 < self.ratio < 1:
            raise DomainError(f"panel ratio must lie in (0, 1), got {self.ratio}")
        if self.limit < 1 or self.max_panels < 1:
            raise DomainError("quadrature limits must be positive")
        if self.slack < 1:
            raise DomainError(f"quadrature slack must be >= 1, got {self.slack}")

    @classmethod
    def for_matrices(cls) -> "QuadratureConfig":
        """Looser tolerance used when assembling whole symbol vectors"""
        return cls(tol=config.MATRIX_QUAD_TOL)

    def halved(self) -> "QuadratureConfig":
        """Same limits, tolerances halved"""
        return replace(self, tol=self.tol / 2, rel_tol=self.rel_tol / 2)


class QuadResult(NamedTuple):
    value: float
    error: float


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    cfg: QuadratureConfig,
    points: Optional[Sequence[float]] = None,
    weight: Optional[str] = None,
    wvar: Optional[float] = None,
) -> QuadResult:
    """
    Adaptive Gauss-Kronrod quadrature of f over [a, b].

    Raises NumericError when QUADPACK reports failure and the achieved
    error estimate exceeds cfg.slack times the requested tolerance.
    """
    kwargs = dict(epsabs=cfg.tol, epsrel=cfg.rel_tol, limit=cfg.limit, full_output=1)
    if weight is not None:
        kwargs.update(weight=weight, wvar=wvar)
    elif points:
        kwargs["points"] = list(points)

    result = quad(f, a, b, **kwargs)
    value, error = float(result[0]), float(result[1])
    if not (math.isfinite(value) and math.isfinite(error)):
        raise NumericError(f"quadrature on [{a}, {b}] produced a non-finite value", error)

    if len(result) > 3:
        target = max(cfg.tol, cfg.rel_tol * abs(value))
        if error > cfg.slack * target:
            raise NumericError(
                f"quadrature on [{a}, {b}] did not converge: {result[3]}", error
            )
        logger.debug(f"QUADPACK warning on [{a}, {b}] accepted (error {error:.2e}): {result[3]}")

    return QuadResult(value, error)


def integrate_to_zero(
    f: Callable[[float], float],
    upper: float,
    cfg: QuadratureConfig,
    breaks: Sequence[float] = (),
) -> QuadResult:
    """
    Integrate f over (0, upper] refining geometrically toward 0.

    The interval [min(breaks), upper] is handled in one call with the breaks
    as interior points; below it panels [r*h, h] are added until two
    consecutive panels fall under a tenth of the running tolerance, and the
    remaining [0, h] is integrated directly.
    """
    if upper <= 0:
        return QuadResult(0.0, 0.0)

    inner = sorted(x for x in breaks if 0 < x < upper)
    total, error = 0.0, 0.0
    hi = upper
    if inner:
        part = integrate(f, inner[0], upper, cfg, points=inner[1:] or None)
        total, error = part.value, part.error
        hi = inner[0]

    quiet = 0
    for _ in range(cfg.max_panels):
        lo = hi * cfg.ratio
        part = integrate(f, lo, hi, cfg)
        total += part.value
        error += part.error
        hi = lo
        target = max(cfg.tol, cfg.rel_tol * abs(total))
        quiet = quiet + 1 if abs(part.value) < 0.1 * target else 0
        if quiet >= 2 or hi < 1e-300:
            break
    else:
        raise NumericError("geometric refinement toward 0 ran out of panels", error)

    part = integrate(f, 0.0, hi, cfg)
    return QuadResult(total + part.value, error + part.error)


def gauss_legendre_panels(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Composite Gauss-Legendre rule on consecutive panels.

    Args:
        edges: panel boundaries, monotone in either direction
        order: nodes per panel

    Returns:
        (nodes, weights) flattened over all panels; weights are positive
    """
    x, w = leggauss(order)
    edges = np.sort(np.asarray(edges, dtype=float))
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights
