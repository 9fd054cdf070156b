"""
Asymptotic constants.

phi_d(x) = cosh(x/2)^(-d), its Fourier transform
phi_check_d(x) = int phi_d(y) e^(2 pi i x y) dy, the constants
C_{d,gamma} = (int phi_check_d^(1/gamma))^gamma / (2^d (d-1)!) and the signed
leading coefficients C^+ and C^-.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Union

from scipy.special import beta as beta_fn

from services.exceptions import DomainError
from services.params import SymbolSpec
from services.quadrature import QuadratureConfig, integrate

logger = logging.getLogger(__name__)

_PI2 = math.pi ** 2
_LN2 = math.log(2.0)
# phi_check_d values below this fraction of the peak are dropped from C_{d,gamma}
_TAIL_FRACTION = 1e-18


class ConstantMethod(str, Enum):
    CLOSED = "closed"  # closed-form phi_check_d
    NESTED = "nested"  # phi_check_d by oscillatory quadrature


def _check_order(d: int):
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise DomainError(f"d must be an integer >= 1, got {d}")


def _logcosh(y: float) -> float:
    y = abs(y)
    return y + math.log1p(math.exp(-2.0 * y)) - _LN2


def _log_y_over_sinh(y: float) -> float:
    y = abs(y)
    if y < 1e-4:
        return -y * y / 6.0
    return math.log(y) - (y + math.log1p(-math.exp(-2.0 * y)) - _LN2)


def phi_d(x: float, d: int) -> float:
    """cosh(x/2)^(-d)"""
    _check_order(d)
    return math.exp(-d * _logcosh(0.5 * x))


def log_phi_check(x: float, d: int) -> float:
    """log phi_check_d(x) from the closed forms for d = 1, 2 and the two-step recurrence"""
    _check_order(d)
    y = 2.0 * _PI2 * abs(x)
    if d % 2 == 1:
        value, start = math.log(2.0 * math.pi) - _logcosh(y), 1
    else:
        value, start = math.log(4.0) + _log_y_over_sinh(y), 2
    x2 = 16.0 * _PI2 * x * x
    for e in range(start, d, 2):
        value += math.log((e * e + x2) / (e * (e + 1)))
    return value


def phi_check_closed(x: float, d: int) -> float:
    return math.exp(log_phi_check(x, d))


def phi_check(x: float, d: int, quad: Optional[QuadratureConfig] = None) -> float:
    """
    phi_check_d(x) = 2 int_0^inf phi_d(y) cos(2 pi x y) dy by quadrature.

    The range is cut where phi_d < 1e-18. Where the cosine-weighted rule
    cannot resolve the value above its own error estimate (far tails) the
    closed form is returned.
    """
    _check_order(d)
    quad = quad or QuadratureConfig()
    upper = 2.0 * (math.log(1e18) + d * _LN2) / d

    def integrand(y: float) -> float:
        return math.exp(-d * _logcosh(0.5 * y))

    if x == 0:
        result = integrate(integrand, 0.0, upper, quad)
    else:
        result = integrate(integrand, 0.0, upper, quad, weight="cos", wvar=2.0 * math.pi * abs(x))
    value, error = 2.0 * result.value, 2.0 * result.error
    if value <= 0 or abs(value) <= 10.0 * error:
        logger.debug(f"phi_check({x}, {d}) below quadrature resolution, using closed form")
        return phi_check_closed(x, d)
    return value


def phi_check_convolution(x: float, d1: int, d2: int, quad: Optional[QuadratureConfig] = None) -> float:
    """(phi_check_d1 * phi_check_d2)(x), which equals phi_check_{d1+d2}(x)"""
    _check_order(d1)
    _check_order(d2)
    quad = quad or QuadratureConfig()
    reach = abs(x) + 5.0

    def integrand(y: float) -> float:
        return math.exp(log_phi_check(y, d1) + log_phi_check(x - y, d2))

    points = sorted({0.0, float(x)})
    return integrate(integrand, -reach, reach, quad, points=points).value


def fourier_mass(d: int, quad: Optional[QuadratureConfig] = None) -> float:
    """int phi_check_d over the line; equals phi_d(0) = 1"""
    _check_order(d)
    quad = quad or QuadratureConfig()
    result = integrate(lambda x: phi_check_closed(x, d), 0.0, 5.0, quad, points=[0.5, 1.0, 2.0])
    return 2.0 * result.value


def c_gamma_closed(gamma: float) -> float:
    """C_gamma = 2^(-gamma) pi^(1-2 gamma) B(1/(2 gamma), 1/2)^gamma (d = 1)"""
    if not gamma > 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    return 2.0 ** (-gamma) * math.pi ** (1.0 - 2.0 * gamma) * float(beta_fn(0.5 / gamma, 0.5)) ** gamma


@dataclass(frozen=True)
class AsymptoticConstants:
    d: int
    gamma: float
    b1: float
    bm1: float
    C_dgamma: float
    C_plus: float
    C_minus: float
    quad_error: float
    method: ConstantMethod = ConstantMethod.CLOSED

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "gamma": self.gamma,
            "b1": self.b1,
            "bm1": self.bm1,
            "C_dgamma": self.C_dgamma,
            "C_plus": self.C_plus,
            "C_minus": self.C_minus,
            "quad_error": self.quad_error,
            "method": self.method.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AsymptoticConstants":
        return cls(**{**data, "method": ConstantMethod(data.get("method", ConstantMethod.CLOSED.value))})


def _power_integral(d: int, gamma: float, quad: QuadratureConfig, method: ConstantMethod) -> tuple[float, float]:
    """(int_R phi_check_d^(1/gamma), error estimate)"""
    rate = 1.0 / gamma
    if method is ConstantMethod.CLOSED:
        def integrand(x: float) -> float:
            return math.exp(rate * log_phi_check(x, d))
    else:
        def integrand(x: float) -> float:
            return phi_check(x, d, quad) ** rate

    peak = integrand(0.0)
    reach = 1.0
    while integrand(reach) > _TAIL_FRACTION * peak:
        reach *= 1.5
    # beyond reach the integrand decays at least like exp(-2 pi^2 x / gamma)
    tail = integrand(reach) * gamma / (2.0 * _PI2)

    breaks = [b for b in (0.05, 0.2, 0.5, 1.0) if b < reach]
    result = integrate(integrand, 0.0, reach, quad, points=breaks)
    return 2.0 * (result.value + tail), 2.0 * (result.error + tail)


def c_dgamma(
    d: int,
    gamma: float,
    quad: Optional[QuadratureConfig] = None,
    method: Union[ConstantMethod, str] = ConstantMethod.CLOSED,
) -> AsymptoticConstants:
    """C_{d,gamma} for b1 = 1, bm1 = 0"""
    _check_order(d)
    if not gamma > 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    method = ConstantMethod(method)
    quad = quad or QuadratureConfig()

    integral, error = _power_integral(int(d), float(gamma), quad, method)
    norm = 2.0 ** d * math.factorial(d - 1)
    value = integral ** gamma / norm
    # d(I^gamma) = gamma I^(gamma - 1) dI
    quad_error = gamma * integral ** (gamma - 1.0) * error / norm
    logger.debug(f"C_{{{d},{gamma}}} = {value!r} ({method.value}, error {quad_error:.1e})")
    return AsymptoticConstants(
        d=int(d),
        gamma=float(gamma),
        b1=1.0,
        bm1=0.0,
        C_dgamma=value,
        C_plus=value,
        C_minus=0.0,
        quad_error=quad_error,
        method=method,
    )


def _positive(x: float) -> float:
    return max(x, 0.0)


def c_plus_minus(consts: AsymptoticConstants) -> tuple[float, float]:
    """C^+ = ((b1)_+^(1/gamma) + (bm1)_+^(1/gamma))^gamma C_{d,gamma}, C^- with negative parts"""
    rate = 1.0 / consts.gamma
    plus = _positive(consts.b1) ** rate + _positive(consts.bm1) ** rate
    minus = _positive(-consts.b1) ** rate + _positive(-consts.bm1) ** rate
    return plus ** consts.gamma * consts.C_dgamma, minus ** consts.gamma * consts.C_dgamma


def asymptotic_constants(
    spec: SymbolSpec,
    quad: Optional[QuadratureConfig] = None,
    method: Union[ConstantMethod, str] = ConstantMethod.CLOSED,
) -> AsymptoticConstants:
    """C_{d,gamma} and C^+, C^- for the coefficients of spec"""
    base = c_dgamma(spec.d, spec.gamma, quad, method)
    signed = AsymptoticConstants(
        d=base.d,
        gamma=base.gamma,
        b1=spec.b1,
        bm1=spec.bm1,
        C_dgamma=base.C_dgamma,
        C_plus=0.0,
        C_minus=0.0,
        quad_error=base.quad_error,
        method=base.method,
    )
    plus, minus = c_plus_minus(signed)
    return replace(signed, C_plus=plus, C_minus=minus)
