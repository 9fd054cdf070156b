"""
Parameter sequences.

Target sequences a(j) = (b1 + (-1)^j bm1) j^-d (log j)^-gamma, their iterated
differences, the smooth cutoff chi_0, the model weight
w(t) = t^(d-1) |log t|^-gamma chi_0(t) / (d-1)! and the model sequence
a~(j) = (b1 + (-1)^j bm1) * int_0^(3/4) w(lam) e^(-lam j) dlam.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np

from config import config
from services.exceptions import DomainError, NumericError
from services.quadrature import (
    QuadratureConfig,
    QuadResult,
    gauss_legendre_panels,
    integrate_to_zero,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# e^-u * u^n is negligible beyond this point for the orders used here
_EXP_CUT = 90.0


class SymbolKind(str, Enum):
    """Family of a parameter sequence"""
    PURE_POWER = "pure_power"  # j^-d (log j)^-gamma
    GENERAL = "general"  # (b1 + (-1)^j bm1) j^-d (log j)^-gamma
    MODEL = "model"  # (b1 + (-1)^j bm1) (Lw)(j)


@dataclass(frozen=True)
class SymbolSpec:
    """Full parameterization of a sequence a(j)"""
    d: int
    gamma: float
    b1: float = 1.0
    bm1: float = 0.0
    kind: SymbolKind = SymbolKind.PURE_POWER
    head: int = config.HEAD_INDEX  # profile frozen at p(head) for j < head

    def __post_init__(self):
        object.__setattr__(self, "kind", SymbolKind(self.kind))
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be an integer >= 1, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        for name in ("gamma", "b1", "bm1"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.gamma <= 0:
            raise DomainError(f"gamma must be > 0, got {self.gamma}")
        if self.kind is SymbolKind.PURE_POWER and (self.b1 != 1.0 or self.bm1 != 0.0):
            raise DomainError("pure power sequences have b1 = 1 and bm1 = 0")
        if int(self.head) != self.head or self.head < 2:
            raise DomainError(f"head index must be an integer >= 2, got {self.head}")

    def parity(self, j: Union[int, np.ndarray]) -> ArrayLike:
        """b1 + (-1)^j bm1"""
        sign = np.where(np.asarray(j) % 2 == 0, 1.0, -1.0)
        value = self.b1 + sign * self.bm1
        return float(value) if np.ndim(value) == 0 else value

    def with_coefficients(self, b1: float, bm1: float) -> "SymbolSpec":
        """Same family with new coefficients (pure power becomes general)"""
        kind = SymbolKind.MODEL if self.kind is SymbolKind.MODEL else SymbolKind.GENERAL
        return replace(self, b1=b1, bm1=bm1, kind=kind)

    def as_model(self) -> "SymbolSpec":
        return replace(self, kind=SymbolKind.MODEL)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "gamma": self.gamma,
            "b1": self.b1,
            "bm1": self.bm1,
            "kind": self.kind.value,
            "head": self.head,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SymbolSpec":
        return cls(
            d=data["d"],
            gamma=data["gamma"],
            b1=data.get("b1", 1.0),
            bm1=data.get("bm1", 0.0),
            kind=SymbolKind(data.get("kind", SymbolKind.PURE_POWER.value)),
            head=data.get("head", config.HEAD_INDEX),
        )


def difference_order(gamma: float) -> int:
    """M(gamma): 0 below 1/2, [gamma] + 1 from 1/2 on"""
    if gamma <= 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    return 0 if gamma < 0.5 else int(math.floor(gamma)) + 1


@dataclass(frozen=True)
class DifferenceOrder:
    m: int
    m_max: int

    def __post_init__(self):
        if not 0 <= self.m <= self.m_max:
            raise DomainError(f"difference order {self.m} outside 0..{self.m_max}")

    @classmethod
    def for_gamma(cls, gamma: float, m: int) -> "DifferenceOrder":
        return cls(m=m, m_max=difference_order(gamma))


def _psi(s: np.ndarray) -> np.ndarray:
    positive = s > 0
    safe = np.where(positive, s, 1.0)
    return np.where(positive, np.exp(-1.0 / safe), 0.0)


@dataclass(frozen=True)
class CutoffFn:
    """Smooth cutoff: 1 on (0, t_lo], 0 on [t_hi, inf)"""
    t_lo: float = 0.5
    t_hi: float = 0.75

    def __call__(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        a = _psi(self.t_hi - t)
        b = _psi(t - self.t_lo)
        return a / (a + b)

    def value(self, t: float) -> float:
        a = math.exp(-1.0 / (self.t_hi - t)) if t < self.t_hi else 0.0
        b = math.exp(-1.0 / (t - self.t_lo)) if t > self.t_lo else 0.0
        return a / (a + b)


@dataclass(frozen=True)
class ModelWeight:
    """w(t) = t^(d-1) |log t|^-gamma chi_0(t) / (d-1)!"""
    spec: SymbolSpec
    chi: CutoffFn = field(default_factory=CutoffFn)

    def __call__(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        inside = (t > 0) & (t < self.chi.t_hi)
        ts = np.where(inside, t, self.chi.t_lo)
        d, gamma = self.spec.d, self.spec.gamma
        values = ts ** (d - 1) * np.abs(np.log(ts)) ** (-gamma) * self.chi(ts)
        return np.where(inside, values / math.factorial(d - 1), 0.0)

    def value(self, t: float) -> float:
        if t <= 0 or t >= self.chi.t_hi:
            return 0.0
        d, gamma = self.spec.d, self.spec.gamma
        return t ** (d - 1) * abs(math.log(t)) ** (-gamma) * self.chi.value(t) / math.factorial(d - 1)


def target_profile(d: int, gamma: float, j: ArrayLike) -> ArrayLike:
    """p(j) = j^-d (log j)^-gamma"""
    j = np.asarray(j, dtype=float)
    values = j ** (-d) * np.log(j) ** (-gamma)
    return float(values) if values.ndim == 0 else values


def eval_target_seq(spec: SymbolSpec, j: int) -> float:
    """a(j) for the pure power and general families, j >= 2"""
    if spec.kind is SymbolKind.MODEL:
        raise DomainError("model sequences are evaluated by eval_model_seq")
    if j < 2:
        raise DomainError(f"a(j) is defined for j >= 2, got j={j}")
    value = spec.parity(j) * j ** (-spec.d) * math.log(j) ** (-spec.gamma)
    if not math.isfinite(value):
        raise NumericError(f"a({j}) is not finite for {spec}")
    return value


def iterated_difference(seq: Callable[[int], float], m: int, j: int) -> float:
    """m-th forward difference of seq at j"""
    if m < 0:
        raise DomainError(f"difference order must be >= 0, got {m}")
    return math.fsum((-1) ** (m - i) * math.comb(m, i) * seq(j + i) for i in range(m + 1))


def eval_cutoff(chi: CutoffFn, t: float) -> float:
    if t <= 0:
        raise DomainError(f"cutoff is defined for t > 0, got {t}")
    return chi.value(t)


def eval_model_weight(w: ModelWeight, t: float) -> float:
    if t <= 0:
        raise DomainError(f"model weight is defined for t > 0, got {t}")
    return w.value(t)


def _scaled_laplace(
    t: float,
    power: int,
    gamma: float,
    upper: float,
    quad: QuadratureConfig,
    chi: Optional[CutoffFn] = None,
) -> QuadResult:
    """
    int_0^upper lam^power |log lam|^-gamma chi(lam) e^(-lam t) dlam.

    Evaluated in u = lam * max(t, 1) so that the bulk of the integrand sits
    at u = O(1) for every t.
    """
    s = max(float(t), 1.0)
    rate = t / s

    def integrand(u: float) -> float:
        if u <= 0.0:
            return 0.0
        lam = u / s
        value = u ** power * abs(math.log(lam)) ** (-gamma) * math.exp(-rate * u)
        if chi is not None:
            value *= chi.value(lam)
        return value

    u_hi = upper * s
    if rate > 0:
        u_hi = min(u_hi, _EXP_CUT + 4.0 * power)
    breaks = [chi.t_lo * s] if chi is not None else []
    result = integrate_to_zero(integrand, u_hi, quad, breaks)
    scale = s ** -(power + 1)
    return QuadResult(result.value * scale, result.error * scale)


def model_seq_with_error(
    spec: SymbolSpec,
    j: int,
    quad: Optional[QuadratureConfig] = None,
    chi: Optional[CutoffFn] = None,
) -> QuadResult:
    """a~(j) together with the quadrature error estimate"""
    if spec.kind is not SymbolKind.MODEL:
        raise DomainError(f"expected a model sequence, got {spec.kind.value}")
    if j < 1:
        raise DomainError(f"a~(j) is evaluated for j >= 1, got j={j}")
    quad = quad or QuadratureConfig()
    chi = chi or CutoffFn()
    base = _scaled_laplace(j, spec.d - 1, spec.gamma, chi.t_hi, quad, chi)
    factor = spec.parity(j) / math.factorial(spec.d - 1)
    return QuadResult(base.value * factor, base.error * abs(factor))


def eval_model_seq(spec: SymbolSpec, j: int, quad: Optional[QuadratureConfig] = None) -> float:
    """a~(j) = (b1 + (-1)^j bm1) (Lw)(j)"""
    return model_seq_with_error(spec, j, quad).value


def laplace_with_error(
    n: int,
    t: float,
    gamma: float,
    lambda0: float,
    quad: Optional[QuadratureConfig] = None,
) -> QuadResult:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"n must be an integer >= 0, got {n}")
    if not t > 1:
        raise DomainError(f"t must be > 1, got {t}")
    if not gamma > 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    if not 0 < lambda0 < 1:
        raise DomainError(f"lambda0 must lie in (0, 1), got {lambda0}")
    return _scaled_laplace(t, int(n), gamma, lambda0, quad or QuadratureConfig())


def laplace_In(
    n: int,
    t: float,
    gamma: float,
    lambda0: float,
    quad: Optional[QuadratureConfig] = None,
) -> float:
    """I_n(t) = int_0^lambda0 lam^n |log lam|^-gamma e^(-lam t) dlam"""
    return laplace_with_error(n, t, gamma, lambda0, quad).value


def laplace_ratio(n: int, t: float, gamma: float, lambda0: float, quad: Optional[QuadratureConfig] = None) -> float:
    """I_n(t) t^(1+n) (log t)^gamma / n!, which tends to 1"""
    value = laplace_In(n, t, gamma, lambda0, quad)
    return value * t ** (1 + n) * math.log(t) ** gamma / math.factorial(n)


def model_laplace_values(
    spec: SymbolSpec,
    kmax: int,
    quad: Optional[QuadratureConfig] = None,
    order: int = config.PANEL_ORDER,
    chi: Optional[CutoffFn] = None,
    chunk: int = 2048,
) -> np.ndarray:
    """
    (Lw)(k) for k = 0..kmax without the parity factor.

    Fixed Gauss-Legendre rule on panels that split the cutoff bridge evenly and
    halve geometrically toward 0. The rule is a positive combination of
    exponentials e^(-lam_q k), so the resulting Hankel matrix is positive
    semidefinite.
    """
    quad = quad or QuadratureConfig.for_matrices()
    chi = chi or CutoffFn()
    weight = ModelWeight(spec, chi)
    # mass of w below lam_min is under tol relative to (Lw)(kmax)
    lam_min = 1e-2 * quad.tol ** (1.0 / spec.d) / max(kmax, 1)

    edges = list(np.linspace(chi.t_hi, chi.t_lo, 9))
    lam = chi.t_lo
    while lam > lam_min:
        lam *= 0.5
        edges.append(lam)
    nodes, weights = gauss_legendre_panels(np.array(edges), order)
    wq = weights * weight(nodes)

    out = np.empty(kmax + 1)
    for start in range(0, kmax + 1, chunk):
        k = np.arange(start, min(start + chunk, kmax + 1), dtype=float)
        out[start:start + k.size] = np.exp(-np.outer(k, nodes)) @ wq
    logger.debug(f"Assembled (Lw)(0..{kmax}) with {nodes.size} nodes")
    return out


def symbol_values(spec: SymbolSpec, kmax: int) -> np.ndarray:
    """
    h(k) = a(k) for k = 0..kmax.

    Target families freeze the profile at p(head) below the head index while
    keeping the parity factor at every k.
    """
    if kmax < 0:
        raise DomainError(f"kmax must be >= 0, got {kmax}")
    k = np.arange(kmax + 1)
    if spec.kind is SymbolKind.MODEL:
        base = model_laplace_values(spec, kmax)
    else:
        base = target_profile(spec.d, spec.gamma, np.maximum(k, spec.head))
        base = np.atleast_1d(base)
    values = spec.parity(k) * base
    if not np.all(np.isfinite(values)):
        raise NumericError(f"symbol values are not finite for {spec}")
    return values


def smoothness_profile(spec: SymbolSpec, j_max: int) -> dict[int, float]:
    """
    sup_{j <= j_max} (j+1)^(d+m) (log(j+2))^gamma |g^(m)(j)| for m <= M(gamma).

    g is the non-oscillating component max(|b1|, |bm1|) * p(max(j, head)).
    """
    if spec.kind is SymbolKind.MODEL:
        raise DomainError("smoothness profile is defined for target sequences")
    order = difference_order(spec.gamma)
    j = np.arange(j_max + order + 1)
    scale = max(abs(spec.b1), abs(spec.bm1))
    g = scale * np.atleast_1d(target_profile(spec.d, spec.gamma, np.maximum(j, spec.head)))

    profile = {}
    jj = np.arange(j_max + 1, dtype=float)
    for m in range(order + 1):
        diff = np.diff(g, n=m)[: j_max + 1]
        weighted = (jj + 1) ** (spec.d + m) * np.log(jj + 2) ** spec.gamma * np.abs(diff)
        profile[m] = float(weighted.max())
    return profile
