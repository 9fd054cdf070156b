"""
Weyl-law checks for pseudo-differential operators.

Psi = beta(X) alpha(D) beta(X) with D = -i d/dx is discretized on a periodic
grid: alpha(D) is diagonal in the discrete Fourier basis, so Psi is
diag(beta) circulant(ifft(alpha(2 pi xi))) diag(beta). Its eigenvalues are
compared with C^+- n^(-gamma), where
C^+- = [(1/2pi) ((a_plus)_+-^(1/gamma) + (a_minus)_+-^(1/gamma)) int |beta|^(2/gamma)]^gamma
and a_plus, a_minus are the limits of |omega|^gamma alpha(omega) at +inf and -inf.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
from scipy import fft as sfft
from scipy.linalg import circulant

from config import config
from services.constants import log_phi_check
from services.exceptions import ConfigurationError, DomainError, NumericError
from services.fitting import RatioMode, WindowFit, fit_window, scaled_sequence
from services.params import CutoffFn
from services.quadrature import QuadratureConfig, integrate
from services.speceng import SpectrumResult, dense_eig

logger = logging.getLogger(__name__)

Symbol = Callable[[np.ndarray], np.ndarray]

# relative size below which beta at the grid edge and alpha at the band edge count as resolved
_GRID_RESOLUTION = 1e-12


@dataclass(frozen=True)
class Grid:
    L: float  # half-width
    M: int  # points, a power of two

    def __post_init__(self):
        if not self.L > 0:
            raise ConfigurationError(f"grid half-width must be > 0, got {self.L}")
        if self.M < 2 or self.M & (self.M - 1):
            raise ConfigurationError(f"grid size must be a power of two >= 2, got {self.M}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.M

    def points(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.M)

    def frequencies(self) -> np.ndarray:
        """xi_k in cycles per unit length, in transform order"""
        return sfft.fftfreq(self.M, self.h)

    def refined(self) -> "Grid":
        """Twice the points on twice the domain (same spacing)"""
        return Grid(2.0 * self.L, 2 * self.M)


@dataclass(frozen=True)
class PsdoSpec:
    """
    alpha is a function of the angular frequency omega, beta of x. Both are
    sampled on the grid on demand.
    """
    alpha: Symbol
    beta: Symbol
    grid: Grid
    gamma: float
    alpha_limits: tuple[float, float]  # (a_plus, a_minus)
    beta_support: Optional[tuple[float, float]] = None
    name: str = "custom"

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError(f"gamma must be > 0, got {self.gamma}")

    def alpha_values(self) -> np.ndarray:
        return np.asarray(self.alpha(2.0 * math.pi * self.grid.frequencies()), dtype=float)

    def beta_values(self) -> np.ndarray:
        return np.asarray(self.beta(self.grid.points()), dtype=float)

    def negated(self) -> "PsdoSpec":
        alpha = self.alpha
        a_plus, a_minus = self.alpha_limits
        return replace(self, alpha=lambda w: -alpha(w), alpha_limits=(-a_plus, -a_minus))

    def scaled_beta(self, c: float) -> "PsdoSpec":
        beta = self.beta
        return replace(self, beta=lambda x: c * beta(x))

    def with_grid(self, grid: Grid) -> "PsdoSpec":
        return replace(self, grid=grid)


@dataclass(frozen=True)
class WeylPrediction:
    C_plus: float
    C_minus: float
    gamma: float
    beta_mass: float  # int |beta|^(2/gamma)

    def to_dict(self) -> dict:
        return {
            "C_plus": self.C_plus,
            "C_minus": self.C_minus,
            "gamma": self.gamma,
            "beta_mass": self.beta_mass,
        }


def build_psdo_matrix(spec: PsdoSpec, validate: bool = True) -> np.ndarray:
    """
    M x M matrix of Psi on the periodic grid, Hermitian, real when alpha is even.

    With validate, beta must have decayed at the grid edge (ConfigurationError
    otherwise); a frequency band that does not cover alpha's decay is logged.
    """
    beta = spec.beta_values()
    multiplier = spec.alpha_values()
    if not (np.all(np.isfinite(beta)) and np.all(np.isfinite(multiplier))):
        raise ConfigurationError(f"{spec.name}: symbol samples are not finite")

    if validate:
        peak = float(np.max(np.abs(beta)))
        edge = max(abs(float(spec.beta(np.array(-spec.grid.L)))), abs(float(spec.beta(np.array(spec.grid.L)))))
        if peak > 0 and edge > _GRID_RESOLUTION * peak:
            raise ConfigurationError(
                f"{spec.name}: beta(+-L) = {edge:.2e} exceeds {_GRID_RESOLUTION:.0e} of its peak {peak:.2e}; "
                f"increase L (now {spec.grid.L})"
            )
        top = float(np.max(np.abs(multiplier)))
        band_edge = float(np.abs(multiplier[spec.grid.M // 2]))
        if top > 0 and band_edge > _GRID_RESOLUTION * top:
            logger.warning(
                f"{spec.name}: alpha at the band edge is {band_edge / top:.1e} of its peak; "
                f"eigenvalues below that level are discretization dominated"
            )

    kernel = sfft.ifft(multiplier, workers=config.THREADS)
    if np.max(np.abs(kernel.imag)) <= 1e-14 * max(np.max(np.abs(kernel)), np.finfo(float).tiny):
        kernel = kernel.real
    psi = beta[:, None] * circulant(kernel) * beta[None, :]

    scale = max(float(np.max(np.abs(psi))), np.finfo(float).tiny)
    asymmetry = float(np.max(np.abs(psi - psi.conj().T)))
    if asymmetry > 1e-12 * scale:
        raise NumericError(f"{spec.name}: discretized operator is not Hermitian ({asymmetry:.2e})")
    return 0.5 * (psi + psi.conj().T)


def _positive(x: float) -> float:
    return max(x, 0.0)


def beta_mass(
    beta: Symbol,
    gamma: float,
    quad: Optional[QuadratureConfig] = None,
    support: Optional[tuple[float, float]] = None,
) -> float:
    """int |beta|^(2/gamma) over the line (or over support)"""
    quad = quad or QuadratureConfig()
    rate = 2.0 / gamma

    def integrand(x: float) -> float:
        return abs(float(beta(np.array(x)))) ** rate

    if support is not None:
        return integrate(integrand, support[0], support[1], quad).value

    samples = np.linspace(-50.0, 50.0, 2001)
    peak = float(np.max(np.abs(np.asarray(beta(samples), dtype=float))))
    far = max(abs(float(beta(np.array(1e3)))), abs(float(beta(np.array(-1e3)))))
    if far > _GRID_RESOLUTION * max(peak, np.finfo(float).tiny):
        raise DomainError("beta does not decay; int |beta|^(2/gamma) diverges")
    left = integrate(integrand, -np.inf, 0.0, quad)
    right = integrate(integrand, 0.0, np.inf, quad)
    return left.value + right.value


def weyl_predict(
    alpha_limits: tuple[float, float],
    gamma: float,
    beta: Symbol,
    quad: Optional[QuadratureConfig] = None,
    support: Optional[tuple[float, float]] = None,
) -> WeylPrediction:
    if not gamma > 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    a_plus, a_minus = alpha_limits
    rate = 1.0 / gamma
    plus = _positive(a_plus) ** rate + _positive(a_minus) ** rate
    minus = _positive(-a_plus) ** rate + _positive(-a_minus) ** rate
    if plus == 0 and minus == 0:
        return WeylPrediction(0.0, 0.0, gamma, 0.0)

    mass = beta_mass(beta, gamma, quad, support)
    return WeylPrediction(
        C_plus=(plus * mass / (2.0 * math.pi)) ** gamma,
        C_minus=(minus * mass / (2.0 * math.pi)) ** gamma,
        gamma=gamma,
        beta_mass=mass,
    )


def predict(spec: PsdoSpec, quad: Optional[QuadratureConfig] = None) -> WeylPrediction:
    return weyl_predict(spec.alpha_limits, spec.gamma, spec.beta, quad, spec.beta_support)


@dataclass(frozen=True)
class WeylReport:
    name: str
    M: int
    L: float
    prediction: WeylPrediction
    mode_plus: RatioMode
    mode_minus: RatioMode
    ratio_plus: tuple[float, ...]
    ratio_minus: tuple[float, ...]
    fit_plus: WindowFit
    fit_minus: WindowFit
    spectrum: SpectrumResult

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "M": self.M,
            "L": self.L,
            "prediction": self.prediction.to_dict(),
            "mode_plus": self.mode_plus.value,
            "mode_minus": self.mode_minus.value,
            "ratio_plus": list(self.ratio_plus),
            "ratio_minus": list(self.ratio_minus),
            "fit_plus": self.fit_plus.to_dict(),
            "fit_minus": self.fit_minus.to_dict(),
        }


def weyl_verify(
    spec: PsdoSpec,
    prediction: WeylPrediction,
    n_window: tuple[int, int],
    validate: bool = True,
) -> WeylReport:
    """Eigenvalues of the discretized Psi against C^+- n^(-gamma)"""
    spectrum = dense_eig(build_psdo_matrix(spec, validate))
    ratio_plus, mode_plus = scaled_sequence(spectrum.pos, spec.gamma, prediction.C_plus)
    ratio_minus, mode_minus = scaled_sequence(spectrum.neg, spec.gamma, prediction.C_minus)
    fit_plus = fit_window(spectrum.pos, spec.gamma, prediction.C_plus, n_window)
    fit_minus = fit_window(spectrum.neg, spec.gamma, prediction.C_minus, n_window)
    logger.info(
        f"Weyl check {spec.name} (M={spec.grid.M}, L={spec.grid.L}): "
        f"slope {fit_plus.slope}, mean ratio {fit_plus.mean_ratio}"
    )
    return WeylReport(
        name=spec.name,
        M=spec.grid.M,
        L=spec.grid.L,
        prediction=prediction,
        mode_plus=mode_plus,
        mode_minus=mode_minus,
        ratio_plus=tuple(float(v) for v in ratio_plus),
        ratio_minus=tuple(float(v) for v in ratio_minus),
        fit_plus=fit_plus,
        fit_minus=fit_minus,
        spectrum=spectrum,
    )


def refinement_delta(spec: PsdoSpec, count: int = 20) -> float:
    """Largest relative change of the top positive eigenvalues when L and M double"""
    coarse = dense_eig(build_psdo_matrix(spec)).pos[:count]
    fine = dense_eig(build_psdo_matrix(spec.with_grid(spec.grid.refined()))).pos[:count]
    n = min(len(coarse), len(fine))
    if n == 0:
        return 0.0
    a, b = np.array(coarse[:n]), np.array(fine[:n])
    return float(np.max(np.abs(a - b) / np.abs(b)))


def gaussian_preset(M: int = 4096, L: float = 12.0) -> PsdoSpec:
    """alpha(omega) = (1 + omega^2)^(-1/2), beta(x) = exp(-x^2)"""
    return PsdoSpec(
        alpha=lambda w: 1.0 / np.sqrt(1.0 + np.asarray(w) ** 2),
        beta=lambda x: np.exp(-np.asarray(x) ** 2),
        grid=Grid(L, M),
        gamma=1.0,
        alpha_limits=(1.0, 1.0),
        name="gaussian",
    )


def _sqrt_phi_check(d: int) -> Symbol:
    def beta(x):
        x = np.asarray(x, dtype=float)
        values = np.exp(0.5 * np.vectorize(lambda t: log_phi_check(t, d), otypes=[float])(x))
        return values
    return beta


def model_preset(d: int = 2, gamma: float = 1.0, b: float = 1.0, M: int = 2048, L: float = 3.5) -> PsdoSpec:
    """
    One-sided model operator: alpha(omega) = b |xi|^(-gamma) chi_0(e^xi) / (2^d (d-1)!)
    at xi = omega / (2 pi) < log(3/4) and 0 above, beta = sqrt(phi_check_d).
    Its Weyl constant is b C_{d,gamma}.
    """
    norm = 2.0 ** d * math.factorial(d - 1)
    chi = CutoffFn()
    cut = math.log(chi.t_hi)

    def alpha(omega):
        xi = np.asarray(omega, dtype=float) / (2.0 * math.pi)
        inside = xi < cut
        xs = np.where(inside, xi, cut - 1.0)
        values = b * np.abs(xs) ** (-gamma) * chi(np.exp(xs)) / norm
        return np.where(inside, values, 0.0)

    return PsdoSpec(
        alpha=alpha,
        beta=_sqrt_phi_check(d),
        grid=Grid(L, M),
        gamma=gamma,
        alpha_limits=(0.0, b * (2.0 * math.pi) ** gamma / norm),
        name=f"model(d={d}, gamma={gamma})",
    )


PRESETS = {
    "gaussian": gaussian_preset,
    "model": model_preset,
}
