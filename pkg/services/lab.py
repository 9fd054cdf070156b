"""
Experiments on the weighted Hankel family.

Asymptotic-ratio studies n^gamma lambda_n^+- / C^+-, target-vs-model
differences, Schatten-Lorentz diagnostics, norm bounds and parity splitting.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional, TypeVar, Union

import numpy as np

from config import config
from services.constants import AsymptoticConstants, ConstantMethod, asymptotic_constants
from services.exceptions import ContractError, DomainError, NumericError
from services.fitting import (
    RatioMode,
    WindowFit,
    dyadic_medians,
    fit_window,
    relative_decay,
    scaled_sequence,
    strictly_decreasing,
)
from services.params import SymbolSpec, symbol_values
from services.quadrature import QuadratureConfig
from services.reduction import (
    WeightedHankelMatrix,
    build_simplex_hankel,
    build_weighted_hankel,
    simplex_weights,
)
from services.speceng import (
    Solver,
    SpectrumResult,
    compute_spectrum,
    singular_values,
    weak_schatten_quasinorm,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class StudyKind(str, Enum):
    ASYMPTOTIC = "asymptotic"
    MODEL_COMPARE = "model-compare"
    PARITY_SPLIT = "parity-split"


@dataclass(frozen=True)
class LabReport:
    kind: StudyKind
    spec: SymbolSpec
    N: int
    constants: AsymptoticConstants
    lambda_plus: tuple[float, ...] = ()
    lambda_minus: tuple[float, ...] = ()
    ratio_plus: tuple[float, ...] = ()
    ratio_minus: tuple[float, ...] = ()
    mode_plus: RatioMode = RatioMode.RATIO
    mode_minus: RatioMode = RatioMode.RATIO
    decay: tuple[float, ...] = ()  # n^gamma s_n of a difference operator
    decay_blocks: tuple[float, ...] = ()  # dyadic medians of decay
    relative_blocks: tuple[float, ...] = ()  # dyadic medians of s_n(difference) / s_n(target)
    fits: dict[str, WindowFit] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    metrics: dict[str, Optional[float]] = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    parts: tuple["LabReport", ...] = ()

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "spec": self.spec.to_dict(),
            "N": self.N,
            "constants": self.constants.to_dict(),
            "lambda_plus": list(self.lambda_plus),
            "lambda_minus": list(self.lambda_minus),
            "ratio_plus": list(self.ratio_plus),
            "ratio_minus": list(self.ratio_minus),
            "mode_plus": self.mode_plus.value,
            "mode_minus": self.mode_minus.value,
            "decay": list(self.decay),
            "decay_blocks": list(self.decay_blocks),
            "relative_blocks": list(self.relative_blocks),
            "fits": {name: fit.to_dict() for name, fit in self.fits.items()},
            "checks": dict(self.checks),
            "metrics": dict(self.metrics),
            "provenance": dict(self.provenance),
            "parts": [part.to_dict() for part in self.parts],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LabReport":
        return cls(
            kind=StudyKind(data["kind"]),
            spec=SymbolSpec.from_dict(data["spec"]),
            N=data["N"],
            constants=AsymptoticConstants.from_dict(data["constants"]),
            lambda_plus=tuple(data["lambda_plus"]),
            lambda_minus=tuple(data["lambda_minus"]),
            ratio_plus=tuple(data["ratio_plus"]),
            ratio_minus=tuple(data["ratio_minus"]),
            mode_plus=RatioMode(data["mode_plus"]),
            mode_minus=RatioMode(data["mode_minus"]),
            decay=tuple(data["decay"]),
            decay_blocks=tuple(data["decay_blocks"]),
            relative_blocks=tuple(data.get("relative_blocks", ())),
            fits={name: WindowFit.from_dict(fit) for name, fit in data["fits"].items()},
            checks=dict(data["checks"]),
            metrics=dict(data["metrics"]),
            provenance=dict(data["provenance"]),
            parts=tuple(cls.from_dict(part) for part in data["parts"]),
        )


@dataclass(frozen=True)
class QuasinormReport:
    p: float
    value: float
    trend: tuple[float, ...]


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    holds: bool


@dataclass(frozen=True)
class InterlacingCheck:
    N: int
    compared: int
    max_violation: float
    holds: bool


def run_studies(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> list[R]:
    """Apply fn to independent items on a thread pool, preserving order"""
    items = list(items)
    workers = max(1, min(threads or config.THREADS, len(items) or 1))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _provenance(spectrum: SpectrumResult, k: int, seed: int) -> dict:
    return {
        "solver": spectrum.solver.value,
        "k": k,
        "seed": seed,
        "complete": spectrum.complete,
        "converged_count": spectrum.converged_count,
        "iterations": spectrum.iterations,
        "kernel_dimension": spectrum.kernel_dimension,
        "norm_estimate": spectrum.norm_estimate,
        "threads": config.THREADS,
    }


def _check_window(window: tuple[int, int], k: int):
    n_lo, n_hi = window
    if not 1 <= n_lo <= n_hi:
        raise DomainError(f"window must satisfy 1 <= n_lo <= n_hi, got {window}")
    if k < n_hi:
        raise ContractError(f"k = {k} must cover the window end n_hi = {n_hi}")


def asymptotic_study(
    spec: SymbolSpec,
    N: int,
    k: int,
    window: tuple[int, int],
    solver: Union[Solver, str] = Solver.AUTO,
    tol: Optional[float] = None,
    seed: int = config.SEED,
    quad: Optional[QuadratureConfig] = None,
    method: Union[ConstantMethod, str] = ConstantMethod.CLOSED,
) -> LabReport:
    """
    lambda_n^+- of Gamma_N against C^+- n^(-gamma).

    A sign whose constant vanishes is reported raw (n^gamma lambda_n) and its
    window maximum must stay below MINUS_FRACTION * C_{d,gamma}.
    """
    _check_window(window, k)
    matrix = build_weighted_hankel(spec, N)
    spectrum = compute_spectrum(matrix, k, solver, tol, seed=seed)
    consts = asymptotic_constants(spec, quad, method)

    gamma = spec.gamma
    ratio_plus, mode_plus = scaled_sequence(spectrum.pos, gamma, consts.C_plus)
    ratio_minus, mode_minus = scaled_sequence(spectrum.neg, gamma, consts.C_minus)
    fits = {
        "plus": fit_window(spectrum.pos, gamma, consts.C_plus, window),
        "minus": fit_window(spectrum.neg, gamma, consts.C_minus, window),
    }

    checks = {}
    limit = config.MINUS_FRACTION * consts.C_dgamma
    for name, mode in (("plus", mode_plus), ("minus", mode_minus)):
        if mode is RatioMode.RAW:
            peak = fits[name].max_ratio
            checks[f"{name}_small"] = peak is None or peak <= limit

    logger.info(
        f"Asymptotic study d={spec.d}, gamma={gamma}, N={N}: "
        f"{len(spectrum.pos)} positive / {len(spectrum.neg)} negative eigenvalues, "
        f"slope {fits['plus'].slope}"
    )
    return LabReport(
        kind=StudyKind.ASYMPTOTIC,
        spec=spec,
        N=N,
        constants=consts,
        lambda_plus=spectrum.pos,
        lambda_minus=spectrum.neg,
        ratio_plus=tuple(float(v) for v in ratio_plus),
        ratio_minus=tuple(float(v) for v in ratio_minus),
        mode_plus=mode_plus,
        mode_minus=mode_minus,
        fits=fits,
        checks=checks,
        provenance=_provenance(spectrum, k, seed),
    )


def quasinorm(svals, p: float) -> QuasinormReport:
    """sup_n n^(1/p) s_n with its trend"""
    if p <= 0:
        raise DomainError(f"p must be > 0, got {p}")
    svals = np.asarray(svals, dtype=float)
    if np.any(np.diff(svals) > 0):
        raise ContractError("singular values must be in descending order")
    if svals.size == 0:
        return QuasinormReport(p, 0.0, ())
    n = np.arange(1, svals.size + 1, dtype=float)
    trend = n ** (1.0 / p) * svals
    return QuasinormReport(p, weak_schatten_quasinorm(svals, p), tuple(float(v) for v in trend))


def model_compare(
    spec_target: SymbolSpec,
    spec_model: SymbolSpec,
    N: int,
    k: int,
    solver: Union[Solver, str] = Solver.AUTO,
    tol: Optional[float] = None,
    seed: int = config.SEED,
    blocks: tuple[int, int] = config.DECAY_BLOCKS,
) -> LabReport:
    """
    Singular values of Gamma(a) - Gamma(a~) (same weights, differenced symbols)
    as the sequence n^gamma s_n and its dyadic medians.

    The decay check is relative to Gamma(a): the medians of s_n(difference) /
    s_n(Gamma(a)) must fall over the blocks where n^gamma s_n(Gamma(a)) is still
    above MINUS_FRACTION * max(C^+, C^-).
    """
    shared = ("d", "gamma", "b1", "bm1")
    if any(getattr(spec_target, name) != getattr(spec_model, name) for name in shared):
        raise ContractError("target and model must share d, gamma, b1 and bm1")

    target = build_weighted_hankel(spec_target, N)
    model = build_weighted_hankel(spec_model, N)
    difference = WeightedHankelMatrix(target.d, N, target.symbol - model.symbol, target.weights.copy())
    spectrum, target_spectrum = run_studies(
        lambda matrix: compute_spectrum(matrix, k, solver, tol, seed=seed), (difference, target)
    )

    gamma = spec_target.gamma
    consts = asymptotic_constants(spec_target)
    svals = singular_values(spectrum)
    decay, _ = scaled_sequence(svals, gamma, 0.0)
    medians = dyadic_medians(decay, blocks)
    weak = quasinorm(svals, 1.0 / gamma)

    checks = {}
    relative = ()
    if svals.size:
        floor = config.MINUS_FRACTION * max(consts.C_plus, consts.C_minus)
        relative, checks["relative_decay"] = relative_decay(
            svals, singular_values(target_spectrum), gamma, floor, blocks
        )

    return LabReport(
        kind=StudyKind.MODEL_COMPARE,
        spec=spec_target,
        N=N,
        constants=consts,
        lambda_plus=spectrum.pos,
        lambda_minus=spectrum.neg,
        decay=tuple(float(v) for v in decay),
        decay_blocks=tuple(medians),
        relative_blocks=relative,
        checks=checks,
        metrics={
            "quasinorm": weak.value,
            "symbol_difference_max": float(np.max(np.abs(difference.symbol))),
        },
        provenance={**_provenance(spectrum, k, seed), "model": spec_model.to_dict()},
    )


def s2_bound_check(spec: SymbolSpec, N: int) -> BoundCheck:
    """
    ||H_a||_S2 on the simplex {|j| <= N} against
    (sum_{k <= 2N} W_d(k) (k+1)^d a(k)^2)^(1/2).
    """
    simplex = build_simplex_hankel(spec, N)
    lhs = float(np.linalg.norm(simplex.matrix))
    h = symbol_values(spec, 2 * N)
    k = np.arange(2 * N + 1, dtype=float)
    rhs = float(np.sqrt(np.sum(simplex_weights(spec.d, 2 * N) * (k + 1) ** spec.d * h ** 2)))
    return BoundCheck(lhs, rhs, lhs <= rhs * (1 + 1e-12))


def linf_bound_check(spec: SymbolSpec, N: int) -> BoundCheck:
    """||Gamma_N|| against pi^d sup_k (k+1)^d |a(k)|"""
    matrix = build_weighted_hankel(spec, N)
    spectrum = compute_spectrum(matrix, 1)
    top = max(spectrum.pos[:1] + spectrum.neg[:1], default=0.0)
    k = np.arange(2 * N + 1, dtype=float)
    rhs = math.pi ** spec.d * float(np.max((k + 1) ** spec.d * np.abs(matrix.symbol)))
    return BoundCheck(float(top), rhs, top <= rhs * (1 + 1e-12))


def interlacing_check(spec: SymbolSpec, N: int) -> InterlacingCheck:
    """lambda_n^+(Gamma_N) <= lambda_n^+(Gamma_2N) for every resolved n"""
    small = compute_spectrum(build_weighted_hankel(spec, N), N + 1)
    large = compute_spectrum(build_weighted_hankel(spec, 2 * N), 2 * N + 1)
    count = min(len(small.pos), len(large.pos))
    a, b = np.array(small.pos[:count]), np.array(large.pos[:count])
    violation = float(np.max(a - b)) if count else 0.0
    slack = 1e-12 * max(1.0, large.norm_estimate)
    return InterlacingCheck(N, count, violation, violation <= slack)


@dataclass(frozen=True)
class DoublingCheck:
    n: int
    sizes: tuple[int, ...]
    deviations: tuple[float, ...]  # |n^gamma lambda_n^+ / C^+ - 1| per size
    holds: bool


def doubling_check(
    spec: SymbolSpec,
    N: int,
    n: int = config.DOUBLING_INDEX,
    doublings: int = 2,
    solver: Union[Solver, str] = Solver.AUTO,
    tol: Optional[float] = None,
    seed: int = config.SEED,
) -> DoublingCheck:
    """
    Deviation of n^gamma lambda_n^+ / C^+ from 1 at a fixed n for
    Gamma_N, Gamma_2N, ...; holds when it shrinks with every doubling.
    """
    if n < 1 or doublings < 1:
        raise DomainError(f"need n >= 1 and doublings >= 1, got n={n}, doublings={doublings}")
    consts = asymptotic_constants(spec)
    if consts.C_plus <= 0:
        raise DomainError(f"N-doubling deviation needs C^+ > 0 for {spec}")

    sizes = tuple(N * 2 ** i for i in range(doublings + 1))
    deviations = []
    for size in sizes:
        spectrum = compute_spectrum(build_weighted_hankel(spec, size), n, solver, tol, seed=seed)
        if len(spectrum.pos) < n:
            raise NumericError(f"lambda_{n}^+ of Gamma_{size} is not resolved")
        deviations.append(abs(n ** spec.gamma * spectrum.pos[n - 1] / consts.C_plus - 1.0))
        logger.debug(f"N={size}: deviation at n={n} is {deviations[-1]:.4f}")
    return DoublingCheck(n, sizes, tuple(deviations), strictly_decreasing(deviations))


def _window_mean(values: tuple[float, ...], gamma: float, window: tuple[int, int]) -> float:
    fit = fit_window(values, gamma, 0.0, window)
    return fit.mean_ratio or 0.0


def _combine(a: float, b: float, gamma: float) -> float:
    return (a ** (1.0 / gamma) + b ** (1.0 / gamma)) ** gamma


def parity_split_study(
    spec: SymbolSpec,
    N: int,
    k: int,
    window: tuple[int, int],
    solver: Union[Solver, str] = Solver.AUTO,
    tol: Optional[float] = None,
    seed: int = config.SEED,
) -> LabReport:
    """
    Studies for (b1, 0), (0, bm1) and (b1, bm1) at the same N.

    The combined eigenvalue scale is compared with the l^(1/gamma)
    combination of the parts' scales, for the constants and for the windowed
    means of n^gamma lambda_n.
    """
    if spec.b1 == 0 or spec.bm1 == 0:
        raise DomainError("parity splitting needs b1 != 0 and bm1 != 0")
    _check_window(window, k)

    specs = [spec.with_coefficients(spec.b1, 0.0), spec.with_coefficients(0.0, spec.bm1), spec]
    parts = run_studies(lambda s: asymptotic_study(s, N, k, window, solver, tol, seed), specs)
    first, second, combined = parts

    gamma = spec.gamma
    metrics = {}
    checks = {}
    for sign, attr_c, attr_l in (("plus", "C_plus", "lambda_plus"), ("minus", "C_minus", "lambda_minus")):
        predicted = _combine(getattr(first.constants, attr_c), getattr(second.constants, attr_c), gamma)
        measured_parts = _combine(
            _window_mean(getattr(first, attr_l), gamma, window),
            _window_mean(getattr(second, attr_l), gamma, window),
            gamma,
        )
        measured = _window_mean(getattr(combined, attr_l), gamma, window)
        metrics[f"predicted_{sign}"] = predicted
        metrics[f"measured_parts_{sign}"] = measured_parts
        metrics[f"measured_{sign}"] = measured
        if measured_parts > 0 and measured > 0:
            checks[f"parity_consistent_{sign}"] = abs(measured / measured_parts - 1) <= config.PARITY_TOLERANCE

    return LabReport(
        kind=StudyKind.PARITY_SPLIT,
        spec=spec,
        N=N,
        constants=combined.constants,
        lambda_plus=combined.lambda_plus,
        lambda_minus=combined.lambda_minus,
        ratio_plus=combined.ratio_plus,
        ratio_minus=combined.ratio_minus,
        mode_plus=combined.mode_plus,
        mode_minus=combined.mode_minus,
        fits=combined.fits,
        checks=checks,
        metrics=metrics,
        provenance=combined.provenance,
        parts=(first, second, combined),
    )
