"""
Verification suites.

Each suite evaluates a family of properties and returns a report with the
measured values; a suite passes iff every property passes.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from config import config
from services.lab import doubling_check, interlacing_check, linf_bound_check, model_compare, s2_bound_check
from services.params import SymbolKind, SymbolSpec, laplace_ratio, model_seq_with_error
from services.reduction import reduction_check, simplex_size, simplex_weight
from services.weylcheck import gaussian_preset, model_preset, predict, weyl_verify

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    passed: bool
    measured: Optional[float] = None

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "measured": self.measured}


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    params: dict
    properties: tuple[PropertyCheck, ...]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": dict(self.params),
            "passed": self.passed,
            "properties": [p.to_dict() for p in self.properties],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        return cls(
            suite=data["suite"],
            params=dict(data["params"]),
            properties=tuple(PropertyCheck(**p) for p in data["properties"]),
        )


def _report(suite: str, params: dict, properties: list[PropertyCheck]) -> VerificationReport:
    report = VerificationReport(suite, params, tuple(properties))
    failed = [p.name for p in properties if not p.passed]
    if failed:
        logger.warning(f"Suite {suite} failed: {', '.join(failed)}")
    else:
        logger.info(f"Suite {suite} passed ({len(properties)} properties)")
    return report


def verify_reduce(d: int = 2, N: int = 12, gamma: float = 1.0, b1: float = 1.0, bm1: float = 0.0) -> VerificationReport:
    """Simplex oracle against Gamma_N, plus the counting identity"""
    kind = SymbolKind.PURE_POWER if (b1, bm1) == (1.0, 0.0) else SymbolKind.GENERAL
    spec = SymbolSpec(d=d, gamma=gamma, b1=b1, bm1=bm1, kind=kind)
    check = reduction_check(spec, N)
    counted = sum(simplex_weight(d, j) for j in range(N + 1))
    properties = [
        PropertyCheck("counting_identity", counted == simplex_size(d, N), float(counted)),
        PropertyCheck("spectra_match", check.spectra_matched, check.max_spectral_error),
        PropertyCheck(
            "kernel_dimension",
            check.kernel_dimension == check.expected_kernel_dimension,
            float(check.kernel_dimension),
        ),
        PropertyCheck("quadratic_form", check.quadratic_form_residual <= 1e-12, check.quadratic_form_residual),
        PropertyCheck("isometry", check.isometry_residual <= 1e-12, check.isometry_residual),
    ]
    return _report("reduce", {"d": d, "N": N, "gamma": gamma, "b1": b1, "bm1": bm1}, properties)


def verify_laplace(
    gamma: float = 1.0,
    lambda0: float = 0.5,
    orders: Sequence[int] = (0, 1, 2),
    t_values: Sequence[float] = (1e2, 1e4, 1e6),
) -> VerificationReport:
    """
    I_n(t) t^(1+n) (log t)^gamma / n! -> 1: the deviation shrinks along t and
    stays within 2 / log t. Also checks a~(j) against j^-d (log j)^-gamma.
    """
    properties = []
    for n in orders:
        deviations = [abs(laplace_ratio(n, t, gamma, lambda0) - 1.0) for t in t_values]
        properties.append(
            PropertyCheck(f"ratio_decreasing_n{n}", all(b < a for a, b in zip(deviations, deviations[1:])), deviations[-1])
        )
        rate = max(dev * math.log(t) for dev, t in zip(deviations, t_values))
        properties.append(PropertyCheck(f"log_rate_n{n}", rate <= 2.0, rate))

    spec = SymbolSpec(d=1, gamma=gamma, kind=SymbolKind.MODEL)
    j = int(t_values[-1])
    value = model_seq_with_error(spec, j).value
    deviation = abs(value * j * math.log(j) ** gamma - 1.0)
    properties.append(PropertyCheck("model_sequence", deviation <= 2.0 / math.log(j), deviation))
    params = {"gamma": gamma, "lambda0": lambda0, "orders": list(orders), "t_values": list(t_values)}
    return _report("laplace", params, properties)


def verify_weyl(
    preset: str = "gaussian",
    M: Optional[int] = None,
    L: Optional[float] = None,
    window: Optional[tuple[int, int]] = None,
    d: int = 2,
    gamma: float = 1.0,
) -> VerificationReport:
    """Weyl law on the discretized pseudo-differential operator"""
    if preset == "gaussian":
        spec = gaussian_preset(M=M or 4096, L=L or 12.0)
        window = window or (10, 60)
    else:
        spec = model_preset(d=d, gamma=gamma, M=M or 2048, L=L or 3.5)
        window = window or (10, 30)
    report = weyl_verify(spec, predict(spec), window)
    fit = report.fit_plus

    properties = [PropertyCheck("positive_constant", report.prediction.C_plus > 0, report.prediction.C_plus)]
    if preset == "gaussian":
        slope_ok = fit.slope is not None and abs(fit.slope / -spec.gamma - 1.0) <= 0.05
        properties.append(PropertyCheck("slope", slope_ok, fit.slope))
        mean_ok = fit.mean_ratio is not None and 0.85 <= fit.mean_ratio <= 1.15
        properties.append(PropertyCheck("mean_ratio", mean_ok, fit.mean_ratio))
    else:
        lo, hi = window
        inside = [r for r in report.ratio_plus[lo - 1: hi] if 0.7 <= r <= 1.3]
        properties.append(PropertyCheck("ratio_band", bool(inside), fit.mean_ratio))
    params = {"preset": preset, "M": spec.grid.M, "L": spec.grid.L, "window": list(window)}
    return _report("weyl", params, properties)


def verify_model(
    d: int = 1,
    gamma: float = 1.0,
    b1: float = 1.0,
    bm1: float = 0.0,
    N: int = 4096,
    k: int = 20,
) -> VerificationReport:
    """Target minus model: s_n(difference) / s_n(target) falls over resolved dyadic blocks"""
    kind = SymbolKind.PURE_POWER if (b1, bm1) == (1.0, 0.0) else SymbolKind.GENERAL
    target = SymbolSpec(d=d, gamma=gamma, b1=b1, bm1=bm1, kind=kind)
    report = model_compare(target, target.as_model(), N, k)
    relative = report.relative_blocks
    properties = [
        PropertyCheck(
            "relative_decay",
            report.checks.get("relative_decay", False),
            relative[-1] / relative[0] if relative else None,
        ),
        PropertyCheck("quasinorm_finite", math.isfinite(report.metrics["quasinorm"]), report.metrics["quasinorm"]),
    ]
    params = {"d": d, "gamma": gamma, "b1": b1, "bm1": bm1, "N": N, "k": k}
    return _report("model", params, properties)


def verify_s2(
    d_values: Sequence[int] = (1, 2, 3),
    gammas: Sequence[float] = (0.5, 1.0, 2.0),
    N: int = 10,
    interlace_N: int = 256,
) -> VerificationReport:
    """Hilbert-Schmidt and operator-norm bounds on truncations, and interlacing under N -> 2N"""
    properties = []
    for d in d_values:
        for gamma in gammas:
            spec = SymbolSpec(d=d, gamma=gamma)
            s2 = s2_bound_check(spec, N)
            properties.append(PropertyCheck(f"s2_d{d}_g{gamma}", s2.holds, s2.lhs / s2.rhs if s2.rhs else 0.0))
            linf = linf_bound_check(spec, N)
            properties.append(PropertyCheck(f"linf_d{d}_g{gamma}", linf.holds, linf.lhs / linf.rhs if linf.rhs else 0.0))
    interlacing = interlacing_check(SymbolSpec(d=d_values[0], gamma=gammas[0]), interlace_N)
    properties.append(PropertyCheck("interlacing", interlacing.holds, interlacing.max_violation))
    params = {"d_values": list(d_values), "gammas": list(gammas), "N": N, "interlace_N": interlace_N}
    return _report("s2", params, properties)


def verify_doubling(
    d: int = 1,
    gamma: float = 1.0,
    N: int = 8192,
    index: int = config.DOUBLING_INDEX,
    doublings: int = 2,
) -> VerificationReport:
    """|n^gamma lambda_n^+ / C - 1| at a fixed n shrinks as N doubles, on top of interlacing"""
    spec = SymbolSpec(d=d, gamma=gamma)
    check = doubling_check(spec, N, index, doublings)
    properties = [
        PropertyCheck(f"deviation_N{size}", True, deviation)
        for size, deviation in zip(check.sizes, check.deviations)
    ]
    properties.append(PropertyCheck("deviation_decreasing", check.holds, check.deviations[-1]))
    params = {"d": d, "gamma": gamma, "N": N, "index": index, "doublings": doublings}
    return _report("doubling", params, properties)


SUITES = {
    "reduce": verify_reduce,
    "laplace": verify_laplace,
    "weyl": verify_weyl,
    "model": verify_model,
    "s2": verify_s2,
    "doubling": verify_doubling,
}
