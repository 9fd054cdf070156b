import math

import numpy as np
import pytest
from scipy.special import expi

from config import config
from services.exceptions import DomainError, NumericError
from services.quadrature import QuadratureConfig, gauss_legendre_panels, integrate, integrate_to_zero


def test_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(tol=0.0)
    with pytest.raises(DomainError):
        QuadratureConfig(ratio=1.0)
    with pytest.raises(DomainError):
        QuadratureConfig(slack=0.5)
    assert QuadratureConfig().slack == config.QUAD_SLACK
    assert QuadratureConfig.for_matrices().tol == config.MATRIX_QUAD_TOL
    halved = QuadratureConfig(tol=1e-10, rel_tol=1e-8).halved()
    assert halved.tol == pytest.approx(5e-11)
    assert halved.rel_tol == pytest.approx(5e-9)


def test_integrate_polynomial():
    result = integrate(lambda x: x * x, 0.0, 3.0, QuadratureConfig())
    assert result.value == pytest.approx(9.0, rel=1e-13)
    assert result.error < 1e-10


def test_integrate_cosine_weight():
    # int_0^inf e^-x cos(2x) dx = 1/5
    result = integrate(lambda x: math.exp(-x), 0.0, 60.0, QuadratureConfig(), weight="cos", wvar=2.0)
    assert result.value == pytest.approx(0.2, abs=1e-12)


def test_integrate_non_finite_raises():
    with pytest.raises(NumericError):
        integrate(lambda x: math.inf, 0.0, 1.0, QuadratureConfig())


def test_integrate_unconverged_raises():
    # one Gauss-Kronrod panel cannot resolve 200 oscillations
    with pytest.raises(NumericError) as excinfo:
        integrate(lambda x: math.sin(200.0 * x), 0.0, 10.0, QuadratureConfig(limit=1))
    assert excinfo.value.error_estimate > config.QUAD_SLACK * config.QUAD_TOL


def test_integrate_slack_accepts_flagged_result():
    result = integrate(lambda x: math.sin(200.0 * x), 0.0, 10.0, QuadratureConfig(limit=1, slack=1e30))
    assert math.isfinite(result.value)
    assert result.error > QuadratureConfig().tol


def test_integrate_to_zero_log_singularity():
    # int_0^1/2 |log x|^-1 dx = -li(1/2) = -Ei(log 1/2)
    result = integrate_to_zero(lambda x: 1.0 / abs(math.log(x)), 0.5, QuadratureConfig())
    assert result.value == pytest.approx(-expi(math.log(0.5)), rel=1e-10)


def test_integrate_to_zero_with_breaks():
    def f(x):
        return 1.0 if x < 0.3 else 2.0

    result = integrate_to_zero(f, 1.0, QuadratureConfig(), breaks=[0.3])
    assert result.value == pytest.approx(0.3 + 1.4, rel=1e-12)


def test_integrate_to_zero_empty_range():
    assert integrate_to_zero(lambda x: 1.0, 0.0, QuadratureConfig()).value == 0.0


def test_gauss_legendre_panels_exact_for_polynomials():
    nodes, weights = gauss_legendre_panels(np.array([1.0, 0.5, 0.25, 0.0]), 10)
    assert nodes.size == weights.size == 30
    assert np.all(weights > 0)
    assert weights @ nodes ** 5 == pytest.approx(1.0 / 6.0, rel=1e-14)
