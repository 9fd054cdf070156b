import math

import numpy as np
import pytest

from services.constants import c_dgamma
from services.exceptions import ConfigurationError, DomainError
from services.speceng import dense_eig
from services.weylcheck import (
    PRESETS,
    Grid,
    PsdoSpec,
    beta_mass,
    build_psdo_matrix,
    gaussian_preset,
    model_preset,
    predict,
    refinement_delta,
    weyl_predict,
    weyl_verify,
)


class TestGrid:
    def test_power_of_two(self):
        with pytest.raises(ConfigurationError):
            Grid(5.0, 1000)
        with pytest.raises(ConfigurationError):
            Grid(0.0, 64)

    def test_points_and_spacing(self):
        grid = Grid(2.0, 8)
        assert grid.h == 0.5
        np.testing.assert_allclose(grid.points(), np.arange(-2.0, 2.0, 0.5))
        assert grid.frequencies()[1] == pytest.approx(1.0 / 4.0)

    def test_refined_keeps_spacing(self):
        grid = Grid(3.0, 64).refined()
        assert (grid.L, grid.M) == (6.0, 128)
        assert grid.h == Grid(3.0, 64).h


def _constant_symbol_spec(M=64, L=6.0):
    return PsdoSpec(
        alpha=lambda w: np.ones_like(np.asarray(w, dtype=float)),
        beta=lambda x: np.exp(-np.asarray(x) ** 2),
        grid=Grid(L, M),
        gamma=1.0,
        alpha_limits=(1.0, 1.0),
    )


class TestMatrix:
    def test_identity_multiplier_gives_multiplication_operator(self):
        spec = _constant_symbol_spec()
        psi = build_psdo_matrix(spec)
        beta = spec.beta_values()
        np.testing.assert_allclose(psi, np.diag(beta ** 2), atol=1e-14)

    def test_symmetric_real_for_even_alpha(self):
        psi = build_psdo_matrix(gaussian_preset(M=256, L=8.0))
        assert np.isrealobj(psi)
        np.testing.assert_array_equal(psi, psi.T)

    def test_one_sided_alpha_is_hermitian(self):
        psi = build_psdo_matrix(model_preset(M=256, L=3.5))
        np.testing.assert_allclose(psi, psi.conj().T, atol=0)

    def test_beta_must_decay_on_grid(self):
        with pytest.raises(ConfigurationError):
            build_psdo_matrix(gaussian_preset(M=256, L=2.0))
        # without validation the same grid is accepted
        build_psdo_matrix(gaussian_preset(M=256, L=2.0), validate=False)

    def test_zero_beta_gives_zero_matrix(self):
        spec = PsdoSpec(
            alpha=lambda w: 1.0 / np.sqrt(1.0 + np.asarray(w) ** 2),
            beta=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
            grid=Grid(8.0, 128),
            gamma=1.0,
            alpha_limits=(1.0, 1.0),
        )
        psi = build_psdo_matrix(spec)
        np.testing.assert_array_equal(psi, np.zeros((128, 128)))
        result = dense_eig(psi)
        assert result.pos == () and result.neg == ()

    @pytest.mark.parametrize("c", [0.5, 3.0])
    def test_eigenvalues_scale_with_beta_squared(self, c):
        spec = gaussian_preset(M=256, L=8.0)
        base = dense_eig(build_psdo_matrix(spec)).pos[:20]
        scaled = dense_eig(build_psdo_matrix(spec.scaled_beta(c))).pos[:20]
        np.testing.assert_allclose(scaled, c ** 2 * np.array(base), rtol=1e-9, atol=1e-13 * c ** 2 * base[0])

    @pytest.mark.parametrize("preset", [gaussian_preset(M=256, L=8.0), model_preset(M=256, L=3.5)])
    def test_negated_alpha_swaps_eigenvalues(self, preset):
        base = dense_eig(build_psdo_matrix(preset))
        flipped = dense_eig(build_psdo_matrix(preset.negated()))
        scale = base.norm_estimate
        for got, want in ((flipped.pos, base.neg), (flipped.neg, base.pos)):
            n = min(len(got), len(want), 20)
            np.testing.assert_allclose(got[:n], want[:n], rtol=1e-9, atol=1e-13 * scale)
        assert min(len(flipped.neg), len(base.pos)) >= 20

    def test_non_finite_samples(self):
        spec = PsdoSpec(
            alpha=lambda w: 1.0 / np.asarray(w, dtype=float),
            beta=lambda x: np.exp(-np.asarray(x) ** 2),
            grid=Grid(8.0, 64),
            gamma=1.0,
            alpha_limits=(0.0, 0.0),
        )
        with np.errstate(divide="ignore"):
            with pytest.raises(ConfigurationError):
                build_psdo_matrix(spec)


class TestPrediction:
    def test_gaussian_constant(self):
        prediction = predict(gaussian_preset())
        assert prediction.beta_mass == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-10)
        assert prediction.C_plus == pytest.approx(math.sqrt(math.pi / 2.0) / math.pi, rel=1e-10)
        assert prediction.C_minus == 0.0

    def test_negated_swaps_signs(self):
        prediction = predict(gaussian_preset().negated())
        assert prediction.C_plus == 0.0
        assert prediction.C_minus == pytest.approx(math.sqrt(math.pi / 2.0) / math.pi, rel=1e-10)

    def test_beta_scaling(self):
        base = predict(gaussian_preset())
        scaled = predict(gaussian_preset().scaled_beta(2.0))
        # gamma = 1: C scales with int |beta|^2
        assert scaled.C_plus == pytest.approx(4.0 * base.C_plus, rel=1e-10)

    def test_model_constant_is_c_dgamma(self):
        prediction = predict(model_preset(d=2, gamma=1.0))
        assert prediction.C_plus == pytest.approx(c_dgamma(2, 1.0).C_dgamma, rel=1e-8)
        assert prediction.C_minus == 0.0

    def test_zero_symbol(self):
        prediction = weyl_predict((0.0, 0.0), 1.0, lambda x: np.exp(-np.asarray(x) ** 2))
        assert prediction.C_plus == prediction.C_minus == 0.0

    def test_non_decaying_beta(self):
        with pytest.raises(DomainError):
            beta_mass(lambda x: np.ones_like(np.asarray(x, dtype=float)), 1.0)

    def test_support(self):
        mass = beta_mass(lambda x: np.ones_like(np.asarray(x, dtype=float)), 2.0, support=(-1.0, 1.0))
        assert mass == pytest.approx(2.0)


@pytest.mark.slow
def test_gaussian_weyl_law():
    spec = gaussian_preset(M=4096, L=12.0)
    report = weyl_verify(spec, predict(spec), (10, 60))
    fit = report.fit_plus
    assert fit.count == 51
    assert fit.slope == pytest.approx(-1.0, abs=0.05)
    assert 0.85 <= fit.mean_ratio <= 1.15
    assert report.mode_minus.value == "raw"


@pytest.mark.slow
def test_model_weyl_law_band():
    spec = model_preset(d=2, gamma=1.0, M=2048, L=3.5)
    report = weyl_verify(spec, predict(spec), (10, 30))
    assert any(0.7 <= r <= 1.3 for r in report.ratio_plus[9:30])


@pytest.mark.slow
def test_refinement_is_stable():
    assert refinement_delta(gaussian_preset(M=1024, L=12.0)) < 1e-6


def test_presets_registered():
    assert set(PRESETS) == {"gaussian", "model"}
    assert PRESETS["model"]().name.startswith("model")
