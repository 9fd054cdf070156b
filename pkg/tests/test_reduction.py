import math

import numpy as np
import pytest
from scipy.linalg import eigh

from services.exceptions import CapacityError, ContractError, DomainError
from services.params import SymbolKind, SymbolSpec
from services.reduction import (
    WeightedHankelMatrix,
    build_simplex_hankel,
    build_weighted_hankel,
    level_sum_map,
    parity_conjugate,
    reduction_check,
    simplex_hankel_from_symbol,
    simplex_indices,
    simplex_size,
    simplex_weight,
    simplex_weights,
)


def test_simplex_weight():
    assert simplex_weight(1, 7) == 1
    assert simplex_weight(2, 7) == 8
    assert simplex_weight(3, 4) == 15
    with pytest.raises(DomainError):
        simplex_weight(0, 3)


@pytest.mark.parametrize("d, N", [(1, 5), (2, 6), (3, 4), (4, 3)])
def test_counting_identity(d, N):
    assert sum(simplex_weight(d, j) for j in range(N + 1)) == simplex_size(d, N) == math.comb(N + d, d)
    assert len(simplex_indices(d, N)) == simplex_size(d, N)


def test_simplex_indices_order():
    assert simplex_indices(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_simplex_weights_overflow():
    with pytest.raises(CapacityError):
        simplex_weights(200, 10 ** 6)


class TestWeightedHankel:
    def test_entries(self, general_spec):
        matrix = build_weighted_hankel(general_spec, 5)
        dense = matrix.dense()
        assert dense.shape == (6, 6)
        assert dense[2, 3] == pytest.approx(math.sqrt(3 * 4) * matrix.symbol[5])
        assert matrix.entry(2, 3) == pytest.approx(dense[2, 3])
        np.testing.assert_array_equal(dense, dense.T)

    def test_read_only(self, pure_spec):
        matrix = build_weighted_hankel(pure_spec, 4)
        with pytest.raises(ValueError):
            matrix.symbol[0] = 1.0

    def test_shape_contract(self):
        with pytest.raises(ContractError):
            WeightedHankelMatrix(1, 3, np.ones(6), np.ones(4))
        with pytest.raises(ContractError):
            WeightedHankelMatrix.from_symbol(np.ones(4), 1)

    def test_from_symbol(self):
        matrix = WeightedHankelMatrix.from_symbol(np.arange(1.0, 8.0), 2)
        assert matrix.N == 3
        np.testing.assert_allclose(matrix.weights ** 2, [1, 2, 3, 4])

    def test_truncation_order(self, pure_spec):
        with pytest.raises(DomainError):
            build_weighted_hankel(pure_spec, 0)

    def test_parity_swap_gives_same_spectrum(self):
        a = build_weighted_hankel(SymbolSpec(d=2, gamma=1.0, b1=1.0, bm1=0.5, kind=SymbolKind.GENERAL), 64)
        b = build_weighted_hankel(SymbolSpec(d=2, gamma=1.0, b1=0.5, bm1=1.0, kind=SymbolKind.GENERAL), 64)
        # swapping b1 and bm1 is conjugation by (-1)^j
        np.testing.assert_allclose(a.parity_conjugate().symbol, b.symbol, rtol=1e-15)
        np.testing.assert_allclose(eigh(a.dense(), eigvals_only=True), eigh(b.dense(), eigvals_only=True), atol=1e-12)

    def test_scaled(self, pure_spec):
        matrix = build_weighted_hankel(pure_spec, 3)
        np.testing.assert_allclose(matrix.scaled(-2.0).dense(), -2.0 * matrix.dense())


class TestSimplexOracle:
    def test_entries_depend_on_level_sum(self):
        spec = SymbolSpec(d=2, gamma=1.0)
        simplex = build_simplex_hankel(spec, 3)
        i = simplex.indices.index((1, 0))
        j = simplex.indices.index((0, 2))
        assert simplex.matrix[i, j] == pytest.approx(simplex.matrix[0, simplex.indices.index((3, 0))])

    def test_capacity(self):
        with pytest.raises(CapacityError):
            build_simplex_hankel(SymbolSpec(d=3, gamma=1.0), 40, limit=1000)

    def test_parity_conjugate(self, general_spec):
        simplex = build_simplex_hankel(general_spec, 3)
        flipped = parity_conjugate(simplex)
        np.testing.assert_allclose(
            np.sort(np.linalg.eigvalsh(flipped.matrix)),
            np.sort(np.linalg.eigvalsh(simplex.matrix)),
            atol=1e-12,
        )

    def test_level_sum_map_is_coisometry(self):
        J = level_sum_map(3, 4)
        np.testing.assert_allclose(J @ J.T, np.eye(5), atol=1e-14)

    def test_quadratic_forms_agree(self, general_spec):
        N = 4
        simplex = build_simplex_hankel(general_spec, N)
        gamma = build_weighted_hankel(general_spec, N).dense()
        J = level_sum_map(2, N)
        np.testing.assert_allclose(J.T @ gamma @ J, simplex.matrix, atol=1e-14)


@pytest.mark.parametrize(
    "spec, N",
    [
        (SymbolSpec(d=2, gamma=1.0), 12),
        (SymbolSpec(d=3, gamma=0.5), 4),
        (SymbolSpec(d=2, gamma=2.0, b1=1.0, bm1=-0.7, kind=SymbolKind.GENERAL), 6),
    ],
)
def test_reduction_check(spec, N):
    check = reduction_check(spec, N)
    assert check.spectra_matched
    assert check.quadratic_form_residual <= 1e-12
    assert check.isometry_residual <= 1e-12


def test_reduction_kernel_dimension():
    check = reduction_check(SymbolSpec(d=2, gamma=1.0), 3)
    assert check.expected_kernel_dimension == simplex_size(2, 3) - 4
    assert check.kernel_dimension == check.expected_kernel_dimension


def test_simplex_hankel_from_arbitrary_symbol():
    symbol = np.arange(7, dtype=float) ** 2
    simplex = simplex_hankel_from_symbol(symbol, 2, 3)
    assert simplex.size == simplex_size(2, 3)
    np.testing.assert_array_equal(simplex.levels, [sum(index) for index in simplex.indices])
    np.testing.assert_array_equal(simplex.matrix, np.add.outer(simplex.levels, simplex.levels) ** 2)
    with pytest.raises(ContractError):
        simplex_hankel_from_symbol(symbol[:6], 2, 3)
