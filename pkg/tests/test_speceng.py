import numpy as np
import pytest

from services.exceptions import CapacityError, ContractError, DomainError
from services.params import SymbolKind, SymbolSpec
from services.reduction import build_weighted_hankel
from services.speceng import (
    FastHankelOperator,
    Solver,
    SpectrumResult,
    compute_spectrum,
    dense_eig,
    hankel_matvec,
    lanczos_extremal,
    schatten_norm,
    singular_values,
    weak_schatten_quasinorm,
)


@pytest.mark.parametrize(
    "spec, N",
    [
        (SymbolSpec(d=1, gamma=1.0), 300),
        (SymbolSpec(d=2, gamma=1.0, b1=1.0, bm1=0.5, kind=SymbolKind.GENERAL), 257),
        (SymbolSpec(d=3, gamma=0.5), 100),
        (SymbolSpec(d=2, gamma=1.0), 20),
    ],
)
def test_fast_matvec_matches_dense(spec, N):
    matrix = build_weighted_hankel(spec, N)
    op = FastHankelOperator.from_matrix(matrix)
    dense = matrix.dense()
    rng = np.random.default_rng(1)
    bound = 1e-12 * np.linalg.norm(dense[:, 0])
    for _ in range(3):
        x = rng.standard_normal(N + 1)
        error = np.linalg.norm(op.matvec(x) - dense @ x)
        assert error <= bound * np.linalg.norm(x)


def test_matvec_helpers(pure_spec):
    matrix = build_weighted_hankel(pure_spec, 40)
    op = FastHankelOperator.from_matrix(matrix)
    x = np.linspace(-1.0, 1.0, 41)
    np.testing.assert_allclose(hankel_matvec(op, x), op(x))
    np.testing.assert_allclose(op.negated().matvec(x), -op.matvec(x))
    np.testing.assert_allclose(op.clone().matvec(x), op.matvec(x))
    with pytest.raises(ContractError):
        op.matvec(np.ones(40))


GRID_SPECS = [
    SymbolSpec(d=1, gamma=1.0),
    SymbolSpec(d=2, gamma=1.0, b1=1.0, bm1=-0.5, kind=SymbolKind.GENERAL),
    SymbolSpec(d=3, gamma=0.5),
]


@pytest.mark.parametrize(
    "N",
    [64, 1024, pytest.param(4096, marks=pytest.mark.slow)],
)
@pytest.mark.parametrize("spec", GRID_SPECS)
def test_fast_matvec_matches_dense_on_many_vectors(spec, N):
    matrix = build_weighted_hankel(spec, N)
    op = FastHankelOperator.from_matrix(matrix)
    dense = matrix.dense()
    X = np.random.default_rng(2).standard_normal((N + 1, 100))
    expected = dense @ X
    for column in range(X.shape[1]):
        error = np.linalg.norm(op.matvec(X[:, column]) - expected[:, column])
        assert error <= 1e-11 * np.linalg.norm(expected[:, column])


@pytest.mark.parametrize("spec", GRID_SPECS)
def test_matvec_is_symmetric(spec):
    op = FastHankelOperator.from_matrix(build_weighted_hankel(spec, 257))
    rng = np.random.default_rng(3)
    for _ in range(5):
        x, y = rng.standard_normal(258), rng.standard_normal(258)
        lhs, rhs = op.matvec(x) @ y, x @ op.matvec(y)
        scale = np.linalg.norm(op.matvec(x)) * np.linalg.norm(y) + np.linalg.norm(x) * np.linalg.norm(op.matvec(y))
        assert abs(lhs - rhs) <= 1e-12 * scale


class TestDenseEig:
    def test_diagonal(self):
        result = dense_eig(np.diag([3.0, -1.0, 0.0, 2.0]))
        assert result.pos == pytest.approx((3.0, 2.0))
        assert result.neg == pytest.approx((1.0,))
        assert result.kernel_dimension == 1
        assert result.complete
        assert result.N == 3

    def test_rejects_non_square_and_asymmetric(self):
        with pytest.raises(ContractError):
            dense_eig(np.ones((2, 3)))
        with pytest.raises(ContractError):
            dense_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_capacity(self):
        with pytest.raises(CapacityError):
            dense_eig(np.eye(5), limit=4)

    def test_hermitian(self):
        result = dense_eig(np.array([[0.0, 1j], [-1j, 0.0]]))
        assert result.pos == pytest.approx((1.0,))
        assert result.neg == pytest.approx((1.0,))

    def test_swapped(self):
        result = dense_eig(np.diag([3.0, -1.0]))
        swapped = result.swapped()
        assert swapped.pos == pytest.approx((1.0,))
        assert swapped.neg == pytest.approx((3.0,))


def _assert_resolved_match(got, want, norm, rtol=1e-8, atol=1e-11):
    """Compare eigenvalues of one sign down to 1e-6 of the operator norm"""
    resolved = [i for i in range(min(len(got), len(want))) if want[i] >= 1e-6 * norm]
    np.testing.assert_allclose(
        [got[i] for i in resolved],
        [want[i] for i in resolved],
        rtol=rtol,
        atol=atol * norm,
    )
    return len(resolved)


class TestLanczos:
    @pytest.mark.parametrize("d", [1, 2, 3])
    @pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
    def test_matches_dense_grid(self, d, gamma):
        matrix = build_weighted_hankel(SymbolSpec(d=d, gamma=gamma), 512)
        op = FastHankelOperator.from_matrix(matrix)
        reference = dense_eig(matrix.dense())
        result = lanczos_extremal(op, 5, tol=1e-12, max_iter=op.size)
        norm = reference.norm_estimate
        assert len(result.pos) >= 1
        assert _assert_resolved_match(result.pos, reference.pos, norm) >= 1
        _assert_resolved_match(result.neg, reference.neg, norm)

    def test_negated_operator_swaps_signs(self):
        spec = SymbolSpec(d=2, gamma=1.0, b1=1.0, bm1=-0.5, kind=SymbolKind.GENERAL)
        op = FastHankelOperator.from_matrix(build_weighted_hankel(spec, 300))
        base = lanczos_extremal(op, 4, tol=1e-12, max_iter=op.size, seed=5)
        flipped = lanczos_extremal(op.negated(), 4, tol=1e-12, max_iter=op.size, seed=5)
        swapped = base.swapped()
        assert _assert_resolved_match(flipped.pos, swapped.pos, base.norm_estimate, atol=1e-10) >= 1
        assert _assert_resolved_match(flipped.neg, swapped.neg, base.norm_estimate, atol=1e-10) >= 1

    @pytest.mark.parametrize("c", [0.25, 3.0])
    def test_scaling_equivariance(self, pure_spec, c):
        op = FastHankelOperator.from_matrix(build_weighted_hankel(pure_spec, 300))
        base = lanczos_extremal(op, 4, tol=1e-12, max_iter=op.size, seed=5)
        scaled = lanczos_extremal(op.scaled(c), 4, tol=1e-12, max_iter=op.size, seed=5)
        assert scaled.norm_estimate == pytest.approx(c * base.norm_estimate, rel=1e-10)
        assert _assert_resolved_match(scaled.pos, tuple(c * v for v in base.pos), c * base.norm_estimate, atol=1e-10) >= 1

    def test_matches_dense(self):
        matrix = build_weighted_hankel(SymbolSpec(d=1, gamma=1.0), 511)
        op = FastHankelOperator.from_matrix(matrix)
        reference = dense_eig(matrix.dense())
        result = lanczos_extremal(op, 5, tol=1e-12, max_iter=op.size)

        norm = reference.norm_estimate
        assert result.solver is Solver.LANCZOS
        assert len(result.pos) >= 3
        for got, want in ((result.pos, reference.pos), (result.neg, reference.neg)):
            count = len(got)
            assert count <= 5
            resolved = [i for i in range(min(count, len(want))) if want[i] >= 1e-6 * norm]
            np.testing.assert_allclose(
                [got[i] for i in resolved],
                [want[i] for i in resolved],
                rtol=1e-8,
                atol=1e-12 * norm,
            )
        assert max(result.residuals_pos) <= 1e-8 * norm

    def test_rank_one(self):
        # h(k) = r^k gives a rank one Hankel matrix
        symbol = 0.5 ** np.arange(41)
        op = FastHankelOperator(symbol, np.ones(21))
        result = lanczos_extremal(op, 3)
        assert len(result.pos) == 1
        assert result.pos[0] == pytest.approx(sum(0.25 ** np.arange(21)), rel=1e-10)
        assert result.neg == ()
        assert result.complete

    def test_deterministic(self, pure_spec):
        op = FastHankelOperator.from_matrix(build_weighted_hankel(pure_spec, 300))
        first = lanczos_extremal(op, 4, seed=7)
        second = lanczos_extremal(op, 4, seed=7)
        assert first.pos == second.pos
        assert first.neg == second.neg

    def test_k_range(self, pure_spec):
        op = FastHankelOperator.from_matrix(build_weighted_hankel(pure_spec, 10))
        with pytest.raises(ContractError):
            lanczos_extremal(op, 0)
        with pytest.raises(ContractError):
            lanczos_extremal(op, 12)


class TestComputeSpectrum:
    def test_auto_picks_dense_for_small(self, pure_spec):
        result = compute_spectrum(build_weighted_hankel(pure_spec, 64), 5)
        assert result.solver is Solver.DENSE

    def test_dense_and_lanczos_agree_on_top(self):
        spec = SymbolSpec(d=2, gamma=1.0, b1=1.0, bm1=-0.5, kind=SymbolKind.GENERAL)
        matrix = build_weighted_hankel(spec, 200)
        dense = compute_spectrum(matrix, 5, Solver.DENSE)
        lanczos = compute_spectrum(matrix, 5, "lanczos", tol=1e-12, max_iter=201)
        assert lanczos.pos[0] == pytest.approx(dense.pos[0], rel=1e-10)
        assert lanczos.neg[0] == pytest.approx(dense.neg[0], rel=1e-10)

    def test_dense_limit(self, pure_spec, monkeypatch):
        from config import config

        monkeypatch.setattr(config, "DENSE_LIMIT", 32)
        with pytest.raises(CapacityError):
            compute_spectrum(build_weighted_hankel(pure_spec, 64), 3, Solver.DENSE)


class TestNorms:
    def test_singular_values_merge(self):
        result = SpectrumResult(pos=(3.0, 1.0), neg=(2.0,), N=5, solver=Solver.DENSE)
        np.testing.assert_array_equal(singular_values(result), [3.0, 2.0, 1.0])

    def test_schatten(self):
        s = np.array([3.0, 4.0])
        assert schatten_norm(s, 2.0) == pytest.approx(5.0)
        assert schatten_norm(np.array([]), 1.0) == 0.0
        with pytest.raises(DomainError):
            schatten_norm(s, 0.0)

    def test_weak_quasinorm(self):
        s = 1.0 / np.arange(1, 11)
        assert weak_schatten_quasinorm(s, 1.0) == pytest.approx(1.0)
        assert weak_schatten_quasinorm(s, 0.5) == pytest.approx(10.0)
