"""
Reduction of the d-variable Hankel form to one variable.

A Hankel matrix on the simplex {|j| <= N} whose entries depend on |i+j| only
equals J* Gamma J, where J sums over levels |j| = const with weight
1/sqrt(W_d(level)) and Gamma is the one-variable matrix
sqrt(W_d(i)) a(i+j) sqrt(W_d(j)). The simplex matrix is a brute-force oracle
for the weighted one.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np
from scipy.linalg import eigh, hankel

from config import config
from services.exceptions import CapacityError, ContractError, DomainError
from services.params import SymbolSpec, symbol_values

logger = logging.getLogger(__name__)


def simplex_weight(d: int, j: int) -> int:
    """W_d(j): number of k in N_0^d with |k| = j"""
    if d < 1 or j < 0:
        raise DomainError(f"simplex weight needs d >= 1 and j >= 0, got d={d}, j={j}")
    return math.comb(j + d - 1, d - 1)


def simplex_weights(d: int, N: int) -> np.ndarray:
    """W_d(0..N) as floats"""
    try:
        return np.array([float(simplex_weight(d, j)) for j in range(N + 1)])
    except OverflowError as exc:
        raise CapacityError(f"W_{d}(j) exceeds floating range for j <= {N}") from exc


def _sign(levels: np.ndarray) -> np.ndarray:
    return np.where(levels % 2 == 0, 1.0, -1.0)


@dataclass(frozen=True, eq=False)
class WeightedHankelMatrix:
    """Gamma_N: entries s(i) h(i+j) s(j), s = sqrt(W_d)"""
    d: int
    N: int
    symbol: np.ndarray  # h(0..2N)
    weights: np.ndarray  # s(0..N)

    def __post_init__(self):
        if self.symbol.shape != (2 * self.N + 1,) or self.weights.shape != (self.N + 1,):
            raise ContractError(
                f"symbol of length {2 * self.N + 1} and weights of length {self.N + 1} expected"
            )
        self.symbol.setflags(write=False)
        self.weights.setflags(write=False)

    @classmethod
    def from_symbol(cls, symbol: np.ndarray, d: int) -> "WeightedHankelMatrix":
        symbol = np.array(symbol, dtype=float)
        if symbol.size % 2 == 0 or symbol.size < 3:
            raise ContractError(f"symbol length must be odd and >= 3, got {symbol.size}")
        N = (symbol.size - 1) // 2
        return cls(d=d, N=N, symbol=symbol, weights=np.sqrt(simplex_weights(d, N)))

    @property
    def size(self) -> int:
        return self.N + 1

    def entry(self, i: int, j: int) -> float:
        return float(self.weights[i] * self.symbol[i + j] * self.weights[j])

    def dense(self) -> np.ndarray:
        """Materialized (N+1)x(N+1) matrix"""
        H = hankel(self.symbol[: self.N + 1], self.symbol[self.N:])
        return self.weights[:, None] * H * self.weights[None, :]

    def parity_conjugate(self) -> "WeightedHankelMatrix":
        """Q Gamma Q with (Qx)(j) = (-1)^j x(j)"""
        k = np.arange(self.symbol.size)
        return WeightedHankelMatrix(self.d, self.N, self.symbol * _sign(k), self.weights.copy())

    def scaled(self, c: float) -> "WeightedHankelMatrix":
        return WeightedHankelMatrix(self.d, self.N, self.symbol * c, self.weights.copy())


def build_weighted_hankel(spec: SymbolSpec, N: int) -> WeightedHankelMatrix:
    """Gamma_N for the sequence described by spec"""
    if N < 1:
        raise DomainError(f"truncation order must be >= 1, got {N}")
    symbol = symbol_values(spec, 2 * N)
    weights = np.sqrt(simplex_weights(spec.d, N))
    logger.debug(f"Built Gamma_{N} for d={spec.d}, gamma={spec.gamma}, kind={spec.kind.value}")
    return WeightedHankelMatrix(spec.d, N, symbol, weights)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def simplex_indices(d: int, N: int) -> list[tuple[int, ...]]:
    """Multi-indices with |j| <= N, by level, lexicographically descending within a level"""
    return [index for level in range(N + 1) for index in _compositions(level, d)]


def simplex_size(d: int, N: int) -> int:
    return math.comb(N + d, d)


@dataclass(frozen=True, eq=False)
class SimplexHankelMatrix:
    """Truncated d-variable Hankel matrix with entries a(|i+j|)"""
    d: int
    N: int
    indices: tuple[tuple[int, ...], ...]
    levels: np.ndarray
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return len(self.indices)


def simplex_hankel_from_symbol(
    symbol: np.ndarray, d: int, N: int, limit: Optional[int] = None
) -> SimplexHankelMatrix:
    symbol = np.asarray(symbol, dtype=float)
    if symbol.size < 2 * N + 1:
        raise ContractError(f"symbol needs {2 * N + 1} values, got {symbol.size}")
    limit = config.DENSE_LIMIT if limit is None else limit
    size = simplex_size(d, N)
    if size > limit:
        raise CapacityError(f"simplex matrix of size {size} exceeds the dense limit {limit}")

    indices = tuple(simplex_indices(d, N))
    levels = np.array([sum(index) for index in indices])
    matrix = symbol[levels[:, None] + levels[None, :]]
    return SimplexHankelMatrix(d, N, indices, levels, matrix)


def build_simplex_hankel(spec: SymbolSpec, N: int, limit: Optional[int] = None) -> SimplexHankelMatrix:
    limit = config.DENSE_LIMIT if limit is None else limit
    size = simplex_size(spec.d, N)
    if size > limit:
        raise CapacityError(f"simplex matrix of size {size} exceeds the dense limit {limit}")
    return simplex_hankel_from_symbol(symbol_values(spec, 2 * N), spec.d, N, limit)


def parity_conjugate(M: SimplexHankelMatrix) -> SimplexHankelMatrix:
    """Q* M Q with (Qx)(j) = (-1)^|j| x(j)"""
    sign = _sign(M.levels)
    return SimplexHankelMatrix(M.d, M.N, M.indices, M.levels, M.matrix * np.outer(sign, sign))


def level_sum_map(d: int, N: int) -> np.ndarray:
    """J: (Jx)(n) = W_d(n)^(-1/2) sum_{|j| = n} x(j), as an (N+1) x binomial(N+d, d) matrix"""
    indices = simplex_indices(d, N)
    levels = np.array([sum(index) for index in indices])
    scale = 1.0 / np.sqrt(simplex_weights(d, N))
    J = np.zeros((N + 1, len(indices)))
    J[levels, np.arange(len(indices))] = scale[levels]
    return J


@dataclass(frozen=True)
class ReductionCheck:
    d: int
    N: int
    matched: bool
    spectra_matched: bool
    max_spectral_error: float
    kernel_dimension: int
    expected_kernel_dimension: int
    quadratic_form_residual: float
    isometry_residual: float


def reduction_check(
    spec: SymbolSpec,
    N: int,
    rtol: float = 1e-10,
    seed: int = config.SEED,
) -> ReductionCheck:
    """
    Compare the simplex oracle with Gamma_N.

    The N+1 largest-magnitude simplex eigenvalues must match the spectrum of
    Gamma_N, the remaining ones must be kernel, and the level-sum map must
    intertwine the quadratic forms.
    """
    weighted = build_weighted_hankel(spec, N)
    gamma_matrix = weighted.dense()
    simplex = simplex_hankel_from_symbol(weighted.symbol, spec.d, N)

    ev_gamma = eigh(gamma_matrix, eigvals_only=True)
    ev_simplex = eigh(simplex.matrix, eigvals_only=True)
    norm = float(np.max(np.abs(ev_gamma)))
    floor = config.KERNEL_RTOL * norm

    order = np.argsort(-np.abs(ev_simplex), kind="stable")
    top = np.sort(ev_simplex[order[: N + 1]])
    gap = np.abs(top - ev_gamma)
    spectral_ok = bool(np.all(gap <= rtol * np.abs(ev_gamma) + floor))
    max_error = float(np.max(gap / np.maximum(np.abs(ev_gamma), floor))) if norm > 0 else 0.0

    # the tail beyond the matched N+1 eigenvalues must sit at the noise floor
    expected_kernel = simplex.size - (N + 1)
    kernel = int(np.sum(np.abs(ev_simplex[order[N + 1:]]) <= floor))

    rng = np.random.default_rng(seed)
    x = rng.standard_normal(simplex.size)
    y = rng.standard_normal(simplex.size)
    J = level_sum_map(spec.d, N)
    lhs = x @ simplex.matrix @ y
    rhs = (J @ x) @ gamma_matrix @ (J @ y)
    scale = max(norm, np.finfo(float).tiny) * np.linalg.norm(x) * np.linalg.norm(y)
    qf_residual = float(abs(lhs - rhs) / scale)

    z = rng.standard_normal(N + 1)
    isometry_residual = float(abs(np.linalg.norm(J.T @ z) - np.linalg.norm(z)) / np.linalg.norm(z))

    matched = spectral_ok and kernel == expected_kernel and qf_residual <= 1e-12 and isometry_residual <= 1e-12
    if not matched:
        logger.warning(
            f"Reduction mismatch at d={spec.d}, N={N}: spectral error {max_error:.2e}, "
            f"kernel {kernel} vs {expected_kernel}, form residual {qf_residual:.2e}"
        )
    return ReductionCheck(
        d=spec.d,
        N=N,
        matched=matched,
        spectra_matched=spectral_ok,
        max_spectral_error=max_error,
        kernel_dimension=kernel,
        expected_kernel_dimension=expected_kernel,
        quadratic_form_residual=qf_residual,
        isometry_residual=isometry_residual,
    )
