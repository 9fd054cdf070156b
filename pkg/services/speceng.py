"""
Spectral engine.

Fast application of the weighted Hankel matrix Gamma_N by real FFTs, a
Lanczos iteration with full reorthogonalization for the extremal signed
eigenvalues, and a dense symmetric eigensolver.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Union

import numpy as np
from scipy import fft as sfft
from scipy.linalg import eigh, eigh_tridiagonal

from config import config
from services.exceptions import CapacityError, ContractError, DomainError
from services.reduction import WeightedHankelMatrix

logger = logging.getLogger(__name__)

# beta below this fraction of the operator scale means an invariant subspace up to roundoff
_BREAKDOWN = 1e-13


class Solver(str, Enum):
    AUTO = "auto"  # dense up to DENSE_AUTO_SIZE, Lanczos above
    DENSE = "dense"
    LANCZOS = "lanczos"


def _next_pow2(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


def _blocks(size: int, uniform: bool, block_min: int) -> list[tuple[int, int]]:
    if uniform or size <= block_min:
        return [(0, size)]
    edges = [0, block_min]
    while edges[-1] < size:
        edges.append(min(2 * edges[-1], size))
    return list(zip(edges[:-1], edges[1:]))


class FastHankelOperator:
    """
    y_i = s(i) sum_j h(i+j) s(j) x_j in O(N log N).

    With constant weights the whole symbol goes through one transform of
    length the next power of two >= 2N+2. Otherwise indices are split into
    dyadic blocks and every block pair gets its own transform, so that each
    transform only mixes weights and symbol values of comparable size.

    Holds a workspace: one instance must not be applied from two threads at
    once; use clone() per thread.
    """

    def __init__(
        self,
        symbol: np.ndarray,
        weights: np.ndarray,
        workers: Optional[int] = None,
        block_min: int = config.BLOCK_MIN,
    ):
        symbol = np.asarray(symbol, dtype=float)
        weights = np.asarray(weights, dtype=float)
        self.N = weights.size - 1
        if self.N < 0 or symbol.size < 2 * self.N + 1:
            raise ContractError(f"symbol needs {2 * self.N + 1} values, got {symbol.size}")
        self.symbol = symbol[: 2 * self.N + 1]
        self.weights = weights
        self.workers = workers or config.THREADS
        self.block_min = block_min

        uniform = bool(np.all(weights == weights[0]))
        self._pairs = []
        blocks = _blocks(self.N + 1, uniform, block_min)
        for ia, (a0, a1) in enumerate(blocks):
            for b0, b1 in blocks[ia:]:
                n_a, n_b = a1 - a0, b1 - b0
                length = _next_pow2(n_a + n_b)
                g = self.symbol[a0 + b0: a0 + b0 + n_a + n_b - 1]
                ghat = sfft.rfft(g, length, workers=self.workers)
                self._pairs.append((a0, a1, b0, b1, length, ghat))
        self._work = np.empty(self.N + 1)

    @classmethod
    def from_matrix(cls, matrix: WeightedHankelMatrix, workers: Optional[int] = None) -> "FastHankelOperator":
        return cls(matrix.symbol, matrix.weights, workers)

    @property
    def size(self) -> int:
        return self.N + 1

    def clone(self) -> "FastHankelOperator":
        return FastHankelOperator(self.symbol.copy(), self.weights.copy(), self.workers, self.block_min)

    def scaled(self, c: float) -> "FastHankelOperator":
        return FastHankelOperator(self.symbol * c, self.weights.copy(), self.workers, self.block_min)

    def negated(self) -> "FastHankelOperator":
        return self.scaled(-1.0)

    def _correlate(self, ghat: np.ndarray, u: np.ndarray, length: int, offset: int, count: int) -> np.ndarray:
        spectrum = ghat * sfft.rfft(u[::-1], length, workers=self.workers)
        return sfft.irfft(spectrum, length, workers=self.workers)[offset: offset + count]

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.N + 1,):
            raise ContractError(f"vector of length {self.N + 1} expected, got shape {x.shape}")
        u = self.weights * x
        z = self._work
        z.fill(0.0)
        for a0, a1, b0, b1, length, ghat in self._pairs:
            n_a, n_b = a1 - a0, b1 - b0
            z[a0:a1] += self._correlate(ghat, u[b0:b1], length, n_b - 1, n_a)
            if a0 != b0:
                z[b0:b1] += self._correlate(ghat, u[a0:a1], length, n_a - 1, n_b)
        return self.weights * z

    __call__ = matvec


def hankel_matvec(op: FastHankelOperator, x: np.ndarray) -> np.ndarray:
    return op.matvec(x)


@dataclass(frozen=True)
class SpectrumResult:
    """
    Signed spectrum of a symmetric operator.

    pos holds the positive eigenvalues and neg the positive eigenvalues of the
    negated operator, both descending and both above the kernel threshold.
    """
    pos: tuple[float, ...]
    neg: tuple[float, ...]
    N: int
    solver: Solver
    residuals_pos: tuple[float, ...] = ()
    residuals_neg: tuple[float, ...] = ()
    converged_count: int = 0
    complete: bool = True
    kernel_dimension: Optional[int] = None
    norm_estimate: float = 0.0
    iterations: int = 0

    def swapped(self) -> "SpectrumResult":
        """Spectrum of the negated operator"""
        return replace(
            self,
            pos=self.neg,
            neg=self.pos,
            residuals_pos=self.residuals_neg,
            residuals_neg=self.residuals_pos,
        )

    def truncated(self, k: int) -> "SpectrumResult":
        """At most k eigenvalues per sign"""
        return replace(
            self,
            pos=self.pos[:k],
            neg=self.neg[:k],
            residuals_pos=self.residuals_pos[:k],
            residuals_neg=self.residuals_neg[:k],
        )

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "solver": self.solver.value,
            "pos": list(self.pos),
            "neg": list(self.neg),
            "residuals_pos": list(self.residuals_pos),
            "residuals_neg": list(self.residuals_neg),
            "converged_count": self.converged_count,
            "complete": self.complete,
            "kernel_dimension": self.kernel_dimension,
            "norm_estimate": self.norm_estimate,
            "iterations": self.iterations,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpectrumResult":
        return cls(
            pos=tuple(float(v) for v in data["pos"]),
            neg=tuple(float(v) for v in data["neg"]),
            N=int(data["N"]),
            solver=Solver(data["solver"]),
            residuals_pos=tuple(float(v) for v in data.get("residuals_pos", ())),
            residuals_neg=tuple(float(v) for v in data.get("residuals_neg", ())),
            converged_count=int(data.get("converged_count", 0)),
            complete=bool(data.get("complete", True)),
            kernel_dimension=data.get("kernel_dimension"),
            norm_estimate=float(data.get("norm_estimate", 0.0)),
            iterations=int(data.get("iterations", 0)),
        )


def dense_eig(M: np.ndarray, limit: Optional[int] = None) -> SpectrumResult:
    """Full spectrum of a symmetric (or Hermitian) matrix with post hoc residuals"""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ContractError(f"square matrix expected, got shape {M.shape}")
    n = M.shape[0]
    limit = config.DENSE_LIMIT if limit is None else limit
    if n > limit:
        raise CapacityError(f"dense eigensolver limited to size {limit}, got {n}")
    if n == 0:
        return SpectrumResult((), (), -1, Solver.DENSE, kernel_dimension=0)

    scale = max(float(np.max(np.abs(M))), np.finfo(float).tiny)
    asymmetry = float(np.max(np.abs(M - M.conj().T)))
    if asymmetry > 1e-12 * scale:
        raise ContractError(f"matrix is not symmetric: deviation {asymmetry:.2e} at scale {scale:.2e}")
    H = 0.5 * (M + M.conj().T)

    theta, V = eigh(H)
    residuals = np.linalg.norm(H @ V - V * theta, axis=0)
    norm_est = float(np.max(np.abs(theta)))
    threshold = config.KERNEL_RTOL * norm_est

    pos_idx = np.flatnonzero(theta > threshold)[::-1]
    neg_idx = np.flatnonzero(theta < -threshold)
    return SpectrumResult(
        pos=tuple(float(v) for v in theta[pos_idx]),
        neg=tuple(float(-v) for v in theta[neg_idx]),
        N=n - 1,
        solver=Solver.DENSE,
        residuals_pos=tuple(float(r) for r in residuals[pos_idx]),
        residuals_neg=tuple(float(r) for r in residuals[neg_idx]),
        converged_count=int(pos_idx.size + neg_idx.size),
        complete=True,
        kernel_dimension=int(n - pos_idx.size - neg_idx.size),
        norm_estimate=norm_est,
        iterations=0,
    )


@dataclass
class _Side:
    """Convergence bookkeeping for one sign of the spectrum"""
    sign: float
    order: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=int))
    prefix: int = 0
    last_count: int = -1
    done: bool = False

    def update(self, theta: np.ndarray, bounds: np.ndarray, k: int, threshold: float, tol_abs: float, final: bool):
        values = self.sign * theta
        above = np.flatnonzero(values > threshold)
        self.order = above[np.argsort(-values[above], kind="stable")]
        converged = bounds[self.order] <= tol_abs
        self.prefix = int(np.argmin(converged)) if not converged.all() else int(converged.size)
        everything = self.prefix == self.order.size
        self.done = final or self.prefix >= k or (everything and self.order.size == self.last_count)
        self.last_count = self.order.size


def lanczos_extremal(
    op: FastHankelOperator,
    k: int,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    seed: int = config.SEED,
    check_every: int = 10,
) -> SpectrumResult:
    """
    Largest positive and largest negative eigenvalues by Lanczos.

    The basis is fully reorthogonalized (two passes of classical Gram-Schmidt).
    Ritz pairs are accepted when |beta_m * s_m| <= tol * ||Gamma||_est, where
    s_m is the last component of the tridiagonal eigenvector; explicit
    residuals are recomputed for the returned pairs.
    """
    n = op.size
    if not 1 <= k <= n:
        raise ContractError(f"k must lie in 1..{n}, got {k}")
    tol = config.LANCZOS_TOL if tol is None else tol
    if max_iter is None:
        max_iter = min(max(6 * k + 60, 120), config.LANCZOS_MAX_ITER)
    max_iter = max(1, min(max_iter, n))

    rng = np.random.default_rng(seed)
    basis = np.empty((max_iter, n))
    q = rng.standard_normal(n)
    basis[0] = q / np.linalg.norm(q)

    alpha: list[float] = []
    beta: list[float] = []
    pos, neg = _Side(1.0), _Side(-1.0)
    theta = S = None
    norm_est = 0.0
    steps = 0

    for m in range(max_iter):
        w = op.matvec(basis[m])
        a = float(basis[m] @ w)
        w -= a * basis[m]
        if m > 0:
            w -= beta[m - 1] * basis[m - 1]
        for _ in range(2):
            w -= basis[: m + 1].T @ (basis[: m + 1] @ w)
        b = float(np.linalg.norm(w))
        alpha.append(a)
        beta.append(b)
        steps = m + 1

        scale = max(norm_est, abs(a), np.finfo(float).tiny)
        breakdown = b <= _BREAKDOWN * scale
        final = breakdown or steps == max_iter
        if final or steps % check_every == 0:
            if steps == 1:
                theta, S = np.array(alpha), np.ones((1, 1))
            else:
                theta, S = eigh_tridiagonal(np.array(alpha), np.array(beta[:-1]))
            norm_est = float(np.max(np.abs(theta)))
            bounds = np.abs(b * S[-1, :])
            threshold = config.KERNEL_RTOL * norm_est
            for side in (pos, neg):
                side.update(theta, bounds, k, threshold, tol * norm_est, breakdown)
            logger.debug(
                f"Lanczos step {steps}: ||Gamma|| ~ {norm_est:.3e}, "
                f"converged +{pos.prefix} / -{neg.prefix}"
            )
            if (pos.done and neg.done) or final:
                break
        basis[m + 1] = w / b

    complete = pos.done and neg.done
    if not complete:
        logger.warning(
            f"Lanczos stopped after {steps} steps with +{pos.prefix} / -{neg.prefix} "
            f"converged eigenvalues (k={k})"
        )

    results = {}
    for side in (pos, neg):
        chosen = side.order[: min(side.prefix, k)]
        vectors = basis[:steps].T @ S[:, chosen]
        values, residuals = [], []
        for column, idx in enumerate(chosen):
            v = vectors[:, column]
            residuals.append(float(np.linalg.norm(op.matvec(v) - theta[idx] * v) / np.linalg.norm(v)))
            values.append(float(side.sign * theta[idx]))
        results[side.sign] = (tuple(values), tuple(residuals))

    (pos_values, pos_res), (neg_values, neg_res) = results[1.0], results[-1.0]
    return SpectrumResult(
        pos=pos_values,
        neg=neg_values,
        N=op.N,
        solver=Solver.LANCZOS,
        residuals_pos=pos_res,
        residuals_neg=neg_res,
        converged_count=len(pos_values) + len(neg_values),
        complete=complete,
        kernel_dimension=None,
        norm_estimate=norm_est,
        iterations=steps,
    )


def compute_spectrum(
    matrix: WeightedHankelMatrix,
    k: int,
    solver: Union[Solver, str] = Solver.AUTO,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    seed: int = config.SEED,
) -> SpectrumResult:
    """Spectrum of Gamma_N by the requested solver"""
    solver = Solver(solver)
    if solver is Solver.AUTO:
        solver = Solver.DENSE if matrix.size <= config.DENSE_AUTO_SIZE else Solver.LANCZOS
    if solver is Solver.DENSE:
        if matrix.size > config.DENSE_LIMIT:
            raise CapacityError(f"dense eigensolver limited to size {config.DENSE_LIMIT}, got {matrix.size}")
        return dense_eig(matrix.dense())
    op = FastHankelOperator.from_matrix(matrix)
    return lanczos_extremal(op, min(k, matrix.size), tol, max_iter, seed)


def singular_values(res: SpectrumResult) -> np.ndarray:
    """Merged descending |eigenvalue| list"""
    values = np.array(res.pos + res.neg, dtype=float)
    return np.sort(values[values > 0])[::-1]


def schatten_norm(svals: np.ndarray, p: float) -> float:
    """(sum s_n^p)^(1/p)"""
    if p <= 0:
        raise DomainError(f"Schatten exponent must be > 0, got {p}")
    svals = np.asarray(svals, dtype=float)
    if svals.size == 0:
        return 0.0
    top = float(np.max(svals))
    if top == 0:
        return 0.0
    return top * float(np.sum((svals / top) ** p)) ** (1.0 / p)


def weak_schatten_quasinorm(svals: np.ndarray, p: float) -> float:
    """sup_n n^(1/p) s_n over a descending list"""
    if p <= 0:
        raise DomainError(f"Schatten exponent must be > 0, got {p}")
    svals = np.asarray(svals, dtype=float)
    if svals.size == 0:
        return 0.0
    n = np.arange(1, svals.size + 1, dtype=float)
    return float(np.max(n ** (1.0 / p) * svals))
