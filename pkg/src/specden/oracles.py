"""Matrix-vector oracles: the approximate-multiplication contract and test doubles.

An oracle promises ``||z - A y|| <= error_bound * ||A|| * ||y||`` per call.
Exact oracles have ``error_bound = 0``; the noise-injecting wrapper realizes a
worst-case-style oracle with an exactly controlled error radius, which is what
the recurrence stability tests need. Moment estimators are written once
against :class:`MatvecOracle` and run unchanged on exact, noisy, and sampled
graph oracles.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.io
import scipy.sparse


@dataclass
class SymmetricMatrix:
    """Real symmetric matrix, dense or sparse, symmetric by construction.

    Only one triangle is taken from the input; the other is mirrored, so the
    stored operator is exactly symmetric regardless of how the source data was
    produced.
    """

    dense: Optional[np.ndarray] = None
    sparse: Optional[scipy.sparse.csr_matrix] = None
    norm_bound: Optional[float] = None  # declared bound on the spectral norm

    def __post_init__(self):
        if (self.dense is None) == (self.sparse is None):
            raise ValueError("exactly one of dense/sparse must be given")

    @classmethod
    def from_dense(cls, arr, norm_bound=None) -> "SymmetricMatrix":
        arr = np.asarray(arr, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"need a square matrix, got shape {arr.shape}")
        lower = np.tril(arr)
        sym = lower + np.tril(arr, -1).T
        return cls(dense=sym, norm_bound=norm_bound)

    @classmethod
    def from_coo(cls, rows, cols, vals, n, norm_bound=None) -> "SymmetricMatrix":
        """Build from coordinate data; only the lower triangle of the input is used."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=float)
        keep = rows >= cols
        r, c, v = rows[keep], cols[keep], vals[keep]
        off = r != c
        rr = np.concatenate([r, c[off]])
        cc = np.concatenate([c, r[off]])
        vv = np.concatenate([v, v[off]])
        mat = scipy.sparse.csr_matrix((vv, (rr, cc)), shape=(n, n))
        mat.sum_duplicates()
        return cls(sparse=mat, norm_bound=norm_bound)

    @property
    def dimension(self) -> int:
        return self.dense.shape[0] if self.dense is not None else self.sparse.shape[0]

    def matvec(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if y.shape[0] != self.dimension:
            raise ValueError(f"dimension mismatch: matrix is {self.dimension}, vector is {y.shape[0]}")
        if self.dense is not None:
            return self.dense @ y
        return self.sparse @ y

    def to_dense(self) -> np.ndarray:
        return self.dense if self.dense is not None else self.sparse.toarray()

    def scaled(self, factor: float) -> "SymmetricMatrix":
        if self.dense is not None:
            return SymmetricMatrix(dense=self.dense * factor, norm_bound=1.0)
        return SymmetricMatrix(sparse=self.sparse * factor, norm_bound=1.0)


@dataclass
class MatvecOracle:
    """The matrix-vector oracle contract used by every moment estimator.

    ``apply`` maps an n-vector to an n-vector; ``error_bound`` is the declared
    per-call accuracy (0 for exact oracles, a worst-case radius for the noisy
    wrapper, an RMS level for sampled graph oracles). The call counter is
    thread-safe so budget accounting stays exact under concurrent use.
    """

    dimension: int
    apply_fn: Callable[[np.ndarray], np.ndarray]
    error_bound: float = 0.0
    cost_model: str = "unspecified"
    matrix: Optional[SymmetricMatrix] = None  # set when A is materialized
    calls: int = 0
    stats: dict = field(default_factory=dict)  # implementation-specific accounting
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def apply(self, y: np.ndarray) -> np.ndarray:
        with self._lock:
            self.calls += 1
        return self.apply_fn(y)

    def apply_block(self, block: np.ndarray) -> np.ndarray:
        """Apply to each column of ``block``; counts one call per column.

        Only exact materialized oracles take the fast matmul path; everything
        else loops, so per-call noise or sampling behaviour is unchanged.
        """
        cols = block.shape[1]
        if self.matrix is not None and self.error_bound == 0.0:
            with self._lock:
                self.calls += cols
            if self.matrix.dense is not None:
                return self.matrix.dense @ block
            return self.matrix.sparse @ block
        return np.column_stack([self.apply(block[:, j]) for j in range(cols)])

    def reset_counter(self):
        with self._lock:
            self.calls = 0


def exact_apply(matrix: SymmetricMatrix, y: np.ndarray) -> np.ndarray:
    """z = A y up to floating-point rounding."""
    return matrix.matvec(y)


def exact_oracle(matrix: SymmetricMatrix) -> MatvecOracle:
    return MatvecOracle(
        dimension=matrix.dimension,
        apply_fn=matrix.matvec,
        error_bound=0.0,
        cost_model="dense O(n^2)" if matrix.dense is not None else "sparse O(nnz)",
        matrix=matrix,
    )


NOISE_MODES = ("random-direction", "adversarial-sign")


def _noise_vector(y: np.ndarray, eps_mv: float, mode: str, rng: np.random.Generator) -> np.ndarray:
    radius = eps_mv * float(np.linalg.norm(y))
    if radius == 0.0:
        return np.zeros_like(y)
    if mode == "random-direction":
        direction = rng.standard_normal(y.shape[0])
        norm = np.linalg.norm(direction)
        while norm == 0.0:
            direction = rng.standard_normal(y.shape[0])
            norm = np.linalg.norm(direction)
        return (radius / norm) * direction
    if mode == "adversarial-sign":
        direction = np.sign(y)
        norm = np.linalg.norm(direction)
        if norm == 0.0:
            return np.zeros_like(y)
        return (radius / norm) * direction
    raise ValueError(f"unknown noise mode {mode!r}; expected one of {NOISE_MODES}")


def noisy_apply(matrix: SymmetricMatrix, y, eps_mv: float, mode: str, seed) -> np.ndarray:
    """A y plus an error of norm exactly ``eps_mv * ||y||``.

    Assuming the declared ``||A|| <= 1`` this meets the oracle contract with
    equality, which makes the error bound of the noisy oracle directly
    testable. Deterministic in (y-independent) ``seed``.
    """
    if not 0.0 <= eps_mv < 1.0:
        raise ValueError(f"eps_mv must be in [0, 1), got {eps_mv}")
    y = np.asarray(y, dtype=float)
    z = matrix.matvec(y)
    if eps_mv == 0.0:
        return z
    return z + _noise_vector(y, eps_mv, mode, np.random.default_rng(seed))


def noisy_oracle(matrix: SymmetricMatrix, eps_mv: float, mode: str, seed) -> MatvecOracle:
    """Noise-injecting oracle; per-call seeds derive from (seed, call index).

    The index is assigned at call arrival, so any serial schedule reproduces
    the same noise sequence.
    """
    if not 0.0 <= eps_mv < 1.0:
        raise ValueError(f"eps_mv must be in [0, 1), got {eps_mv}")
    if mode not in NOISE_MODES:
        raise ValueError(f"unknown noise mode {mode!r}; expected one of {NOISE_MODES}")
    counter = {"i": 0}
    lock = threading.Lock()

    def apply_fn(y):
        with lock:
            idx = counter["i"]
            counter["i"] += 1
        return noisy_apply(matrix, y, eps_mv, mode, (seed, idx))

    return MatvecOracle(
        dimension=matrix.dimension,
        apply_fn=apply_fn,
        error_bound=eps_mv,
        cost_model="exact matvec + O(n) noise",
        matrix=matrix,
    )


def estimate_spectral_norm(matrix: SymmetricMatrix, iterations: int = 50, seed=0) -> float:
    """Power-iteration lower estimate of the spectral norm.

    Returns ``||A v_k||`` for the normalized final iterate, which never exceeds
    the true norm. A zero matrix returns 0.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(matrix.dimension)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(iterations):
        av = matrix.matvec(v)
        norm = float(np.linalg.norm(av))
        if norm == 0.0:
            return 0.0
        estimate = norm
        v = av / norm
    return estimate


def scale_to_unit_norm(matrix: SymmetricMatrix, margin: float = 0.05,
                       iterations: int = 100, seed=0) -> tuple[SymmetricMatrix, float]:
    """Rescale so the declared spectral norm bound 1 holds with a safety margin.

    Returns (scaled matrix, applied factor). A zero matrix is returned
    unchanged with factor 1. Never applied silently: callers surface the
    factor in their run records.
    """
    nu = estimate_spectral_norm(matrix, iterations=iterations, seed=seed)
    if nu == 0.0:
        return matrix, 1.0
    factor = 1.0 / (nu * (1.0 + margin))
    return matrix.scaled(factor), factor


def load_matrix_market(path) -> SymmetricMatrix:
    """Read a Matrix Market file into a sparse symmetric matrix.

    The reader expands symmetric storage itself; symmetry of the result is
    enforced by re-mirroring the lower triangle.
    """
    mat = scipy.io.mmread(path)
    mat = scipy.sparse.coo_matrix(mat)
    if mat.shape[0] != mat.shape[1]:
        raise ValueError(f"matrix in {path} is not square: {mat.shape}")
    return SymmetricMatrix.from_coo(mat.row, mat.col, mat.data, mat.shape[0])


def load_dense_text(path) -> SymmetricMatrix:
    """Read a dense matrix from whitespace-separated text, one row per line."""
    arr = np.loadtxt(path, dtype=float, ndmin=2)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"matrix in {path} is not square: {arr.shape}")
    return SymmetricMatrix.from_dense(arr)
