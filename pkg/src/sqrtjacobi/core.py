"""Validated matrix and configuration types."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import AsymmetryExceeded, NonFinite, NonSquare

SYM_TOL = 1e-12
DEFAULT_TOL = 1e-12
DEFAULT_MAX_SWEEPS = 50


class Method(str, enum.Enum):
    SQRT = "sqrt"
    GIVENS = "givens"


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense float64 symmetric matrix with a read-only backing array."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NonSquare(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise NonSquare("matrix must have at least one row")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def frobenius(self) -> float:
        return float(np.linalg.norm(self.entries))

    def copy(self) -> np.ndarray:
        """Writable copy of the entries."""
        return self.entries.copy()

    def __eq__(self, other):
        if not isinstance(other, SymmetricMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and np.array_equal(
            self.entries, other.entries
        )

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True)
class PivotBlock:
    """The 2x2 symmetric block at rows/columns (p, q), 0-based with p < q."""

    a_pp: float
    a_pq: float
    a_qq: float
    p: int = 0
    q: int = 1

    def __post_init__(self):
        if not 0 <= self.p < self.q:
            raise ValueError(f"pivot indices must satisfy 0 <= p < q, got ({self.p}, {self.q})")

    @classmethod
    def from_matrix(cls, m, p: int, q: int) -> PivotBlock:
        m = np.asarray(m)
        return cls(float(m[p, p]), float(m[p, q]), float(m[q, q]), p, q)

    @property
    def scale(self) -> float:
        return abs(self.a_pp) + abs(self.a_qq) + 2.0 * abs(self.a_pq)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a_pp, self.a_pq], [self.a_pq, self.a_qq]])


@dataclass(frozen=True)
class SolverConfig:
    tol: float = DEFAULT_TOL
    max_sweeps: int = DEFAULT_MAX_SWEEPS
    method: Method = Method.SQRT
    shift_delta: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        # 0 is allowed: it runs no sweep and only reports whether A is already diagonal
        if int(self.max_sweeps) != self.max_sweeps or self.max_sweeps < 0:
            raise ValueError(f"max_sweeps must be a non-negative integer, got {self.max_sweeps}")
        if not 0.0 < self.shift_delta < 1.0:
            raise ValueError(f"shift_delta must lie in (0, 1), got {self.shift_delta}")


@dataclass
class SweepReport:
    """Convergence telemetry of one solve.

    ``psi_history`` holds the off-diagonal norm before the first rotation
    and after every pivot visit, so entry ``k`` is Psi(A^(k)).  Identity
    pivots still produce an entry; this keeps exactly n(n-1)/2 entries per
    sweep.  ``sweep_psi`` holds the recomputed norm at each sweep boundary,
    starting with the input.
    """

    sweep: int
    psi: float
    rotations_applied: int
    psi_history: list[float] = field(default_factory=list)
    sweep_psi: list[float] = field(default_factory=list)
    converged: bool = False
    threshold: float = 0.0
    wall_time_ms: float = 0.0
    max_reconcile_error: float = 0.0


@dataclass
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


def validate_symmetric(raw, sym_tol: float = SYM_TOL) -> SymmetricMatrix:
    """Check that ``raw`` is square, finite and symmetric up to ``sym_tol``.

    The drift allowed is ``sym_tol * max(1, ||raw||_F)``.  Accepted input is
    symmetrized by averaging mirror entries.
    """
    if not sym_tol > 0:
        raise ValueError("sym_tol must be positive")
    if isinstance(raw, SymmetricMatrix):
        raw = raw.entries
    a = np.array(raw, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise NonSquare("matrix must have at least one row")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix contains NaN or infinite entries")
    drift = np.abs(a - a.T)
    limit = sym_tol * max(1.0, float(np.linalg.norm(a)))
    worst = float(drift.max())
    if worst > limit:
        i, j = np.unravel_index(int(np.argmax(drift)), drift.shape)
        raise AsymmetryExceeded(
            f"|a[{i},{j}] - a[{j},{i}]| = {worst:.3e} exceeds {limit:.3e}"
        )
    # exact mirror pairs are kept bit-for-bit
    return SymmetricMatrix(np.where(a == a.T, a, 0.5 * a + 0.5 * a.T))


def as_symmetric(a, sym_tol: float = SYM_TOL) -> SymmetricMatrix:
    if isinstance(a, SymmetricMatrix):
        return a
    return validate_symmetric(a, sym_tol)
