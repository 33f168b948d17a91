"""Cyclic sweep driver, off-diagonal norm and convergence telemetry."""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .core import (
    EigenDecomposition,
    Method,
    PivotBlock,
    SolverConfig,
    SweepReport,
    as_symmetric,
)
from .errors import DegenerateInput, DidNotConverge, InsufficientHistory, NonSquare
from .rotation import apply_right, givens_schur, identity_rotation, rotate_two_sided, sqrt_rotation

log = logging.getLogger(__name__)

RECONCILE_TOL = 1e-10
# a pivot is negligible once |a_pq| <= NEGLIGIBLE_FACTOR * eps * min(|a_pp|, |a_qq|)
NEGLIGIBLE_FACTOR = 100.0
_EPS = float(np.finfo(np.float64).eps)

# called once per pivot visit: (p, q, a_pq before the rotation, rotation, working matrix)
RotationObserver = Callable[[int, int, float, object, np.ndarray], None]


def off_norm(M) -> float:
    """Psi(M): Frobenius norm of the off-diagonal part, both triangles summed."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NonSquare("off_norm is only defined for square matrices")
    n = M.shape[0]
    if n < 2:
        return 0.0
    mask = ~np.eye(n, dtype=bool)
    off = M[mask]
    scale = float(np.max(np.abs(off)))
    if scale == 0.0 or not math.isfinite(scale):
        return scale
    # scaled to keep squares clear of overflow/underflow
    return scale * math.sqrt(float(np.sum(np.square(off / scale))))


def negligible_pivot(M: np.ndarray, p: int, q: int) -> bool:
    """True when a nonzero a_pq is at rounding level relative to both a_pp and a_qq."""
    a = abs(M[p, q])
    return a != 0.0 and a <= NEGLIGIBLE_FACTOR * _EPS * min(abs(M[p, p]), abs(M[q, q]))


def pivot_rotation(M: np.ndarray, p: int, q: int, method: Method):
    block = PivotBlock.from_matrix(M, p, q)
    if method is Method.GIVENS:
        return givens_schur(block)
    return sqrt_rotation(block)


def cyclic_sweep(
    M: np.ndarray,
    V: Optional[np.ndarray],
    method: Method = Method.SQRT,
    observer: Optional[RotationObserver] = None,
) -> int:
    """One row-major pass over all pivots (p < q), updating M and V in place.

    Zero pivots get the identity rotation and are not counted.  Negligible
    pivots (see :func:`negligible_pivot`) are set to zero instead of rotated.
    Without this, rounding-level pivots of random sign trigger near-swap
    rotations that can cycle forever.  Returns the number of rotations
    actually applied.
    """
    method = Method(method)
    n = M.shape[0]
    applied = 0
    for p in range(n - 1):
        for q in range(p + 1, n):
            a_pq = float(M[p, q])
            if negligible_pivot(M, p, q):
                M[p, q] = M[q, p] = 0.0
                rot = identity_rotation()
            else:
                rot = pivot_rotation(M, p, q, method)
            if not rot.is_identity:
                rotate_two_sided(M, rot, p, q)
                # the row and column passes round the pivot pair differently;
                # mirroring keeps the working matrix exactly symmetric
                M[q, p] = M[p, q]
                if V is not None:
                    apply_right(V, rot, 0, None, p, q)
                applied += 1
            if observer is not None:
                observer(p, q, a_pq, rot, M)
    return applied


@dataclass
class ConvergenceEstimate:
    """Observed pairs (Psi(A^(k)), Psi(A^(k+N))) against the quadratic bound.

    The bound is ``Psi(A^(k+N)) <= Psi(A^(k))**2 / (gap_delta * sqrt(2))`` with
    ``N = n(n-1)/2``.  ``onset`` is the first k from which every later
    observation satisfies it; None if the last one is violated.
    """

    gap_delta: float
    N: int
    pairs: list[tuple[float, float]] = field(default_factory=list)
    bound_satisfied: list[bool] = field(default_factory=list)
    onset: Optional[int] = None

    @property
    def bound_constant(self) -> float:
        return 1.0 / (self.gap_delta * math.sqrt(2.0))

    @property
    def violations(self) -> list[int]:
        return [k for k, ok in enumerate(self.bound_satisfied) if not ok]

    def holds_below(self, threshold: float) -> bool:
        """True when every observation with Psi(A^(k)) < threshold satisfies the bound."""
        return all(ok for (before, _), ok in zip(self.pairs, self.bound_satisfied) if before < threshold)

    def violations_below(self, threshold: float) -> list[int]:
        return [
            k
            for k, ((before, _), ok) in enumerate(zip(self.pairs, self.bound_satisfied))
            if before < threshold and not ok
        ]

    def to_dict(self) -> dict:
        return {
            "gap_delta": self.gap_delta,
            "N": self.N,
            "observations": len(self.pairs),
            "violations": len(self.violations),
            "onset": self.onset,
            "onset_psi": self.pairs[self.onset][0] if self.onset is not None and self.pairs else None,
            "holds_below_threshold": self.holds_below(self.gap_delta / (2.0 * math.sqrt(2.0))),
        }


def check_quadratic_estimate(history, n: int, gap_delta: float) -> ConvergenceEstimate:
    """Compare a per-rotation Psi history against the quadratic convergence bound."""
    if not gap_delta > 0:
        raise ValueError(f"gap_delta must be positive, got {gap_delta}")
    N = n * (n - 1) // 2
    h = [float(v) for v in history]
    if N == 0 or len(h) < N + 1:
        raise InsufficientHistory(f"need at least {N + 1} samples for n={n}, got {len(h)}")
    est = ConvergenceEstimate(gap_delta=gap_delta, N=N)
    const = est.bound_constant
    for k in range(len(h) - N):
        before, after = h[k], h[k + N]
        est.pairs.append((before, after))
        est.bound_satisfied.append(after <= const * before * before)
    onset = len(est.bound_satisfied)
    while onset > 0 and est.bound_satisfied[onset - 1]:
        onset -= 1
    est.onset = onset if onset < len(est.bound_satisfied) else None
    return est


def min_gap(eigenvalues, floor: float = 0.0) -> float:
    """Smallest separation between eigenvalues that differ by more than ``floor``."""
    ev = np.sort(np.asarray(eigenvalues, dtype=np.float64))
    gaps = np.diff(ev)
    gaps = gaps[gaps > floor]
    return float(gaps.min()) if gaps.size else 0.0


class SolveResult(NamedTuple):
    decomposition: EigenDecomposition
    report: SweepReport
    estimate: Optional[ConvergenceEstimate]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.decomposition.eigenvalues

    @property
    def converged(self) -> bool:
        return self.report.converged


def solve(
    A,
    config: Optional[SolverConfig] = None,
    *,
    gap_delta: Optional[float] = None,
    analyze: bool = False,
    record_rotations: bool = True,
    observer: Optional[RotationObserver] = None,
    check: bool = True,
) -> SolveResult:
    """Diagonalize a symmetric matrix by cyclic sweeps.

    Sweeps until ``Psi(D) <= tol * ||A||_F`` or ``max_sweeps`` is spent.
    Eigenvalues come back in descending order, with eigenvector columns
    permuted to match.  With ``record_rotations`` the exact Psi is stored
    after every pivot visit.  A quadratic-estimate report is attached when
    ``gap_delta`` is given.  With ``analyze``, the gap is taken from the
    computed spectrum instead.

    Raises :class:`DidNotConverge` carrying the partial result unless
    ``check`` is False.
    """
    config = config or SolverConfig()
    if getattr(A, "size", None) == 0 or (isinstance(A, (list, tuple)) and len(A) == 0):
        raise DegenerateInput("cannot solve an empty matrix")
    A = as_symmetric(A)
    if config.shift_delta != 0.5:
        raise NotImplementedError("only shift_delta = 1/2 is implemented")

    start = time.perf_counter()
    n = A.n
    D = A.copy()
    V = np.eye(n)
    threshold = config.tol * A.frobenius
    psi = off_norm(D)
    history = [psi]
    sweep_psi = [psi]
    drop = [0.0]

    def track(p, q, a_pq, rot, M):
        drop[0] += 2.0 * a_pq * a_pq
        if record_rotations:
            history.append(off_norm(M))
        if observer is not None:
            observer(p, q, a_pq, rot, M)

    sweeps = 0
    rotations = 0
    worst_reconcile = 0.0
    while psi > threshold and sweeps < config.max_sweeps:
        sweeps += 1
        start_sq = psi * psi
        drop[0] = 0.0
        rotations += cyclic_sweep(D, V, config.method, track)
        psi = off_norm(D)
        # Psi'^2 = Psi^2 - 2 a_pq^2 per rotation; compare against the recomputed norm
        mismatch = abs(psi * psi - (start_sq - drop[0])) / start_sq
        worst_reconcile = max(worst_reconcile, mismatch)
        if mismatch > RECONCILE_TOL:
            log.warning("sweep %d: tracked and recomputed Psi differ by %.2e (relative)", sweeps, mismatch)
        sweep_psi.append(psi)
    converged = psi <= threshold

    diag = np.diag(D).copy()
    order = np.argsort(-diag, kind="stable")
    decomposition = EigenDecomposition(diag[order], V[:, order])
    report = SweepReport(
        sweep=sweeps,
        psi=psi,
        rotations_applied=rotations,
        psi_history=history if record_rotations else list(sweep_psi),
        sweep_psi=sweep_psi,
        converged=converged,
        threshold=threshold,
        wall_time_ms=(time.perf_counter() - start) * 1e3,
        max_reconcile_error=worst_reconcile,
    )

    estimate = None
    if gap_delta is None and analyze:
        gap_delta = min_gap(decomposition.eigenvalues, floor=10.0 * threshold) or None
    if gap_delta is not None and record_rotations:
        try:
            estimate = check_quadratic_estimate(history, n, gap_delta)
        except InsufficientHistory:
            estimate = None

    result = SolveResult(decomposition, report, estimate)
    if check and not converged:
        raise DidNotConverge(
            f"Psi = {psi:.3e} above {threshold:.3e} after {sweeps} sweeps", result
        )
    return result
