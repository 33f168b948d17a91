"""Independent eigenvalue oracles used to cross-check the solver.

Nothing here shares code with the sweep path.  The 2x2 case uses the
quadratic formula.  Small matrices go through their characteristic
polynomial and bisection.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import EigenDecomposition, PivotBlock, as_symmetric
from .errors import DimensionMismatch, DimensionTooLarge, RootIsolationFailed

MAX_CHARPOLY_N = 8
BISECTION_TOL = 1e-10
MIN_CLUSTER_WIDTH = 1e-12


class OracleMethod(str, enum.Enum):
    CLOSED_2X2 = "closed_2x2"
    CHARPOLY_BISECTION = "charpoly_bisection"
    BY_CONSTRUCTION = "by_construction"


@dataclass(frozen=True)
class OracleResult:
    eigenvalues: np.ndarray
    method: OracleMethod
    certified_tol: float

    def __post_init__(self):
        ev = np.sort(np.asarray(self.eigenvalues, dtype=np.float64))[::-1].copy()
        object.__setattr__(self, "eigenvalues", ev)
        if not self.certified_tol > 0:
            raise ValueError("certified_tol must be positive")


def eigenvalues_2x2(block: PivotBlock) -> OracleResult:
    m = 0.5 * (block.a_pp + block.a_qq)
    half = 0.5 * math.hypot(block.a_pp - block.a_qq, 2.0 * block.a_pq)
    tol = 4 * np.finfo(float).eps * max(1.0, abs(m) + half)
    return OracleResult(np.array([m + half, m - half]), OracleMethod.CLOSED_2X2, tol)


def by_construction(spectrum, certified_tol: float = 1e-12) -> OracleResult:
    """Wrap a spectrum that is known because the matrix was built from it."""
    return OracleResult(np.asarray(spectrum, dtype=np.float64), OracleMethod.BY_CONSTRUCTION, certified_tol)


def charpoly_coefficients(A) -> np.ndarray:
    """Monic characteristic polynomial coefficients, highest degree first.

    Faddeev-LeVerrier: ``M_k = A M_{k-1} + c_{n-k+1} I`` and
    ``c_{n-k} = -tr(A M_k) / k``.
    """
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0
    M = np.zeros_like(A)
    eye = np.eye(n)
    for k in range(1, n + 1):
        M = A @ M + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(A @ M) / k
    return coeffs


def _bisect(poly, lo: float, hi: float, plo: float) -> float:
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        pm = np.polyval(poly, mid)
        if pm == 0.0:
            return mid
        if (pm > 0) == (plo > 0):
            lo, plo = mid, pm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _real_roots(poly: np.ndarray, lo: float, hi: float) -> list[float]:
    """All roots of a real-rooted polynomial inside [lo, hi], ascending.

    The critical points (roots of the derivative) interlace the roots, so
    each gap between neighbouring critical points holds exactly one root,
    counted with multiplicity.  A gap without a sign change means a
    repeated root sitting on a critical point.
    """
    degree = len(poly) - 1
    if degree == 0:
        return []
    if degree == 1:
        return [-poly[1] / poly[0]]
    critical = _real_roots(np.polyder(poly), lo, hi)
    edges = [lo] + [min(max(c, lo), hi) for c in critical] + [hi]
    roots = []
    for a, b in zip(edges[:-1], edges[1:]):
        pa, pb = np.polyval(poly, a), np.polyval(poly, b)
        if b - a < MIN_CLUSTER_WIDTH:
            roots.append(0.5 * (a + b))
        elif pa == 0.0:
            roots.append(a)
        elif pb == 0.0:
            roots.append(b)
        elif (pa > 0) != (pb > 0):
            roots.append(_bisect(poly, a, b, pa))
        else:
            # touching root: take whichever end is closer to zero
            roots.append(a if abs(pa) <= abs(pb) else b)
    return roots


def eigenvalues_charpoly(A, max_n: int = MAX_CHARPOLY_N) -> OracleResult:
    """Eigenvalues of a small symmetric matrix from its characteristic polynomial.

    Roots are searched on ``[-||A||_F, ||A||_F]`` (slightly widened) and
    refined by bisection to 1e-10.
    """
    S = as_symmetric(A)
    if S.n > max_n:
        raise DimensionTooLarge(f"characteristic-polynomial oracle limited to n <= {max_n}, got {S.n}")
    fro = S.frobenius
    bound = fro * (1.0 + 1e-9) + 1e-12
    poly = charpoly_coefficients(S.entries)
    roots = _real_roots(poly, -bound, bound)
    if len(roots) != S.n or not all(math.isfinite(r) for r in roots):
        raise RootIsolationFailed(f"isolated {len(roots)} of {S.n} roots")
    tol = 1e-9 * max(1.0, fro)
    # consistency: the roots must reproduce the trace coefficient
    if abs(sum(roots) - np.trace(S.entries)) > S.n * tol:
        raise RootIsolationFailed("isolated roots do not reproduce the trace")
    return OracleResult(np.array(roots), OracleMethod.CHARPOLY_BISECTION, tol)


def residual_check(A, decomp: EigenDecomposition) -> float:
    """max_i ||A v_i - lambda_i v_i||_2 over the columns of the decomposition."""
    A = np.asarray(A, dtype=np.float64)
    V = np.asarray(decomp.eigenvectors, dtype=np.float64)
    lam = np.asarray(decomp.eigenvalues, dtype=np.float64)
    if A.shape[0] != V.shape[0] or V.shape[1] != lam.shape[0] or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(
            f"matrix {A.shape}, eigenvectors {V.shape}, eigenvalues {lam.shape}"
        )
    R = A @ V - V * lam
    return float(np.max(np.linalg.norm(R, axis=0))) if lam.size else 0.0
