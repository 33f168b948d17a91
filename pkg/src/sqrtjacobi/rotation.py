"""2x2 pivot mathematics for the square-root rotation and the Givens baseline.

Conventions
-----------
Every rotation here is a pair ``(c, s)`` applied through :func:`apply_left`
and :func:`apply_right`::

    rows    (p, q) <- [[c, s], [-s, c]] @ rows (p, q)
    columns (p, q) <- columns (p, q) @ [[c, -s], [s, c]]

so one two-sided step is ``M <- R M R^T`` with ``R = [[c, s], [-s, c]]`` and
the new pivot entry is ``c*s*(a_qq - a_pp) + (c**2 - s**2)*a_pq``.

The square-root rotation writes ``c = sqrt(x + 1/2)`` and ``s = sqrt(1/2 - x)``
for ``x`` in ``[-1/2, 1/2]``; then ``c*s = sqrt(1/4 - x**2)`` and
``c**2 - s**2 = 2x``.  This turns the pivot entry into the annihilation function
:func:`annihilation_residual`.  Because ``c, s >= 0`` the angle
``atan2(s, c)`` is confined to ``[0, pi/2]``.  The Givens rotation instead
keeps it inside ``[-pi/4, pi/4]``.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import PivotBlock
from .errors import (
    DegenerateBlockWarning,
    IndexOutOfRange,
    ParameterOutOfRange,
    ZeroOffDiagonal,
)

PARAM_SLACK = 1e-12


@dataclass(frozen=True)
class RotationParams:
    """Square-root rotation: ``c = sqrt(x + 1/2)``, ``s = sqrt(1/2 - x)``."""

    x: float
    c: float
    s: float

    @property
    def theta(self) -> float:
        return math.atan2(self.s, self.c)

    @property
    def is_identity(self) -> bool:
        return self.c == 1.0 and self.s == 0.0


class GivensRotation(NamedTuple):
    c: float
    s: float

    @property
    def theta(self) -> float:
        return math.atan2(self.s, self.c)

    @property
    def is_identity(self) -> bool:
        return self.c == 1.0 and self.s == 0.0


class RootInterval(enum.Enum):
    NEGATIVE_HALF = "negative_half"  # x0 in ]-1/2, 0[
    ZERO = "zero"  # a_pp == a_qq, x0 == 0
    POSITIVE_HALF = "positive_half"  # x0 in ]0, 1/2[
    BOUNDARY = "boundary"  # a_pq == 0, identity rotation


@dataclass(frozen=True)
class PredictedPair:
    """Diagonal values produced at (p, p) and (q, q) by the annihilating rotation."""

    lambda_star: float
    lambda_dstar: float
    degenerate: bool = False

    def as_sorted(self) -> tuple[float, float]:
        return tuple(sorted((self.lambda_star, self.lambda_dstar), reverse=True))


def _clamp(v: float, lo: float, hi: float) -> float:
    return min(max(v, lo), hi)


def annihilation_residual(block: PivotBlock, x: float) -> float:
    """f(x) = (a_qq - a_pp) sqrt(1/4 - x^2) + 2 a_pq x, the pivot after rotating by x.

    ``1/4 - x^2`` is formed as ``(1/2 - x)(1/2 + x)`` to avoid squaring x.
    Near ``x = +-1/2`` f is steep (f' ~ 1/sqrt(1/4 - x^2)), so rounding x
    itself bounds how small f can get.
    """
    root = math.sqrt(max((0.5 - x) * (0.5 + x), 0.0))
    return (block.a_qq - block.a_pp) * root + 2.0 * block.a_pq * x


def solve_pivot_parameter(block: PivotBlock) -> float:
    """Root x0 in [-1/2, 1/2] of the annihilation equation.

    With ``S = sqrt((a_qq - a_pp)^2 + 4 a_pq^2)``, the root is
    ``(a_pp - a_qq) / (2S)`` for ``a_pq > 0`` and ``(a_qq - a_pp) / (2S)`` for
    ``a_pq < 0``.
    """
    if block.a_pq == 0.0:
        raise ZeroOffDiagonal(f"a_pq is zero at pivot ({block.p}, {block.q})")
    diff = block.a_pp - block.a_qq
    S = math.hypot(diff, 2.0 * block.a_pq)
    if block.a_pq > 0:
        x0 = diff / (2.0 * S)
    else:
        x0 = -diff / (2.0 * S)
    return _clamp(x0, -0.5, 0.5)


def rotation_from_parameter(x: float) -> RotationParams:
    """Literal square-root rotation ``(sqrt(x + 1/2), sqrt(1/2 - x))``.

    When ``x`` is within about 1e-16 of +-1/2 the smaller of c and s is
    lost to cancellation.  Use :func:`sqrt_rotation` to build the
    rotation for a pivot.
    """
    if not -0.5 - PARAM_SLACK <= x <= 0.5 + PARAM_SLACK:
        raise ParameterOutOfRange(f"x = {x!r} outside [-1/2, 1/2]")
    x = _clamp(x, -0.5, 0.5)
    return RotationParams(x, math.sqrt(max(x + 0.5, 0.0)), math.sqrt(max(0.5 - x, 0.0)))


def identity_rotation() -> RotationParams:
    return RotationParams(0.5, 1.0, 0.0)


def sqrt_rotation(block: PivotBlock, literal: bool = False) -> RotationParams:
    """Square-root rotation that annihilates ``block.a_pq``.

    ``x0`` comes from :func:`solve_pivot_parameter`.  By default ``x0 + 1/2``
    and ``1/2 - x0`` are formed without subtraction:

        (S + |d|) / (2S)   and   2 a_pq^2 / (S (S + |d|)),   d = a_pp - a_qq

    The larger one goes to c when ``sign(a_pq) * d >= 0``, otherwise to s.
    These equal the literal expressions in exact arithmetic.
    ``literal=True`` evaluates ``sqrt(x0 + 1/2)`` and ``sqrt(1/2 - x0)``
    directly instead.  The smaller factor can then round to zero, and the
    rotation degenerates into a plain row/column swap.
    """
    if block.a_pq == 0.0:
        return identity_rotation()
    x0 = solve_pivot_parameter(block)
    if literal:
        return rotation_from_parameter(x0)
    d = block.a_pp - block.a_qq
    S = math.hypot(d, 2.0 * block.a_pq)
    big = (S + abs(d)) / (2.0 * S)
    # a_pq / S and a_pq / (S + |d|) separately keep the product in range
    small = 2.0 * (block.a_pq / S) * (block.a_pq / (S + abs(d)))
    c2, s2 = (big, small) if math.copysign(1.0, block.a_pq) * d >= 0 else (small, big)
    return RotationParams(x0, math.sqrt(c2), math.sqrt(s2))


def classify_root_interval(block: PivotBlock) -> RootInterval:
    """Which half of [-1/2, 1/2] holds x0, from the signs of a_pq and a_qq - a_pp."""
    if block.a_pq == 0.0:
        return RootInterval.BOUNDARY
    gap = block.a_qq - block.a_pp
    if gap == 0.0:
        return RootInterval.ZERO
    if (block.a_pq > 0) == (gap > 0):
        return RootInterval.NEGATIVE_HALF
    return RootInterval.POSITIVE_HALF


def predicted_eigenvalues(block: PivotBlock) -> PredictedPair:
    """lambda* and lambda** from substituting x0 into the diagonal update.

    ``m +- S/2`` with ``m = (a_pp + a_qq)/2``.  For ``a_pq > 0`` the larger
    value lands at (p, p); for ``a_pq < 0`` at (q, q).  A zero pivot with
    equal diagonal entries is flagged with a :class:`DegenerateBlockWarning`.
    """
    m = 0.5 * (block.a_pp + block.a_qq)
    half = 0.5 * math.hypot(block.a_qq - block.a_pp, 2.0 * block.a_pq)
    if block.a_pq == 0.0:
        degenerate = block.a_pp == block.a_qq
        if degenerate:
            warnings.warn(
                f"degenerate block at ({block.p}, {block.q}): a_pq = 0 and a_pp = a_qq",
                DegenerateBlockWarning,
                stacklevel=2,
            )
        # identity rotation leaves the diagonal where it is
        return PredictedPair(block.a_pp, block.a_qq, degenerate)
    if block.a_pq > 0:
        return PredictedPair(m + half, m - half)
    return PredictedPair(m - half, m + half)


def givens_schur(block: PivotBlock) -> GivensRotation:
    """Classical Jacobi rotation with angle in [-pi/4, pi/4].

    Uses ``tau = (a_pp - a_qq) / (2 a_pq)`` and the smaller root
    ``t = sign(tau) / (|tau| + sqrt(1 + tau^2))``.  The sign of tau matches
    the ``R M R^T`` convention of :func:`apply_left` / :func:`apply_right`.
    """
    if block.a_pq == 0.0:
        return GivensRotation(1.0, 0.0)
    tau = (block.a_pp - block.a_qq) / (2.0 * block.a_pq)
    if abs(tau) > 1e150:
        t = 0.5 / tau
    else:
        t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return GivensRotation(c, t * c)


def _check_indices(M: np.ndarray, i: int, k: int, j1: int, j2: int) -> None:
    n_rows, n_cols = M.shape
    if not 0 <= i < k < n_rows:
        raise IndexOutOfRange(f"rotation indices ({i}, {k}) invalid for {n_rows} rows")
    if not 0 <= j1 <= j2 <= n_cols:
        raise IndexOutOfRange(f"range [{j1}, {j2}) invalid for {n_cols} columns")


def apply_left(M: np.ndarray, rot, i: int, k: int, j1: int = 0, j2: int | None = None) -> np.ndarray:
    """Rotate rows i and k over columns ``j1:j2`` in place and return M.

    Both new rows are computed from saved copies of the old rows.
    """
    if j2 is None:
        j2 = M.shape[1]
    _check_indices(M, i, k, j1, j2)
    c, s = rot.c, rot.s
    t1 = M[i, j1:j2].copy()
    t2 = M[k, j1:j2].copy()
    M[i, j1:j2] = c * t1 + s * t2
    M[k, j1:j2] = -s * t1 + c * t2
    return M


def apply_right(M: np.ndarray, rot, j1: int, j2: int | None, i: int, k: int) -> np.ndarray:
    """Column mirror of :func:`apply_left`: rotate columns i and k over rows ``j1:j2``."""
    if j2 is None:
        j2 = M.shape[0]
    _check_indices(M.T, i, k, j1, j2)
    c, s = rot.c, rot.s
    t1 = M[j1:j2, i].copy()
    t2 = M[j1:j2, k].copy()
    M[j1:j2, i] = c * t1 + s * t2
    M[j1:j2, k] = -s * t1 + c * t2
    return M


def rotate_two_sided(M: np.ndarray, rot, p: int, q: int) -> np.ndarray:
    """``M <- R M R^T`` over the full index range (rows first, then columns)."""
    apply_left(M, rot, p, q)
    apply_right(M, rot, 0, None, p, q)
    return M
