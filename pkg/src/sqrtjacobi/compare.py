"""Side-by-side runs of the square-root and Givens rotations.

A zeroing rotation ``(cos phi, sin phi)`` is unique modulo pi/2.  Givens
picks phi = theta in [-pi/4, pi/4], and the square-root rotation picks phi in
[0, pi/2].  When theta >= 0 both choose the same angle and
``x = cos(2 theta) / 2``.  When theta < 0 the square-root rotation uses
theta + pi/2, so ``x = -cos(2 theta) / 2``.  Such pivots are counted as
quadrant mismatches.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import Method, PivotBlock, SolverConfig, as_symmetric
from .errors import DidNotConverge
from .rotation import givens_schur, rotate_two_sided, sqrt_rotation
from .solver import SolveResult, solve

AGREEMENT_TOL = 1e-9
MAP_TOL = 1e-12


@dataclass(frozen=True)
class PivotComparison:
    p: int
    q: int
    x: float
    theta: float
    mapped_x: float  # cos(2 theta) / 2
    quadrant_match: bool

    @property
    def map_error(self) -> float:
        """|x - cos(2 theta)/2|, or |x + cos(2 theta)/2| for a mismatched quadrant."""
        if self.quadrant_match:
            return abs(self.x - self.mapped_x)
        return abs(self.x + self.mapped_x)


@dataclass
class Comparison:
    results: dict
    pivots: list = field(default_factory=list)
    eigenvalue_gap: float = math.inf
    scale: float = 0.0

    @property
    def agree(self) -> bool:
        return self.eigenvalue_gap <= AGREEMENT_TOL * self.scale

    @property
    def mismatched(self) -> int:
        return sum(not pc.quadrant_match for pc in self.pivots)

    @property
    def max_map_error(self) -> float:
        errs = [pc.map_error for pc in self.pivots if pc.quadrant_match]
        return max(errs, default=0.0)


def first_sweep_pivots(A) -> list[PivotComparison]:
    """Follow one square-root sweep and pair each pivot with the Givens angle for the same block."""
    D = as_symmetric(A).copy()
    n = D.shape[0]
    log = []
    for p in range(n - 1):
        for q in range(p + 1, n):
            block = PivotBlock.from_matrix(D, p, q)
            rot = sqrt_rotation(block)
            g = givens_schur(block)
            theta = g.theta
            log.append(PivotComparison(p, q, rot.x, theta, 0.5 * math.cos(2.0 * theta), theta >= 0.0))
            if not rot.is_identity:
                rotate_two_sided(D, rot, p, q)
    return log


def compare_methods(A, tol: float = 1e-12, max_sweeps: int = 50) -> Comparison:
    """Solve with both rotations and measure how far their spectra are apart.

    Runs that miss the sweep budget are kept; check ``converged`` on each.
    """
    A = as_symmetric(A)
    results: dict[Method, SolveResult] = {}
    for method in (Method.SQRT, Method.GIVENS):
        cfg = SolverConfig(tol=tol, max_sweeps=max_sweeps, method=method)
        try:
            results[method] = solve(A, cfg, record_rotations=False)
        except DidNotConverge as exc:
            results[method] = exc.result
    ev_sqrt = np.sort(results[Method.SQRT].eigenvalues)
    ev_giv = np.sort(results[Method.GIVENS].eigenvalues)
    return Comparison(
        results=results,
        pivots=first_sweep_pivots(A),
        eigenvalue_gap=float(np.max(np.abs(ev_sqrt - ev_giv))),
        scale=A.frobenius,
    )


def format_comparison(cmp: Comparison, pivot_limit: Optional[int] = None) -> str:
    lines = [f"{'method':<8} {'sweeps':>6} {'rotations':>9} {'final psi':>12} {'converged':>9}"]
    for method, res in cmp.results.items():
        rep = res.report
        lines.append(
            f"{method.value:<8} {rep.sweep:>6d} {rep.rotations_applied:>9d} {rep.psi:>12.4e} "
            f"{'yes' if rep.converged else 'no':>9}"
        )
    lines.append(f"eigenvalue multiset gap: {cmp.eigenvalue_gap:.3e} (limit {AGREEMENT_TOL * cmp.scale:.3e})")
    lines.append("")
    lines.append("first sweep pivots (theta from Givens, x from the square-root rotation):")
    lines.append(f"{'p':>3} {'q':>3} {'theta':>13} {'x':>13} {'cos(2t)/2':>13} {'quadrant':>9} {'map err':>10}")
    shown = cmp.pivots if pivot_limit is None else cmp.pivots[:pivot_limit]
    for pc in shown:
        lines.append(
            f"{pc.p + 1:>3d} {pc.q + 1:>3d} {pc.theta:>13.9f} {pc.x:>13.9f} {pc.mapped_x:>13.9f} "
            f"{'same' if pc.quadrant_match else 'shifted':>9} {pc.map_error:>10.2e}"
        )
    if len(shown) < len(cmp.pivots):
        lines.append(f"... {len(cmp.pivots) - len(shown)} more pivots")
    lines.append(f"quadrant mismatches: {cmp.mismatched} of {len(cmp.pivots)}")
    lines.append(f"max |x - cos(2 theta)/2| on matching pivots: {cmp.max_map_error:.3e}")
    return "\n".join(lines)
