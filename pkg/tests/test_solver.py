import math

import numpy as np
import pytest

from sqrtjacobi.core import Method, SolverConfig
from sqrtjacobi.errors import DegenerateInput, DidNotConverge, InsufficientHistory, NonSquare
from sqrtjacobi.io import MatrixSpec, generate_symmetric
from sqrtjacobi.solver import (
    check_quadratic_estimate,
    cyclic_sweep,
    min_gap,
    negligible_pivot,
    off_norm,
    solve,
)

from conftest import WORKED

METHODS = [Method.SQRT, Method.GIVENS]


class TestOffNorm:
    def test_identity(self):
        assert off_norm(np.eye(4)) == 0.0

    def test_worked(self):
        assert abs(off_norm(WORKED) - math.sqrt(8.0)) <= 1e-15

    def test_swap(self):
        assert abs(off_norm([[0.0, 1.0], [1.0, 0.0]]) - math.sqrt(2.0)) <= 1e-15

    def test_scalar(self):
        assert off_norm([[3.0]]) == 0.0

    def test_no_overflow(self):
        M = np.array([[0.0, 1e200], [1e200, 0.0]])
        assert off_norm(M) == pytest.approx(math.sqrt(2.0) * 1e200)

    def test_non_square(self):
        with pytest.raises(NonSquare):
            off_norm(np.zeros((2, 3)))

    def test_matches_definition(self):
        rng = np.random.default_rng(11)
        M = rng.standard_normal((6, 6))
        ref = math.sqrt(sum(M[i, j] ** 2 for i in range(6) for j in range(6) if i != j))
        assert abs(off_norm(M) - ref) <= 1e-14 * ref


class TestCyclicSweep:
    @pytest.mark.parametrize("method", METHODS)
    def test_diagonal_untouched(self, method):
        M = np.diag([9.0, 4.0, 1.0])
        V = np.eye(3)
        assert cyclic_sweep(M, V, method) == 0
        np.testing.assert_array_equal(M, np.diag([9.0, 4.0, 1.0]))
        np.testing.assert_array_equal(V, np.eye(3))

    def test_observer_sees_every_pivot(self):
        seen = []
        cyclic_sweep(WORKED.copy(), None, Method.SQRT, lambda p, q, a, rot, M: seen.append((p, q, a)))
        assert [(p, q) for p, q, _ in seen] == [(0, 1), (0, 2), (1, 2)]
        assert seen[1][2] == 2.0

    def test_exact_symmetry_kept(self):
        M = generate_symmetric(MatrixSpec(7, seed=3)).copy()
        for _ in range(3):
            cyclic_sweep(M, None)
            np.testing.assert_array_equal(M, M.T)

    def test_negligible_pivot_zeroed(self):
        M = np.array([[1.0, 1e-20], [1e-20, 2.0]])
        assert negligible_pivot(M, 0, 1)
        assert cyclic_sweep(M, None) == 0
        assert M[0, 1] == 0.0 and M[1, 0] == 0.0

    def test_tiny_but_meaningful_pivot_rotated(self):
        M = np.array([[1.0, 1e-10], [1e-10, 2.0]])
        assert not negligible_pivot(M, 0, 1)
        assert cyclic_sweep(M, None) == 1


class TestSolve:
    @pytest.mark.parametrize("method", METHODS)
    def test_worked(self, method):
        res = solve(WORKED, SolverConfig(method=method))
        np.testing.assert_allclose(res.eigenvalues, [5.0, 3.0, 0.0], atol=1e-10)
        assert res.converged

    def test_diagonal(self):
        res = solve(np.diag([9.0, 4.0, 1.0]))
        assert res.report.rotations_applied == 0
        assert res.report.sweep == 0
        np.testing.assert_array_equal(res.eigenvalues, [9.0, 4.0, 1.0])
        np.testing.assert_array_equal(res.decomposition.eigenvectors, np.eye(3))

    def test_descending_with_vectors(self):
        res = solve(np.diag([1.0, 9.0, 4.0]))
        np.testing.assert_array_equal(res.eigenvalues, [9.0, 4.0, 1.0])
        np.testing.assert_array_equal(res.decomposition.eigenvectors, np.eye(3)[:, [1, 2, 0]])

    def test_one_by_one(self):
        res = solve([[2.5]])
        assert res.eigenvalues.tolist() == [2.5]

    def test_empty(self):
        with pytest.raises(DegenerateInput):
            solve(np.zeros((0, 0)))

    def test_other_shift_not_implemented(self):
        with pytest.raises(NotImplementedError):
            solve(WORKED, SolverConfig(shift_delta=0.25))

    def test_does_not_converge(self):
        with pytest.raises(DidNotConverge) as info:
            solve(WORKED, SolverConfig(max_sweeps=0))
        res = info.value.result
        assert not res.converged
        assert res.report.sweep == 0
        assert res.report.psi == pytest.approx(math.sqrt(8.0))

    def test_no_check_returns_partial(self):
        res = solve(WORKED, SolverConfig(max_sweeps=0), check=False)
        assert not res.converged

    def test_history_shape(self):
        A = generate_symmetric(MatrixSpec(5, seed=2))
        res = solve(A)
        rep = res.report
        assert len(rep.psi_history) == 1 + rep.sweep * 10
        assert len(rep.sweep_psi) == rep.sweep + 1
        assert rep.psi_history[0] == rep.sweep_psi[0]
        assert rep.psi_history[-1] == rep.sweep_psi[-1]
        assert rep.max_reconcile_error <= 1e-10

    def test_input_not_modified(self):
        A = WORKED.copy()
        solve(A)
        np.testing.assert_array_equal(A, WORKED)

    @pytest.mark.parametrize("method", METHODS)
    def test_prescribed_spectrum(self, method):
        spectrum = np.arange(8.0, 0.0, -1.0)
        A = generate_symmetric(MatrixSpec(8, spectrum=spectrum, seed=12))
        res = solve(A, SolverConfig(method=method))
        np.testing.assert_allclose(res.eigenvalues, spectrum, atol=1e-10)

    @pytest.mark.parametrize("method", METHODS)
    @pytest.mark.parametrize("seed", range(5))
    def test_invariants(self, method, seed):
        A = generate_symmetric(MatrixSpec(3 + 2 * seed, seed=100 + seed)).entries
        res = solve(A, SolverConfig(method=method))
        lam = res.eigenvalues
        V = res.decomposition.eigenvectors
        fro = np.linalg.norm(A)
        n = len(lam)
        assert abs(lam.sum() - np.trace(A)) <= 1e-12 * max(1.0, fro) * n
        assert abs(np.linalg.norm(lam) - fro) <= 1e-12 * max(1.0, fro) * n
        assert np.linalg.norm(V.T @ V - np.eye(n)) <= 1e-10 * n
        assert np.max(np.linalg.norm(A @ V - V * lam, axis=0)) <= 10 * 1e-12 * fro
        np.testing.assert_allclose(lam, np.linalg.eigvalsh(A)[::-1], atol=1e-10 * fro)

    def test_psi_monotone(self):
        A = generate_symmetric(MatrixSpec(9, seed=21))
        h = np.array(solve(A).report.psi_history)
        assert np.all(np.diff(h) <= 1e-12 * h[0])


class TestQuadraticEstimate:
    def test_all_zero(self):
        est = check_quadratic_estimate([0.0] * 7, 3, 1.0)
        assert all(est.bound_satisfied)
        assert est.onset == 0
        assert est.N == 3

    def test_converged_tail(self):
        h = [1.0, 0.5, 0.1, 1e-15, 1e-20, 0.0, 0.0]
        est = check_quadratic_estimate(h, 3, 1.0)
        assert all(est.bound_satisfied)
        assert est.onset == 0

    def test_slow_tail_is_a_violation(self):
        # 1e-15 -> 1e-18 is linear, not quadratic, however small the numbers are
        est = check_quadratic_estimate([1e-15, 1e-16, 1e-17, 1e-18], 3, 1.0)
        assert est.bound_satisfied == [False]

    def test_violation_then_onset(self):
        h = [1.0, 1.0, 1.0, 1.0, 1.0, 0.1, 1e-3, 1e-7, 1e-15]
        est = check_quadratic_estimate(h, 3, 1.0)
        assert est.N == 3
        assert est.bound_satisfied == [False, False, True, True, True, True]
        assert est.onset == 2
        assert est.violations == [0, 1]
        assert est.holds_below(0.5)
        assert not est.holds_below(2.0)

    def test_last_violated(self):
        est = check_quadratic_estimate([1.0, 1.0, 1.0], 2, 1.0)
        assert est.onset is None

    def test_short_history(self):
        with pytest.raises(InsufficientHistory):
            check_quadratic_estimate([1.0, 0.5], 3, 1.0)

    def test_bad_gap(self):
        with pytest.raises(ValueError):
            check_quadratic_estimate([0.0] * 5, 2, 0.0)

    def test_min_gap(self):
        assert min_gap([5.0, 3.0, 0.0]) == 2.0
        assert min_gap([1.0, 1.0 + 1e-15, 3.0], floor=1e-12) == pytest.approx(2.0)
        assert min_gap([4.0]) == 0.0

    def test_givens_satisfies_bound(self, gap_one_matrix):
        res = solve(gap_one_matrix, SolverConfig(method=Method.GIVENS), gap_delta=1.0)
        est = res.estimate
        assert est.onset is not None
        assert est.holds_below(1.0 / (2.0 * math.sqrt(2.0)))
