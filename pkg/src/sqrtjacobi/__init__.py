"""Dense symmetric eigensolver built on a square-root-parameterized Jacobi rotation."""
from .core import (
    EigenDecomposition,
    Method,
    PivotBlock,
    SolverConfig,
    SweepReport,
    SymmetricMatrix,
    validate_symmetric,
)
from .errors import *  # noqa: F401,F403
from .io import MatrixSpec, RunReport, generate_symmetric, read_matrix_market, write_matrix_market, write_report
from .oracle import eigenvalues_2x2, eigenvalues_charpoly, residual_check
from .rotation import (
    RootInterval,
    RotationParams,
    apply_left,
    apply_right,
    classify_root_interval,
    givens_schur,
    identity_rotation,
    predicted_eigenvalues,
    rotation_from_parameter,
    solve_pivot_parameter,
    sqrt_rotation,
)
from .solver import ConvergenceEstimate, check_quadratic_estimate, cyclic_sweep, off_norm, solve

__version__ = "0.1.0"
