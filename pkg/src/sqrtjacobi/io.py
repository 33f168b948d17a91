"""Matrix Market files, run reports and seeded test-matrix generation.

Generator format
----------------
Random draws come from SplitMix64 (64-bit state).  Draw ``k`` (0-based) is::

    z = seed + (k + 1) * 0x9E3779B97F4A7C15            (mod 2**64)
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9            (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB            (mod 2**64)
    z = z ^ (z >> 31)

and maps to a double in [0, 1) as ``(z >> 11) * 2**-53``.  Standard normals
use Box-Muller on consecutive pairs ``(u1, u2)``.  These are
``sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`` and the matching ``sin`` value.
Matrices are filled row-major.

With a prescribed spectrum the matrix is ``Q diag(spectrum) Q^T``.  Q comes
from two passes of modified Gram-Schmidt over the columns of an n x n
normal draw.  Otherwise it is ``(R + R^T) / 2`` with R uniform on
``[-entry_scale, entry_scale]``.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core import SYM_TOL, SymmetricMatrix, as_symmetric, validate_symmetric
from .errors import BadSpec, ParseError, UnsupportedField

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
UINT64_MAX = 2**64 - 1


def splitmix64(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """``count`` consecutive SplitMix64 outputs starting at draw ``offset``."""
    k = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + k * GOLDEN
        z = (z ^ (z >> np.uint64(30))) * MIX1
        z = (z ^ (z >> np.uint64(27))) * MIX2
    return z ^ (z >> np.uint64(31))


def uniform01(seed: int, count: int, offset: int = 0) -> np.ndarray:
    z = splitmix64(seed, count, offset)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def standard_normal(seed: int, count: int, offset: int = 0) -> np.ndarray:
    pairs = (count + 1) // 2
    u = uniform01(seed, 2 * pairs, offset)
    r = np.sqrt(-2.0 * np.log1p(-u[0::2]))
    angle = 2.0 * np.pi * u[1::2]
    out = np.empty(2 * pairs)
    out[0::2] = r * np.cos(angle)
    out[1::2] = r * np.sin(angle)
    return out[:count]


def orthonormal_columns(G: np.ndarray) -> np.ndarray:
    """Q factor of G by modified Gram-Schmidt, run twice for orthogonality."""
    Q = np.array(G, dtype=np.float64)
    n = Q.shape[1]
    for _ in range(2):
        for j in range(n):
            for i in range(j):
                Q[:, j] -= (Q[:, i] @ Q[:, j]) * Q[:, i]
            norm = np.linalg.norm(Q[:, j])
            if norm == 0.0:
                raise BadSpec("random draw is rank deficient; choose another seed")
            Q[:, j] /= norm
    return Q


@dataclass(frozen=True)
class MatrixSpec:
    n: int
    spectrum: Optional[tuple] = None
    seed: int = 0
    entry_scale: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise BadSpec(f"n must be a positive integer, got {self.n!r}")
        if self.spectrum is not None:
            spec = tuple(float(v) for v in self.spectrum)
            if len(spec) != self.n:
                raise BadSpec(f"spectrum has {len(spec)} values for n = {self.n}")
            if not all(math.isfinite(v) for v in spec):
                raise BadSpec("spectrum values must be finite")
            object.__setattr__(self, "spectrum", spec)
        if int(self.seed) != self.seed or not 0 <= self.seed <= UINT64_MAX:
            raise BadSpec(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not (self.entry_scale > 0 and math.isfinite(self.entry_scale)):
            raise BadSpec(f"entry_scale must be positive, got {self.entry_scale!r}")


def generate_symmetric(spec: MatrixSpec) -> SymmetricMatrix:
    n = spec.n
    if spec.spectrum is not None:
        G = standard_normal(spec.seed, n * n).reshape(n, n)
        Q = orthonormal_columns(G)
        A = (Q * np.asarray(spec.spectrum)) @ Q.T
    else:
        R = spec.entry_scale * (2.0 * uniform01(spec.seed, n * n).reshape(n, n) - 1.0)
        A = R + R.T
        A *= 0.5
    return SymmetricMatrix(0.5 * (A + A.T))


# -- Matrix Market ---------------------------------------------------------

HEADER = "%%MatrixMarket"


def _parse_float(token: str, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"cannot parse {token!r} as a real number", lineno) from None


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"cannot parse {token!r} as an integer", lineno) from None


def read_matrix_market(path, sym_tol: float = SYM_TOL) -> SymmetricMatrix:
    """Read a real array or coordinate Matrix Market file.

    "symmetric" files fill the mirror entries.  "general" files go through
    :func:`validate_symmetric`.
    """
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith(HEADER):
        raise ParseError("missing %%MatrixMarket header", 1)
    banner = lines[0].split()
    if len(banner) != 5:
        raise ParseError("banner must read '%%MatrixMarket matrix <format> <field> <symmetry>'", 1)
    _, obj, fmt, fld, sym = (t.lower() for t in banner)
    if obj != "matrix":
        raise UnsupportedField(f"object {obj!r} is not supported")
    if fmt not in ("coordinate", "array"):
        raise ParseError(f"unknown format {fmt!r}", 1)
    if fld not in ("real", "double", "integer"):
        raise UnsupportedField(f"field {fld!r} is not supported (real or integer only)")
    if sym not in ("symmetric", "general"):
        raise UnsupportedField(f"symmetry {sym!r} is not supported")

    body = [
        (i + 1, line.split())
        for i, line in enumerate(lines)
        if i > 0 and line.strip() and not line.lstrip().startswith("%")
    ]
    if not body:
        raise ParseError("missing size line", len(lines))
    size_line, size = body[0]
    entries = body[1:]

    if fmt == "coordinate":
        if len(size) != 3:
            raise ParseError("coordinate size line needs 'rows cols nnz'", size_line)
        rows, cols, nnz = (_parse_int(t, size_line) for t in size)
    else:
        if len(size) != 2:
            raise ParseError("array size line needs 'rows cols'", size_line)
        rows, cols = (_parse_int(t, size_line) for t in size)
        nnz = rows * (rows + 1) // 2 if sym == "symmetric" else rows * cols
    if rows < 1 or cols < 1:
        raise ParseError("dimensions must be positive", size_line)
    if sym == "symmetric" and rows != cols:
        raise ParseError("symmetric matrix must be square", size_line)
    if len(entries) != nnz:
        where = entries[-1][0] if entries else size_line
        raise ParseError(f"expected {nnz} entries, found {len(entries)}", where)

    A = np.zeros((rows, cols))
    if fmt == "coordinate":
        seen = set()
        for lineno, tok in entries:
            if len(tok) != 3:
                raise ParseError("coordinate entry needs 'row col value'", lineno)
            i, j = _parse_int(tok[0], lineno) - 1, _parse_int(tok[1], lineno) - 1
            if not (0 <= i < rows and 0 <= j < cols):
                raise ParseError(f"index ({i + 1}, {j + 1}) outside {rows}x{cols}", lineno)
            key = (max(i, j), min(i, j)) if sym == "symmetric" else (i, j)
            if key in seen:
                raise ParseError(f"duplicate entry ({i + 1}, {j + 1})", lineno)
            seen.add(key)
            v = _parse_float(tok[2], lineno)
            A[i, j] = v
            if sym == "symmetric":
                A[j, i] = v
    else:
        # column-major; symmetric arrays store the lower triangle only
        if sym == "symmetric":
            positions = [(i, j) for j in range(cols) for i in range(j, rows)]
        else:
            positions = [(i, j) for j in range(cols) for i in range(rows)]
        for (lineno, tok), (i, j) in zip(entries, positions):
            if len(tok) != 1:
                raise ParseError("array entry needs exactly one value", lineno)
            v = _parse_float(tok[0], lineno)
            A[i, j] = v
            if sym == "symmetric":
                A[j, i] = v
    return validate_symmetric(A, sym_tol)


def format_matrix_market(M) -> str:
    A = as_symmetric(M).entries
    n = A.shape[0]
    out = [
        "%%MatrixMarket matrix coordinate real symmetric",
        f"{n} {n} {n * (n + 1) // 2}",
    ]
    for j in range(n):
        for i in range(j, n):
            out.append(f"{i + 1} {j + 1} {A[i, j]:.17g}")
    return "\n".join(out) + "\n"


def write_matrix_market(M, path) -> None:
    """Write the full lower triangle, column by column, at 17 significant digits."""
    Path(path).write_text(format_matrix_market(M), encoding="ascii")


# -- reports ---------------------------------------------------------------

@dataclass
class RunReport:
    method: str
    n: int
    sweeps: int
    rotations: int
    psi_history: list = field(default_factory=list)
    eigenvalues: list = field(default_factory=list)
    wall_time_ms: float = 0.0
    converged: bool = False

    @classmethod
    def from_result(cls, result, method) -> RunReport:
        rep = result.report
        return cls(
            method=getattr(method, "value", str(method)),
            n=len(result.decomposition.eigenvalues),
            sweeps=rep.sweep,
            rotations=rep.rotations_applied,
            psi_history=[float(v) for v in rep.sweep_psi],
            eigenvalues=[float(v) for v in result.decomposition.eigenvalues],
            wall_time_ms=float(rep.wall_time_ms),
            converged=bool(rep.converged),
        )

    def to_dict(self) -> dict:
        return asdict(self)


def summary_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".summary.json")


def write_report(report: RunReport, path, format: str = "json") -> None:
    """Write a run report as JSON, or as a per-sweep CSV plus a JSON summary.

    The CSV has header ``sweep,psi`` and one row per entry of
    ``psi_history``: the input first, then one row after each sweep.
    """
    path = Path(path)
    if format == "json":
        path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    elif format == "csv":
        write_history_csv(path, report.psi_history, header=("sweep", "psi"))
        summary = {k: v for k, v in report.to_dict().items() if k != "psi_history"}
        summary_path(path).write_text(json.dumps(summary, indent=2) + "\n")
    else:
        raise ValueError(f"unknown report format {format!r}")


def write_history_csv(target, values: Sequence[float], header=("sweep", "psi")) -> None:
    """Indexed history rows under ``header``; ``target`` is a path or an open text file."""
    if hasattr(target, "write"):
        _write_rows(target, values, header)
        return
    with open(target, "w", newline="") as fh:
        _write_rows(fh, values, header)


def _write_rows(fh, values, header) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for k, v in enumerate(values):
        writer.writerow([k, repr(float(v))])
