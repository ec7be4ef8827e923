"""Dense symmetric eigenvalues by cyclic Jacobi rotations.

Rotations are scheduled in round-robin order: every round annihilates
``n // 2`` disjoint off-diagonal pairs at once, so a round is a handful of
vectorised numpy updates instead of ``n / 2`` Python-level rotations. One
sweep (``n - 1`` rounds) visits every pair exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NoConvergenceError

OFF_DIAGONAL_TOL = 1e-12
MAX_SWEEPS = 100
MAX_DIMENSION = 2048


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense real symmetric matrix; symmetry is checked exactly on construction."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise ValueError("matrix is not exactly symmetric")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.entries))

    def frobenius_sq(self) -> float:
        return float(np.sum(self.entries**2))


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # circle method; index n is a bye when n is odd
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        rounds.append((np.array(p, dtype=np.intp), np.array(q, dtype=np.intp)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.sqrt(np.sum(off**2)))


def jacobi_eigenvalues(
    matrix,
    tol: float = OFF_DIAGONAL_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> tuple[np.ndarray, int]:
    """Diagonalise a symmetric matrix; return (sorted eigenvalues, sweeps used).

    Iteration stops once the off-diagonal Frobenius norm drops below
    ``tol * ||A||_F``.
    """
    a = np.array(matrix.entries if isinstance(matrix, SymmetricMatrix) else matrix, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if n > MAX_DIMENSION:
        raise ValueError(f"dimension {n} exceeds {MAX_DIMENSION}")
    if n <= 1:
        return np.sort(np.diag(a)), 0

    scale = float(np.sqrt(np.sum(a**2)))
    if scale == 0.0:
        return np.zeros(n), 0
    threshold = tol * scale
    rounds = _round_robin(n)

    for sweep in range(max_sweeps + 1):
        if _off_norm(a) <= threshold:
            return np.sort(np.diag(a)), sweep
        if sweep == max_sweeps:
            break
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            # smaller rotation angle; theta may overflow to inf, giving t = 0
            with np.errstate(over="ignore"):
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta**2 + 1.0))
            c = 1.0 / np.sqrt(t**2 + 1.0)
            s = t * c

            cols_p = a[:, p].copy()
            cols_q = a[:, q].copy()
            a[:, p] = c * cols_p - s * cols_q
            a[:, q] = s * cols_p + c * cols_q
            rows_p = a[p, :].copy()
            rows_q = a[q, :].copy()
            a[p, :] = c[:, None] * rows_p - s[:, None] * rows_q
            a[q, :] = s[:, None] * rows_p + c[:, None] * rows_q
            a[p, q] = 0.0
            a[q, p] = 0.0

    raise NoConvergenceError(
        f"Jacobi iteration did not converge in {max_sweeps} sweeps "
        f"(off-diagonal norm {_off_norm(a):.3e}, threshold {threshold:.3e})"
    )


def symmetric_eigenvalues(matrix) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, ascending."""
    return jacobi_eigenvalues(matrix)[0]
