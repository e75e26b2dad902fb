"""Dense symmetric eigensolver based on cyclic Jacobi rotations.

Rotations are scheduled in round-robin (tournament) order: each round pairs
every index with exactly one partner, so the ``m // 2`` rotations of a round
touch disjoint rows and columns and are applied together as one batch. A
sweep is ``m - 1`` rounds and visits every off-diagonal pair once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConvergenceError, ShapeError

__all__ = ["SymmetricMatrix", "EigenResult", "jacobi_eigen"]

DEFAULT_TOL = 1e-13
DEFAULT_MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class SymmetricMatrix:
    """Square matrix checked for symmetry at construction."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ShapeError(f"expected a nonempty square matrix, got shape {a.shape}")
        scale = np.abs(a).sum(axis=1).max()
        asym = np.abs(a - a.T).sum(axis=1).max()
        if asym > SYMMETRY_TOL * scale:
            raise ShapeError(f"matrix is not symmetric: |A - A^T|_inf = {asym:.3e}")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def order(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray = field(repr=False)
    sweeps: int

    def __iter__(self):
        yield self.values
        yield self.vectors


def _round_robin(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Disjoint index pairings covering all ``m (m - 1) / 2`` pairs."""
    players = list(range(m)) + ([-1] if m % 2 else [])
    n = len(players)
    rounds = []
    for _ in range(n - 1):
        p, q = [], []
        for i in range(n // 2):
            u, v = players[i], players[n - 1 - i]
            if u >= 0 and v >= 0:
                p.append(min(u, v))
                q.append(max(u, v))
        rounds.append((np.array(p, dtype=int), np.array(q, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigen(
    matrix,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> EigenResult:
    """Eigendecomposition of a real symmetric matrix.

    Iterates until the off-diagonal Frobenius norm drops below
    ``tol * ||A||_F``. Eigenvalues are returned ascending with matching
    orthonormal eigenvectors in the columns of ``vectors``.

    Raises
    ------
    ConvergenceError
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    if not isinstance(matrix, SymmetricMatrix):
        matrix = SymmetricMatrix(matrix)
    a = np.array(matrix.entries)
    m = a.shape[0]
    v = np.eye(m)
    target = tol * np.linalg.norm(a)

    sweeps = 0
    if m > 1 and _off_norm(a) > target:
        rounds = _round_robin(m)
        while True:
            if sweeps >= max_sweeps:
                raise ConvergenceError(
                    f"Jacobi iteration did not converge to tol={tol:g}", sweeps, a
                )
            sweeps += 1
            for p, q in rounds:
                apq = a[p, q]
                active = apq != 0.0
                if not np.any(active):
                    continue
                p, q, apq = p[active], q[active], apq[active]
                with np.errstate(over="ignore"):
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
                t[theta == 0.0] = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c[:, None] * ap - s[:, None] * aq
                a[q, :] = s[:, None] * ap + c[:, None] * aq
                a[p, q] = 0.0
                a[q, p] = 0.0

                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
            if _off_norm(a) <= target:
                break

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return EigenResult(values[order], v[:, order], sweeps)
