r"""Grünwald-Letnikov weights and fractional differences on uniform grids.

The backward and forward differences of order :math:`0 < \alpha \le 1` are

.. math::

    \nabla^\alpha f_k = h^{-\alpha} \sum_{i=0}^{k} w_i f_{k-i}, \qquad
    \Delta^\alpha f_k = h^{-\alpha} \sum_{i=0}^{N-k} w_i f_{k+i},

with :math:`w_i = (-1)^i \binom{\alpha}{i}`. On the whole grid the backward
difference is a lower-triangular Toeplitz matrix ``T`` and the forward one is
its transpose, which is what makes summation by parts exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exceptions import DomainError, ShapeError

__all__ = [
    "UniformGrid",
    "GLWeights",
    "GridFunction",
    "gl_weights",
    "gl_matrix",
    "backward_diff",
    "forward_diff",
    "backward_diff_all",
    "forward_diff_all",
    "summation_by_parts_residual",
]


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class UniformGrid:
    """Uniform mesh ``x_j = a + j h`` with ``N`` intervals on ``[a, b]``."""

    a: float
    b: float
    n_intervals: int

    def __post_init__(self):
        if int(self.n_intervals) != self.n_intervals or self.n_intervals < 2:
            raise DomainError(f"n_intervals must be an integer >= 2, got {self.n_intervals}")
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or self.b <= self.a:
            raise DomainError(f"need a < b, got a={self.a}, b={self.b}")
        object.__setattr__(self, "n_intervals", int(self.n_intervals))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @classmethod
    def from_step(cls, n_intervals: int, h: float = 1.0, a: float = 0.0) -> UniformGrid:
        if h <= 0:
            raise DomainError(f"step must be positive, got {h}")
        return cls(a, a + n_intervals * h, n_intervals)

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n_intervals

    @property
    def size(self) -> int:
        """Number of nodes, ``N + 1``."""
        return self.n_intervals + 1

    @property
    def nodes(self) -> np.ndarray:
        x = self.a + np.arange(self.size) * self.h
        x.setflags(write=False)
        return x

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[1:-1]


@dataclass(frozen=True)
class GLWeights:
    """Grünwald-Letnikov coefficients ``w_0 .. w_M`` for one order ``alpha``."""

    alpha: float
    weights: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, k):
        return self.weights[k]

    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.weights)


@dataclass(frozen=True)
class GridFunction:
    """Values ``f_0 .. f_N`` attached to the nodes of a grid."""

    grid: UniformGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = _frozen(self.values)
        if values.shape != (self.grid.size,):
            raise ShapeError(
                f"expected {self.grid.size} node values, got shape {values.shape}"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, grid: UniformGrid, func) -> GridFunction:
        return cls(grid, np.asarray(func(grid.nodes), dtype=float) * np.ones(grid.size))

    @classmethod
    def from_interior(cls, grid: UniformGrid, interior) -> GridFunction:
        """Pad interior values with homogeneous Dirichlet data."""
        interior = np.asarray(interior, dtype=float)
        if interior.shape != (grid.n_intervals - 1,):
            raise ShapeError(
                f"expected {grid.n_intervals - 1} interior values, got shape {interior.shape}"
            )
        values = np.zeros(grid.size)
        values[1:-1] = interior
        return cls(grid, values)

    @property
    def interior(self) -> np.ndarray:
        return self.values[1:-1]

    def __len__(self) -> int:
        return len(self.values)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    return alpha


@lru_cache(maxsize=64)
def _weights_cached(alpha: float, m: int) -> np.ndarray:
    w = np.empty(m + 1)
    w[0] = 1.0
    for k in range(1, m + 1):
        w[k] = w[k - 1] * ((k - 1 - alpha) / k)
    w.setflags(write=False)
    return w


def gl_weights(alpha: float, m: int) -> GLWeights:
    """Return ``w_0 .. w_m`` from the recurrence ``w_k = w_{k-1} (k - 1 - alpha) / k``."""
    alpha = _check_alpha(alpha)
    if int(m) != m or m < 0:
        raise DomainError(f"m must be a nonnegative integer, got {m}")
    return GLWeights(alpha, _weights_cached(alpha, int(m)))


def gl_matrix(alpha: float, n_intervals: int) -> np.ndarray:
    """Unscaled backward-difference matrix ``T[k, j] = w_{k-j}`` of order ``N + 1``.

    ``h**-alpha * T @ f`` is the backward difference at every node and
    ``h**-alpha * T.T @ f`` the forward one.
    """
    w = gl_weights(alpha, n_intervals).weights
    n = n_intervals + 1
    idx = np.subtract.outer(np.arange(n), np.arange(n))
    return np.where(idx >= 0, w[np.clip(idx, 0, None)], 0.0)


def _node_index(f: GridFunction, k: int) -> int:
    n = f.grid.n_intervals
    if int(k) != k or not 0 <= k <= n:
        raise IndexError(f"node index {k} outside 0..{n}")
    return int(k)


def backward_diff(f: GridFunction, alpha: float, k: int) -> float:
    """Backward fractional difference of ``f`` at node ``k``."""
    k = _node_index(f, k)
    w = gl_weights(alpha, k).weights
    h = f.grid.h
    return float(np.dot(w, f.values[k::-1]) / h**alpha)


def forward_diff(f: GridFunction, alpha: float, k: int) -> float:
    """Forward fractional difference of ``f`` at node ``k``."""
    k = _node_index(f, k)
    n = f.grid.n_intervals
    w = gl_weights(alpha, n - k).weights
    h = f.grid.h
    return float(np.dot(w, f.values[k:]) / h**alpha)


def backward_diff_all(f: GridFunction, alpha: float) -> GridFunction:
    n = f.grid.n_intervals
    values = gl_matrix(alpha, n) @ f.values / f.grid.h**alpha
    return GridFunction(f.grid, values)


def forward_diff_all(f: GridFunction, alpha: float) -> GridFunction:
    n = f.grid.n_intervals
    values = gl_matrix(alpha, n).T @ f.values / f.grid.h**alpha
    return GridFunction(f.grid, values)


def summation_by_parts_residual(
    f: GridFunction, g: GridFunction, alpha: float
) -> tuple[float, float]:
    """Defects of the two summation-by-parts identities.

    Returns ``(r_full, r_boundary)``. ``r_full`` compares full sums over
    ``k = 0..N`` and vanishes for any ``f, g``; ``r_boundary`` drops the
    ``k = 0`` backward term and the ``k = N`` forward term and vanishes when
    ``f`` or ``g`` is zero at both endpoints.
    """
    if f.grid != g.grid:
        raise ShapeError("f and g must share the same grid")
    back = backward_diff_all(f, alpha).values
    fwd = forward_diff_all(g, alpha).values
    lhs = g.values * back
    rhs = f.values * fwd
    r_full = float(np.sum(lhs) - np.sum(rhs))
    r_boundary = float(np.sum(lhs[1:]) - np.sum(rhs[:-1]))
    return r_full, r_boundary
