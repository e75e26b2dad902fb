r"""Discretizations of the continuous fractional Sturm-Liouville problem.

The problem on ``[a, b]`` is

.. math::

    \left[ {}^C D^\alpha_b \, p \, {}^C D^\alpha_a + q \right] y = \lambda r_\alpha y,
    \qquad y(a) = y(b) = 0,

with ``1/2 < alpha <= 1``. Three routes to its eigenpairs are provided:

* method 1: minimize the discretized energy on the discretized constraint sphere;
* method 2: the linear first-order optimality system of that minimization;
* method 3: the Grünwald-Letnikov discretization of the equation itself,
  assembled entry by entry.

For ``p = r = 1`` and ``q = 0`` all three coincide up to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import rgamma

from .discrete import (
    RayleighOptions,
    SLCoefficients,
    Spectrum,
    _fix_signs,
    _interior,
    _node_samples,
    _pad,
    _sine_start,
    solve_weighted_symmetric,
    sphere_descent,
)
from .exceptions import DomainError, ShapeError, SingularityError
from .fracops import GridFunction, UniformGrid, gl_matrix, gl_weights

__all__ = [
    "ContinuousSLProblem",
    "AugmentedDensity",
    "caputo_left_approx",
    "caputo_right_approx",
    "method1_objective",
    "method1_gradient",
    "method1_solve",
    "method2_matrix",
    "method2_residual",
    "method2_solve",
    "gl_sl_matrix",
    "method3_matrix",
    "method3_operator_matrix",
    "method3_solve",
    "euler_lagrange_residual",
]


@dataclass(frozen=True)
class ContinuousSLProblem:
    """Coefficients of the continuous problem sampled on a uniform grid.

    ``p``, ``q`` and ``r_alpha`` accept callables, scalars, node arrays or
    ``None`` (meaning 1, 0 and 1). ``alpha`` must satisfy ``1/2 < alpha <= 1``;
    ``alpha = 1`` is the classical second-order problem.
    """

    alpha: float
    n_intervals: int
    a: float = 0.0
    b: float = 1.0
    p: object = None
    q: object = None
    r_alpha: object = None
    _samples: SLCoefficients = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        alpha = float(self.alpha)
        if not 0.5 < alpha <= 1.0:
            raise DomainError(f"alpha must lie in (1/2, 1], got {alpha}")
        grid = UniformGrid(self.a, self.b, self.n_intervals)
        q = 0.0 if self.q is None else self.q
        samples = SLCoefficients(grid, self.p, q, self.r_alpha, alpha)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "_samples", samples)

    @classmethod
    def unit(cls, alpha: float, n_intervals: int) -> ContinuousSLProblem:
        return cls(alpha, n_intervals)

    @property
    def grid(self) -> UniformGrid:
        return self._samples.grid

    @property
    def h(self) -> float:
        return self.grid.h

    @property
    def p_nodes(self) -> np.ndarray:
        return self._samples.p

    @property
    def q_nodes(self) -> np.ndarray:
        return self._samples.q

    @property
    def r_nodes(self) -> np.ndarray:
        return self._samples.r

    @property
    def is_unit(self) -> bool:
        return (
            np.all(self.p_nodes == 1.0)
            and np.all(self.q_nodes == 0.0)
            and np.all(self.r_nodes == 1.0)
        )

    def as_discrete(self) -> SLCoefficients:
        """The same samples viewed as discrete Sturm-Liouville coefficients."""
        return self._samples


@dataclass(frozen=True)
class AugmentedDensity:
    """``F = lambda0 * (p u^2 + q y^2) - lam * r y^2`` with ``u`` the fractional derivative.

    For the constraint density ``g = r y^2`` the constraint's own
    Euler-Lagrange equation reduces to ``2 r y = 0``, so with ``r > 0`` only
    ``y = 0`` solves it and the normal multiplier ``lambda0 = 1`` applies.
    """

    lam: float
    lambda0: float = 1.0

    def __post_init__(self):
        if self.lambda0 not in (0.0, 1.0):
            raise DomainError(f"lambda0 must be 0 or 1, got {self.lambda0}")

    @classmethod
    def for_problem(cls, problem: ContinuousSLProblem, lam: float) -> AugmentedDensity:
        if np.any(problem.r_nodes <= 0):
            raise DomainError("r_alpha must be positive to take lambda0 = 1")
        return cls(lam, 1.0)

    def __call__(self, p, q, r, y, dy):
        return self.lambda0 * (p * dy**2 + q * y**2) - self.lam * r * y**2

    def discrete_sum(self, y, problem: ContinuousSLProblem) -> float:
        """``Phi(y) = sum_{k=1}^N h F(x_k, y_k, D^alpha y_k)`` for interior ``y``."""
        yi = _interior(y, problem.n_intervals)
        ypad = _pad(yi)
        h = problem.h
        dy = gl_matrix(problem.alpha, problem.n_intervals) @ ypad / h**problem.alpha
        vals = self(problem.p_nodes, problem.q_nodes, problem.r_nodes, ypad, dy)
        return float(h * np.sum(vals[1:]))


def _values(f) -> tuple[np.ndarray, UniformGrid]:
    if not isinstance(f, GridFunction):
        raise ShapeError("expected a GridFunction")
    return f.values, f.grid


def caputo_left_approx(f: GridFunction, alpha: float, j: int) -> float:
    """Left Caputo derivative at ``x_j``: GL sum minus ``f(a) (x_j - a)^-alpha / Gamma(1 - alpha)``."""
    vals, grid = _values(f)
    n = grid.n_intervals
    if int(j) != j or not 0 <= j <= n:
        raise IndexError(f"node index {j} outside 0..{n}")
    j = int(j)
    h = grid.h
    w = gl_weights(alpha, j).weights
    gl = float(np.dot(w, vals[j::-1]) / h**alpha)
    fa = vals[0]
    if fa == 0.0:
        return gl
    if j == 0:
        raise SingularityError("left Caputo correction is singular at x = a when f(a) != 0")
    return gl - fa * (j * h) ** (-alpha) * float(rgamma(1.0 - alpha))


def caputo_right_approx(f: GridFunction, alpha: float, j: int) -> float:
    """Right Caputo derivative at ``x_j``: GL sum minus ``f(b) (b - x_j)^-alpha / Gamma(1 - alpha)``."""
    vals, grid = _values(f)
    n = grid.n_intervals
    if int(j) != j or not 0 <= j <= n:
        raise IndexError(f"node index {j} outside 0..{n}")
    j = int(j)
    h = grid.h
    w = gl_weights(alpha, n - j).weights
    gl = float(np.dot(w, vals[j:]) / h**alpha)
    fb = vals[-1]
    if fb == 0.0:
        return gl
    if j == n:
        raise SingularityError("right Caputo correction is singular at x = b when f(b) != 0")
    return gl - fb * ((n - j) * h) ** (-alpha) * float(rgamma(1.0 - alpha))


# -- method 1 ----------------------------------------------------------------


def method1_objective(y, alpha: float, n_intervals: int) -> float:
    """``sum_{k=1}^N N^{2 alpha - 1} (sum_{i=0}^k w_i y_{k-i})^2`` on ``[0, 1]``."""
    yi = _interior(y, n_intervals)
    conv = gl_matrix(alpha, n_intervals) @ _pad(yi)
    return float(n_intervals ** (2 * alpha - 1) * np.sum(conv[1:] ** 2))


def method1_gradient(y, alpha: float, n_intervals: int) -> np.ndarray:
    yi = _interior(y, n_intervals)
    t = gl_matrix(alpha, n_intervals)
    return 2.0 * n_intervals ** (2 * alpha - 1) * (t.T @ (t @ _pad(yi)))[1:-1]


def _require_unit_interval(problem: ContinuousSLProblem, what: str):
    if problem.a != 0.0 or problem.b != 1.0 or not problem.is_unit:
        raise DomainError(f"{what} is defined for p = r = 1, q = 0 on [0, 1]")


def method1_solve(
    problem: ContinuousSLProblem, opts: RayleighOptions | None = None
) -> tuple[np.ndarray, float]:
    """Minimize the discretized energy subject to ``sum y_k^2 / N = 1``.

    Returns the interior minimizer (scaled onto that sphere) and the
    minimum value, which approximates the first eigenvalue.
    """
    _require_unit_interval(problem, "method 1")
    n, alpha = problem.n_intervals, problem.alpha
    weight = np.full(n - 1, 1.0 / n)
    y, value, _ = sphere_descent(
        lambda v: 0.5 * method1_gradient(v, alpha, n), weight, _sine_start(n - 1), False, opts
    )
    return _fix_signs(y[:, None])[:, 0], value


# -- method 2 ----------------------------------------------------------------


def method2_matrix(alpha: float, n_intervals: int) -> np.ndarray:
    """Matrix of ``y_j -> N^{2a} sum_{k=0}^{N-j} w_k sum_{l=0}^{j+k} w_l y_{j+k-l}``."""
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    n = n_intervals
    w = gl_weights(alpha, n).weights
    m = n - 1
    out = np.zeros((m, m))
    for col in range(m):
        y = np.zeros(n + 1)
        y[col + 1] = 1.0
        # inner[s] = sum_{l=0}^{s} w_l y_{s-l}
        inner = np.array([np.dot(w[: s + 1], y[s::-1]) for s in range(n + 1)])
        for j in range(1, n):
            out[j - 1, col] = np.dot(w[: n - j + 1], inner[j:])
    return n ** (2 * alpha) * out


def method2_residual(y, lam: float, alpha: float, n_intervals: int) -> np.ndarray:
    """Residual of the optimality system ``M y - lam y`` plus ``sum y_k^2 / N - 1``."""
    yi = _interior(y, n_intervals)
    m = method2_matrix(alpha, n_intervals)
    return np.append(m @ yi - lam * yi, np.sum(yi**2) / n_intervals - 1.0)


def method2_solve(alpha: float, n_intervals: int) -> Spectrum:
    """All eigenpairs of the optimality system, normalized to ``sum y_k^2 / N = 1``."""
    m = method2_matrix(alpha, n_intervals)
    return solve_weighted_symmetric(
        m, np.ones(n_intervals - 1), "plain_unit", scale=1.0 / n_intervals
    )


# -- method 3 ----------------------------------------------------------------


def gl_sl_matrix(alpha: float, h: float, p, q, r) -> np.ndarray:
    """Entries ``c_ik`` of the Grünwald-Letnikov scheme from node samples.

    ``p``, ``q``, ``r`` hold values at all ``N + 1`` nodes.
    """
    p, q, r = (np.asarray(v, dtype=float) for v in (p, q, r))
    n = len(p) - 1
    w = gl_weights(alpha, n).weights
    scale = h ** (-2 * alpha)
    c = np.zeros((n - 1, n - 1))
    for i in range(1, n):
        for k in range(1, n):
            if i == k:
                j = np.arange(0, n - i + 1)
                val = scale * np.sum(w[j] ** 2 * p[j + i]) + q[i]
            elif i > k:
                j = np.arange(0, n - i + 1)
                val = scale * np.sum(w[j] * w[j + i - k] * p[j + i])
            else:
                j = np.arange(k - i, n - i + 1)
                val = scale * np.sum(w[j] * w[j + i - k] * p[j + i])
            c[i - 1, k - 1] = val / r[i]
    return c


def method3_matrix(problem: ContinuousSLProblem) -> np.ndarray:
    return gl_sl_matrix(
        problem.alpha, problem.h, problem.p_nodes, problem.q_nodes, problem.r_nodes
    )


def method3_operator_matrix(problem: ContinuousSLProblem) -> np.ndarray:
    """Same matrix built by applying the discretized operator to unit vectors."""
    n = problem.n_intervals
    t = gl_matrix(problem.alpha, n)
    ypad = _pad(np.eye(n - 1))
    flux = problem.p_nodes[:, None] * (t @ ypad)
    out = (t.T @ flux)[1:-1] * problem.h ** (-2 * problem.alpha)
    out += np.diag(problem.q_nodes[1:-1])
    return out / problem.r_nodes[1:-1, None]


def method3_solve(problem: ContinuousSLProblem) -> Spectrum:
    """Eigenpairs of the method 3 matrix, normalized so ``h sum r y_k^2 = 1``."""
    a = method3_matrix(problem)
    r = np.array(problem.r_nodes[1:-1])
    # A = R^-1 S with S symmetric; solve S y = lam R y
    s = r[:, None] * a
    s = 0.5 * (s + s.T)
    return solve_weighted_symmetric(s, r, "weighted_unit", scale=problem.h)


def euler_lagrange_residual(y, lam: float, problem: ContinuousSLProblem) -> np.ndarray:
    """Interior residual of ``[D_b p D_a + q - lam r] y``.

    The inner derivative uses :func:`caputo_left_approx`; the outer one is
    the truncated right GL sum applied to the flux ``p * D_a y``.
    """
    if isinstance(y, GridFunction):
        f = y
    else:
        yv = np.asarray(y, dtype=float)
        if yv.shape == (problem.n_intervals - 1,):
            f = GridFunction.from_interior(problem.grid, yv)
        else:
            f = GridFunction(problem.grid, yv)
    if f.grid != problem.grid:
        raise ShapeError("y is defined on a different grid")
    n = problem.n_intervals
    alpha = problem.alpha
    left = np.array([caputo_left_approx(f, alpha, j) for j in range(n + 1)])
    flux = GridFunction(problem.grid, problem.p_nodes * left)
    w = gl_weights(alpha, n).weights
    h = problem.h
    out = np.empty(n - 1)
    for i in range(1, n):
        outer = np.dot(w[: n - i + 1], flux.values[i:]) / h**alpha
        out[i - 1] = outer + (problem.q_nodes[i] - lam * problem.r_nodes[i]) * f.values[i]
    return out
