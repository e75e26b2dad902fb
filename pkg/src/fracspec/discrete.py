r"""Discrete fractional Sturm-Liouville problem.

For interior nodes ``k = 1 .. N-1`` the problem reads

.. math::

    \Delta^\alpha_N \left( p_k \nabla^\alpha_k y \right) + q_k y_k = \lambda r_k y_k,
    \qquad y_0 = y_N = 0,

which is the generalized symmetric eigenproblem ``A y = lambda R y`` with
``R = diag(r)``. Its extreme eigenvalues are the extreme values of the
Rayleigh quotient ``J[y] / I[y]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .eigensolver import DEFAULT_MAX_SWEEPS, DEFAULT_TOL, jacobi_eigen
from .exceptions import ConvergenceError, DomainError, PreconditionError, ShapeError
from .fracops import GridFunction, UniformGrid, _check_alpha, gl_matrix

__all__ = [
    "SLCoefficients",
    "Spectrum",
    "ExpansionCoefficients",
    "RayleighOptions",
    "sl_operator",
    "assemble_discrete",
    "closed_form_diagonal",
    "solve_discrete",
    "solve_weighted_symmetric",
    "expand",
    "reconstruct",
    "functional_J",
    "functional_I",
    "grad_J",
    "grad_I",
    "rayleigh",
    "sphere_descent",
    "minimize_rayleigh",
    "maximize_rayleigh",
    "kkt_residual",
]

Normalization = Literal["weighted_unit", "plain_unit"]
_NORMALIZATIONS = ("weighted_unit", "plain_unit")


def _node_samples(values, grid: UniformGrid, name: str) -> np.ndarray:
    if values is None:
        out = np.ones(grid.size)
    elif callable(values):
        out = np.asarray(values(grid.nodes), dtype=float) * np.ones(grid.size)
    else:
        out = np.array(values, dtype=float)
        if out.ndim == 0:
            out = np.full(grid.size, float(out))
    if out.shape != (grid.size,):
        raise ShapeError(f"{name} must have {grid.size} node values, got shape {out.shape}")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SLCoefficients:
    """Node samples of ``p > 0``, ``q`` and ``r > 0`` plus the order ``alpha``.

    ``p``, ``q`` and ``r`` may be given as arrays of length ``N + 1``,
    scalars, or callables evaluated on the grid nodes.
    """

    grid: UniformGrid
    p: np.ndarray = field(repr=False)
    q: np.ndarray = field(repr=False)
    r: np.ndarray = field(repr=False)
    alpha: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))
        p = _node_samples(self.p, self.grid, "p")
        q = _node_samples(0.0 if self.q is None else self.q, self.grid, "q")
        r = _node_samples(self.r, self.grid, "r")
        if not np.all(np.isfinite(p)) or not np.all(np.isfinite(q)) or not np.all(np.isfinite(r)):
            raise DomainError("coefficients must be finite")
        for name, arr in (("p", p), ("r", r)):
            bad = np.flatnonzero(arr <= 0)
            if bad.size:
                raise DomainError(f"{name} must be positive; {name}[{bad[0]}] = {arr[bad[0]]}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)

    @classmethod
    def unit(cls, alpha: float, n_intervals: int, h: float = 1.0, a: float = 0.0) -> SLCoefficients:
        """``p = r = 1``, ``q = 0`` on a grid of step ``h``."""
        return cls(UniformGrid.from_step(n_intervals, h, a), None, 0.0, None, alpha)

    @property
    def n_intervals(self) -> int:
        return self.grid.n_intervals

    @property
    def size(self) -> int:
        """Number of interior unknowns ``N - 1``."""
        return self.grid.n_intervals - 1

    def with_q(self, q) -> SLCoefficients:
        return SLCoefficients(self.grid, self.p, q, self.r, self.alpha)


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with eigenvectors stored column-wise.

    ``eigenvectors[:, i]`` holds the interior values of the i-th
    eigenfunction. They satisfy ``scale * sum(w * y**2) = 1`` where ``w`` is
    ``weight`` for ``weighted_unit`` and 1 for ``plain_unit``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    weight: np.ndarray = field(repr=False)
    residual_norm: float
    normalization: str
    scale: float = 1.0

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def inner(self, u, v) -> np.ndarray:
        """r-weighted inner product ``sum_k r_k u_k v_k`` (broadcast over columns)."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        w = self.weight if u.ndim == 1 else self.weight[:, None]
        return np.sum(w * u * v, axis=0)

    def gram(self) -> np.ndarray:
        y = self.eigenvectors
        return y.T @ (self.weight[:, None] * y)


@dataclass(frozen=True)
class ExpansionCoefficients:
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class RayleighOptions:
    """Settings for the projected-gradient Rayleigh quotient solver.

    Iteration stops once the quotient changes by less than ``tol`` (relative
    to ``max(1, |R|)``) *and* the projected gradient norm is below
    ``grad_tol`` on the same scale.
    """

    tol: float = 1e-10
    grad_tol: float = 1e-11
    max_iter: int = 100_000
    armijo: float = 1e-4
    initial_step: float = 1.0
    vec_tol: float = 1e-7


def _interior(y, n_intervals: int) -> np.ndarray:
    """Interior values of ``y`` given either padded (N+1) or interior (N-1) values."""
    if isinstance(y, GridFunction):
        y = y.values
    y = np.asarray(y, dtype=float)
    if y.shape == (n_intervals + 1,):
        if y[0] != 0.0 or y[-1] != 0.0:
            raise PreconditionError(
                f"boundary values must vanish, got y_0={y[0]}, y_N={y[-1]}"
            )
        return y[1:-1]
    if y.shape == (n_intervals - 1,):
        return y
    raise ShapeError(
        f"expected {n_intervals + 1} node values or {n_intervals - 1} interior values, "
        f"got shape {y.shape}"
    )


def _pad(y: np.ndarray) -> np.ndarray:
    pad = [(1, 1)] + [(0, 0)] * (y.ndim - 1)
    return np.pad(y, pad)


def sl_operator(y, coeffs: SLCoefficients) -> np.ndarray:
    """Apply ``y -> forward(p * backward(y)) + q y`` at the interior nodes.

    ``y`` holds interior values (``N - 1`` rows); extra trailing axes are
    treated as independent columns.
    """
    y = np.asarray(y, dtype=float)
    n = coeffs.n_intervals
    if y.shape[0] != n - 1:
        raise ShapeError(f"expected {n - 1} interior rows, got {y.shape[0]}")
    t = gl_matrix(coeffs.alpha, n)
    scale = coeffs.grid.h ** coeffs.alpha
    ypad = _pad(y)
    p = coeffs.p if y.ndim == 1 else coeffs.p[:, None]
    flux = p * (t @ ypad) / scale
    out = (t.T @ flux) / scale
    q = coeffs.q[1:-1] if y.ndim == 1 else coeffs.q[1:-1, None]
    return out[1:-1] + q * y


def assemble_discrete(coeffs: SLCoefficients) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(A, R)`` for ``A y = lambda R y``.

    ``A`` is built by applying :func:`sl_operator` to the interior unit
    vectors; ``R`` is returned as the vector of interior ``r`` values.
    """
    m = coeffs.size
    a = sl_operator(np.eye(m), coeffs)
    return a, np.array(coeffs.r[1:-1])


def closed_form_diagonal(coeffs: SLCoefficients) -> np.ndarray:
    """Diagonal of ``A`` from ``h^{-2a} sum_k w_k^2 p_{i+k} + q_i``.

    Used to cross-check the operator assembly.
    """
    n = coeffs.n_intervals
    w = gl_matrix(coeffs.alpha, n)[:, 0]
    h2a = coeffs.grid.h ** (2 * coeffs.alpha)
    diag = np.empty(n - 1)
    for i in range(1, n):
        k = np.arange(n - i + 1)
        diag[i - 1] = np.sum(w[k] ** 2 * coeffs.p[i + k]) / h2a + coeffs.q[i]
    return diag


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-14 * np.abs(col).max())
        if nz.size and col[nz[0]] < 0:
            out[:, j] = -col
    return out


def solve_weighted_symmetric(
    a: np.ndarray,
    weight: np.ndarray,
    normalization: Normalization = "weighted_unit",
    scale: float = 1.0,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> Spectrum:
    """Solve ``A y = lambda diag(weight) y`` for symmetric ``A``.

    Uses ``D = diag(sqrt(weight))`` to form ``D^-1 A D^-1``, diagonalizes it
    with Jacobi rotations and maps the eigenvectors back with ``D^-1``.
    """
    if normalization not in _NORMALIZATIONS:
        raise DomainError(f"normalization must be one of {_NORMALIZATIONS}, got {normalization!r}")
    weight = np.asarray(weight, dtype=float)
    d = np.sqrt(weight)
    sym = a / np.outer(d, d)
    values, v = jacobi_eigen(0.5 * (sym + sym.T), tol=tol, max_sweeps=max_sweeps)
    y = v / d[:, None]
    y = _fix_signs(y)

    w = weight if normalization == "weighted_unit" else np.ones_like(weight)
    norms = np.sqrt(scale * np.sum(w[:, None] * y * y, axis=0))
    y = y / norms

    resid = a @ y - (weight[:, None] * y) * values
    residual_norm = float(np.abs(resid).max()) if resid.size else 0.0
    y.setflags(write=False)
    values.setflags(write=False)
    return Spectrum(values, y, np.array(weight), residual_norm, normalization, scale)


def solve_discrete(
    coeffs: SLCoefficients, normalization: Normalization = "weighted_unit"
) -> Spectrum:
    """Eigenvalues and r-orthogonal eigenvectors of the discrete problem."""
    a, r = assemble_discrete(coeffs)
    return solve_weighted_symmetric(a, r, normalization)


def expand(phi, spectrum: Spectrum) -> ExpansionCoefficients:
    """Coefficients ``c_i = <phi, y_i>_r / <y_i, y_i>_r``.

    ``phi`` may also be a 2-D array with one vector per column, in which case
    ``values`` has the same layout.
    """
    phi = np.asarray(phi, dtype=float)
    m = len(spectrum)
    if phi.shape[0] != m:
        raise ShapeError(f"expected {m} interior values, got shape {phi.shape}")
    y = spectrum.eigenvectors
    wy = spectrum.weight[:, None] * y
    norms = np.sum(wy * y, axis=0)
    c = (wy.T @ phi) / (norms if phi.ndim == 1 else norms[:, None])
    return ExpansionCoefficients(c)


def reconstruct(coeffs, spectrum: Spectrum) -> np.ndarray:
    """Inverse of :func:`expand`: ``sum_i c_i y_i``."""
    c = coeffs.values if isinstance(coeffs, ExpansionCoefficients) else np.asarray(coeffs, dtype=float)
    if c.shape[0] != len(spectrum):
        raise ShapeError(f"expected {len(spectrum)} coefficients, got shape {c.shape}")
    return spectrum.eigenvectors @ c


def functional_J(y, coeffs: SLCoefficients) -> float:
    """``sum_{k=1}^{N} p_k (backward_diff y)_k^2 + q_k y_k^2`` with ``y_0 = y_N = 0``."""
    yi = _interior(y, coeffs.n_intervals)
    ypad = _pad(yi)
    back = gl_matrix(coeffs.alpha, coeffs.n_intervals) @ ypad / coeffs.grid.h ** coeffs.alpha
    return float(np.sum(coeffs.p[1:] * back[1:] ** 2) + np.sum(coeffs.q[1:] * ypad[1:] ** 2))


def functional_I(y, coeffs: SLCoefficients) -> float:
    yi = _interior(y, coeffs.n_intervals)
    return float(np.sum(coeffs.r[1:-1] * yi**2))


def grad_J(y, coeffs: SLCoefficients) -> np.ndarray:
    """Gradient of ``J`` with respect to the interior values.

    Differentiating the squared backward differences and summing by parts
    gives ``2 * (forward(p * backward(y)) + q y)``.
    """
    return 2.0 * sl_operator(_interior(y, coeffs.n_intervals), coeffs)


def grad_I(y, coeffs: SLCoefficients) -> np.ndarray:
    return 2.0 * coeffs.r[1:-1] * _interior(y, coeffs.n_intervals)


def rayleigh(y, coeffs: SLCoefficients) -> float:
    denom = functional_I(y, coeffs)
    if denom == 0.0:
        raise DomainError("Rayleigh quotient undefined for y = 0")
    return functional_J(y, coeffs) / denom


def sphere_descent(
    apply_a: Callable[[np.ndarray], np.ndarray],
    weight: np.ndarray,
    y0: np.ndarray,
    maximize: bool = False,
    opts: RayleighOptions | None = None,
) -> tuple[np.ndarray, float, int]:
    """Projected gradient for ``y^T A y`` on the sphere ``y^T W y = 1``.

    ``apply_a`` evaluates the symmetric map ``y -> A y``. Each step moves
    along the (negated, when minimizing) gradient of the Rayleigh quotient,
    renormalizes back onto the sphere, and backtracks by halving until the
    Armijo condition holds. The change in the quotient is evaluated from the
    quadratic expansion along the step, which avoids cancellation once the
    iterate is close to an eigenvector.

    Returns ``(y, value, iterations)`` with ``y^T W y = 1``.

    Raises
    ------
    ConvergenceError
        If ``opts.max_iter`` iterations pass without meeting the tolerances.
    """
    opts = opts or RayleighOptions()
    weight = np.asarray(weight, dtype=float)
    sign = -1.0 if maximize else 1.0

    y = np.asarray(y0, dtype=float)
    y = y / np.sqrt(np.dot(y, weight * y))
    ay = apply_a(y)
    rho = float(np.dot(y, ay))
    step = opts.initial_step
    last_change = np.inf

    for it in range(1, opts.max_iter + 1):
        grad = 2.0 * (ay - rho * weight * y)
        gnorm2 = float(np.dot(grad, grad))
        scale = max(1.0, abs(rho))
        if last_change <= opts.tol * scale and np.sqrt(gnorm2) <= opts.grad_tol * scale:
            return y, rho, it - 1

        d = -sign * grad
        ad = apply_a(d)
        dad, dwd = float(np.dot(d, ad)), float(np.dot(d, weight * d))
        dwy = float(np.dot(d, weight * y))
        step = min(2.0 * step, 1e12)
        while True:
            # R(y + t d) - R(y) with y^T W y = 1 and d^T (Ay - rho W y) = -sign |g|^2 / 2
            denom = 1.0 + 2.0 * step * dwy + step * step * dwd
            delta = (-sign * step * gnorm2 + step * step * (dad - rho * dwd)) / denom
            if sign * delta <= -opts.armijo * step * gnorm2 or step < 1e-300:
                break
            step *= 0.5
        if step < 1e-300:
            raise ConvergenceError("line search failed to decrease the Rayleigh quotient", it, y)

        z = y + step * d
        z = z / np.sqrt(np.dot(z, weight * z))
        az = apply_a(z)
        rho_new = float(np.dot(z, az))
        last_change = abs(delta)
        y, ay, rho = z, az, rho_new

    raise ConvergenceError("projected gradient did not converge", opts.max_iter, y)


def _sine_start(m: int) -> np.ndarray:
    k = np.arange(1, m + 1)
    return np.sin(np.pi * k / (m + 1))


def _optimize_rayleigh(coeffs, opts, maximize, normalization):
    if normalization not in _NORMALIZATIONS:
        raise DomainError(f"normalization must be one of {_NORMALIZATIONS}, got {normalization!r}")
    r = np.array(coeffs.r[1:-1])
    y0 = _sine_start(coeffs.size)
    if maximize:
        # the sine profile is (nearly) orthogonal to the top mode; tilt it
        y0 = y0 * (-1.0) ** np.arange(coeffs.size)
    y, value, _ = sphere_descent(lambda v: sl_operator(v, coeffs), r, y0, maximize, opts)
    if normalization == "plain_unit":
        y = y / np.linalg.norm(y)
    return _fix_signs(y[:, None])[:, 0], value


def minimize_rayleigh(
    coeffs: SLCoefficients,
    opts: RayleighOptions | None = None,
    normalization: Normalization = "weighted_unit",
) -> tuple[np.ndarray, float]:
    """Minimize ``J`` on ``I[y] = 1``; the minimum value is the smallest eigenvalue."""
    return _optimize_rayleigh(coeffs, opts, False, normalization)


def maximize_rayleigh(
    coeffs: SLCoefficients,
    opts: RayleighOptions | None = None,
    normalization: Normalization = "weighted_unit",
) -> tuple[np.ndarray, float]:
    """Maximize ``J`` on ``I[y] = 1``; the maximum value is the largest eigenvalue."""
    return _optimize_rayleigh(coeffs, opts, True, normalization)


def kkt_residual(y, lam: float, coeffs: SLCoefficients) -> np.ndarray:
    """First-order conditions ``dJ/dy_k - lam dI/dy_k`` followed by ``sum y_k^2 - 1``."""
    yi = _interior(y, coeffs.n_intervals)
    stationarity = grad_J(yi, coeffs) - lam * grad_I(yi, coeffs)
    return np.append(stationarity, np.sum(yi**2) - 1.0)
