"""Mittag-Leffler evaluation and eigenfunction-series solutions of fractional diffusion.

The solution of the space-time fractional diffusion problem with homogeneous
Dirichlet data is the series

    u(t, x) = sum_k <y_k, f> E_beta(-lambda_k t^beta) y_k(x),

where ``(lambda_k, y_k)`` are Sturm-Liouville eigenpairs normalized in the
``r``-weighted L2 inner product and ``E_beta`` is the one-parameter
Mittag-Leffler function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import rgamma

from .continuous import ContinuousSLProblem, method3_solve
from .discrete import SLCoefficients, Spectrum, _node_samples, solve_discrete
from .exceptions import ConvergenceError, DomainError, PreconditionError, ShapeError
from .fracops import GridFunction, UniformGrid

__all__ = [
    "SERIES_RADIUS",
    "DEFAULT_Z_MAX",
    "mittag_leffler",
    "mittag_leffler_series",
    "mittag_leffler_asymptotic",
    "weighted_inner",
    "DiffusionProblem",
    "DiffusionField",
    "solve_diffusion",
]

SERIES_RADIUS = 5.0
DEFAULT_Z_MAX = 1.0e4
_MAX_TERMS = 1000


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    return beta


def _series_with_peak(beta: float, z: float, max_terms: int) -> tuple[float, float]:
    terms = [1.0]
    peak = prev = 1.0
    logz = math.log(abs(z)) if z != 0.0 else -math.inf
    sign = -1.0 if z < 0 else 1.0
    for n in range(1, max_terms):
        arg = beta * n + 1.0
        log_mag = n * logz - math.lgamma(arg)
        if log_mag > 700.0:
            raise ConvergenceError(f"Mittag-Leffler series overflows at z={z}", n)
        if arg < 170.0 and -700.0 < n * logz < 700.0:
            term = z**n / math.gamma(arg)
        else:
            term = sign**n * math.exp(log_mag)
        terms.append(term)
        mag = abs(term)
        peak = max(peak, mag)
        # term magnitudes are unimodal in n, so past the peak they only shrink
        if mag <= 1e-16 * peak and mag <= prev:
            return math.fsum(terms), peak
        prev = mag
    raise ConvergenceError(f"Mittag-Leffler series did not converge at z={z}", max_terms)


def mittag_leffler_series(beta: float, z: float, max_terms: int = _MAX_TERMS) -> float:
    """Power series ``sum z^n / Gamma(beta n + 1)`` summed with ``math.fsum``."""
    return _series_with_peak(_check_beta(beta), float(z), max_terms)[0]


def mittag_leffler_asymptotic(beta: float, z: float, terms: int = 10) -> float:
    """Algebraic expansion ``-sum_{k=1}^{terms} z^-k / Gamma(1 - beta k)`` for large negative ``z``.

    Exponentially small contributions are dropped, so this is only useful
    for ``beta`` well below 1 and large ``|z|``.
    """
    beta = _check_beta(beta)
    if z >= 0:
        raise DomainError("the asymptotic expansion is used for negative arguments only")
    return -math.fsum(z ** (-k) * float(rgamma(1.0 - beta * k)) for k in range(1, terms + 1))


def _ml_negative_integral(beta: float, x: float) -> float:
    """``E_beta(-x)`` for ``0 < beta < 1``, ``x > 0`` via its spectral integral.

    ``E_beta(-x) = sin(beta pi) / (beta pi) * int_0^inf x exp(-u^(1/beta)) /
    ((u - p)^2 + w^2) du`` with ``p = -x cos(beta pi)`` and ``w = x sin(beta pi)``.
    As ``beta -> 1`` the kernel narrows to a spike of width ``w`` at ``p``, so
    the integral is written in the offset ``v = u - p``, which keeps ``v`` exact
    near the spike. Within ``|v| <= d`` the substitution ``v = w tan(theta)``
    absorbs the spike, leaving ``(1 / (beta pi)) int exp(-(p + w tan(theta))^(1/beta)) d theta``.
    Elsewhere the integral is taken in ``v``, with breakpoints accumulating
    geometrically towards the spike.
    """
    # 1 - beta is exact, so the reflected angle avoids cancellation near beta = 1
    gap = (1.0 - beta) * math.pi
    p = x * math.cos(gap)
    w = x * math.sin(gap)
    inv = 1.0 / beta

    def decay(v):
        return math.exp(-(max(p + v, 0.0) ** inv))

    def kernel_form(v):
        return x * decay(v) / (v * v + w * w)

    def angle_form(theta):
        return decay(w * math.tan(theta))

    def quad(f, a, b):
        return integrate.quad(f, a, b, epsabs=0.0, epsrel=1e-12, limit=400)[0]

    # exp(-u^(1/beta)) < 1e-300 beyond this point
    top = 700.0**beta - p
    # where the decay factor turns over
    marks = {1.0 - p, 10.0**beta - p, 100.0**beta - p}
    parts = []
    if 0.0 < p and top > 0.0:
        d = min(0.5 * p, 100.0 * w)
        hi = min(d, top)
        spike = quad(angle_form, -math.atan(d / w), math.atan(hi / w))
        parts.append(spike / (beta * math.pi))
        outer = [(-p, -d), (hi, top)]
        step = d
        while step < p:
            marks.update((-step, step))
            step *= 4.0
    else:
        outer = [(-p, top)]
    pre = math.sin(gap) / (beta * math.pi)
    for a, b in outer:
        if a >= b:
            continue
        breaks = [a] + sorted(m for m in marks if a < m < b) + [b]
        parts += [pre * quad(kernel_form, s, t) for s, t in zip(breaks[:-1], breaks[1:])]
    return math.fsum(parts)


def mittag_leffler(beta: float, z: float, z_max: float = DEFAULT_Z_MAX) -> float:
    """One-parameter Mittag-Leffler function ``E_beta(z)`` for real ``z``.

    The power series is used for ``z > 0`` and for ``-5 <= z < 0`` unless
    cancellation in it is severe. Other negative arguments use ``exp(z)``
    when ``beta = 1`` and the integral representation otherwise.

    Raises
    ------
    DomainError
        If ``|z| > z_max`` or ``beta`` is outside ``(0, 1]``.
    ConvergenceError
        If the series needs more than 1000 terms (large positive ``z``).
    """
    beta = _check_beta(beta)
    z = float(z)
    if not math.isfinite(z) or abs(z) > z_max:
        raise DomainError(f"Mittag-Leffler argument {z} outside [-{z_max}, {z_max}]")
    if z == 0.0:
        return 1.0
    if z > 0.0:
        return _series_with_peak(beta, z, _MAX_TERMS)[0]
    if beta == 1.0:
        return math.exp(z) if z < -SERIES_RADIUS else _series_with_peak(beta, z, _MAX_TERMS)[0]
    if z >= -SERIES_RADIUS:
        try:
            value, peak = _series_with_peak(beta, z, _MAX_TERMS)
        except ConvergenceError:
            pass
        else:
            # alternating terms: Gamma rounding is amplified by peak / |value|
            if peak <= 1e2 * abs(value):
                return value
    return _ml_negative_integral(beta, -z)


def _as_grid_function(f, grid: UniformGrid, name: str) -> GridFunction:
    if isinstance(f, GridFunction):
        if f.grid != grid:
            raise ShapeError(f"{name} is defined on a different grid")
        return f
    if callable(f):
        return GridFunction.from_callable(grid, f)
    arr = np.asarray(f, dtype=float)
    if arr.shape == (grid.n_intervals - 1,):
        return GridFunction.from_interior(grid, arr)
    return GridFunction(grid, arr)


def weighted_inner(f: GridFunction, g: GridFunction, r_alpha=None) -> float:
    """Trapezoidal approximation of ``int r_alpha f g dx`` on the common grid."""
    if f.grid != g.grid:
        raise ShapeError("f and g must share the same grid")
    r = _node_samples(r_alpha, f.grid, "r_alpha")
    vals = r * f.values * g.values
    return float(f.grid.h * (np.sum(vals) - 0.5 * (vals[0] + vals[-1])))


@dataclass(frozen=True)
class DiffusionProblem:
    """Data for the fractional diffusion problem.

    ``spatial`` is either a :class:`ContinuousSLProblem` (solved by the
    Grünwald-Letnikov matrix scheme) or :class:`SLCoefficients` (solved as a
    discrete problem on its own grid). ``truncation`` defaults to
    ``min(10, N - 1)`` terms.
    """

    beta: float
    spatial: ContinuousSLProblem | SLCoefficients
    initial: object
    times: tuple = (0.0,)
    truncation: int | None = None
    z_max: float = DEFAULT_Z_MAX

    def __post_init__(self):
        object.__setattr__(self, "beta", _check_beta(self.beta))
        times = np.atleast_1d(np.asarray(self.times, dtype=float))
        if times.ndim != 1 or np.any(times < 0) or np.any(np.diff(times) < 0):
            raise DomainError("times must be a nonnegative ascending sequence")
        times.setflags(write=False)
        object.__setattr__(self, "times", times)
        n = self.grid.n_intervals
        k = min(10, n - 1) if self.truncation is None else int(self.truncation)
        if not 1 <= k <= n - 1:
            raise DomainError(f"truncation must lie in 1..{n - 1}, got {k}")
        object.__setattr__(self, "truncation", k)
        f = _as_grid_function(self.initial, self.grid, "initial")
        scale = max(1.0, float(np.abs(f.values).max()))
        if abs(f.values[0]) > 1e-12 * scale or abs(f.values[-1]) > 1e-12 * scale:
            raise PreconditionError("initial profile must vanish at both endpoints")
        values = np.array(f.values)
        values[0] = values[-1] = 0.0
        object.__setattr__(self, "initial", GridFunction(self.grid, values))

    @property
    def grid(self) -> UniformGrid:
        return self.spatial.grid

    @property
    def r_nodes(self) -> np.ndarray:
        if isinstance(self.spatial, ContinuousSLProblem):
            return self.spatial.r_nodes
        return self.spatial.r


@dataclass(frozen=True)
class DiffusionField:
    """``values[i, j] = u(times[i], x_j)`` with the boundary columns exactly zero."""

    times: np.ndarray
    grid: UniformGrid
    values: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)
    eigenfunctions: np.ndarray = field(repr=False)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes


def _spatial_spectrum(spatial) -> Spectrum:
    if isinstance(spatial, ContinuousSLProblem):
        return method3_solve(spatial)
    if isinstance(spatial, SLCoefficients):
        return solve_discrete(spatial)
    raise TypeError(f"unsupported spatial problem {type(spatial).__name__}")


def solve_diffusion(problem: DiffusionProblem, spectrum: Spectrum | None = None) -> DiffusionField:
    """Evaluate the truncated eigenfunction series on the grid at ``problem.times``.

    A precomputed ``spectrum`` of ``problem.spatial`` may be passed to skip
    the eigen-solve.
    """
    spectrum = spectrum if spectrum is not None else _spatial_spectrum(problem.spatial)
    grid = problem.grid
    k = problem.truncation
    r = problem.r_nodes
    lam = np.array(spectrum.eigenvalues[:k])

    t_max = float(problem.times[-1]) if problem.times.size else 0.0
    worst = float(np.max(np.abs(lam))) * t_max**problem.beta
    if worst > problem.z_max:
        raise DomainError(
            f"Mittag-Leffler argument {-worst:.6g} exceeds z_max={problem.z_max:g}; "
            "use fewer series terms or an earlier final time"
        )

    modes = np.zeros((k, grid.size))
    modes[:, 1:-1] = spectrum.eigenvectors[:, :k].T
    coef = np.empty(k)
    for i in range(k):
        yi = GridFunction(grid, modes[i])
        modes[i] /= math.sqrt(weighted_inner(yi, yi, r))
        coef[i] = weighted_inner(GridFunction(grid, modes[i]), problem.initial, r)

    values = np.zeros((problem.times.size, grid.size))
    for ti, t in enumerate(problem.times):
        decay = np.array(
            [mittag_leffler(problem.beta, -lk * t**problem.beta, problem.z_max) for lk in lam]
        )
        values[ti] = (coef * decay) @ modes
    values[:, 0] = values[:, -1] = 0.0
    return DiffusionField(problem.times, grid, values, lam, coef, modes)
