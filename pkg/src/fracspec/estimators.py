"""scikit-learn style wrappers.

Rows of ``X`` are functions sampled at the interior nodes of a uniform grid,
so ``n_features`` fixes the grid size ``N = n_features + 1``. Fitting solves
the Sturm-Liouville eigenproblem on that grid; transforming projects profiles
onto the eigenbasis (much like PCA projects onto principal axes) or evolves
them under fractional diffusion.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_choice, check_order, check_positive_int, check_profiles
from .continuous import ContinuousSLProblem, method2_solve, method3_solve
from .diffusion import DEFAULT_Z_MAX, DiffusionField, DiffusionProblem, solve_diffusion
from .discrete import SLCoefficients, expand, reconstruct, solve_discrete
from .exceptions import DomainError
from .fracops import UniformGrid

__all__ = ["FractionalSLTransformer", "FractionalDiffusionTransformer"]

_METHODS = ("discrete", "matrix", "kkt")
_NORMALIZATIONS = ("weighted_unit", "plain_unit")


def _build_grid(n_intervals: int, a: float, h: float | None, method: str) -> UniformGrid:
    # discrete problems default to unit steps, continuous ones to [a, a + 1]
    if h is None:
        h = 1.0 if method == "discrete" else 1.0 / n_intervals
    return UniformGrid.from_step(n_intervals, h, a)


def _solve(method, alpha, grid, p, q, r, normalization):
    if method == "discrete":
        coeffs = SLCoefficients(grid, p, 0.0 if q is None else q, r, alpha)
        return solve_discrete(coeffs, normalization), coeffs
    problem = ContinuousSLProblem(alpha, grid.n_intervals, grid.a, grid.b, p, q, r)
    if method == "kkt":
        if not problem.is_unit or grid.a != 0.0 or grid.b != 1.0:
            raise DomainError("method='kkt' needs p = r = 1, q = 0 on [0, 1]")
        return method2_solve(alpha, grid.n_intervals), problem
    return method3_solve(problem), problem


class FractionalSLTransformer(TransformerMixin, BaseEstimator):
    """Project profiles onto fractional Sturm-Liouville eigenfunctions.

    Parameters
    ----------
    alpha : float
        Fractional order, in ``(0, 1]`` for ``method="discrete"`` and in
        ``(1/2, 1]`` otherwise.
    method : {"discrete", "matrix", "kkt"}
        ``"discrete"`` solves the discrete problem on the grid,
        ``"matrix"`` the Grünwald-Letnikov scheme for the continuous
        problem and ``"kkt"`` its constant-coefficient optimality system.
    h : float or None
        Grid step; ``None`` means 1 for ``"discrete"`` and ``1 / N`` otherwise.
    a : float
        Left endpoint.
    p, q, r : None, scalar, callable or array of N + 1 node values
        Coefficients; ``None`` means 1, 0 and 1.
    normalization : {"weighted_unit", "plain_unit"}
        Only used by ``"discrete"``.
    n_components : int or None
        Number of eigenfunctions kept (all ``N - 1`` when ``None``).

    Attributes
    ----------
    eigenvalues_ : ndarray of shape (n_components,)
    components_ : ndarray of shape (n_components, n_features)
        Eigenfunctions at the interior nodes, one per row.
    spectrum_ : Spectrum
        Full spectrum returned by the solver.
    grid_ : UniformGrid
    n_features_in_ : int
    """

    def __init__(
        self,
        alpha=0.5,
        method="discrete",
        h=None,
        a=0.0,
        p=None,
        q=None,
        r=None,
        normalization="weighted_unit",
        n_components=None,
    ):
        self.alpha = alpha
        self.method = method
        self.h = h
        self.a = a
        self.p = p
        self.q = q
        self.r = r
        self.normalization = normalization
        self.n_components = n_components

    def fit(self, X, y=None):
        X = check_profiles(X)
        method = check_choice(self.method, "method", _METHODS)
        lower = 0.0 if method == "discrete" else 0.5
        alpha = check_order(self.alpha, "alpha", lower=lower)
        check_choice(self.normalization, "normalization", _NORMALIZATIONS)
        k = check_positive_int(self.n_components, "n_components")
        n_features = X.shape[1]
        if k is not None and k > n_features:
            raise ValueError(f"n_components={k} exceeds n_features={n_features}")

        grid = _build_grid(n_features + 1, self.a, self.h, method)
        spectrum, problem = _solve(method, alpha, grid, self.p, self.q, self.r, self.normalization)
        k = n_features if k is None else k
        self.spectrum_ = spectrum
        self.problem_ = problem
        self.grid_ = grid
        self.eigenvalues_ = np.array(spectrum.eigenvalues[:k])
        self.components_ = np.array(spectrum.eigenvectors[:, :k].T)
        self.n_components_ = k
        self.n_features_in_ = n_features
        return self

    def transform(self, X):
        """Expansion coefficients ``<x, y_k>_r / <y_k, y_k>_r`` for each row."""
        check_is_fitted(self, "spectrum_")
        X = check_profiles(X, self.n_features_in_, owner=type(self).__name__)
        coef = expand(X.T, self.spectrum_).values
        return coef[: self.n_components_].T

    def inverse_transform(self, X):
        """Rebuild interior profiles from (possibly truncated) coefficients."""
        check_is_fitted(self, "spectrum_")
        X = check_profiles(X, self.n_components_, owner=type(self).__name__)
        full = np.zeros((len(self.spectrum_), X.shape[0]))
        full[: self.n_components_] = X.T
        return reconstruct(full, self.spectrum_).T


class FractionalDiffusionTransformer(TransformerMixin, BaseEstimator):
    """Map initial profiles to the fractional diffusion solution at time ``t``.

    Parameters
    ----------
    alpha : float
        Spatial order; ``spatial="matrix"`` requires ``1/2 < alpha <= 1``.
    beta : float
        Time-fractional order in ``(0, 1]``.
    t : float
        Evaluation time used by :meth:`transform`.
    n_terms : int or None
        Series truncation; ``None`` means ``min(10, N - 1)``.
    spatial : {"matrix", "discrete"}
        Eigen-solver for the spatial operator.
    h, a, p, q, r :
        Grid and coefficients as in :class:`FractionalSLTransformer`.
    z_max : float
        Largest Mittag-Leffler argument magnitude accepted.
    """

    def __init__(
        self,
        alpha=0.75,
        beta=0.5,
        t=0.1,
        n_terms=None,
        spatial="matrix",
        h=None,
        a=0.0,
        p=None,
        q=None,
        r=None,
        z_max=DEFAULT_Z_MAX,
    ):
        self.alpha = alpha
        self.beta = beta
        self.t = t
        self.n_terms = n_terms
        self.spatial = spatial
        self.h = h
        self.a = a
        self.p = p
        self.q = q
        self.r = r
        self.z_max = z_max

    def fit(self, X, y=None):
        X = check_profiles(X)
        spatial = check_choice(self.spatial, "spatial", ("matrix", "discrete"))
        alpha = check_order(self.alpha, "alpha", lower=0.0 if spatial == "discrete" else 0.5)
        check_order(self.beta, "beta")
        check_positive_int(self.n_terms, "n_terms")
        if not np.isfinite(self.t) or self.t < 0:
            raise DomainError(f"t must be finite and nonnegative, got {self.t}")
        grid = _build_grid(X.shape[1] + 1, self.a, self.h, spatial)
        self.spectrum_, self.problem_ = _solve(
            spatial, alpha, grid, self.p, self.q, self.r, "weighted_unit"
        )
        self.grid_ = grid
        self.n_features_in_ = X.shape[1]
        return self

    def evolve(self, initial, times) -> DiffusionField:
        """Full solution for one initial profile (interior values or callable)."""
        check_is_fitted(self, "spectrum_")
        problem = DiffusionProblem(
            self.beta, self.problem_, initial, tuple(times), self.n_terms, self.z_max
        )
        return solve_diffusion(problem, self.spectrum_)

    def transform(self, X):
        """``u(t)`` at the interior nodes for each initial profile in ``X``."""
        check_is_fitted(self, "spectrum_")
        X = check_profiles(X, self.n_features_in_, owner=type(self).__name__)
        out = np.empty_like(X)
        for i, row in enumerate(X):
            out[i] = self.evolve(row, (self.t,)).values[0, 1:-1]
        return out
