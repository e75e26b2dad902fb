"""Fractional Sturm-Liouville eigenproblems and fractional diffusion.

Grünwald-Letnikov differences turn the fractional operators into dense
triangular matrices. The resulting symmetric eigenproblems are solved by
Jacobi rotations or by constrained minimization of the Rayleigh quotient,
and the eigenpairs feed a Mittag-Leffler series for fractional diffusion.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .continuous import (
    AugmentedDensity,
    ContinuousSLProblem,
    caputo_left_approx,
    caputo_right_approx,
    euler_lagrange_residual,
    gl_sl_matrix,
    method1_solve,
    method2_matrix,
    method2_solve,
    method3_matrix,
    method3_solve,
)
from .diffusion import (
    DiffusionField,
    DiffusionProblem,
    mittag_leffler,
    solve_diffusion,
    weighted_inner,
)
from .discrete import (
    ExpansionCoefficients,
    RayleighOptions,
    SLCoefficients,
    Spectrum,
    expand,
    functional_I,
    functional_J,
    kkt_residual,
    maximize_rayleigh,
    minimize_rayleigh,
    rayleigh,
    reconstruct,
    sl_operator,
    solve_discrete,
)
from .eigensolver import EigenResult, SymmetricMatrix, jacobi_eigen
from .estimators import FractionalDiffusionTransformer, FractionalSLTransformer
from .exceptions import (
    ConvergenceError,
    DomainError,
    FormatError,
    FracSpecError,
    PreconditionError,
    ShapeError,
    SingularityError,
)
from .fracops import (
    GLWeights,
    GridFunction,
    UniformGrid,
    backward_diff,
    backward_diff_all,
    forward_diff,
    forward_diff_all,
    gl_matrix,
    gl_weights,
    summation_by_parts_residual,
)
from .io import load_coefficients, write_coefficients

import types as _types

__all__ = sorted(
    name
    for name, obj in globals().items()
    if not name.startswith("_") and name != "annotations" and not isinstance(obj, _types.ModuleType)
)
