"""Command-line entry point.

Examples::

    fracspec discrete-sl --alpha 0.25 --n 4 --h 1 --profile unit
    fracspec continuous-sl --method matrix --alpha 0.75 --n 20
    fracspec diffusion --alpha 0.75 --beta 0.5 --n 100 --times 0 0.1 1 --output u.csv

Exit status is 0 on success, 2 for invalid arguments and 1 when a solver fails.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .continuous import ContinuousSLProblem, method1_solve, method2_solve, method3_solve
from .diffusion import DiffusionProblem, solve_diffusion
from .discrete import SLCoefficients, solve_discrete
from .exceptions import FracSpecError
from .fracops import UniformGrid, gl_weights
from .io import (
    diffusion_table,
    eigenfunction_table,
    eigenvalue_table,
    fmt,
    load_coefficients,
)

OUTPUT_DIR_ENV = "FRACSPEC_OUTPUT_DIR"

COMMANDS = ("coeffs", "discrete-sl", "continuous-sl", "diffusion")
METHODS = {"direct": "method 1", "kkt": "method 2", "matrix": "method 3"}
INITIAL_PROFILES = {
    "sine": lambda s: np.sin(np.pi * s),
    "parabola": lambda s: 4.0 * s * (1.0 - s),
}


class UsageError(Exception):
    """Invalid or inconsistent command-line configuration."""


@dataclass
class RunConfig:
    command: str
    alpha: float = 0.5
    beta: float = 1.0
    n: int | None = None
    a: float = 0.0
    b: float | None = None
    h: float | None = None
    coeff_profile: str = "unit"
    coeff_file: str | None = None
    method: str = "matrix"
    normalization: str = "weighted"
    output_format: str = "csv"
    output_path: str | None = None
    num_eigenfunctions: int = 0
    times: list[float] = field(default_factory=lambda: [0.0])
    trunc_k: int | None = None
    initial: str = "sine"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.coeff_profile == "file" and not self.coeff_file:
            raise UsageError("--profile file requires --coeff-file")
        if self.coeff_profile == "unit" and self.n is None:
            raise UsageError("--n is required with --profile unit")
        if self.n is not None and self.n < (0 if self.command == "coeffs" else 2):
            raise UsageError(f"--n must be >= 2, got {self.n}")
        if self.command == "discrete-sl" and not 0.0 < self.alpha <= 1.0:
            raise UsageError(f"--alpha must lie in (0, 1] for discrete-sl, got {self.alpha}")
        if self.command in ("continuous-sl", "diffusion") and not 0.5 < self.alpha <= 1.0:
            raise UsageError(f"--alpha must lie in (1/2, 1] for {self.command}, got {self.alpha}")
        if self.num_eigenfunctions < 0:
            raise UsageError("--num-eigenfunctions must be nonnegative")
        if self.num_eigenfunctions and self.output_path is None:
            raise UsageError("--num-eigenfunctions needs --output to name the eigenfunction file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracspec",
        description="Fractional Sturm-Liouville eigenproblems and fractional diffusion.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_alpha=True):
        if need_alpha:
            p.add_argument("--alpha", type=float, required=True, help="fractional order")
        p.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", dest="output_path", default=None,
                       help=f"output file (default stdout); relative paths go under ${OUTPUT_DIR_ENV} if set")

    def coefficients(p):
        p.add_argument("--n", type=int, default=None, help="number of intervals N")
        p.add_argument("--profile", dest="coeff_profile", choices=("unit", "file"), default="unit",
                       help="unit: p=1, q=0, r=1; file: read --coeff-file")
        p.add_argument("--coeff-file", default=None, help="'# p q r' table with N+1 rows")
        p.add_argument("--num-eigenfunctions", type=int, default=0)

    p = sub.add_parser("coeffs", help="Grunwald-Letnikov weights and partial sums")
    common(p)
    p.add_argument("--n", type=int, required=True, help="highest weight index m")

    p = sub.add_parser("discrete-sl", help="discrete fractional Sturm-Liouville spectrum")
    common(p)
    coefficients(p)
    p.add_argument("--h", type=float, default=1.0, help="grid step")
    p.add_argument("--a", type=float, default=0.0, help="left endpoint")
    p.add_argument("--normalization", choices=("weighted", "plain"), default="weighted")

    p = sub.add_parser("continuous-sl", help="continuous problem via methods 1-3")
    common(p)
    coefficients(p)
    p.add_argument("--method", choices=tuple(METHODS), default="matrix")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)

    p = sub.add_parser("diffusion", help="eigenfunction-series solution of fractional diffusion")
    common(p)
    coefficients(p)
    p.add_argument("--beta", type=float, required=True, help="time-fractional order")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--times", type=float, nargs="+", default=[0.0])
    p.add_argument("--trunc-k", type=int, default=None, help="series terms (default min(10, N-1))")
    p.add_argument("--initial", choices=tuple(INITIAL_PROFILES), default="sine",
                   help="initial profile on [a, b], scaled to the unit interval")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    known = RunConfig.__dataclass_fields__
    values = {k: v for k, v in vars(args).items() if k in known}
    return RunConfig(**values)


def _resolve_output(path: str | None) -> Path | None:
    if path is None:
        return None
    out = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not out.is_absolute():
        out = Path(base) / out
    return out


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _eigvec_path(path: Path, output_format: str) -> Path:
    stem = path.name[: -len(path.suffix)] if path.suffix else path.name
    return path.with_name(f"{stem}.eigvecs.{output_format}")


def _coefficient_samples(config: RunConfig):
    if config.coeff_profile == "file":
        table = load_coefficients(config.coeff_file)
        if config.n is not None and config.n != table.n_intervals:
            raise UsageError(
                f"--n {config.n} disagrees with {table.n_intervals + 1} rows in {config.coeff_file}"
            )
        return table.n_intervals, table.p, table.q, table.r
    return config.n, None, None, None


def _padded_modes(spectrum, count: int) -> np.ndarray:
    count = min(count, len(spectrum))
    vecs = spectrum.eigenvectors[:, :count].T
    return np.pad(vecs, [(0, 0), (1, 1)])


def _run_coeffs(config: RunConfig, out: Path | None) -> None:
    w = gl_weights(config.alpha, config.n)
    sums = w.partial_sums()
    if config.output_format == "csv":
        lines = ["k,weight,partial_sum"]
        lines += [f"{k},{fmt(v)},{fmt(s)}" for k, (v, s) in enumerate(zip(w.weights, sums))]
        _emit("\n".join(lines) + "\n", out)
    else:
        import json

        payload = {
            "alpha": config.alpha,
            "weights": [float(fmt(v)) for v in w.weights],
            "partial_sums": [float(fmt(s)) for s in sums],
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", out)


def _run_discrete(config: RunConfig, out: Path | None) -> None:
    n, p, q, r = _coefficient_samples(config)
    grid = UniformGrid.from_step(n, config.h, config.a)
    coeffs = SLCoefficients(grid, p, 0.0 if q is None else q, r, config.alpha)
    norm = "weighted_unit" if config.normalization == "weighted" else "plain_unit"
    spectrum = solve_discrete(coeffs, norm)
    meta = {"command": config.command, "alpha": config.alpha, "n": n, "h": config.h,
            "normalization": norm}
    _emit(eigenvalue_table(spectrum.eigenvalues, config.output_format, meta), out)
    if config.num_eigenfunctions:
        modes = _padded_modes(spectrum, config.num_eigenfunctions)
        _emit(eigenfunction_table(grid.nodes, modes, config.output_format),
              _eigvec_path(out, config.output_format))


def _continuous_problem(config: RunConfig) -> ContinuousSLProblem:
    n, p, q, r = _coefficient_samples(config)
    return ContinuousSLProblem(config.alpha, n, config.a, config.b, p, q, r)


def _run_continuous(config: RunConfig, out: Path | None) -> None:
    problem = _continuous_problem(config)
    n = problem.n_intervals
    if config.method == "direct":
        y, value = method1_solve(problem)
        values = np.array([value])
        modes = np.pad(y, 1)[None, :]
    elif config.method == "kkt":
        if not problem.is_unit or problem.a != 0.0 or problem.b != 1.0:
            raise UsageError("--method kkt supports only --profile unit on [0, 1]")
        spectrum = method2_solve(problem.alpha, n)
        values = spectrum.eigenvalues
        modes = _padded_modes(spectrum, config.num_eigenfunctions)
    else:
        spectrum = method3_solve(problem)
        values = spectrum.eigenvalues
        modes = _padded_modes(spectrum, config.num_eigenfunctions)
    meta = {"command": config.command, "method": config.method, "alpha": config.alpha,
            "n": n, "a": problem.a, "b": problem.b}
    _emit(eigenvalue_table(values, config.output_format, meta), out)
    if config.num_eigenfunctions:
        modes = modes[: config.num_eigenfunctions]
        _emit(eigenfunction_table(problem.grid.nodes, modes, config.output_format),
              _eigvec_path(out, config.output_format))


def _run_diffusion(config: RunConfig, out: Path | None) -> None:
    problem = _continuous_problem(config)
    shape = INITIAL_PROFILES[config.initial]
    a, b = problem.a, problem.b
    initial = lambda x: shape((x - a) / (b - a))  # noqa: E731
    diff = DiffusionProblem(config.beta, problem, initial, tuple(config.times), config.trunc_k)
    field_ = solve_diffusion(diff)
    _emit(diffusion_table(field_.times, field_.nodes, field_.values, config.output_format), out)
    if config.num_eigenfunctions:
        modes = field_.eigenfunctions[: config.num_eigenfunctions]
        _emit(eigenfunction_table(field_.nodes, modes, config.output_format),
              _eigvec_path(out, config.output_format))


_RUNNERS = {
    "coeffs": _run_coeffs,
    "discrete-sl": _run_discrete,
    "continuous-sl": _run_continuous,
    "diffusion": _run_diffusion,
}


def run(config: RunConfig) -> int:
    """Execute ``config``; returns the process exit status."""
    try:
        config.validate()
        _RUNNERS[config.command](config, _resolve_output(config.output_path))
    except UsageError as exc:
        print(f"fracspec: usage error: {exc}", file=sys.stderr)
        return 2
    except (FracSpecError, OSError) as exc:
        print(f"fracspec: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
