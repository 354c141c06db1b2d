"""Command-line engine: fit, interpolate, export bases, benchmark and self-check.

Exit codes: 0 ok, 1 check failure, 2 input error, 3 non-convergence (the
partial fit is still written and flagged in its summary).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from src.basis import FFBasisSpec
from src.data import load_dataset
from src.dbsplines import cond_benchmark, dbs_eval, dbs_values_dense, dbs_values_sparse, natural_basis
from src.functionals import tv_jump_sum
from src.grid import DesignGrid
from src.interpolate import DiscreteSplineFit, interp_implicit
from src.solvers import (
    FitResult,
    SolverConfig,
    bw_filter,
    natural_constraint_residual,
    natural_trend_filter,
    smoothing_spline,
    trend_filter,
)
from src.utils.config import NumericsConfig
from src.utils.errors import DomainError, FactorizationError, UnsupportedError
from src.utils.io import read_config, read_json, write_csv, write_json
from src.utils.logs import kv, setup_logging

from .checks import SUITES, run_suite
from .metrics import r_squared, relative_deviation, rss

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = Path(__file__).with_name("config.yaml")
METHODS = ("tf", "ntf", "bw", "bw-unweighted", "ss")
EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_NOT_CONVERGED = 0, 1, 2, 3


def _load_config(path: Optional[str]) -> Dict[str, Any]:
    if path is None:
        return read_config(str(DEFAULT_CONFIG)) if DEFAULT_CONFIG.exists() else {}
    if not Path(path).exists():
        raise FileNotFoundError(f"No config file: {path}")
    return read_config(path)


def _output_paths(output: Optional[str], default: str) -> tuple[Path, Path]:
    csv_path = Path(output or default)
    if csv_path.suffix != ".csv":
        csv_path = csv_path.with_suffix(".csv")
    return csv_path, csv_path.with_suffix(".json")


def _read_query_points(path: str) -> np.ndarray:
    df = pd.read_csv(path)
    cols = {str(c).strip().lower(): c for c in df.columns}
    col = cols.get("x", df.columns[0])
    return pd.to_numeric(df[col], errors="coerce").to_numpy(dtype=np.float64)


def _fit_summary(method: str, result: FitResult, grid: DesignGrid, y: np.ndarray, degree: Optional[int],
                 order: Optional[int], cfg: SolverConfig) -> Dict[str, Any]:
    summary: Dict[str, Any] = {
        "method": method,
        "n": grid.n,
        "degree": degree,
        "order": order,
        "lambda": result.lam,
        "objective": result.objective,
        "penalty": result.penalty,
        "kkt_residual": result.kkt_residual,
        "iterations": result.iters,
        "converged": result.converged,
        "partial": not result.converged,
        "df": result.df,
        "rss": rss(y, result.theta_hat),
        "r_squared": r_squared(y, result.theta_hat),
        "a": grid.a,
        "b": grid.b,
    }
    if method in ("tf", "ntf"):
        summary.update({
            "rho": cfg.effective_rho,
            "rho_final": result.extras.get("rho"),
            "mode": cfg.mode if method == "tf" else "standard",
            "active_knots": result.active_set + degree,
            "n_active": result.n_active,
            "penalty_weighted": result.penalty,
            "penalty_jumps": tv_jump_sum(result.theta_hat, grid, degree),
            "r_norm": result.r_norm,
            "s_norm": result.s_norm,
        })
    if method == "ntf":
        summary["constraint_residual"] = result.extras["constraint_residual"]
        summary["boundary_residual"] = result.extras["boundary_residual"]
    summary["x"] = grid.points
    summary["theta_hat"] = result.theta_hat
    return summary


def _verify_fit(method: str, result: FitResult, grid: DesignGrid, y: np.ndarray, degree: Optional[int]) -> list[str]:
    """Independent re-checks of a fit; returns the names of failed checks."""
    failed = []
    recomputed = 0.5 * rss(y, result.theta_hat) + result.lam * result.penalty
    if relative_deviation(recomputed, result.objective) > 1e-8:
        failed.append("objective")
    if method == "ntf":
        scale = max(1.0, float(np.abs(result.theta_hat).max()))
        if natural_constraint_residual(result.theta_hat, grid, degree) > 1e-10 * scale:
            failed.append("natural_constraints")
    if method == "tf" and result.lam > 0:
        penalty_forms = relative_deviation(tv_jump_sum(result.theta_hat, grid, degree), result.penalty)
        if penalty_forms > 1e-10:
            failed.append("penalty_forms")
    return failed


def run_fit(args, cfg: Dict[str, Any]) -> int:
    fit_cfg = cfg.get("fit") or {}
    method = args.method or fit_cfg.get("method", "tf")
    if args.natural and method == "tf":
        method = "ntf"
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}, expected one of {METHODS}")
    degree = int(args.degree if args.degree is not None else fit_cfg.get("degree", 1))
    order = int(args.order if args.order is not None else fit_cfg.get("order", 2))
    solver_cfg = SolverConfig.from_mapping(cfg.get("solver")).with_overrides(
        lam=args.lam, rho=args.rho, max_iter=args.max_iter, tol_primal=args.tol, tol_dual=args.tol,
        polish=args.polish, mode=args.mode,
    )
    numerics = NumericsConfig.from_mapping(cfg.get("numerics"))

    data = load_dataset(args.input)
    grid = data.grid()
    logger.info(kv("USING_PARAMS", scope="fit", method=method, n=grid.n, degree=degree, order=order,
                   lam=solver_cfg.lam, rho=solver_cfg.effective_rho, max_iter=solver_cfg.max_iter,
                   polish=solver_cfg.polish, mode=solver_cfg.mode))

    if method == "tf":
        result = trend_filter(data.y, grid, degree, solver_cfg, numerics)
    elif method == "ntf":
        result = natural_trend_filter(data.y, grid, degree, solver_cfg, numerics)
    elif method == "ss":
        result = smoothing_spline(data.y, grid, order, solver_cfg.lam)
    else:
        result = bw_filter(data.y, grid, order, solver_cfg.lam, weighted=(method == "bw"))

    uses_degree = method in ("tf", "ntf")
    summary = _fit_summary(method, result, grid, data.y, degree if uses_degree else None,
                           None if uses_degree else order, solver_cfg)
    csv_path, json_path = _output_paths(args.output, "fit.csv")
    write_csv(csv_path, pd.DataFrame({"x": grid.points, "theta_hat": result.theta_hat}))
    write_json(json_path, summary)
    print(kv("FIT", method=method, n=grid.n, objective=result.objective, iterations=result.iters,
             converged=result.converged, output=str(csv_path)))

    if args.verify:
        failed = _verify_fit(method, result, grid, data.y, degree)
        if failed:
            print(kv("VERIFY", status="failed", checks=",".join(failed)), file=sys.stderr)
            return EXIT_CHECK_FAILED
        print(kv("VERIFY", status="ok"))
    if not result.converged:
        print(kv("NOT_CONVERGED", r_norm=result.r_norm, s_norm=result.s_norm), file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def run_interp(args, cfg: Dict[str, Any]) -> int:
    fit = read_json(args.fit)
    if fit.get("method") not in ("tf", "ntf"):
        raise DomainError(f"interpolation needs a tf or ntf fit, got {fit.get('method')!r}")
    numerics = NumericsConfig.from_mapping(cfg.get("numerics"))
    grid = DesignGrid(np.asarray(fit["x"]), fit.get("a"), fit.get("b"))
    spec = FFBasisSpec(int(fit["degree"]), grid)
    theta = np.asarray(fit["theta_hat"], dtype=np.float64)
    xs = _read_query_points(args.points)
    inside = np.isfinite(xs) & (xs >= grid.a) & (xs <= grid.b)
    if not inside.all():
        logger.warning(kv("INTERP_OUTSIDE", count=int((~inside).sum()), a=grid.a, b=grid.b))
    values = np.full(xs.shape, np.nan)
    if inside.any():
        if args.mode == "explicit":
            values[inside] = DiscreteSplineFit.from_values(theta, spec, numerics)(xs[inside], "explicit")
        else:
            values[inside] = interp_implicit(theta, spec, xs[inside], numerics)
    out = Path(args.output or "values.csv")
    write_csv(out, pd.DataFrame({"x": xs, "value": values}))
    print(kv("INTERP", mode=args.mode, queries=xs.size, outside=int((~inside).sum()), output=str(out)))
    return EXIT_OK


def run_basis(args, cfg: Dict[str, Any]) -> int:
    grid = load_dataset(args.input).grid() if args.input else DesignGrid.uniform(args.n)
    k = int(args.degree if args.degree is not None else (cfg.get("fit") or {}).get("degree", 1))
    if args.kind == "dense":
        basis = dbs_values_dense(grid, k)
    elif args.kind == "natural":
        basis = natural_basis(grid, k)
    else:
        knots = [int(s) for s in args.knots.split(",") if s.strip()] if args.knots else []
        basis = dbs_values_sparse(grid, k, knots)
    logger.info(kv("USING_PARAMS", scope="basis", kind=args.kind, n=grid.n, degree=k, dim=basis.dim,
                   mesh=args.mesh or 0))
    if args.mesh:
        xs = np.linspace(grid.a, grid.b, args.mesh)
        cols = {f"N{j}": dbs_eval(basis, j, xs) for j in range(basis.dim)}
    else:
        xs = grid.points
        dense = basis.values.toarray()
        cols = {f"N{j}": dense[:, j] for j in range(basis.dim)}
    out = Path(args.output or "basis.csv")
    write_csv(out, pd.DataFrame({"x": xs, **cols}))
    print(kv("BASIS", kind=args.kind, n=grid.n, degree=k, dim=basis.dim, output=str(out)))
    return EXIT_OK


def run_bench(args, cfg: Dict[str, Any]) -> int:
    bench = cfg.get("bench") or {}
    ns = args.n or bench.get("n", [100, 200, 500, 1000])
    design = args.design or bench.get("design", "even")
    reps = int(args.reps if args.reps is not None else bench.get("reps", 30))
    seed = int(args.seed if args.seed is not None else bench.get("seed", 0))
    k = int(args.degree if args.degree is not None else bench.get("degree", 3))
    workers = int(args.workers if args.workers is not None else bench.get("workers", 1))
    logger.info(kv("USING_PARAMS", scope="bench-cond", n=",".join(map(str, ns)), design=design,
                   reps=reps, seed=seed, degree=k, workers=workers))
    table = pd.concat([cond_benchmark(int(n), k, None, design, reps, seed, workers) for n in ns],
                      ignore_index=True)
    out = Path(args.output or "bench_cond.csv")
    write_csv(out, table)
    print(table.to_string(index=False))
    return EXIT_OK


def run_check(args, cfg: Dict[str, Any]) -> int:
    check_cfg = cfg.get("check") or {}
    suite = args.suite or check_cfg.get("suite", "all")
    seed = int(args.seed if args.seed is not None else check_cfg.get("seed", 0))
    logger.info(kv("USING_PARAMS", scope="check", suite=suite, seed=seed))
    results = run_suite(suite, seed)
    table = pd.DataFrame([{"suite": r.suite, "name": r.name, "value": r.value, "tol": r.tol,
                           "passed": r.passed, "seconds": round(r.seconds, 3)} for r in results])
    print(table.to_string(index=False))
    failed = [r.name for r in results if not r.passed]
    if args.output:
        write_csv(args.output, table)
    if failed:
        print(kv("CHECK", status="failed", failed=",".join(failed)), file=sys.stderr)
        return EXIT_CHECK_FAILED
    print(kv("CHECK", status="ok", checks=len(results)))
    return EXIT_OK


def _build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dspline", description="Discrete spline fitting and diagnostics")
    p.add_argument("--config", type=str, default=None, help="Path to config YAML")
    p.add_argument("--log-level", type=str, default=None, help="Logging level (default from config)")
    sub = p.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="Fit a smoother to an x,y CSV")
    fit.add_argument("input", type=str, help="CSV with header x,y")
    fit.add_argument("--method", choices=METHODS, default=None)
    fit.add_argument("--degree", "-k", type=int, default=None, help="Degree for tf/ntf")
    fit.add_argument("--order", "-m", type=int, default=None, help="Order for bw/ss")
    fit.add_argument("--lambda", dest="lam", type=float, default=None, help="Penalty weight")
    fit.add_argument("--rho", type=float, default=None, help="ADMM parameter (default lambda)")
    fit.add_argument("--max-iter", type=int, default=None)
    fit.add_argument("--tol", type=float, default=None, help="Absolute primal/dual tolerance")
    fit.add_argument("--polish", action=argparse.BooleanOptionalAction, default=None)
    fit.add_argument("--natural", action="store_true", help="Natural trend filtering (same as --method ntf)")
    fit.add_argument("--mode", choices=("standard", "dbspline"), default=None)
    fit.add_argument("--verify", action="store_true", help="Re-check the fit independently")
    fit.add_argument("--output", type=str, default=None, help="Output CSV; the summary goes next to it as .json")
    fit.set_defaults(handler=run_fit)

    interp = sub.add_parser("interp", help="Evaluate a fitted discrete spline at query points")
    interp.add_argument("fit", type=str, help="Summary JSON written by `fit`")
    interp.add_argument("points", type=str, help="CSV with an x column")
    interp.add_argument("--mode", choices=("explicit", "implicit"), default="implicit")
    interp.add_argument("--output", type=str, default=None)
    interp.set_defaults(handler=run_interp)

    basis = sub.add_parser("basis", help="Export DB-spline basis values")
    basis.add_argument("input", type=str, nargs="?", default=None, help="CSV with an x column (optional)")
    basis.add_argument("--n", type=int, default=20, help="Uniform design size when no input is given")
    basis.add_argument("--degree", "-k", type=int, default=None)
    basis.add_argument("--kind", choices=("dense", "sparse", "natural"), default="dense")
    basis.add_argument("--knots", type=str, default=None, help="Comma-separated knot positions (sparse)")
    basis.add_argument("--mesh", type=int, default=None, help="Evaluate on this many mesh points")
    basis.add_argument("--output", type=str, default=None)
    basis.set_defaults(handler=run_basis)

    bench = sub.add_parser("bench-cond", help="Condition numbers of the least squares routes")
    bench.add_argument("--n", type=int, nargs="+", default=None)
    bench.add_argument("--design", choices=("even", "random", "uniform-random"), default=None)
    bench.add_argument("--reps", type=int, default=None)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--degree", "-k", type=int, default=None)
    bench.add_argument("--workers", type=int, default=None)
    bench.add_argument("--output", type=str, default=None)
    bench.set_defaults(handler=run_bench)

    check = sub.add_parser("check", help="Run the numerical self-checks")
    check.add_argument("suite", nargs="?", choices=SUITES, default=None)
    check.add_argument("--seed", type=int, default=None)
    check.add_argument("--output", type=str, default=None)
    check.set_defaults(handler=run_check)
    return p


def main(argv=None) -> int:
    args = _build_arg_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        setup_logging(args.log_level or (cfg.get("logging") or {}).get("level", "INFO"))
        return args.handler(args, cfg)
    except (DomainError, FileNotFoundError, UnsupportedError, FactorizationError,
            pd.errors.EmptyDataError, KeyError) as exc:
        print(kv("ERROR", kind=type(exc).__name__, message=str(exc)), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
