"""Seeded command-line front end: every experiment, one subcommand each.

Output contract: each run writes CSV/JSON artifacts plus a manifest JSON
recording the resolved configuration, seed, tool version, wall time and the
list of files written.  CSV cells hold the shortest round-trip decimal of the
double value (Python ``repr``), with LF line endings and a header row, so a
fixed seed yields byte-identical files on every rerun and thread count.

Flag resolution: command-line flags override a TOML config file (``--config``,
keys at top level or in a per-command table), which overrides built-in
defaults.  A relative ``--out`` path lands in ``$RECSPEC_OUT_DIR`` when that
variable is set.

Exit codes: 0 success, 2 usage/flag errors, 3 numerical failures.  Errors are
emitted to stderr as a single JSON line.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__, moments, realcase
from .ensemble import (
    EnsembleKind,
    EnsembleSpec,
    ScalarField,
    default_ap,
    gumbel_quantile,
    rescale_factor,
    rho_n,
)
from .propagation import MonteCarloConfig, monte_carlo
from .realcase import QuadratureError
from .spectral import (
    EigensolverError,
    eigenvalues,
    expected_radius_asymptotic,
    radius_statistics,
)
from . import parallel
from .ensemble import sample
from .rng import MATRIX_STREAM, derive_rng

OUT_DIR_ENV = "RECSPEC_OUT_DIR"

USAGE_ERROR = 2
NUMERICAL_ERROR = 3

# Trial counts of the paper-style figure presets: 100 matrices, 50 inputs,
# width 500; fig1 is the real-field figure, fig3 its complex twin.
_FIGURE_PRESETS = {
    "fig1": {"n": 500, "field": "real", "trials": 100, "matrix_trials": 100, "input_trials": 50},
    "fig3": {"n": 500, "field": "complex", "trials": 100, "matrix_trials": 100, "input_trials": 50},
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _fmt_cell(v) -> str:
    """Shortest round-trip CSV cell; None -> empty, bool -> true/false."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt_cell(v) for v in row) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _resolve_out(raw: str) -> Path:
    p = Path(raw)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _write_manifest(out: Path, command: str, config: dict, started: float, outputs: list[Path]) -> None:
    manifest = {
        "command": command,
        "config": config,
        "seed": config.get("seed"),
        "version": __version__,
        "wall_time_s": round(time.perf_counter() - started, 3),
        "outputs": [p.name for p in outputs],
    }
    path = out.with_name(out.stem + ".manifest.json")
    _write_json(path, manifest)


def _ensemble_spec(cfg: dict) -> EnsembleSpec:
    kind = EnsembleKind.parse(cfg["ensemble"])
    field = ScalarField.parse(cfg["field"])
    a_p = cfg.get("a_p")
    if kind is EnsembleKind.RESCALED:
        rescale_factor(cfg["n"], field, a_p)  # reject widths below the asymptotic regime up front
    return EnsembleSpec(
        kind=kind,
        field=field,
        n=cfg["n"],
        a_p=a_p if kind is EnsembleKind.RESCALED else None,
        seed=cfg["seed"],
    )


# -- commands ------------------------------------------------------------------


def run_radius_hist(cfg: dict) -> list[Path]:
    started = time.perf_counter()
    spec = _ensemble_spec(cfg)
    summary = radius_statistics(spec, cfg["trials"], threads=cfg["threads"])
    if summary.failures:
        raise EigensolverError(f"{len(summary.failures)} trials failed: {summary.failures[:3]}")
    out = _resolve_out(cfg["out"])
    _write_csv(
        out,
        ["trial", "radius", "inside_unit"],
        ((s.trial, s.radius, s.inside_unit) for s in summary.samples),
    )
    try:
        expected = expected_radius_asymptotic(spec.n, spec.field)
    except ValueError:
        expected = None
    summary_path = out.with_name(out.stem + ".summary.json")
    _write_json(
        summary_path,
        {
            "mean": summary.mean,
            "std": summary.std,
            "frac_inside": summary.frac_inside,
            "expected_radius_asymptotic": expected,
        },
    )
    _write_manifest(out, "radius-hist", cfg, started, [out, summary_path])
    return [out]


def run_matrix_powers(cfg: dict) -> list[Path]:
    started = time.perf_counter()
    spec = _ensemble_spec(cfg)
    stats = monte_carlo(
        MonteCarloConfig(
            ensemble=spec,
            mode="powers",
            steps=cfg["k_max"],
            matrix_trials=cfg["matrix_trials"],
            input_trials=cfg["input_trials"],
        ),
        threads=cfg["threads"],
    )
    out = _resolve_out(cfg["out"])
    _write_csv(
        out,
        ["k", "mean_log_sq_norm", "std_log_sq_norm", "trials"],
        (
            (int(k), 2.0 * m, 2.0 * s, stats.trials)
            for k, m, s in zip(stats.t, stats.mean_log_norm, stats.std_log_norm)
        ),
    )
    _write_manifest(out, "matrix-powers", cfg, started, [out])
    return [out]


def run_hidden_states(cfg: dict) -> list[Path]:
    started = time.perf_counter()
    spec = _ensemble_spec(cfg)
    stats = monte_carlo(
        MonteCarloConfig(
            ensemble=spec,
            mode="hidden",
            steps=cfg["t_max"],
            matrix_trials=cfg["matrix_trials"],
            input_trials=cfg["input_trials"],
        ),
        threads=cfg["threads"],
    )
    bound = None
    if spec.field is ScalarField.COMPLEX:
        bound = moments.hidden_state_lower_bound_log_series(spec.n, cfg["t_max"])[1:]
    out = _resolve_out(cfg["out"])
    _write_csv(
        out,
        ["t", "mean_log_sq_norm", "std_log_sq_norm", "bound_log"],
        (
            (int(t), 2.0 * m, 2.0 * s, None if bound is None else bound[i])
            for i, (t, m, s) in enumerate(zip(stats.t, stats.mean_log_norm, stats.std_log_norm))
        ),
    )
    _write_manifest(out, "hidden-states", cfg, started, [out])
    return [out]


def run_moment_bound(cfg: dict) -> list[Path]:
    started = time.perf_counter()
    n, k_max, mc_trials = cfg["n"], cfg["k_max"], cfg["mc_trials"]
    log_bounds = moments.moment_lower_bound_log_series(n, k_max)
    mc_mean = mc_sem = None
    if mc_trials > 0:
        spec = EnsembleSpec(kind=EnsembleKind.GLOROT, field=ScalarField.COMPLEX, n=n, seed=cfg["seed"])
        stats = monte_carlo(
            MonteCarloConfig(ensemble=spec, mode="powers", steps=k_max, matrix_trials=mc_trials),
            threads=cfg["threads"],
            keep_curves=True,
        )
        norm_sq = np.exp(2.0 * stats.curves)
        mc_mean = norm_sq.mean(axis=0)
        mc_sem = norm_sq.std(axis=0, ddof=1) / math.sqrt(stats.trials)
    rows = []
    for k in range(k_max + 1):
        if mc_mean is None:
            rows.append((k, log_bounds[k], None, None, None))
        else:
            dominates = bool(mc_mean[k] + 3.0 * mc_sem[k] >= math.exp(log_bounds[k]))
            rows.append((k, log_bounds[k], math.log(mc_mean[k]), math.log(mc_sem[k]), dominates))
    out = _resolve_out(cfg["out"])
    _write_csv(out, ["k", "log_bound", "mc_mean_log", "mc_sem_log", "dominates"], rows)
    _write_manifest(out, "moment-bound", cfg, started, [out])
    return [out]


def run_rescale_factor(cfg: dict) -> list[Path]:
    started = time.perf_counter()
    n = cfg["n"]
    field = ScalarField.parse(cfg["field"])
    if cfg.get("a_p") is not None and cfg.get("p") is not None:
        raise CliError("give either --a-p or --p, not both", USAGE_ERROR)
    if cfg.get("p") is not None:
        a_p = gumbel_quantile(cfg["p"], field)
    elif cfg.get("a_p") is not None:
        a_p = cfg["a_p"]
    else:
        a_p = default_ap(field)
    factor = rescale_factor(n, field, a_p)
    payload = {
        "rho_n": rho_n(n),
        "a_p": a_p,
        "factor": factor,
        "variance": 1.0 / (n * factor * factor),
    }
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    outputs: list[Path] = []
    if cfg.get("out"):
        out = _resolve_out(cfg["out"])
        _write_json(out, payload)
        _write_manifest(out, "rescale-factor", cfg, started, [out])
        outputs.append(out)
    return outputs


def run_real_density(cfg: dict) -> list[Path]:
    started = time.perf_counter()
    n, seed = cfg["n"], cfg["seed"]
    prefix = _resolve_out(cfg["out"])
    k_list = cfg["k"]

    grid = np.linspace(cfg["x_min"], cfg["x_max"], cfg["grid_points"])
    density_path = prefix.with_name(prefix.name + "_density.csv")
    values = realcase.real_eig_density_unnorm(n, grid)
    _write_csv(density_path, ["x", "density"], zip(grid, values))

    c_real = realcase.expected_real_count(n)
    c_complex = realcase.expected_complex_count(n)
    counts_path = prefix.with_name(prefix.name + "_counts.json")
    _write_json(counts_path, {"c_real": c_real, "c_complex": c_complex, "sum": c_real + c_complex})

    mc_trials = cfg["mc_trials"]
    mc_moments = mc_sems = None
    if mc_trials > 0:
        spec = EnsembleSpec(kind=EnsembleKind.GLOROT, field=ScalarField.REAL, n=n, seed=seed)

        def trial_moments(i: int) -> np.ndarray:
            eig = eigenvalues(sample(spec, derive_rng(seed, MATRIX_STREAM, i))).eigenvalues
            mod_sq = np.abs(eig) ** 2
            return np.array([np.mean(mod_sq**k) for k in k_list])

        results = parallel.map_indexed(trial_moments, mc_trials, cfg["threads"])
        errors = [r for r in results if isinstance(r, Exception)]
        if errors:
            raise EigensolverError(f"{len(errors)} Monte Carlo trials failed: {errors[:3]}")
        per_trial = np.stack(results)
        mc_moments = per_trial.mean(axis=0)
        mc_sems = per_trial.std(axis=0, ddof=1) / math.sqrt(mc_trials)

    moments_path = prefix.with_name(prefix.name + "_moments.csv")
    rows = []
    for idx, k in enumerate(k_list):
        quad_val = realcase.real_case_moment(n, k)
        if mc_moments is None:
            rows.append((k, quad_val, None, None))
        else:
            rows.append((k, quad_val, mc_moments[idx], mc_sems[idx]))
    _write_csv(moments_path, ["k", "quadrature", "mc_mean", "mc_sem"], rows)

    _write_manifest(prefix, "real-density", cfg, started, [density_path, counts_path, moments_path])
    return [density_path, counts_path, moments_path]


def run_asymptotics(cfg: dict) -> list[Path]:
    started = time.perf_counter()
    rows = []
    for alpha in cfg["alpha"]:
        for n in cfg["n"]:
            k = math.ceil(alpha * math.sqrt(n))
            exact_log = moments.log_factorial_ratio(n, k)
            limit_log = alpha * alpha / 2.0
            rows.append((alpha, n, k, exact_log, limit_log, abs(exact_log - limit_log)))
    out = _resolve_out(cfg["out"])
    _write_csv(out, ["alpha", "n", "k", "exact_log", "limit_log", "abs_err"], rows)
    _write_manifest(out, "asymptotics", cfg, started, [out])
    return [out]


# -- argument plumbing ----------------------------------------------------------

_RUNNERS = {
    "radius-hist": run_radius_hist,
    "matrix-powers": run_matrix_powers,
    "hidden-states": run_hidden_states,
    "moment-bound": run_moment_bound,
    "rescale-factor": run_rescale_factor,
    "real-density": run_real_density,
    "asymptotics": run_asymptotics,
}

# defaults per command; None means "required unless provided by preset/config"
_DEFAULTS: dict[str, dict] = {
    "radius-hist": {
        "n": 500, "field": "real", "ensemble": "glorot", "trials": 100,
        "seed": 0, "threads": 1, "out": None, "a_p": None, "defaults": None,
    },
    "matrix-powers": {
        "n": 500, "field": "real", "ensemble": "glorot", "k_max": 120,
        "matrix_trials": 100, "input_trials": 50, "seed": 0, "threads": 1,
        "out": None, "a_p": None, "defaults": None,
    },
    "hidden-states": {
        "n": 500, "field": "real", "ensemble": "glorot", "t_max": 400,
        "matrix_trials": 100, "input_trials": 50, "seed": 0, "threads": 1,
        "out": None, "a_p": None, "defaults": None,
    },
    "moment-bound": {
        "n": 200, "k_max": 30, "mc_trials": 500, "seed": 0, "threads": 1, "out": None,
    },
    "rescale-factor": {
        "n": 500, "field": "complex", "p": None, "a_p": None, "out": None, "seed": 0,
    },
    "real-density": {
        "n": 100, "x_min": -1.5, "x_max": 1.5, "grid_points": 301,
        "k": [0, 1, 2, 5, 10], "mc_trials": 500, "seed": 0, "threads": 1, "out": None,
    },
    "asymptotics": {
        "alpha": [0.0, 1.0, 2.0, 3.0], "n": [10**4, 10**5, 10**6], "out": None, "seed": 0,
    },
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recspec",
        description="Spectral-radius and signal-propagation experiments for random recurrent initializations.",
    )
    parser.add_argument("--version", action="version", version=f"recspec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", type=str, default=None, help="TOML config file (flags override it)")
        p.add_argument("--out", type=str, default=None, help="output path (CSV, or prefix for real-density)")
        p.add_argument("--seed", type=int, default=None, help="64-bit root seed")
        return p

    def ensemble_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--n", type=int, default=None, help="matrix width")
        p.add_argument("--field", choices=["real", "complex"], default=None)
        p.add_argument(
            "--ensemble",
            choices=[k.value for k in EnsembleKind],
            default=None,
        )
        p.add_argument("--a-p", dest="a_p", type=float, default=None, help="Gumbel offset (rescaled only)")
        p.add_argument("--threads", type=int, default=None, help="trial-level worker threads")
        p.add_argument("--defaults", choices=sorted(_FIGURE_PRESETS), default=None,
                       help="figure preset for widths and trial counts")

    p = add("radius-hist", "per-trial spectral radii of an ensemble")
    ensemble_flags(p)
    p.add_argument("--trials", type=int, default=None)

    p = add("matrix-powers", "Monte Carlo of log ||W^k x|| over k")
    ensemble_flags(p)
    p.add_argument("--k-max", dest="k_max", type=int, default=None)
    p.add_argument("--matrix-trials", dest="matrix_trials", type=int, default=None)
    p.add_argument("--input-trials", dest="input_trials", type=int, default=None)

    p = add("hidden-states", "Monte Carlo of log ||h_t|| for the driven recurrence")
    ensemble_flags(p)
    p.add_argument("--t-max", dest="t_max", type=int, default=None)
    p.add_argument("--matrix-trials", dest="matrix_trials", type=int, default=None)
    p.add_argument("--input-trials", dest="input_trials", type=int, default=None)

    p = add("moment-bound", "closed-form lower bound on E||W^k x||^2 vs Monte Carlo")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k-max", dest="k_max", type=int, default=None)
    p.add_argument("--mc-trials", dest="mc_trials", type=int, default=None,
                   help="number of (W, x) pairs; 0 for analytic-only output")
    p.add_argument("--threads", type=int, default=None)

    p = add("rescale-factor", "deterministic rescaling factor and variance")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--field", choices=["real", "complex"], default=None)
    p.add_argument("--p", type=float, default=None, help="target stability level (Gumbel quantile)")
    p.add_argument("--a-p", dest="a_p", type=float, default=None, help="explicit Gumbel offset")

    p = add("real-density", "real-ensemble eigenvalue densities, counts and moments")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--x-min", dest="x_min", type=float, default=None)
    p.add_argument("--x-max", dest="x_max", type=float, default=None)
    p.add_argument("--grid-points", dest="grid_points", type=int, default=None)
    p.add_argument("--k", type=int, nargs="+", default=None, help="moment orders")
    p.add_argument("--mc-trials", dest="mc_trials", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)

    p = add("asymptotics", "double-scaling limit of the factorial ratio")
    p.add_argument("--alpha", type=float, nargs="+", default=None)
    p.add_argument("--n", type=int, nargs="+", default=None)

    return parser


def _resolve_config(command: str, args: argparse.Namespace) -> dict:
    cfg = dict(_DEFAULTS[command])
    preset = getattr(args, "defaults", None)
    if preset:
        cfg.update({k: v for k, v in _FIGURE_PRESETS[preset].items() if k in cfg})
        cfg["defaults"] = preset
    if args.config:
        with open(args.config, "rb") as fh:
            from_file = tomllib.load(fh)
        table = from_file.get(command, {})
        flat = {k: v for k, v in from_file.items() if not isinstance(v, dict)}
        for k, v in {**flat, **table}.items():
            key = k.replace("-", "_")
            if key in cfg:
                cfg[key] = v
    for key in cfg:
        if key == "defaults":
            continue
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    missing = [k for k, v in cfg.items() if v is None and k in ("out",) and command != "rescale-factor"]
    if missing:
        raise CliError(f"missing required flag(s): {', '.join('--' + m for m in missing)}", USAGE_ERROR)
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args.command, args)
        _RUNNERS[args.command](cfg)
        return 0
    except CliError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "exit_code": exc.code}) + "\n")
        return exc.code
    except (ValueError, OSError, tomllib.TOMLDecodeError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "exit_code": USAGE_ERROR}) + "\n")
        return USAGE_ERROR
    except (EigensolverError, QuadratureError, FloatingPointError, np.linalg.LinAlgError, RuntimeError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "exit_code": NUMERICAL_ERROR}) + "\n")
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
