"""Command-line interface for superefficiency-lab."""

import logging
import math
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import click
import numpy as np

from . import __version__
from .config import ConfigError, ExperimentConfig, find_config_file, init_config_file, load_config, merge_config
from .efficiency import ae_estimate, all_or_nothing_demo, classical_efficiency_check, finite_scale_bound_check
from .estimators import EstimatorKind, EstimatorSpec, concentration_exact, concentration_mc, mle_bound_check
from .extraction import (
    ExtractionOutcome,
    ExtractionTrace,
    WidthError,
    countability_gap_check,
    extract_parameter,
    interval_width,
    render_trace,
)
from .formatters import Artifact, write_artifact
from .models import (
    DiscreteModelPair,
    affinity_bruteforce_discrete,
    affinity_exact_gaussian,
    affinity_lower_bound_from_tv,
    affinity_neyman_pearson_discrete,
    check_affinity_assumption,
    check_lan_decomposition,
    check_likelihood_ratio_assumption,
    check_variation_assumption,
    likelihood_ratio_exceedance,
    normal_cdf,
    variation_distance_bruteforce_discrete,
    variation_distance_discrete,
    variation_distance_exact_gaussian,
)
from .utils import emit_error_object, parse_number_list, print_error, print_info, print_success

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_CONFIG = 2
EXIT_WIDTH_ERROR = 3
EXIT_NO_SUPEREFFICIENT_POINT = 4
EXIT_ASSUMPTION_VIOLATION = 5

# comma-separated options and whether their entries are integers
LIST_OPTIONS = {
    'pivots': False,
    'theta_list': False,
    'theta1_list': False,
    'theta2_list': False,
    'n_list': True,
    'c_list': False,
    'c_grid': False,
    'n_grid': True,
    'lam_list': False,
    'lan_n_list': True,
}

Compute = Callable[[ExperimentConfig], Tuple[Artifact, int]]


# ============================================================================
# Option groups
# ============================================================================

def _options(*decorators):
    def apply(func):
        for decorator in reversed(decorators):
            func = decorator(func)
        return func
    return apply


run_options = _options(
    click.option('--config', 'config', type=click.Path(dir_okay=False, path_type=Path), default=None,
                 help='Configuration file (default: ./.superefficiency-lab.toml, then the user config)'),
    click.option('--no-config', is_flag=True, default=False, help='Ignore configuration files'),
    click.option('--seed', type=int, default=None, help='Master seed (default: 0)'),
    click.option('--out', '-o', type=click.Path(file_okay=False), default=None, help='Output directory'),
    click.option('--format', '-f', 'format', type=click.Choice(['csv', 'json', 'both'], case_sensitive=False),
                 default=None, help='Output format: csv, json, or both (default: csv)'),
    click.option('--workers', type=int, default=None, help='Worker threads (default: 1)'),
    click.option('--verbose', '-v', is_flag=True, default=None, help='Enable verbose logging'),
    click.option('--log-file', type=click.Path(dir_okay=False), default=None, help='Save logs to file'),
)

model_options = _options(
    click.option('--sigma', type=float, default=None, help='Known standard deviation'),
    click.option('--theta-lower', type=float, default=None, help='Lower end of the parameter interval'),
    click.option('--theta-upper', type=float, default=None, help='Upper end of the parameter interval'),
)

estimator_options = _options(
    click.option('--estimator', type=click.Choice([kind.value for kind in EstimatorKind]), default=None,
                 help='Estimator family (default: hodges)'),
    click.option('--pivot', type=float, default=None, help='Hodges pivot'),
    click.option('--value', type=float, default=None, help='Value of the constant estimator'),
    click.option('--pivots', default=None, help='Comma-separated pivots of the multi-pivot Hodges estimator'),
)

grid_options = _options(
    click.option('--theta1-list', default=None, help='Comma-separated theta1 values'),
    click.option('--theta2-list', default=None, help='Comma-separated theta2 values'),
    click.option('--n-list', default=None, help='Comma-separated sample sizes'),
)

discrete_options = _options(
    click.option('--discrete-pairs', type=int, default=None, help='Random discrete pairs checked against enumeration'),
    click.option('--discrete-k', type=int, default=None, help='Outcomes per discrete pair (at most 20)'),
)

extraction_options = _options(
    click.option('--c', 'c', type=float, default=None, help='Radius multiplier (default: 1)'),
    click.option('--a', 'a', type=float, default=None, help='Threshold factor in (0, 1) (default: 0.5)'),
    click.option('--i-bar', type=float, default=None, help='Information bound (default: 1.01)'),
    click.option('--epsilon', type=float, default=None, help='Shrink parameter (default: 0.1)'),
    click.option('--model-slack', type=float, default=None, help='Additive affinity slack of the model (default: 0)'),
    click.option('--n-min', type=int, default=None, help='Smallest admissible sample size (default: 1)'),
    click.option('--interval-left', type=float, default=None, help='Left end of the initial interval'),
    click.option('--interval-right', type=float, default=None, help='Right end of the initial interval'),
    click.option('--grid-points', type=int, default=None, help='Points per suitability scan (default: 64)'),
    click.option('--tolerance', type=float, default=None, help='Target interval width (default: 0.001)'),
    click.option('--max-iterations', type=int, default=None, help='Iteration cap (default: 100)'),
    click.option('--n-max', type=int, default=None, help='Largest n tested by the single-locus check'),
)


# ============================================================================
# Plumbing
# ============================================================================

def _cli_values(options: Dict) -> Dict:
    """Parse list options; values left at None are dropped by merge_config."""
    values = dict(options)
    for key, integer in LIST_OPTIONS.items():
        if key in values:
            try:
                values[key] = parse_number_list(values[key], integer=integer)
            except ValueError as e:
                raise ConfigError(key, str(e)) from e
    return values


def resolve_config(command: str, options: Dict, countability: bool = False) -> ExperimentConfig:
    """
    Load the config file (unless disabled), apply command-line overrides and validate.

    Raises:
        ConfigError: On unreadable files or invalid values
        WidthError: If the extraction interval admits no sample size
    """
    options = dict(options)
    explicit = options.pop('config', None)
    no_config = options.pop('no_config', False)
    file_values = {}
    if not no_config:
        config_file = find_config_file(explicit)
        if config_file:
            file_values = load_config(config_file)
            print_info(f"Loaded configuration from: {config_file}")
    config = merge_config(file_values, _cli_values(options))
    config.validate(command, countability)
    return config


def setup_logging(config: ExperimentConfig) -> None:
    log_level = logging.DEBUG if config.verbose else logging.INFO
    log_format = '%(asctime)s - %(levelname)s - %(message)s'

    handlers = []
    if config.log_file:
        handlers.append(logging.FileHandler(config.log_file, encoding='utf-8'))
    if config.verbose:
        handlers.append(logging.StreamHandler())

    if handlers:
        logging.basicConfig(level=log_level, format=log_format, handlers=handlers, force=True)
        logger.info(f"Starting superefficiency-lab {__version__}")


def execute(command: str, options: Dict, compute: Compute, countability: bool = False) -> None:
    """Resolve the config, run one command, write its artifact once and exit with its status."""
    try:
        config = resolve_config(command, options, countability)
    except ConfigError as e:
        emit_error_object(e.to_dict())
        sys.exit(EXIT_INVALID_CONFIG)
    except WidthError as e:
        emit_error_object({"error": "width_error", "key": "interval", "message": str(e)})
        sys.exit(EXIT_WIDTH_ERROR)

    setup_logging(config)
    try:
        artifact, status = compute(config)
    except WidthError as e:
        print_error(str(e))
        sys.exit(EXIT_WIDTH_ERROR)
    except ValueError as e:
        emit_error_object({"error": "invalid_input", "key": command, "message": str(e)})
        sys.exit(EXIT_INVALID_CONFIG)

    paths = write_artifact(artifact, Path(config.out), config.format)
    for path in paths:
        logger.debug(f"Wrote {path}")
    if status == EXIT_OK:
        print_success(f"{command}: wrote {len(paths)} file(s) to {config.out}")
    else:
        print_error(f"{command}: finished with exit status {status}")
    sys.exit(status)


def _gaussian_grid(config: ExperimentConfig) -> List[Tuple[float, float, int]]:
    return [(t1, t2, n) for t1 in config.theta1_list for t2 in config.theta2_list for n in config.n_list]


def random_discrete_pairs(count: int, k: int, seed: int) -> List[DiscreteModelPair]:
    """Pairs of Dirichlet(1, ..., 1) probability vectors drawn from a seeded generator."""
    rng = np.random.default_rng(seed)
    return [
        DiscreteModelPair(tuple(rng.dirichlet(np.ones(k))), tuple(rng.dirichlet(np.ones(k))))
        for _ in range(count)
    ]


def _reference_affinity(config: ExperimentConfig, theta1: float, theta2: float, n: int) -> float:
    return normal_cdf(-abs(theta2 - theta1) * math.sqrt(n) / (2.0 * config.sigma))


# ============================================================================
# Artifacts
# ============================================================================

def affinity_artifact(config: ExperimentConfig) -> Tuple[Artifact, int]:
    """Gaussian closed form against the reference value, and Neyman-Pearson against enumeration."""
    model = config.model()
    gaussian = []
    for theta1, theta2, n in _gaussian_grid(config):
        exact = affinity_exact_gaussian(model, theta1, theta2, n)
        reference = _reference_affinity(config, theta1, theta2, n)
        tv = variation_distance_exact_gaussian(model, theta1, theta2, n)
        gaussian.append({
            "theta1": theta1, "theta2": theta2, "n": n, "sigma": config.sigma,
            "affinity_exact": exact,
            "affinity_reference": reference,
            "abs_difference": abs(exact - reference),
            "lr_exceedance": likelihood_ratio_exceedance(model, theta1, theta2, n),
            "tv_exact": tv,
            "tv_bound": affinity_lower_bound_from_tv(tv),
        })

    discrete = []
    for index, pair in enumerate(random_discrete_pairs(config.discrete_pairs, config.discrete_k, config.seed)):
        np_value = affinity_neyman_pearson_discrete(pair)
        brute = affinity_bruteforce_discrete(pair).value
        tv = variation_distance_discrete(pair)
        discrete.append({
            "pair": index, "k": pair.k,
            "affinity_np": np_value,
            "affinity_bruteforce": brute,
            "abs_difference": abs(np_value - brute),
            "tv": tv,
            "tv_bound": affinity_lower_bound_from_tv(tv),
        })

    summary = {
        "max_abs_difference_gaussian": max((row["abs_difference"] for row in gaussian), default=0.0),
        "max_abs_difference_discrete": max((row["abs_difference"] for row in discrete), default=0.0),
        "tv_bound_holds": all(row["affinity_np"] >= row["tv_bound"] - 1e-12 for row in discrete),
    }
    tables = {"affinity": gaussian, "affinity-discrete": discrete}
    return Artifact("affinity", config.to_dict(), tables, summary), EXIT_OK


def tv_artifact(config: ExperimentConfig) -> Tuple[Artifact, int]:
    model = config.model()
    gaussian = []
    for theta1, theta2, n in _gaussian_grid(config):
        exact = variation_distance_exact_gaussian(model, theta1, theta2, n)
        reference = 1.0 - 2.0 * _reference_affinity(config, theta1, theta2, n)
        gaussian.append({
            "theta1": theta1, "theta2": theta2, "n": n, "sigma": config.sigma,
            "tv_exact": exact, "tv_reference": reference, "abs_difference": abs(exact - reference),
        })

    discrete = []
    for index, pair in enumerate(random_discrete_pairs(config.discrete_pairs, config.discrete_k, config.seed)):
        tv = variation_distance_discrete(pair)
        brute = variation_distance_bruteforce_discrete(pair)
        discrete.append({"pair": index, "k": pair.k, "tv": tv, "tv_bruteforce": brute, "abs_difference": abs(tv - brute)})

    summary = {
        "max_abs_difference_gaussian": max((row["abs_difference"] for row in gaussian), default=0.0),
        "max_abs_difference_discrete": max((row["abs_difference"] for row in discrete), default=0.0),
    }
    return Artifact("tv", config.to_dict(), {"tv": gaussian, "tv-discrete": discrete}, summary), EXIT_OK


def concentration_artifact(config: ExperimentConfig) -> Tuple[Artifact, int]:
    """Exact against Monte Carlo concentration probabilities over (theta, n, c)."""
    model = config.model()
    spec = config.estimator_spec()
    rows = []
    for theta in config.theta_list:
        for n in config.n_list:
            for c in config.c_list:
                radius = c / math.sqrt(n)
                exact = concentration_exact(model, spec, theta, n, radius)
                mc = concentration_mc(
                    model, spec, theta, n, radius,
                    samples=config.samples, seed=config.seed,
                    workers=config.workers, full_sample=config.full_sample,
                )
                difference = mc.probability - exact.probability
                if mc.std_error > 0:
                    z_score = difference / mc.std_error
                else:
                    z_score = 0.0 if difference == 0 else math.copysign(math.inf, difference)
                rows.append({
                    "estimator": spec.label, "n": n, "theta": theta, "c": c, "radius": radius,
                    "p_exact": exact.probability, "p_mc": mc.probability,
                    "std_error": mc.std_error, "z_score": z_score,
                })
    summary = {
        "estimator": spec.to_dict(),
        "max_abs_z_score": max(abs(row["z_score"]) for row in rows),
    }
    return Artifact("concentration", config.to_dict(), {"concentration": rows}, summary), EXIT_OK


def efficiency_artifact(config: ExperimentConfig, all_or_nothing: bool = False) -> Tuple[Artifact, int]:
    """The inner-value matrix in long form plus the tail-half summary."""
    model = config.model()
    if all_or_nothing:
        report = all_or_nothing_demo(model, config.theta_list, config.c_grid, config.n_grid)
        estimates = report.estimates
        summary = {"pivot": report.pivot, "rows": [asdict(row) for row in report.rows]}
    else:
        spec = config.estimator_spec()
        estimate = ae_estimate(model, spec, config.theta, config.c_grid, config.n_grid, workers=config.workers)
        estimates = [estimate]
        bound = finite_scale_bound_check(model, spec, config.theta, config.c, config.n_grid)
        mle = mle_bound_check(model, config.c, config.n_grid, config.theta)
        ae_mle, classical = classical_efficiency_check(model, config.theta, config.c_grid, config.n_grid)
        summary = {
            "estimate": estimate.to_dict(),
            "finite_scale_bound": {
                "max_probability": bound.max_probability,
                "lower_bound": bound.lower_bound,
                "passed": bound.passed,
            },
            "mle_bound": mle.to_dict(),
            "mle_vs_classical": {"ae_approx": ae_mle, "classical": classical},
        }

    matrix = []
    for estimate in estimates:
        for i, c in enumerate(estimate.c_grid):
            for j, n in enumerate(estimate.n_grid):
                matrix.append({
                    "estimator": estimate.estimator, "theta": estimate.theta,
                    "c": c, "n": n, "inner_value": estimate.inner_values[i][j],
                })
    overview = [
        {"estimator": e.estimator, "theta": e.theta, "ae_approx": e.ae_approx, "classification": e.classification}
        for e in estimates
    ]
    tables = {"efficiency": matrix, "efficiency-summary": overview}
    return Artifact("efficiency", config.to_dict(), tables, summary), EXIT_OK


def trace_rows(trace: ExtractionTrace) -> List[dict]:
    rows = []
    for record in trace.iterations:
        hull = record.scan.suitable_hull if record.scan is not None else None
        rows.append({
            "estimator": trace.spec.label,
            "iteration": record.index,
            "left": float(record.interval_before[0]),
            "right": float(record.interval_before[1]),
            "width": float(interval_width(record.interval_before)),
            "n": record.n,
            "hull_left": None if hull is None else float(hull[0]),
            "hull_right": None if hull is None else float(hull[1]),
            "diameter": None if record.scan is None else float(record.scan.diameter),
            "width_after": None if record.interval_after is None else float(interval_width(record.interval_after)),
            "width_ratio": record.width_ratio,
            "resolution_ok": None if record.scan is None else record.scan.resolution_ok,
        })
    return rows


def countability_row(spec: EstimatorSpec, report) -> dict:
    return {
        "estimator": spec.label,
        "n_star": report.n_star,
        "tested_from": report.tested_n[0],
        "tested_to": report.tested_n[-1],
        "persistent_points": len(report.persistent_points),
        "diameter": float(report.diameter),
        "diameter_bound": report.diameter_bound,
        "loci": report.loci,
        "passed": report.passed,
    }


def outcome_status(trace: ExtractionTrace, expect_superefficient: bool) -> int:
    """Exit status of an extraction run."""
    if trace.outcome is ExtractionOutcome.WIDTH_ERROR:
        return EXIT_WIDTH_ERROR
    if trace.outcome is ExtractionOutcome.ASSUMPTION_VIOLATION:
        return EXIT_ASSUMPTION_VIOLATION
    if trace.outcome is ExtractionOutcome.NO_SUPEREFFICIENT_POINT and expect_superefficient:
        return EXIT_NO_SUPEREFFICIENT_POINT
    if trace.outcome is ExtractionOutcome.MAX_ITERATIONS and expect_superefficient:
        return EXIT_NO_SUPEREFFICIENT_POINT
    return EXIT_OK


def extract_artifact(
    config: ExperimentConfig,
    expect_superefficient: bool = False,
    countability: bool = False,
) -> Tuple[Artifact, int]:
    model = config.model()
    spec = config.estimator_spec()
    extraction = config.extraction_config()
    trace = extract_parameter(model, spec, extraction, workers=config.workers)
    status = outcome_status(trace, expect_superefficient)
    tables = {"trace": trace_rows(trace)}
    summary = {"trace": trace.to_dict()}
    if countability:
        report = countability_gap_check(model, spec, extraction, config.n_max)
        tables["countability"] = [countability_row(spec, report)]
        summary["countability"] = report.to_dict()
        if not report.passed and status == EXIT_OK:
            status = EXIT_ASSUMPTION_VIOLATION
    return Artifact("extract", config.to_dict(), tables, summary, text=render_trace(trace)), status


def check_assumptions_artifact(config: ExperimentConfig) -> Tuple[Artifact, int]:
    """Slack tables of the affinity, likelihood-ratio and variation assumptions, plus LAN reports."""
    model = config.model()
    grid = _gaussian_grid(config)
    reports = [
        check(model, config.theta, grid, config.assumption_epsilon)
        for check in (check_affinity_assumption, check_likelihood_ratio_assumption, check_variation_assumption)
    ]
    slack_rows = [
        {
            "assumption": report.assumption,
            "theta1": entry.theta1, "theta2": entry.theta2, "n": entry.n,
            "lhs": entry.lhs, "rhs": entry.rhs, "slack": entry.slack,
            "passed": entry.passed, "rejected": entry.rejected,
        }
        for report in reports
        for entry in report.entries
    ]
    lan_reports = [
        check_lan_decomposition(model, config.theta, lam, n, config.lan_samples, seed=config.seed)
        for lam in config.lam_list
        for n in config.lan_n_list
    ]
    lan_rows = [
        {
            "theta": r.theta, "lam": r.lam, "n": r.n, "samples": r.samples,
            "max_abs_residual": r.max_abs_residual, "ks_statistic": r.ks_statistic,
            "ks_pvalue": r.ks_pvalue, "passed": r.passed,
        }
        for r in lan_reports
    ]
    summary = {
        report.assumption: {"passed": report.passed, "max_abs_slack": report.max_abs_slack}
        for report in reports
    }
    summary["lan"] = {"passed": all(r.passed for r in lan_reports)}
    passed = all(report.passed for report in reports) and summary["lan"]["passed"]
    status = EXIT_OK if passed else EXIT_ASSUMPTION_VIOLATION
    tables = {"assumptions": slack_rows, "lan": lan_rows}
    return Artifact("check-assumptions", config.to_dict(), tables, summary), status


def demo_artifact(config: ExperimentConfig) -> Tuple[Artifact, int]:
    """Recover the Hodges pivot, contrast with the MLE and run the single-locus check."""
    model = config.model()
    extraction = config.extraction_config()
    hodges = EstimatorSpec.hodges(config.pivot)
    mle = EstimatorSpec.mle()

    hodges_trace = extract_parameter(model, hodges, extraction, workers=config.workers)
    mle_trace = extract_parameter(model, mle, extraction, workers=config.workers)
    report = countability_gap_check(model, hodges, extraction, config.n_max)

    status = outcome_status(hodges_trace, expect_superefficient=True)
    if status == EXIT_OK and not report.passed:
        status = EXIT_ASSUMPTION_VIOLATION
    tables = {
        "trace": trace_rows(hodges_trace) + trace_rows(mle_trace),
        "countability": [countability_row(hodges, report)],
    }
    summary = {
        "hodges": hodges_trace.to_dict(),
        "mle": {
            "outcome": mle_trace.outcome.value,
            "failed_iteration": mle_trace.failed_iteration,
            "detail": mle_trace.detail,
        },
        "countability": report.to_dict(),
    }
    text = render_trace(hodges_trace) + "\n" + render_trace(mle_trace)
    return Artifact("demo", config.to_dict(), tables, summary, text=text), status


# ============================================================================
# Commands
# ============================================================================

@click.group()
@click.version_option(__version__, '--version', '-V', prog_name='superefficiency-lab')
def main() -> None:
    """
    Numerical lab for superefficiency: affinities, estimator concentration,
    asymptotic efficiency and recovery of superefficiency points.

    \b
    Examples:
      superefficiency-lab demo -o ./results
      superefficiency-lab concentration --estimator hodges --n-list 10,100 --format both
      superefficiency-lab efficiency --estimator mle --c-grid 1,2,5,10
      superefficiency-lab extract --estimator mle --expect-superefficient
      superefficiency-lab init-config ./.superefficiency-lab.toml
    """


@main.command()
@run_options
@model_options
@grid_options
@discrete_options
def affinity(**options) -> None:
    """Affinity tables: Gaussian closed form and discrete Neyman-Pearson against enumeration."""
    execute('affinity', options, affinity_artifact)


@main.command()
@run_options
@model_options
@grid_options
@discrete_options
def tv(**options) -> None:
    """Total-variation tables: Gaussian closed form and discrete formula against enumeration."""
    execute('tv', options, tv_artifact)


@main.command()
@run_options
@model_options
@estimator_options
@click.option('--theta-list', default=None, help='Comma-separated parameter points')
@click.option('--n-list', default=None, help='Comma-separated sample sizes')
@click.option('--c-list', default=None, help='Comma-separated radius multipliers')
@click.option('--samples', type=int, default=None, help='Monte Carlo replications per cell')
@click.option('--full-sample', is_flag=True, default=None, help='Draw full samples instead of sample means')
def concentration(**options) -> None:
    """Exact against Monte Carlo concentration probabilities."""
    execute('concentration', options, concentration_artifact)


@main.command()
@run_options
@model_options
@estimator_options
@click.option('--theta', type=float, default=None, help='Parameter point')
@click.option('--theta-list', default=None, help='Parameter points for --all-or-nothing (first one is the pivot)')
@click.option('--c', 'c', type=float, default=None, help='c of the finite-scale lower-bound check')
@click.option('--c-grid', default=None, help='Comma-separated ascending c values')
@click.option('--n-grid', default=None, help='Comma-separated ascending sample sizes')
@click.option('--all-or-nothing', is_flag=True, default=False,
              help='Compare the MLE, constants and Hodges at every theta in --theta-list')
def efficiency(all_or_nothing: bool, **options) -> None:
    """Asymptotic efficiency on finite (c, n) grids."""
    execute('efficiency', options, lambda config: efficiency_artifact(config, all_or_nothing))


@main.command()
@run_options
@model_options
@estimator_options
@extraction_options
@click.option('--expect-superefficient', is_flag=True, default=False,
              help='Exit with status 4 when no superefficiency point is found')
@click.option('--countability', is_flag=True, default=False,
              help='Also check that (L, R) holds a single superefficiency locus')
def extract(expect_superefficient: bool, countability: bool, **options) -> None:
    """Recover a superefficiency point by certified interval shrinking."""
    execute(
        'extract', options,
        lambda config: extract_artifact(config, expect_superefficient, countability),
        countability=countability,
    )


@main.command('check-assumptions')
@run_options
@model_options
@grid_options
@click.option('--theta', type=float, default=None, help='Point at which the information is evaluated')
@click.option('--assumption-epsilon', type=float, default=None, help='Additive slack of the assumptions')
@click.option('--lam-list', default=None, help='Comma-separated local shifts for the LAN report')
@click.option('--lan-n-list', default=None, help='Comma-separated sample sizes for the LAN report')
@click.option('--lan-samples', type=int, default=None, help='Simulated samples per LAN report')
def check_assumptions(**options) -> None:
    """Slack tables of the model assumptions and the LAN report."""
    execute('check-assumptions', options, check_assumptions_artifact)


@main.command()
@run_options
@model_options
@click.option('--pivot', type=float, default=None, help='Hodges pivot (default: 0)')
@extraction_options
def demo(**options) -> None:
    """Canonical scenario: recover the Hodges pivot, then contrast with the MLE."""
    execute('demo', options, demo_artifact)


@main.command('init-config')
@click.argument('path', type=click.Path(dir_okay=False, path_type=Path))
def init_config(path: Path) -> None:
    """Write the commented reference configuration to PATH."""
    try:
        init_config_file(path)
    except OSError as e:
        print_error(f"Failed to create configuration file: {e}")
        sys.exit(1)
    print_success(f"Configuration file created: {path}")


if __name__ == '__main__':
    main()
