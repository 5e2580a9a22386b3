"""Experiment configuration: TOML files, defaults and validation."""

import math
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from .estimators import EstimatorKind, EstimatorSpec
from .extraction import ExtractionConfig, WidthError, choose_n, to_fraction
from .models import BRUTE_FORCE_MAX_OUTCOMES, GaussianLocationModel

# Python 3.11+ has tomllib built-in
if sys.version_info >= (3, 11):
    import tomllib
else:
    try:
        import tomli as tomllib
    except ImportError:
        tomllib = None  # type: ignore


LOCAL_CONFIG_NAME = ".superefficiency-lab.toml"
COMMANDS = ("affinity", "tv", "concentration", "efficiency", "extract", "check-assumptions", "demo")
OUTPUT_FORMATS = ("csv", "json", "both")


DEFAULT_CONFIG = """# superefficiency-lab configuration file
#
# Every key is optional; command-line flags override the values here.
#
# Configuration file locations (checked in order):
#   1. --config PATH
#   2. ./.superefficiency-lab.toml (project-specific)
#   3. ~/.config/superefficiency-lab/config.toml (global)

# ============================================================================
# Model
# ============================================================================

# Known standard deviation of the Gaussian location model
sigma = 1.0

# Open parameter interval (use -inf / inf for the whole real line)
theta_lower = -inf
theta_upper = inf

# ============================================================================
# Estimator
# ============================================================================

# One of: mle, hodges, constant, multi-hodges
estimator = "hodges"

# Hodges pivot, constant value, multi-pivot Hodges pivots
pivot = 0.0
value = 0.0
pivots = [0.0, 0.04]

# ============================================================================
# Parameter grids
# ============================================================================

# Parameter point for efficiency and assumption checks
theta = 0.0

# Parameter points for concentration tables and the all-or-nothing demo
theta_list = [0.0, 0.5, 1.0]

# (theta1, theta2, n) grid for affinity, tv and assumption tables
theta1_list = [-1.0, -0.5, 0.0, 0.5, 1.0]
theta2_list = [-1.0, -0.25, 0.0, 0.25, 1.0]
n_list = [1, 10, 100, 1000]

# Random discrete pairs compared against exhaustive enumeration
discrete_pairs = 20
discrete_k = 8

# ============================================================================
# Concentration
# ============================================================================

# Radius multipliers: radius = c / sqrt(n)
c_list = [0.5, 1.0, 2.0]

# Monte Carlo replications per cell, and whether to draw full samples
samples = 100000
full_sample = false

# ============================================================================
# Efficiency
# ============================================================================

c_grid = [1.0, 2.0, 3.0, 5.0, 7.0, 10.0]
n_grid = [100, 1000, 10000, 100000, 1000000, 10000000, 100000000]

# ============================================================================
# Extraction
# ============================================================================

# Radius multiplier, threshold factor and information bound
c = 1.0
a = 0.5
i_bar = 1.01

# Geometric shrink parameter and the model's additive affinity slack
epsilon = 0.1
model_slack = 0.0

# Smallest admissible sample size
n_min = 1

# Initial interval (L, R)
interval_left = -0.05
interval_right = 0.05

# Grid points per suitability scan, target width and iteration cap
grid_points = 64
tolerance = 0.001
max_iterations = 100

# Largest sample size tested by the single-locus check
n_max = 1000

# ============================================================================
# Assumption checks
# ============================================================================

# Additive slack allowed in the assumption inequalities
assumption_epsilon = 0.0

# Local shifts, sample sizes and simulated samples for the LAN report
lam_list = [0.5, 1.0, 2.0]
lan_n_list = [25, 100]
lan_samples = 10000

# ============================================================================
# Run settings
# ============================================================================

# Master seed (never derived from the clock)
seed = 0

# Worker threads for Monte Carlo chunks, grid cells and scans
workers = 1

# Output directory and format: csv, json, or both
out = "."
format = "csv"

# Enable verbose logging
verbose = false

# Log file path (empty to disable file logging)
log_file = ""
"""


class ConfigError(ValueError):
    """Invalid experiment configuration."""

    def __init__(self, key: str, message: str) -> None:
        super().__init__(f"{key}: {message}")
        self.key = key
        self.message = message

    def to_dict(self) -> dict:
        return {"error": "invalid_config", "key": self.key, "message": self.message}


@dataclass
class ExperimentConfig:
    """Resolved parameters of one command run; see DEFAULT_CONFIG for the meaning of each key."""
    sigma: float = 1.0
    theta_lower: float = -math.inf
    theta_upper: float = math.inf

    estimator: str = "hodges"
    pivot: float = 0.0
    value: float = 0.0
    pivots: List[float] = field(default_factory=lambda: [0.0, 0.04])

    theta: float = 0.0
    theta_list: List[float] = field(default_factory=lambda: [0.0, 0.5, 1.0])
    theta1_list: List[float] = field(default_factory=lambda: [-1.0, -0.5, 0.0, 0.5, 1.0])
    theta2_list: List[float] = field(default_factory=lambda: [-1.0, -0.25, 0.0, 0.25, 1.0])
    n_list: List[int] = field(default_factory=lambda: [1, 10, 100, 1000])
    discrete_pairs: int = 20
    discrete_k: int = 8

    c_list: List[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    samples: int = 100000
    full_sample: bool = False

    c_grid: List[float] = field(default_factory=lambda: [1.0, 2.0, 3.0, 5.0, 7.0, 10.0])
    n_grid: List[int] = field(default_factory=lambda: [10 ** k for k in range(2, 9)])

    c: float = 1.0
    a: float = 0.5
    i_bar: float = 1.01
    epsilon: float = 0.1
    model_slack: float = 0.0
    n_min: int = 1
    interval_left: float = -0.05
    interval_right: float = 0.05
    grid_points: int = 64
    tolerance: float = 0.001
    max_iterations: int = 100
    n_max: int = 1000

    assumption_epsilon: float = 0.0
    lam_list: List[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    lan_n_list: List[int] = field(default_factory=lambda: [25, 100])
    lan_samples: int = 10000

    seed: int = 0
    workers: int = 1
    out: str = "."
    format: str = "csv"
    verbose: bool = False
    log_file: str = ""

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "ExperimentConfig":
        """
        Build a config from flat key-value pairs, coercing numbers and lists.

        Raises:
            ConfigError: On unknown keys or values of the wrong type
        """
        known = {f.name: f for f in fields(cls)}
        defaults = asdict(cls())
        kwargs = {}
        for key, raw in values.items():
            if key not in known:
                raise ConfigError(key, "unknown configuration key")
            kwargs[key] = _coerce(key, raw, defaults[key])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return asdict(self)

    def model(self) -> GaussianLocationModel:
        return GaussianLocationModel(sigma=self.sigma, theta_domain=(self.theta_lower, self.theta_upper))

    def estimator_spec(self) -> EstimatorSpec:
        kind = EstimatorKind(self.estimator)
        if kind is EstimatorKind.HODGES:
            return EstimatorSpec.hodges(self.pivot)
        if kind is EstimatorKind.CONSTANT:
            return EstimatorSpec.constant(self.value)
        if kind is EstimatorKind.MULTI_HODGES:
            return EstimatorSpec.multi_hodges(self.pivots)
        return EstimatorSpec.mle()

    def extraction_config(self) -> ExtractionConfig:
        return ExtractionConfig(
            c=self.c,
            a=self.a,
            i_bar=self.i_bar,
            epsilon=self.epsilon,
            n_min=self.n_min,
            initial_interval=(self.interval_left, self.interval_right),
            grid_points=self.grid_points,
            tolerance=self.tolerance,
            max_iterations=self.max_iterations,
            model_slack=self.model_slack,
        )

    def validate(self, command: str, countability: bool = False) -> None:
        """
        Check every parameter the command uses before any computation.

        The single-locus check runs for `demo`, and for `extract` when
        `countability` is set; it needs n_max at least the sample size
        chosen for the initial interval.

        Raises:
            ConfigError: If a value violates a precondition
            WidthError: If the extraction interval admits no sample size
        """
        if command not in COMMANDS:
            raise ConfigError("command", f"unknown command {command!r}")
        if self.format not in OUTPUT_FORMATS:
            raise ConfigError("format", f"must be one of {', '.join(OUTPUT_FORMATS)}")
        _require(self.workers >= 1, "workers", "must be at least 1")
        _require(self.seed >= 0, "seed", "must be nonnegative")

        model = self._checked("sigma", self.model)
        if self.estimator not in {kind.value for kind in EstimatorKind}:
            raise ConfigError("estimator", f"unknown estimator {self.estimator!r}")
        spec = self._checked("estimator", self.estimator_spec)
        self._checked("estimator", lambda: spec.validate_for(model))

        if command in ("affinity", "tv", "check-assumptions"):
            self._check_points(model, "theta1_list", self.theta1_list)
            self._check_points(model, "theta2_list", self.theta2_list)
            _require_positive_ints("n_list", self.n_list)
        if command in ("affinity", "tv"):
            _require(self.discrete_pairs >= 0, "discrete_pairs", "must be nonnegative")
            _require(1 <= self.discrete_k <= BRUTE_FORCE_MAX_OUTCOMES, "discrete_k",
                     f"must lie in [1, {BRUTE_FORCE_MAX_OUTCOMES}]")
        if command == "concentration":
            self._check_points(model, "theta_list", self.theta_list)
            _require_positive_ints("n_list", self.n_list)
            _require(bool(self.c_list) and all(c > 0 for c in self.c_list), "c_list", "must hold positive values")
            _require(self.samples >= 100, "samples", "must be at least 100")
        if command == "efficiency":
            self._check_points(model, "theta", [self.theta])
            self._check_points(model, "theta_list", self.theta_list)
            _require_ascending("c_grid", self.c_grid)
            _require_ascending("n_grid", self.n_grid)
            _require_positive_ints("n_grid", self.n_grid)
            _require(self.c > 0, "c", "must be positive")
        if command == "check-assumptions":
            self._check_points(model, "theta", [self.theta])
            _require(self.assumption_epsilon >= 0, "assumption_epsilon", "must be nonnegative")
            _require(all(lam >= 0 for lam in self.lam_list), "lam_list", "must be nonnegative")
            _require_positive_ints("lan_n_list", self.lan_n_list)
            _require(self.lan_samples >= 1, "lan_samples", "must be positive")
        if command in ("extract", "demo"):
            for key in ("c", "a", "i_bar", "epsilon", "tolerance", "interval_left", "interval_right"):
                self._checked(key, lambda: to_fraction(getattr(self, key)))
            try:
                extraction = self.extraction_config()
            except WidthError:
                raise
            except ValueError as e:
                raise ConfigError("extraction", str(e)) from e
            self._checked("interval_left", lambda: extraction.validate_for(model))
            _require(self.n_max >= 1, "n_max", "must be positive")
            if command == "demo" or countability:
                n_star = choose_n(extraction.initial_interval[0], extraction.initial_interval[1], extraction)
                _require(self.n_max >= n_star, "n_max", f"must be at least the chosen sample size {n_star}")

    def _checked(self, key: str, build):
        try:
            return build()
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise ConfigError(key, str(e)) from e

    def _check_points(self, model: GaussianLocationModel, key: str, points: List[float]) -> None:
        _require(bool(points), key, "must not be empty")
        self._checked(key, lambda: model.require(*points))


def _require(condition: bool, key: str, message: str) -> None:
    if not condition:
        raise ConfigError(key, message)


def _require_positive_ints(key: str, values: List[int]) -> None:
    _require(bool(values) and all(isinstance(v, int) and v >= 1 for v in values), key, "must hold positive integers")


def _require_ascending(key: str, values: List[float]) -> None:
    _require(bool(values) and all(v > 0 for v in values), key, "must hold positive values")
    _require(all(b > a for a, b in zip(values, values[1:])), key, "must be strictly ascending")


def _coerce(key: str, raw: Any, default: Any) -> Any:
    """Convert a raw TOML or command-line value to the type of the default."""
    try:
        if isinstance(default, bool):
            if not isinstance(raw, bool):
                raise TypeError(f"expected true or false, got {raw!r}")
            return raw
        if isinstance(default, list):
            if not isinstance(raw, (list, tuple)):
                raise TypeError(f"expected a list, got {raw!r}")
            element = default[0] if default else 0.0
            return [_coerce(key, item, element) for item in raw]
        if isinstance(default, int):
            if isinstance(raw, bool) or (isinstance(raw, float) and not raw.is_integer()):
                raise TypeError(f"expected an integer, got {raw!r}")
            return int(raw)
        if isinstance(default, float):
            if isinstance(raw, bool):
                raise TypeError(f"expected a number, got {raw!r}")
            return float(raw)
        return str(raw)
    except (TypeError, ValueError) as e:
        raise ConfigError(key, str(e)) from e


def load_config(config_file: Path) -> Dict[str, Any]:
    """
    Load flat configuration values from a TOML file.

    Args:
        config_file: Path to TOML configuration file

    Returns:
        Dictionary of configuration values, empty if the file does not exist

    Raises:
        ConfigError: If TOML support is missing, the file cannot be parsed
            or it contains tables
    """
    if not config_file.exists():
        return {}

    if tomllib is None:
        raise ConfigError("config", "TOML support not available; for Python <3.11 install tomli")

    try:
        with open(config_file, 'rb') as f:
            values = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError("config", f"cannot parse {config_file}: {e}") from e

    for key, value in values.items():
        if isinstance(value, dict):
            raise ConfigError(key, "tables are not supported; use flat keys")
    return values


def find_config_file(explicit: Optional[Path] = None) -> Optional[Path]:
    """
    Find the configuration file.

    Checks:
    1. explicit path (--config)
    2. ./.superefficiency-lab.toml (local directory)
    3. ~/.config/superefficiency-lab/config.toml (user config)

    Returns:
        Path to config file if found, None otherwise

    Raises:
        ConfigError: If an explicit path does not exist
    """
    if explicit is not None:
        if not explicit.exists():
            raise ConfigError("config", f"configuration file not found: {explicit}")
        return explicit

    local_config = Path.cwd() / LOCAL_CONFIG_NAME
    if local_config.exists():
        return local_config

    user_config = Path.home() / '.config' / 'superefficiency-lab' / 'config.toml'
    if user_config.exists():
        return user_config

    return None


def init_config_file(output_path: Path) -> None:
    """Write the commented reference configuration."""
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(DEFAULT_CONFIG, encoding='utf-8')


def merge_config(file_values: Mapping[str, Any], cli_values: Mapping[str, Any]) -> ExperimentConfig:
    """
    Resolve the configuration of a run.

    Built-in default < config file < command-line flag. Flags left at
    None were not given and do not override anything.
    """
    merged = dict(file_values)
    merged.update({key: value for key, value in cli_values.items() if value is not None})
    return ExperimentConfig.from_mapping(merged)
