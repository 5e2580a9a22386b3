"""
Recovery of a superefficiency point by certified interval shrinking.

Starting from an interval with rational end-points, each iteration picks a
sample size n matched to the current width, scans the interval for
points q whose concentration probability at radius c n^(-1/2) falls below
the threshold a Phi(-c sqrt(I_bar)), and covers them by an interval
shorter by the factor (1 + epsilon)^(-1). Interval end-points and grid
points are exact fractions; probabilities are floating point.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .estimators import EstimatorSpec, concentration_exact
from .models import DomainError, GaussianLocationModel, affinity_exact_gaussian, normal_cdf

logger = logging.getLogger(__name__)

Rational = Union[int, float, str, Fraction]
Interval = Tuple[Fraction, Fraction]

# margin applied when comparing a probability with the suitability threshold
COMPARISON_MARGIN = 1e-12
MIN_GRID_POINTS = 16


class WidthError(ValueError):
    """No admissible sample size exists for an interval: it is too long."""


class PreconditionError(ValueError):
    """Input rejected because an operation's premises do not hold."""


class NoSuperefficientPoint(Exception):
    """A suitability scan found no suitable point."""


class AssumptionViolation(Exception):
    """A certificate of the shrinking step failed."""


def to_fraction(value: Rational) -> Fraction:
    """
    Convert to an exact fraction.

    Floats go through their shortest decimal representation, so 0.1
    becomes 1/10 rather than the nearest binary fraction.
    """
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def interval_width(interval: Interval) -> Fraction:
    return interval[1] - interval[0]


@dataclass(frozen=True)
class ExtractionConfig:
    """
    Constants of the extraction algorithm.

    Attributes:
        c: Radius multiplier in c n^(-1/2)
        a: Threshold factor in (0, 1)
        i_bar: Information bound, above I(q) on the initial interval
        epsilon: Geometric shrink parameter
        n_min: Smallest admissible sample size
        initial_interval: Open interval (L, R) with rational end-points
        grid_points: Points per suitability scan
        tolerance: Target interval width
        max_iterations: Iteration cap
        model_slack: Additive slack with which the model satisfies the
            affinity lower bound (0 for the Gaussian model)
    """
    c: Fraction = Fraction(1)
    a: Fraction = Fraction(1, 2)
    i_bar: Fraction = Fraction(101, 100)
    epsilon: Fraction = Fraction(1, 10)
    n_min: int = 1
    initial_interval: Interval = (Fraction(-1, 20), Fraction(1, 20))
    grid_points: int = 64
    tolerance: Fraction = Fraction(1, 1000)
    max_iterations: int = 100
    model_slack: float = 0.0

    def __post_init__(self) -> None:
        for name in ("c", "a", "i_bar", "epsilon", "tolerance"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        left, right = (to_fraction(v) for v in self.initial_interval)
        object.__setattr__(self, "initial_interval", (left, right))

        if self.c <= 0 or self.i_bar <= 0 or self.epsilon <= 0 or self.tolerance <= 0:
            raise DomainError("c, i_bar, epsilon and tolerance must be positive")
        if not 0 < self.a < 1:
            raise DomainError(f"a must lie in (0, 1), got {self.a}")
        if self.n_min < 1 or self.max_iterations < 1:
            raise DomainError("n_min and max_iterations must be positive")
        if self.grid_points < MIN_GRID_POINTS:
            raise DomainError(f"grid_points must be at least {MIN_GRID_POINTS}, got {self.grid_points}")
        if self.model_slack < 0:
            raise DomainError(f"model_slack must be nonnegative, got {self.model_slack}")
        if not left < right:
            raise DomainError(f"initial interval must satisfy L < R, got ({left}, {right})")
        if not self.exclusion_affinity_bound > self.threshold:
            raise DomainError(
                f"epsilon={self.epsilon} too large: Phi(-(1+eps)^3 c sqrt(I)) - slack = "
                f"{self.exclusion_affinity_bound:.6g} does not exceed the threshold {self.threshold:.6g}"
            )
        if not width_admissible(right - left, self):
            raise WidthError(
                f"initial interval of width {right - left} is too long for c={self.c}, "
                f"epsilon={self.epsilon}, n_min={self.n_min}"
            )

    @property
    def threshold(self) -> float:
        """a Phi(-c sqrt(I_bar))."""
        return float(self.a) * normal_cdf(-float(self.c) * math.sqrt(self.i_bar))

    @property
    def exclusion_affinity_bound(self) -> float:
        """Phi(-(1 + epsilon)^3 c sqrt(I_bar)) - model_slack."""
        scaled = float((1 + self.epsilon) ** 3 * self.c) * math.sqrt(self.i_bar)
        return normal_cdf(-scaled) - self.model_slack

    def validate_for(self, model: GaussianLocationModel) -> None:
        """
        Check the initial interval against the model.

        Raises:
            DomainError: If (L, R) is not inside the parameter interval or
                the information reaches i_bar on it
        """
        lower, upper = model.theta_domain
        left, right = self.initial_interval
        if not (lower <= left and right <= upper):
            raise DomainError(f"initial interval ({left}, {right}) not inside {model.theta_domain}")
        midpoint = float((left + right) / 2)
        if not model.fisher_information(midpoint) < self.i_bar:
            raise DomainError(f"i_bar={self.i_bar} must exceed the Fisher information {model.fisher_information(midpoint)}")

    def to_dict(self) -> dict:
        return {
            "c": str(self.c),
            "a": str(self.a),
            "i_bar": str(self.i_bar),
            "epsilon": str(self.epsilon),
            "n_min": self.n_min,
            "initial_interval": [str(v) for v in self.initial_interval],
            "grid_points": self.grid_points,
            "tolerance": str(self.tolerance),
            "max_iterations": self.max_iterations,
            "model_slack": self.model_slack,
            "threshold": self.threshold,
        }


def select_epsilon(c: Rational, a: Rational, i_bar: Rational, model_slack: Optional[float] = None, max_power: int = 40) -> Fraction:
    """
    Largest epsilon = 2^(-k) with Phi(-(1+eps)^3 c sqrt(I)) - slack > a Phi(-c sqrt(I)).

    Args:
        c: Radius multiplier
        a: Threshold factor
        i_bar: Information bound
        model_slack: Additive slack of the model; when None the slack is
            taken equal to epsilon itself
        max_power: Largest k tried

    Raises:
        DomainError: If no k up to max_power works
    """
    c_f, a_f, i_f = float(to_fraction(c)), float(to_fraction(a)), float(to_fraction(i_bar))
    threshold = a_f * normal_cdf(-c_f * math.sqrt(i_f))
    for k in range(1, max_power + 1):
        epsilon = Fraction(1, 2 ** k)
        slack = float(epsilon) if model_slack is None else model_slack
        if normal_cdf(-float((1 + epsilon) ** 3) * c_f * math.sqrt(i_f)) - slack > threshold:
            return epsilon
    raise DomainError(f"no epsilon = 2^-k with k <= {max_power} satisfies the premise")


# ============================================================================
# Sample-size selection
# ============================================================================

def _n_range(width: Fraction, config: ExtractionConfig) -> Tuple[Fraction, Fraction]:
    """Exact bounds 4(1+eps)^4 c^2 / w^2 and 4(1+eps)^6 c^2 / w^2."""
    base = 4 * config.c ** 2 / width ** 2
    return base * (1 + config.epsilon) ** 4, base * (1 + config.epsilon) ** 6


def width_admissible(width: Fraction, config: ExtractionConfig) -> bool:
    """
    Whether an interval of this width is short enough.

    The admissible range of n must be longer than one and start at or
    above n_min, so that it contains an integer n >= n_min.
    """
    lower, upper = _n_range(width, config)
    return upper - lower > 1 and lower >= config.n_min


def certify_sample_size(width: Fraction, n: int, config: ExtractionConfig) -> bool:
    """Exact check of 2(1+eps)^2 c n^(-1/2) <= width <= 2(1+eps)^3 c n^(-1/2)."""
    scaled = width ** 2 * n
    low = (2 * (1 + config.epsilon) ** 2 * config.c) ** 2
    high = (2 * (1 + config.epsilon) ** 3 * config.c) ** 2
    return low <= scaled <= high


def choose_n(theta1: Rational, theta2: Rational, config: ExtractionConfig) -> int:
    """
    Smallest sample size matched to the interval (theta1, theta2).

    Returns:
        Smallest integer n >= n_min with
        4(1+eps)^4 c^2 / w^2 <= n <= 4(1+eps)^6 c^2 / w^2

    Raises:
        DomainError: If theta2 <= theta1
        WidthError: If the range contains no such integer
    """
    width = to_fraction(theta2) - to_fraction(theta1)
    if width <= 0:
        raise DomainError(f"interval must have positive width, got {width}")
    lower, upper = _n_range(width, config)
    n = max(math.ceil(lower), config.n_min)
    if n > upper:
        raise WidthError(
            f"no integer n >= {config.n_min} in [{float(lower):.6g}, {float(upper):.6g}] "
            f"for width {float(width):.6g}; start from a shorter interval"
        )
    if not certify_sample_size(width, n, config):
        raise AssumptionViolation(f"n={n} fails the sample-size certificate for width {width}")
    return n


# ============================================================================
# Suitability
# ============================================================================

def is_suitable(
    model: GaussianLocationModel,
    spec: EstimatorSpec,
    q: Rational,
    n: int,
    config: ExtractionConfig,
) -> Tuple[float, bool]:
    """
    Evaluate P_{n,q}(|T_n - q| > c n^(-1/2)) and compare it with the threshold.

    Returns:
        Tuple of (probability, suitable)

    Raises:
        DomainError: If q lies outside the parameter interval or n < n_min
    """
    if n < config.n_min:
        raise DomainError(f"n={n} below n_min={config.n_min}")
    point = float(to_fraction(q))
    radius = float(config.c) / math.sqrt(n)
    probability = concentration_exact(model, spec, point, n, radius, center=point).probability
    return probability, probability <= config.threshold + COMPARISON_MARGIN


@dataclass
class SuitabilityPoint:
    q: Fraction
    probability: float
    suitable: bool


@dataclass
class SuitabilityScan:
    """Suitability of equally spaced interior points of an interval."""
    n: int
    threshold: float
    points: List[SuitabilityPoint]
    grid_step: Fraction
    resolution_ok: bool
    suitable_hull: Optional[Interval] = None
    diameter: Fraction = Fraction(0)

    @property
    def suitable_points(self) -> List[Fraction]:
        return [point.q for point in self.points if point.suitable]


def grid(interval: Interval, points: int) -> Tuple[List[Fraction], Fraction]:
    """Equally spaced interior points of an interval (end-points excluded) and their spacing."""
    left, right = interval
    step = (right - left) / (points + 1)
    return [left + k * step for k in range(1, points + 1)], step


def scan_suitable(
    model: GaussianLocationModel,
    spec: EstimatorSpec,
    interval: Interval,
    n: int,
    config: ExtractionConfig,
    workers: int = 1,
) -> SuitabilityScan:
    """
    Evaluate suitability on config.grid_points interior points of an interval.

    The scan records whether its spacing is at most c n^(-1/2) / 4.

    Raises:
        DomainError: If the interval is not inside the initial interval
    """
    left, right = (to_fraction(v) for v in interval)
    outer_left, outer_right = config.initial_interval
    if not (outer_left <= left < right <= outer_right):
        raise DomainError(f"scan interval ({left}, {right}) not inside ({outer_left}, {outer_right})")

    qs, step = grid((left, right), config.grid_points)

    def evaluate(q: Fraction) -> SuitabilityPoint:
        return SuitabilityPoint(q, *is_suitable(model, spec, q, n, config))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(evaluate, qs))
    else:
        points = [evaluate(q) for q in qs]

    resolution_ok = (4 * step) ** 2 * n <= config.c ** 2
    if not resolution_ok:
        logger.warning("scan spacing %.3g exceeds c n^(-1/2) / 4 at n=%d", float(step), n)

    scan = SuitabilityScan(
        n=n,
        threshold=config.threshold,
        points=points,
        grid_step=step,
        resolution_ok=resolution_ok,
    )
    suitable = scan.suitable_points
    if suitable:
        scan.suitable_hull = (min(suitable), max(suitable))
        scan.diameter = scan.suitable_hull[1] - scan.suitable_hull[0]
    return scan


def shrink_interval(scan: SuitabilityScan, interval_before: Interval, config: ExtractionConfig) -> Interval:
    """
    Cover the suitable points by a shorter interval.

    The hull of the suitable points is widened by one grid step on each
    side and clipped to the previous interval.

    Raises:
        NoSuperefficientPoint: If the scan found no suitable point
        AssumptionViolation: If the hull diameter exceeds
            (1+eps)^(-2) width or the new width exceeds (1+eps)^(-1) width
    """
    if scan.suitable_hull is None:
        raise NoSuperefficientPoint(f"no suitable point at n={scan.n}")
    left, right = interval_before
    width = right - left
    if scan.diameter > width / (1 + config.epsilon) ** 2:
        raise AssumptionViolation(
            f"suitable points span {float(scan.diameter):.6g} > (1+eps)^-2 * {float(width):.6g}"
        )
    hull_left, hull_right = scan.suitable_hull
    after = (max(hull_left - scan.grid_step, left), min(hull_right + scan.grid_step, right))
    if interval_width(after) > width / (1 + config.epsilon):
        raise AssumptionViolation(
            f"covering interval of width {float(interval_width(after)):.6g} "
            f"exceeds (1+eps)^-1 * {float(width):.6g}"
        )
    return after


# ============================================================================
# Extraction loop
# ============================================================================

class ExtractionOutcome(Enum):
    CONVERGED = "converged"
    NO_SUPEREFFICIENT_POINT = "no_superefficient_point"
    ASSUMPTION_VIOLATION = "assumption_violation"
    WIDTH_ERROR = "width_error"
    MAX_ITERATIONS = "max_iterations"


@dataclass
class IterationRecord:
    index: int
    interval_before: Interval
    n: Optional[int] = None
    scan: Optional[SuitabilityScan] = None
    interval_after: Optional[Interval] = None

    @property
    def width_ratio(self) -> Optional[float]:
        if self.interval_after is None:
            return None
        return float(interval_width(self.interval_after) / interval_width(self.interval_before))


@dataclass
class ExtractionTrace:
    """Every interval, sample size and scan of one extraction run."""
    spec: EstimatorSpec
    config: ExtractionConfig
    iterations: List[IterationRecord] = field(default_factory=list)
    outcome: ExtractionOutcome = ExtractionOutcome.MAX_ITERATIONS
    theta_hat: Optional[float] = None
    final_interval: Optional[Interval] = None
    failed_iteration: Optional[int] = None
    detail: str = ""

    @property
    def converged(self) -> bool:
        return self.outcome is ExtractionOutcome.CONVERGED

    def to_dict(self) -> dict:
        def interval(value: Optional[Interval]) -> Optional[dict]:
            if value is None:
                return None
            return {
                "left": str(value[0]),
                "right": str(value[1]),
                "left_float": float(value[0]),
                "right_float": float(value[1]),
                "width": float(interval_width(value)),
            }

        iterations = []
        for record in self.iterations:
            entry = {
                "index": record.index,
                "interval_before": interval(record.interval_before),
                "n": record.n,
                "interval_after": interval(record.interval_after),
                "width_ratio": record.width_ratio,
            }
            if record.scan is not None:
                entry["scan"] = {
                    "n": record.scan.n,
                    "threshold": record.scan.threshold,
                    "grid_step": float(record.scan.grid_step),
                    "resolution_ok": record.scan.resolution_ok,
                    "suitable_hull": interval(record.scan.suitable_hull),
                    "diameter": float(record.scan.diameter),
                    "points": [
                        {"q": float(p.q), "probability": p.probability, "suitable": p.suitable}
                        for p in record.scan.points
                    ],
                }
            iterations.append(entry)
        return {
            "estimator": self.spec.to_dict(),
            "config": self.config.to_dict(),
            "outcome": self.outcome.value,
            "theta_hat": self.theta_hat,
            "final_interval": interval(self.final_interval),
            "failed_iteration": self.failed_iteration,
            "detail": self.detail,
            "iterations": iterations,
        }


def extract_parameter(
    model: GaussianLocationModel,
    spec: EstimatorSpec,
    config: ExtractionConfig,
    workers: int = 1,
) -> ExtractionTrace:
    """
    Run the interval-shrinking algorithm from config.initial_interval.

    Iterates choose_n, scan_suitable and shrink_interval until the width
    is at most config.tolerance or config.max_iterations is reached.
    Failures are recorded in the trace together with the iteration index.

    Returns:
        ExtractionTrace; on convergence theta_hat is the midpoint of the
        final interval
    """
    config.validate_for(model)
    spec.validate_for(model)
    trace = ExtractionTrace(spec=spec, config=config)
    interval = config.initial_interval

    while interval_width(interval) > config.tolerance:
        index = len(trace.iterations) + 1
        if index > config.max_iterations:
            trace.outcome = ExtractionOutcome.MAX_ITERATIONS
            trace.final_interval = interval
            trace.theta_hat = float((interval[0] + interval[1]) / 2)
            return trace

        record = IterationRecord(index=index, interval_before=interval)
        trace.iterations.append(record)
        try:
            record.n = choose_n(interval[0], interval[1], config)
            record.scan = scan_suitable(model, spec, interval, record.n, config, workers)
            record.interval_after = shrink_interval(record.scan, interval, config)
        except WidthError as e:
            return _fail(trace, ExtractionOutcome.WIDTH_ERROR, index, str(e))
        except NoSuperefficientPoint as e:
            return _fail(trace, ExtractionOutcome.NO_SUPEREFFICIENT_POINT, index, str(e))
        except AssumptionViolation as e:
            return _fail(trace, ExtractionOutcome.ASSUMPTION_VIOLATION, index, str(e))

        logger.debug(
            "iteration %d: n=%d width %.4g -> %.4g",
            index, record.n, float(interval_width(interval)), float(interval_width(record.interval_after)),
        )
        interval = record.interval_after

    trace.outcome = ExtractionOutcome.CONVERGED
    trace.final_interval = interval
    trace.theta_hat = float((interval[0] + interval[1]) / 2)
    logger.info("%s converged to %.6g in %d iterations", spec.label, trace.theta_hat, len(trace.iterations))
    return trace


def _fail(trace: ExtractionTrace, outcome: ExtractionOutcome, index: int, detail: str) -> ExtractionTrace:
    trace.outcome = outcome
    trace.failed_iteration = index
    trace.detail = detail
    logger.info("extraction stopped at iteration %d: %s (%s)", index, outcome.value, detail)
    return trace


# ============================================================================
# Exclusion and countability checks
# ============================================================================

@dataclass
class ExclusionReport:
    """Two suitable points at the same n cannot be further apart than 2 c n^(-1/2)."""
    q1: Fraction
    q2: Fraction
    n: int
    c: Fraction
    probability_q1: float
    probability_q2: float
    threshold: float
    separation: float
    separation_bound: float
    witness_mean: float
    affinity: float
    affinity_lower_bound: float

    @property
    def separation_ok(self) -> bool:
        return (self.q2 - self.q1) ** 2 * self.n <= 4 * self.c ** 2

    @property
    def affinity_ok(self) -> bool:
        return self.affinity >= self.affinity_lower_bound - COMPARISON_MARGIN

    @property
    def excluded(self) -> bool:
        """The affinity exceeds the threshold, so the two exceedance events cannot cover everything."""
        return self.affinity > self.threshold

    @property
    def passed(self) -> bool:
        return self.separation_ok and self.affinity_ok and self.excluded

    def to_dict(self) -> dict:
        return {
            "q1": float(self.q1),
            "q2": float(self.q2),
            "n": self.n,
            "c": float(self.c),
            "probability_q1": self.probability_q1,
            "probability_q2": self.probability_q2,
            "threshold": self.threshold,
            "separation": self.separation,
            "separation_bound": self.separation_bound,
            "witness_mean": self.witness_mean,
            "affinity": self.affinity,
            "affinity_lower_bound": self.affinity_lower_bound,
            "separation_ok": self.separation_ok,
            "affinity_ok": self.affinity_ok,
            "excluded": self.excluded,
            "passed": self.passed,
        }


def exclusion_check(
    model: GaussianLocationModel,
    spec: EstimatorSpec,
    q1: Rational,
    q2: Rational,
    n: int,
    config: ExtractionConfig,
) -> ExclusionReport:
    """
    Check the exclusion argument for two suitable points.

    Both points must be suitable at n and satisfy
    |q2 - q1| <= 2(1+eps)^3 c n^(-1/2). The report then shows
    |q2 - q1| <= 2 c n^(-1/2), a sample mean within c n^(-1/2) of both
    points, and the affinity lower bound Phi(-(1+eps)^3 c sqrt(I_bar)) - slack.

    Raises:
        PreconditionError: If a point is not suitable or the points are too far apart
    """
    q1, q2 = sorted((to_fraction(q1), to_fraction(q2)))
    p1, suitable1 = is_suitable(model, spec, q1, n, config)
    p2, suitable2 = is_suitable(model, spec, q2, n, config)
    if not (suitable1 and suitable2):
        raise PreconditionError(f"both points must be suitable at n={n} (probabilities {p1:.6g}, {p2:.6g})")
    if (q2 - q1) ** 2 * n > (2 * (1 + config.epsilon) ** 3 * config.c) ** 2:
        raise PreconditionError(f"points {q1} and {q2} are further apart than 2(1+eps)^3 c n^(-1/2)")

    return ExclusionReport(
        q1=q1,
        q2=q2,
        n=n,
        c=config.c,
        probability_q1=p1,
        probability_q2=p2,
        threshold=config.threshold,
        separation=float(q2 - q1),
        separation_bound=2 * float(config.c) / math.sqrt(n),
        witness_mean=float((q1 + q2) / 2),
        affinity=affinity_exact_gaussian(model, float(q1), float(q2), n),
        affinity_lower_bound=config.exclusion_affinity_bound,
    )


@dataclass
class CountabilityReport:
    """Grid points suitable at every tested n, and whether they form a single locus."""
    n_star: int
    tested_n: List[int]
    persistent_points: List[Fraction]
    diameter: Fraction
    diameter_bound: float
    loci: int
    passed: bool

    def to_dict(self) -> dict:
        return {
            "n_star": self.n_star,
            "tested_n": [self.tested_n[0], self.tested_n[-1]] if self.tested_n else [],
            "tested_count": len(self.tested_n),
            "persistent_points": [float(q) for q in self.persistent_points],
            "diameter": float(self.diameter),
            "diameter_bound": self.diameter_bound,
            "loci": self.loci,
            "passed": self.passed,
        }


def count_loci(points: Sequence[Fraction], step: Fraction) -> int:
    """Number of runs of grid points separated by more than one grid step."""
    ordered = sorted(points)
    return sum(1 for i, q in enumerate(ordered) if i == 0 or q - ordered[i - 1] > step)


def countability_gap_check(
    model: GaussianLocationModel,
    spec: EstimatorSpec,
    config: ExtractionConfig,
    n_max: int,
) -> CountabilityReport:
    """
    Finite-scale check that (L, R) holds at most one persistent superefficiency locus.

    Every integer n in the admissible range of (L, R), capped at n_max,
    is tested; a grid point is persistent if it is suitable at all of
    them. The persistent set must have diameter at most 2 c n*^(-1/2),
    n* being the sample size chosen for (L, R).

    Raises:
        DomainError: If n_max is below the chosen sample size
    """
    config.validate_for(model)
    spec.validate_for(model)
    interval = config.initial_interval
    n_star = choose_n(interval[0], interval[1], config)
    if n_max < n_star:
        raise DomainError(f"n_max={n_max} below the chosen sample size {n_star}")
    _, upper = _n_range(interval_width(interval), config)
    tested = list(range(n_star, min(math.floor(upper), n_max) + 1))

    qs, step = grid(interval, config.grid_points)
    persistent = set(qs)
    for n in tested:
        scan = scan_suitable(model, spec, interval, n, config)
        persistent.intersection_update(scan.suitable_points)
        if not persistent:
            break

    points = sorted(persistent)
    diameter = points[-1] - points[0] if points else Fraction(0)
    passed = diameter ** 2 * n_star <= 4 * config.c ** 2
    logger.debug("countability check for %s: %d persistent points over %d sample sizes", spec.label, len(points), len(tested))
    return CountabilityReport(
        n_star=n_star,
        tested_n=tested,
        persistent_points=points,
        diameter=diameter,
        diameter_bound=2 * float(config.c) / math.sqrt(n_star),
        loci=count_loci(points, step),
        passed=passed,
    )


def render_trace(trace: ExtractionTrace) -> str:
    """Plain-text trace: one line per iteration with width, n, hull and certificate status."""
    lines = [f"# {trace.spec.label}, threshold {trace.config.threshold:.6g}"]
    for record in trace.iterations:
        width = float(interval_width(record.interval_before))
        n = "-" if record.n is None else str(record.n)
        if record.scan is None or record.scan.suitable_hull is None:
            hull = "none"
        else:
            hull = "[{:.6g}, {:.6g}]".format(*(float(v) for v in record.scan.suitable_hull))
        if record.interval_after is not None:
            status = f"ok ratio={record.width_ratio:.4f}"
        else:
            status = "failed"
        if record.scan is not None and not record.scan.resolution_ok:
            status += " coarse-grid"
        lines.append(f"{record.index:4d}  width={width:.6g}  n={n}  hull={hull}  {status}")
    result = f"outcome: {trace.outcome.value}"
    if trace.theta_hat is not None:
        result += f"  theta_hat={trace.theta_hat:.6g}"
    if trace.detail:
        result += f"  ({trace.detail})"
    lines.append(result)
    return "\n".join(lines) + "\n"
