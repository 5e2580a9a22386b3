"""Estimators and their concentration probabilities."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from .models import DomainError, GaussianLocationModel, normal_cdf

logger = logging.getLogger(__name__)

MIN_MC_SAMPLES = 100
DEFAULT_CHUNK_SIZE = 1 << 16
# observations held in memory at once in full-sample mode
_FULL_SAMPLE_BLOCK = 1 << 22


class EstimatorKind(Enum):
    """Estimator families."""
    MLE = "mle"
    HODGES = "hodges"
    CONSTANT = "constant"
    MULTI_HODGES = "multi-hodges"


class ConcentrationMethod(Enum):
    """How a concentration probability was obtained."""
    EXACT = "exact"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class EstimatorSpec:
    """
    Choice of estimator.

    MLE is the sample mean. Hodges returns `pivot` when the mean lies
    strictly within n^(-1/4) of it, the mean otherwise. Constant always
    returns `value`. Multi-Hodges generalises Hodges to several pivots,
    returning the nearest pivot whose band contains the mean.
    """
    kind: EstimatorKind
    pivot: Optional[float] = None
    value: Optional[float] = None
    pivots: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is EstimatorKind.HODGES and self.pivot is None:
            raise DomainError("Hodges estimator requires a pivot")
        if self.kind is EstimatorKind.CONSTANT and self.value is None:
            raise DomainError("constant estimator requires a value")
        if self.kind is EstimatorKind.MULTI_HODGES and not self.pivots:
            raise DomainError("multi-pivot Hodges estimator requires at least one pivot")
        if self.kind is not EstimatorKind.HODGES and self.pivot is not None:
            raise DomainError(f"pivot is meaningless for {self.kind.value}")
        if self.kind is not EstimatorKind.CONSTANT and self.value is not None:
            raise DomainError(f"value is meaningless for {self.kind.value}")
        if self.kind is not EstimatorKind.MULTI_HODGES and self.pivots:
            raise DomainError(f"pivots are meaningless for {self.kind.value}")

    @classmethod
    def mle(cls) -> "EstimatorSpec":
        return cls(EstimatorKind.MLE)

    @classmethod
    def hodges(cls, pivot: float) -> "EstimatorSpec":
        return cls(EstimatorKind.HODGES, pivot=pivot)

    @classmethod
    def constant(cls, value: float) -> "EstimatorSpec":
        return cls(EstimatorKind.CONSTANT, value=value)

    @classmethod
    def multi_hodges(cls, pivots: Sequence[float]) -> "EstimatorSpec":
        return cls(EstimatorKind.MULTI_HODGES, pivots=tuple(sorted(set(pivots))))

    @property
    def band_pivots(self) -> Tuple[float, ...]:
        """Pivots of the Hodges-type estimators, empty otherwise."""
        if self.kind is EstimatorKind.HODGES:
            return (self.pivot,)
        return self.pivots

    @property
    def label(self) -> str:
        if self.kind is EstimatorKind.HODGES:
            return f"hodges({self.pivot:g})"
        if self.kind is EstimatorKind.CONSTANT:
            return f"constant({self.value:g})"
        if self.kind is EstimatorKind.MULTI_HODGES:
            return "multi-hodges(" + ",".join(f"{p:g}" for p in self.pivots) + ")"
        return "mle"

    def validate_for(self, model: GaussianLocationModel) -> None:
        """
        Check that pivots and values lie in the model's parameter interval.

        Raises:
            DomainError: If a pivot or value lies outside the parameter interval
        """
        if self.kind is EstimatorKind.CONSTANT:
            model.require(self.value)
        model.require(*self.band_pivots)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["kind"] = self.kind.value
        data["pivots"] = list(self.pivots)
        return data


def band_width(n: int) -> float:
    """Half-width n^(-1/4) of the Hodges band."""
    return n ** -0.25


def estimate(spec: EstimatorSpec, n: int, sample_mean: float, strict_band: bool = True) -> float:
    """
    Evaluate the estimator on a sample summarised by its mean.

    Args:
        spec: Estimator choice
        n: Sample size
        sample_mean: Sample mean
        strict_band: Use |mean - pivot| < n^(-1/4) for the band (otherwise <=)

    Returns:
        The estimate T_n
    """
    return float(estimate_array(spec, n, np.asarray([sample_mean]), strict_band)[0])


def estimate_array(spec: EstimatorSpec, n: int, means: np.ndarray, strict_band: bool = True) -> np.ndarray:
    """Vectorised `estimate` over an array of sample means."""
    means = np.asarray(means, dtype=float)
    if spec.kind is EstimatorKind.MLE:
        return means
    if spec.kind is EstimatorKind.CONSTANT:
        return np.full_like(means, spec.value)

    pivots = np.asarray(spec.band_pivots, dtype=float)
    distance = np.abs(means[..., None] - pivots)
    nearest = np.argmin(distance, axis=-1)
    nearest_distance = np.take_along_axis(distance, nearest[..., None], axis=-1)[..., 0]
    width = band_width(n)
    in_band = nearest_distance < width if strict_band else nearest_distance <= width
    return np.where(in_band, pivots[nearest], means)


# ============================================================================
# Exact concentration
# ============================================================================

Piece = Tuple[float, float, Optional[float]]


def _pieces(spec: EstimatorSpec, n: int) -> List[Piece]:
    """
    Partition of the sample-mean axis on which the estimator is either
    the identity (value None) or a constant.
    """
    if spec.kind is EstimatorKind.MLE:
        return [(-math.inf, math.inf, None)]
    if spec.kind is EstimatorKind.CONSTANT:
        return [(-math.inf, math.inf, spec.value)]

    pivots = spec.band_pivots
    width = band_width(n)
    pieces: List[Piece] = []
    cursor = -math.inf
    for i, pivot in enumerate(pivots):
        lo = pivot - width
        hi = pivot + width
        # overlapping bands are split at the midpoint (nearest pivot wins)
        if i > 0:
            lo = max(lo, (pivots[i - 1] + pivot) / 2.0)
        if i + 1 < len(pivots):
            hi = min(hi, (pivot + pivots[i + 1]) / 2.0)
        if cursor < lo:
            pieces.append((cursor, lo, None))
        pieces.append((lo, hi, pivot))
        cursor = hi
    pieces.append((cursor, math.inf, None))
    return pieces


def _exceedance_intervals(spec: EstimatorSpec, n: int, radius: float, center: float) -> List[Tuple[float, float]]:
    """Disjoint sample-mean intervals on which |T_n - center| > radius."""
    intervals = []
    for lo, hi, value in _pieces(spec, n):
        if value is not None:
            if abs(value - center) > radius:
                intervals.append((lo, hi))
            continue
        for a, b in ((lo, min(hi, center - radius)), (max(lo, center + radius), hi)):
            if a < b:
                intervals.append((a, b))

    merged: List[Tuple[float, float]] = []
    for a, b in sorted(intervals):
        if merged and merged[-1][1] >= a:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


def _interval_probability(za: float, zb: float) -> float:
    """P(za < Z < zb) for standard normal Z, evaluated on the short tail."""
    if za >= 0:
        return float(special.ndtr(-za) - special.ndtr(-zb))
    return float(special.ndtr(zb) - special.ndtr(za))


def _log_interval_probability(za: float, zb: float) -> float:
    """ln P(za < Z < zb), accurate far into either tail."""
    if not za < zb:
        return -math.inf
    if za >= 0:
        near, far = special.log_ndtr(-za), special.log_ndtr(-zb)
    elif zb <= 0:
        near, far = special.log_ndtr(zb), special.log_ndtr(za)
    else:
        return math.log(float(special.ndtr(zb) - special.ndtr(za)))
    if near == -math.inf:
        return -math.inf
    return float(near + np.log1p(-np.exp(far - near)))


def _validate_concentration(model: GaussianLocationModel, spec: EstimatorSpec, theta: float, n: int, radius: float) -> None:
    model.require(theta)
    spec.validate_for(model)
    if int(n) != n or n < 1:
        raise DomainError(f"sample size must be a positive integer, got {n}")
    if not (math.isfinite(radius) and radius > 0):
        raise DomainError(f"radius must be positive and finite, got {radius}")


def _standardised_intervals(model, spec, theta, n, radius, center) -> List[Tuple[float, float]]:
    scale = model.mean_scale(n)
    return [
        ((a - theta) / scale, (b - theta) / scale)
        for a, b in _exceedance_intervals(spec, n, radius, center)
    ]


@dataclass
class ConcentrationResult:
    """Probability that |T_n - center| > radius under P_{n,theta}."""
    probability: float
    method: ConcentrationMethod
    std_error: float
    n: int
    theta: float
    radius: float
    center: float
    samples: Optional[int] = None

    def to_dict(self) -> dict:
        data = asdict(self)
        data["method"] = self.method.value
        return data


def concentration_exact(
    model: GaussianLocationModel,
    spec: EstimatorSpec,
    theta: float,
    n: int,
    radius: float,
    center: Optional[float] = None,
) -> ConcentrationResult:
    """
    Exact concentration probability for the Gaussian model.

    The event {|T_n - center| > radius} is decomposed into disjoint
    intervals of the sample mean, each evaluated under N(theta, sigma^2/n).

    Args:
        model: Gaussian location model
        spec: Estimator choice
        theta: Sampling parameter
        n: Sample size
        radius: Radius u of the event
        center: Point the estimator is compared with (default: theta)

    Returns:
        ConcentrationResult with method exact

    Raises:
        DomainError: If theta or the estimator parameters lie outside the
            parameter interval, or radius is not positive
    """
    _validate_concentration(model, spec, theta, n, radius)
    center = theta if center is None else center
    total = math.fsum(
        _interval_probability(za, zb)
        for za, zb in _standardised_intervals(model, spec, theta, n, radius, center)
    )
    return ConcentrationResult(
        probability=min(max(total, 0.0), 1.0),
        method=ConcentrationMethod.EXACT,
        std_error=0.0,
        n=n,
        theta=theta,
        radius=radius,
        center=center,
    )


def log_concentration_exact(
    model: GaussianLocationModel,
    spec: EstimatorSpec,
    theta: float,
    n: int,
    radius: float,
    center: Optional[float] = None,
) -> float:
    """
    Natural logarithm of the exact concentration probability.

    Computed in log space throughout, so it stays finite far below the
    double-precision underflow threshold.

    Returns:
        ln P, or -inf when the event has probability zero
    """
    _validate_concentration(model, spec, theta, n, radius)
    center = theta if center is None else center
    logs = [
        _log_interval_probability(za, zb)
        for za, zb in _standardised_intervals(model, spec, theta, n, radius, center)
    ]
    logs = [value for value in logs if value > -math.inf]
    if not logs:
        return -math.inf
    return min(float(special.logsumexp(logs)), 0.0)


# ============================================================================
# Monte Carlo concentration
# ============================================================================

def _chunk_sizes(samples: int, chunk_size: int) -> List[int]:
    full, rest = divmod(samples, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def _sample_means(rng: np.random.Generator, model: GaussianLocationModel, theta: float, n: int, size: int, full_sample: bool) -> np.ndarray:
    if not full_sample:
        return theta + model.mean_scale(n) * rng.standard_normal(size)
    rows = max(1, _FULL_SAMPLE_BLOCK // n)
    means = [
        rng.normal(theta, model.sigma, size=(min(rows, size - start), n)).mean(axis=1)
        for start in range(0, size, rows)
    ]
    return np.concatenate(means)


def concentration_mc(
    model: GaussianLocationModel,
    spec: EstimatorSpec,
    theta: float,
    n: int,
    radius: float,
    center: Optional[float] = None,
    samples: int = 10 ** 6,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    workers: int = 1,
    full_sample: bool = False,
    strict_band: bool = True,
) -> ConcentrationResult:
    """
    Monte Carlo concentration probability.

    Replications are split into fixed-size chunks, each with its own
    child seed spawned from `seed`; chunk counts are integers, so the
    estimate does not depend on `workers`.

    Args:
        model: Gaussian location model
        spec: Estimator choice
        theta: Sampling parameter
        n: Sample size
        radius: Radius u of the event
        center: Point the estimator is compared with (default: theta)
        samples: Number of replications (at least 100)
        seed: Master seed
        chunk_size: Replications per chunk
        workers: Threads evaluating chunks
        full_sample: Draw n observations per replication and average them
            instead of drawing the sample mean directly
        strict_band: Band convention passed to the estimator

    Returns:
        ConcentrationResult with method monte-carlo and binomial standard error
    """
    _validate_concentration(model, spec, theta, n, radius)
    if samples < MIN_MC_SAMPLES:
        raise DomainError(f"at least {MIN_MC_SAMPLES} samples are required, got {samples}")
    if chunk_size < 1 or workers < 1:
        raise DomainError("chunk_size and workers must be positive")
    center = theta if center is None else center

    sizes = _chunk_sizes(samples, chunk_size)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    def count(job: Tuple[np.random.SeedSequence, int]) -> int:
        child, size = job
        rng = np.random.default_rng(child)
        means = _sample_means(rng, model, theta, n, size, full_sample)
        estimates = estimate_array(spec, n, means, strict_band)
        return int(np.count_nonzero(np.abs(estimates - center) > radius))

    jobs = list(zip(seeds, sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(count, jobs))
    else:
        counts = [count(job) for job in jobs]

    hits = sum(counts)
    probability = hits / samples
    logger.debug("MC %s theta=%s n=%d: %d/%d over %d chunks", spec.label, theta, n, hits, samples, len(sizes))
    return ConcentrationResult(
        probability=probability,
        method=ConcentrationMethod.MONTE_CARLO,
        std_error=math.sqrt(probability * (1.0 - probability) / samples),
        n=n,
        theta=theta,
        radius=radius,
        center=center,
        samples=samples,
    )


@dataclass
class MleBoundReport:
    """Exact MLE concentration at radius c n^(-1/2) across sample sizes."""
    theta: float
    c: float
    probabilities: List[Tuple[int, float]]
    expected: float
    lower_bound: float
    tolerance: float = 1e-12

    @property
    def spread(self) -> float:
        values = [p for _, p in self.probabilities]
        return max(values) - min(values)

    @property
    def passed(self) -> bool:
        """Every probability equals 2 Phi(-c sqrt(I)) and clears Phi(-c sqrt(I))."""
        return all(
            abs(p - self.expected) <= self.tolerance and p >= self.lower_bound - self.tolerance
            for _, p in self.probabilities
        )

    def to_dict(self) -> dict:
        data = asdict(self)
        data["spread"] = self.spread
        data["passed"] = self.passed
        return data


def mle_bound_check(model: GaussianLocationModel, c: float, n_list: Sequence[int], theta: float) -> MleBoundReport:
    """
    Compare the exact MLE concentration probability with 2 Phi(-c sqrt(I(theta))).

    For the Gaussian model the probability equals that value for every n,
    which certifies both the upper bound for the MLE and the general
    lower bound Phi(-c sqrt(I(theta))).

    Raises:
        DomainError: If theta lies outside the parameter interval or c <= 0
    """
    model.require(theta)
    if not c > 0:
        raise DomainError(f"c must be positive, got {c}")
    if not n_list:
        raise DomainError("n_list must not be empty")
    spec = EstimatorSpec.mle()
    scaled = c * math.sqrt(model.fisher_information(theta))
    probabilities = [
        (n, concentration_exact(model, spec, theta, n, c / math.sqrt(n)).probability)
        for n in n_list
    ]
    return MleBoundReport(
        theta=theta,
        c=c,
        probabilities=probabilities,
        expected=2.0 * normal_cdf(-scaled),
        lower_bound=normal_cdf(-scaled),
    )
