"""Finite-grid approximation of asymptotic efficiency."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import List, Sequence, Tuple

from .estimators import EstimatorSpec, concentration_exact, log_concentration_exact
from .models import DomainError, GaussianLocationModel, normal_cdf

logger = logging.getLogger(__name__)

# ae above this on a finite grid is reported as superefficient
SUPEREFFICIENCY_MARGIN = 1.5


def tail_half(values: Sequence) -> list:
    """The larger half of an ascending grid (the middle element included for odd lengths)."""
    return list(values[len(values) // 2:])


def _validate_grid(name: str, grid: Sequence[float]) -> None:
    if not grid:
        raise DomainError(f"{name} must not be empty")
    if any(not value > 0 for value in grid):
        raise DomainError(f"{name} entries must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError(f"{name} must be strictly ascending")


@dataclass
class EfficiencyEstimate:
    """
    Inner values -ln P_{n,theta}(|T_n - theta| > c n^(-1/2)) / (c^2 I(theta) / 2)
    on a (c, n) grid, and their tail-half reduction.

    inner_values[i][j] belongs to c_grid[i] and n_grid[j].
    """
    theta: float
    estimator: str
    c_grid: List[float]
    n_grid: List[int]
    inner_values: List[List[float]]
    ae_approx: float

    @property
    def classification(self) -> str:
        if math.isinf(self.ae_approx):
            return "infinite"
        if self.ae_approx > SUPEREFFICIENCY_MARGIN:
            return "superefficient"
        return "efficient"

    def to_dict(self) -> dict:
        data = asdict(self)
        data["classification"] = self.classification
        return data


def reduce_inner_values(inner_values: Sequence[Sequence[float]]) -> float:
    """Minimum over the tail half of c of the minimum over the tail half of n; +inf propagates."""
    return min(min(tail_half(row)) for row in tail_half(inner_values))


def inner_value(model: GaussianLocationModel, spec: EstimatorSpec, theta: float, c: float, n: int) -> float:
    """One entry of the efficiency matrix, +inf when the probability is zero."""
    log_p = log_concentration_exact(model, spec, theta, n, c / math.sqrt(n))
    if log_p == -math.inf:
        return math.inf
    return -log_p / (c ** 2 * model.fisher_information(theta) / 2.0)


def ae_estimate(
    model: GaussianLocationModel,
    spec: EstimatorSpec,
    theta: float,
    c_grid: Sequence[float],
    n_grid: Sequence[int],
    workers: int = 1,
) -> EfficiencyEstimate:
    """
    Approximate the asymptotic efficiency ae_theta(T) on finite grids.

    The double liminf over c and n is replaced by minima over the larger
    halves of both ascending grids; the full matrix is kept in the result.

    Args:
        model: Gaussian location model
        spec: Estimator choice
        theta: Parameter point
        c_grid: Ascending positive c values
        n_grid: Ascending positive sample sizes
        workers: Threads evaluating grid cells

    Returns:
        EfficiencyEstimate

    Raises:
        DomainError: If a grid is empty or not ascending, or theta lies
            outside the parameter interval
    """
    _validate_grid("c_grid", c_grid)
    _validate_grid("n_grid", n_grid)
    model.require(theta)
    spec.validate_for(model)

    cells = [(c, n) for c in c_grid for n in n_grid]

    def evaluate(cell: Tuple[float, int]) -> float:
        return inner_value(model, spec, theta, *cell)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(evaluate, cells))
    else:
        flat = [evaluate(cell) for cell in cells]

    width = len(n_grid)
    matrix = [flat[i * width:(i + 1) * width] for i in range(len(c_grid))]
    ae = reduce_inner_values(matrix)
    logger.debug("ae_approx for %s at theta=%s: %s", spec.label, theta, ae)
    return EfficiencyEstimate(
        theta=theta,
        estimator=spec.label,
        c_grid=list(c_grid),
        n_grid=list(n_grid),
        inner_values=matrix,
        ae_approx=ae,
    )


@dataclass
class AllOrNothingRow:
    theta: float
    estimator: str
    ae_approx: float
    classification: str


@dataclass
class AllOrNothingReport:
    """All-or-nothing dichotomy: per parameter point, the MLE, the constant at that point, and Hodges."""
    pivot: float
    rows: List[AllOrNothingRow]
    estimates: List[EfficiencyEstimate]

    def to_dict(self) -> dict:
        return {
            "pivot": self.pivot,
            "rows": [asdict(row) for row in self.rows],
            "estimates": [estimate.to_dict() for estimate in self.estimates],
        }


def all_or_nothing_demo(
    model: GaussianLocationModel,
    theta_list: Sequence[float],
    c_grid: Sequence[float],
    n_grid: Sequence[int],
) -> AllOrNothingReport:
    """
    Efficiency of the MLE, Constant{theta} and Hodges pivoted at theta_list[0] at each theta.

    Expected pattern: about 1 for the MLE everywhere, +inf for the
    constant at its own value, large at the Hodges pivot and about 1
    away from it.
    """
    if not theta_list:
        raise DomainError("theta_list must not be empty")
    model.require(*theta_list)
    pivot = theta_list[0]
    rows = []
    estimates = []
    for theta in theta_list:
        for spec in (EstimatorSpec.mle(), EstimatorSpec.constant(theta), EstimatorSpec.hodges(pivot)):
            estimate = ae_estimate(model, spec, theta, c_grid, n_grid)
            estimates.append(estimate)
            rows.append(AllOrNothingRow(theta, spec.label, estimate.ae_approx, estimate.classification))
    return AllOrNothingReport(pivot=pivot, rows=rows, estimates=estimates)


@dataclass
class FiniteScaleBoundReport:
    """Largest tail probability over the larger half of n_grid against Phi(-c sqrt(I))."""
    theta: float
    estimator: str
    c: float
    tail_probabilities: List[Tuple[int, float]]
    lower_bound: float
    tolerance: float = 1e-10

    @property
    def max_probability(self) -> float:
        return max(p for _, p in self.tail_probabilities)

    @property
    def passed(self) -> bool:
        return self.max_probability >= self.lower_bound - self.tolerance


def finite_scale_bound_check(
    model: GaussianLocationModel,
    spec: EstimatorSpec,
    theta: float,
    c: float,
    n_grid: Sequence[int],
) -> FiniteScaleBoundReport:
    """
    Finite-scale form of the lower bound limsup_n P_{n,theta}(|T_n - theta| > c n^(-1/2)) >= Phi(-c sqrt(I)).

    Holds at every point that is not a superefficiency point of the estimator.
    """
    _validate_grid("n_grid", n_grid)
    if not c > 0:
        raise DomainError(f"c must be positive, got {c}")
    tail = [
        (n, concentration_exact(model, spec, theta, n, c / math.sqrt(n)).probability)
        for n in tail_half(n_grid)
    ]
    return FiniteScaleBoundReport(
        theta=theta,
        estimator=spec.label,
        c=c,
        tail_probabilities=tail,
        lower_bound=normal_cdf(-c * math.sqrt(model.fisher_information(theta))),
    )


def classical_efficiency(model: GaussianLocationModel, theta: float, variance: float) -> float:
    """1 / (I(theta) v) for an estimator with asymptotic variance v of sqrt(n)(T_n - theta)."""
    if not variance > 0:
        raise DomainError(f"variance must be positive, got {variance}")
    return 1.0 / (model.fisher_information(theta) * variance)


def classical_efficiency_check(
    model: GaussianLocationModel,
    theta: float,
    c_grid: Sequence[float],
    n_grid: Sequence[int],
) -> Tuple[float, float]:
    """
    Compare the MLE's grid efficiency with the classical value 1 / (I v), v = 1 / I.

    Returns:
        Tuple of (ae_approx, classical efficiency)
    """
    estimate = ae_estimate(model, EstimatorSpec.mle(), theta, c_grid, n_grid)
    variance = 1.0 / model.fisher_information(theta)
    return estimate.ae_approx, classical_efficiency(model, theta, variance)
