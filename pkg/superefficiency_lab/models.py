"""Statistical models, the normal CDF, and distances between measures."""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special, stats

logger = logging.getLogger(__name__)

# Smallest positive double; Phi saturates here instead of underflowing to 0.
_TINY = math.ulp(0.0)

PROBABILITY_TOLERANCE = 1e-12
BRUTE_FORCE_MAX_OUTCOMES = 20
SLACK_TOLERANCE = 1e-12
NEYMAN_PEARSON_NODE_BUDGET = 1 << 20
# Partial events whose masses agree to this many decimals are merged.
MASS_KEY_DIGITS = 14


class DomainError(ValueError):
    """A parameter lies outside the domain an operation is defined on."""


class SizeError(ValueError):
    """An exhaustive enumeration was asked for too many outcomes."""


def normal_cdf(x: float) -> float:
    """
    Standard normal distribution function Phi(x).

    Strictly positive for every finite x: values below the smallest
    positive double saturate there.

    Args:
        x: Point at which to evaluate Phi

    Returns:
        Phi(x)
    """
    return max(float(special.ndtr(x)), _TINY)


def log_normal_cdf(x: float) -> float:
    """Return ln Phi(x), finite for every finite x."""
    return float(special.log_ndtr(x))


@dataclass(frozen=True)
class GaussianLocationModel:
    """
    The model N(theta, sigma^2)^n with known sigma.

    Every event used in this package depends on the data only through the
    sample mean, which is N(theta, sigma^2 / n) under P_{n,theta}.
    """
    sigma: float = 1.0
    theta_domain: Tuple[float, float] = (-math.inf, math.inf)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"sigma must be positive and finite, got {self.sigma}")
        lower, upper = self.theta_domain
        if not lower < upper:
            raise DomainError(f"theta_domain must be a nonempty open interval, got {self.theta_domain}")

    def contains(self, theta: float) -> bool:
        """Check whether theta lies in the open parameter interval."""
        lower, upper = self.theta_domain
        return lower < theta < upper

    def require(self, *thetas: float) -> None:
        """
        Validate parameter values.

        Raises:
            DomainError: If any value lies outside the parameter interval
        """
        for theta in thetas:
            if not self.contains(theta):
                raise DomainError(f"parameter {theta} outside {self.theta_domain}")

    def fisher_information(self, theta: float) -> float:
        """Fisher information of one observation, constant in theta."""
        return 1.0 / self.sigma ** 2

    def mean_scale(self, n: int) -> float:
        """Standard deviation of the sample mean of n observations."""
        _require_sample_size(n)
        return self.sigma / math.sqrt(n)

    def log_likelihood_ratio(self, sample: np.ndarray, theta1: float, theta2: float) -> np.ndarray:
        """
        ln(f_{n,theta2} / f_{n,theta1}) evaluated on full samples.

        Args:
            sample: Array whose last axis holds the n observations
            theta1: Parameter in the denominator
            theta2: Parameter in the numerator

        Returns:
            Log-likelihood ratios, one per sample along the leading axes
        """
        logpdf2 = stats.norm.logpdf(sample, loc=theta2, scale=self.sigma)
        logpdf1 = stats.norm.logpdf(sample, loc=theta1, scale=self.sigma)
        return np.sum(logpdf2 - logpdf1, axis=-1)


def _require_sample_size(n: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"sample size must be a positive integer, got {n}")


def _half_separation(model: GaussianLocationModel, theta1: float, theta2: float, n: int) -> float:
    """|theta2 - theta1| sqrt(n) / (2 sigma)."""
    model.require(theta1, theta2)
    _require_sample_size(n)
    return abs(theta2 - theta1) * math.sqrt(n) / (2.0 * model.sigma)


def affinity_exact_gaussian(model: GaussianLocationModel, theta1: float, theta2: float, n: int) -> float:
    """
    Affinity between P_{n,theta1} and P_{n,theta2} for the Gaussian model.

    Returns:
        Phi(-|theta2 - theta1| sqrt(n) / (2 sigma))

    Raises:
        DomainError: If a parameter lies outside the parameter interval
    """
    return normal_cdf(-_half_separation(model, theta1, theta2, n))


def variation_distance_exact_gaussian(model: GaussianLocationModel, theta1: float, theta2: float, n: int) -> float:
    """
    Variation distance between P_{n,theta1} and P_{n,theta2}.

    Returns:
        1 - 2 Phi(-|theta2 - theta1| sqrt(n) / (2 sigma))
    """
    return 1.0 - 2.0 * normal_cdf(-_half_separation(model, theta1, theta2, n))


def likelihood_ratio_exceedance(model: GaussianLocationModel, theta1: float, theta2: float, n: int) -> float:
    """
    P_{n,theta1}(f_{n,theta2} / f_{n,theta1} > 1), computed as a half-space event.

    The likelihood ratio exceeds one exactly when the sample mean lies
    beyond the midpoint of theta1 and theta2, on the side of theta2.
    """
    model.require(theta1, theta2)
    if theta1 == theta2:
        return 0.0
    mean = stats.norm(loc=theta1, scale=model.mean_scale(n))
    midpoint = (theta1 + theta2) / 2.0
    if theta2 > theta1:
        return float(mean.sf(midpoint))
    return float(mean.cdf(midpoint))


def exceedance_lower_bound(model: GaussianLocationModel, theta1: float, theta2: float, n: int) -> float:
    """Smaller of the two likelihood-ratio exceedance probabilities; a lower bound on the affinity."""
    return min(
        likelihood_ratio_exceedance(model, theta1, theta2, n),
        likelihood_ratio_exceedance(model, theta2, theta1, n),
    )


def _validate_probability_vector(name: str, values: Sequence[float]) -> Tuple[float, ...]:
    vector = tuple(float(v) for v in values)
    if not vector:
        raise DomainError(f"{name} must contain at least one outcome")
    if any(not math.isfinite(v) or v < 0 for v in vector):
        raise DomainError(f"{name} entries must be finite and nonnegative")
    total = math.fsum(vector)
    if abs(total - 1.0) > PROBABILITY_TOLERANCE:
        raise DomainError(f"{name} must sum to 1, sums to {total!r}")
    return vector


@dataclass
class DiscreteModelPair:
    """Two probability vectors on the same finite sample space."""
    p: Tuple[float, ...]
    q: Tuple[float, ...]

    def __post_init__(self) -> None:
        self.p = _validate_probability_vector("p", self.p)
        self.q = _validate_probability_vector("q", self.q)
        if len(self.p) != len(self.q):
            raise DomainError(f"p and q differ in length ({len(self.p)} vs {len(self.q)})")

    @property
    def k(self) -> int:
        """Number of outcomes."""
        return len(self.p)


@dataclass
class AffinityResult:
    """Affinity value with the event attaining it."""
    value: float
    witness_set: Tuple[int, ...] = ()


def _subset_masses(values: Sequence[float]) -> np.ndarray:
    """Mass of every subset, indexed by bitmask (bit i set <=> outcome i in the subset)."""
    masses = np.zeros(1 << len(values))
    for i, v in enumerate(values):
        masses[1 << i: 1 << (i + 1)] = masses[: 1 << i] + v
    return masses


def _require_enumerable(pair: DiscreteModelPair) -> None:
    if pair.k > BRUTE_FORCE_MAX_OUTCOMES:
        raise SizeError(
            f"exhaustive enumeration is limited to {BRUTE_FORCE_MAX_OUTCOMES} outcomes, got {pair.k}; "
            "use affinity_neyman_pearson_discrete"
        )


def affinity_bruteforce_discrete(pair: DiscreteModelPair) -> AffinityResult:
    """
    Affinity by exhaustive minimization over all 2^k events.

    Returns:
        AffinityResult with the minimizing event as witness

    Raises:
        SizeError: If the sample space has more than 20 outcomes
    """
    _require_enumerable(pair)
    p_masses = _subset_masses(pair.p)
    # complement of mask m is (2^k - 1) - m, i.e. the reversed index
    q_complement = _subset_masses(pair.q)[::-1]
    values = np.maximum(p_masses, q_complement)
    best = int(np.argmin(values))
    witness = tuple(i for i in range(pair.k) if best >> i & 1)
    return AffinityResult(value=float(values[best]), witness_set=witness)


def _level_set_sweep(p: List[float], q: List[float], ratio: np.ndarray, q_total: float) -> float:
    """Best event among unions of whole likelihood-ratio blocks."""
    best = q_total  # empty event
    p_mass = q_mass = 0.0
    for i in range(len(p)):
        p_mass += p[i]
        q_mass += q[i]
        block_ends = i + 1 == len(p) or not np.isclose(ratio[i], ratio[i + 1], rtol=1e-12, atol=0.0)
        if block_ends:
            best = min(best, max(p_mass, q_total - q_mass))
    return best


def _relaxed_bound(p: List[float], q: List[float], start: int, p_mass: float, q_rest: float) -> float:
    """
    Randomized Neyman-Pearson bound for events extending the current one.

    Outcomes from `start` on may be added fractionally in likelihood-ratio
    order; no event built from them does better than the crossing point.
    """
    if p_mass >= q_rest:
        return p_mass
    for j in range(start, len(p)):
        if p_mass + p[j] >= q_rest - q[j]:
            fraction = (q_rest - p_mass) / (p[j] + q[j])
            return p_mass + fraction * p[j]
        p_mass += p[j]
        q_rest -= q[j]
    return q_rest


def affinity_neyman_pearson_discrete(pair: DiscreteModelPair, node_budget: int = NEYMAN_PEARSON_NODE_BUDGET) -> float:
    """
    Affinity by a likelihood-ratio sweep over level sets.

    Outcomes are sorted by q/p and tied ratios are processed as blocks.
    The best level set seeds a branch-and-bound over the same order,
    pruned with the randomized Neyman-Pearson bound, so the result is the
    infimum over all events, not only over level sets. Partial events
    reaching the same outcome with the same masses (to MASS_KEY_DIGITS
    decimals) are expanded once.

    Args:
        pair: Discrete model pair of any size
        node_budget: Maximum number of search nodes

    Returns:
        The affinity pi(P, Q)

    Raises:
        SizeError: If the search needs more than node_budget nodes
    """
    p_arr = np.asarray(pair.p)
    q_arr = np.asarray(pair.q)
    support = (p_arr > 0) | (q_arr > 0)
    p_arr, q_arr = p_arr[support], q_arr[support]
    safe_p = np.where(p_arr > 0, p_arr, 1.0)
    ratio = np.where(p_arr > 0, q_arr / safe_p, np.inf)
    order = np.argsort(-ratio, kind="stable")
    ratio = ratio[order]
    p = p_arr[order].tolist()
    q = q_arr[order].tolist()
    q_total = math.fsum(q)

    best = _level_set_sweep(p, q, ratio, q_total)
    seen = set()
    nodes = 0
    stack = [(0, 0.0, 0.0)]
    while stack:
        index, p_mass, q_mass = stack.pop()
        key = (index, round(p_mass, MASS_KEY_DIGITS), round(q_mass, MASS_KEY_DIGITS))
        if key in seen:
            continue
        seen.add(key)
        nodes += 1
        if nodes > node_budget:
            raise SizeError(
                f"Neyman-Pearson search over {len(p)} outcomes exceeded the node budget of {node_budget}"
            )
        best = min(best, max(p_mass, q_total - q_mass))
        if index == len(p):
            continue
        if _relaxed_bound(p, q, index, p_mass, q_total - q_mass) >= best:
            continue
        stack.append((index + 1, p_mass, q_mass))
        stack.append((index + 1, p_mass + p[index], q_mass + q[index]))
    logger.debug("Neyman-Pearson affinity over %d outcomes: %d nodes", len(p), nodes)
    return best


def variation_distance_discrete(pair: DiscreteModelPair) -> float:
    """Variation distance as the sum of positive parts of p - q."""
    diff = np.asarray(pair.p) - np.asarray(pair.q)
    return math.fsum(np.maximum(diff, 0.0).tolist())


def variation_distance_bruteforce_discrete(pair: DiscreteModelPair) -> float:
    """
    Variation distance as the supremum of |P(E) - Q(E)| over all events.

    Raises:
        SizeError: If the sample space has more than 20 outcomes
    """
    _require_enumerable(pair)
    return float(np.max(np.abs(_subset_masses(pair.p) - _subset_masses(pair.q))))


def affinity_lower_bound_from_tv(tv: float) -> float:
    """
    Affinity lower bound (1 - ||P - Q||) / 2.

    Raises:
        DomainError: If tv lies outside [0, 1]
    """
    if not 0.0 <= tv <= 1.0:
        raise DomainError(f"variation distance must lie in [0, 1], got {tv}")
    return (1.0 - tv) / 2.0


# ============================================================================
# Assumption checkers
# ============================================================================

@dataclass
class AssumptionCheckEntry:
    """One grid point of an assumption check; slack >= 0 means the inequality holds."""
    theta1: float
    theta2: float
    n: int
    lhs: float
    rhs: float
    slack: float
    passed: bool
    rejected: bool = False
    details: Dict[str, float] = field(default_factory=dict)


@dataclass
class AssumptionReport:
    """Signed slack of an assumption inequality over a parameter grid."""
    assumption: str
    theta: float
    epsilon: float
    entries: List[AssumptionCheckEntry]

    @property
    def passed(self) -> bool:
        """True when every non-rejected entry passes."""
        return all(entry.passed for entry in self.entries if not entry.rejected)

    @property
    def max_abs_slack(self) -> float:
        """Largest slack magnitude over non-rejected entries."""
        slacks = [abs(entry.slack) for entry in self.entries if not entry.rejected]
        return max(slacks, default=0.0)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["passed"] = self.passed
        data["max_abs_slack"] = self.max_abs_slack
        return data


Grid = Iterable[Tuple[float, float, int]]


def _reference_affinity(model: GaussianLocationModel, theta: float, theta1: float, theta2: float, n: int) -> float:
    """Phi(-|theta2 - theta1| sqrt(n I(theta)) / 2)."""
    scale = math.sqrt(n * model.fisher_information(theta))
    return normal_cdf(-abs(theta2 - theta1) * scale / 2.0)


def _validate_check(model: GaussianLocationModel, theta: float, epsilon: float) -> None:
    model.require(theta)
    if epsilon < 0:
        raise DomainError(f"epsilon must be nonnegative, got {epsilon}")


def _entry(theta1: float, theta2: float, n: int, lhs: float, rhs: float, slack: float, **details: float) -> AssumptionCheckEntry:
    return AssumptionCheckEntry(
        theta1=theta1,
        theta2=theta2,
        n=n,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        passed=slack >= -SLACK_TOLERANCE,
        details=dict(details),
    )


def check_affinity_assumption(model: GaussianLocationModel, theta: float, grid: Grid, epsilon: float = 0.0) -> AssumptionReport:
    """
    Check pi(P_{n,theta1}, P_{n,theta2}) >= Phi(-|theta2 - theta1| sqrt(n I(theta)) / 2) - epsilon.

    Args:
        model: Gaussian location model
        theta: Point at which the information is evaluated
        grid: Triples (theta1, theta2, n)
        epsilon: Additive slack of the assumption

    Returns:
        AssumptionReport with slack = lhs - rhs per entry
    """
    _validate_check(model, theta, epsilon)
    entries = []
    for theta1, theta2, n in grid:
        lhs = affinity_exact_gaussian(model, theta1, theta2, n)
        rhs = _reference_affinity(model, theta, theta1, theta2, n) - epsilon
        entries.append(_entry(theta1, theta2, n, lhs, rhs, lhs - rhs))
    return AssumptionReport("affinity", theta, epsilon, entries)


def check_likelihood_ratio_assumption(model: GaussianLocationModel, theta: float, grid: Grid, epsilon: float = 0.0) -> AssumptionReport:
    """
    Check P_{n,theta1}(f_{n,theta2} / f_{n,theta1} > 1) >= Phi(...) - epsilon.

    Entries with theta1 == theta2 are rejected: the inequality is stated
    for distinct points. Each entry also records the gap between the
    affinity and the smaller of the two exceedance probabilities, which
    is nonnegative whenever the likelihood-ratio bound on the affinity holds.
    """
    _validate_check(model, theta, epsilon)
    entries = []
    for theta1, theta2, n in grid:
        if theta1 == theta2:
            model.require(theta1)
            entries.append(AssumptionCheckEntry(
                theta1=theta1, theta2=theta2, n=n,
                lhs=math.nan, rhs=math.nan, slack=math.nan,
                passed=False, rejected=True,
            ))
            continue
        lhs = likelihood_ratio_exceedance(model, theta1, theta2, n)
        rhs = _reference_affinity(model, theta, theta1, theta2, n) - epsilon
        affinity = affinity_exact_gaussian(model, theta1, theta2, n)
        lr_bound_gap = affinity - exceedance_lower_bound(model, theta1, theta2, n)
        entries.append(_entry(theta1, theta2, n, lhs, rhs, lhs - rhs, affinity=affinity, lr_bound_gap=lr_bound_gap))
    return AssumptionReport("likelihood_ratio", theta, epsilon, entries)


def check_variation_assumption(model: GaussianLocationModel, theta: float, grid: Grid, epsilon: float = 0.0) -> AssumptionReport:
    """
    Check ||P_{n,theta1} - P_{n,theta2}|| <= 1 - 2 Phi(...) + epsilon.

    Returns:
        AssumptionReport with slack = rhs - lhs per entry
    """
    _validate_check(model, theta, epsilon)
    entries = []
    for theta1, theta2, n in grid:
        lhs = variation_distance_exact_gaussian(model, theta1, theta2, n)
        rhs = 1.0 - 2.0 * _reference_affinity(model, theta, theta1, theta2, n) + epsilon
        entries.append(_entry(theta1, theta2, n, lhs, rhs, rhs - lhs))
    return AssumptionReport("variation", theta, epsilon, entries)


@dataclass
class LanReport:
    """Local asymptotic normality decomposition checked on simulated samples."""
    theta: float
    lam: float
    n: int
    samples: int
    seed: int
    shifted_theta: float
    max_abs_residual: float
    max_abs_log_ratio: float
    ks_statistic: float
    ks_pvalue: float
    tolerance: float = 1e-10

    @property
    def passed(self) -> bool:
        return self.max_abs_residual <= self.tolerance

    def to_dict(self) -> dict:
        data = asdict(self)
        data["passed"] = self.passed
        return data


def check_lan_decomposition(
    model: GaussianLocationModel,
    theta: float,
    lam: float,
    n: int,
    samples: int,
    seed: int = 0,
    max_chunk_values: int = 1 << 20,
) -> LanReport:
    """
    Verify ln(f_{n,theta+h} / f_{n,theta}) = lam*Delta - lam^2/2 with h = lam / sqrt(n I(theta)).

    Full samples of n observations are drawn under P_{n,theta}; the
    log-likelihood ratio is evaluated observation by observation and
    compared with the decomposition, Delta = sqrt(n)(mean - theta)/sigma.
    The empirical Delta sample is compared with N(0, 1) by a
    Kolmogorov-Smirnov test.

    Args:
        model: Gaussian location model
        theta: Base parameter
        lam: Local shift, lam >= 0
        n: Observations per sample
        samples: Number of simulated samples
        seed: Seed of the numpy generator
        max_chunk_values: Upper bound on observations held in memory at once

    Returns:
        LanReport

    Raises:
        DomainError: If theta or the shifted parameter lies outside the parameter interval
    """
    _require_sample_size(n)
    if lam < 0:
        raise DomainError(f"lambda must be nonnegative, got {lam}")
    if samples < 1:
        raise DomainError(f"samples must be positive, got {samples}")
    shifted = theta + lam / math.sqrt(n * model.fisher_information(theta))
    model.require(theta, shifted)

    rng = np.random.default_rng(seed)
    rows_per_chunk = max(1, max_chunk_values // n)
    deltas = []
    max_residual = 0.0
    max_log_ratio = 0.0
    for start in range(0, samples, rows_per_chunk):
        rows = min(rows_per_chunk, samples - start)
        sample = rng.normal(theta, model.sigma, size=(rows, n))
        log_ratio = model.log_likelihood_ratio(sample, theta, shifted)
        delta = math.sqrt(n) * (sample.mean(axis=1) - theta) / model.sigma
        residual = log_ratio - (lam * delta - lam ** 2 / 2.0)
        max_residual = max(max_residual, float(np.max(np.abs(residual))))
        max_log_ratio = max(max_log_ratio, float(np.max(np.abs(log_ratio))))
        deltas.append(delta)

    ks = stats.kstest(np.concatenate(deltas), "norm")
    logger.debug("LAN check theta=%s lam=%s n=%d: max |psi| = %.3e", theta, lam, n, max_residual)
    return LanReport(
        theta=theta,
        lam=lam,
        n=n,
        samples=samples,
        seed=seed,
        shifted_theta=shifted,
        max_abs_residual=max_residual,
        max_abs_log_ratio=max_log_ratio,
        ks_statistic=float(ks.statistic),
        ks_pvalue=float(ks.pvalue),
    )
