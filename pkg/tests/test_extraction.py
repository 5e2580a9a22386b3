"""Tests for extraction module."""

import functools
import json
import logging
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superefficiency_lab import extraction
from superefficiency_lab.estimators import EstimatorSpec
from superefficiency_lab.extraction import (
    AssumptionViolation,
    ExtractionConfig,
    ExtractionOutcome,
    NoSuperefficientPoint,
    PreconditionError,
    SuitabilityScan,
    WidthError,
    certify_sample_size,
    choose_n,
    countability_gap_check,
    exclusion_check,
    extract_parameter,
    interval_width,
    is_suitable,
    render_trace,
    scan_suitable,
    select_epsilon,
    shrink_interval,
    to_fraction,
)
from superefficiency_lab.models import DomainError, GaussianLocationModel

MODEL = GaussianLocationModel()
CANONICAL = ExtractionConfig()
HODGES = EstimatorSpec.hodges(0.0)


@functools.lru_cache(maxsize=None)
def canonical_suitable_points():
    return tuple(scan_suitable(MODEL, HODGES, CANONICAL.initial_interval, 586, CANONICAL).suitable_points)


class TestExtractionConfig:
    """Tests for the constants of the algorithm."""

    def test_canonical_defaults(self):
        assert CANONICAL.c == 1
        assert CANONICAL.a == Fraction(1, 2)
        assert CANONICAL.i_bar == Fraction(101, 100)
        assert CANONICAL.epsilon == Fraction(1, 10)
        assert CANONICAL.initial_interval == (Fraction(-1, 20), Fraction(1, 20))

    def test_threshold(self):
        """Test a Phi(-c sqrt(I_bar)) for the canonical constants."""
        assert CANONICAL.threshold == pytest.approx(0.0787, abs=1e-4)
        assert CANONICAL.exclusion_affinity_bound == pytest.approx(0.0905, abs=1e-4)

    def test_floats_become_decimal_fractions(self):
        config = ExtractionConfig(epsilon=0.1, initial_interval=(-0.05, 0.05), tolerance=0.001)
        assert config.epsilon == Fraction(1, 10)
        assert config.initial_interval == (Fraction(-1, 20), Fraction(1, 20))
        assert config.tolerance == Fraction(1, 1000)
        assert to_fraction(0.1) == Fraction(1, 10)

    def test_premise_fails_when_slack_equals_epsilon(self):
        """Test that using epsilon as the additive slack breaks the exclusion premise."""
        with pytest.raises(DomainError):
            ExtractionConfig(model_slack=0.1)

    @pytest.mark.parametrize("kwargs", [
        {"a": 1},
        {"a": 0},
        {"c": 0},
        {"epsilon": 0},
        {"grid_points": 15},
        {"initial_interval": (0.05, -0.05)},
        {"max_iterations": 0},
        {"model_slack": -0.1},
    ])
    def test_rejects_invalid_values(self, kwargs):
        with pytest.raises(DomainError):
            ExtractionConfig(**kwargs)

    def test_rejects_long_initial_interval(self):
        with pytest.raises(WidthError):
            ExtractionConfig(initial_interval=(-5, 5))

    def test_n_min_above_range(self):
        """Test that n_min above the admissible range makes the interval inadmissible."""
        with pytest.raises(WidthError):
            ExtractionConfig(n_min=600)
        assert ExtractionConfig(n_min=600, initial_interval=(Fraction(-1, 25), Fraction(1, 25))).n_min == 600

    def test_validate_for_model(self):
        with pytest.raises(DomainError):
            CANONICAL.validate_for(GaussianLocationModel(theta_domain=(0.0, 1.0)))
        with pytest.raises(DomainError):
            CANONICAL.validate_for(GaussianLocationModel(sigma=0.5))
        CANONICAL.validate_for(MODEL)

    def test_to_dict_is_json(self):
        data = CANONICAL.to_dict()
        assert data["epsilon"] == "1/10"
        json.dumps(data)


class TestSelectEpsilon:
    """Tests for the epsilon helper."""

    def test_slack_equal_to_epsilon(self):
        assert select_epsilon(1, 0.5, 1.01) == Fraction(1, 32)

    def test_exact_model(self):
        assert select_epsilon(1, 0.5, 1.01, model_slack=0.0) == Fraction(1, 16)

    def test_no_solution(self):
        with pytest.raises(DomainError):
            select_epsilon(1, 0.5, 1.01, model_slack=0.5)


class TestChooseN:
    """Tests for sample-size selection."""

    def test_canonical_interval(self):
        assert choose_n(Fraction(-1, 20), Fraction(1, 20), CANONICAL) == 586

    def test_worked_example(self):
        assert choose_n(0, Fraction(2, 5), CANONICAL) == 37

    def test_too_long(self):
        with pytest.raises(WidthError):
            choose_n(0, 4, CANONICAL)

    def test_rejects_empty_interval(self):
        with pytest.raises(DomainError):
            choose_n(1, 1, CANONICAL)

    def test_certificate_is_exact(self):
        width = Fraction(1, 10)
        assert certify_sample_size(width, 586, CANONICAL)
        assert certify_sample_size(width, 708, CANONICAL)
        assert not certify_sample_size(width, 585, CANONICAL)
        assert not certify_sample_size(width, 709, CANONICAL)

    @settings(max_examples=1000, deadline=None)
    @given(st.fractions(min_value=Fraction(1, 10 ** 6), max_value=Fraction(11, 10)))
    def test_admissible_widths_certify(self, width):
        """Test that the chosen n satisfies the double inequality in rational arithmetic."""
        n = choose_n(0, width, CANONICAL)
        assert n >= CANONICAL.n_min
        assert certify_sample_size(width, n, CANONICAL)
        if n > CANONICAL.n_min:
            assert not certify_sample_size(width, n - 1, CANONICAL)

    @settings(max_examples=200, deadline=None)
    @given(st.fractions(min_value=3, max_value=1000))
    def test_inadmissible_widths_raise(self, width):
        with pytest.raises(WidthError):
            choose_n(0, width, CANONICAL)


class TestSuitability:
    """Tests for suitability and scans."""

    def test_hodges_pivot_is_suitable(self):
        probability, suitable = is_suitable(MODEL, HODGES, 0, 586, CANONICAL)
        assert suitable
        assert probability < 1e-3

    def test_mle_is_never_suitable(self):
        probability, suitable = is_suitable(MODEL, EstimatorSpec.mle(), 0, 586, CANONICAL)
        assert not suitable
        assert probability == pytest.approx(0.31731050786291415, abs=1e-12)

    def test_constant_suitable_for_any_threshold(self):
        assert is_suitable(MODEL, EstimatorSpec.constant(0.0), 0, 586, CANONICAL) == (0.0, True)

    def test_rejects_n_below_minimum(self):
        config = ExtractionConfig(n_min=600, initial_interval=(Fraction(-1, 25), Fraction(1, 25)))
        with pytest.raises(DomainError):
            is_suitable(MODEL, HODGES, 0, 10, config)

    def test_canonical_scan(self):
        """Test the first scan: suitable points fill about (-n^(-1/2), n^(-1/2))."""
        scan = scan_suitable(MODEL, HODGES, CANONICAL.initial_interval, 586, CANONICAL)
        r = 1 / 586 ** 0.5
        assert len(scan.points) == 64
        assert scan.resolution_ok
        assert scan.grid_step == Fraction(1, 650)
        left, right = scan.suitable_hull
        assert -r <= float(left) < -r + float(scan.grid_step)
        assert r - float(scan.grid_step) < float(right) <= r
        assert scan.diameter <= interval_width(CANONICAL.initial_interval) / Fraction(121, 100)

    def test_scan_is_the_same_with_workers(self):
        single = scan_suitable(MODEL, HODGES, CANONICAL.initial_interval, 586, CANONICAL)
        pooled = scan_suitable(MODEL, HODGES, CANONICAL.initial_interval, 586, CANONICAL, workers=4)
        assert single == pooled

    def test_coarse_scan_is_flagged(self, caplog):
        with caplog.at_level(logging.WARNING, logger="superefficiency_lab.extraction"):
            scan = scan_suitable(MODEL, HODGES, CANONICAL.initial_interval, 10 ** 6, CANONICAL)
        assert not scan.resolution_ok
        assert "spacing" in caplog.text

    def test_rejects_interval_outside_initial(self):
        with pytest.raises(DomainError):
            scan_suitable(MODEL, HODGES, (Fraction(0), Fraction(1, 10)), 586, CANONICAL)


class TestShrinkInterval:
    """Tests for the shrinking step."""

    def test_empty_hull(self):
        scan = scan_suitable(MODEL, EstimatorSpec.mle(), CANONICAL.initial_interval, 586, CANONICAL)
        with pytest.raises(NoSuperefficientPoint):
            shrink_interval(scan, CANONICAL.initial_interval, CANONICAL)

    def test_canonical_step(self):
        """Test that width 0.1 shrinks below 0.1 / 1.1."""
        interval = CANONICAL.initial_interval
        scan = scan_suitable(MODEL, HODGES, interval, 586, CANONICAL)
        after = shrink_interval(scan, interval, CANONICAL)
        assert interval_width(after) <= interval_width(interval) / Fraction(11, 10)
        assert after[0] < 0 < after[1]

    def test_wide_hull_violates(self):
        interval = CANONICAL.initial_interval
        scan = SuitabilityScan(
            n=586,
            threshold=CANONICAL.threshold,
            points=[],
            grid_step=Fraction(1, 650),
            resolution_ok=True,
            suitable_hull=(Fraction(-1, 25), Fraction(1, 25)),
            diameter=Fraction(2, 25),
        )
        assert shrink_interval(scan, interval, CANONICAL)
        scan.suitable_hull = (Fraction(-49, 1000), Fraction(49, 1000))
        scan.diameter = Fraction(98, 1000)
        with pytest.raises(AssumptionViolation):
            shrink_interval(scan, interval, CANONICAL)


class TestExtractParameter:
    """Tests for the full interval-shrinking run."""

    def test_recovers_hodges_pivot(self):
        """Test convergence to the pivot with every step certified."""
        trace = extract_parameter(MODEL, HODGES, CANONICAL)
        assert trace.outcome is ExtractionOutcome.CONVERGED
        assert trace.converged
        assert len(trace.iterations) <= 30
        assert abs(trace.theta_hat) <= 1e-3
        assert interval_width(trace.final_interval) <= Fraction(1, 1000)
        for record in trace.iterations:
            width = interval_width(record.interval_before)
            assert record.interval_before[0] < 0 < record.interval_before[1]
            assert certify_sample_size(width, record.n, CANONICAL)
            assert record.scan.diameter <= width / Fraction(121, 100)
            assert interval_width(record.interval_after) <= width / Fraction(11, 10)
            assert 0.8 <= record.width_ratio <= 0.86

    def test_recovers_constant_value(self):
        trace = extract_parameter(MODEL, EstimatorSpec.constant(0.02), CANONICAL)
        assert trace.converged
        assert abs(trace.theta_hat - 0.02) <= 1e-3

    def test_mle_has_no_superefficient_point(self):
        trace = extract_parameter(MODEL, EstimatorSpec.mle(), CANONICAL)
        assert trace.outcome is ExtractionOutcome.NO_SUPEREFFICIENT_POINT
        assert trace.failed_iteration == 1
        assert trace.theta_hat is None
        assert len(trace.iterations) == 1

    def test_iteration_cap(self):
        config = ExtractionConfig(max_iterations=3)
        trace = extract_parameter(MODEL, HODGES, config)
        assert trace.outcome is ExtractionOutcome.MAX_ITERATIONS
        assert len(trace.iterations) == 3
        assert not trace.converged

    def test_already_converged(self):
        config = ExtractionConfig(tolerance=1)
        trace = extract_parameter(MODEL, HODGES, config)
        assert trace.converged
        assert trace.iterations == []
        assert trace.theta_hat == 0.0

    def test_assumption_violation_is_recorded(self, monkeypatch):
        """Test that a scan which cannot be shrunk stops the run at that iteration."""
        real_scan = scan_suitable

        def covering_scan(model, spec, interval, n, config, workers=1):
            scan = real_scan(model, spec, interval, n, config, workers)
            scan.suitable_hull = tuple(interval)
            scan.diameter = interval[1] - interval[0]
            return scan

        monkeypatch.setattr(extraction, "scan_suitable", covering_scan)
        trace = extract_parameter(MODEL, HODGES, CANONICAL)
        assert trace.outcome is ExtractionOutcome.ASSUMPTION_VIOLATION
        assert trace.failed_iteration == 1
        assert "(1+eps)^-2" in trace.detail
        assert trace.iterations[0].interval_after is None
        assert not trace.converged

    def test_deterministic(self):
        assert extract_parameter(MODEL, HODGES, CANONICAL).to_dict() == extract_parameter(MODEL, HODGES, CANONICAL).to_dict()

    def test_trace_serialises(self):
        trace = extract_parameter(MODEL, HODGES, CANONICAL)
        data = json.loads(json.dumps(trace.to_dict()))
        assert data["outcome"] == "converged"
        assert len(data["iterations"]) == len(trace.iterations)
        assert data["iterations"][0]["n"] == 586

    def test_render_trace(self):
        trace = extract_parameter(MODEL, HODGES, CANONICAL)
        lines = render_trace(trace).splitlines()
        assert len(lines) == len(trace.iterations) + 2
        assert "n=586" in lines[1]
        assert lines[-1].startswith("outcome: converged")

    def test_render_failed_trace(self):
        text = render_trace(extract_parameter(MODEL, EstimatorSpec.mle(), CANONICAL))
        assert "hull=none" in text
        assert "no_superefficient_point" in text


class TestExclusion:
    """Tests for the exclusion check on two suitable points."""

    def test_close_suitable_points(self):
        report = exclusion_check(MODEL, HODGES, 0, Fraction(3, 100), 586, CANONICAL)
        assert report.separation_ok
        assert report.affinity_ok
        assert report.excluded
        assert report.passed
        assert report.witness_mean == pytest.approx(0.015)

    def test_identical_points(self):
        report = exclusion_check(MODEL, HODGES, 0, 0, 586, CANONICAL)
        assert report.passed
        assert report.affinity == 0.5

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_pairs_from_scan(self, data):
        """Test that any two suitable points of the canonical scan pass the check."""
        points = canonical_suitable_points()
        q1 = data.draw(st.sampled_from(points))
        q2 = data.draw(st.sampled_from(points))
        report = exclusion_check(MODEL, HODGES, q1, q2, 586, CANONICAL)
        assert report.passed
        assert report.separation <= report.separation_bound
        assert report.affinity > report.threshold

    def test_reports_c(self):
        report = exclusion_check(MODEL, HODGES, 0, Fraction(1, 100), 586, CANONICAL)
        assert report.c == CANONICAL.c
        assert report.to_dict()["c"] == 1.0

    def test_rejects_unsuitable_point(self):
        with pytest.raises(PreconditionError):
            exclusion_check(MODEL, EstimatorSpec.mle(), 0, Fraction(1, 100), 586, CANONICAL)

    def test_rejects_distant_points(self):
        spec = EstimatorSpec.multi_hodges([0.0, 0.3])
        with pytest.raises(PreconditionError):
            exclusion_check(MODEL, spec, 0, Fraction(3, 10), 586, CANONICAL)

    def test_serialises(self):
        data = exclusion_check(MODEL, HODGES, 0, Fraction(1, 100), 586, CANONICAL).to_dict()
        assert data["passed"] is True
        json.dumps(data)


class TestCountability:
    """Tests for the single-locus check."""

    def test_hodges_single_locus(self):
        report = countability_gap_check(MODEL, HODGES, CANONICAL, n_max=1000)
        assert report.n_star == 586
        assert report.tested_n == list(range(586, 709))
        assert report.loci == 1
        assert report.passed

    def test_mle_passes_vacuously(self):
        report = countability_gap_check(MODEL, EstimatorSpec.mle(), CANONICAL, n_max=1000)
        assert report.persistent_points == []
        assert report.loci == 0
        assert report.passed

    def test_close_pivots_collapse(self):
        """Test that pivots closer than 2 c n^(-1/2) leave one persistent locus."""
        report = countability_gap_check(MODEL, EstimatorSpec.multi_hodges([0.0, 0.04]), CANONICAL, n_max=1000)
        assert report.loci == 1
        assert report.passed

    def test_far_pivots_are_not_both_suitable(self):
        spec = EstimatorSpec.multi_hodges([-0.045, 0.045])
        assert not is_suitable(MODEL, spec, Fraction(45, 1000), 586, CANONICAL)[1]
        assert not is_suitable(MODEL, spec, Fraction(-45, 1000), 586, CANONICAL)[1]

    def test_n_max_cap(self):
        report = countability_gap_check(MODEL, HODGES, CANONICAL, n_max=600)
        assert report.tested_n == list(range(586, 601))
        with pytest.raises(DomainError):
            countability_gap_check(MODEL, HODGES, CANONICAL, n_max=100)

    def test_serialises(self):
        data = countability_gap_check(MODEL, HODGES, CANONICAL, n_max=600).to_dict()
        assert data["tested_count"] == 15
        json.dumps(data)
