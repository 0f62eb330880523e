"""Cylindrical regression, monotonicity screening, and endpoint-pair filters."""
import math

import numpy as np
import pytest

from chroma_infer.color import LabColor, LchColor, interpolate_scale
from chroma_infer.errors import InvalidInputError, SingularFitError
from chroma_infer.scales import (
    PREDICTOR_NAMES,
    CandidatePair,
    FilterCounts,
    PairConstraints,
    RegressionFit,
    design_matrix,
    fit_colorspace_regression,
    monotonicity_check,
    predict_association,
    select_endpoint_pairs,
)


def _random_colors(rng, n):
    return [
        LchColor(float(rng.uniform(10, 95)), float(rng.uniform(0, 90)),
                 float(rng.uniform(0, 360) % 360))
        for _ in range(n)
    ]


def _linear_ratings(colors, coef):
    X = design_matrix(colors)
    return list(X @ np.asarray(coef))


class TestDesignMatrix:
    def test_row_values(self):
        X = design_matrix([LchColor(50, 10, 90)])
        expected = [50.0, 10.0, 1.0, 0.0, 0.0, -1.0, 1.0]
        assert np.allclose(X[0], expected, atol=1e-12)

    def test_column_order_matches_names(self):
        assert PREDICTOR_NAMES == ("L", "C", "sin_h", "cos_h", "sin_2h", "cos_2h",
                                   "intercept")
        assert design_matrix([LchColor(50, 10, 90)]).shape == (1, 7)

    def test_degrees_as_radians_compat_flag(self):
        normal = design_matrix([LchColor(50, 10, 90)])[0]
        compat = design_matrix([LchColor(50, 10, 90)], hue_degrees_as_radians=True)[0]
        assert compat[2] == pytest.approx(math.sin(90.0), abs=1e-12)
        assert not np.allclose(normal, compat)


class TestFitColorspaceRegression:
    def test_recovers_planted_coefficients_exactly(self):
        rng = np.random.default_rng(11)
        colors = _random_colors(rng, 24)
        coef = (-0.004, 0.002, 0.05, -0.1, 0.03, 0.02, 0.6)
        fit = fit_colorspace_regression(colors, _linear_ratings(colors, coef))
        assert np.allclose(fit.coefficients, coef, atol=1e-8)
        assert fit.multiple_r == pytest.approx(1.0, abs=1e-9)
        assert fit.n == 24
        assert fit.intercept == pytest.approx(0.6, abs=1e-8)

    def test_noisy_recovery_within_standard_errors(self):
        rng = np.random.default_rng(7)
        colors = _random_colors(rng, 200)
        coef = np.array((-0.004, 0.002, 0.05, -0.1, 0.03, 0.02, 0.6))
        noise = rng.normal(0, 0.05, len(colors))
        ratings = np.asarray(_linear_ratings(colors, coef)) + noise
        fit = fit_colorspace_regression(colors, list(ratings))

        X = design_matrix(colors)
        resid = np.asarray(fit.residuals)
        sigma2 = float(resid @ resid) / (len(colors) - X.shape[1])
        cov = sigma2 * np.linalg.inv(X.T @ X)
        ses = np.sqrt(np.diag(cov))
        assert np.all(np.abs(np.asarray(fit.coefficients) - coef) < 3.0 * ses)

    def test_residuals_orthogonal_to_design(self):
        rng = np.random.default_rng(3)
        colors = _random_colors(rng, 40)
        ratings = list(rng.uniform(0, 1, 40))
        fit = fit_colorspace_regression(colors, ratings)
        X = design_matrix(colors)
        assert np.max(np.abs(X.T @ np.asarray(fit.residuals))) < 1e-6

    def test_multiple_r_matches_definition(self):
        rng = np.random.default_rng(5)
        colors = _random_colors(rng, 40)
        ratings = np.asarray(_linear_ratings(
            colors, (-0.004, 0.002, 0.05, -0.1, 0.03, 0.02, 0.6)
        )) + rng.normal(0, 0.1, 40)
        fit = fit_colorspace_regression(colors, list(ratings))
        fitted = design_matrix(colors) @ np.asarray(fit.coefficients)
        expected = np.corrcoef(fitted, ratings)[0, 1]
        assert fit.multiple_r == pytest.approx(expected, abs=1e-9)

    def test_too_few_colors(self):
        colors = _random_colors(np.random.default_rng(0), 7)
        with pytest.raises(InvalidInputError):
            fit_colorspace_regression(colors, [0.5] * 7)

    def test_misaligned_inputs(self):
        colors = _random_colors(np.random.default_rng(0), 9)
        with pytest.raises(InvalidInputError):
            fit_colorspace_regression(colors, [0.5] * 8)

    def test_singular_design_names_dependent_columns(self):
        # one shared hue makes all four harmonics and the intercept collinear
        rng = np.random.default_rng(9)
        colors = [
            LchColor(float(rng.uniform(10, 90)), float(rng.uniform(5, 80)), 40.0)
            for _ in range(20)
        ]
        with pytest.raises(SingularFitError) as err:
            fit_colorspace_regression(colors, list(rng.uniform(0, 1, 20)))
        message = str(err.value)
        assert any(name in message for name in ("sin_h", "cos_h", "sin_2h", "cos_2h"))

    def test_predict_association_is_linear(self):
        fit = RegressionFit((0.01, 0.0, 0.0, 0.0, 0.0, 0.0, 0.2), 1.0, (), 10)
        assert predict_association(fit, LchColor(50, 0, 0)) == pytest.approx(0.7)
        assert predict_association(fit, LchColor(0, 0, 0)) == pytest.approx(0.2)

    def test_fit_to_json(self):
        fit = RegressionFit((0.0,) * 7, 0.5, (0.0,), 10)
        data = fit.to_json()
        assert data["predictors"] == list(PREDICTOR_NAMES)
        assert data["n"] == 10


class TestMonotonicityCheck:
    def test_lightness_ramp_passes(self):
        fit = RegressionFit((0.01, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0), 1.0, (), 10)
        scale = interpolate_scale(LabColor(90, 0, 0), LabColor(20, 0, 0))
        report = monotonicity_check(scale, fit)
        assert report.r_squared == pytest.approx(1.0, abs=1e-12)
        assert report.passed and not report.degenerate
        assert report.to_json()["pass"] is True

    def test_constant_predictions_degenerate(self):
        fit = RegressionFit((0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5), 1.0, (), 10)
        scale = interpolate_scale(LabColor(90, 0, 0), LabColor(20, 0, 0))
        report = monotonicity_check(scale, fit)
        assert report.degenerate and not report.passed
        assert report.r_squared == 0.0

    def test_interior_bump_fails(self):
        # cos(h) rises then falls along a scale whose b channel crosses zero
        fit = RegressionFit((0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0), 1.0, (), 10)
        scale = interpolate_scale(LabColor(70, 30, -60), LabColor(30, 30, 60))
        report = monotonicity_check(scale, fit)
        peak = max(report.predicted)
        assert peak > report.predicted[0] and peak > report.predicted[-1]
        assert not report.passed

    def test_threshold_is_inclusive(self):
        fit = RegressionFit((0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0), 1.0, (), 10)
        scale = interpolate_scale(LabColor(70, 30, -60), LabColor(30, 30, 60))
        r2 = monotonicity_check(scale, fit).r_squared
        assert monotonicity_check(scale, fit, threshold=r2).passed
        assert not monotonicity_check(scale, fit, threshold=r2 + 1e-9).passed


class TestPairConstraints:
    def test_delta_allowed_window(self):
        c = PairConstraints()
        assert c.delta_allowed(38.0) and c.delta_allowed(50.0)
        assert c.delta_allowed(37.5) and c.delta_allowed(38.5)
        assert c.delta_allowed(49.5) and c.delta_allowed(50.5)
        assert not c.delta_allowed(37.49)
        assert not c.delta_allowed(44.0)
        assert not c.delta_allowed(50.51)

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            PairConstraints(min_lightness_delta=-1.0)
        with pytest.raises(InvalidInputError):
            PairConstraints(allowed_lightness_deltas=frozenset({-5.0}))


class TestSelectEndpointPairs:
    def test_filter_counts_cleaned_table(self, palette):
        counts = select_endpoint_pairs(palette).counts
        assert counts == FilterCounts(
            total_pairs=2485, equal_lightness=637, small_delta=1059,
            black_white=97, delta_excluded=143, remaining=549,
        )

    def test_filter_counts_published_table(self, published_palette):
        counts = select_endpoint_pairs(published_palette).counts
        assert counts == FilterCounts(
            total_pairs=2485, equal_lightness=637, small_delta=1042,
            black_white=96, delta_excluded=174, remaining=536,
        )

    def test_counts_partition_total(self, palette):
        c = select_endpoint_pairs(palette).counts
        assert (c.equal_lightness + c.small_delta + c.black_white
                + c.delta_excluded + c.remaining) == c.total_pairs

    def test_light_is_lighter_and_sorted(self, palette):
        selection = select_endpoint_pairs(palette)
        by_index = {e.index: e for e in palette.entries}
        keys = []
        for cand in selection.candidates:
            assert by_index[cand.light_index].lab.L > by_index[cand.dark_index].lab.L
            assert cand.lightness_delta >= 37.5
            keys.append((cand.light_index, cand.dark_index))
        assert keys == sorted(keys)

    def test_black_white_excluded_by_default(self, palette):
        selection = select_endpoint_pairs(palette)
        extremes = {
            e.index for e in palette.entries if e.lab.L in (0.0, 100.0)
        }
        for cand in selection.candidates:
            assert cand.light_index not in extremes
            assert cand.dark_index not in extremes

    def test_black_white_retained_when_disabled(self, palette):
        constraints = PairConstraints(exclude_black_white=False)
        selection = select_endpoint_pairs(palette, constraints=constraints)
        assert selection.counts.black_white == 0
        extremes = {e.index for e in palette.entries if e.lab.L in (0.0, 100.0)}
        touched = [
            c for c in selection.candidates
            if c.light_index in extremes or c.dark_index in extremes
        ]
        assert touched

    def test_annotations_with_table_and_fit(self, palette):
        from chroma_infer.associations import AssociationTable

        means = {e.index: min(1.0, max(0.0, 1.0 - e.lab.L / 100.0))
                 for e in palette.entries}
        colors = tuple(sorted(means))
        table = AssociationTable(
            "demo", colors, tuple(means[c] for c in colors),
            tuple(0.0 for _ in colors), 1,
        )
        fit = RegressionFit((-0.01, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0), 1.0, (), 71)
        constraints = PairConstraints(association_difference_bins=(-0.2, 0.2))
        selection = select_endpoint_pairs(palette, table, fit, constraints)
        for cand in selection.candidates:
            assert cand.association_difference == pytest.approx(
                means[cand.dark_index] - means[cand.light_index]
            )
            assert cand.association_difference > 0.0
            assert cand.bin_index == 2  # all differences above 0.2
            assert cand.passes_monotonicity
            assert cand.r_squared == pytest.approx(1.0, abs=1e-9)

    def test_counts_only_when_no_table(self, palette):
        selection = select_endpoint_pairs(palette)
        cand = selection.candidates[0]
        assert cand.association_difference is None
        assert cand.r_squared is None
        assert cand.passes_monotonicity is None

    def test_candidate_json_shape(self):
        cand = CandidatePair(1, 2, 38.0, 0.5, 0.9, True, 1)
        assert cand.to_json() == {
            "light_index": 1, "dark_index": 2, "lightness_delta": 38.0,
            "association_difference": 0.5, "r_squared": 0.9, "pass": True,
            "bin_index": 1,
        }
