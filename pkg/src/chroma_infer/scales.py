"""Color-space regression, monotonicity screening, and endpoint-pair selection.

A two-harmonic cylindrical model in CIELCh estimates association ratings for
unrated colors.  Candidate scale endpoints are pairs of palette colors passing
a sequence of lightness filters; each surviving pair's interpolated scale is
screened for monotonicity of predicted associations along the 10 steps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import qr

from .associations import AssociationTable, association_difference
from .color import (
    ColorScale,
    D65,
    LchColor,
    Palette,
    WhitePoint,
    interpolate_scale,
    lab_to_lch,
    xyy_to_lab,
)
from .errors import InvalidInputError, SingularFitError

PREDICTOR_NAMES = ("L", "C", "sin_h", "cos_h", "sin_2h", "cos_2h", "intercept")


def design_matrix(colors: "list[LchColor]", hue_degrees_as_radians: bool = False) -> np.ndarray:
    """Predictor matrix [L*, C*, sin h, cos h, sin 2h, cos 2h, 1].

    Hue is converted degrees -> radians before the harmonics.  Setting
    ``hue_degrees_as_radians`` feeds the raw degree value to sin/cos instead,
    reproducing a historical mis-scaling for dataset forensics.
    """
    rows = []
    for c in colors:
        h = c.h if hue_degrees_as_radians else math.radians(c.h)
        rows.append(
            [c.L, c.C, math.sin(h), math.cos(h), math.sin(2 * h), math.cos(2 * h), 1.0]
        )
    return np.array(rows, dtype=float)


@dataclass(frozen=True)
class RegressionFit:
    """OLS fit of association ratings on the cylindrical predictors."""

    coefficients: tuple[float, ...]  # ordered as PREDICTOR_NAMES
    multiple_r: float
    residuals: tuple[float, ...]
    n: int
    hue_degrees_as_radians: bool = False

    @property
    def intercept(self) -> float:
        return self.coefficients[-1]

    def to_json(self) -> dict:
        return {
            "predictors": list(PREDICTOR_NAMES),
            "coefficients": list(self.coefficients),
            "multiple_r": self.multiple_r,
            "n": self.n,
            "hue_degrees_as_radians": self.hue_degrees_as_radians,
        }


def _pearson(xs: np.ndarray, ys: np.ndarray) -> float:
    xd = xs - xs.mean()
    yd = ys - ys.mean()
    denom = math.sqrt(float(xd @ xd) * float(yd @ yd))
    if denom == 0.0:
        return 0.0
    return float(xd @ yd) / denom


def fit_colorspace_regression(
    colors: "list[LchColor]",
    ratings: "list[float]",
    hue_degrees_as_radians: bool = False,
) -> RegressionFit:
    """Least-squares fit (SVD-based, no normal equations) of ratings on the
    two-harmonic cylindrical predictors.

    Needs more colors than the 7 parameters.  A rank-deficient design raises
    with the names of the dependent columns.
    """
    if len(colors) != len(ratings):
        raise InvalidInputError("colors and ratings must align")
    if len(colors) < 8:
        raise InvalidInputError(
            f"need at least 8 colors for a 7-parameter fit, got {len(colors)}"
        )
    X = design_matrix(colors, hue_degrees_as_radians)
    y = np.asarray(ratings, dtype=float)
    if not np.isfinite(y).all():
        raise InvalidInputError("ratings must be finite")
    coef, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        # pivoted QR names which columns are linearly dependent on the others
        _, _, piv = qr(X, mode="economic", pivoting=True)
        dependent = sorted(PREDICTOR_NAMES[i] for i in piv[rank:])
        raise SingularFitError(
            f"design matrix rank {rank} < {X.shape[1]}; dependent columns: "
            + ", ".join(dependent)
        )
    fitted = X @ coef
    return RegressionFit(
        coefficients=tuple(float(c) for c in coef),
        multiple_r=_pearson(fitted, y),
        residuals=tuple(float(r) for r in (y - fitted)),
        n=len(ratings),
        hue_degrees_as_radians=hue_degrees_as_radians,
    )


def predict_association(fit: RegressionFit, color: LchColor) -> float:
    """Model estimate for one color; unclamped (relative order is what's used)."""
    row = design_matrix([color], fit.hue_degrees_as_radians)[0]
    return float(row @ np.asarray(fit.coefficients))


@dataclass(frozen=True)
class MonotonicityReport:
    r_squared: float
    passed: bool
    predicted: tuple[float, ...]
    degenerate: bool = False

    def to_json(self) -> dict:
        return {
            "r_squared": self.r_squared,
            "pass": self.passed,
            "predicted": list(self.predicted),
            "degenerate": self.degenerate,
        }


def monotonicity_check(scale: ColorScale, fit: RegressionFit, threshold: float = 0.8) -> MonotonicityReport:
    """Screen a scale: predicted associations along steps 1..10 must track the
    sequence linearly (R-squared >= threshold).

    R-squared is the squared Pearson correlation of predictions with 1..10.
    Constant predictions are degenerate: R-squared 0, fail.
    """
    preds = np.array(
        [predict_association(fit, lab_to_lch(step)) for step in scale.steps]
    )
    seq = np.arange(1, 11, dtype=float)
    if np.allclose(preds, preds[0], atol=1e-12, rtol=0.0):
        return MonotonicityReport(0.0, False, tuple(preds), degenerate=True)
    r = _pearson(preds, seq)
    r2 = r * r
    return MonotonicityReport(r2, bool(r2 >= threshold), tuple(float(p) for p in preds))


@dataclass(frozen=True)
class PairConstraints:
    """Filters applied to candidate endpoint pairs."""

    allowed_lightness_deltas: frozenset = frozenset((38.0, 50.0))
    delta_tolerance: float = 0.5
    min_lightness_delta: float = 38.0
    exclude_black_white: bool = True
    association_difference_bins: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(
            self,
            "allowed_lightness_deltas",
            frozenset(float(d) for d in self.allowed_lightness_deltas),
        )
        if any(d < 0 for d in self.allowed_lightness_deltas):
            raise InvalidInputError("lightness deltas must be >= 0")
        if self.min_lightness_delta < 0:
            raise InvalidInputError("min_lightness_delta must be >= 0")

    def delta_allowed(self, delta: float) -> bool:
        return any(
            abs(delta - d) <= self.delta_tolerance
            for d in self.allowed_lightness_deltas
        )


@dataclass(frozen=True)
class CandidatePair:
    """A surviving (light, dark) endpoint pair with screening metadata."""

    light_index: int
    dark_index: int
    lightness_delta: float
    association_difference: float | None = None
    r_squared: float | None = None
    passes_monotonicity: bool | None = None
    bin_index: int | None = None

    def to_json(self) -> dict:
        return {
            "light_index": self.light_index,
            "dark_index": self.dark_index,
            "lightness_delta": self.lightness_delta,
            "association_difference": self.association_difference,
            "r_squared": self.r_squared,
            "pass": self.passes_monotonicity,
            "bin_index": self.bin_index,
        }


@dataclass(frozen=True)
class FilterCounts:
    """How many pairs each sequential filter removed."""

    total_pairs: int
    equal_lightness: int
    small_delta: int
    black_white: int
    delta_excluded: int
    remaining: int

    def to_json(self) -> dict:
        return {
            "total_pairs": self.total_pairs,
            "equal_lightness": self.equal_lightness,
            "small_delta": self.small_delta,
            "black_white": self.black_white,
            "delta_excluded": self.delta_excluded,
            "remaining": self.remaining,
        }


@dataclass(frozen=True)
class PairSelection:
    counts: FilterCounts
    candidates: tuple[CandidatePair, ...]

    def to_json(self) -> dict:
        return {
            "counts": self.counts.to_json(),
            "candidates": [c.to_json() for c in self.candidates],
        }


def select_endpoint_pairs(
    palette: Palette,
    table: AssociationTable | None = None,
    fit: RegressionFit | None = None,
    constraints: PairConstraints = PairConstraints(),
    wp: WhitePoint = D65,
) -> PairSelection:
    """Enumerate and filter unordered palette pairs into scale candidates.

    Filter sequence (each stage counts only pairs the earlier stages kept):
    equal lightness, lightness delta below minimum, pairs containing black or
    white (optional), lightness delta outside the allowed set.  Equal-lightness
    grouping and black/white detection use the palette's stated L* levels
    (palettes are designed in discrete lightness groups); threshold
    comparisons use L* recomputed from the luminance channel, the physical
    datum.  The two agree on any palette satisfying the cross-space
    consistency invariant.

    Survivors are annotated with signed association difference and the
    monotonicity screen when a table/fit are supplied, and binned by
    association difference when the constraints carry bin edges.
    """
    entries = sorted(palette.entries, key=lambda e: e.index)
    stated = {e.index: e.lab.L for e in entries}
    computed = {e.index: xyy_to_lab(e.xyy, wp).L for e in entries}

    n_total = len(entries) * (len(entries) - 1) // 2
    n_equal = n_small = n_bw = n_delta = 0
    survivors = []
    for i, e1 in enumerate(entries):
        for e2 in entries[i + 1:]:
            if abs(stated[e1.index] - stated[e2.index]) <= 1e-6:
                n_equal += 1
                continue
            delta = abs(computed[e1.index] - computed[e2.index])
            # deltas within tolerance of the minimum count as at-minimum
            if delta < constraints.min_lightness_delta - constraints.delta_tolerance:
                n_small += 1
                continue
            if constraints.exclude_black_white and any(
                stated[e.index] <= 1e-6 or stated[e.index] >= 100 - 1e-6
                for e in (e1, e2)
            ):
                n_bw += 1
                continue
            if not constraints.delta_allowed(delta):
                n_delta += 1
                continue
            light, dark = (e1, e2) if computed[e1.index] > computed[e2.index] else (e2, e1)
            survivors.append((light, dark, delta))

    candidates = []
    bins = constraints.association_difference_bins
    for light, dark, delta in survivors:
        diff = r2 = passed = bin_index = None
        if table is not None:
            diff = association_difference(table, light.index, dark.index)
            if bins is not None:
                bin_index = int(np.digitize(diff, bins))
        if fit is not None:
            report = monotonicity_check(interpolate_scale(light.lab, dark.lab), fit)
            r2, passed = report.r_squared, report.passed
        candidates.append(
            CandidatePair(light.index, dark.index, delta, diff, r2, passed, bin_index)
        )
    candidates.sort(key=lambda c: (c.light_index, c.dark_index))
    counts = FilterCounts(
        total_pairs=n_total,
        equal_lightness=n_equal,
        small_delta=n_small,
        black_white=n_bw,
        delta_excluded=n_delta,
        remaining=len(candidates),
    )
    return PairSelection(counts, tuple(candidates))
