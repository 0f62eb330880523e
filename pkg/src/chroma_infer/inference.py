"""Assignment inference over bipartite merit graphs.

The 2-color x 2-concept case carries the analytic machinery: edge
uncertainty, the probability that the dark-more assignment wins, semantic
distance, and its signed form.  Edge labels on :class:`MeritGraph2x2` are
fixed as x1 = (dark, more), x2 = (light, more), x3 = (light, less),
x4 = (dark, less); the dark-more assignment uses edges {x1, x3} and the
light-more assignment uses {x2, x4}, so the merit gap is
dx = x1 - x2 + x3 - x4.  A general n x n solver is provided for larger
palettes/concept sets.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InvalidInputError, ShapeError

# slope of the empirical edge-uncertainty model sigma = 1.4 * x * (1 - x)
_SIGMA_SCALE = 1.4


def _check_unit(name: str, value: float) -> float:
    if not (isinstance(value, (int, float)) and math.isfinite(value)):
        raise InvalidInputError(f"{name} must be a finite number, got {value!r}")
    if not (0.0 <= value <= 1.0):
        raise InvalidInputError(f"{name} must lie in [0, 1], got {value}")
    return float(value)


@dataclass(frozen=True)
class MeritGraph2x2:
    """Edge merits for two colors x two concept endpoints, each in [0, 1]."""

    x1: float  # (dark, more)
    x2: float  # (light, more)
    x3: float  # (light, less)
    x4: float  # (dark, less)

    def __post_init__(self):
        for name in ("x1", "x2", "x3", "x4"):
            object.__setattr__(self, name, _check_unit(name, getattr(self, name)))

    @property
    def edges(self) -> tuple[float, float, float, float]:
        return (self.x1, self.x2, self.x3, self.x4)

    def swap_colors(self) -> "MeritGraph2x2":
        """Relabel dark<->light (x1<->x2, x3<->x4)."""
        return MeritGraph2x2(self.x2, self.x1, self.x4, self.x3)

    def to_json(self) -> dict:
        return {"x1": self.x1, "x2": self.x2, "x3": self.x3, "x4": self.x4}

    @classmethod
    def from_json(cls, data: dict) -> "MeritGraph2x2":
        try:
            return cls(data["x1"], data["x2"], data["x3"], data["x4"])
        except KeyError as exc:
            raise InvalidInputError(f"merit graph JSON missing key {exc}") from exc


@dataclass(frozen=True)
class EdgeUncertainty:
    s1: float
    s2: float
    s3: float
    s4: float

    @property
    def variance_sum(self) -> float:
        return self.s1 ** 2 + self.s2 ** 2 + self.s3 ** 2 + self.s4 ** 2


def edge_uncertainty(m: MeritGraph2x2) -> EdgeUncertainty:
    """Per-edge standard deviations: sigma_k = 1.4 * x_k * (1 - x_k).

    Zero exactly when the edge merit is 0 or 1 (deterministic edge).
    """
    return EdgeUncertainty(*(_SIGMA_SCALE * x * (1 - x) for x in m.edges))


class Assignment(enum.Enum):
    DARK_MORE = "dark_more"
    LIGHT_MORE = "light_more"

    @property
    def sign(self) -> int:
        return 1 if self is Assignment.DARK_MORE else -1

    def flipped(self) -> "Assignment":
        return Assignment.LIGHT_MORE if self is Assignment.DARK_MORE else Assignment.DARK_MORE


def normal_cdf(z: float) -> float:
    """Standard normal CDF via the complementary error function.

    Double-precision erfc keeps the absolute error near 1e-16, comfortably
    inside the 1e-10 target that Monte Carlo comparisons rely on.
    """
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _merit_gap(m: MeritGraph2x2) -> float:
    return m.x1 - m.x2 + m.x3 - m.x4


def prob_delta_positive(m: MeritGraph2x2) -> float:
    """P(dx > 0) where dx sums independent Normal(x_k, sigma_k) edge draws.

    With every sigma zero the distribution degenerates to the mean gap:
    returns 1, 0, or 0.5 by its sign.
    """
    gap = _merit_gap(m)
    var = edge_uncertainty(m).variance_sum
    if var == 0.0:
        if gap > 0:
            return 1.0
        if gap < 0:
            return 0.0
        return 0.5
    return normal_cdf(gap / math.sqrt(var))


def semantic_distance(m: MeritGraph2x2) -> float:
    """Delta-S = |P(dx > 0) - P(dx < 0)| in [0, 1]."""
    return abs(2.0 * prob_delta_positive(m) - 1.0)


def optimal_assignment_2x2(m: MeritGraph2x2) -> Assignment:
    """Dark-more wins on a positive merit gap; ties resolve to dark-more."""
    return Assignment.DARK_MORE if _merit_gap(m) >= 0 else Assignment.LIGHT_MORE


def signed_semantic_distance(m: MeritGraph2x2) -> float:
    """Semantic distance signed + for dark-more, - for light-more."""
    return optimal_assignment_2x2(m).sign * semantic_distance(m)


def optimal_assignment_n(merit: "np.ndarray") -> tuple[tuple[int, ...], float]:
    """Maximize total merit over permutations of an n x n matrix.

    Returns (permutation, total) where permutation[i] is the column assigned
    to row i.  Ties (within 1e-9 of the optimum) resolve to the
    lexicographically smallest permutation.
    """
    matrix = np.asarray(merit, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeError(f"merit matrix must be square, got shape {matrix.shape}")
    if not np.isfinite(matrix).all():
        raise InvalidInputError("merit matrix entries must be finite")
    n = matrix.shape[0]
    if n == 0:
        return ((), 0.0)
    _, cols = linear_sum_assignment(matrix, maximize=True)
    best_total = float(matrix[np.arange(n), cols].sum())

    # Tighten to the lexicographically smallest optimal permutation: fix each
    # row's column greedily, verifying the remainder can still reach optimum.
    tol = 1e-9 * max(1.0, float(np.abs(matrix).max()))
    chosen: list[int] = []
    free_cols = list(range(n))
    prefix = 0.0
    for row in range(n):
        for col in sorted(free_cols):
            rest_rows = [r for r in range(row + 1, n)]
            rest_cols = [c for c in free_cols if c != col]
            rest_total = 0.0
            if rest_rows:
                sub = matrix[np.ix_(rest_rows, rest_cols)]
                _, sub_cols = linear_sum_assignment(sub, maximize=True)
                rest_total = float(sub[np.arange(len(rest_rows)), sub_cols].sum())
            if prefix + matrix[row, col] + rest_total >= best_total - tol:
                chosen.append(col)
                free_cols.remove(col)
                prefix += float(matrix[row, col])
                break
    return tuple(chosen), best_total


@dataclass(frozen=True)
class WeightPair:
    """Weights on direct-association merit (wa) and dark-is-more merit (wd)."""

    wa: float
    wd: float

    def __post_init__(self):
        _check_unit("wa", self.wa)
        _check_unit("wd", self.wd)
        if abs(self.wa + self.wd - 1.0) > 1e-9:
            raise InvalidInputError(
                f"weights must sum to 1, got wa={self.wa} wd={self.wd}"
            )

    def to_json(self) -> dict:
        return {"wa": self.wa, "wd": self.wd}

    @classmethod
    def from_json(cls, data: dict) -> "WeightPair":
        try:
            return cls(float(data["wa"]), float(data["wd"]))
        except KeyError as exc:
            raise InvalidInputError(f"weight pair JSON missing key {exc}") from exc

    @staticmethod
    def grid(increment: float = 0.05) -> tuple["WeightPair", ...]:
        """All weight pairs stepping wa from 0 to 1 by ``increment``."""
        steps = round(1.0 / increment)
        if steps < 1 or abs(steps * increment - 1.0) > 1e-9:
            raise InvalidInputError(f"increment {increment} does not divide 1")
        pairs = []
        for k in range(steps + 1):
            wa = round(k * increment, 10)
            pairs.append(WeightPair(wa, round(1.0 - wa, 10)))
        return tuple(pairs)


#: Default combination weights (the fitted optimum on the reference data).
DEFAULT_WEIGHTS = WeightPair(0.7, 0.3)


def darkness_merit(salience: float) -> MeritGraph2x2:
    """Dark-is-more merit graph: the structure-preserving edges (dark, more)
    and (light, less) carry the salience; the crossed edges carry 0."""
    s = _check_unit("salience", salience)
    return MeritGraph2x2(s, 0.0, s, 0.0)


@dataclass(frozen=True)
class SalienceEstimate:
    value: float
    source: str  # "ratings" or "lightness_fallback"
    consistent_with_lightness: bool = True

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "source": self.source,
            "consistent_with_lightness": self.consistent_with_lightness,
        }


def darkness_salience(
    ratings: "list[float] | None" = None,
    lightness_delta: "float | None" = None,
    half_range: float = 200.0,
    dark_is_first: bool = True,
) -> SalienceEstimate:
    """Estimate how clearly one endpoint is darker, in [0, 1].

    ``ratings`` are slider positions on a darker-which scale whose midpoint
    means "equal darkness"; each pair is rated twice with sides swapped, and
    values are signed + when the rating points at the nominally darker
    endpoint.  The estimate is mean |rating| / half_range.  If any rating
    points away from the endpoint with lower L*, the estimate is flagged
    inconsistent.  Without ratings, falls back to clamp(lightness_delta/38, 0, 1),
    38 being the smallest lightness gap used for experiment scales.
    """
    if ratings:
        if half_range <= 0:
            raise InvalidInputError("half_range must be positive")
        vals = [float(r) for r in ratings]
        for v in vals:
            if not math.isfinite(v) or abs(v) > half_range:
                raise InvalidInputError(
                    f"rating {v!r} outside slider range +/-{half_range}"
                )
        consistent = all(v >= 0 for v in vals) if dark_is_first else all(v <= 0 for v in vals)
        value = min(1.0, sum(abs(v) for v in vals) / len(vals) / half_range)
        return SalienceEstimate(value, "ratings", consistent)
    if lightness_delta is None:
        raise InvalidInputError("need darkness ratings or a lightness delta")
    value = min(1.0, max(0.0, float(lightness_delta) / 38.0))
    return SalienceEstimate(value, "lightness_fallback", True)


def combine_merit(a: MeritGraph2x2, d: MeritGraph2x2, w: WeightPair) -> MeritGraph2x2:
    """Element-wise weighted sum wa*A + wd*D; stays inside [0, 1].

    The average of unit-interval values is in [0, 1] exactly; the clamp only
    strips float round-off at the endpoints (e.g. 1 + 2e-16).
    """
    return MeritGraph2x2(
        *(min(1.0, max(0.0, w.wa * ae + w.wd * de))
          for ae, de in zip(a.edges, d.edges))
    )


@dataclass(frozen=True)
class PredictionResult:
    assignment: Assignment
    delta_s: float
    signed_s: float
    p_dark_more: float
    combined: MeritGraph2x2

    def to_json(self) -> dict:
        return {
            "assignment": self.assignment.value,
            "delta_s": self.delta_s,
            "signed_s": self.signed_s,
            "p_dark_more": self.p_dark_more,
        }


def predict(a: MeritGraph2x2, d: MeritGraph2x2, w: WeightPair) -> PredictionResult:
    """Combine merit sources, infer the assignment, and score it.

    p_dark_more = (signed_s + 1) / 2 puts the prediction on the same scale
    as proportion-chose-dark response data.
    """
    combined = combine_merit(a, d, w)
    s = signed_semantic_distance(combined)
    return PredictionResult(
        assignment=optimal_assignment_2x2(combined),
        delta_s=semantic_distance(combined),
        signed_s=s,
        p_dark_more=(s + 1.0) / 2.0,
        combined=combined,
    )
