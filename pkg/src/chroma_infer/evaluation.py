"""Comparing predictions with response data: outcomes, MSE, correlations,
train/test splitting, and the weight grid search."""
from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass
from statistics import mean, stdev
from typing import Iterable, Mapping

import numpy as np
from scipy import stats

from .errors import (
    AlignmentError,
    CsvFormatError,
    InvalidInputError,
    MissingDataError,
    SplitError,
    UndefinedCorrelationError,
)
from .inference import MeritGraph2x2, WeightPair, predict

#: Keys for outcome/merit maps: (concept, scale_id).
ScaleKey = tuple[str, str]


@dataclass(frozen=True)
class ResponseRecord:
    """One forced-choice trial; chose_dark is derived, never stored."""

    participant_id: str
    concept: str
    scale_id: str
    trial: int
    chose_left: bool
    left_was_dark: bool

    def __post_init__(self):
        if self.trial < 1:
            raise InvalidInputError(f"trial must be >= 1, got {self.trial}")

    @property
    def chose_dark(self) -> bool:
        return self.chose_left == self.left_was_dark


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def read_responses_csv(path) -> list[ResponseRecord]:
    """Read trial records from CSV with columns
    participant_id,concept,scale_id,trial,chose_left,left_was_dark."""
    required = [
        "participant_id", "concept", "scale_id", "trial", "chose_left", "left_was_dark",
    ]
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not set(required).issubset(reader.fieldnames):
            raise CsvFormatError(
                f"responses CSV needs columns {required}, got {reader.fieldnames}"
            )
        for lineno, row in enumerate(reader, start=2):
            try:
                out.append(
                    ResponseRecord(
                        participant_id=row["participant_id"],
                        concept=row["concept"],
                        scale_id=row["scale_id"],
                        trial=int(row["trial"]),
                        chose_left=_parse_bool(row["chose_left"]),
                        left_was_dark=_parse_bool(row["left_was_dark"]),
                    )
                )
            except (TypeError, ValueError, InvalidInputError) as exc:
                raise CsvFormatError(f"bad response row at line {lineno}: {exc}") from exc
    return out


@dataclass(frozen=True)
class ScaleOutcome:
    """Aggregated proportion-chose-dark for one scale."""

    concept: str
    scale_id: str
    p_dark: float
    sem: float
    n_participants: int

    @property
    def scaled_response(self) -> float:
        return 2.0 * self.p_dark - 1.0

    def to_json(self) -> dict:
        return {
            "concept": self.concept,
            "scale_id": self.scale_id,
            "p_dark": self.p_dark,
            "sem": self.sem,
            "scaled_response": self.scaled_response,
            "n": self.n_participants,
        }


def scale_outcomes(records: Iterable[ResponseRecord]) -> dict[ScaleKey, ScaleOutcome]:
    """Per-participant mean over trials, then mean and SEM over participants,
    keyed by (concept, scale_id)."""
    records = list(records)
    if not records:
        raise MissingDataError("no response records")
    per_scale: dict[ScaleKey, dict[str, list[bool]]] = defaultdict(lambda: defaultdict(list))
    for rec in records:
        per_scale[(rec.concept, rec.scale_id)][rec.participant_id].append(rec.chose_dark)
    out = {}
    for key in sorted(per_scale):
        concept, scale_id = key
        per_participant = [
            mean(1.0 if c else 0.0 for c in trials)
            for _, trials in sorted(per_scale[key].items())
        ]
        n = len(per_participant)
        out[key] = ScaleOutcome(
            concept=concept,
            scale_id=scale_id,
            p_dark=mean(per_participant),
            sem=stdev(per_participant) / math.sqrt(n) if n > 1 else 0.0,
            n_participants=n,
        )
    return out


def mse(
    predictions: Mapping[ScaleKey, float],
    outcomes: Mapping[ScaleKey, ScaleOutcome],
) -> float:
    """Mean squared error between signed predictions and scaled responses."""
    if set(predictions) != set(outcomes):
        missing = set(predictions) ^ set(outcomes)
        raise AlignmentError(f"predictions and outcomes disagree on scales: {sorted(missing)}")
    if not predictions:
        raise MissingDataError("nothing to score")
    return mean(
        (predictions[k] - outcomes[k].scaled_response) ** 2 for k in predictions
    )


@dataclass(frozen=True)
class PearsonResult:
    r: float
    p: float
    n: int

    def to_json(self) -> dict:
        return {"r": self.r, "p": self.p, "n": self.n}


def pearson_r(xs: Iterable[float], ys: Iterable[float]) -> PearsonResult:
    """Sample Pearson correlation with a two-sided t-test p-value."""
    x = np.asarray(list(xs), dtype=float)
    y = np.asarray(list(ys), dtype=float)
    if x.shape != y.shape:
        raise InvalidInputError("samples must have equal length")
    n = len(x)
    if n < 3:
        raise UndefinedCorrelationError(f"need at least 3 points, got {n}")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise UndefinedCorrelationError("zero variance sample")
    xd, yd = x - x.mean(), y - y.mean()
    r = float(xd @ yd / math.sqrt(float(xd @ xd) * float(yd @ yd)))
    r = max(-1.0, min(1.0, r))
    if 1.0 - r * r < 1e-15:
        return PearsonResult(r, 0.0, n)
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    p = 2.0 * float(stats.t.sf(abs(t), df=n - 2))
    return PearsonResult(r, p, n)


@dataclass(frozen=True)
class CorrelationComparison:
    z: float
    p: float
    #: The z test assumes independent samples; comparisons of correlations
    #: sharing data are approximate under it.
    method: str = "fisher_z_independent"

    def to_json(self) -> dict:
        return {"z": self.z, "p": self.p, "method": self.method}


def compare_correlations(r1: float, n1: int, r2: float, n2: int) -> CorrelationComparison:
    """Fisher r-to-z difference test for two independent correlations.

    |r| = 1 transforms to an infinite z; returned as +/-inf with p = 0.
    """
    for r in (r1, r2):
        if not -1.0 <= r <= 1.0:
            raise InvalidInputError(f"correlation {r} outside [-1, 1]")
    for n in (n1, n2):
        if n < 4:
            raise InvalidInputError(f"need n >= 4 per sample, got {n}")
    if abs(r1) == 1.0 or abs(r2) == 1.0:
        if r1 == r2:
            return CorrelationComparison(0.0, 1.0)
        z = math.inf if r1 > r2 else -math.inf
        return CorrelationComparison(z, 0.0)
    se = math.sqrt(1.0 / (n1 - 3) + 1.0 / (n2 - 3))
    z = (math.atanh(r1) - math.atanh(r2)) / se
    p = float(math.erfc(abs(z) / math.sqrt(2.0)))  # two-sided normal tail
    return CorrelationComparison(z, p)


@dataclass(frozen=True)
class SplitPartition:
    train: tuple[str, ...]
    test: tuple[str, ...]

    def to_json(self) -> dict:
        return {"train": list(self.train), "test": list(self.test)}


def train_test_split(
    records: Iterable[ResponseRecord], seed: int
) -> dict[ScaleKey, SplitPartition]:
    """Random per-scale halving of participants (odd counts favor train).

    Partitions are disjoint, exhaustive, participant-level, and reproducible
    for a fixed seed.
    """
    per_scale: dict[ScaleKey, set[str]] = defaultdict(set)
    for rec in records:
        per_scale[(rec.concept, rec.scale_id)].add(rec.participant_id)
    rng = np.random.default_rng(seed)
    out = {}
    for key in sorted(per_scale):
        ids = sorted(per_scale[key])
        if len(ids) < 2:
            raise SplitError(f"scale {key} has fewer than 2 participants")
        order = rng.permutation(len(ids))
        shuffled = [ids[i] for i in order]
        cut = (len(ids) + 1) // 2
        out[key] = SplitPartition(tuple(shuffled[:cut]), tuple(shuffled[cut:]))
    return out


def split_outcomes(
    records: Iterable[ResponseRecord],
    partitions: Mapping[ScaleKey, SplitPartition],
    half: str,
) -> dict[ScaleKey, ScaleOutcome]:
    """Outcomes restricted to one half ('train' or 'test') of a partition."""
    if half not in ("train", "test"):
        raise InvalidInputError("half must be 'train' or 'test'")
    kept = [
        rec
        for rec in records
        if rec.participant_id in getattr(partitions[(rec.concept, rec.scale_id)], half)
    ]
    return scale_outcomes(kept)


@dataclass(frozen=True)
class WeightRow:
    weights: WeightPair
    mse_by_concept: tuple[tuple[str, float], ...]
    mse_mean: float

    def to_json(self) -> dict:
        return {
            "wa": self.weights.wa,
            "wd": self.weights.wd,
            "mse_by_concept": dict(self.mse_by_concept),
            "mse_mean": self.mse_mean,
        }


@dataclass(frozen=True)
class WeightSearchResult:
    rows: tuple[WeightRow, ...]
    best: WeightPair

    def to_json(self) -> dict:
        return {"rows": [r.to_json() for r in self.rows], "best": self.best.to_json()}


def predictions_for_weights(
    merits: Mapping[ScaleKey, tuple[MeritGraph2x2, MeritGraph2x2]],
    weights: WeightPair,
) -> dict[ScaleKey, float]:
    """Signed semantic distance per scale under one weighting."""
    return {
        key: predict(a, d, weights).signed_s for key, (a, d) in merits.items()
    }


def _mse_by_concept(
    predictions: Mapping[ScaleKey, float],
    outcomes: Mapping[ScaleKey, ScaleOutcome],
) -> tuple[tuple[str, float], ...]:
    by_concept: dict[str, list[ScaleKey]] = defaultdict(list)
    for key in predictions:
        by_concept[key[0]].append(key)
    return tuple(
        (
            concept,
            mse(
                {k: predictions[k] for k in keys},
                {k: outcomes[k] for k in keys},
            ),
        )
        for concept, keys in sorted(by_concept.items())
    )


def grid_search_weights(
    merits: Mapping[ScaleKey, tuple[MeritGraph2x2, MeritGraph2x2]],
    outcomes: Mapping[ScaleKey, ScaleOutcome],
    increment: float = 0.05,
) -> WeightSearchResult:
    """Scan the weight grid, scoring each pair by MSE per concept averaged
    across concepts.  Ties resolve toward larger wa."""
    if set(merits) != set(outcomes):
        missing = set(merits) ^ set(outcomes)
        raise AlignmentError(f"merits and outcomes disagree on scales: {sorted(missing)}")
    rows = []
    for w in WeightPair.grid(increment):
        preds = predictions_for_weights(merits, w)
        by_concept = _mse_by_concept(preds, outcomes)
        rows.append(
            WeightRow(w, by_concept, mean(v for _, v in by_concept))
        )
    best = min(rows, key=lambda row: (row.mse_mean, -row.weights.wa))
    return WeightSearchResult(tuple(rows), best.weights)


@dataclass(frozen=True)
class WeightingEvaluation:
    """Per-concept squared-error summary for one candidate weighting."""

    weights: WeightPair
    concept: str
    per_scale: tuple[tuple[str, float], ...]  # (scale_id, squared error)
    mean_mse: float
    sem: float

    def to_json(self) -> dict:
        return {
            "wa": self.weights.wa,
            "wd": self.weights.wd,
            "concept": self.concept,
            "per_scale": dict(self.per_scale),
            "mean_mse": self.mean_mse,
            "sem": self.sem,
        }


def evaluate_weightings(
    merits: Mapping[ScaleKey, tuple[MeritGraph2x2, MeritGraph2x2]],
    outcomes: Mapping[ScaleKey, ScaleOutcome],
    weightings: Iterable[WeightPair],
) -> tuple[WeightingEvaluation, ...]:
    """Score candidate weightings on held-out outcomes, per concept."""
    if set(merits) != set(outcomes):
        missing = set(merits) ^ set(outcomes)
        raise AlignmentError(f"merits and outcomes disagree on scales: {sorted(missing)}")
    results = []
    for w in weightings:
        preds = predictions_for_weights(merits, w)
        by_concept: dict[str, list[tuple[str, float]]] = defaultdict(list)
        for (concept, scale_id), pred in sorted(preds.items()):
            err = (pred - outcomes[(concept, scale_id)].scaled_response) ** 2
            by_concept[concept].append((scale_id, err))
        for concept, errs in sorted(by_concept.items()):
            vals = [e for _, e in errs]
            results.append(
                WeightingEvaluation(
                    weights=w,
                    concept=concept,
                    per_scale=tuple(errs),
                    mean_mse=mean(vals),
                    sem=stdev(vals) / math.sqrt(len(vals)) if len(vals) > 1 else 0.0,
                )
            )
    return tuple(results)
