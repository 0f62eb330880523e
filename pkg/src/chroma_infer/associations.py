"""Color-concept association ratings: ingestion, filtering, and aggregation.

Raw ratings arrive on a -200..200 slider and are normalized to [0, 1].
Participants can be screened with an attention check on a reference concept
whose strong and weak colors are known in advance.  Aggregated tables feed
both the color-space regression and the endpoint-concept merit graphs used
by assignment inference.
"""
from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass, field
from statistics import mean, stdev
from typing import Iterable, Mapping

from .errors import (
    CsvFormatError,
    EmptyCohortError,
    IncompleteDataError,
    InvalidInputError,
    UnknownColorError,
)
from .inference import MeritGraph2x2


def normalize_rating(raw: float) -> float:
    """Map a -200..200 slider rating onto [0, 1]."""
    if not (isinstance(raw, (int, float)) and math.isfinite(raw)):
        raise InvalidInputError(f"rating must be a finite number, got {raw!r}")
    if not (-200 <= raw <= 200):
        raise InvalidInputError(f"rating {raw} outside [-200, 200]")
    return (raw + 200.0) / 400.0


@dataclass(frozen=True)
class RatingRecord:
    participant_id: str
    concept: str
    color_index: int
    raw_rating: int

    def __post_init__(self):
        if self.color_index < 1:
            raise InvalidInputError(f"color index must be >= 1, got {self.color_index}")
        if not (-200 <= self.raw_rating <= 200):
            raise InvalidInputError(
                f"rating {self.raw_rating} outside [-200, 200]"
            )

    @property
    def normalized(self) -> float:
        return normalize_rating(self.raw_rating)


@dataclass(frozen=True)
class AttentionCheckSpec:
    """Six strongly and six weakly associated colors of a check concept."""

    strong_colors: frozenset[int]
    weak_colors: frozenset[int]
    threshold: float = 0.5
    min_pass: int = 5
    concept: str = "celery"

    def __post_init__(self):
        strong = frozenset(self.strong_colors)
        weak = frozenset(self.weak_colors)
        object.__setattr__(self, "strong_colors", strong)
        object.__setattr__(self, "weak_colors", weak)
        if len(strong) != 6 or len(weak) != 6:
            raise InvalidInputError("attention check needs 6 strong and 6 weak colors")
        if strong & weak:
            raise InvalidInputError("strong and weak color sets must be disjoint")


def attention_check(ratings: Mapping[int, float], spec: AttentionCheckSpec) -> bool:
    """Pass iff >= min_pass strong colors rate above threshold and
    >= min_pass weak colors rate below it."""
    needed = spec.strong_colors | spec.weak_colors
    missing = sorted(needed - set(ratings))
    if missing:
        raise IncompleteDataError(f"attention check missing colors {missing}")
    strong_ok = sum(1 for c in spec.strong_colors if ratings[c] > spec.threshold)
    weak_ok = sum(1 for c in spec.weak_colors if ratings[c] < spec.threshold)
    return strong_ok >= spec.min_pass and weak_ok >= spec.min_pass


@dataclass(frozen=True)
class AssociationTable:
    """Mean normalized association per color for one concept."""

    concept: str
    colors: tuple[int, ...]
    means: tuple[float, ...]
    sems: tuple[float, ...]
    n_participants: int
    _index: dict = field(default=None, repr=False, compare=False, init=False)

    def __post_init__(self):
        if len(self.colors) != len(self.means) or len(self.colors) != len(self.sems):
            raise InvalidInputError("colors, means, and sems must align")
        object.__setattr__(
            self, "_index", {c: i for i, c in enumerate(self.colors)}
        )

    def mean(self, color_index: int) -> float:
        try:
            return self.means[self._index[color_index]]
        except KeyError:
            raise UnknownColorError(
                f"concept {self.concept!r} has no rating for color {color_index}"
            ) from None

    def sem(self, color_index: int) -> float:
        try:
            return self.sems[self._index[color_index]]
        except KeyError:
            raise UnknownColorError(
                f"concept {self.concept!r} has no rating for color {color_index}"
            ) from None

    def to_json(self) -> dict:
        return {
            "concept": self.concept,
            "colors": list(self.colors),
            "means": list(self.means),
            "sem": list(self.sems),
            "n": self.n_participants,
        }


def _per_participant_color_means(
    records: Iterable[RatingRecord], concept: str
) -> dict[str, dict[int, float]]:
    grouped: dict[str, dict[int, list[float]]] = defaultdict(lambda: defaultdict(list))
    for rec in records:
        if rec.concept == concept:
            grouped[rec.participant_id][rec.color_index].append(rec.normalized)
    return {
        pid: {c: mean(vals) for c, vals in colors.items()}
        for pid, colors in grouped.items()
    }


def passing_participants(
    records: Iterable[RatingRecord], check: AttentionCheckSpec
) -> set[str]:
    """Participant ids passing the attention check.

    Participants with no ratings on the check concept are kept (no check was
    collected for them); participants with a partial check block are an
    error rather than a silent pass.
    """
    records = list(records)
    all_ids = {r.participant_id for r in records}
    check_ratings = _per_participant_color_means(records, check.concept)
    passing = set()
    for pid in all_ids:
        if pid not in check_ratings:
            passing.add(pid)
            continue
        try:
            if attention_check(check_ratings[pid], check):
                passing.add(pid)
        except IncompleteDataError as exc:
            raise IncompleteDataError(
                f"participant {pid!r}: {exc.message}"
            ) from exc
    return passing


def mean_associations(
    records: Iterable[RatingRecord],
    concept: str,
    check: AttentionCheckSpec | None = None,
) -> AssociationTable:
    """Aggregate normalized ratings for one concept across participants.

    Multiple ratings of a color by one participant average within that
    participant first.  Every retained participant must cover every rated
    color (complete designs are assumed; gaps fail loudly).
    """
    records = list(records)
    per_participant = _per_participant_color_means(records, concept)
    if check is not None:
        keep = passing_participants(records, check)
        per_participant = {
            pid: v for pid, v in per_participant.items() if pid in keep
        }
    if not per_participant:
        raise EmptyCohortError(
            f"no participants with ratings for {concept!r}"
            + (" after attention filtering" if check else "")
        )
    colors = sorted({c for v in per_participant.values() for c in v})
    for pid, v in per_participant.items():
        gaps = [c for c in colors if c not in v]
        if gaps:
            raise IncompleteDataError(
                f"participant {pid!r} missing ratings for colors {gaps} "
                f"on concept {concept!r}"
            )
    n = len(per_participant)
    means, sems = [], []
    for c in colors:
        vals = [per_participant[pid][c] for pid in sorted(per_participant)]
        means.append(mean(vals))
        sems.append(stdev(vals) / math.sqrt(n) if n > 1 else 0.0)
    return AssociationTable(concept, tuple(colors), tuple(means), tuple(sems), n)


def association_difference(table: AssociationTable, light: int, dark: int) -> float:
    """mean(dark) - mean(light); positive means the darker color is more
    associated with the concept."""
    return table.mean(dark) - table.mean(light)


def endpoint_phrases(concept: str) -> tuple[str, str]:
    """The concept's endpoint phrasings: ('a lot of X', 'no X')."""
    return (f"a lot of {concept}", f"no {concept}")


@dataclass(frozen=True)
class EndpointRatings:
    """Mean endpoint-concept ratings for one scale's two endpoint colors."""

    concept: str
    dark_more: float
    light_more: float
    light_less: float
    dark_less: float
    more_phrase: str = ""
    less_phrase: str = ""

    def __post_init__(self):
        for name in ("dark_more", "light_more", "light_less", "dark_less"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise InvalidInputError(f"{name} must lie in [0, 1], got {v}")
        if not self.more_phrase or not self.less_phrase:
            more, less = endpoint_phrases(self.concept)
            object.__setattr__(self, "more_phrase", self.more_phrase or more)
            object.__setattr__(self, "less_phrase", self.less_phrase or less)

    def to_merit_graph(self) -> MeritGraph2x2:
        return MeritGraph2x2(
            self.dark_more, self.light_more, self.light_less, self.dark_less
        )

    def to_json(self) -> dict:
        return {
            "concept": self.concept,
            "dark_more": self.dark_more,
            "light_more": self.light_more,
            "light_less": self.light_less,
            "dark_less": self.dark_less,
            "more_phrase": self.more_phrase,
            "less_phrase": self.less_phrase,
        }


def endpoint_ratings_from_tables(
    concept: str,
    more_table: AssociationTable,
    less_table: AssociationTable,
    light: int,
    dark: int,
) -> EndpointRatings:
    """Assemble the four endpoint merits for a (light, dark) color pair from
    the aggregated 'a lot of X' and 'no X' tables."""
    return EndpointRatings(
        concept=concept,
        dark_more=more_table.mean(dark),
        light_more=more_table.mean(light),
        light_less=less_table.mean(light),
        dark_less=less_table.mean(dark),
        more_phrase=more_table.concept,
        less_phrase=less_table.concept,
    )


def read_ratings_csv(path) -> list[RatingRecord]:
    """Read rating records from CSV with columns
    participant_id,concept,color_index,raw_rating."""
    required = ["participant_id", "concept", "color_index", "raw_rating"]
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not set(required).issubset(reader.fieldnames):
            raise CsvFormatError(
                f"ratings CSV needs columns {required}, got {reader.fieldnames}"
            )
        for lineno, row in enumerate(reader, start=2):
            try:
                out.append(
                    RatingRecord(
                        participant_id=row["participant_id"],
                        concept=row["concept"],
                        color_index=int(row["color_index"]),
                        raw_rating=int(row["raw_rating"]),
                    )
                )
            except (TypeError, ValueError, InvalidInputError) as exc:
                raise CsvFormatError(f"bad rating row at line {lineno}: {exc}") from exc
    return out
