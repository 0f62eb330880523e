"""Rating normalization, attention filtering, aggregation, endpoint merits."""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chroma_infer.associations import (
    AssociationTable,
    AttentionCheckSpec,
    EndpointRatings,
    RatingRecord,
    association_difference,
    attention_check,
    endpoint_phrases,
    endpoint_ratings_from_tables,
    mean_associations,
    normalize_rating,
    passing_participants,
    read_ratings_csv,
)
from chroma_infer.errors import (
    CsvFormatError,
    EmptyCohortError,
    IncompleteDataError,
    InvalidInputError,
    UnknownColorError,
)

CHECK = AttentionCheckSpec(
    strong_colors=frozenset({1, 2, 3, 4, 5, 6}),
    weak_colors=frozenset({7, 8, 9, 10, 11, 12}),
)


def _records(*rows):
    return [RatingRecord(*row) for row in rows]


def _check_block(pid, strong_raw=160, weak_raw=-160):
    rows = []
    for c in sorted(CHECK.strong_colors):
        rows.append(RatingRecord(pid, "celery", c, strong_raw))
    for c in sorted(CHECK.weak_colors):
        rows.append(RatingRecord(pid, "celery", c, weak_raw))
    return rows


class TestNormalizeRating:
    @pytest.mark.parametrize("raw,expected", [(-200, 0.0), (0, 0.5), (200, 1.0),
                                              (100, 0.75), (-100, 0.25)])
    def test_values(self, raw, expected):
        assert normalize_rating(raw) == expected

    @pytest.mark.parametrize("bad", [-201, 201, math.nan, math.inf])
    def test_out_of_range(self, bad):
        with pytest.raises(InvalidInputError):
            normalize_rating(bad)

    @given(raw=st.integers(-200, 200))
    @settings(max_examples=100, deadline=None)
    def test_affine_and_bounded(self, raw):
        v = normalize_rating(raw)
        assert 0.0 <= v <= 1.0
        assert v == pytest.approx((raw + 200) / 400, abs=1e-12)


class TestRatingRecord:
    def test_normalized(self):
        assert RatingRecord("p1", "fire", 3, 100).normalized == 0.75

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            RatingRecord("p1", "fire", 0, 100)
        with pytest.raises(InvalidInputError):
            RatingRecord("p1", "fire", 1, 300)


class TestAttentionCheck:
    def test_spec_sizes_enforced(self):
        with pytest.raises(InvalidInputError):
            AttentionCheckSpec(frozenset({1, 2, 3}), frozenset({7, 8, 9, 10, 11, 12}))

    def test_spec_disjoint(self):
        with pytest.raises(InvalidInputError):
            AttentionCheckSpec(frozenset(range(1, 7)), frozenset(range(6, 12)))

    def test_all_correct_passes(self):
        ratings = {c: 0.9 for c in CHECK.strong_colors}
        ratings.update({c: 0.1 for c in CHECK.weak_colors})
        assert attention_check(ratings, CHECK)

    def test_five_of_six_each_passes(self):
        ratings = {c: 0.9 for c in CHECK.strong_colors}
        ratings.update({c: 0.1 for c in CHECK.weak_colors})
        ratings[1] = 0.1  # one strong miss
        ratings[7] = 0.9  # one weak miss
        assert attention_check(ratings, CHECK)

    def test_four_of_six_fails(self):
        ratings = {c: 0.9 for c in CHECK.strong_colors}
        ratings.update({c: 0.1 for c in CHECK.weak_colors})
        ratings[1] = 0.1
        ratings[2] = 0.1
        assert not attention_check(ratings, CHECK)

    def test_threshold_is_strict(self):
        # ratings exactly at threshold count for neither side
        ratings = {c: 0.5 for c in CHECK.strong_colors | CHECK.weak_colors}
        assert not attention_check(ratings, CHECK)

    def test_missing_colors_raise(self):
        with pytest.raises(IncompleteDataError):
            attention_check({1: 0.9}, CHECK)


class TestPassingParticipants:
    def test_filters_failing_participant(self):
        records = _check_block("good") + _check_block("bad", strong_raw=-160)
        assert passing_participants(records, CHECK) == {"good"}

    def test_participant_without_check_block_is_kept(self):
        records = _check_block("good") + _records(("nocheck", "fire", 1, 50))
        assert passing_participants(records, CHECK) == {"good", "nocheck"}

    def test_partial_check_block_raises(self):
        records = _check_block("good")[:-1]
        with pytest.raises(IncompleteDataError, match="good"):
            passing_participants(records, CHECK)


class TestMeanAssociations:
    def test_within_participant_averaging_and_sem(self):
        records = _records(
            ("p1", "fire", 1, 100), ("p1", "fire", 1, 200),  # averages to 0.875
            ("p2", "fire", 1, 0),
        )
        table = mean_associations(records, "fire")
        assert table.n_participants == 2
        assert table.mean(1) == pytest.approx(0.6875)
        assert table.sem(1) == pytest.approx(0.1875)

    def test_single_participant_sem_zero(self):
        table = mean_associations(_records(("p1", "fire", 1, 100)), "fire")
        assert table.sem(1) == 0.0

    def test_attention_filter_changes_mean(self):
        records = (
            _check_block("good") + _check_block("bad", strong_raw=-160)
            + _records(("good", "fire", 20, 200), ("bad", "fire", 20, -200))
        )
        unfiltered = mean_associations(records, "fire")
        filtered = mean_associations(records, "fire", CHECK)
        assert unfiltered.mean(20) == pytest.approx(0.5)
        assert filtered.mean(20) == pytest.approx(1.0)
        assert filtered.n_participants == 1

    def test_all_failing_raises_empty_cohort(self):
        records = _check_block("bad", strong_raw=-160) + _records(("bad", "fire", 1, 0))
        with pytest.raises(EmptyCohortError):
            mean_associations(records, "fire", CHECK)

    def test_no_records_for_concept(self):
        with pytest.raises(EmptyCohortError):
            mean_associations(_records(("p1", "fire", 1, 0)), "water")

    def test_incomplete_coverage_raises(self):
        records = _records(
            ("p1", "fire", 1, 0), ("p1", "fire", 2, 0), ("p2", "fire", 1, 0),
        )
        with pytest.raises(IncompleteDataError, match="p2"):
            mean_associations(records, "fire")

    def test_colors_sorted(self):
        records = _records(("p1", "fire", 5, 0), ("p1", "fire", 2, 0))
        assert mean_associations(records, "fire").colors == (2, 5)

    def test_unknown_color_lookup(self):
        table = mean_associations(_records(("p1", "fire", 1, 0)), "fire")
        with pytest.raises(UnknownColorError):
            table.mean(9)
        with pytest.raises(UnknownColorError):
            table.sem(9)

    def test_table_alignment_enforced(self):
        with pytest.raises(InvalidInputError):
            AssociationTable("fire", (1, 2), (0.5,), (0.0, 0.0), 1)

    def test_to_json(self):
        table = mean_associations(_records(("p1", "fire", 1, 100)), "fire")
        assert table.to_json() == {
            "concept": "fire", "colors": [1], "means": [0.75], "sem": [0.0], "n": 1,
        }


class TestAssociationDifference:
    def test_sign_convention(self):
        table = AssociationTable("fire", (1, 2), (0.2, 0.9), (0.0, 0.0), 1)
        # dark color 2 more associated -> positive
        assert association_difference(table, light=1, dark=2) == pytest.approx(0.7)
        assert association_difference(table, light=2, dark=1) == pytest.approx(-0.7)


class TestEndpointRatings:
    def test_phrases_autofilled(self):
        er = EndpointRatings("rain", 0.8, 0.2, 0.7, 0.3)
        assert er.more_phrase == "a lot of rain"
        assert er.less_phrase == "no rain"

    def test_endpoint_phrases(self):
        assert endpoint_phrases("snow") == ("a lot of snow", "no snow")

    def test_merit_graph_edge_placement(self):
        graph = EndpointRatings("rain", 0.8, 0.2, 0.7, 0.3).to_merit_graph()
        assert graph.x1 == 0.8  # (dark, more)
        assert graph.x2 == 0.2  # (light, more)
        assert graph.x3 == 0.7  # (light, less)
        assert graph.x4 == 0.3  # (dark, less)

    def test_range_validation(self):
        with pytest.raises(InvalidInputError):
            EndpointRatings("rain", 1.2, 0.2, 0.7, 0.3)

    def test_from_tables_uses_right_cells(self):
        more = AssociationTable("a lot of rain", (1, 2), (0.1, 0.9), (0.0, 0.0), 1)
        less = AssociationTable("no rain", (1, 2), (0.8, 0.2), (0.0, 0.0), 1)
        er = endpoint_ratings_from_tables("rain", more, less, light=1, dark=2)
        assert er.dark_more == 0.9
        assert er.light_more == 0.1
        assert er.light_less == 0.8
        assert er.dark_less == 0.2
        assert er.more_phrase == "a lot of rain"


class TestReadRatingsCsv:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text(
            "participant_id,concept,color_index,raw_rating\n"
            "p1,fire,3,-120\n"
            "p2,a lot of fire,71,200\n"
        )
        records = read_ratings_csv(path)
        assert records == [
            RatingRecord("p1", "fire", 3, -120),
            RatingRecord("p2", "a lot of fire", 71, 200),
        ]

    def test_missing_column(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("participant_id,concept,color_index\np1,fire,3\n")
        with pytest.raises(CsvFormatError):
            read_ratings_csv(path)

    def test_bad_row_names_line(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text(
            "participant_id,concept,color_index,raw_rating\n"
            "p1,fire,3,50\n"
            "p1,fire,oops,50\n"
        )
        with pytest.raises(CsvFormatError, match="line 3"):
            read_ratings_csv(path)

    def test_out_of_range_rating_rejected(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text(
            "participant_id,concept,color_index,raw_rating\np1,fire,3,999\n"
        )
        with pytest.raises(CsvFormatError):
            read_ratings_csv(path)
