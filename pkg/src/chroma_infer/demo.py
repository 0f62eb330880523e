"""Deterministic synthetic demo dataset generator.

Builds the bundled ratings and responses CSVs so the full pipeline runs
offline.  Ratings follow planted cylindrical models (one per concept) plus
participant noise; responses are Bernoulli draws from the model's own
predictions under planted combination weights (0.6, 0.4).  Regenerate the
bundled files with::

    python -m chroma_infer.demo --out src/chroma_infer/data/demo
"""
from __future__ import annotations

import argparse
import csv
import json
import math
from pathlib import Path

import numpy as np

from . import associations as assoc
from . import inference as inf
from . import scales as sc
from .color import load_uw71
from .pipeline import build_concept_data, merit_sources_for_pair, pick_scales, scale_id_for

MASTER_SEED = 20260823
PLANTED_WEIGHTS = inf.WeightPair(0.6, 0.4)

#: Planted "a lot of X" models: coefficients over (L, C, sin h, cos h,
#: sin 2h, cos 2h, 1).  The "no X" model is the affine flip
#: 0.95 - 0.9 * more; the direct-concept model is more + 0.02.
CONCEPT_MODELS = {
    "rainfall": (-0.006, 0.0010, 0.05, -0.03, 0.02, 0.00, 0.72),
    "daylight": (0.0062, 0.0005, 0.02, 0.03, 0.00, 0.02, 0.12),
    "haze": (-0.0012, -0.0018, 0.05, 0.00, 0.03, 0.00, 0.58),
}

CHECK = assoc.AttentionCheckSpec(
    strong_colors=frozenset({39, 40, 51, 52, 54, 55}),  # mid greens
    weak_colors=frozenset({1, 4, 8, 31, 34, 50}),  # blues and reds
    concept="celery",
)

N_RATERS = 10
N_BAD_RATERS = 2
N_RESPONDERS = 20
N_TRIALS = 10
SCALES_PER_CONCEPT = 6


def _more_value(coef, lch) -> float:
    h = math.radians(lch.h)
    terms = (lch.L, lch.C, math.sin(h), math.cos(h), math.sin(2 * h), math.cos(2 * h), 1.0)
    return float(np.dot(coef, terms))


def model_value(concept: str, phrase_kind: str, lch) -> float:
    more = _more_value(CONCEPT_MODELS[concept], lch)
    if phrase_kind == "more":
        v = more
    elif phrase_kind == "less":
        v = 0.95 - 0.9 * more
    else:  # direct
        v = more + 0.02
    return min(1.0, max(0.0, v))


def _raw_rating(value: float) -> int:
    return int(round(400.0 * value)) - 200


def generate_ratings(palette, rng) -> list[dict]:
    rows = []
    raters = [f"rater{j:02d}" for j in range(N_RATERS + N_BAD_RATERS)]
    bad = set(raters[N_RATERS:])
    for pid in raters:
        # celery attention block: strong colors high, weak low; bad raters
        # answer both near the middle and miss the criterion
        for color in sorted(CHECK.strong_colors | CHECK.weak_colors):
            strong = color in CHECK.strong_colors
            if pid in bad:
                center = 0.45 if strong else 0.55
            else:
                center = 0.85 if strong else 0.15
            value = float(np.clip(center + rng.normal(0, 0.05), 0.0, 1.0))
            rows.append(
                {"participant_id": pid, "concept": CHECK.concept,
                 "color_index": color, "raw_rating": _raw_rating(value)}
            )
        for concept in sorted(CONCEPT_MODELS):
            phrases = {
                concept: "direct",
                assoc.endpoint_phrases(concept)[0]: "more",
                assoc.endpoint_phrases(concept)[1]: "less",
            }
            for label, kind in phrases.items():
                for entry in palette.entries:
                    value = model_value(concept, kind, entry.lch)
                    value = float(np.clip(value + rng.normal(0, 0.06), 0.0, 1.0))
                    rows.append(
                        {"participant_id": pid, "concept": label,
                         "color_index": entry.index, "raw_rating": _raw_rating(value)}
                    )
    return rows


def generate_responses(palette, ratings_rows, rng) -> list[dict]:
    records = [
        assoc.RatingRecord(r["participant_id"], r["concept"],
                           r["color_index"], r["raw_rating"])
        for r in ratings_rows
    ]
    rows = []
    for concept in sorted(CONCEPT_MODELS):
        data = build_concept_data(records, concept, palette, CHECK)
        selection = sc.select_endpoint_pairs(palette, data.direct, data.direct_fit)
        for cand in pick_scales(selection.candidates, SCALES_PER_CONCEPT):
            sid = scale_id_for(cand.light_index, cand.dark_index)
            a_graph, d_graph, _ = merit_sources_for_pair(
                data, palette, cand.light_index, cand.dark_index
            )
            p_dark = inf.predict(a_graph, d_graph, PLANTED_WEIGHTS).p_dark_more
            for j in range(N_RESPONDERS):
                pid = f"resp_{concept[:2]}_{sid}_{j:02d}"
                for trial in range(1, N_TRIALS + 1):
                    chose_dark = bool(rng.random() < p_dark)
                    left_was_dark = trial % 2 == 1
                    rows.append(
                        {
                            "participant_id": pid,
                            "concept": concept,
                            "scale_id": sid,
                            "trial": trial,
                            "chose_left": chose_dark == left_was_dark,
                            "left_was_dark": left_was_dark,
                        }
                    )
    return rows


def write_demo_dataset(out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    palette = load_uw71()
    rng = np.random.default_rng(MASTER_SEED)
    ratings = generate_ratings(palette, rng)
    responses = generate_responses(palette, ratings, rng)

    with open(out / "ratings.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["participant_id", "concept", "color_index", "raw_rating"]
        )
        writer.writeheader()
        writer.writerows(ratings)
    with open(out / "responses.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(
            fh,
            fieldnames=["participant_id", "concept", "scale_id", "trial",
                        "chose_left", "left_was_dark"],
        )
        writer.writeheader()
        for row in responses:
            row = dict(row)
            row["chose_left"] = str(row["chose_left"]).lower()
            row["left_was_dark"] = str(row["left_was_dark"]).lower()
            writer.writerow(row)
    config = {
        "seed": 7,
        "concepts": sorted(CONCEPT_MODELS),
        "attention_check": {
            "concept": CHECK.concept,
            "strong": sorted(CHECK.strong_colors),
            "weak": sorted(CHECK.weak_colors),
        },
        "scales_per_concept": SCALES_PER_CONCEPT,
        "stimuli_per_scale": 10,
        "association_difference_bins": [-0.2, 0.2],
    }
    with open(out / "config.json", "w", encoding="utf-8") as fh:
        json.dump(config, fh, indent=2, sort_keys=True)
        fh.write("\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="regenerate the bundled demo dataset")
    parser.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)
    write_demo_dataset(args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
