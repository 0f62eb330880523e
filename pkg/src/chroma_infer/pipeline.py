"""End-to-end pipeline: ratings -> tables -> fits -> candidate scales ->
stimuli -> predictions -> weight fitting, with every artifact written to disk
under a manifest.

All stages are deterministic for a fixed config and seed; artifacts contain
no timestamps or absolute paths, so reruns are byte-identical.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import associations as assoc
from . import evaluation as ev
from . import inference as inf
from . import scales as sc
from . import stimuli as st
from .color import D65, WhitePoint, interpolate_scale, lab_to_srgb, load_uw71
from .errors import DataError, InvalidInputError, PipelineStageError

ENV_DATA_DIR = "CHROMA_INFER_DATA"


def default_data_dir() -> Path:
    """Data directory: $CHROMA_INFER_DATA if set, else the bundled demo."""
    env = os.environ.get(ENV_DATA_DIR)
    if env:
        return Path(env)
    return Path(str(resources.files("chroma_infer.data") / "demo"))


@dataclass(frozen=True)
class Config:
    """Pipeline configuration; validated against the filesystem at startup."""

    data_dir: Path
    output_dir: Path
    uw71_path: Path | None = None
    white_point: WhitePoint = D65
    arctan: st.ArctanParams = st.DEFAULT_ARCTAN
    noise_sd: float = 0.25
    grid_increment: float = 0.05
    seed: int = 7
    concepts: tuple[str, ...] | None = None
    attention_check: assoc.AttentionCheckSpec | None = None
    constraints: sc.PairConstraints = field(default_factory=sc.PairConstraints)
    scales_per_concept: int = 6
    stimuli_per_scale: int = 10

    def __post_init__(self):
        steps = round(1.0 / self.grid_increment)
        if steps < 1 or abs(steps * self.grid_increment - 1.0) > 1e-9:
            raise InvalidInputError(
                f"grid increment {self.grid_increment} does not divide 1"
            )
        if self.scales_per_concept < 1:
            raise InvalidInputError("scales_per_concept must be >= 1")

    @property
    def ratings_csv(self) -> Path:
        return Path(self.data_dir) / "ratings.csv"

    @property
    def responses_csv(self) -> Path:
        return Path(self.data_dir) / "responses.csv"

    def validate_paths(self) -> None:
        for p in (self.ratings_csv, self.responses_csv):
            if not p.is_file():
                raise DataError(f"missing data file: {p}")
        if self.uw71_path is not None and not Path(self.uw71_path).is_file():
            raise DataError(f"missing palette file: {self.uw71_path}")

    @classmethod
    def from_json_file(cls, path, **overrides) -> "Config":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        base = Path(path).parent
        kwargs: dict = {}

        def respath(p):
            p = Path(p)
            return p if p.is_absolute() else base / p

        if "data_dir" in raw:
            kwargs["data_dir"] = respath(raw["data_dir"])
        if "output_dir" in raw:
            kwargs["output_dir"] = respath(raw["output_dir"])
        if "uw71_path" in raw:
            kwargs["uw71_path"] = respath(raw["uw71_path"])
        if "white_point" in raw:
            wp = raw["white_point"]
            kwargs["white_point"] = WhitePoint(wp["x"], wp["y"], wp.get("Y", 100.0))
        if "arctan" in raw:
            kwargs["arctan"] = st.ArctanParams(
                center=raw["arctan"].get("center", 4.5),
                steepness=raw["arctan"].get("steepness", 1.0),
            )
        for key in ("noise_sd", "grid_increment", "seed", "scales_per_concept",
                    "stimuli_per_scale"):
            if key in raw:
                kwargs[key] = raw[key]
        if "concepts" in raw:
            kwargs["concepts"] = tuple(raw["concepts"])
        if "attention_check" in raw:
            ac = raw["attention_check"]
            kwargs["attention_check"] = assoc.AttentionCheckSpec(
                strong_colors=frozenset(ac["strong"]),
                weak_colors=frozenset(ac["weak"]),
                concept=ac.get("concept", "celery"),
            )
        if "association_difference_bins" in raw:
            kwargs["constraints"] = sc.PairConstraints(
                association_difference_bins=tuple(raw["association_difference_bins"])
            )
        kwargs.update(overrides)
        if "data_dir" not in kwargs:
            kwargs["data_dir"] = default_data_dir()
        if "output_dir" not in kwargs:
            raise InvalidInputError("config needs an output_dir")
        return cls(**kwargs)

    def to_json(self) -> dict:
        return {
            "data_dir": str(self.data_dir),
            "uw71_path": str(self.uw71_path) if self.uw71_path else None,
            "white_point": {"x": self.white_point.x, "y": self.white_point.y},
            "arctan": {"center": self.arctan.center, "steepness": self.arctan.steepness},
            "noise_sd": self.noise_sd,
            "grid_increment": self.grid_increment,
            "seed": self.seed,
            "concepts": list(self.concepts) if self.concepts else None,
            "scales_per_concept": self.scales_per_concept,
            "stimuli_per_scale": self.stimuli_per_scale,
        }


def discover_concepts(records) -> tuple[str, ...]:
    """Concepts with a direct table plus both endpoint phrasings present."""
    present = {r.concept for r in records}
    found = []
    for c in sorted(present):
        more, less = assoc.endpoint_phrases(c)
        if more in present and less in present:
            found.append(c)
    return tuple(found)


def _clamp01(v: float) -> float:
    return min(1.0, max(0.0, v))


@dataclass(frozen=True)
class ConceptData:
    """Aggregated per-concept inputs for scale selection and prediction."""

    concept: str
    direct: assoc.AssociationTable
    more: assoc.AssociationTable
    less: assoc.AssociationTable
    direct_fit: sc.RegressionFit
    more_fit: sc.RegressionFit
    less_fit: sc.RegressionFit


def build_concept_data(records, concept: str, palette,
                       check: assoc.AttentionCheckSpec | None) -> ConceptData:
    more_phrase, less_phrase = assoc.endpoint_phrases(concept)
    tables = {}
    fits = {}
    for name, key in (("direct", concept), ("more", more_phrase), ("less", less_phrase)):
        table = assoc.mean_associations(records, key, check)
        lchs = [palette.entry(c).lch for c in table.colors]
        tables[name] = table
        fits[name] = sc.fit_colorspace_regression(lchs, list(table.means))
    return ConceptData(
        concept=concept,
        direct=tables["direct"],
        more=tables["more"],
        less=tables["less"],
        direct_fit=fits["direct"],
        more_fit=fits["more"],
        less_fit=fits["less"],
    )


def scale_id_for(light_index: int, dark_index: int) -> str:
    return f"p{light_index:02d}_{dark_index:02d}"


def pick_scales(candidates, k: int):
    """Deterministic spread: passing candidates sorted by association
    difference, sampled at evenly spaced ranks."""
    passing = [c for c in candidates if c.passes_monotonicity]
    passing.sort(key=lambda c: (c.association_difference, c.light_index, c.dark_index))
    if len(passing) <= k:
        return passing
    idx = np.linspace(0, len(passing) - 1, k)
    return [passing[int(round(i))] for i in idx]


def merit_sources_for_pair(data: ConceptData, palette, light: int, dark: int):
    """(association graph, darkness graph, salience) for one endpoint pair."""
    a_graph = assoc.endpoint_ratings_from_tables(
        data.concept, data.more, data.less, light, dark
    ).to_merit_graph()
    delta = abs(palette.entry(light).lab.L - palette.entry(dark).lab.L)
    salience = inf.darkness_salience(lightness_delta=delta)
    return a_graph, inf.darkness_merit(salience.value), salience


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run_pipeline(config: Config) -> dict:
    """Run every stage and return the manifest (also written to disk)."""
    out = Path(config.output_dir)
    manifest: dict = {"config": config.to_json(), "stages": {}}

    def record(stage: str, *paths: Path):
        manifest["stages"].setdefault(stage, [])
        for p in paths:
            manifest["stages"][stage].append(str(p.relative_to(out)))

    def stage(name):
        class _Ctx:
            def __enter__(self):
                return None

            def __exit__(self, exc_type, exc, tb):
                if exc is not None and not isinstance(exc, PipelineStageError):
                    raise PipelineStageError(name, exc) from exc
                return False

        return _Ctx()

    config.validate_paths()

    with stage("palette"):
        palette = load_uw71(config.uw71_path, wp=config.white_point)
        path = out / "palette" / "colors.json"
        _write_json(path, [e.to_json() for e in palette.entries])
        record("palette", path)

    with stage("ingest"):
        records = assoc.read_ratings_csv(config.ratings_csv)
        responses = ev.read_responses_csv(config.responses_csv)
        concepts = config.concepts or discover_concepts(records)
        if not concepts:
            raise DataError("no concepts with endpoint phrasings in ratings data")

    concept_data: dict[str, ConceptData] = {}
    with stage("associations"):
        for c in concepts:
            data = build_concept_data(records, c, palette, config.attention_check)
            concept_data[c] = data
            path = out / "associations" / f"{c}.json"
            _write_json(
                path,
                {
                    "direct": data.direct.to_json(),
                    "more": data.more.to_json(),
                    "less": data.less.to_json(),
                },
            )
            record("associations", path)

    with stage("regression"):
        for c in concepts:
            data = concept_data[c]
            path = out / "regression" / f"{c}.json"
            _write_json(
                path,
                {
                    "direct": data.direct_fit.to_json(),
                    "more": data.more_fit.to_json(),
                    "less": data.less_fit.to_json(),
                },
            )
            record("regression", path)

    selections: dict[str, sc.PairSelection] = {}
    chosen: dict[str, list] = {}
    with stage("candidates"):
        for c in concepts:
            data = concept_data[c]
            selection = sc.select_endpoint_pairs(
                palette, data.direct, data.direct_fit, config.constraints,
                wp=config.white_point,
            )
            selections[c] = selection
            chosen[c] = pick_scales(selection.candidates, config.scales_per_concept)
            path = out / "candidates" / f"{c}.json"
            _write_json(
                path,
                {
                    **selection.to_json(),
                    "selected": [sc_.to_json() for sc_ in chosen[c]],
                },
            )
            record("candidates", path)

    scale_objects: dict[ev.ScaleKey, object] = {}
    pair_for: dict[ev.ScaleKey, tuple[int, int]] = {}
    with stage("scales"):
        for c in concepts:
            payload = {}
            for cand in chosen[c]:
                scale = interpolate_scale(
                    palette.entry(cand.light_index).lab,
                    palette.entry(cand.dark_index).lab,
                )
                sid = scale_id_for(cand.light_index, cand.dark_index)
                scale_objects[(c, sid)] = scale
                pair_for[(c, sid)] = (cand.light_index, cand.dark_index)
                payload[sid] = {
                    "light_index": cand.light_index,
                    "dark_index": cand.dark_index,
                    **scale.to_json(),
                }
            path = out / "scales" / f"{c}.json"
            _write_json(path, payload)
            record("scales", path)

    with stage("stimuli"):
        for c in concepts:
            for i, cand in enumerate(chosen[c]):
                sid = scale_id_for(cand.light_index, cand.dark_index)
                scale = scale_objects[(c, sid)]
                stim_seed = config.seed + 1000 * (1 + concepts.index(c)) + 10 * i
                stim_set = st.build_stimulus_set(
                    scale, stim_seed, config.stimuli_per_scale,
                    params=config.arctan, noise_sd=config.noise_sd,
                )
                base = out / "stimuli" / c / sid
                _write_json(
                    base / "datasets.json",
                    [d.to_json() for d in stim_set.datasets],
                )
                record("stimuli", base / "datasets.json")
                for j, dataset in enumerate(stim_set.datasets):
                    svg = st.render_colormap_svg(dataset, scale)
                    path = base / f"stim_{j:02d}.svg"
                    _write_text(path, svg.svg)
                    record("stimuli", path)

    merits: dict[ev.ScaleKey, tuple] = {}
    with stage("predictions"):
        for c in concepts:
            data = concept_data[c]
            payload = {}
            for cand in chosen[c]:
                sid = scale_id_for(cand.light_index, cand.dark_index)
                a_graph, d_graph, salience = merit_sources_for_pair(
                    data, palette, cand.light_index, cand.dark_index
                )
                merits[(c, sid)] = (a_graph, d_graph)
                result = inf.predict(a_graph, d_graph, inf.DEFAULT_WEIGHTS)
                payload[sid] = {
                    "association_merit": a_graph.to_json(),
                    "darkness_merit": d_graph.to_json(),
                    "salience": salience.to_json(),
                    "weights": inf.DEFAULT_WEIGHTS.to_json(),
                    "prediction": result.to_json(),
                }
            path = out / "predictions" / f"{c}.json"
            _write_json(path, payload)
            record("predictions", path)

    with stage("weights"):
        response_keys = {(r.concept, r.scale_id) for r in responses}
        scored = {k: v for k, v in merits.items() if k in response_keys}
        usable = [r for r in responses if (r.concept, r.scale_id) in scored]
        if not scored:
            raise DataError(
                "response data does not cover any selected scale; "
                "regenerate it against this config"
            )
        partitions = ev.train_test_split(usable, config.seed)
        train_out = ev.split_outcomes(usable, partitions, "train")
        test_out = ev.split_outcomes(usable, partitions, "test")
        search = ev.grid_search_weights(scored, train_out, config.grid_increment)
        candidates_w = [search.best, inf.WeightPair(1.0, 0.0), inf.WeightPair(0.0, 1.0)]
        evaluation = ev.evaluate_weightings(scored, test_out, candidates_w)

        _write_json(out / "weights" / "split.json",
                    {f"{c}/{s}": p.to_json() for (c, s), p in partitions.items()})
        _write_json(out / "weights" / "search.json", search.to_json())
        _write_json(out / "weights" / "evaluation.json",
                    [e.to_json() for e in evaluation])
        surface_lines = ["wa,wd,mse_mean," + ",".join(
            sorted({c for row in search.rows for c, _ in row.mse_by_concept})
        )]
        for row in search.rows:
            by = dict(row.mse_by_concept)
            surface_lines.append(
                f"{row.weights.wa},{row.weights.wd},{row.mse_mean},"
                + ",".join(str(by[c]) for c in sorted(by))
            )
        _write_text(out / "weights" / "surface.csv", "\n".join(surface_lines) + "\n")
        record("weights", out / "weights" / "split.json",
               out / "weights" / "search.json",
               out / "weights" / "evaluation.json",
               out / "weights" / "surface.csv")

    with stage("correlations"):
        payload = {}
        for c in concepts:
            keys = sorted(k for k in scored if k[0] == c and k in test_out)
            if len(keys) < 3:
                continue
            scaled = [test_out[k].scaled_response for k in keys]
            best_preds = [
                inf.predict(*scored[k], search.best).signed_s for k in keys
            ]
            direct_preds = [
                inf.predict(*scored[k], inf.WeightPair(1.0, 0.0)).signed_s
                for k in keys
            ]
            assoc_diffs = [
                assoc.association_difference(concept_data[c].direct, *pair_for[k])
                for k in keys
            ]
            entry = {
                "n_scales": len(keys),
                "best_weights": ev.pearson_r(best_preds, scaled).to_json(),
                "direct_only": ev.pearson_r(direct_preds, scaled).to_json(),
                "association_difference": ev.pearson_r(assoc_diffs, scaled).to_json(),
            }
            r1 = entry["direct_only"]["r"]
            r2 = entry["association_difference"]["r"]
            entry["direct_vs_association"] = ev.compare_correlations(
                r1, len(keys), r2, len(keys)
            ).to_json()
            payload[c] = entry
        path = out / "correlations.json"
        _write_json(path, payload)
        record("correlations", path)

    for stage_name in manifest["stages"]:
        manifest["stages"][stage_name].sort()
    _write_json(out / "manifest.json", manifest)
    return manifest
