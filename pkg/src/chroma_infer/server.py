"""HTTP JSON API for the designer UI.

Stateless FastAPI app over immutably loaded data: the UW-71 palette plus any
concepts found in the configured ratings CSV.  Schemas are served under both
/api and the versioned /api/v1 prefix.  Errors come back as
``{"code", "message", "detail"}`` with a matching 4xx/5xx status.
"""
from __future__ import annotations

from dataclasses import dataclass

from fastapi import APIRouter, Body, FastAPI
from fastapi.responses import JSONResponse

from . import associations as assoc
from . import inference as inf
from . import scales as sc
from . import stimuli as st
from .color import LabColor, interpolate_scale, lab_to_lch, load_uw71
from .errors import (
    ChromaInferError,
    DataError,
    InvalidInputError,
    NumericError,
    UnknownColorError,
    UnknownConceptError,
)
from .pipeline import Config, ConceptData, build_concept_data, default_data_dir


def _status_for(exc: ChromaInferError) -> int:
    if isinstance(exc, (UnknownColorError, UnknownConceptError)):
        return 404
    if isinstance(exc, InvalidInputError):
        return 400
    if isinstance(exc, (DataError, NumericError)):
        return 422
    return 500


def _require(payload: dict, key: str):
    if key not in payload or payload[key] is None:
        raise InvalidInputError(f"missing required field {key!r}")
    return payload[key]


def _clamp01(v: float) -> float:
    return min(1.0, max(0.0, v))


@dataclass(frozen=True)
class ResolvedColor:
    """A request color: UW-71 index (table lookup allowed) or custom Lab."""

    lab: LabColor
    index: int | None


class ApiState:
    """Palette plus per-concept association data, loaded once at startup."""

    def __init__(self, config: Config | None = None):
        if config is None:
            config = Config(data_dir=default_data_dir(), output_dir=".")
        self.config = config
        self.palette = load_uw71(config.uw71_path, wp=config.white_point)
        self.concepts: dict[str, ConceptData] = {}
        ratings = config.ratings_csv
        if ratings.is_file():
            records = assoc.read_ratings_csv(ratings)
            from .pipeline import discover_concepts

            names = config.concepts or discover_concepts(records)
            for c in names:
                self.concepts[c] = build_concept_data(
                    records, c, self.palette, config.attention_check
                )

    # -- request parsing ---------------------------------------------------

    def resolve_color(self, spec, name: str) -> ResolvedColor:
        if not isinstance(spec, dict):
            raise InvalidInputError(f"{name} must be an object with 'index' or 'lab'")
        if "index" in spec and spec["index"] is not None:
            entry = self.palette.entry(int(spec["index"]))
            return ResolvedColor(entry.lab, entry.index)
        if "lab" in spec and spec["lab"] is not None:
            lab = spec["lab"]
            try:
                color = LabColor(float(lab["L"]), float(lab["a"]), float(lab["b"]))
            except (KeyError, TypeError, ValueError) as e:
                raise InvalidInputError(f"{name}.lab needs numeric L/a/b: {e}") from None
            return ResolvedColor(color, None)
        raise InvalidInputError(f"{name} must carry either 'index' or 'lab'")

    def concept_data(self, concept: str) -> ConceptData:
        if concept not in self.concepts:
            raise UnknownConceptError(
                f"unknown concept {concept!r}; have {sorted(self.concepts)}"
            )
        return self.concepts[concept]

    # -- merit construction ------------------------------------------------

    def endpoint_value(self, data: ConceptData, color: ResolvedColor,
                       which: str) -> float:
        """Mean endpoint association for a palette color, or the regression
        estimate (clamped to [0, 1]) for a custom Lab color."""
        table = data.more if which == "more" else data.less
        fit = data.more_fit if which == "more" else data.less_fit
        if color.index is not None:
            return table.mean(color.index)
        return _clamp01(sc.predict_association(fit, lab_to_lch(color.lab)))

    def association_graph(self, data: ConceptData, light: ResolvedColor,
                          dark: ResolvedColor) -> inf.MeritGraph2x2:
        ratings = assoc.EndpointRatings(
            concept=data.concept,
            dark_more=self.endpoint_value(data, dark, "more"),
            light_more=self.endpoint_value(data, light, "more"),
            light_less=self.endpoint_value(data, light, "less"),
            dark_less=self.endpoint_value(data, dark, "less"),
        )
        return ratings.to_merit_graph()


def build_router(state: ApiState) -> APIRouter:
    router = APIRouter()

    @router.get("/colors")
    def colors():
        return [e.to_json() for e in state.palette.entries]

    @router.get("/concepts")
    def concepts():
        return {"concepts": sorted(state.concepts)}

    @router.post("/predict")
    def predict(payload: dict = Body(...)):
        weights = inf.DEFAULT_WEIGHTS
        if payload.get("weights") is not None:
            w = payload["weights"]
            try:
                weights = inf.WeightPair(float(w["wa"]), float(w["wd"]))
            except (KeyError, TypeError, ValueError) as e:
                raise InvalidInputError(f"weights needs numeric wa/wd: {e}") from None

        light = dark = None
        if payload.get("merits") is not None:
            m = payload["merits"]
            if not isinstance(m, (list, tuple)) or len(m) != 4:
                raise InvalidInputError("merits must be a list of four numbers")
            a_graph = inf.MeritGraph2x2(*(float(v) for v in m))
        else:
            concept = _require(payload, "concept")
            data = state.concept_data(concept)
            light = state.resolve_color(_require(payload, "light"), "light")
            dark = state.resolve_color(_require(payload, "dark"), "dark")
            a_graph = state.association_graph(data, light, dark)

        if payload.get("salience") is not None:
            salience = inf.SalienceEstimate(float(payload["salience"]), "override", True)
        elif light is not None and dark is not None:
            delta = abs(light.lab.L - dark.lab.L)
            salience = inf.darkness_salience(lightness_delta=delta)
        else:
            salience = inf.SalienceEstimate(0.0, "none", True)
        d_graph = inf.darkness_merit(salience.value)

        result = inf.predict(a_graph, d_graph, weights)
        return {
            **result.to_json(),
            "weights": weights.to_json(),
            "salience": salience.to_json(),
            "association_merit": a_graph.to_json(),
            "darkness_merit": d_graph.to_json(),
            "combined_merit": result.combined.to_json(),
        }

    @router.post("/scale")
    def scale(payload: dict = Body(...)):
        light = state.resolve_color(_require(payload, "light"), "light")
        dark = state.resolve_color(_require(payload, "dark"), "dark")
        result = interpolate_scale(light.lab, dark.lab)
        out = {
            **result.to_json(),
            "monotonicity": None,
        }
        if payload.get("concept") is not None:
            data = state.concept_data(payload["concept"])
            out["monotonicity"] = sc.monotonicity_check(result, data.direct_fit).to_json()
        return out

    @router.post("/stimulus")
    def stimulus(payload: dict = Body(...)):
        light = state.resolve_color(_require(payload, "light"), "light")
        dark = state.resolve_color(_require(payload, "dark"), "dark")
        result = interpolate_scale(light.lab, dark.lab)
        seed = int(payload.get("seed", 0))
        reverse = bool(payload.get("reversed", False))
        orientation = payload.get("orientation", "more_is_dark_end")
        if orientation not in st.ORIENTATIONS:
            raise InvalidInputError(
                f"orientation must be one of {sorted(st.ORIENTATIONS)}"
            )
        dataset = st.generate_underlying_data(
            seed, reverse=reverse,
            params=state.config.arctan, noise_sd=state.config.noise_sd,
        )
        rendered = st.render_colormap_svg(
            dataset, result, orientation=orientation,
            labels=bool(payload.get("labels", False)),
        )
        return {
            "svg": rendered.svg,
            "cell_hexes": [list(r) for r in rendered.cell_hexes],
            "width": rendered.width,
            "height": rendered.height,
            "dataset": dataset.to_json(),
        }

    return router


def create_app(config: Config | None = None) -> FastAPI:
    state = ApiState(config)
    app = FastAPI(title="chroma-infer", version="0.1.0")
    router = build_router(state)
    app.include_router(router, prefix="/api")
    app.include_router(router, prefix="/api/v1")

    @app.exception_handler(ChromaInferError)
    def handle_domain_error(request, exc: ChromaInferError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"code": exc.code, "message": str(exc), "detail": exc.detail},
        )

    return app
