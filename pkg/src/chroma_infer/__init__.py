"""chroma-infer: predicts which colormap colors people read as "more".

Combines direct color-concept association merit with dark-is-more relational
merit, solves the resulting bipartite assignment problem, and scores the
winning assignment by signed semantic distance.  Includes the supporting
pipeline: CIE color conversions over the UW-71 palette, rating ingestion,
color-space regression and scale screening, stimulus generation, and weight
fitting against response data.
"""
from .color import (
    ColorScale,
    D65,
    LabColor,
    LchColor,
    Palette,
    SrgbColor,
    WhitePoint,
    XyYColor,
    interpolate_scale,
    lab_to_lch,
    lab_to_srgb,
    lab_to_xyy,
    lch_to_lab,
    lightness_difference,
    load_uw71,
    xyy_to_lab,
)
from .inference import (
    Assignment,
    DEFAULT_WEIGHTS,
    MeritGraph2x2,
    PredictionResult,
    WeightPair,
    combine_merit,
    darkness_merit,
    darkness_salience,
    optimal_assignment_2x2,
    optimal_assignment_n,
    predict,
    prob_delta_positive,
    semantic_distance,
    signed_semantic_distance,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "ColorScale",
    "D65",
    "DEFAULT_WEIGHTS",
    "LabColor",
    "LchColor",
    "MeritGraph2x2",
    "Palette",
    "PredictionResult",
    "SrgbColor",
    "WeightPair",
    "WhitePoint",
    "XyYColor",
    "combine_merit",
    "darkness_merit",
    "darkness_salience",
    "interpolate_scale",
    "lab_to_lch",
    "lab_to_srgb",
    "lab_to_xyy",
    "lch_to_lab",
    "lightness_difference",
    "load_uw71",
    "optimal_assignment_2x2",
    "optimal_assignment_n",
    "predict",
    "prob_delta_positive",
    "semantic_distance",
    "signed_semantic_distance",
    "xyy_to_lab",
]
