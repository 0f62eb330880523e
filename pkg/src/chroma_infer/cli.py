"""Command-line interface.

Subcommands: convert (color spaces), predict (assignment inference),
pipeline (all stages to disk), serve (JSON API), demo-data (regenerate the
bundled dataset).  Exit codes: 0 ok, 2 usage/invalid input, 3 data problem,
4 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import associations as assoc
from . import inference as inf
from .color import (
    D65,
    LabColor,
    LchColor,
    WhitePoint,
    XyYColor,
    lab_to_lch,
    lab_to_srgb,
    lab_to_xyy,
    lch_to_lab,
    load_uw71,
    srgb_to_lab,
    xyy_to_lab,
)
from .errors import ChromaInferError, DataError, InvalidInputError, UnknownConceptError
from .pipeline import Config, default_data_dir, run_pipeline

SPACES = ("xyy", "lab", "lch", "srgb")


def _parse_triple(text: str, name: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise InvalidInputError(f"{name} needs three comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)  # type: ignore[return-value]
    except ValueError as e:
        raise InvalidInputError(f"{name}: {e}") from None


def _parse_white_point(text: str | None) -> WhitePoint:
    if text is None:
        return D65
    x, y, Y = _parse_triple(text, "--white-point")
    return WhitePoint(x, y, Y)


def cmd_convert(args) -> int:
    wp = _parse_white_point(args.white_point)
    given = [(s, getattr(args, s)) for s in SPACES if getattr(args, s) is not None]
    if len(given) != 1:
        raise InvalidInputError("give exactly one of --xyy/--lab/--lch/--srgb")
    space, text = given[0]
    v = _parse_triple(text, f"--{space}")

    if space == "xyy":
        lab = xyy_to_lab(XyYColor(*v), wp)
    elif space == "lab":
        lab = LabColor(*v)
    elif space == "lch":
        lab = lch_to_lab(LchColor(*v))
    else:
        for c in v:
            if not c.is_integer() or not 0 <= c <= 255:
                raise InvalidInputError("--srgb channels must be integers in [0, 255]")
        lab = srgb_to_lab(int(v[0]), int(v[1]), int(v[2]), wp)

    to = args.to
    if to == "lab":
        print(f"{lab.L:.2f} {lab.a:.2f} {lab.b:.2f}")
    elif to == "lch":
        lch = lab_to_lch(lab)
        print(f"{lch.L:.2f} {lch.C:.2f} {lch.h:.2f}")
    elif to == "xyy":
        xyy = lab_to_xyy(lab, wp)
        print(f"{xyy.x:.5f} {xyy.y:.5f} {xyy.Y:.3f}")
    elif to == "srgb":
        srgb = lab_to_srgb(lab, wp)
        print(f"{srgb.r} {srgb.g} {srgb.b}")
    else:  # hex
        print(lab_to_srgb(lab, wp).hex)
    return 0


def _association_graph_for(args):
    if args.merits is not None:
        parts = args.merits.split(",")
        if len(parts) != 4:
            raise InvalidInputError("--merits needs four comma-separated values")
        vals = [float(p) for p in parts]
        return inf.MeritGraph2x2(*vals)
    if args.concept is None or args.light is None or args.dark is None:
        raise InvalidInputError("need either --merits or --concept with --light/--dark")
    data_dir = Path(args.data) if args.data else default_data_dir()
    ratings = data_dir / "ratings.csv"
    if not ratings.is_file():
        raise DataError(f"missing ratings file: {ratings}")
    records = assoc.read_ratings_csv(ratings)
    check = _attention_check_from_config(data_dir)
    more_phrase, less_phrase = assoc.endpoint_phrases(args.concept)
    present = {r.concept for r in records}
    if more_phrase not in present or less_phrase not in present:
        raise UnknownConceptError(
            f"no endpoint ratings for concept {args.concept!r} in {ratings}"
        )
    more = assoc.mean_associations(records, more_phrase, check)
    less = assoc.mean_associations(records, less_phrase, check)
    ratings_obj = assoc.endpoint_ratings_from_tables(
        args.concept, more, less, args.light, args.dark
    )
    return ratings_obj.to_merit_graph()


def _attention_check_from_config(data_dir: Path):
    cfg = data_dir / "config.json"
    if not cfg.is_file():
        return None
    with open(cfg, encoding="utf-8") as fh:
        raw = json.load(fh)
    ac = raw.get("attention_check")
    if not ac:
        return None
    return assoc.AttentionCheckSpec(
        strong_colors=frozenset(ac["strong"]),
        weak_colors=frozenset(ac["weak"]),
        concept=ac.get("concept", "celery"),
    )


def cmd_predict(args) -> int:
    palette = load_uw71()
    a_graph = _association_graph_for(args)

    if args.salience is not None:
        salience = inf.SalienceEstimate(args.salience, "override", True)
    elif args.light is not None and args.dark is not None:
        delta = abs(palette.entry(args.light).lab.L - palette.entry(args.dark).lab.L)
        salience = inf.darkness_salience(lightness_delta=delta)
    else:
        salience = inf.SalienceEstimate(0.0, "none", True)
    d_graph = inf.darkness_merit(salience.value)

    if args.weights is not None:
        parts = args.weights.split(",")
        if len(parts) != 2:
            raise InvalidInputError("--weights needs two comma-separated values")
        try:
            weights = inf.WeightPair(float(parts[0]), float(parts[1]))
        except ValueError as e:
            raise InvalidInputError(f"--weights: {e}") from None
    else:
        weights = inf.DEFAULT_WEIGHTS

    result = inf.predict(a_graph, d_graph, weights)
    payload = {
        **result.to_json(),
        "weights": weights.to_json(),
        "salience": salience.to_json(),
        "association_merit": a_graph.to_json(),
        "darkness_merit": d_graph.to_json(),
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _config_from_args(args, need_output: bool) -> Config:
    overrides = {}
    if args.data:
        overrides["data_dir"] = Path(args.data)
    if need_output:
        if not args.out:
            raise InvalidInputError("--out is required")
        overrides["output_dir"] = Path(args.out)
    else:
        overrides["output_dir"] = Path(".")
    if args.config:
        return Config.from_json_file(args.config, **overrides)
    data_dir = overrides.get("data_dir", default_data_dir())
    cfg_file = Path(data_dir) / "config.json"
    if cfg_file.is_file():
        overrides.setdefault("data_dir", Path(data_dir))
        return Config.from_json_file(cfg_file, **overrides)
    return Config(data_dir=Path(data_dir), **{k: v for k, v in overrides.items()
                                              if k != "data_dir"})


def cmd_pipeline(args) -> int:
    config = _config_from_args(args, need_output=True)
    manifest = run_pipeline(config)
    n = sum(len(v) for v in manifest["stages"].values())
    print(f"wrote {n} artifacts to {config.output_dir}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    config = _config_from_args(args, need_output=False)
    app = create_app(config)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_demo_data(args) -> int:
    from .demo import write_demo_dataset

    write_demo_dataset(args.out)
    print(f"wrote demo dataset to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chroma-infer",
        description="predict which colormap colors people read as 'more'",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert a color between spaces")
    for s in SPACES:
        p.add_argument(f"--{s}", help=f"input {s} triple a,b,c")
    p.add_argument("--to", required=True, choices=SPACES + ("hex",))
    p.add_argument("--white-point", help="x,y,Y (default D65 0.31273,0.32902,100)")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("predict", help="predict the inferred dark/light mapping")
    p.add_argument("--concept")
    p.add_argument("--light", type=int, help="UW-71 index of the light endpoint")
    p.add_argument("--dark", type=int, help="UW-71 index of the dark endpoint")
    p.add_argument("--merits", help="inline association merits x1,x2,x3,x4")
    p.add_argument("--weights", help="wa,wd (must sum to 1; default 0.7,0.3)")
    p.add_argument("--salience", type=float, help="darkness salience override in [0,1]")
    p.add_argument("--data", help="data directory (default bundled demo)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("pipeline", help="run every stage and write artifacts")
    p.add_argument("--config", help="config JSON file")
    p.add_argument("--data", help="data directory (default bundled demo)")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("serve", help="serve the JSON API")
    p.add_argument("--config", help="config JSON file")
    p.add_argument("--data", help="data directory (default bundled demo)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("demo-data", help="regenerate the bundled demo dataset")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_demo_data)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ChromaInferError as e:
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
