"""Record API fixtures for the designer UI's fidelity tests.

Each fixture file stores the exact request the UI issues and the exact JSON
the live server returned for it. Rerun after any server-side change:

    python3 frontend/scripts/record_fixtures.py
"""
import json
from pathlib import Path

from fastapi.testclient import TestClient

from chroma_infer.server import create_app

OUT_DIR = Path(__file__).resolve().parent.parent / "fixtures"

FIXTURES = [
    ("colors", "GET", "/colors", None),
    ("concepts", "GET", "/concepts", None),
    (
        "predict_rainfall_default_weights",
        "POST",
        "/predict",
        {
            "concept": "rainfall",
            "light": {"index": 17},
            "dark": {"index": 2},
            "weights": {"wa": 0.7, "wd": 0.3},
        },
    ),
    (
        "predict_rainfall_association_only",
        "POST",
        "/predict",
        {
            "concept": "rainfall",
            "light": {"index": 17},
            "dark": {"index": 2},
            "weights": {"wa": 1.0, "wd": 0.0},
        },
    ),
    (
        "predict_rainfall_darkness_only",
        "POST",
        "/predict",
        {
            "concept": "rainfall",
            "light": {"index": 17},
            "dark": {"index": 2},
            "weights": {"wa": 0.0, "wd": 1.0},
        },
    ),
    (
        "predict_haze_salience_override",
        "POST",
        "/predict",
        {
            "concept": "haze",
            "light": {"index": 11},
            "dark": {"index": 15},
            "weights": {"wa": 0.5, "wd": 0.5},
            "salience": 0.25,
        },
    ),
    (
        "scale_rainfall_monotone",
        "POST",
        "/scale",
        {"light": {"index": 17}, "dark": {"index": 2}, "concept": "rainfall"},
    ),
    (
        "scale_haze_non_monotone",
        "POST",
        "/scale",
        {"light": {"index": 11}, "dark": {"index": 15}, "concept": "haze"},
    ),
    (
        "stimulus_rainfall_seed0",
        "POST",
        "/stimulus",
        {"light": {"index": 17}, "dark": {"index": 2}, "seed": 0},
    ),
    (
        "stimulus_haze_seed0",
        "POST",
        "/stimulus",
        {"light": {"index": 11}, "dark": {"index": 15}, "seed": 0},
    ),
]


def main() -> None:
    client = TestClient(create_app())
    OUT_DIR.mkdir(exist_ok=True)
    for name, method, path, body in FIXTURES:
        if method == "GET":
            resp = client.get(f"/api/v1{path}")
        else:
            resp = client.post(f"/api/v1{path}", json=body)
        resp.raise_for_status()
        envelope = {
            "name": name,
            "request": {"method": method, "path": path, "body": body},
            "response": resp.json(),
        }
        out = OUT_DIR / f"{name}.json"
        out.write_text(json.dumps(envelope, indent=2, sort_keys=True) + "\n")
        print(f"wrote {out.relative_to(OUT_DIR.parent)}")


if __name__ == "__main__":
    main()
