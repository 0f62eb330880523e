"""Acceptance suite for the engine's headline guarantees.

Each numbered test prints exactly one PASS/FAIL summary line (routed past
pytest's capture so it always reaches the terminal), then asserts.  Checks
are self-contained: every expected figure is recomputed here from scratch
or pinned as a literal.
"""
import hashlib
import itertools
import json
import os
import time
from pathlib import Path

import numpy as np
import pytest

from chroma_infer import color
from chroma_infer.evaluation import ScaleOutcome, grid_search_weights
from chroma_infer.inference import (
    Assignment,
    MeritGraph2x2,
    WeightPair,
    darkness_merit,
    edge_uncertainty,
    optimal_assignment_2x2,
    optimal_assignment_n,
    predict,
    semantic_distance,
    signed_semantic_distance,
)
from chroma_infer.pipeline import Config, run_pipeline
from chroma_infer.scales import select_endpoint_pairs

REFERENCE_ENV = "CHROMA_INFER_REFERENCE_DATA"


def _report(capsys, num: int, label: str, passed: bool, detail: str = "") -> None:
    # suspend capture so the line reaches the terminal in every run mode
    verdict = "PASS" if passed else "FAIL"
    suffix = f" ({detail})" if detail else ""
    with capsys.disabled():
        print(f"acceptance {num}: {verdict} {label}{suffix}", flush=True)


def _tree_hashes(root: Path) -> dict:
    return {
        str(p.relative_to(root)): hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(root.rglob("*")) if p.is_file()
    }


def _brute_force(matrix: np.ndarray) -> tuple[tuple[int, ...], float]:
    """Exhaustive max-total assignment; near-ties break to the
    lexicographically smallest permutation, mirroring the solver contract."""
    arr = np.asarray(matrix, dtype=float)
    n = arr.shape[0]
    tol = 1e-9 * max(1.0, float(np.max(np.abs(arr))))
    totals = {
        perm: sum(arr[i, j] for i, j in enumerate(perm))
        for perm in itertools.permutations(range(n))
    }
    best = max(totals.values())
    winner = min(p for p, t in totals.items() if t >= best - tol)
    return winner, totals[winner]


def test_01_palette_conversion_accuracy(palette, capsys):
    start = time.perf_counter()
    max_channel = 0.0
    max_hue = 0.0
    for entry in palette.entries:
        lab = color.xyy_to_lab(entry.xyy)
        lch = color.lab_to_lch(lab)
        max_channel = max(
            max_channel,
            abs(lab.L - entry.lab.L),
            abs(lab.a - entry.lab.a),
            abs(lab.b - entry.lab.b),
            abs(lch.C - entry.lch.C),
        )
        wrapped = abs(lch.h - entry.lch.h) % 360.0
        max_hue = max(max_hue, min(wrapped, 360.0 - wrapped))
    elapsed = time.perf_counter() - start
    ok = max_channel <= 0.05 and max_hue <= 0.05 and elapsed < 1.0
    _report(capsys, 1, "palette conversions agree across spaces", ok,
            f"max channel delta {max_channel:.4f}, max hue delta "
            f"{max_hue:.4f} deg, {elapsed:.3f}s")
    assert max_channel <= 0.05
    assert max_hue <= 0.05
    assert elapsed < 1.0


def test_02_semantic_distance_matches_monte_carlo(capsys):
    rng = np.random.default_rng(20260823)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        edges = rng.uniform(0.0, 1.0, 4)
        graph = MeritGraph2x2(*edges)
        unc = edge_uncertainty(graph)
        sigmas = (unc.s1, unc.s2, unc.s3, unc.s4)
        draws = rng.normal(loc=edges, scale=sigmas, size=(1_000_000, 4))
        gap = draws[:, 0] - draws[:, 1] + draws[:, 2] - draws[:, 3]
        mc = abs(2.0 * float(np.mean(gap > 0.0)) - 1.0)
        worst = max(worst, abs(semantic_distance(graph) - mc))
    elapsed = time.perf_counter() - start
    ok = worst <= 0.005 and elapsed < 30.0
    _report(capsys, 2, "analytic distance within 0.005 of simulation", ok,
            f"worst gap {worst:.6f} over 100 graphs, {elapsed:.1f}s")
    assert worst <= 0.005
    assert elapsed < 30.0


def test_03_assignment_solver_matches_exhaustive_search(capsys):
    rng = np.random.default_rng(17)
    start = time.perf_counter()
    mismatches = 0
    for i in range(500):
        n = int(rng.integers(2, 7))
        matrix = rng.uniform(0.0, 1.0, (n, n))
        if i % 3 == 0:
            # coarse values provoke exact ties
            matrix = np.round(matrix * 4.0) / 4.0
        perm, total = optimal_assignment_n(matrix)
        ref_perm, ref_total = _brute_force(matrix)
        if perm != ref_perm or abs(total - ref_total) > 1e-9:
            mismatches += 1
    sign_errors = 0
    for _ in range(500):
        edges = rng.uniform(0.0, 1.0, 4)
        graph = MeritGraph2x2(*edges)
        gap = edges[0] - edges[1] + edges[2] - edges[3]
        expected = Assignment.DARK_MORE if gap >= 0 else Assignment.LIGHT_MORE
        if optimal_assignment_2x2(graph) is not expected:
            sign_errors += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and sign_errors == 0 and elapsed < 10.0
    _report(capsys, 3, "solver equals exhaustive assignment search", ok,
            f"{mismatches} mismatches / 500, {sign_errors} sign-rule errors "
            f"/ 500, {elapsed:.1f}s")
    assert mismatches == 0
    assert sign_errors == 0
    assert elapsed < 10.0


def test_04_published_table_pair_counts(published_palette, capsys):
    counts = select_endpoint_pairs(published_palette).counts
    observed = (counts.total_pairs, counts.equal_lightness, counts.black_white)
    ok = observed == (2485, 637, 96)
    _report(capsys, 4, "published-table pair filter counts are exact", ok,
            f"total {observed[0]}, equal lightness {observed[1]}, "
            f"black/white {observed[2]}")
    assert observed == (2485, 637, 96)


def test_05_weight_recovery_from_simulated_responses(capsys):
    grid = WeightPair.grid()
    start = time.perf_counter()
    hits = 0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        planted = grid[int(rng.integers(2, len(grid) - 2))]
        merits = {}
        outcomes = {}
        for c in range(3):
            concept = f"concept_{c}"
            for s in range(21):
                key = (concept, f"s{s:02d}")
                a = MeritGraph2x2(*rng.uniform(0.0, 1.0, 4))
                d = darkness_merit(float(rng.uniform(0.0, 1.0)))
                p = predict(a, d, planted).p_dark_more
                k = int(rng.binomial(20, p))
                merits[key] = (a, d)
                outcomes[key] = ScaleOutcome(concept, key[1], k / 20.0, 0.0, 20)
        best = grid_search_weights(merits, outcomes).best
        if abs(best.wa - planted.wa) <= 0.05 + 1e-9:
            hits += 1
    elapsed = time.perf_counter() - start
    ok = hits >= 18 and elapsed < 60.0
    _report(capsys, 5, "planted weights recovered within 0.05", ok,
            f"{hits}/20 seeds, {elapsed:.1f}s")
    assert hits >= 18
    assert elapsed < 60.0


def test_06_distance_saturates_before_unit_difference(capsys):
    violations = 0
    crossing = None
    for center in (0.35, 0.5, 0.65):
        max_diff = 2.0 * min(center, 1.0 - center)
        diffs = np.linspace(0.0, max_diff, 201)
        values = []
        for d in diffs:
            graph = MeritGraph2x2(center + d / 2.0, center - d / 2.0,
                                  center + d / 2.0, center - d / 2.0)
            values.append(abs(signed_semantic_distance(graph)))
        violations += sum(
            1 for prev, nxt in zip(values, values[1:]) if nxt < prev - 1e-12
        )
        if center == 0.5:
            idx = next((i for i, v in enumerate(values) if v > 0.99), None)
            crossing = None if idx is None else float(diffs[idx])
    ok = violations == 0 and crossing is not None and crossing < 1.0
    _report(capsys, 6, "distance grows monotonically and saturates early", ok,
            f"{violations} monotonicity violations, 0.99 crossed at "
            f"difference {crossing}")
    assert violations == 0
    assert crossing is not None and crossing < 1.0


def test_07_pipeline_byte_determinism(tmp_path, demo_dir, capsys):
    for name in ("a", "b"):
        config = Config.from_json_file(demo_dir / "config.json",
                                       output_dir=tmp_path / name)
        run_pipeline(config)
    hashes_a = _tree_hashes(tmp_path / "a")
    hashes_b = _tree_hashes(tmp_path / "b")
    ok = bool(hashes_a) and hashes_a == hashes_b
    _report(capsys, 7, "pipeline reruns are byte-identical", ok,
            f"{len(hashes_a)} artifacts compared")
    assert hashes_a
    assert hashes_a == hashes_b


@pytest.mark.skipif(REFERENCE_ENV not in os.environ,
                    reason=f"{REFERENCE_ENV} not set")
def test_08_reference_dataset_replication(tmp_path, capsys):
    data_dir = Path(os.environ[REFERENCE_ENV])
    cfg_path = data_dir / "config.json"
    if cfg_path.exists():
        config = Config.from_json_file(cfg_path, output_dir=tmp_path / "out")
    else:
        config = Config(data_dir=data_dir, output_dir=tmp_path / "out")
    run_pipeline(config)
    out = tmp_path / "out"
    search = json.loads((out / "weights" / "search.json").read_text())
    best = search["best"]
    corr = json.loads((out / "correlations.json").read_text())
    targets = {"fire": 0.83, "water": 0.72, "ice": 0.55}
    deltas = {
        concept: abs(corr[concept]["best_weights"]["r"] - target)
        for concept, target in targets.items()
    }
    sunshine = json.loads((out / "regression" / "sunshine.json").read_text())
    r_delta = abs(sunshine["more"]["multiple_r"] - 0.81)
    ok = (best == {"wa": 0.7, "wd": 0.3}
          and all(d <= 0.08 for d in deltas.values())
          and r_delta <= 0.03)
    _report(capsys, 8, "reference dataset replication", ok,
            f"best {best}, correlation deltas {deltas}, "
            f"sunshine R delta {r_delta:.3f}")
    assert best == {"wa": 0.7, "wd": 0.3}
    for concept, delta in deltas.items():
        assert delta <= 0.08, concept
    assert r_delta <= 0.03
