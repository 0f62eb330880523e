"""Underlying-data generation and deterministic SVG colormap stimuli.

Each stimulus is an 8x8 grid whose column means follow an arctangent curve
(noisy sigmoid left-to-right, optionally mirrored), rendered on a white
square with each cell colored by its data value through a 10-step scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .color import ColorScale, lab_to_srgb
from .errors import InvalidInputError

GRID = 8
#: Pixel geometry: cell edge and white border around the grid.
CELL_PX = 32
MARGIN_PX = 52

ORIENTATIONS = ("more_is_dark_end", "more_is_light_end")


@dataclass(frozen=True)
class ArctanParams:
    """Shape of the base curve v(i) = 0.5 + atan(steepness*(i - center))/pi."""

    center: float = 4.5
    steepness: float = 1.0

    def base_values(self, reverse: bool = False) -> tuple[float, ...]:
        vals = tuple(
            0.5 + math.atan(self.steepness * (i - self.center)) / math.pi
            for i in range(1, GRID + 1)
        )
        return vals[::-1] if reverse else vals


DEFAULT_ARCTAN = ArctanParams()


@dataclass(frozen=True)
class UnderlyingDataset:
    """One 8x8 stimulus dataset; values[row][col] in [0, 1]."""

    values: tuple[tuple[float, ...], ...]
    reversed: bool
    seed: int

    def __post_init__(self):
        if len(self.values) != GRID or any(len(r) != GRID for r in self.values):
            raise InvalidInputError("underlying data must be 8x8")
        if any(not (0.0 <= v <= 1.0) for row in self.values for v in row):
            raise InvalidInputError("underlying data values must lie in [0, 1]")

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "reversed": self.reversed,
            "values": [list(row) for row in self.values],
        }


def generate_underlying_data(
    seed: int,
    reverse: bool = False,
    params: ArctanParams = DEFAULT_ARCTAN,
    noise_sd: float = 0.25,
) -> UnderlyingDataset:
    """Draw the 8x8 dataset for one stimulus.

    Column j's cells are Normal(base_j, noise_sd) draws, redrawn until all
    land inside [0, 1] (rejection, not clipping).  noise_sd=0 reproduces the
    base curve exactly (test hook).  Fixed seed -> identical dataset.
    """
    if noise_sd < 0:
        raise InvalidInputError("noise_sd must be >= 0")
    base = params.base_values(reverse)
    rng = np.random.default_rng(seed)
    cols = []
    for v in base:
        if noise_sd == 0:
            cols.append(np.full(GRID, v))
            continue
        vals = rng.normal(v, noise_sd, GRID)
        bad = (vals < 0) | (vals > 1)
        while bad.any():
            vals[bad] = rng.normal(v, noise_sd, int(bad.sum()))
            bad = (vals < 0) | (vals > 1)
        cols.append(vals)
    matrix = np.column_stack(cols)
    return UnderlyingDataset(
        tuple(tuple(float(v) for v in row) for row in matrix),
        reversed=reverse,
        seed=seed,
    )


def value_to_step(v: float) -> int:
    """Data value in [0, 1] -> scale step 0..9 (round half to even)."""
    if not (isinstance(v, (int, float)) and math.isfinite(v) and 0.0 <= v <= 1.0):
        raise InvalidInputError(f"data value must lie in [0, 1], got {v!r}")
    return int(round(v * 9))


@dataclass(frozen=True)
class SvgStimulus:
    """Rendered stimulus: the SVG text plus the per-cell hex colors."""

    svg: str
    cell_hexes: tuple[tuple[str, ...], ...]
    width: int
    height: int


def render_colormap_svg(
    data: UnderlyingDataset,
    scale: ColorScale,
    orientation: str = "more_is_dark_end",
    labels: bool = False,
) -> SvgStimulus:
    """Render the dataset as an 8x8 colormap grid on a white square.

    ``orientation`` fixes which scale end encodes the value 1: scale steps
    run light (0) to dark (9), so more_is_dark_end colors value 1 with the
    dark endpoint.  Output is byte-stable for fixed inputs.
    """
    if orientation not in ORIENTATIONS:
        raise InvalidInputError(
            f"orientation must be one of {ORIENTATIONS}, got {orientation!r}"
        )
    side = GRID * CELL_PX + 2 * MARGIN_PX
    hexes = [lab_to_srgb(step).hex for step in scale.steps]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" '
        f'viewBox="0 0 {side} {side}">',
        f'<rect x="0" y="0" width="{side}" height="{side}" fill="#ffffff"/>',
    ]
    cell_rows = []
    for r, row in enumerate(data.values):
        row_hexes = []
        for c, v in enumerate(row):
            idx = value_to_step(v)
            if orientation == "more_is_light_end":
                idx = 9 - idx
            hx = hexes[idx]
            row_hexes.append(hx)
            x = MARGIN_PX + c * CELL_PX
            y = MARGIN_PX + r * CELL_PX
            parts.append(
                f'<rect x="{x}" y="{y}" width="{CELL_PX}" height="{CELL_PX}" fill="{hx}"/>'
            )
        cell_rows.append(tuple(row_hexes))
    if labels:
        ly = MARGIN_PX + GRID * CELL_PX + 28
        lx_left = MARGIN_PX + 2 * CELL_PX
        lx_right = MARGIN_PX + 6 * CELL_PX
        style = 'font-family="sans-serif" font-size="16" text-anchor="middle" fill="#000000"'
        parts.append(f'<text x="{lx_left}" y="{ly}" {style}>Left</text>')
        parts.append(f'<text x="{lx_right}" y="{ly}" {style}>Right</text>')
    parts.append("</svg>")
    return SvgStimulus("\n".join(parts) + "\n", tuple(cell_rows), side, side)


@dataclass(frozen=True)
class StimulusSet:
    """The datasets shown for one scale: half darker-left, half darker-right."""

    datasets: tuple[UnderlyingDataset, ...]
    scale: ColorScale

    def __post_init__(self):
        n_rev = sum(1 for d in self.datasets if d.reversed)
        if 2 * n_rev != len(self.datasets):
            raise InvalidInputError("stimulus set must be half reversed")


def build_stimulus_set(
    scale: ColorScale,
    seed: int,
    n_datasets: int = 10,
    params: ArctanParams = DEFAULT_ARCTAN,
    noise_sd: float = 0.25,
) -> StimulusSet:
    """Generate ``n_datasets`` datasets (seeds seed..seed+n-1); the second
    half carry the mirrored base curve."""
    if n_datasets % 2:
        raise InvalidInputError("n_datasets must be even for left/right balance")
    datasets = tuple(
        generate_underlying_data(
            seed + i, reverse=(i >= n_datasets // 2), params=params, noise_sd=noise_sd
        )
        for i in range(n_datasets)
    )
    return StimulusSet(datasets, scale)
