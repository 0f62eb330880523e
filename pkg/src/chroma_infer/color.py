"""CIE color-space conversions, the UW-71 reference palette, and CIELAB scales.

Conversions cover CIE 1931 xyY <-> CIELAB, CIELAB <-> CIELCh, and CIELAB ->
8-bit sRGB.  The UW-71 palette ships as a bundled CSV in two variants: the
cleaned reference table (``uw71.csv``) and the coordinates exactly as
published (``uw71_published.csv``), whose entry 7 carries a luminance
misprint that the cleaned file corrects.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import CsvFormatError, InvalidInputError, OrderingError, UnknownColorError

# CIELAB's linear/cube-root branch point
_DELTA = 6.0 / 29.0

# sRGB primary chromaticities; the RGB<->XYZ matrix is derived from these plus
# the configured white point so that the white point maps exactly to RGB(1,1,1)
_SRGB_PRIMARIES = ((0.64, 0.33), (0.30, 0.60), (0.15, 0.06))


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise InvalidInputError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class WhitePoint:
    """Reference white chromaticity with Y fixed at 100."""

    x: float = 0.31273
    y: float = 0.32902
    Y: float = 100.0

    def __post_init__(self):
        _require_finite("white point", self.x, self.y, self.Y)
        if not (0 < self.x < 1 and 0 < self.y < 1 and self.x + self.y < 1):
            raise InvalidInputError(f"white point chromaticity out of range: {self}")
        if self.Y <= 0:
            raise InvalidInputError("white point Y must be positive")

    @property
    def xyz(self) -> tuple[float, float, float]:
        X = self.x / self.y * self.Y
        Z = (1 - self.x - self.y) / self.y * self.Y
        return X, self.Y, Z


#: Default white point. The published UW-71 gray rows encode D65 at this
#: precision; the coarser (0.313, 0.329) rounding shifts neutral a* by ~0.09.
D65 = WhitePoint()


@dataclass(frozen=True)
class XyYColor:
    x: float
    y: float
    Y: float

    def __post_init__(self):
        _require_finite("xyY", self.x, self.y, self.Y)
        if not (0 < self.x < 1 and 0 < self.y < 1 and self.x + self.y < 1):
            raise InvalidInputError(f"chromaticity out of range: ({self.x}, {self.y})")
        if not (0 <= self.Y <= 100):
            raise InvalidInputError(f"luminance Y out of range: {self.Y}")


@dataclass(frozen=True)
class LabColor:
    L: float
    a: float
    b: float

    def __post_init__(self):
        _require_finite("Lab", self.L, self.a, self.b)
        if not (0 <= self.L <= 100):
            raise InvalidInputError(f"L* out of range: {self.L}")


@dataclass(frozen=True)
class LchColor:
    L: float
    C: float
    h: float

    def __post_init__(self):
        _require_finite("LCh", self.L, self.C, self.h)
        if not (0 <= self.L <= 100):
            raise InvalidInputError(f"L* out of range: {self.L}")
        if self.C < 0:
            raise InvalidInputError(f"chroma must be >= 0: {self.C}")
        if not (0 <= self.h < 360):
            raise InvalidInputError(f"hue must lie in [0, 360): {self.h}")


@dataclass(frozen=True)
class SrgbColor:
    """8-bit sRGB triple; ``clipped`` marks out-of-gamut channel clipping."""

    r: int
    g: int
    b: int
    clipped: bool = False

    @property
    def hex(self) -> str:
        return f"#{self.r:02x}{self.g:02x}{self.b:02x}"


def _f(t: float) -> float:
    if t > _DELTA ** 3:
        return t ** (1.0 / 3.0)
    return t / (3 * _DELTA * _DELTA) + 4.0 / 29.0


def _f_inv(t: float) -> float:
    if t > _DELTA:
        return t ** 3
    return 3 * _DELTA * _DELTA * (t - 4.0 / 29.0)


def xyy_to_lab(c: XyYColor, wp: WhitePoint = D65) -> LabColor:
    """CIE 1931 xyY -> CIELAB under the given white point.

    Y = 0 maps to black regardless of chromaticity.
    """
    Xn, Yn, Zn = wp.xyz
    if c.Y == 0:
        return LabColor(0.0, 0.0, 0.0)
    X = c.x / c.y * c.Y
    Z = (1 - c.x - c.y) / c.y * c.Y
    fx, fy, fz = _f(X / Xn), _f(c.Y / Yn), _f(Z / Zn)
    L = 116 * fy - 16
    # guard tiny negatives from rounding at Y ~ Yn boundaries
    L = min(100.0, max(0.0, L))
    return LabColor(L, 500 * (fx - fy), 200 * (fy - fz))


def lab_to_xyy(c: LabColor, wp: WhitePoint = D65) -> XyYColor:
    """Inverse of xyy_to_lab.

    At L* = 0 chromaticity is undefined; by convention the white point's
    chromaticity is returned with Y = 0.
    """
    if c.L == 0 and c.a == 0 and c.b == 0:
        return XyYColor(wp.x, wp.y, 0.0)
    Xn, Yn, Zn = wp.xyz
    fy = (c.L + 16) / 116
    fx = fy + c.a / 500
    fz = fy - c.b / 200
    X, Y, Z = _f_inv(fx) * Xn, _f_inv(fy) * Yn, _f_inv(fz) * Zn
    total = X + Y + Z
    if total <= 0:
        return XyYColor(wp.x, wp.y, 0.0)
    return XyYColor(X / total, Y / total, Y)


def lab_to_lch(c: LabColor) -> LchColor:
    """CIELAB -> CIELCh; achromatic colors (C* < 1e-9) take hue 0."""
    C = math.hypot(c.a, c.b)
    if C < 1e-9:
        return LchColor(c.L, C, 0.0)
    h = math.degrees(math.atan2(c.b, c.a)) % 360.0
    if h == 360.0:  # fold the closed endpoint produced by -0.0 angles
        h = 0.0
    return LchColor(c.L, C, h)


def lch_to_lab(c: LchColor) -> LabColor:
    rad = math.radians(c.h)
    return LabColor(c.L, c.C * math.cos(rad), c.C * math.sin(rad))


@lru_cache(maxsize=8)
def _srgb_matrices(wp: WhitePoint) -> tuple[np.ndarray, np.ndarray]:
    P = np.zeros((3, 3))
    for j, (px, py) in enumerate(_SRGB_PRIMARIES):
        P[0, j] = px / py
        P[1, j] = 1.0
        P[2, j] = (1 - px - py) / py
    X, Y, Z = wp.xyz
    white = np.array([X, Y, Z]) / Y
    scale = np.linalg.solve(P, white)
    rgb_to_xyz = P * scale
    return rgb_to_xyz, np.linalg.inv(rgb_to_xyz)


def _gamma_encode(lin: float) -> float:
    if lin <= 0.0031308:
        return 12.92 * lin
    return 1.055 * lin ** (1 / 2.4) - 0.055


def _gamma_decode(s: float) -> float:
    if s <= 0.04045:
        return s / 12.92
    return ((s + 0.055) / 1.055) ** 2.4


def lab_to_srgb(c: LabColor, wp: WhitePoint = D65) -> SrgbColor:
    """CIELAB -> gamma-encoded 8-bit sRGB.

    Out-of-gamut linear channels are clipped to [0, 1] and the result is
    flagged ``clipped``.
    """
    Xn, Yn, Zn = wp.xyz
    fy = (c.L + 16) / 116
    fx = fy + c.a / 500
    fz = fy - c.b / 200
    xyz = np.array([_f_inv(fx) * Xn, _f_inv(fy) * Yn, _f_inv(fz) * Zn]) / Yn
    _, xyz_to_rgb = _srgb_matrices(wp)
    lin = xyz_to_rgb @ xyz
    clipped = bool((lin < -1e-9).any() or (lin > 1 + 1e-9).any())
    lin = np.clip(lin, 0.0, 1.0)
    r, g, b = (int(round(255 * _gamma_encode(v))) for v in lin)
    return SrgbColor(r, g, b, clipped)


def srgb_to_lab(r: int, g: int, b: int, wp: WhitePoint = D65) -> LabColor:
    """8-bit sRGB -> CIELAB (inverse pipeline, used mainly for round trips)."""
    rgb_to_xyz, _ = _srgb_matrices(wp)
    lin = np.array([_gamma_decode(v / 255.0) for v in (r, g, b)])
    X, Y, Z = (rgb_to_xyz @ lin) * wp.Y
    Xn, Yn, Zn = wp.xyz
    fx, fy, fz = _f(X / Xn), _f(Y / Yn), _f(Z / Zn)
    L = min(100.0, max(0.0, 116 * fy - 16))
    return LabColor(L, 500 * (fx - fy), 200 * (fy - fz))


def lightness_difference(a: LabColor, b: LabColor) -> float:
    """Absolute L* difference."""
    return abs(a.L - b.L)


@dataclass(frozen=True)
class ColorScale:
    """A 10-step scale linearly interpolated in CIELAB from light to dark."""

    steps: tuple[LabColor, ...]
    light_endpoint: LabColor
    dark_endpoint: LabColor
    lightness_delta: float

    def __post_init__(self):
        if len(self.steps) != 10:
            raise InvalidInputError(f"a color scale has 10 steps, got {len(self.steps)}")

    def to_json(self) -> dict:
        return {
            "steps": [
                {"lab": {"L": s.L, "a": s.a, "b": s.b}, "hex": lab_to_srgb(s).hex}
                for s in self.steps
            ],
            "lightness_delta": self.lightness_delta,
        }


def interpolate_scale(light: LabColor, dark: LabColor) -> ColorScale:
    """Build the 10-step scale between two endpoints (eight interior steps).

    ``light`` must be strictly lighter than ``dark``.
    """
    if light.L <= dark.L:
        raise OrderingError(
            f"light endpoint L*={light.L} must exceed dark endpoint L*={dark.L}"
        )
    steps = []
    for i in range(10):
        t = i / 9.0
        steps.append(
            LabColor(
                light.L + (dark.L - light.L) * t,
                light.a + (dark.a - light.a) * t,
                light.b + (dark.b - light.b) * t,
            )
        )
    return ColorScale(tuple(steps), light, dark, light.L - dark.L)


@dataclass(frozen=True)
class PaletteEntry:
    """One indexed palette color carried in all three spaces."""

    index: int
    xyy: XyYColor
    lab: LabColor
    lch: LchColor

    @classmethod
    def from_lab(cls, index: int, lab: LabColor, wp: WhitePoint = D65) -> "PaletteEntry":
        return cls(index, lab_to_xyy(lab, wp), lab, lab_to_lch(lab))

    def to_json(self) -> dict:
        rgb = lab_to_srgb(self.lab)
        return {
            "index": self.index,
            "xyy": {"x": self.xyy.x, "y": self.xyy.y, "Y": self.xyy.Y},
            "lab": {"L": self.lab.L, "a": self.lab.a, "b": self.lab.b},
            "lch": {"L": self.lch.L, "C": self.lch.C, "h": self.lch.h},
            "srgb": {"r": rgb.r, "g": rgb.g, "b": rgb.b, "hex": rgb.hex,
                     "clipped": rgb.clipped},
        }


@dataclass(frozen=True)
class Palette:
    """An indexed color palette; the bundled reference is UW-71."""

    entries: tuple[PaletteEntry, ...]

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if e.index in seen:
                raise InvalidInputError(f"duplicate palette index {e.index}")
            seen.add(e.index)

    def __len__(self) -> int:
        return len(self.entries)

    def entry(self, index: int) -> PaletteEntry:
        for e in self.entries:
            if e.index == index:
                return e
        raise UnknownColorError(f"no palette entry with index {index}")

    def consistency_errors(self, wp: WhitePoint = D65, tol: float = 0.05) -> list[str]:
        """Cross-space agreement under this module's own converters.

        Returns one message per entry/channel exceeding ``tol`` (hue compared
        circularly and only where chroma is non-negligible).
        """
        problems = []
        for e in self.entries:
            lab = xyy_to_lab(e.xyy, wp)
            lch = lab_to_lch(e.lab)
            checks = [
                ("L", lab.L - e.lab.L),
                ("a", lab.a - e.lab.a),
                ("b", lab.b - e.lab.b),
                ("C", lch.C - e.lch.C),
            ]
            if e.lch.C > tol:
                dh = abs(lch.h - e.lch.h) % 360.0
                checks.append(("h", min(dh, 360.0 - dh)))
            for channel, delta in checks:
                if abs(delta) > tol:
                    problems.append(
                        f"entry {e.index}: {channel} off by {delta:+.3f}"
                    )
        return problems


def _read_palette_rows(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"index", "x", "y", "Y", "L", "a", "b", "C", "h"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise CsvFormatError(
                f"palette CSV needs columns {sorted(required)}, got {reader.fieldnames}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            try:
                rows.append({k: (int(row[k]) if k == "index" else float(row[k]))
                             for k in required})
            except (TypeError, ValueError) as exc:
                raise CsvFormatError(f"bad palette row at line {lineno}: {exc}") from exc
        return rows


def load_uw71(path=None, wp: WhitePoint = D65, validate: bool = True) -> Palette:
    """Load the UW-71 palette (bundled cleaned table by default).

    ``validate`` enforces the cross-space consistency invariant; disable it to
    load the as-published variant, whose entry 7 luminance is misprinted.
    """
    if path is None:
        path = resources.files("chroma_infer.data") / "uw71.csv"
    rows = _read_palette_rows(path)
    if len(rows) != 71:
        raise CsvFormatError(f"UW-71 table must have 71 rows, got {len(rows)}")
    entries = tuple(
        PaletteEntry(
            r["index"],
            XyYColor(r["x"], r["y"], r["Y"]),
            LabColor(r["L"], r["a"], r["b"]),
            LchColor(r["L"], r["C"], r["h"]),
        )
        for r in sorted(rows, key=lambda r: r["index"])
    )
    palette = Palette(entries)
    if validate:
        problems = palette.consistency_errors(wp)
        if problems:
            raise CsvFormatError(
                "palette fails cross-space consistency: " + "; ".join(problems)
            )
    return palette


def published_uw71_path():
    """Path to the bundled as-published UW-71 table (luminance misprint intact)."""
    return resources.files("chroma_infer.data") / "uw71_published.csv"
