"""Deterministic SVG output for curves, overlays, tiles and coverings.

Geometry lives in scene coordinates (a + b/2, b*sqrt(3)/2); serialization
flips the y axis so the imaginary direction points up on screen and scales
the drawing so the larger span maps to PIXEL_SPAN pixels.  Numbers are
written with 9 significant digits, which keeps output byte-identical
across platforms while staying within 1e-9 of the figure width.

A small preset gallery (fig3, fig6, fig8, fig13, fig14, fig16..fig25)
builds ready-made scenes: curve iterates, the triangle construction, the
point sets of the additive recurrence, the base-segment remainder, the
closed loops, the five tiles and the five plane coverings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape as xml_escape

import numpy as np

from .construct import Polyline, Triangle, generate_numeric, generate_segments, generate_triangles
from .analyze import cantor_remainder, detect_loops
from .tiling import Covering, build_tile, cover_periodic, cover_scale_invariant, unit_window

PIXEL_SPAN = 640.0
MARGIN_FRACTION = 0.02

Point = Tuple[float, float]
Path = Tuple[Point, ...]


@dataclass(frozen=True)
class Style:
    """Single-color layer style; multi-color drawings stack layers."""

    stroke: bool = True
    fill: bool = False
    width: float = 1.0
    color: str = "black"


@dataclass(frozen=True)
class Layer:
    paths: Tuple[Path, ...]
    style: Style = Style()
    closed: bool = False
    dots: bool = False

    def __post_init__(self):
        if self.dots and self.style.width <= 0:
            raise ValueError("dot layers need a positive width (the radius)")


@dataclass(frozen=True)
class Scene:
    layers: Tuple[Layer, ...]

    def is_empty(self) -> bool:
        return not any(layer.paths for layer in self.layers)


def _as_path(points: Iterable[Sequence[float]]) -> Path:
    return tuple((float(p[0]), float(p[1])) for p in points)


def layer(paths: Iterable[Iterable[Sequence[float]]], style: Style = Style(),
          closed: bool = False, dots: bool = False) -> Layer:
    return Layer(tuple(_as_path(p) for p in paths), style, closed, dots)


def polyline_layer(polys: Iterable[Polyline], style: Style = Style(),
                   closed: bool = False, offset: Point = (0.0, 0.0)) -> Layer:
    paths = []
    for poly in polys:
        xy = poly.as_xy()
        xy[:, 0] += offset[0]
        xy[:, 1] += offset[1]
        paths.append(xy.tolist())
    return layer(paths, style, closed=closed)


def polyline_scene(poly: Polyline, style: Style = Style(), closed: bool = False) -> Scene:
    """One polyline, one layer; the smallest useful scene."""
    return Scene((polyline_layer([poly], style, closed=closed),))


def scene_bounds(scene: Scene) -> Tuple[float, float, float, float]:
    xs: List[float] = []
    ys: List[float] = []
    for lyr in scene.layers:
        for path in lyr.paths:
            for x, y in path:
                xs.append(x)
                ys.append(y)
    if not xs:
        raise ValueError("scene has no geometry")
    return min(xs), min(ys), max(xs), max(ys)


def _fmt(v: float) -> str:
    s = format(v, ".9g")
    if s == "-0":
        return "0"
    return s


def _path_d(path: Path, transform, closed: bool) -> str:
    parts = []
    for i, (x, y) in enumerate(path):
        px, py = transform(x, y)
        cmd = "M" if i == 0 else "L"
        parts.append(f"{cmd}{_fmt(px)} {_fmt(py)}")
    if closed:
        parts.append("Z")
    return " ".join(parts)


def render_svg(scene: Scene, metadata: Optional[str] = None) -> bytes:
    """Serialize a scene to SVG 1.1.  Identical scenes yield identical bytes.
    metadata, when given, is embedded verbatim in a <metadata> element."""
    if scene.is_empty():
        raise ValueError("scene has no geometry")
    x0, y0, x1, y1 = scene_bounds(scene)
    span = max(x1 - x0, y1 - y0)
    if span <= 0:
        span = 1.0
    pad = MARGIN_FRACTION * span
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    scale = PIXEL_SPAN / max(x1 - x0, y1 - y0)
    width = (x1 - x0) * scale
    height = (y1 - y0) * scale

    def transform(x: float, y: float) -> Point:
        return (x - x0) * scale, (y1 - y) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">\n',
    ]
    if metadata is not None:
        out.append(f"<metadata>{xml_escape(metadata)}</metadata>\n")
    for lyr in scene.layers:
        st = lyr.style
        if lyr.dots:
            out.append(f'<g fill="{st.color}" stroke="none">\n')
            for path in lyr.paths:
                for x, y in path:
                    px, py = transform(x, y)
                    out.append(
                        f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{_fmt(st.width)}"/>\n'
                    )
            out.append("</g>\n")
            continue
        stroke = st.color if st.stroke else "none"
        fill = st.color if st.fill else "none"
        attrs = f'fill="{fill}" stroke="{stroke}" stroke-width="{_fmt(st.width)}"'
        if st.fill:
            attrs += ' fill-rule="evenodd"'
        if st.stroke:
            attrs += ' stroke-linejoin="round" stroke-linecap="round"'
        out.append(f"<g {attrs}>\n")
        for path in lyr.paths:
            out.append(f'<path d="{_path_d(path, transform, lyr.closed)}"/>\n')
        out.append("</g>\n")
    out.append("</svg>\n")
    return "".join(out).encode("ascii")


def scene_json(scene: Scene) -> Dict:
    """Scene as plain data, for external renderers."""
    return {
        "schema": "kochawave.scene/1",
        "layers": [
            {
                "style": {
                    "stroke": lyr.style.stroke,
                    "fill": lyr.style.fill,
                    "width": lyr.style.width,
                    "color": lyr.style.color,
                },
                "closed": lyr.closed,
                "dots": lyr.dots,
                "paths": [[[x, y] for x, y in path] for path in lyr.paths],
            }
            for lyr in scene.layers
        ],
    }


# ---------------------------------------------------------------------------
# preset gallery


_CURVE = Style(width=1.2)
_THIN = Style(width=0.8)
_BLUE = Style(width=3.0, color="#1f77b4")
_GREEN_FILL = Style(width=1.0, color="#2ca02c", fill=True)
_DOT = Style(width=2.2, color="#1f77b4")
_TILE_FILL = Style(stroke=False, fill=True, color="#e8e8e8")
_RESIDUAL = Style(width=0.8, color="#1f77b4")
_REGION_FILL = Style(stroke=False, fill=True, color="#f5f5f5")

# grid spacing for the four-panel presets; rows of unit-chord iterates
_COLS = 2
_DX = 1.15
_DY = 0.55


def _grid(i: int, dy: float = _DY) -> Point:
    row, col = divmod(i, _COLS)
    return col * _DX, -row * dy


def _fig_curve_iterations() -> Scene:
    layers = []
    for i, n in enumerate(range(1, 5)):
        off = _grid(i)
        layers.append(polyline_layer([generate_segments(n)], _CURVE, offset=off))
    return Scene(tuple(layers))


def triangles_layer(tris: Iterable[Triangle], scale: float,
                    style: Style = Style(width=0.8), offset: Point = (0.0, 0.0)) -> Layer:
    paths = []
    for t in tris:
        pts = []
        for v in t.vertices():
            pts.append(((v.a + 0.5 * v.b) / scale + offset[0],
                        (np.sqrt(3.0) / 2.0) * v.b / scale + offset[1]))
        paths.append(pts)
    return layer(paths, style, closed=True)


def _fig_triangle_iterations() -> Scene:
    layers = []
    for i, n in enumerate(range(1, 5)):
        off = _grid(i, dy=1.05)
        layers.append(triangles_layer(generate_triangles(n), float(3 ** n), _THIN, off))
    return Scene(tuple(layers))


def _fig_point_sets() -> Scene:
    layers = []
    for i, n in enumerate(range(0, 4)):
        off = _grid(i)
        xy = generate_numeric(n).as_xy()
        xy[:, 0] += off[0]
        xy[:, 1] += off[1]
        layers.append(layer([xy.tolist()], _DOT, dots=True))
    return Scene(tuple(layers))


def _fig_cantor_remainder() -> Scene:
    layers = []
    for i, n in enumerate(range(1, 5)):
        ox, oy = _grid(i)
        layers.append(polyline_layer([generate_segments(n)], _THIN, offset=(ox, oy)))
        kept = [
            [(float(lo) + ox, oy), (float(hi) + ox, oy)]
            for lo, hi in cantor_remainder(n).as_fractions()
        ]
        layers.append(layer(kept, _BLUE))
    return Scene(tuple(layers))


def _fig_loops() -> Scene:
    poly = generate_segments(4)
    scale = float(poly.scale())
    loop_paths = []
    for lp in detect_loops(poly):
        loop_paths.append(
            [((v.a + 0.5 * v.b) / scale, (np.sqrt(3.0) / 2.0) * v.b / scale) for v in lp.vertices]
        )
    return Scene((
        polyline_layer([poly], _CURVE),
        layer(loop_paths, _GREEN_FILL, closed=True),
    ))


def _tile_scene(kind: str) -> Scene:
    tile = build_tile(kind, 2)
    return Scene((
        polyline_layer([tile.boundary], _TILE_FILL, closed=True),
        polyline_layer([tile.boundary], _CURVE, closed=True),
    ))


def covering_scene(cov: Covering) -> Scene:
    """Tile boundaries over residual chains, with the target region shaded."""
    layers = []
    if cov.region is not None:
        layers.append(polyline_layer([cov.region], _REGION_FILL, closed=True))
    if cov.residuals:
        layers.append(polyline_layer(cov.residuals, _RESIDUAL))
    layers.append(polyline_layer(cov.tile_polylines, _THIN, closed=True))
    return Scene(tuple(layers))


def _periodic_scene(kind: str) -> Scene:
    return covering_scene(cover_periodic(kind, unit_window(3, 3), 2))


def _scale_invariant_scene(kind: str) -> Scene:
    return covering_scene(cover_scale_invariant(kind, None, 2, (-2, 1)))


PRESETS = {
    "fig3": _fig_curve_iterations,
    "fig6": _fig_triangle_iterations,
    "fig8": _fig_point_sets,
    "fig13": _fig_cantor_remainder,
    "fig14": _fig_loops,
    "fig16": lambda: _tile_scene("biface_antisym"),
    "fig17": lambda: _tile_scene("biface_sym"),
    "fig18": lambda: _tile_scene("triangular"),
    "fig19": lambda: _tile_scene("rhomboidal"),
    "fig20": lambda: _tile_scene("dart"),
    "fig21": lambda: _periodic_scene("biface_antisym"),
    "fig22": lambda: _periodic_scene("biface_sym"),
    "fig23": lambda: _periodic_scene("triangular"),
    "fig24": lambda: _scale_invariant_scene("rhomboidal"),
    "fig25": lambda: _scale_invariant_scene("dart"),
}


def preset_scene(name: str) -> Scene:
    try:
        builder = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return builder()
