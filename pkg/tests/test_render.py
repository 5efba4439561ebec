"""SVG serialization: determinism, layer structure, coordinate accuracy."""

import json
import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from kochawave.construct import generate_segments
from kochawave.render import (
    MARGIN_FRACTION,
    PIXEL_SPAN,
    PRESETS,
    Layer,
    Scene,
    Style,
    layer,
    polyline_scene,
    preset_scene,
    render_svg,
    scene_bounds,
    scene_json,
)

SVG_NS = "{http://www.w3.org/2000/svg}"


def _paths(svg: bytes):
    root = ET.fromstring(svg.decode("ascii"))
    return [el.attrib["d"] for el in root.iter(f"{SVG_NS}path")]


def _coords(d: str):
    nums = [float(t) for t in re.split(r"[ML Z]+", d) if t]
    return list(zip(nums[0::2], nums[1::2]))


def test_svg_bytes_are_deterministic():
    for name in ("fig3", "fig16"):
        a = render_svg(preset_scene(name))
        b = render_svg(preset_scene(name))
        assert a == b


def test_header_and_viewbox():
    svg = render_svg(polyline_scene(generate_segments(2)))
    assert svg.startswith(b'<?xml version="1.0" encoding="UTF-8"?>\n<svg ')
    root = ET.fromstring(svg.decode("ascii"))
    w, h = map(float, root.attrib["viewBox"].split()[2:])
    assert max(w, h) == PIXEL_SPAN


def test_single_polyline_path():
    svg = render_svg(polyline_scene(generate_segments(1)))
    paths = _paths(svg)
    assert len(paths) == 1
    assert len(_coords(paths[0])) == 5
    assert "Z" not in paths[0]


def test_coordinates_match_transform():
    # parsed pixel coordinates must agree with the affine map applied to the
    # exact scene geometry to within the 9-significant-digit rounding,
    # i.e. 1e-9 of the pixel span
    poly = generate_segments(3)
    scene = polyline_scene(poly)
    x0, y0, x1, y1 = scene_bounds(scene)
    pad = MARGIN_FRACTION * max(x1 - x0, y1 - y0)
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    scale = PIXEL_SPAN / max(x1 - x0, y1 - y0)
    expected = [((x - x0) * scale, (y1 - y) * scale) for x, y in poly.as_xy()]
    got = _coords(_paths(render_svg(scene))[0])
    assert len(got) == len(expected)
    err = max(abs(a - b) for g, e in zip(got, expected) for a, b in zip(g, e))
    assert err < 1e-9 * PIXEL_SPAN


def test_y_axis_points_up():
    # the apex vertex has the largest scene y, so after the flip it must be
    # the smallest pixel y
    svg = render_svg(polyline_scene(generate_segments(1)))
    pts = _coords(_paths(svg)[0])
    assert pts[2][1] == min(p[1] for p in pts)
    assert pts[0][1] == pts[1][1] == pts[3][1] == pts[4][1]


def test_empty_scene_rejected():
    with pytest.raises(ValueError):
        render_svg(Scene(()))
    with pytest.raises(ValueError):
        render_svg(Scene((Layer(()),)))


def test_closed_layers_emit_z():
    svg = render_svg(preset_scene("fig16"))
    assert all(d.endswith("Z") for d in _paths(svg))


def test_dot_layer_renders_circles():
    scene = Scene((layer([[(0.0, 0.0), (1.0, 0.0), (0.5, 0.5)]], Style(width=2.0), dots=True),))
    root = ET.fromstring(render_svg(scene).decode("ascii"))
    circles = list(root.iter(f"{SVG_NS}circle"))
    assert len(circles) == 3
    assert {c.attrib["r"] for c in circles} == {"2"}


def test_dot_layer_requires_radius():
    with pytest.raises(ValueError):
        Layer((((0.0, 0.0),),), Style(width=0.0), dots=True)


def test_metadata_is_escaped():
    scene = polyline_scene(generate_segments(1))
    svg = render_svg(scene, metadata='{"check": "<&>"}')
    assert b"<metadata>" in svg
    assert b"&lt;&amp;&gt;" in svg
    assert b'"<&>"' not in svg


def test_scene_json_is_plain_data():
    scene = preset_scene("fig13")
    blob = scene_json(scene)
    assert blob["schema"] == "kochawave.scene/1"
    assert len(blob["layers"]) == len(scene.layers)
    again = json.loads(json.dumps(blob))
    assert again == blob


def test_preset_names_fixed():
    assert sorted(PRESETS) == sorted(
        ["fig3", "fig6", "fig8", "fig13", "fig14"]
        + [f"fig{k}" for k in range(16, 26)]
    )
    with pytest.raises(KeyError):
        preset_scene("fig99")


def test_loop_overlay_structure():
    scene = preset_scene("fig14")
    assert len(scene.layers) == 2
    curve, loops = scene.layers
    assert len(curve.paths) == 1 and len(curve.paths[0]) == 4 ** 4 + 1
    assert loops.closed and loops.style.fill
    assert len(loops.paths) == 13


def test_remainder_overlay_structure():
    scene = preset_scene("fig13")
    assert len(scene.layers) == 8
    kept = [len(scene.layers[i].paths) for i in (1, 3, 5, 7)]
    assert kept == [2, 4, 8, 16]
    assert all(scene.layers[i].style.color == "#1f77b4" for i in (1, 3, 5, 7))


def test_point_set_panels():
    scene = preset_scene("fig8")
    assert len(scene.layers) == 4
    assert all(lyr.dots for lyr in scene.layers)
    assert [len(lyr.paths[0]) for lyr in scene.layers] == [2, 5, 17, 65]


def test_all_presets_render():
    for name in PRESETS:
        scene = preset_scene(name)
        for lyr in scene.layers:
            for path in lyr.paths:
                assert np.isfinite(np.asarray(path, dtype=float)).all()
        svg = render_svg(scene)
        assert svg.startswith(b'<?xml version="1.0"')
        assert svg.endswith(b"</svg>\n")
