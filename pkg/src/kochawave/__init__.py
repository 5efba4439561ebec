"""Exact constructions, analysis, tilings and rendering for an asymmetric
Koch-type curve on the triangular lattice."""

from .lattice import EisensteinInt, QOmega, SqrtThreeScalar, omega_pow
from .construct import (
    BACKEND,
    Polyline,
    Triangle,
    generate_numeric,
    generate_segments,
    generate_triangles,
    rewrite_lsystem,
    turtle_run,
    z_stream,
    z_blocks,
)
from .analyze import (
    cantor_remainder,
    centroid_solve,
    curve_area_exact,
    curve_c_bounds,
    curve_c_generate,
    curve_c_symmetry_check,
    detect_loops,
    hausdorff_dimension,
    height,
    length_exact,
    property_report,
    rasterized_area,
    remove_loops,
    revolution_volume,
    simply_connected_check,
    tri_area_exact,
)
from .tiling import (
    TILE_KINDS,
    Covering,
    Placement,
    Window,
    build_tile,
    check_covering,
    cover_periodic,
    cover_scale_invariant,
    scale_placements,
    unit_window,
)
from .render import PRESETS, Scene, Style, preset_scene, polyline_scene, render_svg

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Covering",
    "EisensteinInt",
    "PRESETS",
    "Placement",
    "Polyline",
    "QOmega",
    "Scene",
    "SqrtThreeScalar",
    "Style",
    "TILE_KINDS",
    "Triangle",
    "Window",
    "build_tile",
    "cantor_remainder",
    "centroid_solve",
    "check_covering",
    "cover_periodic",
    "cover_scale_invariant",
    "curve_area_exact",
    "curve_c_bounds",
    "curve_c_generate",
    "curve_c_symmetry_check",
    "detect_loops",
    "generate_numeric",
    "generate_segments",
    "generate_triangles",
    "hausdorff_dimension",
    "height",
    "length_exact",
    "omega_pow",
    "polyline_scene",
    "preset_scene",
    "property_report",
    "rasterized_area",
    "remove_loops",
    "render_svg",
    "revolution_volume",
    "rewrite_lsystem",
    "scale_placements",
    "simply_connected_check",
    "tri_area_exact",
    "turtle_run",
    "unit_window",
    "z_blocks",
    "z_stream",
    "__version__",
]
