"""Five tiles bounded by curve copies and five ways they cover the plane."""

import json
from collections import Counter
from fractions import Fraction

import pytest

from kochawave.construct import Polyline
from kochawave.lattice import EisensteinInt, QOmega, SqrtThreeScalar
from kochawave.tiling import (
    PERIODIC_KINDS,
    SCALE_INVARIANT_KINDS,
    TILE_KINDS,
    Covering,
    CoveringError,
    Placement,
    Window,
    build_tile,
    check_covering,
    cover_periodic,
    cover_scale_invariant,
    covering_json,
    directed_edge_multiset,
    find_boundary_conflicts,
    placements_from_json,
    scale_placements,
    undirected_edge_multiset,
    unit_window,
)

TILE_AREAS = {
    "biface_antisym": [Fraction(1, 18), Fraction(8, 81), Fraction(185, 1458)],
    "biface_sym": [Fraction(1, 18), Fraction(8, 81), Fraction(185, 1458)],
    "triangular": [Fraction(1, 3), Fraction(43, 108), Fraction(107, 243)],
    "rhomboidal": [Fraction(13, 18), Fraction(145, 162), Fraction(1469, 1458)],
    "dart": [Fraction(13, 18), Fraction(145, 162), Fraction(1469, 1458)],
}


def test_tiles_close_exactly():
    for kind in TILE_KINDS:
        for n in (1, 2, 3):
            tile = build_tile(kind, n)
            verts = tile.boundary.vertices
            assert verts[0] == verts[-1]
            assert tile.boundary.scale_exp == n


def test_tile_edges_are_simple():
    # bifaces traverse shared chord edges once per side (antiparallel pairs);
    # the other kinds never repeat an undirected edge
    for kind in TILE_KINDS:
        for n in (1, 2):
            verts = build_tile(kind, n).boundary.vertices
            assert max(directed_edge_multiset(verts).values()) == 1
            umax = max(undirected_edge_multiset(verts).values())
            assert umax == (2 if kind.startswith("biface") else 1)


def test_tile_edge_counts():
    assert len(build_tile("biface_antisym", 1).boundary) - 1 == 8
    assert len(build_tile("triangular", 1).boundary) - 1 == 12
    assert len(build_tile("rhomboidal", 1).boundary) - 1 == 16


def test_tile_areas_exact():
    for kind, areas in TILE_AREAS.items():
        for n, area in zip((1, 2, 3), areas):
            assert build_tile(kind, n).area_exact() == SqrtThreeScalar(0, area)


def test_point_symmetry_of_antisym_tile():
    for n in (1, 2):
        verts = build_tile("biface_antisym", n).boundary.vertices
        s = 3 ** n
        vset = {(v.a, v.b) for v in verts}
        assert {(s - a, -b) for a, b in vset} == vset


def test_mirror_symmetry_of_sym_and_dart_tiles():
    for kind in ("biface_sym", "dart"):
        verts = build_tile(kind, 2).boundary.vertices
        vset = {(v.a, v.b) for v in verts}
        assert {(a + b, -b) for a, b in vset} == vset


def test_rotation_symmetry_of_triangular_tile():
    # z -> omega**2 z + 3**n rotates the boundary onto itself, exactly
    for n in (1, 2, 3):
        verts = build_tile("triangular", n).boundary.vertices
        s = 3 ** n
        w2 = EisensteinInt(-1, 1)
        vset = {(v.a, v.b) for v in verts}
        rotated = set()
        for a, b in vset:
            z = EisensteinInt(a, b) * w2 + EisensteinInt(s, 0)
            rotated.add((z.a, z.b))
        assert rotated == vset


def test_point_symmetry_of_rhomboidal_tile():
    verts = build_tile("rhomboidal", 2).boundary.vertices
    s = 3 * 9
    vset = {(v.a, v.b) for v in verts}
    assert {(s - a, -b) for a, b in vset} == vset


def test_build_tile_rejects_bad_input():
    with pytest.raises(ValueError):
        build_tile("hexagonal", 1)
    with pytest.raises(ValueError):
        build_tile("dart", 0)


def test_find_boundary_conflicts_flags_crossings():
    square = [EisensteinInt(0, 0), EisensteinInt(3, 0), EisensteinInt(3, 3),
              EisensteinInt(0, 3), EisensteinInt(0, 0)]
    assert find_boundary_conflicts(square) == []
    bow = [EisensteinInt(0, 0), EisensteinInt(3, 0), EisensteinInt(0, 3),
           EisensteinInt(3, 3), EisensteinInt(0, 0)]
    assert find_boundary_conflicts(bow) != []


def test_periodic_coverings_pass():
    for kind in PERIODIC_KINDS:
        cov = cover_periodic(kind, unit_window(2, 2), 2, validate=False)
        report = check_covering(cov, samples=20_000)
        assert report.passed
        assert report.histogram == {1: report.checked}
        assert {p.rot for p in cov.placements} <= {0, 4, 8}


def test_periodic_residual_share():
    cov = cover_periodic("triangular", unit_window(2, 2), 2, validate=False)
    report = check_covering(cov, samples=20_000)
    assert 0.15 < report.residual_fraction < 0.25
    cov2 = cover_periodic("biface_antisym", unit_window(2, 2), 2, validate=False)
    report2 = check_covering(cov2, samples=20_000)
    assert 0.35 < report2.residual_fraction < 0.45


def test_scale_invariant_coverings_pass():
    for kind in SCALE_INVARIANT_KINDS:
        cov = cover_scale_invariant(kind, None, 2, (-1, 2), validate=False)
        report = check_covering(cov, samples=20_000)
        assert report.passed
        assert report.histogram == {1: report.checked}


def test_scale_invariant_placements_scale_by_three():
    a = cover_scale_invariant("rhomboidal", None, 2, (-1, 1), validate=False)
    b = cover_scale_invariant("rhomboidal", None, 2, (0, 2), validate=False)
    assert Counter(scale_placements(a.placements, 1)) == Counter(b.placements)


def test_empty_window_covering():
    cov = cover_periodic("triangular", unit_window(0, 4), 2, validate=False)
    assert cov.placements == []
    report = check_covering(cov, samples=2_000)
    assert report.passed and report.samples == 0


def test_single_scale_k_range_reports_gaps():
    cov = cover_scale_invariant("dart", None, 2, (0, 0), validate=False)
    assert len(cov.placements) == 1
    report = check_covering(cov, samples=5_000)
    assert report.passed
    assert report.excluded_residual > 0


def test_checker_flags_overlap():
    tile = build_tile("triangular", 1)
    window = Window(QOmega(Fraction(-1, 2)), QOmega(2), QOmega(0, 2))
    shifted = Polyline(1, [v + EisensteinInt(1, 0) for v in tile.boundary.vertices])
    cov = Covering("triangular", 1, window,
                   [Placement(0, 0, QOmega(0)), Placement(0, 0, QOmega(Fraction(1, 3)))],
                   [tile.boundary, shifted])
    report = check_covering(cov, samples=5_000)
    assert not report.passed
    assert 2 in report.histogram
    assert report.worst_offenders
    with pytest.raises(CoveringError):
        from kochawave.tiling import _validate

        _validate(cov, samples=5_000)


def test_k_range_guards():
    with pytest.raises(ValueError):
        cover_scale_invariant("dart", None, 2, (3, 2), validate=False)
    with pytest.raises(ValueError):
        cover_scale_invariant("dart", None, 2, (-1, 9), validate=False)
    with pytest.raises(ValueError):
        cover_scale_invariant("triangular", None, 2, (0, 1), validate=False)
    with pytest.raises(ValueError):
        cover_periodic("dart", unit_window(2, 2), 2, validate=False)


def test_covering_json_roundtrip():
    cov = cover_scale_invariant("dart", None, 2, (-1, 1), validate=False)
    blob = json.loads(json.dumps(covering_json(cov)))
    assert blob["scheme"] == "dart"
    assert blob["k_range"] == [-1, 1]
    back = placements_from_json(blob)
    assert back == list(cov.placements)


def test_check_covering_requires_samples():
    cov = cover_periodic("triangular", unit_window(1, 1), 1, validate=False)
    with pytest.raises(ValueError):
        check_covering(cov, samples=999)
