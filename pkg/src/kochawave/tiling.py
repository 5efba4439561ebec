"""Tiles assembled from copies of the loop-free curve and the five plane
coverings built from them, with a sampling-based validity checker.

All tile boundaries are exact lattice polygon chains.  The three periodic
schemes place tiles on the unit triangular lattice and declare the entangled
leftover regions per cell; the two scale-invariant schemes extract the middle
third of a biface chain recursively across a range of scales 3**k and declare
the undecomposed finest band.  Deeper chain pieces are stitched from
loop-removed iterate-n copies so piece boundaries mesh exactly (loop removal
does not commute with subdivision, so a freshly loop-removed deeper iterate
would not)."""

from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .analyze import (
    _fraction_from_json,
    _fraction_json,
    _seg_conflict,
    points_in_polygon,
    remove_loops,
    shoelace_area_exact,
)
from .construct import Polyline, generate_segments
from .lattice import EisensteinInt, QOmega, SqrtThreeScalar, omega_pow

TILE_KINDS = ("biface_antisym", "biface_sym", "triangular", "rhomboidal", "dart")
PERIODIC_KINDS = ("biface_antisym", "biface_sym", "triangular")
SCALE_INVARIANT_KINDS = ("rhomboidal", "dart")

_OPW = EisensteinInt(1, 1)  # 1 + omega


class ConstructionError(Exception):
    pass


class CoveringError(Exception):
    def __init__(self, message: str, report: "CoverReport"):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------------
# curve material


@lru_cache(maxsize=None)
def _loop_free(n: int) -> Tuple[EisensteinInt, ...]:
    """Loop-removed iterate n at scale 3**n, running 0 -> 3**n."""
    return tuple(remove_loops(generate_segments(n)).vertices)


def _conj(v: EisensteinInt) -> EisensteinInt:
    return EisensteinInt(v.a + v.b, -v.b)


def _emul(k: int, v: EisensteinInt) -> EisensteinInt:
    return EisensteinInt(k * v.a, k * v.b)


@lru_cache(maxsize=None)
def _hybrid(n: int, depth: int) -> Tuple[EisensteinInt, ...]:
    """Chain curve of chord 3**(n+depth) subdivided down to loop-removed
    iterate-n leaf copies; unlike remove_loops(generate_segments(n+depth))
    this meshes exactly with its own sub-chords."""
    if depth == 0:
        return _loop_free(n)
    h = _hybrid(n, depth - 1)
    s = EisensteinInt(3 ** (n + depth - 1), 0)
    s2 = _emul(2, s)
    om = omega_pow(1)
    out = list(h)
    out += [s + _OPW * v for v in h[1:]]
    out += [s2 + om * s - om * v for v in h[1:]]
    out += [s2 + v for v in h[1:]]
    return tuple(out)


# ---------------------------------------------------------------------------
# boundary paths (closed chains, first vertex == last)


def _antisym_path(cv: Sequence[EisensteinInt], s: EisensteinInt,
                  rot: EisensteinInt, trans: EisensteinInt) -> List[EisensteinInt]:
    """Curve forward plus its point reflection about the chord midpoint."""
    fwd = [trans + rot * v for v in cv]
    back = [trans + rot * (s - v) for v in cv[1:]]
    return fwd + back


def _sym_path(cv: Sequence[EisensteinInt], s: EisensteinInt,
              rot: EisensteinInt, trans: EisensteinInt) -> List[EisensteinInt]:
    """Curve forward plus its mirror image traversed back."""
    fwd = [trans + rot * v for v in cv]
    back = [trans + rot * _conj(v) for v in reversed(cv[:-1])]
    return fwd + back


def _tri_path(cv: Sequence[EisensteinInt], s: EisensteinInt,
              trans: EisensteinInt) -> List[EisensteinInt]:
    """Up triangle {0, s, s*omega} with three outward point-reflected curve
    lobes, 120-degree related."""
    w2 = omega_pow(2)
    w4 = omega_pow(4)
    om = omega_pow(1)
    e1 = [trans + (s - v) for v in reversed(cv)]
    e2 = [trans + s + w2 * (s - v) for v in reversed(cv[:-1])]
    e3 = [trans + om * s + w4 * (s - v) for v in reversed(cv[:-1])]
    return e1 + e2 + e3


def _rhomboid_path(cv: Sequence[EisensteinInt], s: EisensteinInt,
                   trans: EisensteinInt) -> List[EisensteinInt]:
    """Quad {s, 2s+s*omega, 2s, s-s*omega} + trans with one curve copy per
    side, all direct similarities; point-symmetric about 3s/2 + trans."""
    om = omega_pow(1)
    s2 = _emul(2, s)
    e1 = [trans + s + _OPW * v for v in cv]
    e2 = [trans + s2 + om * s - om * v for v in cv[1:]]
    e3 = [trans + s2 - _OPW * v for v in cv[1:]]
    e4 = [trans + s - om * s + om * v for v in cv[1:]]
    return e1 + e2 + e3 + e4


def _dart_path(cv: Sequence[EisensteinInt], s: EisensteinInt,
               trans: EisensteinInt) -> List[EisensteinInt]:
    """Kite {s, 2s+s*omega, 2s, 3s-s*omega} + trans (reflex at 2s); the lower
    two sides mirror the upper two, so the boundary is conj-invariant."""
    om = omega_pow(1)
    s2 = _emul(2, s)
    e1 = [trans + s + _OPW * v for v in cv]
    e2 = [trans + s2 + om * s - om * v for v in cv[1:]]
    e3 = [trans + _conj(w - trans) for w in reversed([trans + s2 + om * s - om * v for v in cv[:-1]])]
    e4 = [trans + _conj(w - trans) for w in reversed([trans + s + _OPW * v for v in cv[:-1]])]
    return e1 + e2 + e3 + e4


def _entangled_up(cv: Sequence[EisensteinInt], s: EisensteinInt,
                  trans: EisensteinInt) -> List[EisensteinInt]:
    """Three-curve entangled region boundary around the up triangle."""
    w2 = omega_pow(2)
    w4 = omega_pow(4)
    om = omega_pow(1)
    s1 = [trans + v for v in cv]
    s2 = [trans + s + w2 * v for v in cv[1:]]
    s3 = [trans + om * s + w4 * v for v in cv[1:]]
    return s1 + s2 + s3


def _point_reflect(path: Sequence[EisensteinInt], trans: EisensteinInt,
                   s: EisensteinInt) -> List[EisensteinInt]:
    """z -> 2*trans + s - z, the reflection through the midpoint of the cell
    base [trans, trans+s]."""
    return [EisensteinInt(2 * trans.a + s.a - v.a, 2 * trans.b + s.b - v.b) for v in path]


# ---------------------------------------------------------------------------
# tiles


@dataclass
class Tile:
    kind: str
    n: int
    boundary: Polyline  # closed: first vertex == last

    def area_exact(self) -> SqrtThreeScalar:
        return shoelace_area_exact(self.boundary)


def _edge_list(verts: Sequence[EisensteinInt]) -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
    pts = [(v.a, v.b) for v in verts]
    return list(zip(pts, pts[1:]))


def find_boundary_conflicts(
    verts: Sequence[EisensteinInt], allow_antiparallel: bool = False
) -> List[Tuple[int, int]]:
    """Pairs of edge indices of a closed chain that are duplicates or that
    intersect anywhere besides shared vertices.  Exactly repeated antiparallel
    edges (pinch seams, where the boundary traverses a segment once in each
    direction) are permitted when allow_antiparallel."""
    edges = _edge_list(verts)
    m = len(edges)
    cell = 4
    buckets: Dict[Tuple[int, int], List[int]] = {}
    for idx, (p, q) in enumerate(edges):
        for cx in range(min(p[0], q[0]) // cell, max(p[0], q[0]) // cell + 1):
            for cy in range(min(p[1], q[1]) // cell, max(p[1], q[1]) // cell + 1):
                buckets.setdefault((cx, cy), []).append(idx)
    bad = set()
    for group in buckets.values():
        for ii in range(len(group)):
            for jj in range(ii + 1, len(group)):
                e, f = group[ii], group[jj]
                if (e, f) in bad:
                    continue
                pe, qe = edges[e]
                pf, qf = edges[f]
                if pe == pf and qe == qf:
                    bad.add((e, f))  # repeated directed edge, never allowed
                    continue
                if pe == qf and qe == pf:
                    if not allow_antiparallel:
                        bad.add((e, f))
                    continue
                if f - e == 1 or (e == 0 and f == m - 1):
                    continue  # cyclically adjacent, sharing a vertex by design
                if _seg_conflict(pe, qe, pf, qf):
                    bad.add((e, f))
    return sorted(bad)


def _assert_boundary(kind: str, n: int, verts: Sequence[EisensteinInt]) -> None:
    if verts[0] != verts[-1]:
        raise ConstructionError(f"{kind} boundary at n={n} failed to close")
    allow = kind in ("biface_antisym", "biface_sym")
    conflicts = find_boundary_conflicts(verts, allow_antiparallel=allow)
    if conflicts:
        e, f = conflicts[0]
        edges = _edge_list(verts)
        raise ConstructionError(
            f"{kind} boundary at n={n} self-intersects: edge {e} {edges[e]} "
            f"against edge {f} {edges[f]} ({len(conflicts)} conflicting pairs)"
        )


def build_tile(kind: str, n: int) -> Tile:
    """One of the five canonical tiles at iteration n, on the unit chord, the
    unit triangle, or the quad spanned by chord thirds (see the boundary path
    helpers); boundary closure, simplicity and the kind's exact symmetry are
    asserted."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if kind not in TILE_KINDS:
        raise ValueError(f"unknown tile kind {kind!r}")
    cv = _loop_free(n)
    s = EisensteinInt(3 ** n, 0)
    zero = EisensteinInt(0, 0)
    one = omega_pow(0)
    if kind == "biface_antisym":
        verts = _antisym_path(cv, s, one, zero)
    elif kind == "biface_sym":
        verts = _sym_path(cv, s, one, zero)
    elif kind == "triangular":
        verts = _tri_path(cv, s, zero)
    elif kind == "rhomboidal":
        verts = _rhomboid_path(cv, s, zero)
    else:
        verts = _dart_path(cv, s, zero)
    _assert_boundary(kind, n, verts)
    _assert_symmetry(kind, n, verts)
    return Tile(kind=kind, n=n, boundary=Polyline(scale_exp=n, vertices=list(verts)))


def _assert_symmetry(kind: str, n: int, verts: Sequence[EisensteinInt]) -> None:
    """Each kind's exact invariance, checked on the vertex set."""
    vset = {(v.a, v.b) for v in verts}
    p3 = 3 ** n
    if kind == "biface_antisym":
        mapped = {(p3 - a, -b) for a, b in vset}
    elif kind == "biface_sym":
        mapped = {(a + b, -b) for a, b in vset}
    elif kind == "triangular":
        # rotation by 120 degrees about the centroid (1+omega)*3**(n-1)
        # simplifies to z -> omega**2 * z + 3**n on the lattice
        w2 = omega_pow(2)
        mapped = {((r := EisensteinInt(a, b) * w2).a + p3, r.b) for a, b in vset}
    elif kind == "rhomboidal":
        mapped = {(3 * p3 - a, -b) for a, b in vset}  # point symmetry about 3s/2
    else:
        mapped = {(a + b, -b) for a, b in vset}  # dart mirrors across the axis
    if mapped != vset:
        raise ConstructionError(f"{kind} boundary at n={n} lost its symmetry")


def directed_edge_multiset(verts: Sequence[EisensteinInt]) -> Counter:
    return Counter(_edge_list(verts))


def undirected_edge_multiset(verts: Sequence[EisensteinInt]) -> Counter:
    return Counter(tuple(sorted(e)) for e in _edge_list(verts))


# ---------------------------------------------------------------------------
# placements, windows, coverings


@dataclass(frozen=True)
class Placement:
    """Similarity z -> 3**scale_exp * rot30(rot) * (conj(z) if mirrored) + translation
    applied to the scheme's base tile; rot counts 30-degree units, and only
    even values keep the image on the lattice."""

    rot: int
    scale_exp: int
    translation: QOmega
    mirrored: bool = False


@dataclass(frozen=True)
class Window:
    """Parallelogram origin + [0,1]*u + [0,1]*v in normalized coordinates."""

    origin: QOmega
    u: QOmega
    v: QOmega

    def is_empty(self) -> bool:
        return (self.u.x == 0 and self.u.y == 0) or (self.v.x == 0 and self.v.y == 0)

    def corners(self) -> List[QOmega]:
        o, u, v = self.origin, self.u, self.v
        return [o, o + u, o + u + v, o + v]

    def corners_xy(self) -> np.ndarray:
        return np.array([_q_xy(c) for c in self.corners()], dtype=float)


def unit_window(p: int, q: int, origin: QOmega = QOmega(0)) -> Window:
    """p-by-q cells of the unit triangular lattice."""
    return Window(origin=origin, u=QOmega(p), v=QOmega(0, q))


def _q_xy(q: QOmega) -> Tuple[float, float]:
    return (float(q.x) + 0.5 * float(q.y), float(q.y) * math.sqrt(3.0) / 2.0)


@dataclass
class Covering:
    scheme: str
    n: int
    window: Window
    placements: List[Placement]
    tile_polylines: List[Polyline]
    residuals: List[Polyline] = field(default_factory=list)
    region: Optional[Polyline] = None
    k_range: Optional[Tuple[int, int]] = None


def scale_placements(placements: Sequence[Placement], j: int) -> List[Placement]:
    """Every placement scaled by 3**j about the origin."""
    f = Fraction(3) ** j
    return [
        Placement(p.rot, p.scale_exp + j, QOmega(p.translation.x * f, p.translation.y * f), p.mirrored)
        for p in placements
    ]


def covering_json(cov: Covering) -> Dict:
    """Serializable description: scheme, n, window and exact placements."""
    def q_json(q: QOmega) -> Dict:
        return {"x": _fraction_json(q.x), "y": _fraction_json(q.y)}

    return {
        "scheme": cov.scheme,
        "n": cov.n,
        "window": {
            "origin": q_json(cov.window.origin),
            "u": q_json(cov.window.u),
            "v": q_json(cov.window.v),
        },
        "k_range": list(cov.k_range) if cov.k_range else None,
        "placements": [
            {
                "rot": p.rot,
                "scale_exp": p.scale_exp,
                "translation": q_json(p.translation),
                "mirrored": p.mirrored,
            }
            for p in cov.placements
        ],
    }


def placements_from_json(blob: Dict) -> List[Placement]:
    out = []
    for p in blob["placements"]:
        t = QOmega(_fraction_from_json(p["translation"]["x"]), _fraction_from_json(p["translation"]["y"]))
        out.append(Placement(p["rot"], p["scale_exp"], t, p["mirrored"]))
    return out


# ---------------------------------------------------------------------------
# the three periodic coverings


def _window_cell_range(window: Window, margin: int = 2) -> Tuple[range, range]:
    cs = window.corners()
    amin = math.floor(min(c.x for c in cs)) - margin
    amax = math.ceil(max(c.x for c in cs)) + margin
    bmin = math.floor(min(c.y for c in cs)) - margin
    bmax = math.ceil(max(c.y for c in cs)) + margin
    return range(amin, amax), range(bmin, bmax)


def cover_periodic(kind: str, window: Window, n: int, validate: bool = True) -> Covering:
    """Tiles per unit lattice cell: the biface schemes place one lens on each
    of the three cell edges in 120-degree rotation families; the triangular
    scheme places one outward-lobed up-triangle tile per cell by translation
    only.  The leftovers (entangled regions, one per remaining triangle) are
    declared as residual polygons."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if kind not in PERIODIC_KINDS:
        raise ValueError(f"{kind!r} is not a periodic scheme")
    cv = _loop_free(n)
    scale = 3 ** n
    s = EisensteinInt(scale, 0)
    placements: List[Placement] = []
    polys: List[Polyline] = []
    residuals: List[Polyline] = []
    if window.is_empty():
        return Covering(kind, n, window, [], [], [], None, None)
    ra, rb = _window_cell_range(window)
    w0, w2, w4 = omega_pow(0), omega_pow(2), omega_pow(4)
    for b in rb:
        for a in ra:
            t = EisensteinInt(a * scale, b * scale)
            cell = QOmega(a, b)
            if kind == "triangular":
                placements.append(Placement(0, 0, cell))
                polys.append(Polyline(n, _tri_path(cv, s, t)))
                residuals.append(Polyline(n, _point_reflect(_entangled_up(cv, s, t), t, s)))
            else:
                path = _antisym_path if kind == "biface_antisym" else _sym_path
                placements.append(Placement(0, 0, cell))
                polys.append(Polyline(n, path(cv, s, w0, t)))
                placements.append(Placement(4, 0, cell + QOmega(1)))
                polys.append(Polyline(n, path(cv, s, w2, t + s)))
                placements.append(Placement(8, 0, cell + QOmega(0, 1)))
                polys.append(Polyline(n, path(cv, s, w4, t + s * omega_pow(1))))
                up = _entangled_up(cv, s, t)
                residuals.append(Polyline(n, up))
                if kind == "biface_antisym":
                    residuals.append(Polyline(n, _point_reflect(up, t, s)))
                else:
                    origin_up = _entangled_up(cv, s, EisensteinInt(0, 0))
                    residuals.append(Polyline(n, [t + _conj(v) for v in origin_up]))
    cov = Covering(kind, n, window, placements, polys, residuals, None, None)
    if validate:
        _validate(cov)
    return cov


# ---------------------------------------------------------------------------
# the two scale-invariant coverings


def _normalize_k_range(k_range) -> Tuple[int, int]:
    if isinstance(k_range, range):
        if len(k_range) == 0 or k_range.step != 1:
            raise ValueError("k_range must be a nonempty unit-step range")
        return k_range.start, k_range.stop - 1
    k_min, k_max = k_range
    if k_min > k_max:
        raise ValueError("k_range must satisfy k_min <= k_max")
    return int(k_min), int(k_max)


def cover_scale_invariant(kind: str, window: Optional[Window], n: int, k_range,
                          validate: bool = True) -> Covering:
    """Recursive middle-third extraction of a biface chain anchored at 0 with
    chord 3**(k_max+1): each level splits chord thirds into two sub-chains and
    one rhomboid (antisym chain) or dart (sym chain) at scale 3**k; the
    undecomposed finest chains at 3**k_min stay as the declared residual band.
    The placement set is exactly self-similar under scaling by 3.  A window of
    None spans the whole chain region."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if kind not in SCALE_INVARIANT_KINDS:
        raise ValueError(f"{kind!r} is not a scale-invariant scheme")
    k_min, k_max = _normalize_k_range(k_range)
    if k_min > n:
        raise ValueError("k_min beyond the iterate scale is unsupported")
    span = k_max - k_min + 1
    if span > 6:
        raise ValueError("k_range wider than 6 scales is impractical here")
    ws = n - k_min  # workspace scale exponent: vertices are ints / 3**ws
    cv = _loop_free(n)
    s0 = EisensteinInt(3 ** n, 0)
    norm = Fraction(1, 3 ** ws)
    chain = _antisym_path if kind == "rhomboidal" else _sym_path
    piece = _rhomboid_path if kind == "rhomboidal" else _dart_path
    one = omega_pow(0)

    placements: List[Placement] = []
    polys: List[Polyline] = []
    residuals: List[Polyline] = []

    def decomp(k_exp: int, trans: EisensteinInt) -> None:
        if k_exp == 0:
            residuals.append(Polyline(ws, chain(cv, s0, one, trans)))
            return
        sk = EisensteinInt(3 ** (n + k_exp - 1), 0)
        decomp(k_exp - 1, trans)
        placements.append(Placement(
            0, k_min + k_exp - 1, QOmega(trans.a * norm, trans.b * norm)))
        polys.append(Polyline(ws, piece(_hybrid(n, k_exp - 1), sk, trans)))
        decomp(k_exp - 1, trans + _emul(2, sk))

    decomp(span, EisensteinInt(0, 0))
    top = EisensteinInt(3 ** (n + span), 0)
    region = Polyline(ws, chain(_hybrid(n, span), top, one, EisensteinInt(0, 0)))
    if window is None:
        den = 3 ** ws
        a0 = min(v.a for v in region.vertices)
        a1 = max(v.a for v in region.vertices)
        b0 = min(v.b for v in region.vertices)
        b1 = max(v.b for v in region.vertices)
        window = Window(
            QOmega(Fraction(a0, den), Fraction(b0, den)),
            QOmega(Fraction(a1 - a0, den)),
            QOmega(0, Fraction(b1 - b0, den)),
        )
    cov = Covering(kind, n, window, placements, polys, residuals, region, (k_min, k_max))
    if validate:
        _validate(cov)
    return cov


# ---------------------------------------------------------------------------
# validity checker


@dataclass
class CoverReport:
    scheme: str
    n: int
    samples: int
    epsilon: float
    outside_region: int
    excluded_band: int
    excluded_residual: int
    checked: int
    histogram: Dict[int, int]
    multiplicity_one_fraction: float
    residual_fraction: float
    passed: bool
    worst_offenders: List[Tuple[float, float, int]]

    def to_json_dict(self) -> Dict:
        return {
            "scheme": self.scheme,
            "n": self.n,
            "samples": self.samples,
            "epsilon": self.epsilon,
            "outside_region": self.outside_region,
            "excluded_band": self.excluded_band,
            "excluded_residual": self.excluded_residual,
            "checked": self.checked,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "multiplicity_one_fraction": self.multiplicity_one_fraction,
            "residual_fraction": self.residual_fraction,
            "passed": self.passed,
            "worst_offenders": [list(w) for w in self.worst_offenders],
        }


_PLASTIC = 1.324717957244746  # real root of g**3 = g + 1


def _r2_unit_points(count: int) -> np.ndarray:
    """Deterministic low-discrepancy points in the unit square."""
    i = np.arange(1, count + 1, dtype=float)
    a1, a2 = 1.0 / _PLASTIC, 1.0 / _PLASTIC ** 2
    return np.stack([np.mod(0.5 + a1 * i, 1.0), np.mod(0.5 + a2 * i, 1.0)], axis=1)


def _closed_xy(poly: Polyline) -> np.ndarray:
    xy = poly.as_xy()
    if not np.array_equal(xy[0], xy[-1]):
        xy = np.vstack([xy, xy[0]])
    return xy


def _multiplicity(pts: np.ndarray, polys: List[np.ndarray]) -> np.ndarray:
    mult = np.zeros(len(pts), dtype=np.int32)
    for xy in polys:
        lo = xy.min(axis=0)
        hi = xy.max(axis=0)
        sel = np.nonzero(
            (pts[:, 0] >= lo[0]) & (pts[:, 0] <= hi[0])
            & (pts[:, 1] >= lo[1]) & (pts[:, 1] <= hi[1])
        )[0]
        if len(sel) == 0:
            continue
        inside = points_in_polygon(pts[sel], xy)
        mult[sel[inside]] += 1
    return mult


def _inside_any(pts: np.ndarray, polys: List[np.ndarray]) -> np.ndarray:
    return _multiplicity(pts, polys) > 0


def _near_any_boundary(pts: np.ndarray, polys: List[np.ndarray], eps: float) -> np.ndarray:
    """Points within eps of any polygon edge, by KD-tree candidate lookup."""
    from scipy.spatial import cKDTree

    near = np.zeros(len(pts), dtype=bool)
    if len(pts) == 0:
        return near
    tree = cKDTree(pts)
    for xy in polys:
        a = xy[:-1]
        b = xy[1:]
        d = b - a
        lens = np.sqrt(np.einsum("ij,ij->i", d, d))
        mids = 0.5 * (a + b)
        radii = 0.5 * lens + eps
        cand = tree.query_ball_point(mids, radii)
        for i, idxs in enumerate(cand):
            if not idxs:
                continue
            idxs = np.asarray(idxs)
            w = pts[idxs] - a[i]
            ll = lens[i] * lens[i]
            t = np.clip((w @ d[i]) / ll, 0.0, 1.0) if ll > 0 else np.zeros(len(idxs))
            diff = w - t[:, None] * d[i]
            dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
            near[idxs[dist <= eps]] = True
    return near


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("KOCHAWAVE_THREADS", "1")))
    except ValueError:
        return 1


def check_covering(cov: Covering, samples: int = 100_000,
                   epsilon: Optional[float] = None) -> CoverReport:
    """Draws quasi-random points in the window, counts covering multiplicity
    by the even-odd rule, and passes when at least 99% of the points kept
    after exclusions (outside the declared region, inside a declared residual
    polygon, or within epsilon of any tile boundary) have multiplicity exactly
    one."""
    if samples < 10 ** 3:
        raise ValueError("samples must be at least 1000")
    if epsilon is None:
        k_min = cov.k_range[0] if cov.k_range else 0
        epsilon = 3.0 ** (k_min - cov.n) / 10.0
    o = np.array(_q_xy(cov.window.origin))
    u = np.array(_q_xy(cov.window.u + cov.window.origin)) - o
    v = np.array(_q_xy(cov.window.v + cov.window.origin)) - o
    area = abs(u[0] * v[1] - u[1] * v[0])
    if area == 0:
        return CoverReport(cov.scheme, cov.n, 0, epsilon, 0, 0, 0, 0, {}, 1.0, 0.0, True, [])
    st = _r2_unit_points(samples)
    pts = o + st[:, 0:1] * u + st[:, 1:2] * v

    polys = [_closed_xy(p) for p in cov.tile_polylines]
    residual_polys = [_closed_xy(p) for p in cov.residuals]

    in_region = np.ones(samples, dtype=bool)
    if cov.region is not None:
        in_region = points_in_polygon(pts, _closed_xy(cov.region))
    outside_region = int(np.count_nonzero(~in_region))

    keep_idx = np.nonzero(in_region)[0]
    kept = pts[keep_idx]
    in_residual = _inside_any(kept, residual_polys) if residual_polys else np.zeros(len(kept), bool)
    near = _near_any_boundary(kept, polys, epsilon)

    check_mask = ~(in_residual | near)
    check_pts = kept[check_mask]
    threads = _thread_count()
    if threads > 1 and len(check_pts) >= 4 * threads:
        from concurrent.futures import ThreadPoolExecutor

        chunks = np.array_split(check_pts, threads)
        with ThreadPoolExecutor(threads) as ex:
            mult = np.concatenate(list(ex.map(lambda c: _multiplicity(c, polys), chunks)))
    else:
        mult = _multiplicity(check_pts, polys)

    hist = {int(k): int(c) for k, c in sorted(Counter(mult.tolist()).items())}
    checked = len(check_pts)
    ones = int(hist.get(1, 0))
    frac = ones / checked if checked else 1.0
    offenders = []
    bad = np.nonzero(mult != 1)[0]
    order = bad[np.argsort(-np.abs(mult[bad] - 1), kind="stable")]
    for i in order[:8]:
        offenders.append((float(check_pts[i, 0]), float(check_pts[i, 1]), int(mult[i])))
    return CoverReport(
        scheme=cov.scheme,
        n=cov.n,
        samples=samples,
        epsilon=epsilon,
        outside_region=outside_region,
        excluded_band=int(np.count_nonzero(near & ~in_residual)),
        excluded_residual=int(np.count_nonzero(in_residual)),
        checked=checked,
        histogram=hist,
        multiplicity_one_fraction=frac,
        residual_fraction=float(np.count_nonzero(in_residual)) / max(1, len(kept)),
        passed=frac >= 0.99,
        worst_offenders=offenders,
    )


def _validate(cov: Covering, samples: int = 20_000) -> None:
    report = check_covering(cov, samples=samples)
    if not report.passed:
        raise CoveringError(
            f"{cov.scheme} covering failed validation: multiplicity histogram {report.histogram}",
            report,
        )
