"""Properties of the curve iterates: exact lengths and areas, height,
centroid, revolution volume, Hausdorff dimension, the Cantor remainder of
the base segment, closed-loop detection/removal, the loop-free curve and
its colored substitution system, and sampled geometric checks
(rasterized area, simple connectivity, rotational symmetry)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .construct import Polyline, generate_segments, generate_triangles, z_blocks
from .lattice import (
    EisensteinInt,
    QOmega,
    SqrtThreeScalar,
    SQRT3,
    ZERO,
    cross2,
    omega_pow,
)

# ---------------------------------------------------------------------------
# exact lengths and areas


def length_exact(n: int) -> SqrtThreeScalar:
    """Total length of iterate n, summed edge by edge.

    Of the 4**n edges, C(n,u) * 3**(n-u) have length sqrt(3)**u / 3**n
    (u = count of base-4 digits 1 of the edge index).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = SqrtThreeScalar(0)
    scale = 3 ** n
    for u in range(n + 1):
        count = math.comb(n, u) * 3 ** (n - u)
        half, odd = divmod(u, 2)
        piece = Fraction(count * 3 ** half, scale)
        total = total + (SqrtThreeScalar(0, piece) if odd else SqrtThreeScalar(piece))
    return total


def length_closed_form(n: int) -> SqrtThreeScalar:
    """(1 + 1/sqrt(3))**n."""
    return SqrtThreeScalar(1, Fraction(1, 3)) ** n


def tri_area_exact(n: int) -> SqrtThreeScalar:
    """Area of the depth-n triangle construction: sum of 4**n triangle areas."""
    tris = generate_triangles(n)
    total = sum(t.norm() for t in tris)
    return SqrtThreeScalar(0, Fraction(total, 4 * 9 ** n))


def tri_area_closed_form(n: int) -> SqrtThreeScalar:
    """(sqrt(3)/4) * (2/3)**n."""
    return SqrtThreeScalar(0, Fraction(2 ** n, 4 * 3 ** n))


def curve_area_exact(n: int) -> SqrtThreeScalar:
    """Area between iterate n and its base segment: (sqrt(3)/4 - T_n) / 3."""
    t = tri_area_closed_form(n)
    return (SqrtThreeScalar(0, Fraction(1, 4)) - t) * Fraction(1, 3)


CURVE_AREA_LIMIT = SqrtThreeScalar(0, Fraction(1, 12))  # 1/(4*sqrt(3))


def shoelace_area_exact(poly: Polyline) -> SqrtThreeScalar:
    """Unsigned shoelace area of the closed normalized polygon (last vertex
    joined back to the first).  Cross products stay integer on the lattice:
    Re(p)Im(q) - Re(q)Im(p) = (a_p b_q - a_q b_p) * sqrt(3)/2."""
    verts = poly.vertices
    total = 0
    for p, q in zip(verts, verts[1:]):
        total += cross2(p, q)
    total += cross2(verts[-1], verts[0])
    area = SqrtThreeScalar(0, Fraction(abs(total), 4 * poly.scale() ** 2))
    return area


# ---------------------------------------------------------------------------
# sampled even-odd geometry (shared with the tiling checker)


def points_in_polygon(pts: np.ndarray, poly: np.ndarray, chunk: int = 2_000_000) -> np.ndarray:
    """Even-odd membership of pts (P,2) in the closed polygon poly (V,2),
    vectorized over edges; poly must repeat its first point at the end."""
    if len(poly) < 4 or not np.array_equal(poly[0], poly[-1]):
        raise ValueError("polygon must be closed (first point repeated at the end)")
    x1, y1 = poly[:-1, 0], poly[:-1, 1]
    x2, y2 = poly[1:, 0], poly[1:, 1]
    keep = y1 != y2
    x1, y1, x2, y2 = x1[keep], y1[keep], x2[keep], y2[keep]
    out = np.zeros(len(pts), dtype=bool)
    if len(x1) == 0:
        return out
    slope = (x2 - x1) / (y2 - y1)
    step = max(1, chunk // len(x1))
    for s in range(0, len(pts), step):
        px = pts[s:s + step, 0:1]
        py = pts[s:s + step, 1:2]
        straddle = (y1 > py) != (y2 > py)
        xs = x1 + (py - y1) * slope
        out[s:s + step] = (np.count_nonzero(straddle & (px < xs), axis=1) & 1).astype(bool)
    return out


def closed_polygon_xy(poly: Polyline) -> np.ndarray:
    """Normalized Cartesian closed polygon for a polyline (base closure added)."""
    xy = poly.as_xy()
    if not np.array_equal(xy[0], xy[-1]):
        xy = np.vstack([xy, xy[0]])
    return xy


def polygon_area_sampled(xy: np.ndarray, resolution: int) -> float:
    """Area estimate for a closed polygon by even-odd midpoint sampling on a
    square grid with `resolution` columns across the bounding box."""
    if resolution < 2:
        raise ValueError("resolution too small")
    x0, y0 = xy.min(axis=0)
    x1, y1 = xy.max(axis=0)
    d = (x1 - x0) / resolution
    if d <= 0:
        return 0.0
    nx = resolution
    ny = max(1, int(math.ceil((y1 - y0) / d)))
    gx = x0 + d * (np.arange(nx) + 0.5)
    gy = y0 + d * (np.arange(ny) + 0.5)
    pts = np.stack(np.meshgrid(gx, gy), axis=-1).reshape(-1, 2)
    inside = points_in_polygon(pts, xy)
    return float(np.count_nonzero(inside)) * d * d


def rasterized_area(n: int, resolution: int) -> float:
    """Sampled area between iterate n and its base segment: even-odd grid
    sampling against the closed polygon (curve plus base closure).  Serves
    as an independent check on curve_area_exact; the grid must resolve the
    lattice (resolution >= 3**n)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if resolution < 3 ** n:
        raise ValueError(f"resolution {resolution} undersamples iterate {n}: need >= {3 ** n}")
    if n == 0:
        return 0.0
    return polygon_area_sampled(closed_polygon_xy(generate_segments(n)), resolution)


# ---------------------------------------------------------------------------
# height


@dataclass
class HeightReport:
    n: int
    value: SqrtThreeScalar
    closed_form: SqrtThreeScalar
    matches_closed_form: bool
    maximizers: List[QOmega]
    leftmost: Optional[QOmega]
    rightmost: Optional[QOmega]
    claimed_leftmost: QOmega
    claimed_rightmost: QOmega
    leftmost_matches_claim: bool
    rightmost_matches_claim: bool


CLAIMED_LEFTMOST = QOmega(Fraction(4, 9), Fraction(4, 9))
CLAIMED_RIGHTMOST = QOmega(Fraction(5, 9), Fraction(4, 9))


def height_closed_form(n: int) -> SqrtThreeScalar:
    if n == 0:
        return SqrtThreeScalar(0)
    if n == 1:
        return SqrtThreeScalar(0, Fraction(1, 6))  # 1/(2*sqrt(3))
    return SqrtThreeScalar(0, Fraction(2, 9))  # 2/(3*sqrt(3))


def height(n: int) -> Tuple[SqrtThreeScalar, Optional[QOmega], Optional[QOmega]]:
    """Height of iterate n with the leftmost and rightmost vertices attaining
    it: (H_n, leftmost, rightmost)."""
    r = height_report(n)
    return r.value, r.leftmost, r.rightmost


def height_report(n: int) -> HeightReport:
    """Exact height of iterate n (max imaginary part over vertices) with all
    attaining vertices, compared against the closed form and against
    CLAIMED_LEFTMOST/CLAIMED_RIGHTMOST; mismatches are recorded, not raised."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    count = 4 ** n + 1
    scale = 3 ** n
    bmax = 0
    points: List[Tuple[int, int]] = []
    for a, b in z_blocks(count):
        m = int(b.max())
        if m > bmax:
            bmax = m
            points = []
        if m == bmax:
            sel = b == bmax
            points.extend(zip(a[sel].tolist(), b[sel].tolist()))
    uniq = sorted(set(points))
    value = SqrtThreeScalar(0, Fraction(bmax, 2 * scale))
    maximizers = [QOmega(Fraction(a, scale), Fraction(b, scale)) for a, b in uniq]
    closed = height_closed_form(n)
    left = maximizers[0] if maximizers else None
    right = maximizers[-1] if maximizers else None
    # uniq is sorted by (a, b); with b constant that orders by real part
    return HeightReport(
        n=n,
        value=value,
        closed_form=closed,
        matches_closed_form=value == closed,
        maximizers=maximizers,
        leftmost=left,
        rightmost=right,
        claimed_leftmost=CLAIMED_LEFTMOST,
        claimed_rightmost=CLAIMED_RIGHTMOST,
        leftmost_matches_claim=left == CLAIMED_LEFTMOST,
        rightmost_matches_claim=right == CLAIMED_RIGHTMOST,
    )


# ---------------------------------------------------------------------------
# centroid and revolution volume

# (weight, c, d) with part centroid = (c*m + d)/3; the last part is the
# filled triangle {1, 2+omega, 2}, whose centroid is constant.
CENTROID_PARTS: List[Tuple[Fraction, QOmega, QOmega]] = [
    (Fraction(1, 9), QOmega(1), QOmega(0)),
    (Fraction(1, 3), QOmega(1, 1), QOmega(1)),
    (Fraction(1, 9), QOmega(0, -1), QOmega(2, 1)),
    (Fraction(1, 9), QOmega(1), QOmega(2)),
    (Fraction(1, 3), QOmega(0), QOmega(Fraction(5, 3), Fraction(1, 3))),
]


def centroid_solve() -> QOmega:
    """Solve m = sum w_i * (c_i m + d_i)/3 exactly in Q(omega)."""
    wsum = sum(w for w, _, _ in CENTROID_PARTS)
    if wsum != 1:
        raise AssertionError(f"part weights sum to {wsum}, not 1")
    coeff = QOmega(1)
    const = QOmega(0)
    third = Fraction(1, 3)
    for w, c, d in CENTROID_PARTS:
        coeff = coeff - QOmega(w * third) * c
        const = const + QOmega(w * third) * d
    m = const / coeff
    # residual must vanish identically
    back = QOmega(0)
    for w, c, d in CENTROID_PARTS:
        back = back + QOmega(w * third) * (c * m + d)
    if back != m:
        raise AssertionError("centroid fixed-point residual is nonzero")
    return m


def revolution_volume() -> Fraction:
    """Coefficient of pi in the volume of revolution about the base segment,
    composed as 2 * Im(centroid) * area (Pappus)."""
    m = centroid_solve()
    im = m.im_exact()
    vol = 2 * im * CURVE_AREA_LIMIT
    if not vol.is_rational():
        raise AssertionError("revolution volume should be a rational multiple of pi")
    return vol.as_fraction()


# ---------------------------------------------------------------------------
# Hausdorff dimension


def dimension_equation(d: float) -> float:
    """3**(1-d) + 3**(-d/2) - 1; strictly decreasing on [1, 2]."""
    return 3.0 ** (1.0 - d) + 3.0 ** (-d / 2.0) - 1.0


def hausdorff_dimension(tol: float = 1e-12) -> float:
    """Bisection root of the dimension equation on [1, 2]."""
    if not (0 < tol <= 1e-6):
        raise ValueError("tol must be in (0, 1e-6]")
    lo, hi = 1.0, 2.0
    flo = dimension_equation(lo)
    if flo <= 0 or dimension_equation(hi) >= 0:
        raise AssertionError("root not bracketed")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if dimension_equation(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def dimension_closed_form() -> float:
    """2 * log((1+sqrt(13))/2) / log(3)."""
    return 2.0 * math.log((1.0 + math.sqrt(13.0)) / 2.0) / math.log(3.0)


# ---------------------------------------------------------------------------
# aggregate report with lossless serialization


def _fraction_json(x: Fraction) -> Dict[str, int]:
    return {"num": x.numerator, "den": x.denominator}


def _scalar_json(x: SqrtThreeScalar) -> Dict[str, Dict[str, int]]:
    return {"p": _fraction_json(x.p), "q": _fraction_json(x.q)}


def _qomega_json(x: QOmega) -> Dict[str, Dict[str, int]]:
    return {"x": _fraction_json(x.x), "y": _fraction_json(x.y)}


def _fraction_from_json(d: Dict[str, int]) -> Fraction:
    return Fraction(d["num"], d["den"])


def _scalar_from_json(d) -> SqrtThreeScalar:
    return SqrtThreeScalar(_fraction_from_json(d["p"]), _fraction_from_json(d["q"]))


def _qomega_from_json(d) -> QOmega:
    return QOmega(_fraction_from_json(d["x"]), _fraction_from_json(d["y"]))


@dataclass
class PropertyReport:
    """Every per-iterate and limit property in one record; exact fields stay
    exact through JSON (rationals as num/den integer pairs)."""

    n: int
    length: SqrtThreeScalar
    tri_area: SqrtThreeScalar
    curve_area: SqrtThreeScalar
    height: SqrtThreeScalar
    height_argmax_points: List[QOmega]
    centroid: QOmega
    volume_over_pi: Fraction
    hausdorff_dim: float

    def to_json_dict(self) -> Dict:
        return {
            "n": self.n,
            "length": _scalar_json(self.length),
            "tri_area": _scalar_json(self.tri_area),
            "curve_area": _scalar_json(self.curve_area),
            "height": _scalar_json(self.height),
            "height_argmax_points": [_qomega_json(p) for p in self.height_argmax_points],
            "centroid": _qomega_json(self.centroid),
            "volume_over_pi": _fraction_json(self.volume_over_pi),
            "hausdorff_dim": self.hausdorff_dim,
        }

    @classmethod
    def from_json_dict(cls, d: Dict) -> "PropertyReport":
        return cls(
            n=d["n"],
            length=_scalar_from_json(d["length"]),
            tri_area=_scalar_from_json(d["tri_area"]),
            curve_area=_scalar_from_json(d["curve_area"]),
            height=_scalar_from_json(d["height"]),
            height_argmax_points=[_qomega_from_json(p) for p in d["height_argmax_points"]],
            centroid=_qomega_from_json(d["centroid"]),
            volume_over_pi=_fraction_from_json(d["volume_over_pi"]),
            hausdorff_dim=d["hausdorff_dim"],
        )


def property_report(n: int, tol: float = 1e-12) -> PropertyReport:
    """Computes every property of iterate n plus the limit constants."""
    hr = height_report(n)
    return PropertyReport(
        n=n,
        length=length_exact(n),
        tri_area=tri_area_exact(n),
        curve_area=curve_area_exact(n),
        height=hr.value,
        height_argmax_points=hr.maximizers,
        centroid=centroid_solve(),
        volume_over_pi=revolution_volume(),
        hausdorff_dim=hausdorff_dimension(tol),
    )


# ---------------------------------------------------------------------------
# Cantor remainder of the base segment


@dataclass(frozen=True)
class CantorIntervals:
    """Sub-segments of the base segment kept by iterate n.  Each pair (p, q)
    with q = 3**n is the closed interval [p/q, (p+1)/q]."""

    n: int
    intervals: List[Tuple[int, int]]

    def __len__(self) -> int:
        return len(self.intervals)

    def as_fractions(self) -> List[Tuple[Fraction, Fraction]]:
        return [(Fraction(p, q), Fraction(p + 1, q)) for p, q in self.intervals]


def cantor_remainder(n: int) -> CantorIntervals:
    """Maximal sub-segments of iterate n lying on the base segment.  Runs of
    adjacent base edges would violate the unit-length encoding and are
    rejected; the construction never produces them."""
    poly = generate_segments(n)
    units = set()
    for p, q in zip(poly.vertices, poly.vertices[1:]):
        if p.b == 0 and q.b == 0:
            lo, hi = sorted((p.a, q.a))
            if hi - lo != 1:
                raise AssertionError(f"base edge [{lo}, {hi}] is not unit length")
            units.add((lo, hi))
    starts = sorted(lo for lo, _ in units)
    for s, t in zip(starts, starts[1:]):
        if t == s + 1:
            raise AssertionError("adjacent base edges form a longer run")
    den = 3 ** n
    return CantorIntervals(n=n, intervals=[(lo, den) for lo in starts])


def cantor_iterate(n: int) -> List[Tuple[int, int]]:
    """Standard middle-thirds iterate on [0, 3**n], integer endpoints."""
    intervals = [(0, 3 ** n)]
    for _ in range(n):
        nxt = []
        for lo, hi in intervals:
            third = (hi - lo) // 3
            nxt.append((lo, lo + third))
            nxt.append((hi - third, hi))
        intervals = nxt
    return intervals


# ---------------------------------------------------------------------------
# loops


@dataclass
class Loop:
    """Closed excursion of the vertex chain: the subpath from start_index to
    end_index, whose first and last vertices coincide; the subpath is kept
    verbatim, so it may itself revisit points where further loops nest."""

    start_index: int
    end_index: int
    vertices: List[EisensteinInt]

    def __len__(self) -> int:
        return len(self.vertices)

    def displacement(self) -> EisensteinInt:
        return self.vertices[-1] - self.vertices[0]


def detect_loops(poly: Polyline, check_crossings: Optional[bool] = None) -> List[Loop]:
    """Outermost maximal closed subpaths of the chain, in traversal order.

    A stack of live vertices pairs each revisit with its first visit;
    loops nested inside a later, longer loop are discarded.  With
    check_crossings (default: only for chains up to 4**6 edges) an exact
    segment test also asserts that edges meet at shared vertices only.
    """
    verts = poly.vertices
    if check_crossings is None:
        check_crossings = len(verts) <= 4 ** 6 + 1
    if check_crossings:
        conflicts = find_edge_conflicts(poly)
        if conflicts:
            raise AssertionError(f"edges cross away from shared vertices: {conflicts[:3]}")
    live: Dict[EisensteinInt, int] = {}
    stack: List[Tuple[EisensteinInt, int]] = []
    spans: List[Tuple[int, int]] = []
    for j, v in enumerate(verts):
        at = live.get(v)
        if at is not None:
            i = stack[at][1]
            for w, _ in stack[at + 1:]:
                del live[w]
            del stack[at + 1:]
            while spans and spans[-1][0] >= i:
                spans.pop()
            spans.append((i, j))
        else:
            live[v] = len(stack)
            stack.append((v, j))
    return [Loop(i, j, verts[i:j + 1]) for i, j in spans]


def remove_loops(poly: Polyline, check_crossings: Optional[bool] = None) -> Polyline:
    """The chain with every closed excursion deleted; vertices are then
    pairwise distinct and the endpoints are preserved."""
    verts = poly.vertices
    seen: Dict[EisensteinInt, int] = {}
    kept: List[EisensteinInt] = []
    for v in verts:
        at = seen.get(v)
        if at is not None:
            for w in kept[at + 1:]:
                del seen[w]
            del kept[at + 1:]
        else:
            seen[v] = len(kept)
            kept.append(v)
    return Polyline(scale_exp=poly.scale_exp, vertices=kept)


def _seg_conflict(p1, q1, p2, q2) -> bool:
    """Exact test: do closed segments intersect anywhere besides a shared
    endpoint?  Works on integer (a, b) pairs; the lattice embedding is
    affine, so incidence is the same as in Cartesian coordinates."""

    def orient(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (b[0] - o[0]) * (a[1] - o[1])

    ends1 = {p1, q1}
    ends2 = {p2, q2}
    shared = ends1 & ends2
    if len(shared) == 2:
        return True  # identical or reversed segment
    d1 = orient(p1, q1, p2)
    d2 = orient(p1, q1, q2)
    d3 = orient(p2, q2, p1)
    d4 = orient(p2, q2, q1)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 and d2 and d3 and d4:
        return True  # proper interior crossing
    # collinear or touching cases
    for o, a, b, d in ((p1, q1, p2, d1), (p1, q1, q2, d2), (p2, q2, p1, d3), (p2, q2, q1, d4)):
        if d == 0 and _on_segment(o, a, b) and b not in shared:
            return True
    return False


def _on_segment(p, q, r) -> bool:
    """Collinear r within the closed box of p..q."""
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def find_edge_conflicts(poly: Polyline) -> List[Tuple[int, int]]:
    """Pairs of edge indices that meet anywhere besides shared vertices."""
    verts = [(v.a, v.b) for v in poly.vertices]
    edges = list(zip(verts, verts[1:]))
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
                if f - e == 1:
                    continue  # consecutive edges share a vertex by design
                if (e, f) in bad:
                    continue
                if _seg_conflict(edges[e][0], edges[e][1], edges[f][0], edges[f][1]):
                    bad.add((e, f))
    return sorted(bad)


# ---------------------------------------------------------------------------
# the loop-free curve and its colored substitution system


@dataclass(frozen=True)
class ColoredEdge:
    color: str  # 'black', 'blue' or 'red'
    start: EisensteinInt
    end: EisensteinInt

    def vector(self) -> EisensteinInt:
        return self.end - self.start


@dataclass
class CurveC:
    """Iterate of the two-rule colored substitution; scale 3**scale_exp."""

    scale_exp: int
    edges: List[ColoredEdge]

    def vertices(self) -> List[EisensteinInt]:
        out = [self.edges[0].start]
        for e in self.edges:
            if e.start != out[-1]:
                raise AssertionError("edge chain is not contiguous")
            out.append(e.end)
        return out

    def polyline(self) -> Polyline:
        return Polyline(scale_exp=self.scale_exp, vertices=self.vertices())

    def length_exact(self) -> SqrtThreeScalar:
        total = SqrtThreeScalar(0)
        scale = 3 ** self.scale_exp
        for e in self.edges:
            nrm = e.vector().norm()
            half, rem = _pow3_split(nrm)
            piece = Fraction(3 ** half, scale)
            total = total + (SqrtThreeScalar(0, piece) if rem else SqrtThreeScalar(piece))
        return total


def _pow3_split(nrm: int) -> Tuple[int, bool]:
    """nrm = 3**(2*half) * (3 if odd else 1); edge norms here are 3-powers."""
    j = 0
    while nrm % 3 == 0:
        nrm //= 3
        j += 1
    if nrm != 1:
        raise AssertionError("edge norm is not a power of 3")
    return j // 2, bool(j % 2)


def _substitute(edges: List[ColoredEdge]) -> List[ColoredEdge]:
    out: List[ColoredEdge] = []
    i = 0
    w1 = omega_pow(1)
    w2 = omega_pow(2)
    while i < len(edges):
        e = edges[i]
        if e.color == "black":
            v = e.vector().divide_int(3)
            a = e.start
            b = a + v
            c = b + v * EisensteinInt(1, 1)
            d = a + 2 * v
            out.append(ColoredEdge("black", a, b))
            out.append(ColoredEdge("black", b, c))
            out.append(ColoredEdge("blue", c, d))
            out.append(ColoredEdge("red", d, a + 3 * v))
            i += 1
        elif e.color == "blue":
            if i + 1 >= len(edges) or edges[i + 1].color != "red":
                raise AssertionError("blue edge without a following red edge")
            red = edges[i + 1]
            s = e.vector()
            if red.vector() != s * w2:
                raise AssertionError("red edge is not the blue edge rotated by omega**2")
            w = s.divide_int(3)
            p0 = e.start
            p1 = p0 + w
            p2 = p1 + w * EisensteinInt(1, 1)
            p3 = p2 + w * EisensteinInt(1, 1) * w2
            p4 = p3 + w
            p5 = p4 + w * w2
            out.append(ColoredEdge("black", p0, p1))
            out.append(ColoredEdge("blue", p1, p2))
            out.append(ColoredEdge("red", p2, p3))
            out.append(ColoredEdge("blue", p3, p4))
            out.append(ColoredEdge("red", p4, p5))
            if p5 != red.end:
                raise AssertionError("substituted pair does not preserve the endpoint")
            i += 2
        else:
            raise AssertionError("red edge not consumed with its blue partner")
    return out


def curve_c_system(n: int) -> CurveC:
    """n applications of the substitution to a single black unit edge."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    edges = [ColoredEdge("black", ZERO, EisensteinInt(3 ** n, 0))]
    for _ in range(n):
        edges = _substitute(edges)
    return CurveC(scale_exp=n, edges=edges)


def curve_c_generate(n: int) -> Tuple[Polyline, SqrtThreeScalar]:
    """Substitution iterate n as a polyline, with its exact total length."""
    cc = curve_c_system(n)
    return cc.polyline(), cc.length_exact()


def curve_c_bounds(n: int) -> Tuple[SqrtThreeScalar, SqrtThreeScalar, SqrtThreeScalar]:
    """(lower bound, exact length, upper bound) for the substitution iterate:
    (1/2 + 1/sqrt(3))**n <= c_n <= (1 + 1/sqrt(3))**n."""
    c = curve_c_system(n).length_exact()
    lo = SqrtThreeScalar(Fraction(1, 2), Fraction(1, 3)) ** n
    hi = SqrtThreeScalar(1, Fraction(1, 3)) ** n
    return lo, c, hi


# ---------------------------------------------------------------------------
# rotational near-symmetry of the loop-free curve


@dataclass
class SymmetryReport:
    n: int
    split_index: int
    split_vertex: QOmega
    center: QOmega
    center_on_curve: bool
    split_distance: float  # |split vertex - center|, normalized
    hausdorff_distance: float  # symmetric, normalized


def _polyline_samples(xy: np.ndarray, per_edge: int = 4) -> np.ndarray:
    t = np.linspace(0.0, 1.0, per_edge, endpoint=False).reshape(-1, 1, 1)
    seg = xy[:-1][None, :, :] * (1 - t) + xy[1:][None, :, :] * t
    return np.vstack([seg.reshape(-1, 2), xy[-1:]])


def _points_to_polyline_distance(pts: np.ndarray, xy: np.ndarray) -> float:
    a = xy[:-1]
    d = xy[1:] - a
    dd = np.einsum("ij,ij->i", d, d)
    dd[dd == 0] = 1.0
    best = np.full(len(pts), np.inf)
    chunk = max(1, 2_000_000 // max(1, len(a)))
    for s in range(0, len(pts), chunk):
        p = pts[s:s + chunk]
        w = p[:, None, :] - a[None, :, :]
        t = np.clip(np.einsum("pik,ik->pi", w, d) / dd, 0.0, 1.0)
        diff = w - t[:, :, None] * d[None, :, :]
        dist2 = np.einsum("pik,pik->pi", diff, diff)
        best[s:s + chunk] = np.sqrt(dist2.min(axis=1))
    return float(best.max())


def curve_c_symmetry_check(n: int, per_edge: int = 4) -> float:
    """Symmetric Hausdorff distance between the first part of the loop-free
    iterate rotated 120 degrees about the triangle centroid O and the second
    part; shrinks as n grows."""
    return curve_c_symmetry_report(n, per_edge).hausdorff_distance


def curve_c_symmetry_report(n: int, per_edge: int = 4) -> SymmetryReport:
    """Split the loop-free iterate at the vertex nearest the centroid O of
    the triangle {0, 1, omega}, rotate the first part by 120 degrees about
    O, and measure the symmetric Hausdorff distance to the second part
    (normalized units).  O itself is not a curve vertex, which the report
    flags; the distance shrinks as n grows."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = remove_loops(generate_segments(n))
    scale = 3 ** n
    o_scaled = EisensteinInt(3 ** (n - 1), 3 ** (n - 1))
    dists = [(v - o_scaled).norm() for v in poly.vertices]
    split = int(np.argmin(dists))
    on_curve = dists[split] == 0
    xy = poly.as_xy()
    ox, oy = o_scaled.a + 0.5 * o_scaled.b, math.sqrt(3.0) / 2.0 * o_scaled.b
    center = np.array([ox / scale, oy / scale])
    first = xy[: split + 1]
    second = xy[split:]
    ang = 2.0 * math.pi / 3.0
    rot = np.array([[math.cos(ang), -math.sin(ang)], [math.sin(ang), math.cos(ang)]])
    first_rotated = (first - center) @ rot.T + center
    d1 = _points_to_polyline_distance(_polyline_samples(first_rotated, per_edge), second)
    d2 = _points_to_polyline_distance(_polyline_samples(second, per_edge), first_rotated)
    return SymmetryReport(
        n=n,
        split_index=split,
        split_vertex=poly.vertex_normalized(split),
        center=QOmega(Fraction(1, 3), Fraction(1, 3)),
        center_on_curve=on_curve,
        split_distance=float(math.sqrt(dists[split])) / scale,
        hausdorff_distance=max(d1, d2),
    )


# ---------------------------------------------------------------------------
# simple connectivity


@dataclass
class ConnectivityReport:
    region_components: int
    complement_components: int
    holes: int
    simply_connected: bool
    pitch: float
    n: Optional[int] = None
    construction: Optional[str] = None


def entangled_region_polygon(n: int) -> Polyline:
    """Closed boundary of the depth-n triangle construction: three curve
    copies around the sides of the base triangle {0, 3**n, 3**n*omega}."""
    k = generate_segments(n)
    s = EisensteinInt(3 ** n, 0)
    w2 = omega_pow(2)
    w4 = omega_pow(4)
    side1 = list(k.vertices)
    side2 = [w2 * v + s for v in k.vertices]
    side3 = [w4 * v + s * omega_pow(1) for v in k.vertices]
    verts = side1 + side2[1:] + side3[1:]
    if verts[0] != verts[-1]:
        raise AssertionError("triangle boundary failed to close")
    return Polyline(scale_exp=n, vertices=verts[:-1])


# neighbors on the triangular lattice in axial (a, b) indexing: +-1, +-omega
# and +-(omega - 1); +-(1 + omega) is a sqrt(3) step, not an edge
_HEX_STRUCTURE = np.array([[0, 1, 1], [1, 1, 1], [1, 1, 0]], dtype=np.uint8)


def mask_connectivity(
    inside: np.ndarray,
    pitch: float = float("nan"),
    n: Optional[int] = None,
    construction: Optional[str] = None,
) -> ConnectivityReport:
    """Labels a sampled region mask (rows = b, columns = a) and its complement
    with six-neighbor lattice adjacency; the mask must carry enough empty
    border that the outer complement is one piece."""
    from scipy import ndimage

    inside = np.asarray(inside, dtype=bool)
    _, n_in = ndimage.label(inside, structure=_HEX_STRUCTURE)
    _, n_out = ndimage.label(~inside, structure=_HEX_STRUCTURE)
    return ConnectivityReport(
        region_components=int(n_in),
        complement_components=int(n_out),
        holes=int(n_out) - 1,
        simply_connected=n_out == 1,
        pitch=pitch,
        n=n,
        construction=construction,
    )


def _offset_grid(lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unit-pitch (a, b) sample grid over the padded bounding box, offset off
    every lattice line so no sample hits an edge."""
    ga = np.arange(math.floor(lo[0]) - 2, math.ceil(hi[0]) + 3, dtype=float) + 0.37
    gb = np.arange(math.floor(lo[1]) - 2, math.ceil(hi[1]) + 3, dtype=float) + 0.41
    grid = np.stack(np.meshgrid(ga, gb), axis=-1).reshape(-1, 2)
    return ga, gb, grid


def _triangle_union_mask(pts: np.ndarray, tris: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Membership of pts (P, 2) in the union of counterclockwise triangles
    tris (T, 3, 2); sign tests in axial coordinates are valid because the
    lattice embedding preserves orientation."""
    v0, v1, v2 = tris[:, 0], tris[:, 1], tris[:, 2]
    e0, e1, e2 = v1 - v0, v2 - v1, v0 - v2
    out = np.zeros(len(pts), dtype=bool)
    for s in range(0, len(pts), chunk):
        p = pts[s:s + chunk][:, None, :]
        c0 = e0[:, 0] * (p[..., 1] - v0[:, 1]) - e0[:, 1] * (p[..., 0] - v0[:, 0])
        c1 = e1[:, 0] * (p[..., 1] - v1[:, 1]) - e1[:, 1] * (p[..., 0] - v1[:, 0])
        c2 = e2[:, 0] * (p[..., 1] - v2[:, 1]) - e2[:, 1] * (p[..., 0] - v2[:, 0])
        out[s:s + chunk] = ((c0 >= 0) & (c1 >= 0) & (c2 >= 0)).any(axis=1)
    return out


def connectivity_report(n: int, construction: str = "segment") -> ConnectivityReport:
    """Samples the filled region of iterate n on the triangular grid (pitch
    one lattice unit at scale 3**n, i.e. 3**-n normalized) and labels region
    and complement.  The region is the even-odd interior of the closed curve
    for the segment construction, or the union of filled triangles for the
    triangle construction."""
    if not 1 <= n <= 5:
        raise ValueError("n must be in 1..5")
    if construction == "segment":
        poly = generate_segments(n)
        pairs = poly.as_pairs()
        pts_ab = np.array(pairs + [pairs[0]], dtype=float)
        ga, gb, grid = _offset_grid(pts_ab.min(axis=0), pts_ab.max(axis=0))
        inside = points_in_polygon(grid, pts_ab)
    elif construction == "triangle":
        tris = np.array(
            [[(v.a, v.b) for v in t.vertices()] for t in generate_triangles(n)],
            dtype=float,
        )
        flat = tris.reshape(-1, 2)
        ga, gb, grid = _offset_grid(flat.min(axis=0), flat.max(axis=0))
        inside = _triangle_union_mask(grid, tris)
    else:
        raise ValueError("construction must be 'segment' or 'triangle'")
    mask = inside.reshape(len(gb), len(ga))
    return mask_connectivity(mask, pitch=3.0 ** -n, n=n, construction=construction)


def simply_connected_check(n: int, construction: str = "segment") -> bool:
    """Whether the sampled complement of the filled region is one piece."""
    return connectivity_report(n, construction).simply_connected
