"""Four constructions of the curve iterates on the triangular lattice.

All of them produce, for depth n, the same chain of 4**n + 1 lattice points
at scale 3**n (vertex k of the normalized curve is vertices[k] / 3**n):

  * generate_segments  -- replace each directed segment AE by ABCDE, where
    A, B, D, E are collinear and equally spaced and DEC is equilateral;
  * generate_triangles -- replace each triangle by three side/3 triangles
    plus one side/sqrt(3) triangle (three entangled curves; area oracle);
  * rewrite_lsystem + turtle_run -- word rewriting S -> S*S/S+S with turn
    and stretch state kept as integer exponents;
  * z_stream / z_blocks -- the closed-form vertex recurrence
    z_{k+1} = z_k + (1+omega)**u_k * omega**(-2*v_k), with u_k, v_k the
    counts of base-4 digits 1 and 2 of k.

z_blocks is backed by a compiled kernel when available (see BACKEND);
z_stream is pure Python on exact integers and has no depth limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Tuple

import numpy as np

from .lattice import EisensteinInt, QOmega, omega_pow, ONE_PLUS_OMEGA, ZERO

try:  # compiled kernel is optional
    from . import _zkernel as _kernel

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    from . import _zkernel_py as _kernel

    BACKEND = "fallback"

KERNEL_MAX_COUNT = _kernel.MAX_COUNT


@dataclass
class Polyline:
    """Chain of lattice vertices; normalized coordinates are vertex / 3**scale_exp."""

    scale_exp: int
    vertices: List[EisensteinInt]

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i]

    def scale(self) -> int:
        return 3 ** self.scale_exp

    def as_pairs(self) -> List[Tuple[int, int]]:
        return [(v.a, v.b) for v in self.vertices]

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        a = np.fromiter((v.a for v in self.vertices), dtype=np.int64, count=len(self.vertices))
        b = np.fromiter((v.b for v in self.vertices), dtype=np.int64, count=len(self.vertices))
        return a, b

    def as_xy(self) -> np.ndarray:
        """Normalized Cartesian coordinates, shape (len, 2), float64."""
        a, b = self.as_arrays()
        s = float(self.scale())
        out = np.empty((len(self.vertices), 2))
        out[:, 0] = (a + 0.5 * b) / s
        out[:, 1] = (np.sqrt(3.0) / 2.0) * b / s
        return out

    def vertex_normalized(self, i: int) -> QOmega:
        return self.vertices[i].to_qomega(self.scale())


def subdivide_segment(a: EisensteinInt, e: EisensteinInt) -> List[EisensteinInt]:
    """One production step: AE -> A, B, C, D, E with C = A + (2+omega)*(AE/3)."""
    v = (e - a).divide_int(3)
    b = a + v
    d = b + v
    c = a + EisensteinInt(2, 1) * v
    return [a, b, c, d, e]


def generate_segments(n: int) -> Polyline:
    """Iterate the segment production n times from the unit segment."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    verts = [ZERO, EisensteinInt(3 ** n, 0)]
    for _ in range(n):
        nxt = [verts[0]]
        for a, e in zip(verts, verts[1:]):
            nxt.extend(subdivide_segment(a, e)[1:])
        verts = nxt
    return Polyline(scale_exp=n, vertices=verts)


@dataclass(frozen=True)
class Triangle:
    """Equilateral triangle with counterclockwise vertices p, p+u, p+u*omega."""

    p: EisensteinInt
    u: EisensteinInt

    def vertices(self) -> Tuple[EisensteinInt, EisensteinInt, EisensteinInt]:
        return (self.p, self.p + self.u, self.p + self.u * omega_pow(1))

    def norm(self) -> int:
        """Squared side length; area is norm * sqrt(3)/4."""
        return self.u.norm()


def subdivide_triangle(t: Triangle) -> List[Triangle]:
    """Replace a triangle by three side/3 copies plus one side/sqrt(3) copy."""
    v = t.u.divide_int(3)
    vw = v * omega_pow(1)
    return [
        Triangle(t.p, v),
        Triangle(t.p + 2 * v, v),
        Triangle(t.p + 2 * vw, v),
        Triangle(t.p + 2 * vw, v * EisensteinInt(1, -2)),
    ]


def generate_triangles(n: int, root: Optional[Triangle] = None) -> List[Triangle]:
    """Depth-first expansion to the 4**n triangles of generation n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if root is None:
        root = Triangle(ZERO, EisensteinInt(3 ** n, 0))
    out: List[Triangle] = []

    def walk(t: Triangle, depth: int) -> None:
        if depth == 0:
            out.append(t)
            return
        for child in subdivide_triangle(t):
            walk(child, depth - 1)

    walk(root, n)
    return out


LSYSTEM_AXIOM = "S"
LSYSTEM_RULE = "S*S/S+S"
LSYSTEM_ALPHABET = frozenset("S*/+")


def rewrite_lsystem(n: int) -> str:
    """Apply S -> S*S/S+S to the axiom n times."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    word = LSYSTEM_AXIOM
    for _ in range(n):
        word = word.replace("S", LSYSTEM_RULE)
    return word


@dataclass
class TurtleState:
    """Integer turtle state: position, stretch exponent a (step length sqrt(3)**a),
    heading h in units of 30 degrees.  h - a stays even, so each step
    (1+omega)**a * omega**((h-a)/2) is a lattice vector."""

    pos: EisensteinInt = field(default_factory=lambda: ZERO)
    a: int = 0
    h: int = 0

    def step_vector(self) -> EisensteinInt:
        if (self.h - self.a) % 2:
            raise ValueError(f"off-lattice turtle state a={self.a} h={self.h}")
        if self.a < 0:
            raise ValueError(f"negative stretch exponent a={self.a}")
        half, odd = divmod(self.a, 2)
        v = omega_pow(half + (self.h - self.a) // 2)
        if odd:
            v = v * ONE_PLUS_OMEGA
        return 3 ** half * v


def turtle_run(word: str, scale_exp: Optional[int] = None) -> Polyline:
    """Trace a word; 'S' draws, '*' is +30deg and stretch sqrt(3), '/' is
    -150deg and stretch 1/sqrt(3), '+' is +120deg.

    scale_exp defaults to the rewrite depth inferred from the step count.
    """
    bad = set(word) - LSYSTEM_ALPHABET
    if bad:
        raise ValueError(f"unknown symbols {sorted(bad)!r}")
    st = TurtleState()
    verts = [st.pos]
    for i, sym in enumerate(word):
        if sym == "S":
            try:
                st.pos = st.pos + st.step_vector()
            except ValueError as exc:
                raise ValueError(f"at word position {i}: {exc}") from None
            verts.append(st.pos)
        elif sym == "*":
            st.a += 1
            st.h += 1
        elif sym == "/":
            st.a -= 1
            st.h -= 5
        else:  # '+'
            st.h += 4
    if scale_exp is None:
        steps = word.count("S")
        n = max(0, (steps.bit_length() - 1) // 2)
        scale_exp = n if 4 ** n == steps else 0
    return Polyline(scale_exp=scale_exp, vertices=verts)


@dataclass
class DigitCounters:
    """Counts of base-4 digits 1 and 2, maintained in O(1) amortized per increment."""

    ones: int = 0
    twos: int = 0
    digits: List[int] = field(default_factory=list)

    def advance(self) -> None:
        d = self.digits
        pos = 0
        while pos < len(d) and d[pos] == 3:
            d[pos] = 0
            pos += 1
        if pos == len(d):
            d.append(0)
        d[pos] += 1
        now = d[pos]
        if now == 1:
            self.ones += 1
        elif now == 2:
            self.ones -= 1
            self.twos += 1
        else:
            self.twos -= 1

    @classmethod
    def of(cls, k: int) -> "DigitCounters":
        c = cls()
        ones = twos = 0
        digits = []
        while k:
            k, d = divmod(k, 4)
            digits.append(d)
            ones += d == 1
            twos += d == 2
        c.ones, c.twos, c.digits = ones, twos, digits
        return c


def z_value(k: int) -> EisensteinInt:
    """z_k by running the recurrence from 0; O(k), prefer z_stream for ranges."""
    c = DigitCounters()
    z = ZERO
    for _ in range(k):
        z = z + z_step(c.ones, c.twos)
        c.advance()
    return z


def z_step(ones: int, twos: int) -> EisensteinInt:
    """(1+omega)**ones * omega**(-2*twos) via (1+omega)**2 = 3*omega."""
    half, odd = divmod(ones, 2)
    v = omega_pow(half - 2 * twos)
    if odd:
        v = v * ONE_PLUS_OMEGA
    return 3 ** half * v


def z_stream(count: Optional[int] = None) -> Iterator[EisensteinInt]:
    """Exact z_0, z_1, ... (count values if given, else unbounded)."""
    if count is not None and count < 1:
        raise ValueError("count must be at least 1")
    return _z_stream_iter(count)


def _z_stream_iter(count: Optional[int]) -> Iterator[EisensteinInt]:
    c = DigitCounters()
    z = ZERO
    emitted = 0
    while count is None or emitted < count:
        yield z
        emitted += 1
        z = z + z_step(c.ones, c.twos)
        c.advance()


def z_blocks(count: int, block: int = 65536) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Kernel-backed stream of (a, b) int64 blocks for z_0 .. z_{count-1}."""
    return _kernel.fill(count, block)


def generate_numeric(n: int) -> Polyline:
    """Vertices of iterate n from the z recurrence (exact arithmetic)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return Polyline(scale_exp=n, vertices=list(z_stream(4 ** n + 1)))


GENERATORS = {
    "segment": generate_segments,
    "lsystem": lambda n: turtle_run(rewrite_lsystem(n), scale_exp=n),
    "numeric": generate_numeric,
}


def polyline_json(poly: Polyline, construction: str = "segment") -> dict:
    return {
        "schema_version": 1,
        "construction": construction,
        "n": poly.scale_exp,
        "scale_exp": poly.scale_exp,
        "vertices": poly.as_pairs(),
    }


def polyline_from_json(data: dict) -> Polyline:
    return Polyline(
        scale_exp=int(data["scale_exp"]),
        vertices=[EisensteinInt(int(a), int(b)) for a, b in data["vertices"]],
    )


def write_csv(stream: Iterable[Tuple[int, int]], fh) -> int:
    """Write 'k,a,b' rows from an iterable of (a, b); returns the row count."""
    fh.write("k,a,b\n")
    k = 0
    for a, b in stream:
        fh.write(f"{k},{a},{b}\n")
        k += 1
    return k
