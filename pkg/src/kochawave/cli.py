"""Command line front end: generate geometry, verify invariants, build coverings.

Outputs are deterministic: the same configuration always produces the same
bytes.  JSON reports carry a schema tag and echo the full configuration,
defaults included, so a run can be reproduced from its own output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from . import analyze, construct, render, tiling
from .lattice import QOmega, SqrtThreeScalar

REPORT_SCHEMA = "kochawave.report/1"
COVERING_SCHEMA = "kochawave.covering/1"
DEFAULT_MAX_N = 12

CONSTRUCTIONS = ("segments", "triangles", "lsystem", "numeric")
FORMATS = ("svg", "json", "csv")


@dataclass
class RunConfig:
    command: str
    n: int
    construction: str = "segments"
    output: Optional[str] = None
    format: str = "svg"
    preset: Optional[str] = None
    scheme: Optional[str] = None
    k_range: Optional[Tuple[int, int]] = None
    window: Tuple[int, int] = (3, 3)
    samples: int = 100_000
    epsilon: Optional[float] = None
    tol: float = 1e-12
    only: Optional[List[str]] = None
    max_n: int = DEFAULT_MAX_N
    allow_large: bool = False
    inject_fault: bool = False

    def echo(self) -> Dict:
        blob = asdict(self)
        blob["k_range"] = list(self.k_range) if self.k_range else None
        blob["window"] = list(self.window)
        return blob


def _scalar_str(x: SqrtThreeScalar) -> str:
    return f"{x.p} + {x.q}*sqrt(3)"


def _qomega_str(q: QOmega) -> str:
    return f"{q.x} + {q.y}*omega"


# ---------------------------------------------------------------------------
# generate


def _generate_polyline(cfg: RunConfig) -> construct.Polyline:
    if cfg.construction == "segments":
        return construct.generate_segments(cfg.n)
    if cfg.construction == "lsystem":
        return construct.turtle_run(construct.rewrite_lsystem(cfg.n), scale_exp=cfg.n)
    return construct.generate_numeric(cfg.n)


def _open_out(cfg: RunConfig, binary: bool):
    if cfg.output is None:
        return (sys.stdout.buffer if binary else sys.stdout), False
    return open(cfg.output, "wb" if binary else "w"), True


def cmd_generate(cfg: RunConfig) -> int:
    if cfg.preset is not None:
        scene = render.preset_scene(cfg.preset)
        if cfg.format == "json":
            payload = json.dumps(render.scene_json(scene), sort_keys=True, indent=2) + "\n"
            fh, close = _open_out(cfg, binary=False)
            fh.write(payload)
        else:
            fh, close = _open_out(cfg, binary=True)
            fh.write(render.render_svg(scene))
        if close:
            fh.close()
        return 0

    if cfg.construction == "triangles":
        if cfg.format == "csv":
            print("error: csv output needs a vertex chain; "
                  "the triangles construction produces regions", file=sys.stderr)
            return 2
        tris = construct.generate_triangles(cfg.n)
        if cfg.format == "svg":
            scene = render.Scene((render.triangles_layer(tris, float(3 ** cfg.n)),))
            fh, close = _open_out(cfg, binary=True)
            fh.write(render.render_svg(scene))
        else:
            blob = {
                "schema": REPORT_SCHEMA,
                "config": cfg.echo(),
                "triangles": [[t.p.a, t.p.b, t.u.a, t.u.b] for t in tris],
            }
            fh, close = _open_out(cfg, binary=False)
            fh.write(json.dumps(blob, sort_keys=True, indent=2) + "\n")
        if close:
            fh.close()
        return 0

    if cfg.format == "csv":
        fh, close = _open_out(cfg, binary=False)
        if cfg.construction == "numeric":
            # stream straight from the recurrence; nothing is materialized
            stream = ((v.a, v.b) for v in construct.z_stream(4 ** cfg.n + 1))
        else:
            stream = iter(_generate_polyline(cfg).as_pairs())
        construct.write_csv(stream, fh)
        if close:
            fh.close()
        return 0

    poly = _generate_polyline(cfg)
    if cfg.format == "svg":
        fh, close = _open_out(cfg, binary=True)
        fh.write(render.render_svg(render.polyline_scene(poly)))
    else:
        blob = {
            "schema": REPORT_SCHEMA,
            "config": cfg.echo(),
            "polyline": construct.polyline_json(poly, cfg.construction),
        }
        fh, close = _open_out(cfg, binary=False)
        fh.write(json.dumps(blob, sort_keys=True, indent=2) + "\n")
    if close:
        fh.close()
    return 0


# ---------------------------------------------------------------------------
# verify


def _check_construction_equivalence(cfg: RunConfig) -> Dict:
    expected = f"identical vertex chains for segments/numeric/lsystem, n <= {cfg.n}"
    for k in range(cfg.n + 1):
        seg = construct.generate_segments(k).as_pairs()
        num = construct.generate_numeric(k).as_pairs()
        lsy = construct.turtle_run(construct.rewrite_lsystem(k), scale_exp=k).as_pairs()
        if cfg.inject_fault and k == cfg.n and len(num) > 1:
            a, b = num[1]
            num[1] = (a + 1, b)
        if not (seg == num == lsy):
            first = next(i for i in range(len(seg))
                         if not (seg[i] == num[i] == lsy[i]))
            return {"name": "construction_equivalence", "passed": False,
                    "expected": expected,
                    "actual": f"chains diverge at iterate {k}, vertex {first}"}
    return {"name": "construction_equivalence", "passed": True,
            "expected": expected, "actual": "identical"}


def _check_length(cfg: RunConfig) -> Dict:
    for k in range(cfg.n + 1):
        got = analyze.length_exact(k)
        want = analyze.length_closed_form(k)
        if got != want:
            return {"name": "length_closed_form", "passed": False,
                    "expected": _scalar_str(want), "actual": _scalar_str(got)}
    return {"name": "length_closed_form", "passed": True,
            "expected": f"(1 + 1/sqrt(3))**k for k <= {cfg.n}", "actual": "exact match"}


def _check_areas(cfg: RunConfig) -> Dict:
    quarter = SqrtThreeScalar(0, Fraction(1, 4))
    for k in range(cfg.n + 1):
        tri = analyze.tri_area_exact(k)
        if tri != analyze.tri_area_closed_form(k):
            return {"name": "area_closed_forms", "passed": False,
                    "expected": _scalar_str(analyze.tri_area_closed_form(k)),
                    "actual": _scalar_str(tri)}
        lhs = analyze.curve_area_exact(k) * SqrtThreeScalar(3) + tri
        if lhs != quarter:
            return {"name": "area_closed_forms", "passed": False,
                    "expected": "3*A_k + T_k = sqrt(3)/4",
                    "actual": _scalar_str(lhs)}
    return {"name": "area_closed_forms", "passed": True,
            "expected": f"T_k = (sqrt(3)/4)(2/3)**k and 3*A_k + T_k = sqrt(3)/4 for k <= {cfg.n}",
            "actual": "exact match"}


def _check_height(cfg: RunConfig) -> Dict:
    for k in range(cfg.n + 1):
        got, _, _ = analyze.height(k)
        want = analyze.height_closed_form(k)
        if got != want:
            return {"name": "height_closed_form", "passed": False,
                    "expected": _scalar_str(want), "actual": _scalar_str(got)}
    return {"name": "height_closed_form", "passed": True,
            "expected": f"0, 1/(2*sqrt(3)), then 2/(3*sqrt(3)) for k <= {cfg.n}",
            "actual": "exact match"}


def _check_centroid(cfg: RunConfig) -> Dict:
    want = QOmega(Fraction(59, 111), Fraction(17, 111))
    got = analyze.centroid_solve()
    ok = got == want
    return {"name": "centroid", "passed": ok,
            "expected": _qomega_str(want), "actual": _qomega_str(got)}


def _check_volume(cfg: RunConfig) -> Dict:
    got = analyze.revolution_volume()
    want = Fraction(17, 444)
    return {"name": "revolution_volume", "passed": got == want,
            "expected": f"{want}*pi", "actual": f"{got}*pi"}


def _loop_counts(n: int) -> List[int]:
    # all loops at these depths are outermost: 0, 0, 1, 4, 13, 40, ...
    counts = []
    for k in range(n + 1):
        counts.append(0 if k < 2 else 3 * counts[-1] + 1)
    return counts


def _check_loops(cfg: RunConfig) -> Dict:
    cap = min(cfg.n, 5)
    want = _loop_counts(cap)
    for k in range(cap + 1):
        poly = construct.generate_segments(k)
        got = len(analyze.detect_loops(poly))
        if got != want[k]:
            return {"name": "loop_properties", "passed": False,
                    "expected": f"{want[k]} loops at n={k}", "actual": f"{got} loops"}
        pruned = analyze.remove_loops(poly).as_pairs()
        if len(set(pruned)) != len(pruned):
            return {"name": "loop_properties", "passed": False,
                    "expected": f"distinct vertices after loop removal at n={k}",
                    "actual": "repeated vertex"}
    return {"name": "loop_properties", "passed": True,
            "expected": f"loop counts {want} and loop-free chains for n <= {cap}",
            "actual": "match"}


def _check_bounds(cfg: RunConfig) -> Dict:
    cap = min(cfg.n, 8)
    for k in range(1, cap + 1):
        lo, c, hi = analyze.curve_c_bounds(k)
        if not (lo <= c <= hi):
            return {"name": "curve_c_bounds", "passed": False,
                    "expected": f"{_scalar_str(lo)} <= c_{k} <= {_scalar_str(hi)}",
                    "actual": _scalar_str(c)}
    return {"name": "curve_c_bounds", "passed": True,
            "expected": f"(1/2 + 1/sqrt(3))**k <= c_k <= (1 + 1/sqrt(3))**k for k <= {cap}",
            "actual": "bounds hold"}


def _check_dimension(cfg: RunConfig) -> Dict:
    got = analyze.hausdorff_dimension(cfg.tol)
    want = analyze.dimension_closed_form()
    ok = abs(got - want) < 1e-10 and abs(got - 1.5187) < 5e-4
    return {"name": "dimension", "passed": ok,
            "expected": f"{want!r}", "actual": f"{got!r}"}


CHECKS: List[Tuple[str, Callable[[RunConfig], Dict]]] = [
    ("construction_equivalence", _check_construction_equivalence),
    ("length_closed_form", _check_length),
    ("area_closed_forms", _check_areas),
    ("height_closed_form", _check_height),
    ("centroid", _check_centroid),
    ("revolution_volume", _check_volume),
    ("loop_properties", _check_loops),
    ("curve_c_bounds", _check_bounds),
    ("dimension", _check_dimension),
]

CHECK_NAMES = tuple(name for name, _ in CHECKS)


def cmd_verify(cfg: RunConfig) -> int:
    selected = cfg.only if cfg.only else list(CHECK_NAMES)
    results = []
    for name, fn in CHECKS:
        if name not in selected:
            continue
        results.append(fn(cfg))
    passed = all(r["passed"] for r in results)
    report = {
        "schema": REPORT_SCHEMA,
        "config": cfg.echo(),
        "checks": results,
        "passed": passed,
    }
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if cfg.output is None:
        sys.stdout.write(payload)
    else:
        with open(cfg.output, "w") as fh:
            fh.write(payload)
    for r in results:
        tag = "ok  " if r["passed"] else "FAIL"
        print(f"{tag} {r['name']}: {r['actual']}", file=sys.stderr)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# tessellate


def cmd_tessellate(cfg: RunConfig) -> int:
    if cfg.scheme in tiling.PERIODIC_KINDS:
        window = tiling.unit_window(*cfg.window)
        cov = tiling.cover_periodic(cfg.scheme, window, cfg.n, validate=False)
    else:
        if cfg.k_range is None:
            cfg.k_range = (-2, 1)
        cov = tiling.cover_scale_invariant(cfg.scheme, None, cfg.n, cfg.k_range, validate=False)
    report = tiling.check_covering(cov, samples=cfg.samples, epsilon=cfg.epsilon)

    blob = {
        "schema": COVERING_SCHEMA,
        "config": cfg.echo(),
        "covering": tiling.covering_json(cov),
        "check": report.to_json_dict(),
    }
    base = cfg.output or "covering"
    for suffix in (".json", ".svg"):
        if base.endswith(suffix):
            base = base[: -len(suffix)]
    with open(base + ".json", "w") as fh:
        fh.write(json.dumps(blob, sort_keys=True, indent=2) + "\n")
    svg = render.render_svg(render.covering_scene(cov),
                            metadata=json.dumps(report.to_json_dict(), sort_keys=True))
    with open(base + ".svg", "wb") as fh:
        fh.write(svg)

    if not report.passed:
        print(f"covering check failed: histogram {report.to_json_dict()['histogram']}",
              file=sys.stderr)
        return 1
    print(f"ok   {cfg.scheme}: {report.checked} points checked, "
          f"{report.multiplicity_one_fraction:.4%} multiplicity 1", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _parse_k_range(text: str) -> Tuple[int, int]:
    lo, _, hi = text.partition("..")
    return int(lo), int(hi)


def _parse_window(text: str) -> Tuple[int, int]:
    p, _, q = text.partition(",")
    return int(p), int(q)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kochawave",
        description="Exact constructions, invariant checks and plane coverings "
                    "for an asymmetric Koch-type curve.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write vertices or drawings of one iterate")
    gen.add_argument("--construction", choices=CONSTRUCTIONS, default="segments")
    gen.add_argument("--n", type=int, default=4, help="iteration depth (default 4)")
    gen.add_argument("--format", choices=FORMATS, default="svg")
    gen.add_argument("--output", default=None, help="output file (default: stdout)")
    gen.add_argument("--preset", choices=tuple(render.PRESETS), default=None,
                     help="render a named gallery scene instead of a single iterate")
    gen.add_argument("--max-n", type=int, default=DEFAULT_MAX_N,
                     help=f"guard against runaway depth (default {DEFAULT_MAX_N})")
    gen.add_argument("--allow-large", action="store_true",
                     help="lift the --max-n guard")

    ver = sub.add_parser("verify", help="run the invariant suite and report JSON")
    ver.add_argument("--n", type=int, default=5, help="depth for depth-indexed checks")
    ver.add_argument("--only", action="append", choices=CHECK_NAMES, default=None,
                     help="run a single named check (repeatable)")
    ver.add_argument("--tol", type=float, default=1e-12,
                     help="bisection tolerance for the dimension check")
    ver.add_argument("--output", default=None, help="report file (default: stdout)")
    ver.add_argument("--inject-fault", action="store_true",
                     help="perturb one vertex before comparing (harness sanity check)")

    tes = sub.add_parser("tessellate", help="build a plane covering and check it")
    tes.add_argument("--scheme", choices=tiling.TILE_KINDS, required=True)
    tes.add_argument("--n", type=int, default=2, help="tile iteration depth (default 2)")
    tes.add_argument("--k-range", type=_parse_k_range, default=None, metavar="LO..HI",
                     help="scale exponents for scale-invariant schemes (default -2..1)")
    tes.add_argument("--window", type=_parse_window, default=(3, 3), metavar="P,Q",
                     help="lattice cells for periodic schemes (default 3,3)")
    tes.add_argument("--samples", type=int, default=100_000)
    tes.add_argument("--epsilon", type=float, default=None,
                     help="boundary exclusion band (default scales with the finest tile)")
    tes.add_argument("--output", default="covering",
                     help="basename for the .json and .svg outputs")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if k != "command"}
    return RunConfig(command=args.command, **fields)


def _absorb_k_range(argv: List[str]) -> List[str]:
    # "--k-range -2..1" would be read as a flag; fold it into one token
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--k-range" and i + 1 < len(argv):
            out.append(f"--k-range={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_absorb_k_range(list(argv)))
    cfg = _config_from_args(args)

    if cfg.command == "generate":
        if cfg.n < 0:
            parser.error("--n must be nonnegative")
        if cfg.n > cfg.max_n and not cfg.allow_large:
            parser.error(f"--n {cfg.n} exceeds the cap {cfg.max_n}; "
                         "pass --allow-large to override (vertex count grows as 4**n)")
    if cfg.command == "tessellate":
        if cfg.scheme in tiling.PERIODIC_KINDS and cfg.k_range is not None:
            parser.error("--k-range applies to scale-invariant schemes only")
        if cfg.samples < 1000:
            parser.error("--samples must be at least 1000")

    handlers = {
        "generate": cmd_generate,
        "verify": cmd_verify,
        "tessellate": cmd_tessellate,
    }
    try:
        return handlers[cfg.command](cfg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (tiling.ConstructionError, tiling.CoveringError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
