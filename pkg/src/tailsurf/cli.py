"""Command-line interface: trace flows, build chains and cylinders, export
JSON, render SVG figures, and run the verification suite.

All rationals on the wire are "p/q" strings in lowest terms.  Exit status is
0 on success, 1 on verification failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cylinders as cy
from .exact import format_point, format_rational, parse_point, parse_rational
from .flow import trace
from .iet import InGapError, TargetNotReachedError, build_tk, orbit_until
from .render import (
    axis_scene,
    decomposition_scene,
    render_scene,
    spine_scene,
    surface_scene,
)
from .surface import BadParametersError, GeometryError, Tail
from .verify import parse_q_range, report, run_checks


def _json_text(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _tail_from_args(args) -> Tail:
    if getattr(args, "q", None) is not None:
        return Tail.from_q(args.q)
    return Tail(parse_rational(args.r))


def _cmd_trace(args) -> int:
    tail = _tail_from_args(args)
    start = parse_point(args.start)
    slope = parse_rational(args.slope)
    t = trace(tail, start, slope, max_events=args.max_events)
    payload = t.to_json_dict()
    text = _json_text(payload)
    if args.json:
        _write(args.json, text)
    print(f"status: {t.status}")
    print(f"end: {format_point(t.end)}")
    print(f"horizontal displacement: {format_rational(t.horizontal_displacement)}")
    print("section hits: " + ", ".join(format_rational(y) for y in t.section_hits))
    return 0


def _cmd_bsc(args) -> int:
    if args.prime:
        chain = cy.build_bsc_prime(args.q, args.k)
    else:
        chain = cy.build_bsc(args.q, args.k)
    if args.json:
        _write(args.json, _json_text(chain.to_json_dict()))
    print(f"{chain.label}_{chain.k} for q={args.q}")
    print(f"pieces: {len(chain.pieces)}")
    print("y_hits: " + ", ".join(format_rational(y) for y in chain.y_hits))
    print(f"displacement: {format_rational(chain.displacement)}")
    return 0


def _cmd_cyl(args) -> int:
    cylinder = cy.build_cyl(args.q, args.k)
    if args.json:
        _write(args.json, _json_text(cylinder.to_json_dict()))
    print(f"cyl_{args.k} for q={args.q}")
    print(f"skew width: {format_rational(cylinder.skew_width)}")
    print(f"displacement: {format_rational(cylinder.horizontal_displacement)}")
    print(f"modulus: {format_rational(cylinder.modulus)}")
    print(f"area: {format_rational(cylinder.area)}")
    print(f"crossings: {cylinder.to_json_dict()['crossings']}")
    return 0


def _cmd_decompose(args) -> int:
    dec = cy.decompose(args.q, args.k_max)
    if args.json:
        _write(args.json, _json_text(dec.to_json_dict()))
    if args.svg:
        _write(args.svg, render_scene(decomposition_scene(dec)))
    ok, moduli = cy.no_parabolic(dec)
    print(f"cylinders: {len(dec.cylinders)}")
    print(f"covered area: {format_rational(dec.covered_area)}")
    print("moduli: " + ", ".join(format_rational(m) for m in moduli))
    print(f"no parabolic: {ok}")
    return 0


def _cmd_iet(args) -> int:
    T = build_tk(args.q, args.k)
    x0 = parse_rational(args.orbit)
    try:
        if args.target is not None:
            orbit = orbit_until(T, x0, parse_rational(args.target), args.max_iter)
        else:
            orbit = T.orbit(x0, args.max_iter)
    except InGapError as exc:
        print(f"in gap: {format_rational(exc.x)}", file=sys.stderr)
        return 1
    except TargetNotReachedError as exc:
        print(f"target not reached: {exc}", file=sys.stderr)
        return 1
    if args.json:
        _write(args.json, _json_text([format_rational(x) for x in orbit]))
    for x in orbit:
        print(format_rational(x))
    return 0


def _cmd_verify(args) -> int:
    q_values = parse_q_range(args.q)
    checks = run_checks(q_values, args.k_max, parallel=args.parallel)
    sys.stdout.write(report(checks))
    return 0 if all(c.passed for c in checks) else 1


def _cmd_render(args) -> int:
    tail = _tail_from_args(args)
    if args.decompose is not None:
        if tail.q is None:
            raise BadParametersError("decomposition rendering needs an integer q")
        scene = decomposition_scene(cy.decompose(tail.q, args.decompose))
    elif args.spine:
        scene = spine_scene(tail, n_squares=8)
    elif args.horizontal:
        scene = axis_scene(cy.horizontal_decomposition(tail, 6))
    elif args.vertical:
        scene = axis_scene(cy.vertical_decomposition(tail, 6))
    else:
        scene = surface_scene(tail, 6)
    _write(args.out, render_scene(scene))
    print(f"wrote {args.out}")
    return 0


def _add_surface_args(sub, require_q: bool = False):
    if require_q:
        sub.add_argument("--q", type=int, required=True, help="unit ratio r = 1/q")
    else:
        group = sub.add_mutually_exclusive_group(required=True)
        group.add_argument("--q", type=int, help="unit ratio r = 1/q")
        group.add_argument("--r", type=str, help="ratio as P/Q, 0 < r < 1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailsurf",
        description="Exact flows and cylinder decompositions on tails of shrinking squares.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", help="trace a linear flow exactly")
    _add_surface_args(p)
    p.add_argument("--start", type=str, required=True, help="start point P/Q,P/Q")
    p.add_argument("--slope", type=str, required=True, help="slope P/Q")
    p.add_argument("--max-events", type=int, default=10_000)
    p.add_argument("--json", type=str, default=None, help="write trajectory JSON here")
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("bsc", help="build a bottom chain (or its new piece)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--prime", action="store_true", help="only the new connection")
    p.add_argument("--json", type=str, default=None)
    p.set_defaults(func=_cmd_bsc)

    p = sub.add_parser("cyl", help="build one cylinder with measurements")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", type=str, default=None)
    p.set_defaults(func=_cmd_cyl)

    p = sub.add_parser("decompose", help="build cylinders 1..K and the spine")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--json", type=str, default=None)
    p.add_argument("--svg", type=str, default=None)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("iet", help="iterate the gapped section map")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--orbit", type=str, required=True, help="starting point P/Q")
    p.add_argument("--target", type=str, default=None)
    p.add_argument("--max-iter", type=int, default=64)
    p.add_argument("--json", type=str, default=None)
    p.set_defaults(func=_cmd_iet)

    p = sub.add_parser("verify", help="run the exact verification suite")
    p.add_argument("--q", type=str, required=True, help="range like 2..4, or one value")
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--parallel", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("render", help="write a deterministic SVG figure")
    _add_surface_args(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--decompose", type=int, default=None, metavar="K")
    mode.add_argument("--spine", action="store_true")
    mode.add_argument("--horizontal", action="store_true")
    mode.add_argument("--vertical", action="store_true")
    p.add_argument("--out", type=str, required=True)
    p.set_defaults(func=_cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GeometryError, InGapError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
