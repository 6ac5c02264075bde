"""Command-line entry point: ``mink <group> <command> [options]``.

Reports are JSON on stdout with sorted keys.  Validation failures exit
with status 2 and print a single ``error: <code>: <invariant>: <message>``
line on stderr.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .covering import (COVERED, DEFAULT_MAX_DEPTH, CoveringCertificate, certify,
                       covering_cost, cube_halfcover)
from .errors import InvariantError, MinkError
from .geometry import standard_body
from .illumination import (bezdek_parameter, convert_covering_to_lights, illuminates_body,
                           unlit_vertices)
from .steiner import degree_bound_check, degree_report, solve_smt, star_smt_test


def _load_certificate(path):
    data = io.read_json(path)
    if not isinstance(data, dict):
        raise InvariantError("certificate JSON must be an object", "schema")
    body = data.get("body")
    if isinstance(body, str):
        try:
            dim = len(data["homothets"][0]["t"])
        except (KeyError, IndexError, TypeError):
            raise InvariantError("cannot infer dimension of named body", "schema") from None
        return CoveringCertificate.from_json(data, body=standard_body(body, dim))
    return CoveringCertificate.from_json(data)


def cmd_illum_solve(args):
    K = io.load_body(args.body, args.dim)
    report = bezdek_parameter(K)
    return report.to_json()


def cmd_illum_check(args):
    K = io.load_body(args.body, args.dim)
    P = io.load_lights(args.lights)
    if P.size and P.shape[1] != K.dim:
        raise InvariantError("lights and body differ in dimension", "dimension")
    unlit = unlit_vertices(P, K)
    return {"illuminates": illuminates_body(P, K),
            "unlit": [int(i) for i in unlit],
            "unlitVertices": K.vertices.points[list(unlit)].tolist()}


def cmd_cover_verify(args):
    cert = certify(_load_certificate(args.cert), args.max_depth)
    out = cert.to_json()
    out["cost"] = covering_cost(cert)
    return out


def cmd_cover_cost(args):
    return {"cost": covering_cost(_load_certificate(args.cert))}


def cmd_cover_halfcover(args):
    cert = cube_halfcover(args.dim)
    out = cert.to_json()
    out["cost"] = covering_cost(cert)
    return out


def cmd_cover_to_lights(args):
    cert = _load_certificate(args.cert)
    if args.verify:
        cert = certify(cert)
    lights = convert_covering_to_lights(cert, eps=args.eps)
    out = lights.to_json()
    out["coveringCost"] = covering_cost(cert)
    out["bound"] = 2 * out["coveringCost"]
    out["illuminates"] = illuminates_body(lights.lights, cert.body)
    out["verdict"] = cert.verdict
    return out


def cmd_smt_solve(args):
    P = io.load_points(args.points)
    g = io.load_gauge(args.gauge, P.shape[1] if P.ndim == 2 and P.shape[1] else args.dim)
    tree, rep = solve_smt(P, g)
    out = tree.to_json()
    out["degrees"] = rep.to_json()
    if args.svg:
        from .svg import render_tree
        svg = render_tree(tree, g)
        with open(args.svg, "w") as fh:
            fh.write(svg)
    return out


def cmd_smt_star(args):
    U = io.load_points(args.directions)
    g = io.load_gauge(args.body, U.shape[1])
    return star_smt_test(g, U).to_json()


def cmd_smt_degrees(args):
    g = io.load_gauge(args.body, args.dim)
    return degree_bound_check(g, trials=args.trials, seed=args.seed).to_json()


def cmd_table(args):
    from .table import reproduce
    return reproduce(slow=args.slow)


def build_parser():
    p = argparse.ArgumentParser(prog="mink", description=__doc__.splitlines()[0],
                                formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    groups = p.add_subparsers(dest="group", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    def body_opts(sp, flag="--body", extra=""):
        sp.add_argument(flag, required=True,
                        help=f"cube, cross, hexagon{extra} or a polytope JSON file")
        sp.add_argument("--dim", type=int, default=2, help="dimension for named bodies")

    illum = groups.add_parser("illum", help="illumination parameters").add_subparsers(
        dest="cmd", required=True)
    sp = illum.add_parser("solve", help="L(K), B(K) and a witness light set",
                          formatter_class=fmt)
    body_opts(sp)
    sp.set_defaults(func=cmd_illum_solve)
    sp = illum.add_parser("check", help="does a light set illuminate K?", formatter_class=fmt)
    body_opts(sp)
    sp.add_argument("--lights", required=True, help='JSON with a "lights" list')
    sp.set_defaults(func=cmd_illum_check)

    cover = groups.add_parser("cover", help="homothetic coverings").add_subparsers(
        dest="cmd", required=True)
    sp = cover.add_parser("verify", help="certify a covering", formatter_class=fmt)
    sp.add_argument("--cert", required=True, help="certificate JSON")
    sp.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH,
                    help="bisection depth limit")
    sp.set_defaults(func=cmd_cover_verify)
    sp = cover.add_parser("cost", help="sum of 1/(1-lambda)", formatter_class=fmt)
    sp.add_argument("--cert", required=True, help="certificate JSON")
    sp.set_defaults(func=cmd_cover_cost)
    sp = cover.add_parser("cube-halfcover", help="verified half-size cube covering",
                          formatter_class=fmt)
    sp.add_argument("--dim", type=int, default=2, help="cube dimension, 2 to 4")
    sp.set_defaults(func=cmd_cover_halfcover)
    sp = cover.add_parser("to-lights", help="convert a covering to a light set",
                          formatter_class=fmt)
    sp.add_argument("--cert", required=True, help="certificate JSON")
    sp.add_argument("--eps", type=float, default=1e-6, help="shrink margin for the lights")
    sp.add_argument("--verify", action="store_true", help="certify the covering first")
    sp.set_defaults(func=cmd_cover_to_lights)

    smt = groups.add_parser("smt", help="Steiner minimal trees").add_subparsers(
        dest="cmd", required=True)
    sp = smt.add_parser("solve", help="exact SMT of a point set", formatter_class=fmt)
    sp.add_argument("--gauge", required=True,
                    help="cube, cross, hexagon, euclidean or a polytope JSON file")
    sp.add_argument("--points", required=True, help='JSON {"dim", "points"}')
    sp.add_argument("--dim", type=int, default=2, help=argparse.SUPPRESS)
    sp.add_argument("--svg", help="write a drawing (d=2 only)")
    sp.set_defaults(func=cmd_smt_solve)
    sp = smt.add_parser("star-test", help="is the star on o and U a minimal tree?",
                        formatter_class=fmt)
    sp.add_argument("--body", required=True, help="cube, cross, hexagon, euclidean or file")
    sp.add_argument("--directions", required=True, help='JSON {"dim", "points"} of unit vectors')
    sp.set_defaults(func=cmd_smt_star)
    sp = smt.add_parser("degrees", help="random check of max degree against B(K)",
                        formatter_class=fmt)
    body_opts(sp, extra=", euclidean")
    sp.add_argument("--trials", type=int, default=50, help="random instances")
    sp.add_argument("--seed", type=int, default=0, help="random seed")
    sp.set_defaults(func=cmd_smt_degrees)

    table = groups.add_parser("table", help="reproduce reference values").add_subparsers(
        dest="cmd", required=True)
    sp = table.add_parser("reproduce", help="computed versus expected rows",
                          formatter_class=fmt)
    sp.add_argument("--slow", action="store_true", help="include the 3-cube star (minutes)")
    sp.set_defaults(func=cmd_table)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except MinkError as exc:
        print(f"error: {exc.reason()}", file=sys.stderr)
        return 2
    print(io.dumps(out))
    if args.func is cmd_table and not out["allMatch"]:
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
