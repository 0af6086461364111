"""Command-line interface.

Exit codes: 0 success (certificate/value produced), 2 nothing found or the
search window was insufficient, 1 malformed input or bad arguments.
Worker count for parallel candidate evaluation is capped by the
PATCHWORK_THREADS environment variable.
"""

from __future__ import annotations

import argparse
import math
import sys

from .errors import InsufficientWindowError, ParseError, PatchworkError
from .geometry import Ball, Pattern, make_chair, make_grid, minimal_patch, origin_ball
from .groups import (homothety_action, piecewise_action, qp_action,
                     rigid_action, translation_action)
from .metric import default_workers, delta, tiling_distance, verify_metric_axioms
from .ramsey import (OrbitSystem, brown_search, gallai_search,
                     topological_brown, verify_brown, verify_topological_brown)
from .recurrence import bt_search, local_iso_radius, lw_search, return_set, verify_bt, verify_lw
from .theta import check_g5, check_theta_axioms, theta_by_name
from . import formats
from .render import RenderSpec, render_svg, render_bt_certificate


def _action_by_name(name: str):
    try:
        return {"translation": translation_action, "rigid": rigid_action,
                "homothety": homothety_action, "piecewise": piecewise_action,
                "qp": qp_action}[name]()
    except KeyError:
        raise ParseError(f"unknown action {name!r}", where="--action") from None


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", where=path) from exc


def _emit(doc, out: str | None):
    text = formats.dumps_canonical(doc) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(p, theta=True):
    p.add_argument("--action", default="translation",
                   choices=["translation", "rigid", "homothety", "piecewise", "qp"])
    if theta:
        p.add_argument("--theta", default="identity", choices=["identity", "affine"])
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="patchwork",
                                 description="tiling metrics and recurrence certificates")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("distance", help="certified tiling distance")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    _add_common(p)

    p = sub.add_parser("delta", help="enclosing radius of admissible copies")
    p.add_argument("--tiling", required=True)
    p.add_argument("--r", type=float, required=True)
    _add_common(p, theta=False)

    p = sub.add_parser("brown", help="distorted homothetic copy search")
    p.add_argument("--coloring", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q-max", type=int, default=6)
    p.add_argument("--out", default=None)

    p = sub.add_parser("gallai", help="exact monochromatic homothet search")
    p.add_argument("--coloring", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--out", default=None)

    p = sub.add_parser("topo-brown", help="orbit-system recurrence witnesses")
    p.add_argument("--system", default="golden", choices=["golden", "torus"])
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--k-set", default="1,2,3")
    p.add_argument("--window", type=int, default=200)
    p.add_argument("--q-max", type=int, default=8)
    p.add_argument("--out", default=None)

    p = sub.add_parser("lw", help="single-scale recurrence certificate")
    p.add_argument("--tiling", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--k-max", type=int, default=8)
    _add_common(p)

    p = sub.add_parser("bt", help="all-scales recurrence certificate")
    p.add_argument("--tiling", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--lambdas", required=True,
                   help="comma-separated positive scales, e.g. 1,1.5,2.5")
    p.add_argument("--q-max", type=int, default=6)
    _add_common(p)

    p = sub.add_parser("local-iso", help="local isomorphism radius")
    p.add_argument("--tiling", required=True)
    p.add_argument("--patch", required=True, help="explicit tiling JSON used as the patch")
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--window", type=float, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("returns", help="sampled return vectors")
    p.add_argument("--tiling", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--window", type=float, default=2.0)
    _add_common(p)

    p = sub.add_parser("render", help="deterministic SVG output")
    p.add_argument("--tiling", default=None)
    p.add_argument("--radius", type=float, default=3.0)
    p.add_argument("--pattern", default=None)
    p.add_argument("--cert", default=None, help="BT certificate JSON to overlay")
    p.add_argument("--out", required=True)

    p = sub.add_parser("check-axioms", help="impact-function and action axiom suite")
    p.add_argument("--theta", default="identity", choices=["identity", "affine"])
    p.add_argument("--action", default="rigid",
                   choices=["translation", "rigid", "homothety", "piecewise"])
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--out", default=None)
    return ap


def _parse_lambdas(text: str):
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part in ("sqrt2", "sqrt(2)"):
            out.append(math.sqrt(2.0))
        else:
            out.append(float(part))
    if not out:
        raise ParseError("no scales given", where="--lambdas")
    return out


def _golden_system() -> OrbitSystem:
    phi = (math.sqrt(5.0) - 1.0) / 2.0

    def dist(a, b):
        d = abs(a - b) % 1.0
        return min(d, 1.0 - d)

    return OrbitSystem([lambda a: (a + phi) % 1.0], 0.0, dist,
                       embed=lambda a: (a,))


def _torus_system() -> OrbitSystem:
    r1, r2 = math.sqrt(2.0) - 1.0, math.sqrt(3.0) - 1.0

    def dist(a, b):
        return max(min(abs(a[i] - b[i]) % 1.0, 1.0 - abs(a[i] - b[i]) % 1.0)
                   for i in range(2))

    return OrbitSystem([lambda p: ((p[0] + r1) % 1.0, p[1]),
                        lambda p: (p[0], (p[1] + r2) % 1.0)],
                       (0.0, 0.0), dist, embed=lambda p: p)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    workers = default_workers()

    if args.cmd == "distance":
        x = formats.parse_tiling(_read(args.x))
        y = formats.parse_tiling(_read(args.y))
        iv, wit = tiling_distance(x, y, _action_by_name(args.action),
                                  theta_by_name(args.theta), workers=workers,
                                  return_witness=True)
        _emit(formats.interval_to_json(iv, wit), args.out)
        return 0

    if args.cmd == "delta":
        src = formats.parse_tiling(_read(args.tiling))
        p = minimal_patch(src, origin_ball(1.0 / args.r))
        iv = delta(p, args.r, _action_by_name(args.action))
        _emit({"lo": iv.lo, "hi": iv.hi}, args.out)
        return 0

    if args.cmd == "brown":
        c = formats.parse_coloring(_read(args.coloring))
        F = formats.parse_pattern(_read(args.pattern))
        cert = brown_search(c, F, args.k, args.q_max)
        if cert is None:
            return 2
        assert verify_brown(cert, c, F)
        _emit(formats.certificate_to_json(cert), args.out)
        return 0

    if args.cmd == "gallai":
        c = formats.parse_coloring(_read(args.coloring))
        F = formats.parse_pattern(_read(args.pattern))
        res = gallai_search(c, F, args.k_max)
        if res is None:
            return 2
        _emit({"k": res[0], "t": list(res[1])}, args.out)
        return 0

    if args.cmd == "topo-brown":
        sys_ = _golden_system() if args.system == "golden" else _torus_system()
        k_set = [int(k) for k in args.k_set.split(",") if k.strip()]
        try:
            res = topological_brown(sys_, args.eps, k_set, args.window, args.q_max)
        except InsufficientWindowError:
            return 2
        assert verify_topological_brown(sys_, res)
        _emit(formats.certificate_to_json(res), args.out)
        return 0

    if args.cmd == "lw":
        y = formats.parse_tiling(_read(args.tiling))
        F = formats.parse_pattern(_read(args.pattern))
        try:
            cert = lw_search(y, F, args.eps, args.k_max, _action_by_name(args.action))
        except InsufficientWindowError:
            return 2
        assert verify_lw(cert, y)
        _emit(formats.certificate_to_json(cert), args.out)
        return 0

    if args.cmd == "bt":
        y = formats.parse_tiling(_read(args.tiling))
        F = formats.parse_pattern(_read(args.pattern))
        try:
            cert = bt_search(y, F, args.eps, _parse_lambdas(args.lambdas),
                             _action_by_name(args.action), args.q_max)
        except InsufficientWindowError:
            return 2
        assert verify_bt(cert, y)
        _emit(formats.certificate_to_json(cert), args.out)
        return 0

    if args.cmd == "local-iso":
        y = formats.parse_tiling(_read(args.tiling))
        psrc = formats.parse_tiling(_read(args.patch))
        patch = psrc.patch if hasattr(psrc, "patch") else psrc.window(2.0)
        r = local_iso_radius(y, patch, args.eps, args.window)
        if r is None:
            return 2
        _emit({"r": r}, args.out)
        return 0

    if args.cmd == "returns":
        y = formats.parse_tiling(_read(args.tiling))
        rep = return_set(y, args.delta, args.window, _action_by_name(args.action),
                         theta_by_name(args.theta))
        doc = {"vectors": [list(v) for v in rep["vectors"]],
               "max_gap": rep["max_gap"] if math.isfinite(rep["max_gap"]) else "inf",
               "relatively_dense_in_window": rep["relatively_dense_in_window"]}
        _emit(doc, args.out)
        return 0 if rep["vectors"] else 2

    if args.cmd == "render":
        layers = {}
        viewport = ((-args.radius, -args.radius), (args.radius, args.radius))
        if args.tiling:
            src = formats.parse_tiling(_read(args.tiling))
            layers["tiles"] = src.window(args.radius)
        if args.pattern:
            layers["pattern"] = formats.parse_pattern(_read(args.pattern))
        spec = RenderSpec(viewport)
        if args.cert:
            cert = formats.parse_certificate(_read(args.cert))
            svg = render_bt_certificate(cert, layers.get("tiles"), spec)
        else:
            svg = render_svg(layers, spec)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
        return 0

    if args.cmd == "check-axioms":
        theta = theta_by_name(args.theta)
        axioms = check_theta_axioms(theta)
        g5 = check_g5(_action_by_name(args.action), theta, samples=args.samples)
        doc = {"theta": args.theta, "axioms_ok": axioms["ok"],
               "axiom_failures": [list(map(str, f)) for f in axioms["failures"]],
               "g5_ok": g5["ok"], "g5_failures": len(g5["failures"])}
        _emit(doc, args.out)
        return 0 if axioms["ok"] and g5["ok"] else 2

    return 1


def main(argv=None) -> int:
    try:
        return run(argv)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PatchworkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
