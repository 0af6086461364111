"""JSON formats: tilings, patterns, colorings, group elements, certificates.

Emission is canonical — keys sorted, numbers printed with 12 significant
digits — so identical objects always serialize to identical bytes and
golden tests can compare output verbatim.  ``parse(emit(x))`` is stable
after one canonicalization pass.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import ParseError, PatchworkError
from .geometry import (ChairSource, ExplicitSource, Patch, Pattern,
                       PeriodicSource, QPSource, Tile, TilingSource)
from .groups import Homothety, Piecewise, QPPair, Rigid, Translation
from .metric import DistInterval
from .ramsey import BrownCertificate, Coloring, TopoBrownResult
from .recurrence import BTCertificate, BTEntry, LWCertificate


# ---------------------------------------------------------------------------
# Canonical JSON


def _fmt_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        raise PatchworkError("cannot serialize non-finite number")
    if x == 0.0:
        x = 0.0  # normalize -0.0
    s = f"{x:.12g}"
    return s


def dumps_canonical(obj) -> str:
    """Compact JSON with sorted keys and 12-significant-digit numbers."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, (int, float, np.integer, np.floating)):
        return _fmt_number(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = obj.tolist() if isinstance(obj, np.ndarray) else obj
        return "[" + ",".join(dumps_canonical(v) for v in items) + "]"
    if isinstance(obj, dict):
        parts = []
        for k in sorted(obj.keys()):
            parts.append(json.dumps(str(k), ensure_ascii=True) + ":"
                         + dumps_canonical(obj[k]))
        return "{" + ",".join(parts) + "}"
    raise PatchworkError(f"cannot serialize {type(obj).__name__}")


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", where=f"line {exc.lineno}") from exc


def _need(doc: dict, field: str, where: str = ""):
    if field not in doc:
        raise ParseError(f"missing required field {field!r}",
                         where=where or field)
    return doc[field]


# ---------------------------------------------------------------------------
# Tilings


def tile_to_json(t: Tile) -> dict:
    d = {"outer": [list(p) for p in t.outer],
         "holes": [[list(p) for p in h] for h in t.holes]}
    if t.label is not None:
        d["label"] = t.label
    if t.class_id is not None:
        d["class"] = t.class_id
    return d


def tile_from_json(d: dict, where: str = "tiles") -> Tile:
    outer = _need(d, "outer", f"{where}.outer")
    return Tile(outer, d.get("holes", ()), label=d.get("label"),
                class_id=d.get("class"))


def tiling_to_json(src: TilingSource, explicit_radius: float = 3.0) -> dict:
    doc = {"dimension": 2}
    if isinstance(src, PeriodicSource):
        doc["kind"] = "periodic"
        doc["tiles"] = [tile_to_json(t) for t in src.fundamental]
        doc["lattice"] = [list(r) for r in src.lattice]
    elif isinstance(src, ChairSource):
        doc["kind"] = "substitution"
        doc["tiles"] = []
        doc["rule"] = {"name": "chair", "levels": src.levels}
    elif isinstance(src, QPSource):
        doc["kind"] = "explicit"
        doc["tiles"] = [tile_to_json(t) for t in src.window(explicit_radius)]
    elif isinstance(src, ExplicitSource):
        doc["kind"] = "explicit"
        doc["tiles"] = [tile_to_json(t) for t in src.patch]
    else:
        doc["kind"] = "explicit"
        doc["tiles"] = [tile_to_json(t) for t in src.window(explicit_radius)]
    return doc


def parse_tiling(text: str) -> TilingSource:
    doc = _loads(text)
    dim = _need(doc, "dimension")
    if dim != 2:
        raise ParseError(f"only dimension 2 is supported, got {dim}", where="dimension")
    kind = _need(doc, "kind")
    if kind == "periodic":
        tiles = [tile_from_json(t, f"tiles[{i}]")
                 for i, t in enumerate(_need(doc, "tiles"))]
        lattice = _need(doc, "lattice")
        return PeriodicSource(Patch(tiles), lattice)
    if kind == "explicit":
        tiles = [tile_from_json(t, f"tiles[{i}]")
                 for i, t in enumerate(_need(doc, "tiles"))]
        if not tiles:
            raise ParseError("explicit tiling needs at least one tile", where="tiles")
        return ExplicitSource(Patch(tiles))
    if kind == "substitution":
        rule = _need(doc, "rule")
        name = _need(rule, "name", "rule.name")
        if name != "chair":
            raise ParseError(f"unknown substitution rule {name!r}", where="rule.name")
        return ChairSource(int(rule.get("levels", 6)))
    raise ParseError(f"unknown tiling kind {kind!r}", where="kind")


# ---------------------------------------------------------------------------
# Patterns / colorings


def pattern_to_json(p: Pattern) -> dict:
    return {"points": [list(pt) for pt in p.points]}


def parse_pattern(text: str) -> Pattern:
    doc = _loads(text)
    pts = _need(doc, "points")
    try:
        return Pattern(tuple(tuple(p) if isinstance(p, (list, tuple)) else (p,)
                             for p in pts))
    except PatchworkError as exc:
        raise ParseError(str(exc), where="points") from exc


def coloring_to_json(c: Coloring) -> dict:
    return {"dim": c.dim, "shape": list(c.shape),
            "colors": [int(v) for v in c.colors.ravel()]}


def parse_coloring(text: str) -> Coloring:
    doc = _loads(text)
    dim = int(_need(doc, "dim"))
    shape = _need(doc, "shape")
    colors = np.asarray(_need(doc, "colors"))
    try:
        return Coloring(dim, tuple(shape), colors)
    except (PatchworkError, ValueError) as exc:
        raise ParseError(str(exc), where="colors") from exc


# ---------------------------------------------------------------------------
# Group elements


def element_to_json(g) -> dict:
    if isinstance(g, Translation):
        return {"kind": "translation", "v": list(g.v)}
    if isinstance(g, Rigid):
        return {"kind": "rigid", "angle": g.angle, "v": list(g.v)}
    if isinstance(g, Homothety):
        return {"kind": "homothety", "scale": g.scale, "v": list(g.v)}
    if isinstance(g, QPPair):
        return {"kind": "qp", "vq": list(g.vq), "vp": list(g.vp)}
    if isinstance(g, Piecewise):
        return {"kind": "piecewise", "base": g.base_kind,
                "components": {str(i): element_to_json(c) for i, c in g.components}}
    raise PatchworkError(f"cannot serialize element {type(g).__name__}")


def element_from_json(d: dict, where: str = "element"):
    kind = _need(d, "kind", f"{where}.kind")
    if kind == "translation":
        return Translation(tuple(_need(d, "v", f"{where}.v")))
    if kind == "rigid":
        return Rigid(float(_need(d, "angle", f"{where}.angle")),
                     tuple(_need(d, "v", f"{where}.v")))
    if kind == "homothety":
        return Homothety(float(_need(d, "scale", f"{where}.scale")),
                         tuple(_need(d, "v", f"{where}.v")))
    if kind == "qp":
        return QPPair(tuple(_need(d, "vq", f"{where}.vq")),
                      tuple(_need(d, "vp", f"{where}.vp")))
    if kind == "piecewise":
        comps = _need(d, "components", f"{where}.components")
        return Piecewise(tuple((int(i), element_from_json(c, f"{where}.components[{i}]"))
                               for i, c in comps.items()),
                         d.get("base", "translation"))
    raise ParseError(f"unknown element kind {kind!r}", where=f"{where}.kind")


def parse_element(text: str):
    return element_from_json(_loads(text))


# ---------------------------------------------------------------------------
# Certificates and results


def interval_to_json(iv: DistInterval, witness=None) -> dict:
    d = {"lo": iv.lo, "hi": iv.hi}
    if witness is not None:
        d["witness"] = witness
    return d


def patch_to_json(p: Patch) -> dict:
    return {"tiles": [tile_to_json(t) for t in p]}


def certificate_to_json(cert) -> dict:
    if isinstance(cert, BrownCertificate):
        return {"type": "brown", "q": cert.q, "k": cert.k, "t": list(cert.t),
                "vs": [list(v) for v in cert.vs], "color": int(cert.color)}
    if isinstance(cert, LWCertificate):
        return {"type": "lw", "eps": cert.eps, "k": cert.k, "u": list(cert.u),
                "pattern": pattern_to_json(cert.F),
                "gs": [element_to_json(g) for g in cert.gs],
                "y_prime": patch_to_json(cert.y_prime)}
    if isinstance(cert, BTCertificate):
        return {"type": "bt", "eps": cert.eps, "q": cert.q,
                "pattern": pattern_to_json(cert.F),
                "y_prime": patch_to_json(cert.y_prime),
                "entries": [{"lambda": e.lam, "t": list(e.t),
                             "alphas": [list(a) for a in e.alphas],
                             "gs": [element_to_json(g) for g in e.gs]}
                            for e in cert.entries]}
    if isinstance(cert, TopoBrownResult):
        return {"type": "topo-brown", "q": cert.q, "brown_q": cert.brown_q,
                "eps": cert.eps, "color": int(cert.color) if isinstance(cert.color, (int, np.integer)) else str(cert.color),
                "witnesses": [{"k": w.k, "t": list(w.t), "v0": list(w.v0),
                               "us": [list(u) for u in w.us],
                               "base_exp": list(w.base_exp),
                               "image_exps": [list(e) for e in w.image_exps]}
                              for w in cert.witnesses]}
    raise PatchworkError(f"cannot serialize certificate {type(cert).__name__}")


def emit_certificate(cert) -> str:
    return dumps_canonical(certificate_to_json(cert))


def parse_certificate(text: str):
    doc = _loads(text)
    kind = _need(doc, "type")
    if kind == "brown":
        return BrownCertificate(int(_need(doc, "q")), int(_need(doc, "k")),
                                tuple(int(v) for v in _need(doc, "t")),
                                tuple(tuple(int(x) for x in v) for v in _need(doc, "vs")),
                                _need(doc, "color"))
    if kind == "lw":
        patt = Pattern(tuple(tuple(p) for p in _need(_need(doc, "pattern"), "points")))
        tiles = [tile_from_json(t, f"y_prime.tiles[{i}]")
                 for i, t in enumerate(_need(_need(doc, "y_prime"), "tiles"))]
        return LWCertificate(Patch(tiles), float(_need(doc, "eps")),
                             int(_need(doc, "k")), tuple(_need(doc, "u")),
                             tuple(element_from_json(g, f"gs[{i}]")
                                   for i, g in enumerate(_need(doc, "gs"))), patt)
    if kind == "bt":
        patt = Pattern(tuple(tuple(p) for p in _need(_need(doc, "pattern"), "points")))
        tiles = [tile_from_json(t, f"y_prime.tiles[{i}]")
                 for i, t in enumerate(_need(_need(doc, "y_prime"), "tiles"))]
        entries = tuple(
            BTEntry(float(_need(e, "lambda", "entries.lambda")), tuple(_need(e, "t")),
                    tuple(tuple(float(x) for x in a) for a in _need(e, "alphas")),
                    tuple(element_from_json(g) for g in _need(e, "gs")))
            for e in _need(doc, "entries"))
        return BTCertificate(Patch(tiles), float(_need(doc, "eps")),
                             int(_need(doc, "q")), patt, entries)
    raise ParseError(f"unknown certificate type {kind!r}", where="type")
