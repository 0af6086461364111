"""Right-invariant metric groups acting on patches.

Element variants: translations, rigid motions (direct isometries),
homotheties, paired translations for the Q/P fixture, and piecewise
collections indexed by a patch's canonical tile order.  Metrics:

* rigid motions: ``d(g, h) = max_{|v|<=1} |g^-1(v) - h^-1(v)|``, which in
  the plane collapses to ``2|sin(dtheta/2)| + |b|``;
* homotheties: the auxiliary ``max(|ln(l/m)|, |g - h|)`` plus the
  right-invariant sup-construction computed as a certified interval;
* piecewise: sup of component distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, IndexMismatchError, PatchworkError
from .geometry import EPS_GEOM, Patch, Tile


def _vec(v) -> tuple[float, float]:
    a = np.asarray(v, dtype=float).reshape(2)
    return (float(a[0]), float(a[1]))


@dataclass(frozen=True)
class Translation:
    v: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "v", _vec(self.v))

    def __call__(self, p):
        return (p[0] + self.v[0], p[1] + self.v[1])


@dataclass(frozen=True)
class Rigid:
    """Direct isometry ``p -> R(angle) p + v``."""

    angle: float
    v: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "angle", float(self.angle))
        object.__setattr__(self, "v", _vec(self.v))

    def __call__(self, p):
        c, s = math.cos(self.angle), math.sin(self.angle)
        return (c * p[0] - s * p[1] + self.v[0], s * p[0] + c * p[1] + self.v[1])


@dataclass(frozen=True)
class Homothety:
    """Scaling map ``p -> scale * p + v`` with scale > 0."""

    scale: float
    v: tuple[float, float]

    def __post_init__(self):
        if self.scale <= 0:
            raise PatchworkError(f"homothety scale must be positive, got {self.scale}")
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "v", _vec(self.v))

    def __call__(self, p):
        return (self.scale * p[0] + self.v[0], self.scale * p[1] + self.v[1])


@dataclass(frozen=True)
class QPPair:
    """Paired translations (outer square, inner square) for the Q/P tiles."""

    vq: tuple[float, float]
    vp: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "vq", _vec(self.vq))
        object.__setattr__(self, "vp", _vec(self.vp))


@dataclass(frozen=True)
class Piecewise:
    """One base element per tile index of a canonically ordered patch."""

    components: tuple  # tuple of (index, element), sorted by index
    base_kind: str = "translation"

    def __post_init__(self):
        comps = tuple(sorted(((int(i), g) for i, g in self.components), key=lambda p: p[0]))
        kinds = {type(g).__name__ for _, g in comps}
        allowed = {"Translation": {"Translation"},
                   "Rigid": {"Rigid", "Translation"},
                   "Homothety": {"Homothety", "Translation"},
                   "QPPair": {"QPPair", "Translation"}}
        base = {"translation": "Translation", "rigid": "Rigid",
                "homothety": "Homothety", "qp": "QPPair"}[self.base_kind]
        if not kinds <= allowed[base]:
            raise PatchworkError(f"piecewise components {kinds} do not fit base kind {self.base_kind}")
        object.__setattr__(self, "components", comps)

    @property
    def index_set(self):
        return tuple(i for i, _ in self.components)

    def component(self, i):
        for j, g in self.components:
            if j == i:
                return g
        raise IndexMismatchError(f"no component for index {i}")


GroupElement = (Translation, Rigid, Homothety, QPPair, Piecewise)

IDENTITY = Translation((0.0, 0.0))


def _as_rigid(g) -> Rigid:
    if isinstance(g, Rigid):
        return g
    if isinstance(g, Translation):
        return Rigid(0.0, g.v)
    raise PatchworkError(f"expected a rigid motion or translation, got {type(g).__name__}")


def compose(g, h):
    """The element acting as ``g`` after ``h``."""
    if isinstance(g, Piecewise) or isinstance(h, Piecewise):
        if not (isinstance(g, Piecewise) and isinstance(h, Piecewise)):
            raise IndexMismatchError("cannot compose piecewise with non-piecewise")
        if g.index_set != h.index_set:
            raise IndexMismatchError(
                f"piecewise index sets differ: {g.index_set} vs {h.index_set}")
        return Piecewise(tuple((i, compose(cg, h.component(i))) for i, cg in g.components),
                         g.base_kind)
    if isinstance(g, Translation) and isinstance(h, Translation):
        return Translation((g.v[0] + h.v[0], g.v[1] + h.v[1]))
    if isinstance(g, QPPair) or isinstance(h, QPPair):
        gq = g if isinstance(g, QPPair) else QPPair(g.v, g.v)
        hq = h if isinstance(h, QPPair) else QPPair(h.v, h.v)
        return QPPair((gq.vq[0] + hq.vq[0], gq.vq[1] + hq.vq[1]),
                      (gq.vp[0] + hq.vp[0], gq.vp[1] + hq.vp[1]))
    if isinstance(g, Homothety) or isinstance(h, Homothety):
        gh = g if isinstance(g, Homothety) else Homothety(1.0, g.v)
        hh = h if isinstance(h, Homothety) else Homothety(1.0, h.v)
        return Homothety(gh.scale * hh.scale,
                         (gh.scale * hh.v[0] + gh.v[0], gh.scale * hh.v[1] + gh.v[1]))
    rg, rh = _as_rigid(g), _as_rigid(h)
    c, s = math.cos(rg.angle), math.sin(rg.angle)
    return Rigid(rg.angle + rh.angle,
                 (c * rh.v[0] - s * rh.v[1] + rg.v[0], s * rh.v[0] + c * rh.v[1] + rg.v[1]))


def inverse(g):
    if isinstance(g, Translation):
        return Translation((-g.v[0], -g.v[1]))
    if isinstance(g, Rigid):
        c, s = math.cos(g.angle), math.sin(g.angle)
        return Rigid(-g.angle, (-(c * g.v[0] + s * g.v[1]), -(-s * g.v[0] + c * g.v[1])))
    if isinstance(g, Homothety):
        inv = 1.0 / g.scale
        return Homothety(inv, (-inv * g.v[0], -inv * g.v[1]))
    if isinstance(g, QPPair):
        return QPPair((-g.vq[0], -g.vq[1]), (-g.vp[0], -g.vp[1]))
    if isinstance(g, Piecewise):
        return Piecewise(tuple((i, inverse(c)) for i, c in g.components), g.base_kind)
    raise PatchworkError(f"cannot invert {type(g).__name__}")


# ---------------------------------------------------------------------------
# Metrics


def dist_rigid(g, h) -> float:
    """Right-invariant metric on rigid motions, closed form in the plane.

    Equals ``max_{|v|<=1} |g^-1(v) - h^-1(v)|``: the rotation parts of the
    inverses contribute ``2|sin(dtheta/2)|`` and the translation parts add
    their difference's norm (the two maxima align).
    """
    gi, hi = inverse(_as_rigid(g)), inverse(_as_rigid(h))
    dtheta = gi.angle - hi.angle
    b = (gi.v[0] - hi.v[0], gi.v[1] - hi.v[1])
    return 2.0 * abs(math.sin(dtheta / 2.0)) + math.hypot(*b)


def dist_homothety_tilde(g, h) -> float:
    """Auxiliary (non right-invariant) metric on homotheties."""
    gh = g if isinstance(g, Homothety) else Homothety(1.0, _as_rigid(g).v)
    hh = h if isinstance(h, Homothety) else Homothety(1.0, _as_rigid(h).v)
    return max(abs(math.log(gh.scale / hh.scale)),
               math.hypot(gh.v[0] - hh.v[0], gh.v[1] - hh.v[1]))


def _homothety_F(g: Homothety) -> float:
    return max(1.0 - dist_homothety_tilde(IDENTITY, g), 0.0)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __contains__(self, x):
        return self.lo - 1e-15 <= x <= self.hi + 1e-15

    @property
    def width(self):
        return self.hi - self.lo


def _truncated_tent_gap_vec(a: float, ca, b: float, cb):
    """Exact ``sup_m [min(ca, t_a(m)) - min(cb, t_b(m))]``, vectorised.

    ``t_c(m) = max(1 - |c + m|, 0)`` is the unit tent centred at ``-c``
    and ``ca, cb`` are truncation heights in [0, 1].  The objective is
    piecewise linear in ``m`` and vanishes for large ``|m|``, so the
    supremum is attained at a breakpoint (or is 0).
    """
    ca = np.asarray(ca, dtype=float)
    cb = np.asarray(cb, dtype=float)
    best = np.zeros(np.broadcast(ca, cb).shape)
    bps = ((-a) + np.zeros_like(best), (-a - 1.0) + np.zeros_like(best),
           (-a + 1.0) + np.zeros_like(best), -a - (1.0 - ca), -a + (1.0 - ca),
           (-b) + np.zeros_like(best), (-b - 1.0) + np.zeros_like(best),
           (-b + 1.0) + np.zeros_like(best), -b - (1.0 - cb), -b + (1.0 - cb))
    for m in bps:
        fa = np.minimum(ca, np.maximum(1.0 - np.abs(a + m), 0.0))
        fb = np.minimum(cb, np.maximum(1.0 - np.abs(b + m), 0.0))
        np.maximum(best, fa - fb, out=best)
    return best


def dist_homothety(g, h, tol: float = 1e-4) -> Interval:
    """Certified interval for the right-invariant homothety metric.

    The metric is ``sup_f |F(g f) - F(h f)|`` with
    ``F(e) = max(1 - d~(Id, e), 0)``.  Writing ``f = (e^m, w)``, the two
    F-terms depend on ``w`` only through ``(r1, r2) = (|w + c_g|,
    |w + c_h|)``, and the supremum over ``m`` for fixed ``(r1, r2)`` is
    a difference of truncated tents, computed exactly at its
    breakpoints.  The achievable ``(r1, r2)`` form the band
    ``|r1 - r2| <= delta <= r1 + r2`` where ``delta = |c_g - c_h|``.
    The one-sided gap is decreasing in ``r1`` and increasing in ``r2``,
    so its supremum over the band sits on the boundary ray
    ``r2 = r1 + delta`` (and the mirrored ray for the other side).
    Each ray is a 1-D Lipschitz problem (constant ``s_g + s_h``) solved
    by a grid fine enough to certify the interval width ``<= tol``.
    """
    if tol <= 0:
        raise PatchworkError("tolerance must be positive")
    gh = g if isinstance(g, Homothety) else Homothety(1.0, _as_rigid(g).v)
    hh = h if isinstance(h, Homothety) else Homothety(1.0, _as_rigid(h).v)

    a, b = math.log(gh.scale), math.log(hh.scale)
    sg, sh = gh.scale, hh.scale
    cg = (gh.v[0] / sg, gh.v[1] / sg)
    ch = (hh.v[0] / sh, hh.v[1] / sh)
    delta = math.hypot(cg[0] - ch[0], cg[1] - ch[1])

    # f = g^-1 sends the g-term to 1; if the h-term vanishes there the
    # supremum is exactly 1 (and symmetrically for h).
    if max(abs(a - b), sh * delta) >= 1.0 or max(abs(a - b), sg * delta) >= 1.0:
        return Interval(1.0, 1.0)

    lip = sg + sh
    lo = 0.0
    hi = 0.0
    for (aa, sa, bb, sb) in ((a, sg, b, sh), (b, sh, a, sg)):
        # Ray r_a = r, r_b = r + delta for r in [0, 1/sa]; beyond that
        # the a-term's height is 0 and the gap is non-positive.
        span = 1.0 / sa
        n = max(int(math.ceil(span * lip / tol)) + 1, 2)
        r = np.linspace(0.0, span, n)
        vals = _truncated_tent_gap_vec(aa, 1.0 - sa * r,
                                       bb, np.maximum(1.0 - sb * (r + delta), 0.0))
        m = float(np.max(vals))
        step = span / (n - 1)
        lo = max(lo, m)
        hi = max(hi, m + lip * step / 2.0)
    hi = min(1.0, hi)
    return Interval(min(lo, hi), hi)


def _base_dist(kind: str, g, h) -> float:
    if kind in ("translation", "rigid"):
        return dist_rigid(g, h)
    if kind == "homothety":
        return dist_homothety(g, h).hi
    if kind == "qp":
        gq = g if isinstance(g, QPPair) else QPPair(g.v, g.v)
        hq = h if isinstance(h, QPPair) else QPPair(h.v, h.v)
        return max(math.hypot(gq.vq[0] - hq.vq[0], gq.vq[1] - hq.vq[1]),
                   math.hypot(gq.vp[0] - hq.vp[0], gq.vp[1] - hq.vp[1]))
    raise PatchworkError(f"unknown base kind {kind}")


def dist_piecewise(g: Piecewise, h: Piecewise) -> float:
    """Sup of component distances; index sets must agree exactly."""
    if not (isinstance(g, Piecewise) and isinstance(h, Piecewise)):
        raise PatchworkError("dist_piecewise expects piecewise elements")
    if g.index_set != h.index_set:
        raise IndexMismatchError(
            f"piecewise index sets differ: {g.index_set} vs {h.index_set}")
    return max(_base_dist(g.base_kind, cg, h.component(i)) for i, cg in g.components)


def norm(g) -> float:
    """Size of an element: distance to the identity of its group."""
    if isinstance(g, Piecewise):
        ident = Piecewise(tuple((i, IDENTITY) for i, _ in g.components), g.base_kind)
        return dist_piecewise(g, ident)
    if isinstance(g, (Translation, Rigid)):
        return dist_rigid(g, IDENTITY)
    if isinstance(g, Homothety):
        return dist_homothety(g, IDENTITY).hi
    if isinstance(g, QPPair):
        return _base_dist("qp", g, QPPair((0, 0), (0, 0)))
    raise PatchworkError(f"no norm for {type(g).__name__}")


# ---------------------------------------------------------------------------
# Actions


class ActionStructure:
    """Admissibility, application and restriction for one group family.

    ``kind`` selects the equivalence relation: a single group acting on
    whole patches ('translation', 'rigid', 'homothety'), per-tile
    collections ('piecewise'), or the Q/P paired-translation family
    ('qp').
    """

    def __init__(self, kind: str, base_kind: str | None = None,
                 max_tile_diameter: float | None = None):
        if kind not in ("translation", "rigid", "homothety", "piecewise", "qp"):
            raise PatchworkError(f"unknown action kind {kind}")
        self.kind = kind
        self.base_kind = base_kind or ("translation" if kind == "piecewise" else kind)
        self.max_tile_diameter = max_tile_diameter

    # -- metric hooks

    def dist(self, g, h) -> float:
        if isinstance(g, Piecewise):
            return dist_piecewise(g, h)
        if self.kind in ("translation", "rigid"):
            return dist_rigid(g, h)
        if self.kind == "homothety":
            return dist_homothety(g, h).hi
        if self.kind == "qp":
            return _base_dist("qp", g, h)
        return _base_dist(self.base_kind, g, h)

    def norm(self, g) -> float:
        return norm(g)

    def identity_for(self, patch: Patch):
        if self.kind in ("piecewise", "qp"):
            return Piecewise(tuple((i, IDENTITY) for i in range(len(patch))),
                             "qp" if self.kind == "qp" else self.base_kind)
        return IDENTITY

    # -- admissibility / application

    def check_admissible(self, g, patch: Patch):
        if self.kind in ("translation", "rigid", "homothety"):
            if isinstance(g, Piecewise):
                raise AdmissibilityError(f"{self.kind} action takes single elements")
            if self.kind == "translation" and not isinstance(g, Translation):
                raise AdmissibilityError("translation action admits only translations")
            if self.kind == "rigid" and not isinstance(g, (Translation, Rigid)):
                raise AdmissibilityError("rigid action admits only direct isometries")
            if self.kind == "homothety" and not isinstance(g, (Translation, Homothety)):
                raise AdmissibilityError("homothety action admits only homotheties")
            return
        if not isinstance(g, Piecewise):
            raise AdmissibilityError(f"{self.kind} action takes piecewise elements")
        if g.index_set != tuple(range(len(patch))):
            raise IndexMismatchError(
                f"piecewise element indexed {g.index_set} does not fit a "
                f"{len(patch)}-tile patch")
        if self.kind == "qp":
            for i, comp in g.components:
                tile = patch[i]
                qp = tile.meta.get("qp")
                if qp is None:
                    raise AdmissibilityError(f"tile {i} carries no Q/P structure")
                if qp[0] == "annulus":
                    if not isinstance(comp, QPPair):
                        comp = QPPair(comp.v, comp.v)
                    _, qc, pc = qp
                    q_new = (qc[0] + comp.vq[0], qc[1] + comp.vq[1])
                    p_new = (pc[0] + comp.vp[0], pc[1] + comp.vp[1])
                    gap = math.hypot(q_new[0] - p_new[0], q_new[1] - p_new[1])
                    if gap > 1.0 / 6.0 + 1e-12:
                        raise AdmissibilityError(
                            f"paired translation moves centers {gap:.4f} apart (> 1/6)")
                elif not isinstance(comp, Translation):
                    raise AdmissibilityError("P tiles move by plain translations")

    def apply(self, g, patch: Patch) -> Patch:
        """Transformed patch; raises AdmissibilityError on rejection."""
        self.check_admissible(g, patch)
        if self.kind in ("translation", "rigid", "homothety"):
            if isinstance(g, Translation):
                return patch.translated(g.v)
            return Patch([t.transformed(g) for t in patch])
        tiles = []
        for i, comp in g.components:
            tile = patch[i]
            if isinstance(comp, QPPair):
                moved = Tile(tile.outer + np.asarray(comp.vq),
                             [h + np.asarray(comp.vp) for h in tile.holes],
                             label=tile.label, class_id=tile.class_id, meta=tile.meta)
                if "qp" in moved.meta:
                    _, qc, pc = tile.meta["qp"]
                    moved.meta["qp"] = ("annulus",
                                        (qc[0] + comp.vq[0], qc[1] + comp.vq[1]),
                                        (pc[0] + comp.vp[0], pc[1] + comp.vp[1]))
                tiles.append(moved)
            elif isinstance(comp, Translation):
                tiles.append(tile.translated(comp.v))
            else:
                tiles.append(tile.transformed(comp))
        out = Patch(tiles)
        try:
            out.check_disjoint()
        except PatchworkError as exc:
            raise AdmissibilityError(f"piecewise image overlaps: {exc}") from exc
        return out

    def restrict(self, g, patch: Patch, sub: Patch):
        """Induced element on a sub-patch (the homomorphism iota)."""
        sub_keys = sub.key_set()
        if not sub_keys <= patch.key_set():
            raise PatchworkError("restriction target is not a sub-patch")
        if self.kind in ("translation", "rigid", "homothety"):
            return g
        keep = [i for i, t in enumerate(patch.tiles) if t.key() in sub_keys]
        comps = tuple((new_i, g.component(old_i)) for new_i, old_i in enumerate(keep))
        return Piecewise(comps, g.base_kind)


def translation_action() -> ActionStructure:
    return ActionStructure("translation")


def rigid_action() -> ActionStructure:
    return ActionStructure("rigid")


def homothety_action(max_tile_diameter: float | None = None) -> ActionStructure:
    return ActionStructure("homothety", max_tile_diameter=max_tile_diameter)


def piecewise_action(base_kind: str = "translation") -> ActionStructure:
    return ActionStructure("piecewise", base_kind=base_kind)


def qp_action() -> ActionStructure:
    return ActionStructure("qp", base_kind="qp")
