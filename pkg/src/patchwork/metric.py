"""Enclosing radius Delta and the tiling distance.

The distance between two tilings is the infimum over r < sqrt(2)/2 for
which some patch of x supported on B_{1/r} maps onto a patch of y by an
admissible perturbation g whose impact theta(Delta, |g|) is at most r
(capped at sqrt(2)/2 when no such r exists).

For translation actions on finite-local-complexity sources the solver is
exact: candidate translations are enumerated exhaustively from tile
correspondences, feasibility is monotone in r, and the infimum is located
on a finite critical set (impact thresholds of the candidates plus a
geometric refinement grid).  For rigid/homothety actions only a certified
upper bound is produced.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import (CoverageError, G6ViolationError, InsufficientWindowError,
                     PatchworkError)
from .geometry import (EPS_GEOM, Ball, Patch, Tile, TilingSource, origin_ball,
                       patch_diameter)
from . import groups as G
from .theta import theta_identity

#: Distance cap: no two tilings are farther apart than this.
DIST_CAP = math.sqrt(2.0) / 2.0


@dataclass(frozen=True)
class DistInterval:
    """Certified enclosure [lo, hi] of a distance value."""

    lo: float
    hi: float

    def __post_init__(self):
        lo = min(max(float(self.lo), 0.0), DIST_CAP)
        hi = min(max(float(self.hi), lo), DIST_CAP)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def exact(self) -> bool:
        return self.hi - self.lo <= 1e-12

    def __repr__(self):
        return f"DistInterval({self.lo:.9g}, {self.hi:.9g})"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("PATCHWORK_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# Delta


def delta(p: Patch, r: float, action, max_tile_diameter: float | None = None) -> DistInterval:
    """Enclosing radius for admissible copies of sub-patches meeting B_{1/r}.

    For isometry-type actions the value is exactly ``1/r + diam(p)``: a
    congruent copy of a sub-patch that still meets B_{1/r} cannot reach
    farther than the ball radius plus the sub-patch's own diameter.  For
    bounded-diameter homothety families only a conservative upper end is
    available; unbounded families have no finite enclosing radius.
    """
    if r <= 0:
        raise PatchworkError("delta needs r > 0")
    d = patch_diameter(p)
    base = 1.0 / r + d
    kind = getattr(action, "kind", action)
    if kind in ("translation", "rigid", "piecewise", "qp"):
        return _raw_interval(base, base)
    if kind == "homothety":
        bound = max_tile_diameter
        if bound is None:
            bound = getattr(action, "max_tile_diameter", None)
        if bound is None:
            raise G6ViolationError(
                "homothety copies of patches with unbounded tile diameter have "
                "no finite enclosing radius")
        # each copy has at most len(p) tiles of diameter <= bound and meets
        # the ball, so it cannot reach beyond 1/r + len(p) * bound
        return _raw_interval(base, 1.0 / r + max(d, len(p) * bound))
    raise PatchworkError(f"unknown action kind {kind}")


def _raw_interval(lo, hi):
    # bypass the sqrt(2)/2 clamp used for distances
    iv = DistInterval.__new__(DistInterval)
    object.__setattr__(iv, "lo", float(lo))
    object.__setattr__(iv, "hi", float(hi))
    return iv


# ---------------------------------------------------------------------------
# Window caching with vectorized ball queries


class _WinCache:
    def __init__(self, src: TilingSource):
        self.src = src
        self._entries: dict[float, dict] = {}
        self.limit = src.max_window_radius()

    def entry(self, radius: float) -> dict:
        if radius > self.limit + 1e-9:
            raise InsufficientWindowError(
                f"window of radius {radius:.3g} exceeds the source limit {self.limit:.3g}")
        q = math.ceil(max(radius, 2.0) * 2.0) / 2.0
        q = min(q, self.limit)
        if q not in self._entries:
            patch = self.src.window(q)
            cents = np.array([t.centroid for t in patch])
            circ = np.array([np.linalg.norm(t.outer - t.centroid, axis=1).max()
                             for t in patch])
            self._entries[q] = {
                "radius": q, "patch": patch, "cents": cents, "circ": circ,
                "keys": {t.key(): i for i, t in enumerate(patch.tiles)},
                "maxtile": float(2.0 * circ.max()) if len(patch) else 0.0,
            }
        return self._entries[q]

    def tiles_meeting(self, entry: dict, ball: Ball) -> list[int]:
        """Indices of tiles with positive-area overlap with ``ball``."""
        c = np.asarray(ball.center, dtype=float)
        d = np.linalg.norm(entry["cents"] - c, axis=1)
        sure = d <= ball.radius - entry["circ"]
        maybe = (~sure) & (d < ball.radius + entry["circ"])
        out = list(np.nonzero(sure)[0])
        patch = entry["patch"]
        for i in np.nonzero(maybe)[0]:
            if patch[int(i)].ball_overlap_area(ball) > EPS_GEOM:
                out.append(int(i))
        return out

    def has_translated(self, entry: dict, tile: Tile, v) -> bool:
        moved = tile.translated(v)
        if moved.key() in entry["keys"]:
            return True
        return entry["patch"].has_tile(moved)

    def has_image(self, entry: dict, tile: Tile, g) -> bool:
        return entry["patch"].has_tile(tile.transformed(g))


# ---------------------------------------------------------------------------
# Candidate generation


def _anchor_tile(entry: dict) -> Tile:
    # the tile with the largest overlap with a small ball at the origin:
    # it belongs to every patch whose support contains any B_s, s >= 1
    ball = origin_ball(0.5)
    best, best_a = None, -1.0
    cents, circ = entry["cents"], entry["circ"]
    d = np.linalg.norm(cents, axis=1)
    for i in np.nonzero(d < 0.5 + circ)[0]:
        a = entry["patch"][int(i)].ball_overlap_area(ball)
        if a > best_a:
            best, best_a = entry["patch"][int(i)], a
    if best is None or best_a <= EPS_GEOM:
        raise CoverageError("no tile meets a small ball at the origin")
    return best


def _translation_candidates(anchor: Tile, y_entry: dict) -> list[np.ndarray]:
    ac = anchor.centroid
    out = []
    seen = set()
    for t in y_entry["patch"]:
        if t.class_id != anchor.class_id or len(t.outer) != len(anchor.outer):
            continue
        v = t.centroid - ac
        if not anchor.translated(v).congruent_translate(t):
            continue
        key = (round(float(v[0]), 9), round(float(v[1]), 9))
        if key not in seen:
            seen.add(key)
            out.append(np.asarray(v, dtype=float))
    return out


def _rigid_candidates(anchor: Tile, y_entry: dict) -> list[G.Rigid]:
    A = anchor.outer
    out, seen = [], set()
    for t in y_entry["patch"]:
        if t.class_id != anchor.class_id or len(t.outer) != len(A):
            continue
        B = t.outer
        e0 = A[1] - A[0]
        for k in range(len(B)):
            ek = B[(k + 1) % len(B)] - B[k]
            ang = math.atan2(ek[1], ek[0]) - math.atan2(e0[1], e0[0])
            c, s = math.cos(ang), math.sin(ang)
            R = np.array([[c, -s], [s, c]])
            v = B[k] - R @ A[0]
            img = A @ R.T + v
            if np.abs(img - np.roll(B, -k, axis=0)).max() < 1e-7:
                key = (round(ang % (2 * math.pi), 9),
                       round(float(v[0]), 9), round(float(v[1]), 9))
                if key not in seen:
                    seen.add(key)
                    out.append(G.Rigid(ang, (float(v[0]), float(v[1]))))
    return out


def _homothety_candidates(anchor: Tile, y_entry: dict) -> list[G.Homothety]:
    A = anchor.outer
    out, seen = [], set()
    for t in y_entry["patch"]:
        if t.class_id != anchor.class_id or len(t.outer) != len(A):
            continue
        lam = math.sqrt(max(t.area / anchor.area, 1e-300))
        v = t.centroid - lam * anchor.centroid
        img = lam * A + v
        ok = False
        for k in range(len(t.outer)):
            if np.abs(img - np.roll(t.outer, -k, axis=0)).max() < 1e-7:
                ok = True
                break
        if ok:
            key = (round(lam, 9), round(float(v[0]), 9), round(float(v[1]), 9))
            if key not in seen:
                seen.add(key)
                out.append(G.Homothety(lam, (float(v[0]), float(v[1]))))
    return out


# ---------------------------------------------------------------------------
# The distance solver


def tiling_distance(x: TilingSource, y: TilingSource, action=None, theta=None,
                    max_window: float = 64.0, workers: int | None = None,
                    return_witness: bool = False):
    """Certified interval for the tiling distance; exact for translations.

    Returns a DistInterval (plus a witness dict when ``return_witness``).
    When no admissible matching exists at any r the interval is
    [0, sqrt(2)/2] (the distance then equals the cap, but the solver only
    certifies the upper end for non-exhaustive actions).
    """
    from .groups import translation_action

    action = action or translation_action()
    theta = theta or theta_identity()
    xc, yc = _WinCache(x), _WinCache(y)
    W = min(max_window, xc.limit, yc.limit)
    xc.limit = min(xc.limit, W)
    yc.limit = min(yc.limit, W)

    probe_entry = xc.entry(math.sqrt(2.0) + 0.1)
    anchor = _anchor_tile(probe_entry)
    maxtile = max(probe_entry["maxtile"], 2.0 * float(np.linalg.norm(
        anchor.outer - anchor.centroid, axis=1).max()))

    if action.kind == "translation":
        solver = _TranslationSolver(xc, yc, anchor, theta, W, maxtile)
        iv, wit = solver.solve()
    elif action.kind in ("rigid", "homothety"):
        iv, wit = _generic_upper_bound(xc, yc, anchor, action, theta, W, maxtile)
    else:
        # piecewise/qp families contain the diagonal translations, so the
        # translation solver's value is an upper bound
        solver = _TranslationSolver(xc, yc, anchor, theta, W, maxtile)
        ivt, wit = solver.solve()
        iv = DistInterval(0.0, ivt.hi)
    if return_witness:
        return iv, wit
    return iv


class _TranslationSolver:
    def __init__(self, xc, yc, anchor, theta, W, maxtile):
        self.xc, self.yc = xc, yc
        self.anchor = anchor
        self.theta = theta
        self.maxtile = maxtile
        # reach budget: windows of radius 1/r + |v| + tiles must fit in W
        self.W = W
        # candidate translations: the anchor tile must land on a congruent
        # tile of y, and any |v| >= cap is ruled out by the impact condition
        y0 = yc.entry(min(W, 2.0 + DIST_CAP + maxtile))
        self.cands = [v for v in _translation_candidates(anchor, y0)
                      if float(np.linalg.norm(v)) < DIST_CAP]

    def r_floor(self, vnorm: float) -> float:
        denom = self.W - vnorm - 2.0 * self.maxtile - 0.6
        if denom <= math.sqrt(2.0):
            return DIST_CAP  # no checkable r for this candidate
        return 1.0 / denom

    def containment(self, v, r: float) -> bool:
        """All x-tiles meeting B_{1/r} or B_{1/r} - v translate into y."""
        R1 = 1.0 / r
        vnorm = float(np.linalg.norm(v))
        try:
            xe = self.xc.entry(R1 + vnorm + self.maxtile + 0.5)
            ye = self.yc.entry(R1 + vnorm + 2.0 * self.maxtile + 0.5)
        except InsufficientWindowError:
            return False
        idx = set(self.xc.tiles_meeting(xe, origin_ball(R1)))
        idx |= set(self.xc.tiles_meeting(xe, Ball((-float(v[0]), -float(v[1])), R1)))
        patch = xe["patch"]
        return all(self.yc.has_translated(ye, patch[i], v) for i in sorted(idx))

    def patch_diam(self, v, r: float) -> float:
        R1 = 1.0 / r
        vnorm = float(np.linalg.norm(v))
        xe = self.xc.entry(R1 + vnorm + self.maxtile + 0.5)
        idx = set(self.xc.tiles_meeting(xe, origin_ball(R1)))
        idx |= set(self.xc.tiles_meeting(xe, Ball((-float(v[0]), -float(v[1])), R1)))
        return patch_diameter(Patch([xe["patch"][i] for i in idx]))

    def r_theta(self, v) -> float:
        """Smallest r at which the impact condition theta(Delta, |v|) <= r holds."""
        vnorm = float(np.linalg.norm(v))
        if self.theta.name == "identity":
            return vnorm  # theta(s, |v|) = |v| regardless of s
        lo, hi = max(self.r_floor(vnorm), 1e-9), DIST_CAP * (1.0 - 1e-12)
        if lo >= hi:
            return math.inf
        def ok(r):
            try:
                return self.theta(1.0 / r + self.patch_diam(v, r), vnorm) <= r
            except InsufficientWindowError:
                return False
        if not ok(hi):
            return math.inf
        if ok(lo):
            return lo
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if ok(mid):
                hi = mid
            else:
                lo = mid
            if hi - lo <= 1e-13:
                break
        return hi

    def solve(self):
        if not self.cands:
            return DistInterval(0.0, DIST_CAP), None
        # zero-translation shortcut: equal windows (out to the checkable
        # limit) mean the distance vanishes
        for v in self.cands:
            if float(np.linalg.norm(v)) <= 1e-12:
                rz = max(self.r_floor(0.0), 1.0 / 24.0)
                if rz < DIST_CAP and self.containment(v, rz):
                    return (DistInterval(0.0, 0.0),
                            {"kind": "translation", "v": [0.0, 0.0], "r": 0.0})
                break
        rng_thetas = {}
        for v in self.cands:
            rng_thetas[tuple(v)] = self.r_theta(v)
        # critical r grid: impact thresholds plus geometric refinements
        grid = set()
        for rt in rng_thetas.values():
            if 0.0 < rt < DIST_CAP:
                grid.add(rt)
        for k in range(1, 24):
            grid.add(DIST_CAP * 2.0 ** (-k))
            grid.add(DIST_CAP * (1.0 - 2.0 ** (-k)))
        floor0 = self.r_floor(0.0)
        grid = sorted(r for r in grid if 0.0 < r < DIST_CAP and r >= 0.5 * floor0)

        hit_r, hit_vs = None, []
        for r in grid:
            feas = [v for v in self.cands
                    if rng_thetas[tuple(v)] <= r + 1e-15 and self.containment(v, r)]
            if feas:
                hit_r, hit_vs = r, feas
                break
        if hit_r is None:
            return DistInterval(0.0, DIST_CAP), None

        # refine: for every candidate whose impact threshold is below the
        # hit, locate its containment threshold; the infimum is the least
        # max(impact threshold, containment threshold)
        lo_best, hi_best, wit = math.inf, math.inf, None
        pool = {tuple(v): v for v in hit_vs}
        for v in self.cands:
            if rng_thetas[tuple(v)] < hit_r:
                pool[tuple(v)] = v
        for key, v in pool.items():
            rt = rng_thetas[key]
            vnorm = float(np.linalg.norm(v))
            floor = self.r_floor(vnorm)
            a = max(rt, floor)
            if not self.containment(v, max(a, 1e-12) if a > 0 else hit_r * 1e-6):
                if not self.containment(v, hit_r):
                    continue
                lo_r, hi_r = max(a, 1e-12), hit_r
                while hi_r - lo_r > 1e-13:
                    mid = 0.5 * (lo_r + hi_r)
                    if self.containment(v, mid):
                        hi_r = mid
                    else:
                        lo_r = mid
                d_lo = d_hi = max(rt, hi_r)
            elif vnorm <= 1e-12:
                d_lo = d_hi = 0.0  # identical windows: distance vanishes
            elif rt >= floor:
                d_lo = d_hi = rt  # impact condition is the binding constraint
            else:
                d_lo, d_hi = rt, a  # window-limited: containment unverified below
            if d_hi < hi_best:
                lo_best, hi_best, wit = d_lo, d_hi, v
            lo_best = min(lo_best, d_lo)
        if wit is None:
            return DistInterval(0.0, DIST_CAP), None
        witness = {"kind": "translation", "v": [float(wit[0]), float(wit[1])],
                   "r": hi_best}
        return DistInterval(lo_best, hi_best), witness


def _generic_upper_bound(xc, yc, anchor, action, theta, W, maxtile):
    """Upper-bound solver for rigid/homothety actions (lo stays 0)."""
    y0 = yc.entry(min(W, math.sqrt(2.0) + 0.1 + maxtile + 2.0))
    if action.kind == "rigid":
        cands = _rigid_candidates(anchor, y0)
    else:
        cands = _homothety_candidates(anchor, y0)
    grid = sorted({DIST_CAP * 2.0 ** (-k) for k in range(1, 12)}
                  | {DIST_CAP * (1.0 - 2.0 ** (-k)) for k in range(1, 12)})
    best, wit = DIST_CAP, None
    for g in cands:
        n = action.norm(g)
        gi = G.inverse(g)
        for r in grid:
            if r >= best:
                break
            R1 = 1.0 / r
            r2 = R1 / g.scale if isinstance(g, G.Homothety) else R1
            vnorm = float(np.hypot(*gi.v))
            try:
                xe = xc.entry(R1 + vnorm + r2 + maxtile + 0.5)
                ye = yc.entry((R1 + vnorm + r2 + maxtile) *
                              (g.scale if isinstance(g, G.Homothety) else 1.0) + 1.0)
            except InsufficientWindowError:
                continue
            idx = set(xc.tiles_meeting(xe, origin_ball(R1)))
            idx |= set(xc.tiles_meeting(xe, Ball(gi.v, r2)))
            tiles = [xe["patch"][i] for i in sorted(idx)]
            s = R1 + patch_diameter(Patch(tiles))
            if s <= math.sqrt(2.0) or theta(s, n) > r:
                continue
            if all(yc.has_image(ye, t, g) for t in tiles):
                best, wit = r, g
                break
    if wit is None:
        return DistInterval(0.0, DIST_CAP), None
    if isinstance(wit, G.Homothety):
        wd = {"kind": "homothety", "scale": wit.scale, "v": list(wit.v), "r": best}
    else:
        wd = {"kind": "rigid", "angle": wit.angle, "v": list(wit.v), "r": best}
    return DistInterval(0.0, best), wd


# ---------------------------------------------------------------------------
# Axiom suite


def verify_metric_axioms(corpus, action=None, theta=None, compare_radius: float = 6.0,
                         tri_tol: float = 1e-9) -> dict:
    """Empirical metric-axiom report over a corpus of tiling sources.

    Checks symmetry of the certified upper ends, the triangle inequality,
    and identity of indiscernibles (zero distance exactly for sources with
    equal windows).  Intended for the exact translation solver.
    """
    n = len(corpus)
    hi = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                hi[i, j] = tiling_distance(corpus[i], corpus[j], action, theta).hi
    report = {"ok": True, "symmetry": [], "triangle": [], "identity": []}
    for i in range(n):
        for j in range(i + 1, n):
            if abs(hi[i, j] - hi[j, i]) > 1e-12:
                report["symmetry"].append((i, j, hi[i, j], hi[j, i]))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) == 3 and hi[i, k] > hi[i, j] + hi[j, k] + tri_tol:
                    report["triangle"].append((i, j, k))
    for i in range(n):
        for j in range(i + 1, n):
            r = min(compare_radius, corpus[i].max_window_radius(),
                    corpus[j].max_window_radius())
            same = corpus[i].window(r).key_set() == corpus[j].window(r).key_set()
            if same != (hi[i, j] <= 1e-12):
                report["identity"].append((i, j, same, hi[i, j]))
    report["ok"] = not (report["symmetry"] or report["triangle"] or report["identity"])
    report["matrix"] = hi
    return report
