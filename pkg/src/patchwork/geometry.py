"""Tiles, patches, lazy tilings and the desk-scale fixtures.

Tiles are planar polygons-with-holes with real vertices.  A patch is a
finite, canonically ordered collection of tiles with pairwise disjoint
interiors.  Infinite tilings are represented by deterministic window
generators: ``window(r)`` returns the (unique) patch of all tiles whose
intersection with the ball ``B_r`` has positive area, which always covers
``B_r`` and is monotone in ``r``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CoverageError, InsufficientWindowError, InvalidTileError, PatchworkError

#: Area slack for interior-disjointness and coverage decisions (area units).
EPS_GEOM = 1e-9

#: Coordinate quantum used for canonical keys and tile matching.
KEY_DECIMALS = 6


def _as_points(pts) -> np.ndarray:
    a = np.asarray(pts, dtype=float)
    if a.ndim != 2 or a.shape[1] != 2 or a.shape[0] < 3:
        raise InvalidTileError(f"expected a list of >=3 planar vertices, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidTileError("non-finite vertex coordinate")
    return a


def shoelace_area(verts: np.ndarray) -> float:
    """Signed area of a polygon (positive for counterclockwise orientation)."""
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def circle_poly_area(verts: np.ndarray, center, radius: float) -> float:
    """Exact area of ``polygon ∩ disk``.

    Works edge by edge: inside-the-disk subsegments contribute triangle
    (cross product) terms, outside parts contribute circular-sector terms.
    The polygon must be simple; orientation sign carries through, so holes
    passed with negative orientation subtract.
    """
    if radius <= 0.0:
        return 0.0
    c = np.asarray(center, dtype=float)
    p = verts - c
    r2 = radius * radius
    total = 0.0
    n = len(p)
    for i in range(n):
        a = p[i]
        b = p[(i + 1) % n]
        d = b - a
        dd = d @ d
        if dd == 0.0:
            continue
        # Split the segment at its intersections with the circle.
        ts = [0.0, 1.0]
        ad = a @ d
        disc = ad * ad - dd * ((a @ a) - r2)
        if disc > 0.0:
            sq = math.sqrt(disc)
            for t in ((-ad - sq) / dd, (-ad + sq) / dd):
                if 0.0 < t < 1.0:
                    ts.append(t)
            ts.sort()
        for t0, t1 in zip(ts[:-1], ts[1:]):
            q0 = a + t0 * d
            q1 = a + t1 * d
            mid = a + 0.5 * (t0 + t1) * d
            if mid @ mid <= r2:
                total += 0.5 * (q0[0] * q1[1] - q0[1] * q1[0])
            else:
                ang = math.atan2(q0[0] * q1[1] - q0[1] * q1[0], q0 @ q1)
                total += 0.5 * r2 * ang
    return total


@dataclass(frozen=True)
class Ball:
    """Closed Euclidean ball."""

    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise PatchworkError(f"ball radius must be nonnegative, got {self.radius}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    @property
    def area(self) -> float:
        return math.pi * self.radius * self.radius


def origin_ball(radius: float) -> Ball:
    return Ball((0.0, 0.0), radius)


@dataclass(frozen=True)
class Pattern:
    """Finite set of distinct points (the shape being searched for)."""

    points: tuple

    def __post_init__(self):
        pts = tuple(tuple(float(c) for c in p) for p in self.points)
        if not pts:
            raise PatchworkError("pattern must be nonempty")
        if len(set(pts)) != len(pts):
            raise PatchworkError("pattern points must be distinct")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise PatchworkError("pattern points must share one dimension")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def __len__(self):
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)

    def integer_points(self) -> np.ndarray:
        a = self.as_array()
        r = np.rint(a)
        if np.abs(a - r).max() > 1e-9:
            raise PatchworkError("pattern is not integer-valued")
        return r.astype(int)


class Tile:
    """Polygon-with-holes region with a class label.

    ``class_id`` identifies the equivalence class of the single tile under
    the acting group; tiles only ever match tiles of the same class.
    ``meta`` carries fixture-specific data (e.g. the Q/P center pair).
    """

    __slots__ = ("outer", "holes", "label", "class_id", "meta", "_area", "_centroid", "_key")

    def __init__(self, outer, holes=(), label=None, class_id=None, meta=None):
        outer = _as_points(outer)
        a = shoelace_area(outer)
        if abs(a) <= EPS_GEOM:
            raise InvalidTileError("tile outer boundary has zero area")
        if a < 0:
            outer = outer[::-1].copy()
        hs = []
        for h in holes:
            h = _as_points(h)
            ha = shoelace_area(h)
            if abs(ha) <= EPS_GEOM:
                raise InvalidTileError("tile hole has zero area")
            if ha > 0:
                h = h[::-1].copy()  # holes stored clockwise
            hs.append(h)
        self.outer = outer
        self.holes = tuple(hs)
        self.label = label
        self.class_id = class_id if class_id is not None else label
        self.meta = dict(meta) if meta else {}
        self._area = None
        self._centroid = None
        self._key = None

    @property
    def area(self) -> float:
        if self._area is None:
            a = shoelace_area(self.outer)
            for h in self.holes:
                a += shoelace_area(h)  # negative
            self._area = a
        return self._area

    @property
    def centroid(self) -> np.ndarray:
        """Area centroid of the region (holes accounted for)."""
        if self._centroid is None:
            cx = cy = aa = 0.0
            for ring in (self.outer, *self.holes):
                x, y = ring[:, 0], ring[:, 1]
                x1, y1 = np.roll(x, -1), np.roll(y, -1)
                cr = x * y1 - x1 * y
                a = 0.5 * float(cr.sum())
                cx += float(((x + x1) * cr).sum()) / 6.0
                cy += float(((y + y1) * cr).sum()) / 6.0
                aa += a
            self._centroid = np.array([cx / aa, cy / aa])
        return self._centroid

    def ball_overlap_area(self, ball: Ball) -> float:
        """Area of ``tile ∩ ball`` (exact, arcs included)."""
        a = circle_poly_area(self.outer, ball.center, ball.radius)
        for h in self.holes:
            a += circle_poly_area(h, ball.center, ball.radius)
        return a

    @property
    def shapely(self):
        from shapely.geometry import Polygon

        return Polygon(self.outer, [h for h in self.holes])

    def translated(self, v) -> "Tile":
        v = np.asarray(v, dtype=float)
        t = Tile.__new__(Tile)
        t.outer = self.outer + v
        t.holes = tuple(h + v for h in self.holes)
        t.label = self.label
        t.class_id = self.class_id
        t.meta = dict(self.meta)
        if "qp" in t.meta:
            kind, *centers = t.meta["qp"]
            t.meta["qp"] = (kind, *[tuple(np.asarray(c) + v) for c in centers])
        t._area = self._area
        t._centroid = None if self._centroid is None else self._centroid + v
        t._key = None
        return t

    def transformed(self, fn, class_id=None) -> "Tile":
        """New tile with every vertex mapped through ``fn`` (a point map)."""
        outer = np.array([fn(p) for p in self.outer])
        holes = [np.array([fn(p) for p in h]) for h in self.holes]
        return Tile(outer, holes, label=self.label,
                    class_id=self.class_id if class_id is None else class_id,
                    meta=self.meta)

    def key(self):
        """Canonical hashable key: class plus quantized vertex loops."""
        if self._key is None:
            self._key = (self.class_id, _ring_key(self.outer),
                         tuple(sorted(_ring_key(h) for h in self.holes)))
        return self._key

    def congruent_translate(self, other: "Tile", tol: float = 1e-7) -> bool:
        """True if ``other`` equals this tile as a set, within ``tol``."""
        if self.class_id != other.class_id or len(self.outer) != len(other.outer):
            return False
        return self.key() == other.key() or _rings_close(self.outer, other.outer, tol)

    def min_dist_origin(self) -> float:
        """Distance from the origin to the tile region (0 if inside)."""
        return _point_poly_dist(np.zeros(2), self.outer)

    def __repr__(self):
        c = self.centroid
        return f"Tile({self.class_id!r} @ ({c[0]:.3f},{c[1]:.3f}), area={self.area:.3f})"


def _ring_key(ring: np.ndarray):
    q = np.round(ring, KEY_DECIMALS)
    q = q + 0.0  # normalize -0.0
    pts = [tuple(p) for p in q]
    k = min(range(len(pts)), key=lambda i: pts[i])
    return tuple(pts[k:] + pts[:k])


def _rings_close(r1: np.ndarray, r2: np.ndarray, tol: float) -> bool:
    if len(r1) != len(r2):
        return False
    start = min(range(len(r2)), key=lambda i: (r2[i][0], r2[i][1]))
    s1 = min(range(len(r1)), key=lambda i: (r1[i][0], r1[i][1]))
    rolled1 = np.roll(r1, -s1, axis=0)
    rolled2 = np.roll(r2, -start, axis=0)
    return bool(np.all(np.abs(rolled1 - rolled2) <= tol))


def _point_poly_dist(p: np.ndarray, verts: np.ndarray) -> float:
    # winding test via ray crossing
    x, y = p
    inside = False
    n = len(verts)
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xc > x:
                inside = not inside
    if inside:
        return 0.0
    best = math.inf
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        d = b - a
        t = np.clip(((p - a) @ d) / (d @ d), 0.0, 1.0)
        best = min(best, float(np.linalg.norm(a + t * d - p)))
    return best


class Patch:
    """Finite indexed tile list with pairwise disjoint interiors.

    Tiles are kept in canonical order (lexicographic by centroid, then
    area) so that equal patches compare equal regardless of construction
    order.
    """

    def __init__(self, tiles, validate: bool = False):
        tiles = sorted(tiles, key=_tile_sort_key)
        self.tiles: tuple[Tile, ...] = tuple(tiles)
        if validate:
            self.check_disjoint()

    def __len__(self):
        return len(self.tiles)

    def __iter__(self):
        return iter(self.tiles)

    def __getitem__(self, i):
        return self.tiles[i]

    def __eq__(self, other):
        if not isinstance(other, Patch):
            return NotImplemented
        return self.key_set() == other.key_set()

    def __hash__(self):
        return hash(tuple(sorted(self.key_set())))

    @cached_property
    def bounding_box(self):
        all_pts = np.vstack([t.outer for t in self.tiles])
        return (all_pts.min(axis=0), all_pts.max(axis=0))

    def key_set(self) -> frozenset:
        return frozenset(t.key() for t in self.tiles)

    @cached_property
    def _by_key(self):
        return {t.key(): t for t in self.tiles}

    def has_tile(self, tile: Tile, tol: float = 1e-7) -> bool:
        """Membership within ``tol``: quantized lookup with neighbor probing."""
        if tile.key() in self._by_key:
            return True
        # a coordinate may straddle a quantization boundary; probe by centroid
        c = tile.centroid
        for cand in self.tiles_near(c, 10 ** -KEY_DECIMALS + tol):
            if cand.congruent_translate(tile, tol):
                return True
        return False

    @cached_property
    def _centroids(self):
        return np.array([t.centroid for t in self.tiles])

    def tiles_near(self, point, radius: float):
        c = self._centroids
        d = np.linalg.norm(c - np.asarray(point, dtype=float), axis=1)
        return [self.tiles[i] for i in np.nonzero(d <= radius)[0]]

    def support_area(self) -> float:
        return sum(t.area for t in self.tiles)

    def check_disjoint(self):
        from shapely.geometry import Polygon
        from shapely.strtree import STRtree

        polys = [t.shapely for t in self.tiles]
        tree = STRtree(polys)
        for i, p in enumerate(polys):
            for j in tree.query(p):
                j = int(j)
                if j <= i:
                    continue
                inter = p.intersection(polys[j]).area
                if inter > EPS_GEOM:
                    raise PatchworkError(
                        f"tiles {i} and {j} overlap with area {inter:.3g}")

    def translated(self, v) -> "Patch":
        return Patch([t.translated(v) for t in self.tiles])

    def __repr__(self):
        return f"Patch({len(self.tiles)} tiles)"


def _tile_sort_key(t: Tile):
    c = t.centroid
    return (round(c[0], 9), round(c[1], 9), round(t.area, 9))


def interiors_disjoint(a: Tile, b: Tile) -> bool:
    """True iff the tiles overlap in at most a null set."""
    if abs(a.area) <= EPS_GEOM or abs(b.area) <= EPS_GEOM:
        raise InvalidTileError("degenerate tile")
    return a.shapely.intersection(b.shapely).area <= EPS_GEOM


def support_contains_ball(p: Patch, b: Ball) -> bool:
    """Ball-coverage test by area accounting (tiles are interior-disjoint)."""
    if len(p) == 0:
        raise PatchworkError("empty patch")
    covered = sum(t.ball_overlap_area(b) for t in p)
    return covered >= b.area - max(EPS_GEOM, 1e-12 * b.area)


def patch_diameter(p: Patch) -> float:
    """Diameter of the union support (max vertex distance via the hull)."""
    if len(p) == 0:
        raise PatchworkError("empty patch")
    pts = np.vstack([t.outer for t in p])
    if len(pts) > 8:
        from scipy.spatial import ConvexHull

        pts = pts[ConvexHull(pts).vertices]
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
    return math.sqrt(float(d2.max()))


# ---------------------------------------------------------------------------
# Tiling sources


class TilingSource:
    """Deterministic lazy window generator for a (possibly infinite) tiling.

    ``window(r)`` returns the patch of all tiles with positive-area
    intersection with ``B_r``; repeated calls are cached and monotone.
    """

    kind = "abstract"

    def __init__(self):
        self._cache: dict[float, Patch] = {}

    def window(self, r: float) -> Patch:
        r = float(r)
        if r not in self._cache:
            self._cache[r] = self._window(r)
        return self._cache[r]

    def _window(self, r: float) -> Patch:
        raise NotImplementedError

    def translated(self, v) -> "TilingSource":
        return TranslatedSource(self, v)

    def max_window_radius(self) -> float:
        return math.inf


class ExplicitSource(TilingSource):
    kind = "explicit"

    def __init__(self, patch: Patch):
        super().__init__()
        self.patch = patch

    def _window(self, r: float) -> Patch:
        ball = origin_ball(r)
        tiles = [t for t in self.patch if t.ball_overlap_area(ball) > EPS_GEOM]
        got = Patch(tiles)
        if not tiles or not support_contains_ball(got, ball):
            raise CoverageError(f"explicit patch does not cover B_{r}")
        return got

    def max_window_radius(self) -> float:
        lo, hi = self.patch.bounding_box
        return min(abs(v) for v in (*lo, *hi))


class PeriodicSource(TilingSource):
    """Lattice-periodic tiling: fundamental patch repeated over a 2D lattice."""

    kind = "periodic"

    def __init__(self, fundamental: Patch, lattice):
        super().__init__()
        self.fundamental = fundamental
        self.lattice = np.asarray(lattice, dtype=float).reshape(2, 2)
        if abs(np.linalg.det(self.lattice)) < 1e-12:
            raise PatchworkError("lattice basis is singular")

    def lattice_points(self, radius: float) -> np.ndarray:
        """All lattice vectors of norm <= radius."""
        inv = np.linalg.inv(self.lattice.T)
        # bound integer coefficients via the inverse operator norm
        bound = int(math.ceil(radius * np.linalg.norm(inv, 2))) + 1
        rng = np.arange(-bound, bound + 1)
        ii, jj = np.meshgrid(rng, rng, indexing="ij")
        coeffs = np.stack([ii.ravel(), jj.ravel()], axis=1)
        pts = coeffs @ self.lattice
        keep = np.linalg.norm(pts, axis=1) <= radius + 1e-12
        return pts[keep]

    def _window(self, r: float) -> Patch:
        lo, hi = self.fundamental.bounding_box
        reach = r + float(np.linalg.norm(hi - lo)) + max(np.linalg.norm(lo), np.linalg.norm(hi))
        ball = origin_ball(r)
        tiles = []
        for v in self.lattice_points(reach):
            for t in self.fundamental:
                moved = t.translated(v)
                if moved.ball_overlap_area(ball) > EPS_GEOM:
                    tiles.append(moved)
        patch = Patch(tiles)
        if not support_contains_ball(patch, ball):
            raise CoverageError(f"periodic source does not cover B_{r}")
        return patch


class TranslatedSource(TilingSource):
    kind = "translated"

    def __init__(self, base: TilingSource, v):
        super().__init__()
        self.base = base
        self.v = np.asarray(v, dtype=float)

    def translated(self, v):
        return TranslatedSource(self.base, self.v + np.asarray(v, dtype=float))

    def _window(self, r: float) -> Patch:
        # quantize the inner radius so repeated translates share base windows
        need = r + float(np.linalg.norm(self.v))
        inner = self.base.window(math.ceil(need * 2.0) / 2.0)
        ball = origin_ball(r)
        tiles = [t.translated(self.v) for t in inner]
        tiles = [t for t in tiles if t.ball_overlap_area(ball) > EPS_GEOM]
        return Patch(tiles)

    def max_window_radius(self) -> float:
        return self.base.max_window_radius() - float(np.linalg.norm(self.v))


# -- chair substitution ------------------------------------------------------

# Base L-tromino: legs of length 2, width 1, corner at the origin.
_CHAIR_L = np.array([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)], dtype=float)

_ROT = {
    0: np.array([[1.0, 0.0], [0.0, 1.0]]),
    90: np.array([[0.0, -1.0], [1.0, 0.0]]),
    180: np.array([[-1.0, 0.0], [0.0, -1.0]]),
    270: np.array([[0.0, 1.0], [-1.0, 0.0]]),
}


def _chair_tile(corner, rot, scale=1.0) -> Tile:
    verts = (_ROT[rot % 360] @ (_CHAIR_L.T * scale)).T + np.asarray(corner, dtype=float)
    return Tile(verts, label="chair", class_id=f"chair_r{rot % 360}")


def _chair_children(corner, rot, scale):
    """Subdivide one chair supertile into its four half-scale chairs."""
    corner = np.asarray(corner, dtype=float)
    R = _ROT[rot % 360]
    half = scale / 2.0
    local = [((0.0, 0.0), 0), ((half, half), 0), ((2 * scale, 0.0), 90), ((0.0, 2 * scale), 270)]
    return [(corner + R @ np.asarray(o), rot + dr, half) for o, dr in local]


class ChairSource(TilingSource):
    """Fixed point of the chair (L-tromino) substitution.

    The seed is four unit chairs meeting at the origin, one per quadrant;
    level-``n`` windows subdivide four scale-``2^n`` supertiles, whose
    union covers ``B_{sqrt(2)*2^n}``.  ``levels`` caps the expansion.
    """

    kind = "substitution"

    def __init__(self, levels: int = 6):
        super().__init__()
        if levels < 0:
            raise PatchworkError("levels must be nonnegative")
        self.levels = int(levels)
        self._level_tiles: dict[int, list] = {}

    def max_window_radius(self) -> float:
        return math.sqrt(2.0) * (2.0 ** self.levels)

    def level_for(self, r: float) -> int:
        n = 0
        while math.sqrt(2.0) * 2 ** n < r:
            n += 1
        return n

    def tiles_at_level(self, n: int) -> list:
        if n > self.levels:
            raise InsufficientWindowError(
                f"chair window level {n} exceeds the configured maximum {self.levels}")
        if n not in self._level_tiles:
            stack = [((0.0, 0.0), rot, float(2 ** n)) for rot in (0, 90, 180, 270)]
            out = []
            while stack:
                corner, rot, scale = stack.pop()
                if scale <= 1.0:
                    out.append(_chair_tile(corner, rot, scale))
                else:
                    stack.extend(_chair_children(corner, rot, scale))
            self._level_tiles[n] = out
        return self._level_tiles[n]

    def _window(self, r: float) -> Patch:
        n = self.level_for(r)
        ball = origin_ball(r)
        tiles = [t for t in self.tiles_at_level(n) if t.ball_overlap_area(ball) > EPS_GEOM]
        patch = Patch(tiles)
        if not support_contains_ball(patch, ball):
            raise CoverageError(f"chair window level {n} does not cover B_{r}")
        return patch


class QPSource(TilingSource):
    """Unit grid of hypercube annuli Q\\P with a small square P in each cell.

    Q has edge 1 and P edge 1/3; the P square in cell (i, j) is displaced
    from the cell center by ``offsets[(i, j)]`` (default 0), which must
    keep the center pair within 1/6.
    """

    kind = "explicit"  # serialized as explicit tiles

    def __init__(self, offsets=None):
        super().__init__()
        self.offsets = {}
        for key, off in (offsets or {}).items():
            off = np.asarray(off, dtype=float)
            if np.linalg.norm(off) > 1.0 / 6.0 + 1e-12:
                from .errors import AdmissibilityError

                raise AdmissibilityError(
                    f"QP offset {tuple(off)} for cell {key} exceeds the 1/6 bound")
            self.offsets[tuple(int(v) for v in key)] = off

    def cell_tiles(self, i: int, j: int) -> list:
        qc = np.array([i + 0.5, j + 0.5])
        pc = qc + self.offsets.get((i, j), np.zeros(2))
        s = 1.0 / 6.0
        p_sq = np.array([(-s, -s), (s, -s), (s, s), (-s, s)]) + pc
        q_sq = np.array([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]) + np.array([i, j], dtype=float)
        annulus = Tile(q_sq, holes=[p_sq], label="QP", class_id="QP",
                       meta={"qp": ("annulus", tuple(qc), tuple(pc))})
        inner = Tile(p_sq, label="P", class_id="P", meta={"qp": ("p", tuple(pc))})
        return [annulus, inner]

    def _window(self, r: float) -> Patch:
        ball = origin_ball(r)
        n = int(math.ceil(r)) + 1
        tiles = []
        for i in range(-n, n):
            for j in range(-n, n):
                for t in self.cell_tiles(i, j):
                    if t.ball_overlap_area(ball) > EPS_GEOM:
                        tiles.append(t)
        return Patch(tiles)


# ---------------------------------------------------------------------------
# Patch extraction


def minimal_patch(x, K: Ball) -> Patch:
    """The K-minimal patch: tiles meeting K with positive area.

    ``x`` may be a TilingSource or a Patch.  The result covers K and no
    proper sub-patch does.
    """
    if K.radius <= 0:
        raise PatchworkError("minimal_patch needs a ball of positive radius")
    if isinstance(x, TilingSource):
        reach = float(np.linalg.norm(K.center)) + K.radius
        pool = x.window(reach)
    else:
        pool = x
    tiles = [t for t in pool if t.ball_overlap_area(K) > EPS_GEOM]
    patch = Patch(tiles)
    if not tiles or not support_contains_ball(patch, K):
        raise CoverageError("tiles available do not cover the requested ball")
    return patch


def enclosing_patches(x, K: Ball, r_max: float):
    """Lazily enumerate bounded patches whose support contains K.

    Starts from the minimal patch and extends by tiles drawn from the
    ``B_{r_max}`` window, in nondecreasing tile count.
    """
    center_norm = float(np.linalg.norm(K.center))
    if r_max < center_norm + K.radius:
        return
    base = minimal_patch(x, K)
    pool = x.window(r_max) if isinstance(x, TilingSource) else x
    base_keys = base.key_set()
    extras = [t for t in pool if t.key() not in base_keys]
    yield base
    for size in range(1, len(extras) + 1):
        for combo in itertools.combinations(extras, size):
            yield Patch(list(base.tiles) + list(combo))


# ---------------------------------------------------------------------------
# Fixtures


def make_grid(cell_class: str = "cell") -> PeriodicSource:
    """Unit square grid with cells [i, i+1] x [j, j+1]."""
    cell = Tile([(0, 0), (1, 0), (1, 1), (0, 1)], label=cell_class, class_id=cell_class)
    return PeriodicSource(Patch([cell]), np.eye(2))


def make_chair(levels: int = 6) -> ChairSource:
    return ChairSource(levels)


def make_qp(offsets=None) -> QPSource:
    return QPSource(offsets)
