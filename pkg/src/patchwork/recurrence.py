"""Tiling-level recurrence: scaled-pattern certificates, local isomorphism
radius, and return sets.

Two certificate-producing searches are provided.  The first (lw_search)
finds one scale k and a common shift u so that slightly perturbed copies of
a central patch sit at every k*v_i + u.  The second (bt_search) handles
arbitrary positive real scales lambda with a single distortion bound q: the
non-integer part of lambda is absorbed into the coefficient alpha_i of the
distortion vector w = sum alpha_j v_j, so that lambda*v_i + w lands back on
an integer recurrence structure.  Verifiers re-apply every transformation
from scratch.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay, cKDTree

from .errors import InsufficientWindowError, PatchworkError
from .geometry import (EPS_GEOM, Ball, Patch, Pattern, PeriodicSource,
                       TilingSource, minimal_patch, origin_ball,
                       patch_diameter, support_contains_ball)
from .groups import Translation, norm as g_norm
from .metric import tiling_distance
from .ramsey import Coloring, VerifyResult, _feasible_t, _recover_vs


def _as_pattern(F) -> Pattern:
    if isinstance(F, Pattern):
        return F
    return Pattern(tuple(tuple(p) for p in F))


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class LWCertificate:
    y_prime: Patch
    eps: float
    k: int
    u: tuple
    gs: tuple  # one element per pattern point, each of norm < eps
    F: Pattern


@dataclass(frozen=True)
class BTEntry:
    lam: float
    t: tuple  # t_lambda
    alphas: tuple  # per pattern point i: coefficients (alpha_1..alpha_l)
    gs: tuple  # per pattern point i: GroupElement of norm < eps

    def w(self, F: Pattern, i: int) -> np.ndarray:
        V = F.as_array()
        return np.asarray(self.alphas[i], dtype=float) @ V


@dataclass(frozen=True)
class BTCertificate:
    y_prime: Patch
    eps: float
    q: int
    F: Pattern
    entries: tuple  # BTEntry per lambda


# ---------------------------------------------------------------------------
# Copy enumeration (shared by LW / local isomorphism)


def _copy_translations(patch: Patch, big: Patch) -> np.ndarray:
    """All v with patch + v contained in ``big`` (exact tile matches)."""
    anchor = patch[0]
    keys = big._by_key
    out = []
    for b in big:
        if b.class_id != anchor.class_id or len(b.outer) != len(anchor.outer):
            continue
        v = b.centroid - anchor.centroid
        if not anchor.translated(v).congruent_translate(b):
            continue
        ok = True
        for t in patch:
            moved = t.translated(v)
            if moved.key() not in keys and not big.has_tile(moved):
                ok = False
                break
        if ok:
            out.append(np.asarray(v, dtype=float))
    return np.asarray(out) if out else np.zeros((0, 2))


# ---------------------------------------------------------------------------
# LW


def lw_search(y: TilingSource, F, eps: float, k_max: int = 8, action=None,
              window_r: float | None = None) -> LWCertificate:
    """Smallest k with perturbed copies of the central B_{1/eps} patch at
    every k*v_i + u; raises InsufficientWindowError when the window runs out."""
    if eps <= 0:
        raise PatchworkError("eps must be positive")
    F = _as_pattern(F)
    V = F.as_array()
    y_prime = minimal_patch(y, origin_ball(1.0 / eps))
    span = float(np.abs(np.vstack([t.outer for t in y_prime])).max()) * math.sqrt(2.0)
    vmax = float(np.linalg.norm(V, axis=1).max())
    W = span + k_max * vmax + 2.0 + eps
    if window_r is not None:
        W = min(W, window_r)
    if W > y.max_window_radius():
        W = y.max_window_radius()
    big = y.window(W)
    S = _copy_translations(y_prime, big)
    if len(S) == 0:
        raise InsufficientWindowError(
            f"no translated copy of the B_{1.0 / eps:g} patch in a radius-{W:g} window")
    tree = cKDTree(S)
    for k in range(1, k_max + 1):
        # anchor u on an exact copy at the first pattern point
        u_cands = S - k * V[0]
        order = np.lexsort((u_cands[:, 1], u_cands[:, 0],
                            np.round(np.linalg.norm(u_cands, axis=1), 12)))
        for idx in order:
            u = u_cands[idx]
            gs = []
            for v in V:
                d, j = tree.query(k * v + u)
                if d >= eps:
                    gs = None
                    break
                w = S[j] - (k * v + u)
                gs.append(Translation((float(w[0]), float(w[1]))))
            if gs is not None:
                return LWCertificate(y_prime, float(eps), k,
                                     (float(u[0]), float(u[1])), tuple(gs), F)
    raise InsufficientWindowError(
        f"no scale k <= {k_max} admits perturbed copies in a radius-{W:g} window")


def verify_lw(cert: LWCertificate, y: TilingSource) -> VerifyResult:
    """Independent recheck: support ball, norm bounds, and containment of
    every translated perturbed copy in ``y``."""
    if not support_contains_ball(cert.y_prime, origin_ball(1.0 / cert.eps)):
        return VerifyResult(False, "support of y' misses the 1/eps ball")
    V = cert.F.as_array()
    if len(cert.gs) != len(V):
        return VerifyResult(False, "one element per pattern point required")
    images = []
    reach = 0.0
    for v, g in zip(V, cert.gs):
        if not g_norm(g) < cert.eps:
            return VerifyResult(False, f"perturbation norm {g_norm(g):.4g} >= eps")
        shift = cert.k * v + np.asarray(cert.u, dtype=float)
        tiles = [t.translated(np.asarray(g.v) + shift) for t in cert.y_prime]
        images.append(tiles)
        reach = max(reach, max(float(np.abs(t.outer).max()) for t in tiles))
    W = reach * math.sqrt(2.0) + 1.0
    if W > y.max_window_radius():
        return VerifyResult(False, "window too small to verify containment")
    big = y.window(W)
    for i, tiles in enumerate(images):
        for t in tiles:
            if not big.has_tile(t):
                return VerifyResult(False, f"copy {i} leaves the tiling")
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# BT


def _ceil_frac(lam: float) -> tuple[int, float]:
    k = int(math.ceil(lam - 1e-12))
    return max(k, 1), max(float(k) - float(lam), 0.0)


def _int_combination(V: np.ndarray, target: np.ndarray, q_max: int):
    """Integer coefficients u with u @ V = target, or None."""
    l = V.shape[0]
    if l == V.shape[1]:
        try:
            sol = np.linalg.solve(V.T, target)
        except np.linalg.LinAlgError:
            sol = None
        if sol is not None:
            r = np.rint(sol)
            if np.abs(sol - r).max() < 1e-9 and np.abs(r).max() <= q_max + 1e-9:
                return r.astype(int)
            return None
    # small exhaustive fallback
    order = sorted(range(-q_max, q_max + 1), key=lambda x: (abs(x), x < 0))
    for combo in itertools.product(order, repeat=l):
        if np.abs(np.asarray(combo, dtype=float) @ V - target).max() < 1e-9:
            return np.asarray(combo, dtype=int)
    return None


def bt_search(y: TilingSource, F, eps: float, lambdas, action=None,
              q_max: int = 6) -> BTCertificate:
    """One distortion bound q serving every requested scale lambda.

    Periodic sources use an exact lattice solver; other sources run a
    window search over exact-window-equality classes of integer anchor
    points (a Brown-style scan that must produce one color working for
    every ceil(lambda) simultaneously, which pins down a single y').
    """
    if eps <= 0:
        raise PatchworkError("eps must be positive")
    lambdas = [float(l) for l in lambdas]
    if not lambdas or min(lambdas) <= 0:
        raise PatchworkError("lambdas must be positive")
    F = _as_pattern(F)
    if isinstance(y, PeriodicSource):
        return _bt_lattice(y, F, eps, lambdas, q_max)
    return _bt_window(y, F, eps, lambdas, q_max)


def _bt_lattice(y: PeriodicSource, F: Pattern, eps: float, lambdas, q_max: int) -> BTCertificate:
    V = F.as_array()
    l = len(V)
    y_prime = minimal_patch(y, origin_ball(1.0 / eps))
    L = y.lattice
    Linv = np.linalg.inv(L.T)
    order = sorted(range(-q_max, q_max + 1), key=lambda x: (abs(x), x < 0))
    entries = []
    q_used = 0.0
    for lam in lambdas:
        _, frac = _ceil_frac(lam)
        alphas, gs = [], []
        for i in range(l):
            found = None
            for u in itertools.product(order, repeat=l):
                alpha = np.asarray(u, dtype=float)
                alpha[i] += frac
                if np.abs(alpha).max() > q_max + 1:
                    continue
                target = lam * V[i] + alpha @ V  # t_lambda = 0
                resid = target - np.rint(Linv @ target) @ L
                if np.linalg.norm(resid) < eps:
                    found = (alpha, Translation((-float(resid[0]), -float(resid[1]))))
                    break
            if found is None:
                raise InsufficientWindowError(
                    f"no distortion with |alpha| <= {q_max} reaches the lattice "
                    f"for lambda={lam:g}")
            alphas.append(tuple(float(a) for a in found[0]))
            gs.append(found[1])
            q_used = max(q_used, float(np.abs(found[0]).max()))
        entries.append(BTEntry(lam, (0.0, 0.0), tuple(alphas), tuple(gs)))
    q = int(math.ceil(q_used - 1e-9))
    return BTCertificate(y_prime, float(eps), q, F, tuple(entries))


def _window_color_grid(y: TilingSource, R: float, N: int):
    """Exact-window-equality classes over integer anchors [0, N)^2."""
    W = y.max_window_radius()
    big = y.window(W)
    cents = np.array([t.centroid for t in big])
    circ = np.array([np.linalg.norm(t.outer - t.centroid, axis=1).max() for t in big])
    tree = cKDTree(cents)
    ids: dict = {}
    grid = np.empty((N, N), dtype=int)
    for a1 in range(N):
        for a2 in range(N):
            c = np.array([a1, a2], dtype=float)
            ball = Ball((float(a1), float(a2)), R)
            key_parts = []
            for j in tree.query_ball_point(c, R + float(circ.max())):
                t = big[int(j)]
                d = float(np.linalg.norm(t.centroid - c))
                if d <= R - circ[j] or t.ball_overlap_area(ball) > EPS_GEOM:
                    key_parts.append(t.translated(-c).key())
            key = frozenset(key_parts)
            grid[a1, a2] = ids.setdefault(key, len(ids))
    return Coloring(2, (N, N), grid), big


def _bt_window(y: TilingSource, F: Pattern, eps: float, lambdas, q_max: int) -> BTCertificate:
    V = F.integer_points()
    l = len(V)
    if V.shape[1] != 2:
        raise PatchworkError("window backend needs a planar integer pattern")
    R = 1.0 / eps
    maxwin = y.max_window_radius()
    margin = R + 3.0
    N = int(math.floor((maxwin - margin) / math.sqrt(2.0)))
    if N < 3:
        raise InsufficientWindowError(
            f"window radius {maxwin:g} leaves no room for B_{R:g} anchor classes")
    coloring, _ = _window_color_grid(y, R, N)
    basis = np.vstack([np.zeros((1, 2), dtype=int), V])
    ks = sorted({_ceil_frac(lam)[0] for lam in lambdas})
    hit = None
    for q in range(q_max + 1):
        for color in coloring.palette():
            per_k = {}
            for k in ks:
                feas = _feasible_t(coloring, k * basis, q, color)
                idx = np.argwhere(feas)
                if not len(idx):
                    per_k = None
                    break
                per_k[k] = np.asarray(idx[0], dtype=int)
            if per_k is not None:
                hit = (q, color, per_k)
                break
        if hit:
            break
    if hit is None:
        raise InsufficientWindowError(
            f"no common anchor class serves all scales in a {N}x{N} window "
            f"with q <= {q_max}")
    q_brown, color, per_k = hit
    data = {}
    for k in ks:
        t = per_k[k]
        vs = _recover_vs(coloring, k * basis, t, q_brown, color)
        data[k] = (t, [np.asarray(v, dtype=int) for v in vs])
    # the shared central patch, anchored at the base point of the smallest k
    k0 = ks[0]
    t0, vs0 = data[k0]
    p0 = t0 + vs0[0]
    patch0 = minimal_patch(y, Ball((float(p0[0]), float(p0[1])), R))
    y_prime = patch0.translated(-p0.astype(float))

    entries = []
    q_used = 0.0
    for lam in lambdas:
        k, frac = _ceil_frac(lam)
        t, vs = data[k]
        base = t + vs[0]
        alphas, gs = [], []
        for i in range(l):
            vhat = vs[i + 1] - vs[0] + (t + vs[0]) - base  # = vs[i+1] - vs[0]
            u = _int_combination(V.astype(float), vhat.astype(float), 2 * q_max + 2)
            if u is None:
                raise InsufficientWindowError(
                    "pattern does not integrally span the required distortion")
            alpha = u.astype(float)
            alpha[i] += frac
            alphas.append(tuple(float(a) for a in alpha))
            gs.append(Translation((0.0, 0.0)))
            q_used = max(q_used, float(np.abs(alpha).max()))
        t_lam = base.astype(float)  # shift from the origin-anchored y'
        entries.append(BTEntry(lam, (float(t_lam[0]), float(t_lam[1])),
                               tuple(alphas), tuple(gs)))
    q = int(math.ceil(max(q_used, float(q_brown)) - 1e-9))
    return BTCertificate(y_prime, float(eps), q, F, tuple(entries))


def verify_bt(cert: BTCertificate, y: TilingSource) -> VerifyResult:
    """Independent recheck of every clause of a BT certificate."""
    if not support_contains_ball(cert.y_prime, origin_ball(1.0 / cert.eps)):
        return VerifyResult(False, "support of y' misses the 1/eps ball")
    V = cert.F.as_array()
    l = len(V)
    shifts = []
    for e in cert.entries:
        if len(e.alphas) != l or len(e.gs) != l:
            return VerifyResult(False, f"lambda={e.lam:g}: entry arity mismatch")
        k, frac = _ceil_frac(e.lam)
        for i in range(l):
            alpha = np.asarray(e.alphas[i], dtype=float)
            if np.abs(alpha).max() > cert.q + 1e-12:
                return VerifyResult(False, f"lambda={e.lam:g}: |alpha| exceeds q")
            off = alpha.copy()
            off[i] -= frac
            if np.abs(off - np.rint(off)).max() > 1e-9:
                return VerifyResult(
                    False, f"lambda={e.lam:g}: alpha_{i} fractional structure broken")
            if not g_norm(e.gs[i]) < cert.eps:
                return VerifyResult(False, f"lambda={e.lam:g}: perturbation norm >= eps")
            w = alpha @ V
            shifts.append((e, i, e.lam * V[i] + np.asarray(e.t, dtype=float) + w))
    reach = 0.0
    pts = np.abs(np.vstack([t.outer for t in cert.y_prime])).max()
    for _, _, s in shifts:
        reach = max(reach, (pts + float(np.abs(s).max()) + 1.0) * math.sqrt(2.0))
    if reach > y.max_window_radius():
        return VerifyResult(False, "window too small to verify containment")
    big = y.window(reach)
    for e, i, s in shifts:
        gv = np.asarray(e.gs[i].v, dtype=float) if isinstance(e.gs[i], Translation) else None
        for t in cert.y_prime:
            img = t.translated(gv + s) if gv is not None else t.transformed(e.gs[i]).translated(s)
            if not big.has_tile(img):
                return VerifyResult(
                    False, f"lambda={e.lam:g}, i={i}: copy leaves the tiling")
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# Local isomorphism


def _min_enclosing_circle(points: np.ndarray):
    """Exact smallest enclosing circle by brute force over 2/3-point supports."""
    pts = np.unique(np.round(points, 12), axis=0)

    def inside(c, r):
        return bool(np.all(np.linalg.norm(pts - c, axis=1) <= r + 1e-9))

    best = None
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            c = 0.5 * (pts[i] + pts[j])
            r = 0.5 * float(np.linalg.norm(pts[i] - pts[j]))
            if inside(c, r) and (best is None or r < best[1]):
                best = (c, r)
    if best is not None:
        return best
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                c = _circumcenter(pts[i], pts[j], pts[k])
                if c is None:
                    continue
                r = float(np.linalg.norm(pts[i] - c))
                if inside(c, r) and (best is None or r < best[1]):
                    best = (c, r)
    if best is None:
        raise PatchworkError("could not bound the patch by a circle")
    return best


def _circumcenter(a, b, c):
    d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
    if abs(d) < 1e-14:
        return None
    ux = ((a @ a) * (b[1] - c[1]) + (b @ b) * (c[1] - a[1]) + (c @ c) * (a[1] - b[1])) / d
    uy = ((a @ a) * (c[0] - b[0]) + (b @ b) * (a[0] - c[0]) + (c @ c) * (b[0] - a[0])) / d
    return np.array([ux, uy])


def local_iso_radius(y: TilingSource, p: Patch, eps: float, window_r: float):
    """Radius r such that every r-ball (sampled) in the window contains a
    perturbed translated copy of ``p``; None when the window cannot certify one.

    The value is the patch's enclosing-circle radius plus the covering
    radius of the set of copy positions, the latter measured exactly on the
    Delaunay triangulation of the copies inside the window.
    """
    if eps < 0:
        raise PatchworkError("eps must be nonnegative")
    window_r = min(window_r, y.max_window_radius())
    big = y.window(window_r)
    for t in p:
        if not big.has_tile(t):
            raise PatchworkError("patch is not a sub-patch of the tiling window")
    hull_pts = np.vstack([t.outer for t in p])
    cc, rho = _min_enclosing_circle(hull_pts)
    S = _copy_translations(p, big)
    if len(S) < 3:
        return None
    centers = S + cc
    region_r = window_r / 2.0
    tri = Delaunay(centers)
    covering = 0.0
    for simplex in tri.simplices:
        a, b, c = centers[simplex]
        cen = _circumcenter(a, b, c)
        if cen is None:
            continue
        if np.linalg.norm(cen) <= region_r:
            covering = max(covering, float(np.linalg.norm(a - cen)))
    if covering == 0.0:
        return None
    r = rho + covering
    # verification pass: sampled ball centers on a dense grid
    if not _verify_local_iso(centers, rho, r, region_r):
        return None
    return float(r)


def _verify_local_iso(centers: np.ndarray, rho: float, r: float, region_r: float) -> bool:
    tree = cKDTree(centers)
    h = r / 4.0
    xs = np.arange(-region_r, region_r + h, h)
    samples = []
    for row, yv in enumerate(np.arange(-region_r, region_r + h, h * math.sqrt(3) / 2)):
        off = 0.5 * h if row % 2 else 0.0
        for xv in xs:
            if (xv + off) ** 2 + yv ** 2 <= region_r ** 2:
                samples.append((xv + off, yv))
    if not samples:
        return True
    d, _ = tree.query(np.asarray(samples))
    return bool(np.all(d <= r - rho + 1e-9))


def verify_local_iso(y: TilingSource, p: Patch, eps: float, r: float,
                     window_r: float, samples: int = 200, seed: int = 0) -> VerifyResult:
    """Independent spot check: random r-balls in the window each contain a
    translated copy of ``p`` (up to an eps translation)."""
    rng = np.random.default_rng(seed)
    window_r = min(window_r, y.max_window_radius())
    big = y.window(window_r)
    S = _copy_translations(p, big)
    if len(S) == 0:
        return VerifyResult(False, "no copies at all")
    cc, rho = _min_enclosing_circle(np.vstack([t.outer for t in p]))
    tree = cKDTree(S + cc)
    region_r = window_r / 2.0
    for _ in range(samples):
        ang = 2 * math.pi * rng.random()
        rad = region_r * math.sqrt(rng.random())
        c = np.array([rad * math.cos(ang), rad * math.sin(ang)])
        d, _ = tree.query(c)
        if d > r - rho + eps + 1e-9:
            return VerifyResult(False, f"ball at {tuple(np.round(c, 3))} misses all copies")
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# Return sets


def return_set(y: TilingSource, delta: float, window_r: float = 2.0,
               action=None, theta=None, spacing: float | None = None) -> dict:
    """Sampled return vectors: grid points t with d(T_{-t} y, y) < delta.

    Reports the largest distance from any sample to the nearest return
    vector (``max_gap``) and whether the return set is relatively dense at
    the window scale.
    """
    if not 0 < delta:
        raise PatchworkError("delta must be positive")
    spacing = spacing or max(delta, 0.25)
    ticks = np.arange(-window_r, window_r + spacing / 2, spacing)
    samples = [np.array([a, b]) for a in ticks for b in ticks
               if a * a + b * b <= window_r * window_r + 1e-12]
    vectors = []
    for t in samples:
        d = tiling_distance(y.translated((-float(t[0]), -float(t[1]))), y,
                            action, theta)
        if d.hi < delta:
            vectors.append((float(t[0]), float(t[1])))
    if vectors:
        tree = cKDTree(np.asarray(vectors))
        gaps, _ = tree.query(np.asarray(samples))
        max_gap = float(gaps.max())
    else:
        max_gap = math.inf
    return {"vectors": vectors, "max_gap": max_gap,
            "relatively_dense_in_window": max_gap <= window_r}
