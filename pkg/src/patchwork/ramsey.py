"""Combinatorial recurrence searches on finite coloring windows.

The solvers look for monochromatic homothetic copies of a finite pattern,
either exact (Gallai-style) or distorted by a bounded integer perturbation
cube (Brown-style), plus the lift of the latter to finite orbit systems.
All searches are window-bounded: a ``None`` result means "not found in
this window", never a nonexistence claim.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import maximum_filter

from .errors import InsufficientWindowError, PatchworkError
from .geometry import Pattern


@dataclass(frozen=True)
class Coloring:
    """Total coloring of an integer box [0,N1) x ... x [0,Nn)."""

    dim: int
    shape: tuple
    colors: np.ndarray = field(repr=False)

    def __post_init__(self):
        shape = tuple(int(s) for s in self.shape)
        arr = np.asarray(self.colors).reshape(shape)
        if self.dim != len(shape):
            raise PatchworkError(f"dim {self.dim} does not match shape {shape}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "colors", arr)

    @classmethod
    def from_fn(cls, shape, fn):
        shape = tuple(int(s) for s in shape)
        grid = np.fromiter(
            (fn(*idx) for idx in itertools.product(*[range(s) for s in shape])),
            count=int(np.prod(shape)), dtype=int).reshape(shape)
        return cls(len(shape), shape, grid)

    def in_window(self, point) -> bool:
        return all(0 <= int(p) < s for p, s in zip(point, self.shape))

    def at(self, point):
        if not self.in_window(point):
            raise PatchworkError(f"point {tuple(point)} outside window {self.shape}")
        return self.colors[tuple(int(p) for p in point)]

    def palette(self):
        return sorted(np.unique(self.colors).tolist())


@dataclass(frozen=True)
class PerturbationCube:
    """Integer cube {-q,...,q}^n."""

    q: int
    dim: int

    def __post_init__(self):
        if self.q < 0:
            raise PatchworkError("cube radius must be nonnegative")

    def __contains__(self, v):
        return len(v) == self.dim and all(abs(int(c)) <= self.q for c in v)

    def scan(self):
        """Members in deterministic order: per coordinate 0, 1, -1, 2, -2, ..."""
        order = sorted(range(-self.q, self.q + 1), key=lambda x: (abs(x), x < 0))
        return itertools.product(order, repeat=self.dim)


@dataclass(frozen=True)
class BrownCertificate:
    q: int
    k: int
    t: tuple
    vs: tuple  # one integer vector per pattern point
    color: object

    def points(self, F) -> list:
        P = _int_pattern(F)
        return [tuple(int(self.k) * p + np.asarray(self.t, dtype=int) + np.asarray(v, dtype=int))
                for p, v in zip(P, self.vs)]


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    reason: str | None = None

    def __bool__(self):
        return self.ok


def _int_pattern(F) -> np.ndarray:
    if isinstance(F, Pattern):
        return F.integer_points()
    arr = np.asarray(F)
    if arr.ndim == 1:
        arr = arr[:, None]
    return np.rint(arr).astype(int)


# ---------------------------------------------------------------------------
# Gallai


def gallai_search(c: Coloring, F, k_max: int):
    """Smallest (k, t), k ascending then t lexicographic, with k*F + t
    monochromatic inside the window; None if the window has no such copy."""
    if k_max < 1:
        raise PatchworkError("k_max must be >= 1")
    P = _int_pattern(F)
    if P.shape[1] != c.dim:
        raise PatchworkError("pattern dimension does not match coloring")
    N = np.asarray(c.shape, dtype=int)
    for k in range(1, k_max + 1):
        offs = k * P
        lo = np.maximum(0, -offs.min(axis=0))
        hi = N - np.maximum(0, offs.max(axis=0))
        if np.any(hi <= lo):
            continue
        ref = None
        same = None
        for off in offs:
            sl = tuple(slice(int(l + o), int(h + o)) for l, h, o in zip(lo, hi, off))
            block = c.colors[sl]
            if ref is None:
                ref = block
                same = np.ones(block.shape, dtype=bool)
            else:
                same &= block == ref
        idx = np.argwhere(same)
        if len(idx):
            t = tuple(int(v) for v in (idx[0] + lo))
            return k, t
    return None


# ---------------------------------------------------------------------------
# Brown


def _feasible_t(c: Coloring, offs: np.ndarray, q: int, color) -> np.ndarray:
    """Boolean array over t in the window: every offset reachable in color
    within the q-cube."""
    M = (c.colors == color)
    pad_before = np.maximum(0, -offs.min(axis=0))
    pad_after = np.maximum(0, offs.max(axis=0))
    Mp = np.pad(M, [(int(b), int(a)) for b, a in zip(pad_before, pad_after)])
    dil = maximum_filter(Mp.astype(np.uint8), size=2 * q + 1,
                         mode="constant", cval=0).astype(bool) if q > 0 else Mp
    feas = None
    for off in offs:
        sl = tuple(slice(int(b + o), int(b + o + n))
                   for b, o, n in zip(pad_before, off, c.shape))
        block = dil[sl]
        feas = block.copy() if feas is None else (feas & block)
    return feas


def _recover_vs(c: Coloring, offs: np.ndarray, t: np.ndarray, q: int, color):
    vs = []
    cube = PerturbationCube(q, c.dim)
    for off in offs:
        base = t + off
        found = None
        for v in cube.scan():
            p = base + np.asarray(v, dtype=int)
            if c.in_window(p) and c.colors[tuple(p)] == color:
                found = tuple(int(x) for x in v)
                break
        if found is None:
            raise PatchworkError("feasibility array and recovery disagree")
        vs.append(found)
    return tuple(vs)


def brown_search(c: Coloring, F, k: int, q_max: int):
    """Certificate with minimal q, then lexicographic t, then cube-scan-order
    v's; exhaustive over the window."""
    if k < 1 or q_max < 0:
        raise PatchworkError("need k >= 1 and q_max >= 0")
    P = _int_pattern(F)
    if P.shape[1] != c.dim:
        raise PatchworkError("pattern dimension does not match coloring")
    offs = k * P
    palette = c.palette()
    for q in range(q_max + 1):
        best_t, best_color = None, None
        for color in palette:
            feas = _feasible_t(c, offs, q, color)
            idx = np.argwhere(feas)
            if not len(idx):
                continue
            t = idx[0]
            if best_t is None or tuple(t) < tuple(best_t):
                best_t, best_color = t, color
        if best_t is not None:
            vs = _recover_vs(c, offs, np.asarray(best_t, dtype=int), q, best_color)
            return BrownCertificate(q, k, tuple(int(v) for v in best_t), vs, best_color)
    return None


def verify_brown(cert: BrownCertificate, c: Coloring, F) -> VerifyResult:
    """Independent recheck of a certificate: cube bounds, window membership
    and color equality for every pattern point."""
    P = _int_pattern(F)
    if len(cert.vs) != len(P):
        return VerifyResult(False, "one perturbation per pattern point required")
    for i, (p, v) in enumerate(zip(P, cert.vs)):
        if len(v) != c.dim:
            return VerifyResult(False, f"v[{i}] has wrong dimension")
        if max(abs(int(x)) for x in v) > cert.q:
            return VerifyResult(False, f"v[{i}] leaves the q-cube")
        pt = cert.k * p + np.asarray(cert.t, dtype=int) + np.asarray(v, dtype=int)
        if not c.in_window(pt):
            return VerifyResult(False, f"point {tuple(int(x) for x in pt)} outside window")
        if c.colors[tuple(int(x) for x in pt)] != cert.color:
            return VerifyResult(False, f"point {tuple(int(x) for x in pt)} has wrong color")
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# Largeness detectors


def largeness(members, q: int, L: int, window: int | None = None) -> dict:
    """Gap/run statistics of a subset of [0, window) (1D scan order).

    syndetic_gap: largest gap between consecutive members (inf if empty);
    thick_run: length of the longest stretch whose internal gaps are <= q;
    piecewise_syndetic: thick_run >= L.
    """
    pts = sorted(int(m) for m in set(members))
    if not pts:
        return {"syndetic_gap": math.inf, "thick_run": 0, "piecewise_syndetic": False}
    gaps = [b - a for a, b in zip(pts[:-1], pts[1:])]
    syndetic_gap = max(gaps) if gaps else 0
    if window is not None and window - 1 > pts[-1]:
        # the trailing hole also bounds the gap structure of the window
        syndetic_gap = max(syndetic_gap, window - 1 - pts[-1])
    # longest stretch (span in integers) whose internal gaps stay <= q
    spans = []
    s = pts[0]
    prev = pts[0]
    for p in pts[1:]:
        if p - prev > q:
            spans.append(prev - s + 1)
            s = p
        prev = p
    spans.append(prev - s + 1)
    thick_run = max(spans)
    return {"syndetic_gap": syndetic_gap, "thick_run": thick_run,
            "piecewise_syndetic": thick_run >= L}


# ---------------------------------------------------------------------------
# Topological lift


class OrbitSystem:
    """Finite window of an orbit under l commuting maps.

    ``maps`` act on abstract points; ``dist`` is the system metric.
    Coloring comes either from ``color_fn`` (an exact invariant) or from an
    axis-aligned box partition of ``embed``'s coordinates with cells of
    diameter < eps.
    """

    def __init__(self, maps, base, dist, embed=None, color_fn=None):
        self.maps = list(maps)
        self.l = len(self.maps)
        if self.l == 0:
            raise PatchworkError("need at least one map")
        self.base = base
        self.dist = dist
        self.embed = embed
        self.color_fn = color_fn
        self._orbit: dict[tuple, object] = {}

    def point(self, a) -> object:
        """T_1^{a_1} ... T_l^{a_l} applied to the base point (a_j >= 0)."""
        a = tuple(int(x) for x in a)
        if any(x < 0 for x in a):
            raise PatchworkError("orbit window uses nonnegative exponents")
        if a in self._orbit:
            return self._orbit[a]
        if all(x == 0 for x in a):
            p = self.base
        else:
            j = next(i for i, x in enumerate(a) if x > 0)
            prev = a[:j] + (a[j] - 1,) + a[j + 1:]
            p = self.maps[j](self.point(prev))
        self._orbit[a] = p
        return p

    def fresh_point(self, a) -> object:
        """Same as point() but recomputed by direct iteration (no cache)."""
        p = self.base
        for j, n in enumerate(a):
            for _ in range(int(n)):
                p = self.maps[j](p)
        return p


@dataclass(frozen=True)
class TopoBrownWitness:
    k: int
    t: tuple
    v0: tuple
    us: tuple  # u_i = v_i - v_0 for i = 1..l
    base_exp: tuple  # t + v_0: x_k = T^{base_exp}(y)
    image_exps: tuple  # k*e_i + t + v_i per i


@dataclass(frozen=True)
class TopoBrownResult:
    q: int  # max infinity-norm of the u vectors actually used
    brown_q: int  # cube radius of the underlying lattice search
    eps: float
    color: object
    witnesses: tuple  # TopoBrownWitness per k, in k_set order


def topological_brown(sys: OrbitSystem, eps: float, k_set, window: int,
                      q_max: int = 8) -> TopoBrownResult:
    """Proof-pipeline search: color the exponent lattice by eps-cells of the
    orbit, then find one color carrying a Brown certificate for every k.

    All witnesses share a single color, which forces the cross-k closeness
    d(x_k, x_k') < eps in addition to the per-k recurrence inequalities.
    """
    if eps <= 0:
        raise PatchworkError("eps must be positive")
    k_set = sorted(set(int(k) for k in k_set))
    if not k_set or k_set[0] < 1:
        raise PatchworkError("k_set must contain positive integers")
    l = sys.l
    sys.point(tuple([0] * l))  # materialize base

    if sys.color_fn is not None:
        cell_of = sys.color_fn
    else:
        if sys.embed is None:
            raise PatchworkError("orbit system needs embed or color_fn")
        m = len(sys.embed(sys.base))
        h = eps / (math.sqrt(m) * (1.0 + 1e-9))

        def cell_of(p):
            return tuple(int(math.floor(c / h)) for c in sys.embed(p))

    shape = (int(window),) * l
    cell_ids: dict = {}
    flat = np.empty(shape, dtype=int)
    for a in itertools.product(*[range(s) for s in shape]):
        cell = cell_of(sys.point(a))
        flat[a] = cell_ids.setdefault(cell, len(cell_ids))
    coloring = Coloring(l, shape, flat)

    # standard basis pattern {0, e_1, ..., e_l}
    basis = np.vstack([np.zeros(l, dtype=int), np.eye(l, dtype=int)])

    for q in range(q_max + 1):
        for color in coloring.palette():
            per_k = {}
            for k in k_set:
                feas = _feasible_t(coloring, k * basis, q, color)
                idx = np.argwhere(feas)
                if not len(idx):
                    per_k = None
                    break
                per_k[k] = np.asarray(idx[0], dtype=int)
            if per_k is None:
                continue
            witnesses = []
            used_q = 0
            for k in k_set:
                t = per_k[k]
                vs = _recover_vs(coloring, k * basis, t, q, color)
                v0 = np.asarray(vs[0], dtype=int)
                us = tuple(tuple(int(x) for x in (np.asarray(v, dtype=int) - v0))
                           for v in vs[1:])
                if us:
                    used_q = max(used_q, max(max(abs(x) for x in u) for u in us))
                base_exp = tuple(int(x) for x in (t + v0))
                image_exps = tuple(tuple(int(x) for x in (k * basis[i + 1] + t
                                                          + np.asarray(vs[i + 1], dtype=int)))
                                   for i in range(l))
                witnesses.append(TopoBrownWitness(
                    k, tuple(int(x) for x in t), tuple(int(x) for x in v0),
                    us, base_exp, image_exps))
            return TopoBrownResult(used_q, q, float(eps), color, tuple(witnesses))
    raise InsufficientWindowError(
        f"no common-color certificate for all k in a {window}^{l} window with q <= {q_max}")


def verify_topological_brown(sys: OrbitSystem, res: TopoBrownResult) -> VerifyResult:
    """Independent re-measurement of the recurrence inequalities.

    Rebuilds every witness point by direct map iteration and checks
    d(x_k, T_i^k T^{u_i}(x_k)) < eps for all i plus d(x_k, x_k') < eps for
    all pairs, using only the system metric (no coloring involved).
    """
    eps = res.eps
    points = []
    for w in res.witnesses:
        xk = sys.fresh_point(w.base_exp)
        points.append(xk)
        for i, exp in enumerate(w.image_exps):
            # consistency of the bookkeeping: exp = base_exp + k e_i + u_i
            expect = list(w.base_exp)
            expect[i] += w.k
            expect = [e + u for e, u in zip(expect, w.us[i])]
            if list(exp) != expect:
                return VerifyResult(False, f"k={w.k}: exponent bookkeeping broken")
            if max(abs(u) for u in w.us[i]) > res.q:
                return VerifyResult(False, f"k={w.k}: u_{i + 1} exceeds reported q")
            img = sys.fresh_point(exp)
            d = sys.dist(xk, img)
            if not d < eps:
                return VerifyResult(False, f"k={w.k}: recurrence distance {d:.4g} >= eps")
    for (wa, pa), (wb, pb) in itertools.combinations(zip(res.witnesses, points), 2):
        d = sys.dist(pa, pb)
        if not d < eps:
            return VerifyResult(
                False, f"cross-k distance {d:.4g} >= eps for k={wa.k},{wb.k}")
    return VerifyResult(True)
