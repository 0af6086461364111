"""Impact functions: bounds on how far a perturbation of a given size can
move points at a given radius.

An impact function theta(s, b) is defined for s > sqrt(2), b >= 0 and must
be strictly increasing in b, nondecreasing in s, subadditive in b, and
continuous with theta(s, 0) = 0.  Two members are provided: the identity
(theta = b, suits isometries) and the affine one (theta = s*b + b, suits
scalings).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

S_MIN = math.sqrt(2.0)


@dataclass(frozen=True)
class ThetaFn:
    name: str
    fn: callable = field(repr=False)

    def __call__(self, s: float, b: float) -> float:
        if not s > S_MIN:
            raise DomainError(f"impact functions require s > sqrt(2), got s={s}")
        if b < 0:
            raise DomainError(f"perturbation size must be nonnegative, got {b}")
        return self.fn(s, b)


def theta_identity() -> ThetaFn:
    return ThetaFn("identity", lambda s, b: b)


def theta_affine() -> ThetaFn:
    return ThetaFn("affine", lambda s, b: s * b + b)


def theta_by_name(name: str) -> ThetaFn:
    try:
        return {"identity": theta_identity, "affine": theta_affine}[name]()
    except KeyError:
        raise DomainError(f"unknown impact function {name!r}") from None


def theta_eval(theta: ThetaFn, s: float, b: float) -> float:
    return theta(s, b)


def check_theta_axioms(theta, s_grid=None, b_grid=None, step: float = 1e-3) -> dict:
    """Check monotonicity, subadditivity and theta(s,0)=0 on sample grids.

    Returns {"ok": bool, "failures": [(axiom, point), ...]} with the first
    counterexample per axiom.  ``theta`` may be a ThetaFn or a raw callable
    (raw callables let tests probe functions outside the family).
    """
    if s_grid is None:
        s_grid = [S_MIN + 0.01 * (1 + i) + 0.15 * i for i in range(50)]
    if b_grid is None:
        b_grid = [0.05 * i for i in range(50)]
    ev = theta if callable(theta) and not isinstance(theta, ThetaFn) else theta.__call__
    failures = []

    def record(axiom, point):
        if not any(a == axiom for a, _ in failures):
            failures.append((axiom, point))

    for s in s_grid:
        for b in b_grid:
            if not ev(s, b + step) > ev(s, b):  # strict increase in b
                record("increasing_in_b", (s, b))
            if ev(s + step, b) < ev(s, b) - 1e-15:  # nondecreasing in s
                record("nondecreasing_in_s", (s, b))
            # continuity probe: small argument change, small value change
            if abs(ev(s, b + step) - ev(s, b)) > 1e3 * step + 1e-12:
                record("continuity", (s, b))
        if abs(ev(s, 0.0)) > 1e-15:
            record("zero_at_zero", (s, 0.0))
        for a in b_grid:
            for b in b_grid:
                if ev(s, a + b) > ev(s, a) + ev(s, b) + 1e-12:
                    record("subadditive_in_b", (s, a, b))
    return {"ok": not failures, "failures": failures}


def check_g5(action, theta: ThetaFn, samples=100, seed=0) -> dict:
    """Containment test: perturbing a patch supported outside B_s keeps the
    image outside the ball shrunk by theta(s, |g|).

    Draws random square patches at distance > s from the origin and random
    admissible elements, and verifies no image point enters the shrunken
    ball.  Returns {"ok": bool, "failures": [...]}.
    """
    import numpy as np

    from .geometry import Patch, Tile
    from . import groups as G

    rng = np.random.default_rng(seed)
    failures = []
    for trial in range(samples):
        s = S_MIN + 0.2 + 2.0 * rng.random()
        # square tile whose every point is beyond B_s: the centre sits at
        # distance > s plus the tile's circumradius
        ang = 2 * math.pi * rng.random()
        half = 0.4
        d0 = s + half * math.sqrt(2.0) + 0.05 + rng.random()
        cx, cy = d0 * math.cos(ang), d0 * math.sin(ang)
        sq = np.array([[cx - half, cy - half], [cx + half, cy - half],
                       [cx + half, cy + half], [cx - half, cy + half]])
        patch = Patch([Tile(sq)])
        if action.kind in ("translation", "rigid"):
            v = rng.normal(size=2) * 0.1
            g = G.Translation(tuple(v))
            if action.kind == "rigid" and trial % 2:
                g = G.Rigid(rng.normal() * 0.1, tuple(v))
        elif action.kind == "homothety":
            g = G.Homothety(math.exp(rng.normal() * 0.05), tuple(rng.normal(size=2) * 0.05))
        else:
            g = G.Piecewise(((0, G.Translation(tuple(rng.normal(size=2) * 0.1))),),
                            action.base_kind)
        b = action.norm(g)
        impact = theta(s, b)
        if impact >= S_MIN / 2:
            continue  # only small-impact perturbations are constrained
        image = action.apply(g, patch)
        shrunk = s - impact
        bad = min(t.min_dist_origin() for t in image)
        if bad < shrunk - 1e-9:
            failures.append({"trial": trial, "s": s, "norm": b,
                             "min_dist": bad, "shrunk": shrunk})
    return {"ok": not failures, "failures": failures}
