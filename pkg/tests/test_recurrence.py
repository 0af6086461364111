import math
from dataclasses import replace

import numpy as np
import pytest

from patchwork.errors import InsufficientWindowError, PatchworkError
from patchwork.geometry import Patch, Pattern
from patchwork.recurrence import (BTEntry, bt_search, local_iso_radius,
                                  lw_search, return_set, verify_bt,
                                  verify_local_iso, verify_lw)
from patchwork.groups import Translation, translation_action

SQRT2 = math.sqrt(2.0)
F3 = Pattern([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
F2 = Pattern([(1.0, 0.0), (0.0, 1.0)])


class TestLW:
    def test_grid_exact_at_scale_one(self, grid):
        cert = lw_search(grid, F3, 0.5)
        assert cert.k == 1 and cert.u == (0.0, 0.0)
        assert all(g.v == (0.0, 0.0) for g in cert.gs)
        assert verify_lw(cert, grid)

    def test_verify_rejects_shifted_base(self, grid):
        cert = lw_search(grid, F3, 0.5)
        bad = replace(cert, u=(0.5, 0.5))
        res = verify_lw(bad, grid)
        assert not res and "leaves the tiling" in res.reason

    def test_verify_rejects_large_perturbation(self, grid):
        cert = lw_search(grid, F3, 0.5)
        gs = (Translation((0.6, 0.0)),) + cert.gs[1:]
        res = verify_lw(replace(cert, gs=gs), grid)
        assert not res and "norm" in res.reason

    def test_bad_eps(self, grid):
        with pytest.raises(PatchworkError):
            lw_search(grid, F3, 0.0)


class TestBT:
    def test_grid_fractional_structure(self, grid):
        lams = [1.0, SQRT2, 2.5, 10.0]
        cert = bt_search(grid, F2, 0.5, lams)
        assert cert.q == 1
        assert verify_bt(cert, grid)
        for e in cert.entries:
            assert e.t == (0.0, 0.0)
            frac = math.ceil(e.lam - 1e-12) - e.lam
            for i, alpha in enumerate(e.alphas):
                # only the i-th coefficient carries the non-integer part
                assert (alpha[i] - frac) == pytest.approx(round(alpha[i] - frac),
                                                          abs=1e-9)
                other = alpha[1 - i]
                assert other == pytest.approx(round(other), abs=1e-9)
        by_lam = {e.lam: e for e in cert.entries}
        assert by_lam[SQRT2].alphas[0][0] == pytest.approx(2.0 - SQRT2, abs=1e-12)
        assert by_lam[2.5].alphas[1][1] == pytest.approx(0.5, abs=1e-12)

    def test_entry_distortion_vector(self, grid):
        cert = bt_search(grid, F2, 0.5, [SQRT2])
        e = cert.entries[0]
        w0 = e.w(cert.F, 0)
        assert np.allclose(w0, np.asarray(e.alphas[0]) @ F2.as_array())

    def test_chair_window_backend(self, chair5):
        cert = bt_search(chair5, F2, 1.0, [1.0, 2.0])
        assert cert.q == 2
        assert verify_bt(cert, chair5)

    def test_chair_insufficient_q(self, chair5):
        with pytest.raises(InsufficientWindowError):
            bt_search(chair5, F2, 1.0, [1.0, 2.0], q_max=0)

    def test_verify_rejects_alpha_beyond_q(self, grid):
        cert = bt_search(grid, F2, 0.5, [SQRT2])
        e = cert.entries[0]
        frac = 2.0 - SQRT2
        big = BTEntry(e.lam, e.t, ((cert.q + 1 + frac, 0.0), e.alphas[1]), e.gs)
        res = verify_bt(replace(cert, entries=(big,)), grid)
        assert not res and "exceeds q" in res.reason

    def test_verify_rejects_broken_fraction(self, grid):
        cert = bt_search(grid, F2, 0.5, [SQRT2])
        e = cert.entries[0]
        bad = BTEntry(e.lam, e.t, ((0.3, 0.0), e.alphas[1]), e.gs)
        res = verify_bt(replace(cert, entries=(bad,)), grid)
        assert not res and "fractional structure" in res.reason

    def test_verify_rejects_large_perturbation(self, grid):
        cert = bt_search(grid, F2, 0.5, [SQRT2])
        e = cert.entries[0]
        bad = BTEntry(e.lam, e.t, e.alphas, (Translation((0.6, 0.0)), e.gs[1]))
        res = verify_bt(replace(cert, entries=(bad,)), grid)
        assert not res and "norm" in res.reason

    def test_bad_inputs(self, grid):
        with pytest.raises(PatchworkError):
            bt_search(grid, F2, 0.5, [])
        with pytest.raises(PatchworkError):
            bt_search(grid, F2, 0.5, [-1.0])
        with pytest.raises(PatchworkError):
            bt_search(grid, F2, 0.0, [1.0])


def _unit_cell(grid):
    return Patch([t for t in grid.window(1.2)
                  if abs(t.centroid[0] - 0.5) < 1e-9
                  and abs(t.centroid[1] - 0.5) < 1e-9])


class TestLocalIso:
    def test_grid_cell_radius_is_sqrt2(self, grid):
        cell = _unit_cell(grid)
        assert len(cell) == 1
        r = local_iso_radius(grid, cell, 0.0, 12.0)
        assert r == SQRT2  # float-exact: circumradius 1/sqrt2 + covering 1/sqrt2
        assert verify_local_iso(grid, cell, 0.0, r, 12.0)

    def test_chair_supertile(self, chair5):
        sup = Patch([t for t in chair5.tiles_at_level(1)
                     if all(-1e-9 <= p[0] <= 4 + 1e-9
                            and -1e-9 <= p[1] <= 4 + 1e-9 for p in t.outer)])
        assert len(sup) == 4
        wr = chair5.max_window_radius()
        r = local_iso_radius(chair5, sup, 0.05, wr)
        assert r == pytest.approx(10.82842712474619, abs=1e-9)
        assert verify_local_iso(chair5, sup, 0.05, r, wr)

    def test_smaller_radius_fails_verification(self, grid):
        cell = _unit_cell(grid)
        res = verify_local_iso(grid, cell, 0.0, 0.8, 12.0)
        assert not res

    def test_foreign_patch_rejected(self, grid):
        cell = _unit_cell(grid).translated((0.5, 0.0))
        with pytest.raises(PatchworkError):
            local_iso_radius(grid, cell, 0.0, 12.0)

    def test_negative_eps(self, grid):
        with pytest.raises(PatchworkError):
            local_iso_radius(grid, _unit_cell(grid), -0.1, 12.0)


class TestReturnSet:
    def test_grid_returns_are_near_lattice(self, grid, t_action, th_id):
        rep = return_set(grid, 0.3, window_r=2.0, action=t_action, theta=th_id)
        assert rep["relatively_dense_in_window"]
        for v in rep["vectors"]:
            assert math.hypot(v[0] - round(v[0]), v[1] - round(v[1])) < 0.3

    def test_lattice_points_included(self, grid, t_action, th_id):
        rep = return_set(grid, 0.3, window_r=2.0, action=t_action, theta=th_id,
                         spacing=0.5)
        assert (0.0, 0.0) in rep["vectors"]
        assert (1.0, 0.0) in rep["vectors"]

    def test_bad_delta(self, grid, t_action, th_id):
        with pytest.raises(PatchworkError):
            return_set(grid, 0.0, action=t_action, theta=th_id)
