import math

import pytest

from patchwork.errors import DomainError
from patchwork.geometry import origin_ball, support_contains_ball
from patchwork.groups import Rigid, Translation
from patchwork.theta import (S_MIN, ThetaFn, check_g5, check_theta_axioms,
                             theta_affine, theta_by_name, theta_eval,
                             theta_identity)


class TestFamily:
    def test_identity_values(self, th_id):
        assert th_id(2.0, 0.3) == 0.3
        assert th_id(100.0, 0.3) == 0.3

    def test_affine_values(self, th_aff):
        assert th_aff(2.0, 0.3) == pytest.approx(2.0 * 0.3 + 0.3)

    def test_domain_small_s(self, th_id, th_aff):
        for th in (th_id, th_aff):
            with pytest.raises(DomainError):
                th(S_MIN, 0.1)
            with pytest.raises(DomainError):
                th(1.0, 0.1)

    def test_domain_negative_b(self, th_id):
        with pytest.raises(DomainError):
            th_id(2.0, -0.1)

    def test_by_name(self):
        assert theta_by_name("identity").name == "identity"
        assert theta_by_name("affine").name == "affine"
        with pytest.raises(DomainError):
            theta_by_name("nope")

    def test_eval_helper(self, th_aff):
        assert theta_eval(th_aff, 3.0, 0.5) == th_aff(3.0, 0.5)


class TestAxioms:
    def test_family_members_pass(self, th_id, th_aff):
        assert check_theta_axioms(th_id)["ok"]
        assert check_theta_axioms(th_aff)["ok"]

    def test_decreasing_rejected(self):
        res = check_theta_axioms(lambda s, b: -b)
        assert not res["ok"]
        assert any(a == "increasing_in_b" for a, _ in res["failures"])

    def test_superadditive_rejected(self):
        res = check_theta_axioms(lambda s, b: b * b)
        assert not res["ok"]
        assert any(a == "subadditive_in_b" for a, _ in res["failures"])

    def test_nonzero_at_zero_rejected(self):
        res = check_theta_axioms(lambda s, b: b + 0.5)
        assert not res["ok"]
        assert any(a == "zero_at_zero" for a, _ in res["failures"])

    def test_decreasing_in_s_rejected(self):
        res = check_theta_axioms(lambda s, b: b / s)
        assert not res["ok"]
        assert any(a == "nondecreasing_in_s" for a, _ in res["failures"])


class TestG5:
    def test_each_action_passes(self, t_action, r_action, h_action, p_action,
                                th_id, th_aff):
        for act, th in ((t_action, th_id), (r_action, th_id),
                        (h_action, th_aff), (p_action, th_id)):
            rep = check_g5(act, th, samples=100)
            assert rep["ok"], rep["failures"][:3]

    def test_report_shape(self, r_action, th_id):
        rep = check_g5(r_action, th_id, samples=10)
        assert set(rep) == {"ok", "failures"}


class TestSupportShrinkage:
    """If B_s' sits inside a patch support, a perturbation of norm b keeps
    B_{s' - theta(s', b)} inside the image support."""

    def test_translation_fixture(self, grid, t_action, th_id):
        s = 3.0
        patch = grid.window(s + 1.0)
        for v in ((0.3, 0.0), (0.0, -0.25), (0.2, 0.2)):
            g = Translation(v)
            b = t_action.norm(g)
            img = t_action.apply(g, patch)
            assert support_contains_ball(img, origin_ball(s - th_id(s, b)))

    def test_rigid_fixture(self, grid, r_action, th_id):
        s = 3.0
        patch = grid.window(s + 1.5)
        for g in (Rigid(0.2, (0.1, 0.0)), Rigid(-0.3, (0.0, 0.2))):
            b = r_action.norm(g)
            img = r_action.apply(g, patch)
            assert support_contains_ball(img, origin_ball(s - th_id(s, b)))
