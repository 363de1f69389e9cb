import numpy as np
import pytest

import inbody as ib
from inbody.errors import BadParameter, EpsOutOfRange


class TestInnerParallelBody:
    def test_square_offset(self, unit_square):
        inner = ib.inner_parallel_body(unit_square, 0.1)
        V = ib.vertex_enumeration(inner)
        got = sorted(map(tuple, np.round(V.points, 10)))
        assert got == [(0.1, 0.1), (0.1, 0.9), (0.9, 0.1), (0.9, 0.9)]

    def test_zero_offset_same_body(self, unit_square):
        inner = ib.inner_parallel_body(unit_square, 0.0)
        assert ib.volume(inner) == pytest.approx(1.0, abs=1e-12)

    def test_offset_at_inradius_empty(self, unit_square):
        assert ib.inner_parallel_body(unit_square, 0.5) is None

    def test_negative_offset_rejected(self, unit_square):
        with pytest.raises(BadParameter):
            ib.inner_parallel_body(unit_square, -0.1)

    def test_points_of_inner_body_have_large_distance(self, small_suite):
        rng = np.random.default_rng(3)
        for H in small_suite[2][:6]:
            eps = 0.4 * ib.incentre(H).inradius
            inner = ib.inner_parallel_body(H, eps)
            for p in ib.sample_interior(inner, 50, rng):
                assert ib.distance_to_boundary(H, p) >= eps - 1e-9


class TestVolInnerNeighbourhood:
    def test_square_closed_form(self, unit_square):
        # 1 - (1 - 2 eps)^2 for the unit square
        assert ib.vol_inner_neighbourhood(unit_square, 0.1) == pytest.approx(
            0.36, abs=1e-12)

    def test_saturation(self, unit_square):
        assert ib.vol_inner_neighbourhood(unit_square, 0.5) == pytest.approx(1.0)
        assert ib.vol_inner_neighbourhood(unit_square, 0.9) == pytest.approx(1.0)

    def test_triangle_circumscribed_equality(self, triangle):
        inc = ib.incentre(triangle)
        vol = ib.volume(triangle)
        eps = inc.inradius / 2
        l = ib.vol_inner_neighbourhood(triangle, eps)
        assert l == pytest.approx(vol * (1 - 0.25), abs=1e-10)
        assert l == pytest.approx(0.375, abs=1e-10)

    def test_agrees_with_monte_carlo(self, small_suite):
        for n, bodies in small_suite.items():
            for i, H in enumerate(bodies[:3]):
                inr = ib.incentre(H).inradius
                for j, frac in enumerate((0.25, 0.5, 0.75)):
                    eps = frac * inr
                    est = ib.mc_inner_volume(H, eps, 200_000,
                                             seed=7000 + 100 * n + 10 * i + j)
                    exact = ib.vol_inner_neighbourhood(H, eps)
                    assert abs(exact - est.mean) <= 4 * est.stddev


class TestGFormula:
    def test_reference_value(self):
        assert ib.g_formula(1.0, 0.5, 0.1, 2) == pytest.approx(0.36)

    def test_zero_offset(self):
        assert ib.g_formula(2.0, 0.3, 0.0, 3) == 0.0

    def test_clamped_beyond_inradius(self):
        assert ib.g_formula(2.0, 0.3, 0.6, 3) == pytest.approx(2.0)

    def test_bad_parameters(self):
        with pytest.raises(BadParameter):
            ib.g_formula(-1.0, 0.5, 0.1, 2)
        with pytest.raises(BadParameter):
            ib.g_formula(1.0, 0.0, 0.1, 2)
        with pytest.raises(BadParameter):
            ib.g_formula(1.0, 0.5, -0.1, 2)
        with pytest.raises(BadParameter):
            ib.g_formula(1.0, 0.5, 0.1, 0)


class TestBoundsReport:
    def test_square_equality_case(self, unit_square):
        rep = ib.bounds_report(unit_square, 0.1)
        assert rep.l == pytest.approx(0.36, abs=1e-12)
        assert rep.g == pytest.approx(0.36, abs=1e-12)
        assert rep.chord == pytest.approx(0.2)
        assert rep.g_over_n == pytest.approx(0.18)
        assert rep.ok

    def test_pancake_exact_erosion(self):
        # [0,1]x[0,4] eroded by 1/4 leaves [.25,.75]x[.25,3.75]:
        # l = 4 - 0.5*3.5 = 2.25, between chord 2 and g = 3
        H = ib.pancake_family(2, 4)
        rep = ib.bounds_report(H, 0.25)
        assert rep.l == pytest.approx(2.25, abs=1e-10)
        assert rep.chord == pytest.approx(2.0)
        assert rep.g == pytest.approx(3.0)
        assert rep.ok

    def test_saturation_at_inradius(self, triangle):
        inr = ib.incentre(triangle).inradius
        rep = ib.bounds_report(triangle, inr)
        assert rep.l == pytest.approx(ib.volume(triangle), abs=1e-10)
        assert rep.g == pytest.approx(ib.volume(triangle), abs=1e-10)
        assert rep.ok

    def test_out_of_range_rejected(self, unit_square):
        with pytest.raises(EpsOutOfRange):
            ib.bounds_report(unit_square, 0.7)

    def test_sandwich_on_random_bodies(self, small_suite):
        for bodies in small_suite.values():
            for H in bodies[:8]:
                inr = ib.incentre(H).inradius
                vol = ib.volume(H)
                tol = ib.TAU_REP * max(1.0, vol)
                for frac in (0.25, 0.5, 0.75):
                    rep = ib.bounds_report(H, frac * inr)
                    assert rep.g_over_n <= rep.chord + tol
                    assert rep.chord <= rep.l + tol
                    assert rep.l <= rep.g + tol
                    assert rep.ok


class TestScaleCopyContainment:
    def test_zero_offset(self, unit_square):
        assert ib.scale_copy_containment_check(unit_square, 0.0)

    def test_full_offset_collapses_to_incentre(self, unit_square):
        assert ib.scale_copy_containment_check(unit_square, 0.5)

    def test_random_suite(self, small_suite):
        for bodies in small_suite.values():
            for H in bodies[:8]:
                inr = ib.incentre(H).inradius
                for eps in (0.0, inr / 3, inr / 2, inr):
                    assert ib.scale_copy_containment_check(H, eps)


class TestNeighbourhoodProfile:
    def test_square_closed_form(self, unit_square):
        prof = ib.neighbourhood_profile(unit_square, 11)
        closed = 1 - (1 - 2 * prof.eps_grid) ** 2
        assert prof.l_vol == pytest.approx(closed, abs=1e-10)

    def test_cube_closed_form(self, unit_cube):
        prof = ib.neighbourhood_profile(unit_cube, 11)
        closed = 1 - (1 - 2 * prof.eps_grid) ** 3
        assert prof.l_vol == pytest.approx(closed, abs=1e-10)

    def test_profile_invariants(self, small_suite):
        for H in small_suite[2][:5] + small_suite[3][:5]:
            prof = ib.neighbourhood_profile(H, 17)
            vol = ib.volume(H)
            tol = ib.TAU_REP * max(1.0, vol)
            assert prof.l_vol[0] == pytest.approx(0.0, abs=tol)
            assert prof.l_vol[-1] == pytest.approx(vol, abs=tol)
            assert np.all(np.diff(prof.l_vol) >= -tol)
            assert np.all(np.diff(prof.deriv) <= tol)
            assert np.all(prof.g_over_n <= prof.l_vol + tol)
            assert np.all(prof.l_vol <= prof.g_vals + tol)
            assert np.all(prof.chord <= prof.l_vol + tol)

    def test_small_grid_rejected(self, unit_square):
        with pytest.raises(BadParameter):
            ib.neighbourhood_profile(unit_square, 2)

    def test_workers_do_not_change_result(self, unit_cube):
        a = ib.neighbourhood_profile(unit_cube, 9, workers=1)
        b = ib.neighbourhood_profile(unit_cube, 9, workers=4)
        assert np.array_equal(a.l_vol, b.l_vol)
