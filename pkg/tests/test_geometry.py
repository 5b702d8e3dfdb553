import mpmath
import pytest
from hypothesis import given, strategies as st

from kerrgrav.errors import HorizonError
from kerrgrav.geometry import (
    C_LIGHT,
    Geometry,
    arm_proper_times,
    dilation_parameter,
    dtau2_drs,
    earth_geometry,
    linear_phase_phi24,
    proper_time_ratio,
)

mpmath.mp.dps = 50


def mp_ratio(r_s, r_A, h):
    r_s, r_A, h = mpmath.mpf(r_s), mpmath.mpf(r_A), mpmath.mpf(h)
    return mpmath.sqrt((1 - r_s / r_A) / (1 - r_s / (r_A + h)))


def compact(r_s=1.0, r_A=1000.0, h=1.0, L=0.3, n_prime=1.0):
    return Geometry(r_s=r_s, r_A=r_A, h=h, L=L, n_prime=n_prime)


class TestProperTimeRatio:
    @pytest.mark.parametrize("mode", ["exact", "first_order"])
    def test_flat_space(self, mode):
        assert proper_time_ratio(earth_geometry(r_s=0.0), mode) == 1.0

    @pytest.mark.parametrize("mode", ["exact", "first_order"])
    def test_zero_height(self, mode):
        assert proper_time_ratio(earth_geometry(h=0.0), mode) == 1.0

    def test_earth_modes_agree(self):
        g = earth_geometry()
        exact = proper_time_ratio(g, "exact")
        first = proper_time_ratio(g, "first_order")
        assert abs(exact - first) <= 1e-12 * exact

    def test_earth_delta(self):
        delta = dilation_parameter(earth_geometry())
        expected = 8.87e-3 * 10.0 / (2 * 6.37e6 * (6.37e6 + 10.0))
        assert delta == pytest.approx(expected, rel=1e-15)
        assert delta == pytest.approx(1.09e-15, rel=0.01)

    def test_earth_deficit_against_high_precision(self):
        g = earth_geometry()
        exact_deficit = 1 - mp_ratio(g.r_s, g.r_A, g.h)
        times = arm_proper_times(g)
        assert times.deficit == pytest.approx(float(exact_deficit), rel=1e-12)

    @given(st.floats(0.0, 1e-3), st.floats(1e-4, 1.0))
    def test_first_order_error_is_second_order(self, rs_over_ra, h_over_ra):
        g = compact(r_s=rs_over_ra * 1000.0, r_A=1000.0, h=h_over_ra * 1000.0)
        delta = dilation_parameter(g)
        diff = abs(proper_time_ratio(g, "exact") - proper_time_ratio(g, "first_order"))
        # both terms are O(r_s^2): the exact deficit is delta r_B/(r_B - r_s) + O(delta^2)
        assert diff <= delta * g.r_s / (g.r_B - g.r_s) + delta**2 + 1e-16

    @given(st.floats(0.0, 0.5), st.floats(1e-6, 10.0))
    def test_ratio_in_unit_interval(self, rs_over_ra, h_over_ra):
        g = compact(r_s=rs_over_ra * 10.0, r_A=10.0, h=h_over_ra * 10.0)
        assert 0.0 < proper_time_ratio(g) <= 1.0

    def test_horizon(self):
        with pytest.raises(HorizonError):
            Geometry(r_s=2.0, r_A=2.0, h=1.0, L=1.0)


class TestArmTimes:
    def test_lower_arm_time(self):
        times = arm_proper_times(earth_geometry(L=0.01))
        assert times.tau1 == pytest.approx(0.01 / 299792458.0, rel=1e-15)
        assert times.tau1 == pytest.approx(3.336e-11, rel=1e-3)

    def test_flat_space_equal_times(self):
        times = arm_proper_times(earth_geometry(r_s=0.0))
        assert times.tau1 == times.tau2

    def test_upper_arm_not_longer(self):
        times = arm_proper_times(compact())
        assert times.tau2 <= times.tau1

    @pytest.mark.parametrize("r_s", [1e-3, 1.0, 10.0])
    def test_first_order_within_taylor_bound(self, r_s):
        g = compact(r_s=r_s)
        exact = arm_proper_times(g, "exact")
        first = arm_proper_times(g, "first_order")
        bound = (exact.delta**2 + exact.delta * r_s / (g.r_B - r_s)) * exact.tau1
        assert abs(exact.tau2 - first.tau2) <= bound


class TestLinearPhase:
    def test_flat_space(self):
        g = earth_geometry(r_s=0.0, n_prime=1.5, L=0.01)
        exact, first = linear_phase_phi24(g)
        assert exact == pytest.approx((1 - 1 / 1.5) * 0.01, rel=1e-15)
        assert first == pytest.approx(exact, rel=1e-15)

    def test_vacuum_index_flat_space(self):
        assert linear_phase_phi24(earth_geometry(r_s=0.0)) == (0.0, 0.0)

    def test_earth_forms_agree(self):
        exact, first = linear_phase_phi24(earth_geometry(n_prime=1.5))
        assert exact == pytest.approx(first, rel=1e-12)

    def test_vacuum_index_keeps_dilation(self):
        g = earth_geometry()
        exact, first = linear_phase_phi24(g)
        assert exact == pytest.approx(float(1 - mp_ratio(g.r_s, g.r_A, g.h)) * g.L, rel=1e-12)
        assert first == pytest.approx(dilation_parameter(g) * g.L, rel=1e-15)


class TestDtau2Drs:
    def test_zero_height(self):
        assert dtau2_drs(earth_geometry(h=0.0)) == 0.0

    def test_linear_in_height(self):
        # r_B also moves with h; isolate the h/(r_A r_B) dependence
        a = dtau2_drs(compact(h=1.0))
        b = dtau2_drs(compact(h=2.0))
        assert b / a == pytest.approx(2.0 * 1001.0 / 1002.0, rel=1e-14)

    def test_earth_value(self):
        expected = -(10.0 / (2 * 6.37e6 * (6.37e6 + 10.0))) * (0.01 / C_LIGHT)
        assert dtau2_drs(earth_geometry()) == pytest.approx(expected, rel=1e-15)
        assert dtau2_drs(earth_geometry()) == pytest.approx(
            -(10.0 / (2 * 6.37e6**2)) * (0.01 / C_LIGHT), rel=1e-5
        )

    def test_earth_high_precision_difference(self):
        g = earth_geometry()
        step = mpmath.mpf("1e-6")
        tau1 = mpmath.mpf(g.L) / C_LIGHT
        fd = (mp_ratio(g.r_s + step, g.r_A, g.h) - mp_ratio(g.r_s - step, g.r_A, g.h)) * tau1 / (2 * step)
        assert dtau2_drs(g) == pytest.approx(float(fd), rel=1e-8)

    @pytest.mark.parametrize("r_s", [1e-4, 1e-2, 0.5])
    def test_central_difference(self, r_s):
        g = compact(r_s=r_s)
        step = 1e-5 * r_s
        up = arm_proper_times(g.with_(r_s=r_s + step)).tau2
        down = arm_proper_times(g.with_(r_s=r_s - step)).tau2
        fd = (up - down) / (2 * step)
        # dtau2/dr_s is the weak-field slope; the exact curve adds O(r_s/r_A)
        assert dtau2_drs(g) == pytest.approx(fd, rel=2 * r_s / g.r_A + 1e-8)
