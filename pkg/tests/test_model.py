import dataclasses
import math
import sys

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgdeflect import (
    ARCSEC_PER_RAD,
    Angle,
    AngleUnit,
    DomainError,
    ModelParams,
    PhysicalConstants,
    deflection_closed_form,
    derive,
    force_magnitude,
    orbit_u,
)
from qgdeflect.model import MU_SUN, R_SUN

# mpmath at 50 digits: D = mu / (c R)^2 with IAU nominal constants
D_IAU = 3.0508876964686434037e-15
# k = sqrt(1 - D * 1.3 R)
K_13 = 0.99999862037237753221


def test_arcsec_factor():
    assert ARCSEC_PER_RAD == pytest.approx(206264.806247096355, rel=1e-15)
    assert Angle(1.0).arcseconds == ARCSEC_PER_RAD


@pytest.mark.parametrize("field", ["mu_sun", "c", "r_sun", "arcsec_per_rad"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_constants_must_be_positive(field, bad):
    with pytest.raises(DomainError):
        PhysicalConstants(**{field: bad})


@pytest.mark.parametrize("kwargs", [dict(delta=-1.0), dict(delta=0.0, r_impact=0.0),
                                    dict(delta=math.nan), dict(delta=1.0, r_impact=-5.0)])
def test_params_validation(kwargs):
    with pytest.raises(DomainError):
        ModelParams(**kwargs)


def test_from_multiple():
    p = ModelParams.from_multiple(1.3)
    assert p.delta == 1.3 * R_SUN
    assert p.r_impact == R_SUN
    assert p.delta_multiple == pytest.approx(1.3, rel=1e-15)
    with pytest.raises(DomainError):
        ModelParams.from_multiple(-0.1)


def test_derive_newtonian():
    dq = derive(ModelParams(0.0))
    assert dq.D == pytest.approx(D_IAU, rel=1e-14)
    assert dq.k == 1.0
    assert dq.coeff_A == -dq.D
    assert dq.coeff_B == 1.0 / R_SUN
    assert dq.one_minus_k == 0.0
    assert dq.h == 299792458.0 * R_SUN


def test_derive_13R():
    dq = derive(ModelParams.from_multiple(1.3))
    assert dq.d_delta == pytest.approx(2.759253341563206e-6, rel=1e-12)
    assert dq.k == pytest.approx(K_13, rel=1e-15)
    assert dq.one_minus_k == pytest.approx(1 - K_13, rel=1e-9)
    assert dq.coeff_A < 0 < dq.coeff_B
    assert dq.coeff_B == pytest.approx(1 / (R_SUN * K_13), rel=1e-15)


def test_derive_rejects_large_delta():
    dq = derive(ModelParams(0.0))
    with pytest.raises(DomainError):
        derive(ModelParams(1.0 / dq.D))
    with pytest.raises(DomainError):
        derive(ModelParams(2.0 / dq.D))


def test_values_are_immutable():
    dq = derive(ModelParams(0.0))
    with pytest.raises(dataclasses.FrozenInstanceError):
        dq.k = 0.5


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.0, max_value=0.999999))
def test_k_squared_plus_d_delta(fraction):
    d = derive(ModelParams(0.0)).D
    dq = derive(ModelParams(fraction / d))
    assert 0.0 < dq.k <= 1.0
    assert abs(dq.k ** 2 + dq.d_delta - 1.0) <= 4 * math.ulp(1.0)
    # stable 1 - k agrees with the direct subtraction where that is accurate
    assert dq.one_minus_k == pytest.approx(1.0 - dq.k, rel=1e-9, abs=4 * math.ulp(1.0))


class TestForce:
    def test_newton_when_delta_zero(self):
        p = ModelParams(0.0)
        assert force_magnitude(2e9, p, 3.0) == MU_SUN * 3.0 / (2e9 * 2e9)

    def test_at_twice_delta(self):
        p = ModelParams(1e9)
        assert force_magnitude(2e9, p, 1.0) == pytest.approx(MU_SUN / (2 * 1e9 ** 2), rel=1e-15)

    def test_far_field_ratio(self):
        delta = 1e6
        p = ModelParams(delta)
        r = 1e6 * delta
        ratio = force_magnitude(r, p, 1.0) / (MU_SUN / r ** 2)
        assert ratio == pytest.approx(1 + delta / r, rel=1e-10)

    def test_stronger_than_newton(self):
        p = ModelParams(1.3 * R_SUN)
        r = 5 * R_SUN
        assert force_magnitude(r, p, 1.0) > MU_SUN / r ** 2

    @pytest.mark.parametrize("r", [1e9, 0.5e9, 0.0])
    def test_inside_pole(self, r):
        with pytest.raises(DomainError):
            force_magnitude(r, ModelParams(1e9), 1.0)

    @given(st.floats(min_value=1.0001, max_value=1e6), st.floats(min_value=1.0001, max_value=1e6))
    def test_monotone_decreasing(self, a, b):
        p = ModelParams(1e8)
        ra, rb = sorted((a * 1e8, b * 1e8))
        if ra < rb:
            assert force_magnitude(ra, p, 1.0) > force_magnitude(rb, p, 1.0)


class TestOrbit:
    @pytest.mark.parametrize("mult", [0.0, 1.0, 1.3, 2.0])
    def test_incoming_asymptote(self, mult):
        dq = derive(ModelParams.from_multiple(mult))
        assert orbit_u(0.0, dq) == 0.0
        h = 1e-6
        slope = (orbit_u(h, dq) - orbit_u(0.0, dq)) / h
        assert slope == pytest.approx(1 / R_SUN, rel=1e-6)

    @pytest.mark.parametrize("mult", [0.0, 0.5, 1.0, 1.3, 2.0])
    def test_outgoing_zero(self, mult):
        dq = derive(ModelParams.from_multiple(mult))
        phi = deflection_closed_form(dq, 1).phi
        assert abs(orbit_u(phi, dq)) <= 1e-10 * dq.D

    def test_newtonian_shape(self):
        # delta = 0: u = sin(theta)/R + D (1 - cos theta)
        dq = derive(ModelParams(0.0))
        for theta in (0.3, 1.0, math.pi / 2, 2.5):
            expected = math.sin(theta) / R_SUN + dq.D * (1 - math.cos(theta))
            assert orbit_u(theta, dq) == pytest.approx(expected, rel=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(min_value=0.0, max_value=4 * math.pi), st.sampled_from([0.0, 1.0, 1.3, 2.0]))
    def test_matches_high_precision(self, theta, mult):
        dq = derive(ModelParams.from_multiple(mult))
        with mpmath.workdps(40):
            t = mpmath.mpf(theta)
            R = mpmath.mpf(dq.r_impact)
            D = mpmath.mpf(dq.params.constants.mu_sun) / (mpmath.mpf(dq.params.constants.c) * R) ** 2
            k = mpmath.sqrt(1 - D * mpmath.mpf(dq.delta))
            ref = D / k ** 2 * (1 - mpmath.cos(k * t)) + mpmath.sin(k * t) / (R * k)
            err = abs(float(orbit_u(theta, dq) - ref))
        assert err <= 8 * math.ulp(1.0) * (1 + theta) / dq.r_impact

    def test_linear_ode_high_precision(self):
        # the closed form solves u'' + k^2 u = D: check with mpmath derivatives
        dq = derive(ModelParams.from_multiple(1.3))
        with mpmath.workdps(40):
            R = mpmath.mpf(dq.r_impact)
            D = mpmath.mpf(dq.params.constants.mu_sun) / (mpmath.mpf(dq.params.constants.c) * R) ** 2
            k = mpmath.sqrt(1 - D * mpmath.mpf(dq.delta))

            def u(t):
                return D / k ** 2 * (1 - mpmath.cos(k * t)) + mpmath.sin(k * t) / (R * k)

            for t in (0.1, 1.0, 2.0, 3.0):
                res = mpmath.diff(u, t, 2) + k ** 2 * u(t) - D
                assert abs(res) <= 1e-20 * D


@settings(max_examples=200)
@given(st.floats(min_value=-1e3, max_value=1e3, allow_nan=False))
def test_angle_round_trip(value):
    back = Angle(value).to(AngleUnit.ARCSECOND).to("rad").value
    assert abs(back - value) <= math.ulp(value) if value else back == 0.0


def test_angle_same_unit_is_identity():
    a = Angle(2.0, AngleUnit.ARCSECOND)
    assert a.to("arcsec") is a
    assert a.radians == pytest.approx(2.0 / ARCSEC_PER_RAD)


@pytest.mark.parametrize("mult", [0.0, 1.0, 1.3, 2.0])
def test_fd_residual_within_stencil_error_budget(mult):
    # A 3-point stencil at h = 1e-4 cannot resolve 1e-8 D: its truncation term
    # is h^2/12 |u''''| and each of the three samples carries ~1 ulp of
    # rounding, amplified by 1/h^2.  The residual must sit inside that budget.
    dq = derive(ModelParams.from_multiple(mult))
    h = 1e-4
    phi = deflection_closed_form(dq).phi
    for i in range(1, 200):
        t = phi * i / 200
        samples = [orbit_u(t + s, dq) for s in (-h, 0.0, h)]
        upp = (samples[0] - 2 * samples[1] + samples[2]) / h ** 2
        residual = abs(upp + dq.k ** 2 * samples[1] - dq.D)
        truncation = h ** 2 / 12 * dq.k ** 4 * (abs(samples[1] - dq.D / dq.k ** 2) + dq.D)
        rounding = 8 * sys.float_info.epsilon * max(map(abs, samples)) / h ** 2
        assert residual <= truncation + rounding
