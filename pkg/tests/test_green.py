import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracgreen.errors import DomainError, SingularPoint, TruncationFailure, ValidityViolation
from fracgreen.green import (GreenMethod, GreenParams, PiMethod, c_alpha, green_at_pi,
                             green_closed_alpha2, green_closed_alpha4, green_deriv_alpha4,
                             green_deriv_integral, green_fourier, green_fourier_with_error,
                             green_integral, profile)
from fracgreen.series import SeriesControl

from conftest import green_ref

PI = math.pi


def g4_pi(a):
    return (math.sinh(PI * a) * math.cos(PI * a) + math.sin(PI * a) * math.cosh(PI * a)) / (
        4 * a ** 3 * (math.cosh(2 * PI * a) - math.cos(2 * PI * a)))


# -- Fourier series -------------------------------------------------------------

def test_fourier_at_pi_alpha2():
    assert green_fourier(GreenParams(1.0, 2.0), PI) == pytest.approx(1 / (2 * math.sinh(PI)), abs=1e-14)


def test_fourier_at_zero_alpha2():
    assert green_fourier(GreenParams(1.0, 2.0), 0.0) == pytest.approx(0.5 / math.tanh(PI), abs=1e-14)


@pytest.mark.parametrize("c,alpha,x", [(0.3, 1.3, 0.0), (2.0, 2.5, 1.0), (7.0, 3.7, PI)])
def test_fourier_against_mpmath(c, alpha, x):
    assert green_fourier(GreenParams(c, alpha), x) == pytest.approx(green_ref(c, alpha, x), abs=1e-13)


def test_fourier_singular_point():
    with pytest.raises(SingularPoint):
        green_fourier(GreenParams(1.0, 0.8), 0.0)


def test_fourier_outside_period():
    with pytest.raises(DomainError):
        green_fourier(GreenParams(1.0, 2.0), 4.0)


def test_fourier_budget():
    with pytest.raises(TruncationFailure):
        green_fourier(GreenParams(1.0, 1.5), 1e-4, SeriesControl(1e-14, 100))


def test_error_estimate_is_small():
    g, err = green_fourier_with_error(GreenParams(1.0, 1.5), 1.0)
    assert err < 1e-13


@pytest.mark.parametrize("bad", [dict(c=0.0, alpha=1.0), dict(c=1.0, alpha=0.0),
                                 dict(c=-1.0, alpha=2.0), dict(c=math.inf, alpha=2.0)])
def test_params_validation(bad):
    with pytest.raises(DomainError):
        GreenParams(**bad)


# -- integral representation -------------------------------------------------------

def test_integral_matches_fourier():
    p = GreenParams(0.5, 1.5)
    assert green_integral(p, 1.0) == pytest.approx(green_fourier(p, 1.0), abs=1e-8)


def test_integral_above_two_below_threshold():
    p = GreenParams(2.0, 2.5)
    assert green_integral(p, PI) == pytest.approx(green_fourier(p, PI), abs=1e-7)


def test_integral_validity():
    with pytest.raises(ValidityViolation):
        green_integral(GreenParams(20.0, 2.5), PI)


def test_integral_close_to_threshold():
    # slow exp(-(1 - c**(1/alpha) cos(pi/alpha)) t) decay of the integrand
    p = GreenParams(18.0, 2.5)
    assert green_integral(p, PI) == pytest.approx(green_fourier(p, PI), abs=1e-7)


def test_c_alpha():
    assert c_alpha(2.5) == pytest.approx(18.83, abs=0.01)
    assert c_alpha(3.5) == pytest.approx(5.22, abs=0.01)
    assert c_alpha(4.0) == pytest.approx(4.0, abs=1e-14)
    with pytest.raises(DomainError):
        c_alpha(2.0)


# -- G(pi) ----------------------------------------------------------------------

def test_pi_series_alpha2():
    assert green_at_pi(GreenParams(1.0, 2.0)) == pytest.approx(1 / (2 * math.sinh(PI)), abs=1e-14)
    assert green_at_pi(GreenParams(1.0, 2.0)) == pytest.approx(0.0432948, abs=1e-7)


def test_pi_series_alpha4():
    assert green_at_pi(GreenParams(4.0, 4.0)) == pytest.approx(g4_pi(1.0), abs=1e-14)
    assert g4_pi(1.0) == pytest.approx(-math.sinh(PI) / (4 * (math.cosh(2 * PI) - 1)), rel=1e-14)


def test_pi_csch_matches_series():
    p = GreenParams(1.0, 1.5)
    assert green_at_pi(p, PiMethod.Csch) == pytest.approx(green_at_pi(p, PiMethod.Series), abs=1e-8)


def test_pi_csch_domain():
    with pytest.raises(DomainError):
        green_at_pi(GreenParams(1.0, 2.5), PiMethod.Csch)


def test_pi_ml_validity():
    with pytest.raises(ValidityViolation):
        green_at_pi(GreenParams(6.0, 3.5), PiMethod.MLIntegral)


@given(c=st.floats(0.05, 20.0), alpha=st.floats(0.2, 1.95))
def test_pi_three_routes_agree(c, alpha):
    p = GreenParams(c, alpha)
    s = green_at_pi(p, PiMethod.Series)
    assert green_at_pi(p, PiMethod.MLIntegral) == pytest.approx(s, abs=1e-8)
    assert green_at_pi(p, PiMethod.Csch) == pytest.approx(s, abs=1e-8)


# -- closed forms -------------------------------------------------------------------

def test_closed_alpha2_values():
    assert green_closed_alpha2(1.0, 0.0) == pytest.approx(0.5 / math.tanh(PI), rel=1e-14)
    assert green_closed_alpha2(1.0, PI) == pytest.approx(1 / (2 * math.sinh(PI)), rel=1e-14)


def test_closed_alpha2_decreasing():
    g = [green_closed_alpha2(3.0, x) for x in np.linspace(0, PI, 300)]
    assert np.all(np.diff(g) < 0)


def test_closed_alpha2_large_c_is_finite():
    assert math.isfinite(green_closed_alpha2(1e6, 0.5))


def test_closed_alpha4_values():
    ref0 = (math.sinh(2 * PI) + math.sin(2 * PI)) / (8 * (math.cosh(2 * PI) - math.cos(2 * PI)))
    assert green_closed_alpha4(4.0, 0.0) == pytest.approx(ref0, rel=1e-13)
    for a in (0.5, 1.3, 2.2):
        assert green_closed_alpha4(4 * a ** 4, PI) == pytest.approx(g4_pi(a), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("c", [1.0, 16.0, 100.0])
def test_closed_alpha4_against_fourier(c):
    for x in np.linspace(-PI, PI, 100):
        assert abs(green_closed_alpha4(c, x) - green_fourier(GreenParams(c, 4.0), x)) <= 1e-9


def test_deriv_alpha4():
    for c in (0.3, 4.0, 50.0):
        assert green_deriv_alpha4(c, 0.0) == 0.0
        assert abs(green_deriv_alpha4(c, PI)) < 1e-15
        h = 1e-5
        for x in np.linspace(0.2, 3.0, 8):
            fd = (green_closed_alpha4(c, x + h) - green_closed_alpha4(c, x - h)) / (2 * h)
            v = green_deriv_alpha4(c, x)
            assert abs(v - fd) <= 1e-6 * (1 + abs(v))


def test_deriv_integral():
    p = GreenParams(1.0, 0.5)
    assert green_deriv_integral(p, PI / 2) < 0
    h = 1e-5
    fd = (green_fourier(p, PI / 2 + h) - green_fourier(p, PI / 2 - h)) / (2 * h)
    assert green_deriv_integral(p, PI / 2) == pytest.approx(fd, abs=1e-6)
    exact = -math.sinh(PI / 2) / (2 * math.sinh(PI))
    assert green_deriv_integral(GreenParams(1.0, 2.0), PI / 2) == pytest.approx(exact, abs=1e-8)


def test_deriv_integral_near_pi():
    p = GreenParams(2.0, 1.5)
    h = 1e-5
    for x in (PI - 1e-2, PI - 1e-3):
        fd = (green_fourier(p, x + h) - green_fourier(p, x - h)) / (2 * h)
        assert green_deriv_integral(p, x) == pytest.approx(fd, abs=1e-6)


# -- profile --------------------------------------------------------------------

def test_profile_closed_alpha2():
    xs = np.linspace(-PI, PI, 5)
    out = profile(GreenParams(1.0, 2.0), xs)
    assert all(s.method is GreenMethod.ClosedForm2 for s in out)
    assert [s.g for s in out] == [green_closed_alpha2(1.0, x) for x in xs]


def test_profile_singular_sample():
    out = profile(GreenParams(1.0, 0.5), [-1.0, 0.0, 1.0])
    assert math.isnan(out[1].g) and math.isfinite(out[0].g)


def test_profile_symmetric():
    xs = np.linspace(-PI, PI, 41)
    g = [s.g for s in profile(GreenParams(3.0, 1.7), xs, "fourier")]
    assert g == g[::-1]


def test_profile_threads_preserve_order():
    xs = np.linspace(0.1, PI, 17)
    p = GreenParams(2.0, 1.2)
    assert profile(p, xs, "integral", workers=4) == profile(p, xs, "integral")


def test_profile_policies():
    with pytest.raises(DomainError):
        profile(GreenParams(1.0, 2.5), [0.0], "closed")
    with pytest.raises(DomainError):
        profile(GreenParams(1.0, 2.5), [0.0], "nonsense")


# -- properties -------------------------------------------------------------------

# below |x| ~ 1e-5 the series needs more than the default term budget
small_or_zero = st.one_of(st.just(0.0), st.floats(1e-4, PI))


@given(c=st.floats(0.05, 50.0), alpha=st.floats(0.2, 4.5), x=small_or_zero)
def test_evenness(c, alpha, x):
    p = GreenParams(c, alpha)
    if alpha <= 1 and x == 0:
        return
    assert green_fourier(p, x) == green_fourier(p, -x)


@given(c=st.sampled_from([0.5, 1.0, 5.0]), alpha=st.sampled_from([0.5, 1.0, 1.5, 2.0]),
       x=st.floats(PI / 20, PI))
def test_cross_method(c, alpha, x):
    p = GreenParams(c, alpha)
    assert abs(green_fourier(p, x) - green_integral(p, x)) <= 1e-7


@pytest.mark.parametrize("c", [0.5, 1.0, 5.0])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
def test_positive_and_decreasing(c, alpha):
    xs = np.linspace(PI / 200, PI, 200)
    g = np.array([green_fourier(GreenParams(c, alpha), x) for x in xs])
    assert np.all(g > 0) and np.all(np.diff(g) < 0)


@given(c=st.floats(0.05, 100.0), alpha=st.floats(1.05, 4.5))
def test_pi_below_zero(c, alpha):
    p = GreenParams(c, alpha)
    assert green_fourier(p, PI) < green_fourier(p, 0.0)


@pytest.mark.parametrize("c", [0.25, 1.0, 4.0])
def test_periodization(c):
    s = math.sqrt(c)
    for x in (0.0, 1.0, PI):
        errs = []
        for K in (1, 2, 4):
            n = np.arange(-K, K + 1)
            per = float(np.sum(np.exp(-s * np.abs(x - 2 * PI * n)))) / (2 * s)
            errs.append(abs(per - green_closed_alpha2(c, x)))
            scale = math.exp(-s * PI * (2 * K - 1)) / (s * (1 - math.exp(-2 * PI * s)))
            assert errs[-1] <= scale + 4e-16 * green_closed_alpha2(c, x)
        assert errs[0] >= errs[1] >= errs[2]
