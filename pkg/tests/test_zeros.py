import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracgreen.errors import BracketFailure, CurvesDisjoint, DomainError, NoRoot
from fracgreen.green import GreenParams, c_alpha, green_closed_alpha4, green_fourier
from fracgreen.quadrature import QuadConfig, adaptive_quad
from fracgreen.zeros import (I1_asym, I2_asym, I_ab, I_ab_split, OscIntegralParams, ZeroCurve,
                             coalescence_alpha, count_sign_changes, green_pi, pair_exists,
                             predict_first_zero, scan_pi_zeros, transcendental_roots_alpha4,
                             zero_curves)


# -- scans ------------------------------------------------------------------------

def test_first_root_alpha_2_5():
    recs = scan_pi_zeros(2.5, 50.0)
    assert recs[0].c == pytest.approx(2.507, abs=0.01)
    lo, hi = recs[0].bracket
    assert hi - lo <= 1e-12 * 10


def test_first_root_alpha_3_5():
    recs = scan_pi_zeros(3.5, 50.0)
    assert recs[0].c == pytest.approx(1.446, abs=0.01)


def test_no_roots_alpha_2():
    assert scan_pi_zeros(2.0, 1e4) == []


def test_scan_validation():
    with pytest.raises(DomainError):
        scan_pi_zeros(1.0, 10.0)
    with pytest.raises(DomainError):
        scan_pi_zeros(2.5, 1e-3)


@pytest.mark.parametrize("alpha", [2.3, 2.9, 3.4, 3.95, 4.0])
def test_brackets_straddle_sign_change(alpha):
    for r in scan_pi_zeros(alpha, 500.0):
        lo, hi = r.bracket
        if lo == hi:
            assert abs(green_pi(lo, alpha)) < 1e-13
        else:
            assert green_fourier(GreenParams(lo, alpha), math.pi) * \
                green_fourier(GreenParams(hi, alpha), math.pi) <= 0


@given(alpha=st.floats(2.05, 4.0))
def test_first_root_inside_validity_range(alpha):
    ca = c_alpha(alpha)
    recs = scan_pi_zeros(alpha, min(4 * ca, 3000.0), n_grid=200)
    assert recs and 0 < recs[0].c < ca
    assert all(r.c > ca for r in recs[1:])


# -- alpha = 4 ----------------------------------------------------------------------

def test_transcendental_roots():
    roots = transcendental_roots_alpha4(6)
    assert 0.75 < roots[0][0] < 1.0
    offsets = [a - (n - 0.25) for n, (a, _) in enumerate(roots, start=1)]
    # the offset is ~exp(-2 pi n), below the float spacing near a_n from n ~ 6 on
    assert all(u >= v >= 0 for u, v in zip(offsets, offsets[1:]))
    assert offsets[0] > 0 and offsets[-1] < 1e-12
    for a, c in roots:
        assert c == pytest.approx(4 * a ** 4, rel=1e-15)
        assert math.tanh(math.pi * a) + math.tan(math.pi * a) == pytest.approx(0.0, abs=1e-9)
        assert green_closed_alpha4(c, math.pi) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(DomainError):
        transcendental_roots_alpha4(0)


def test_table1():
    tr = transcendental_roots_alpha4(5)
    recs = scan_pi_zeros(4.0, 3000.0, tol=1e-13)
    assert len(recs) >= 5
    for k, bound in enumerate((1e-8, 1e-6, 1e-4, 5e-3, 2e-2)):
        assert abs(recs[k].c - tr[k][1]) <= bound
    for k in range(3):
        assert abs(recs[k].c - tr[k][1]) <= 1e-5


@pytest.mark.parametrize("a", [3.0, 5.0, 8.0])
def test_alpha4_model_zeros(a):
    xs = np.linspace(1e-3, math.pi - 1e-3, 4001)
    g = np.array([green_closed_alpha4(4 * a ** 4, x) for x in xs])
    assert count_sign_changes(g) > 0
    for i in np.nonzero(g[:-1] * g[1:] < 0)[0]:
        x0 = xs[i] - g[i] * (xs[i + 1] - xs[i]) / (g[i + 1] - g[i])
        if x0 < math.pi / 2:
            k = round(x0 * a / math.pi + 0.25)
            assert abs(x0 - (k - 0.25) * math.pi / a) <= 0.05 / a


def test_alpha4_sign_changes_nondecreasing():
    xs = np.linspace(1e-3, math.pi - 1e-3, 4001)
    counts = [count_sign_changes([green_closed_alpha4(4 * a ** 4, x) for x in xs])
              for a in (3.0, 5.0, 8.0)]
    assert counts == sorted(counts)


def test_alpha4_positivity_boundary():
    xs = np.linspace(1e-3, math.pi - 1e-3, 2001)
    g = np.array([green_closed_alpha4(4 * 0.4 ** 4, x) for x in xs])
    assert np.all(g > 0) and np.all(np.diff(g) < 0)
    g = np.array([green_closed_alpha4(4 * 1.5 ** 4, x) for x in xs])
    assert not np.all(np.diff(g) < 0)


def test_count_sign_changes():
    assert count_sign_changes([1, -1, 0, -2, 3]) == 2
    assert count_sign_changes([]) == 0


# -- curves and coalescence -----------------------------------------------------------

@pytest.fixture(scope="module")
def curves():
    return zero_curves(3.2, 4.0, 17, 5, c_max_cap=3000.0)


def test_first_curve_everywhere(curves):
    c1 = curves[0]
    assert np.all(c1.exists())
    assert np.all(c1.c < np.array([c_alpha(a) for a in c1.alphas]))


def test_curves_ordered(curves):
    stacked = np.array([cv.c for cv in curves])
    for i in range(len(curves) - 1):
        both = np.isfinite(stacked[i]) & np.isfinite(stacked[i + 1])
        assert np.all(stacked[i][both] < stacked[i + 1][both])


def test_coalescence_2_3(curves):
    a = coalescence_alpha(curves[1], curves[2])
    assert a == pytest.approx(3.325, abs=0.01)
    assert not np.any(curves[1].exists()[curves[1].alphas < a - 0.01])
    assert np.all(curves[1].exists()[curves[1].alphas > a + 0.01])


def test_coalescence_4_5(curves):
    assert coalescence_alpha(curves[3], curves[4]) == pytest.approx(3.89, abs=0.01)


def test_coalescence_1_2_disjoint(curves):
    with pytest.raises(CurvesDisjoint):
        coalescence_alpha(curves[0], curves[1])


def test_pair_predicate():
    assert pair_exists(3.6, 1) and not pair_exists(3.2, 1)


def test_zero_curves_validation():
    with pytest.raises(DomainError):
        zero_curves(1.5, 3.0, 5, 2)


# -- oscillatory integral and its asymptotics --------------------------------------------

def test_I_trivial():
    assert I_ab(OscIntegralParams(0.0, 0.0)) == pytest.approx(2.0, abs=1e-10)


def test_I_reference():
    f = lambda t: np.exp(0.5 * t) / np.cosh(t / 2) ** 2
    ref = adaptive_quad(f, 0.0, 80.0, QuadConfig(abs_tol=1e-12), vectorized=True).value
    assert I_ab(OscIntegralParams(0.5, 0.0)) == pytest.approx(ref, abs=1e-9)


def test_I_domain():
    with pytest.raises(DomainError):
        OscIntegralParams(1.0, 1.0)
    with pytest.raises(DomainError):
        OscIntegralParams(0.5, -1.0)


def test_asymptotic_formulas():
    assert I2_asym(OscIntegralParams(0.3, 7.0)) == -0.3 / 49.0
    b = 2.5
    assert I1_asym(OscIntegralParams(0.0, b)) == pytest.approx(4 * math.pi * b * math.exp(-math.pi * b),
                                                               rel=1e-15)


def test_I_against_asymptotics():
    p = OscIntegralParams(0.2, 8.0)
    scale = max(20 * math.pi * p.b * math.exp(-3 * math.pi * p.b), p.a / p.b ** 4)
    assert abs(I_ab(p) - I1_asym(p) - I2_asym(p)) <= 2 * scale
    p = OscIntegralParams(0.3, 10.0)
    assert abs(I_ab(p) - I1_asym(p) - I2_asym(p)) <= 0.1 * abs(I_ab(p))


@pytest.mark.parametrize("a", [0.2, 0.4])
@pytest.mark.parametrize("b", [8.0, 12.0])
def test_sinh_part(a, b):
    p = OscIntegralParams(a, b)
    assert abs(I_ab_split(p)[1] - I2_asym(p)) <= 2 * a / b ** 4


@pytest.mark.parametrize("a,b", [(0.0, 3.0), (0.3, 3.0), (0.2, 8.0)])
def test_cosh_part(a, b):
    p = OscIntegralParams(a, b)
    assert I_ab_split(p)[0] == pytest.approx(I1_asym(p), rel=1e-4)


def test_split_sums_to_whole():
    p = OscIntegralParams(0.35, 4.0)
    assert sum(I_ab_split(p)) == pytest.approx(I_ab(p), abs=2e-10)


# -- first-zero law --------------------------------------------------------------------

def test_prediction_factor_two():
    c_scan = scan_pi_zeros(2.5, 50.0)[0].c
    pred = predict_first_zero(2.5)[0]
    assert 0.5 <= pred / c_scan <= 2.0


def test_prediction_increases_towards_two():
    preds = [predict_first_zero(a)[0] for a in (2.5, 2.35, 2.2, 2.1, 2.05)]
    assert all(u < v for u, v in zip(preds, preds[1:]))
    assert predict_first_zero(2.0001)[0] > 3 * preds[-1]


def test_prediction_closed_form_alpha_2_1():
    alpha = 2.1
    c_imp, c_closed = predict_first_zero(alpha)
    eps = alpha - 2
    scale = math.log(abs(math.log(eps))) / abs(math.log(eps))
    u_imp, u_closed = c_imp ** (1 / alpha), c_closed ** (1 / alpha)
    assert abs(u_imp - u_closed) / u_imp <= scale


def test_prediction_domain():
    with pytest.raises(DomainError):
        predict_first_zero(2.0)
