"""Green's function of ``c + (-Laplacian)**(alpha/2)`` on the periodic interval [-pi, pi].

``G(x) = (1/2pi) (1/c + 2 sum_{n>=1} cos(n x) / (c + n**alpha))``.

Four routes are provided: the Fourier series (reference for every
``alpha``), the Mittag-Leffler integral representation (valid for
``alpha <= 2`` and, for ``alpha > 2``, below the threshold ``c_alpha``),
and exact closed forms at ``alpha = 2`` and ``alpha = 4``.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.special import gamma

from .errors import DomainError, NonConvergence, SingularPoint, ValidityViolation
from .mittag_leffler import ml_eval_array
from .quadrature import QuadConfig, adaptive_quad, semi_infinite_quad
from .series import SeriesControl, cosine_series, zero_series

__all__ = [
    "GreenParams",
    "GreenMethod",
    "PiMethod",
    "ProfileSample",
    "FOURIER_CONTROL",
    "c_alpha",
    "green_fourier",
    "green_fourier_with_error",
    "green_integral",
    "green_at_pi",
    "green_closed_alpha2",
    "green_closed_alpha4",
    "green_deriv_alpha4",
    "green_deriv_integral",
    "profile",
]

# Default truncation control for the Fourier route.  The tail is accelerated,
# so the term budget only matters for |x| very close to 0.
FOURIER_CONTROL = SeriesControl(abs_tol=1e-14, max_terms=10_000_000)

_PI = math.pi


@dataclass(frozen=True)
class GreenParams:
    c: float
    alpha: float

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise DomainError(f"c must be positive, got {self.c}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be positive, got {self.alpha}")


class GreenMethod(enum.Enum):
    Fourier = "Fourier"
    Integral = "Integral"
    ClosedForm2 = "ClosedForm2"
    ClosedForm4 = "ClosedForm4"


class PiMethod(enum.Enum):
    Series = "Series"
    MLIntegral = "MLIntegral"
    Csch = "Csch"


@dataclass(frozen=True)
class ProfileSample:
    x: float
    g: float
    method: GreenMethod


def _reduce(x: float) -> float:
    ax = abs(float(x))
    if ax > _PI * (1 + 1e-12):
        raise DomainError(f"x must lie in [-pi, pi], got {x}")
    return min(ax, _PI)


def c_alpha(alpha: float) -> float:
    """Validity threshold ``cos(pi/alpha)**(-alpha)`` for ``alpha > 2``."""
    if not alpha > 2:
        raise DomainError(f"c_alpha is defined for alpha > 2, got {alpha}")
    # cos(t)**2 = (1 + cos 2t)/2 keeps alpha = 4 exact: (1/2)**-2 = 4
    return (0.5 * (1.0 + math.cos(2.0 * _PI / alpha))) ** (-0.5 * alpha)


def _check_validity(p: GreenParams) -> None:
    if p.alpha > 2 and p.c >= c_alpha(p.alpha):
        raise ValidityViolation(
            f"integral representation diverges for c={p.c} >= c_alpha={c_alpha(p.alpha):.6g}")


# ---------------------------------------------------------------------------
# Fourier series

def green_fourier(p: GreenParams, x: float, ctrl: SeriesControl = FOURIER_CONTROL) -> float:
    """Green's function from its Fourier series.

    Parameters
    ----------
    p : GreenParams
        Spectral shift ``c`` and order ``alpha``.
    x : float
        Point in ``[-pi, pi]``; only ``|x|`` is used.
    ctrl : SeriesControl
        Tolerance for the accelerated tail and a budget on explicit terms.

    Returns
    -------
    float

    Raises
    ------
    SingularPoint
        At ``x = 0`` when ``alpha <= 1``, where ``G`` is infinite.
    TruncationFailure
        If the term budget is too small for the requested tolerance.
    """
    return green_fourier_with_error(p, x, ctrl)[0]


def green_fourier_with_error(p: GreenParams, x: float,
                             ctrl: SeriesControl = FOURIER_CONTROL) -> tuple[float, float]:
    """:func:`green_fourier` together with an estimate of its absolute error.

    The estimate covers the tail truncation and the rounding of the partial
    sum; it sets the noise floor below which the sign of ``G`` is not
    resolved.
    """
    x = _reduce(x)
    if x == 0.0:
        if p.alpha <= 1.0:
            raise SingularPoint(f"G(0) is infinite for alpha={p.alpha} <= 1")
        s, err, _ = zero_series(p.c, p.alpha, ctrl)
    else:
        s, err, _ = cosine_series(p.c, p.alpha, x, ctrl)
    g = (1.0 / p.c + 2.0 * s) / (2.0 * _PI)
    err = (2.0 * err + 2.0 * np.finfo(float).eps / p.c) / (2.0 * _PI)
    return g, err


# ---------------------------------------------------------------------------
# Mittag-Leffler integral representations

def _ml_kernel(p: GreenParams, t: np.ndarray) -> np.ndarray:
    """``exp(-t) t**(alpha-1) E_{alpha,alpha}(-c t**alpha)``, without intermediate overflow."""
    ta = t ** p.alpha
    return ta / t * ml_eval_array(p.alpha, p.alpha, -p.c * ta, log_scale=t)


def _ml_tail_envelope(p: GreenParams, T: float, beta_shift: float) -> float:
    """Bound on ``int_T^inf exp(-t) |h(t)| dt`` for the Mittag-Leffler factor ``h``.

    ``beta_shift = 0`` is for ``h = t**(alpha-1) E_{alpha,alpha}(-c t**alpha)``,
    ``beta_shift = 1`` for ``h = E_alpha(-c t**alpha)``.  For ``alpha <= 1``
    complete monotonicity gives a rigorous bound; otherwise the leading pole
    and algebraic terms of the large-argument expansion are used with a
    safety factor.
    """
    a, c = p.alpha, p.c
    eT = math.exp(-T)
    if a <= 1.0:
        if beta_shift == 0:
            return T ** (a - 1.0) * eT / gamma(a)
        return eT
    ac = c ** (1.0 / a) * math.cos(_PI / a)
    if beta_shift == 0:
        P = 2.0 / a * c ** ((1.0 - a) / a)
        A = abs(1.0 / gamma(-a)) / c ** 2 if not float(a).is_integer() else 0.0
        alg = A * T ** (-a - 1.0) * eT
    else:
        P = 2.0 / a
        A = abs(1.0 / gamma(1.0 - a)) / c if not float(a).is_integer() else 0.0
        alg = A * T ** (-a) * eT
    pole = P * math.exp(-(1.0 - ac) * T) / (1.0 - ac)
    return 2.5 * (pole + alg)


def _stretch(p: GreenParams, cfg: QuadConfig) -> QuadConfig:
    """Raise the truncation limit when the integrand decays like ``exp(-(1 - a_c) t)``, ``a_c -> 1``."""
    if p.alpha <= 2:
        return cfg
    rate = 1.0 - p.c ** (1.0 / p.alpha) * math.cos(_PI / p.alpha)
    return replace(cfg, tail_cutoff=max(cfg.tail_cutoff, 60.0 / rate))


def _finish(res, what: str) -> float:
    if not res.converged:
        err = NonConvergence(f"{what}: quadrature did not converge (err {res.err_estimate:.2e})")
        err.result = res
        raise err
    return res.value


def _feature_points(p: GreenParams, x: float) -> list[float]:
    pts = {1.0, p.c ** (-1.0 / p.alpha)}
    if x > 0:
        pts.update({x, 0.25 * x, 4.0 * x})
    return sorted(v for v in pts if 0 < v < 50)


def green_integral(p: GreenParams, x: float, cfg: QuadConfig = QuadConfig()) -> float:
    """Green's function from its Mittag-Leffler integral representation.

    ``G(x) = 1/(2 pi c) + (1/pi) int_0^inf K(t, x) t**(alpha-1)
    E_{alpha,alpha}(-c t**alpha) dt`` with
    ``K(t, x) = (e**t cos x - 1) / (1 - 2 e**t cos x + e**(2t))``.

    Parameters
    ----------
    p : GreenParams
        Requires ``alpha <= 2`` or ``c < c_alpha(alpha)``.
    x : float
        Point in ``[-pi, pi]``; ``x = 0`` is singular for ``alpha <= 1``.
    cfg : QuadConfig
        Quadrature tolerances.

    Raises
    ------
    ValidityViolation
        For ``alpha > 2`` and ``c >= c_alpha(alpha)``, where the integral diverges.
    """
    x = _reduce(x)
    _check_validity(p)
    if x == 0.0 and p.alpha <= 1.0:
        raise SingularPoint(f"G(0) is infinite for alpha={p.alpha} <= 1")
    s2 = math.sin(0.5 * x) ** 2

    def f(t):
        q = np.exp(-t)
        one_q = -np.expm1(-t)
        # K(t, x) = exp(-t) * Kq; the exp(-t) travels with the kernel
        Kq = (one_q - 2.0 * s2) / (one_q ** 2 + 4.0 * q * s2)
        return Kq * _ml_kernel(p, t) / _PI

    def tail(T):
        kf = (1.0 + math.exp(-T)) / (-math.expm1(-T)) ** 2
        return kf * _ml_tail_envelope(p, T, 0) / _PI

    power = p.alpha if x > 0 else p.alpha - 1.0
    res = semi_infinite_quad(f, tail, _stretch(p, cfg), points=_feature_points(p, x),
                             endpoint_power=power if power < 1 else None, vectorized=True)
    return 1.0 / (2.0 * _PI * p.c) + _finish(res, "green_integral")


def green_deriv_integral(p: GreenParams, x: float, cfg: QuadConfig = QuadConfig()) -> float:
    """``G'(x)`` on ``(0, pi)`` from the differentiated integral representation.

    ``-(sin x / pi) int_0^inf t**(alpha-1) E_{alpha,alpha}(-c t**alpha)
    e**t (e**(2t) - 1) / (1 - 2 e**t cos x + e**(2t))**2 dt``; for
    ``alpha <= 1`` the integrand is non-negative, so the result is ``<= 0``.
    """
    if not 0 < p.alpha <= 2:
        raise DomainError(f"derivative representation needs 0 < alpha <= 2, got {p.alpha}")
    x = float(x)
    if not 0 < x < _PI:
        raise DomainError(f"x must lie in (0, pi), got {x}")
    s2 = math.sin(0.5 * x) ** 2

    def f(t):
        q = np.exp(-t)
        one_q = -np.expm1(-t)
        D = one_q ** 2 + 4.0 * q * s2
        return (1.0 - q * q) / D ** 2 * _ml_kernel(p, t)

    def tail(T):
        kf = 1.0 / (-math.expm1(-T)) ** 4
        return kf * _ml_tail_envelope(p, T, 0)

    # the tail is scaled so that the tolerance applies to the final value
    res = semi_infinite_quad(f, tail, cfg.with_tol(cfg.abs_tol * _PI / max(math.sin(x), 1e-300)),
                             points=_feature_points(p, x),
                             endpoint_power=p.alpha if p.alpha < 1 else None, vectorized=True)
    return -math.sin(x) / _PI * _finish(res, "green_deriv_integral")


def _green_pi_ml(p: GreenParams, cfg: QuadConfig) -> float:
    _check_validity(p)

    def f(t):
        e = np.exp(-t)
        E = ml_eval_array(p.alpha, 1.0, -p.c * t ** p.alpha, log_scale=t)
        return E / (1.0 + e) ** 2 / (_PI * p.c)

    def tail(T):
        return _ml_tail_envelope(p, T, 1) / (_PI * p.c)

    res = semi_infinite_quad(f, tail, _stretch(p, cfg), points=_feature_points(p, 0.0),
                             vectorized=True)
    return _finish(res, "green_at_pi")


def _green_pi_csch(p: GreenParams, cfg: QuadConfig) -> float:
    a, c = p.alpha, p.c
    if not 0 < a < 2:
        raise DomainError(f"csch representation needs 0 < alpha < 2, got {a}")
    ca = math.cos(0.5 * a * _PI)
    k = _PI * c ** (1.0 / a)
    pref = math.sin(0.5 * a * _PI) / (_PI * c ** (1.0 - 1.0 / a))

    # integrate in u = k s so that the exponential decay rate is 1
    def f(u):
        s = u / k
        sa = s ** a
        # csch(u) = 2 e^{-u} / (1 - e^{-2u}), stable for all u > 0
        csch = 2.0 * np.exp(-u) / (-np.expm1(-2.0 * u))
        return pref / k * sa * csch / (1.0 + 2.0 * sa * ca + sa * sa)

    def tail(T):
        peak = 1.0 / (2.0 + 2.0 * ca)
        return pref / k * peak * 2.0 * math.exp(-T) / (-math.expm1(-2.0 * T))

    res = semi_infinite_quad(f, tail, cfg, points=[v for v in (1.0, k) if v < 50],
                             endpoint_power=a if a < 1 else None, vectorized=True)
    return _finish(res, "green_at_pi")


def green_at_pi(p: GreenParams, method: PiMethod = PiMethod.Series,
                cfg: QuadConfig = QuadConfig(), ctrl: SeriesControl = FOURIER_CONTROL) -> float:
    """``G(pi)`` by the Fourier series, the Mittag-Leffler integral, or the csch integral.

    Parameters
    ----------
    p : GreenParams
    method : PiMethod
        ``Series``: alternating Fourier series (accelerated tail, any alpha).
        ``MLIntegral``: ``(1/(pi c)) int e**t/(1+e**t)**2 E_alpha(-c t**alpha) dt``,
        valid for ``alpha <= 2`` or ``c < c_alpha``.
        ``Csch``: positive-integrand representation, ``0 < alpha < 2`` only.
    """
    method = PiMethod(method)
    if method is PiMethod.Series:
        return green_fourier(p, _PI, ctrl)
    if method is PiMethod.MLIntegral:
        return _green_pi_ml(p, cfg)
    return _green_pi_csch(p, cfg)


# ---------------------------------------------------------------------------
# closed forms

def green_closed_alpha2(c: float, x: float) -> float:
    """``cosh(sqrt(c)(pi - |x|)) / (2 sqrt(c) sinh(sqrt(c) pi))``."""
    GreenParams(c, 2.0)
    x = _reduce(x)
    s = math.sqrt(c)
    if s * _PI > 300:
        # ratio of hyperbolic functions without overflow
        return (math.exp(-s * x) + math.exp(-s * (2 * _PI - x))) / (2 * s * (1 - math.exp(-2 * s * _PI)))
    return math.cosh(s * (_PI - x)) / (2.0 * s * math.sinh(s * _PI))


def _a4(c: float) -> float:
    GreenParams(c, 4.0)
    return (c / 4.0) ** 0.25


def green_closed_alpha4(c: float, x: float) -> float:
    """Closed form at ``alpha = 4`` with ``c = 4 a**4``.

    ``G(x) = g(|x|) / (8 a**3 (cosh 2 pi a - cos 2 pi a))`` with
    ``g(x) = sinh(ax) cos a(2pi-x) + cosh(ax) sin a(2pi-x)
    + sin(ax) cosh a(2pi-x) + cos(ax) sinh a(2pi-x)``.
    """
    a = _a4(c)
    x = _reduce(x)
    y = 2 * _PI - x
    g = (math.sinh(a * x) * math.cos(a * y) + math.cosh(a * x) * math.sin(a * y)
         + math.sin(a * x) * math.cosh(a * y) + math.cos(a * x) * math.sinh(a * y))
    return g / (8.0 * a ** 3 * (math.cosh(2 * _PI * a) - math.cos(2 * _PI * a)))


def green_deriv_alpha4(c: float, x: float) -> float:
    """``G'(x)`` at ``alpha = 4``; odd in ``x``.

    ``(sinh(ax) sin a(2pi-x) - sin(ax) sinh a(2pi-x)) / (4 a**2 (cosh 2 pi a - cos 2 pi a))``.
    """
    a = _a4(c)
    sign = -1.0 if x < 0 else 1.0
    x = _reduce(x)
    y = 2 * _PI - x
    num = math.sinh(a * x) * math.sin(a * y) - math.sin(a * x) * math.sinh(a * y)
    return sign * num / (4.0 * a ** 2 * (math.cosh(2 * _PI * a) - math.cos(2 * _PI * a)))


# ---------------------------------------------------------------------------
# profiles

def _auto_method(alpha: float) -> GreenMethod:
    if alpha == 2.0:
        return GreenMethod.ClosedForm2
    if alpha == 4.0:
        return GreenMethod.ClosedForm4
    return GreenMethod.Fourier


def _evaluate(p: GreenParams, x: float, method: GreenMethod, cfg: QuadConfig) -> float:
    try:
        if method is GreenMethod.Fourier:
            return green_fourier(p, x)
        if method is GreenMethod.Integral:
            return green_integral(p, x, cfg)
        if method is GreenMethod.ClosedForm2:
            return green_closed_alpha2(p.c, x)
        return green_closed_alpha4(p.c, x)
    except SingularPoint:
        return math.nan


def profile(
    p: GreenParams,
    grid: Sequence[float],
    method_policy: str = "auto",
    cfg: QuadConfig = QuadConfig(),
    workers: int = 1,
) -> list[ProfileSample]:
    """Evaluate ``G`` on a grid of points in ``[-pi, pi]``.

    Parameters
    ----------
    p : GreenParams
    grid : sequence of float
    method_policy : {"auto", "fourier", "integral", "closed"}
        ``auto`` uses the closed forms at ``alpha`` = 2 or 4 and the Fourier
        series otherwise.
    workers : int
        Number of threads; the output order always follows ``grid``.

    Returns
    -------
    list of ProfileSample
        Points where ``G`` is infinite carry ``g = nan``.
    """
    policy = method_policy.lower()
    if policy == "auto":
        method = _auto_method(p.alpha)
    elif policy == "fourier":
        method = GreenMethod.Fourier
    elif policy == "integral":
        method = GreenMethod.Integral
    elif policy == "closed":
        method = _auto_method(p.alpha)
        if method is GreenMethod.Fourier:
            raise DomainError(f"no closed form for alpha={p.alpha}; only alpha in {{2, 4}}")
    else:
        raise DomainError(f"unknown method policy {method_policy!r}")
    xs = [float(v) for v in grid]
    for v in xs:
        _reduce(v)
    if workers > 1 and len(xs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            values = list(ex.map(lambda v: _evaluate(p, v, method, cfg), xs))
    else:
        values = [_evaluate(p, v, method, cfg) for v in xs]
    return [ProfileSample(x, g, method) for x, g in zip(xs, values)]
