"""Zeros of ``c -> G(pi; c, alpha)`` and the asymptotics of the first zero.

For ``alpha <= 2`` the value ``G(pi)`` is positive; for ``2 < alpha <= 4``
it changes sign at a first root ``c_0(alpha) < c_alpha`` and at further
roots beyond ``c_alpha``, which appear in pairs as ``alpha`` increases.
At ``alpha = 4`` the roots are ``c = 4 a**4`` with
``tanh(pi a) + tan(pi a) = 0``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import BracketFailure, CurvesDisjoint, DomainError, NoRoot
from .green import GreenParams, c_alpha, green_fourier_with_error
from .quadrature import QuadConfig, oscillatory_cos_quad
from .series import SeriesControl

__all__ = [
    "ZeroRecord",
    "ZeroCurve",
    "OscIntegralParams",
    "green_pi",
    "green_pi_with_error",
    "scan_pi_zeros",
    "zero_curves",
    "pair_exists",
    "coalescence_alpha",
    "transcendental_roots_alpha4",
    "I_ab",
    "I_ab_split",
    "I1_asym",
    "I2_asym",
    "ab_from_c",
    "predict_first_zero",
    "count_sign_changes",
]

# G(pi) below this is treated as an exact zero on the scan grid.
ZERO_EPS = 1e-13
# Below this |G(pi)| the series is re-evaluated with a tighter tail tolerance.
ESCALATE_BELOW = 1e-10
SCAN_CONTROL = SeriesControl(abs_tol=1e-14, max_terms=10_000_000)
FINE_CONTROL = SeriesControl(abs_tol=1e-16, max_terms=10_000_000)
C_MIN = 1e-2
# Multiple of the series error estimate below which the sign of G(pi) is noise.
NOISE_FACTOR = 8.0
C_MAX_CAP = 500.0


@dataclass(frozen=True)
class ZeroRecord:
    index: int
    alpha: float
    c: float
    bracket: tuple[float, float]


@dataclass
class ZeroCurve:
    """The k-th root as a function of alpha; ``c`` is NaN where the root is absent."""

    index: int
    alphas: np.ndarray
    c: np.ndarray

    def exists(self) -> np.ndarray:
        return np.isfinite(self.c)


@dataclass(frozen=True)
class OscIntegralParams:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < 1:
            raise DomainError(f"the integral needs a < 1, got a={self.a}")
        if not self.b >= 0:
            raise DomainError(f"b must be non-negative, got {self.b}")


def green_pi_with_error(c: float, alpha: float) -> tuple[float, float]:
    """``G(pi)`` and its error estimate, with the tail tolerance tightened near zeros."""
    p = GreenParams(c, alpha)
    g, err = green_fourier_with_error(p, math.pi, SCAN_CONTROL)
    if abs(g) < ESCALATE_BELOW:
        g, err = green_fourier_with_error(p, math.pi, FINE_CONTROL)
    return g, err


def green_pi(c: float, alpha: float) -> float:
    """``G(pi)`` from the series, with the tail tolerance tightened near zeros."""
    return green_pi_with_error(c, alpha)[0]


def _bisect(f, lo: float, hi: float, flo: float, tol: float) -> tuple[float, float]:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid, mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def scan_pi_zeros(alpha: float, c_max: float, n_grid: int = 400, tol: float = 1e-12,
                  c_min: float = C_MIN) -> list[ZeroRecord]:
    """Locate the sign changes of ``c -> G(pi; c, alpha)`` on ``[c_min, c_max]``.

    Parameters
    ----------
    alpha : float
        Order, ``alpha > 1`` so the series converges absolutely.
    c_max : float
        Upper end of the log-spaced grid.
    n_grid : int
        Number of grid points.
    tol : float
        Final bisection bracket width.

    Returns
    -------
    list of ZeroRecord
        Ordered by increasing ``c``; empty if no sign change is seen.
    """
    if not alpha > 1:
        raise DomainError(f"scan needs alpha > 1, got {alpha}")
    if not c_max > c_min:
        raise DomainError(f"c_max must exceed {c_min}, got {c_max}")
    if n_grid < 2 or not tol > 0:
        raise DomainError("need n_grid >= 2 and tol > 0")
    cs = np.geomspace(c_min, c_max, n_grid)
    ge = np.array([green_pi_with_error(c, alpha) for c in cs])
    g, noise = ge[:, 0], NOISE_FACTOR * ge[:, 1]
    # signs are trusted only where |G| clears the noise floor of the series
    resolved = np.abs(g) > noise
    f = lambda c: green_pi(c, alpha)
    records: list[ZeroRecord] = []
    idx = np.flatnonzero(resolved | (np.abs(g) < ZERO_EPS))
    prev = None
    for i in idx:
        if not resolved[i]:
            # numerically zero: a root only if the resolved neighbours disagree
            if 0 < i < n_grid - 1 and resolved[i - 1] and resolved[i + 1] \
                    and g[i - 1] * g[i + 1] < 0:
                records.append(ZeroRecord(len(records) + 1, alpha, float(cs[i]),
                                          (float(cs[i]), float(cs[i]))))
                prev = None
            continue
        if prev is not None and g[prev] * g[i] < 0:
            lo, hi = _bisect(f, float(cs[prev]), float(cs[i]), float(g[prev]), tol)
            records.append(ZeroRecord(len(records) + 1, alpha, 0.5 * (lo + hi), (lo, hi)))
        prev = i
    return records


def _default_c_max(alpha: float, cap: float) -> float:
    return min(4.0 * c_alpha(alpha), cap)


def zero_curves(alpha_lo: float, alpha_hi: float, n_alpha: int, k_max: int,
                c_max_cap: float = C_MAX_CAP, n_grid: int = 400, tol: float = 1e-10,
                workers: int = 1) -> list[ZeroCurve]:
    """Track the first ``k_max`` roots over an alpha grid.

    For each alpha the scan runs up to ``c_max = 4 c_alpha(alpha)``; if fewer
    than ``k_max`` roots are found the range is doubled until ``c_max_cap``.
    """
    if not 2 < alpha_lo < alpha_hi <= 4:
        raise DomainError("need 2 < alpha_lo < alpha_hi <= 4")
    if n_alpha < 2 or k_max < 1:
        raise DomainError("need n_alpha >= 2 and k_max >= 1")
    alphas = np.linspace(alpha_lo, alpha_hi, n_alpha)

    def one(alpha: float) -> list[ZeroRecord]:
        c_max = _default_c_max(alpha, c_max_cap)
        while True:
            recs = scan_pi_zeros(alpha, c_max, n_grid, tol)
            if len(recs) >= k_max or c_max >= c_max_cap:
                return recs
            c_max = min(2.0 * c_max, c_max_cap)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            per_alpha = list(ex.map(one, alphas))
    else:
        per_alpha = [one(a) for a in alphas]
    curves = []
    for k in range(1, k_max + 1):
        cs = np.array([recs[k - 1].c if len(recs) >= k else np.nan for recs in per_alpha])
        curves.append(ZeroCurve(k, alphas, cs))
    return curves


def _local_maxima(alpha: float, c_max: float, n: int) -> list[tuple[float, float]]:
    """Local maxima of ``G(pi; c)`` after the first root, ordered in c."""
    cs = np.geomspace(0.5, c_max, n)
    v = np.array([green_pi(c, alpha) for c in cs])
    neg = np.nonzero(v < 0)[0]
    if neg.size == 0:
        return []
    out = []
    for i in range(int(neg[0]) + 1, n - 1):
        if v[i] >= v[i - 1] and v[i] >= v[i + 1]:
            res = minimize_scalar(lambda c: -green_pi(c, alpha),
                                  bracket=(cs[i - 1], cs[i], cs[i + 1]))
            out.append((float(res.x), float(-res.fun)))
    return out


def pair_exists(alpha: float, pair: int, c_max: float = 3000.0, n: int = 3000) -> bool:
    """Whether roots ``2*pair`` and ``2*pair + 1`` exist at this alpha.

    Between the first root and infinity ``G(pi)`` is negative except on the
    intervals bounded by later root pairs, so a pair exists exactly when the
    ``pair``-th local maximum after the first root is positive.
    """
    maxima = _local_maxima(alpha, c_max, n)
    return len(maxima) >= pair and maxima[pair - 1][1] > 0


def coalescence_alpha(curve_i: ZeroCurve, curve_j: ZeroCurve, tol: float = 1e-3,
                      c_max: float = 3000.0) -> float:
    """Alpha below which roots ``i`` and ``j = i + 1`` (``i`` even) have merged.

    The sampled curves give a starting bracket; the boundary is then refined
    by bisection in alpha on :func:`pair_exists`.

    Raises
    ------
    CurvesDisjoint
        If the two roots are not an even/odd pair that appears and disappears
        together on the sampled range.
    """
    i, j = curve_i.index, curve_j.index
    if i > j:
        curve_i, curve_j, i, j = curve_j, curve_i, j, i
    ei, ej = curve_i.exists(), curve_j.exists()
    both = ei & ej
    if i % 2 != 0 or j != i + 1 or not both.any() or not np.array_equal(ei, ej):
        raise CurvesDisjoint(f"roots {i} and {j} do not coalesce on the sampled range")
    alphas = curve_i.alphas
    first = int(np.argmax(both))
    if first == 0:
        raise CurvesDisjoint(f"roots {i} and {j} exist over the whole sampled range")
    pair = i // 2
    lo, hi = float(alphas[first - 1]), float(alphas[first])
    # sampling can miss a narrow pair: widen until the predicate brackets
    while pair_exists(lo, pair, c_max) and lo > 2.0:
        lo -= hi - lo
    if not pair_exists(hi, pair, c_max):
        raise CurvesDisjoint(f"roots {i} and {j} could not be confirmed at alpha={hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pair_exists(mid, pair, c_max):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def transcendental_roots_alpha4(n_max: int, tol: float = 1e-15) -> list[tuple[float, float]]:
    """Roots ``a_n`` of ``tanh(pi a) + tan(pi a) = 0`` in ``(n - 1/4, n)`` and ``c_n = 4 a_n**4``.

    The equation is solved for the offset ``d = a - (n - 1/4)``: with
    ``t = tan(pi d)`` and ``tanh(pi a) = 1 - eps``,
    ``eps = 2/(exp(2 pi a) + 1)``, it reads ``(1 - eps) + (t - 1)/(t + 1) = 0``.
    The offset is about ``exp(-2 pi n)``, far below the spacing of floats
    near ``n``, so this form is needed to bracket the root at all.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    out = []
    for n in range(1, n_max + 1):
        base = n - 0.25

        def f(d):
            a = base + d
            eps = 2.0 / (math.exp(2.0 * math.pi * a) + 1.0)
            t = math.tan(math.pi * d)
            return (1.0 - eps) + (t - 1.0) / (t + 1.0)

        lo, hi = 0.0, 0.25 - 1e-12
        flo, fhi = f(lo), f(hi)
        if flo * fhi >= 0:
            raise BracketFailure(f"no sign change for n={n}")
        while hi - lo > tol * max(1.0, lo):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if (f(mid) < 0) == (flo < 0):
                lo = mid
            else:
                hi = mid
        a_n = base + 0.5 * (lo + hi)
        out.append((a_n, 4.0 * a_n ** 4))
    return out


# ---------------------------------------------------------------------------
# oscillatory integral I(a, b)

def _sech2_half(t):
    e = np.exp(-t)
    return 4.0 * e / (1.0 + e) ** 2


def _osc(p: OscIntegralParams, weight, cfg: QuadConfig, decay: float) -> float:
    g = lambda t: _sech2_half(t) * weight(t)
    tail = lambda T: 4.0 * math.exp(-decay * T) / decay
    return oscillatory_cos_quad(g, p.b, cfg, tail_bound=tail, vectorized=True).value


def I_ab(p: OscIntegralParams, cfg: QuadConfig = QuadConfig()) -> float:
    """``int_0^inf sech(t/2)**2 exp(a t) cos(b t) dt`` for ``a < 1``."""
    return _osc(p, lambda t: np.exp(p.a * t), cfg, 1.0 - p.a)


def I_ab_split(p: OscIntegralParams, cfg: QuadConfig = QuadConfig()) -> tuple[float, float]:
    """The cosh and sinh parts ``(I1, I2)`` with ``I = I1 + I2``; needs ``|a| < 1``."""
    if not abs(p.a) < 1:
        raise DomainError(f"the split needs |a| < 1, got a={p.a}")
    d = 1.0 - abs(p.a)
    i1 = _osc(p, lambda t: np.cosh(p.a * t), cfg, d)
    i2 = _osc(p, lambda t: np.sinh(p.a * t), cfg, d)
    return i1, i2


def I1_asym(p: OscIntegralParams) -> float:
    """Leading residue term ``4 pi (b cos(pi a) + a sin(pi a)) exp(-pi b)``."""
    return 4.0 * math.pi * (p.b * math.cos(math.pi * p.a) + p.a * math.sin(math.pi * p.a)) \
        * math.exp(-math.pi * p.b)


def I2_asym(p: OscIntegralParams) -> float:
    """Leading integration-by-parts term ``-a / b**2``."""
    return -p.a / p.b ** 2


def ab_from_c(c: float, alpha: float) -> tuple[float, float]:
    """``a = c**(1/alpha) cos(pi/alpha)``, ``b = c**(1/alpha) sin(pi/alpha)``."""
    u = c ** (1.0 / alpha)
    return u * math.cos(math.pi / alpha), u * math.sin(math.pi / alpha)


def predict_first_zero(alpha: float) -> tuple[float, float]:
    """Asymptotic location of the first root near ``alpha = 2``.

    Solves ``a(c) = 4 pi b(c)**3 exp(-pi b(c))`` by bisection on
    ``c in [1, 1e6]``, using the difference of logarithms, which is
    increasing there.

    Returns
    -------
    (float, float)
        The root of the implicit equation and the closed-form estimate
        ``ln((alpha - 2)/16)**2 / pi**2``.

    Raises
    ------
    NoRoot
        If the two sides do not cross on the search interval.
    """
    if not 2 < alpha <= 2.5:
        raise DomainError(f"prediction is for 2 < alpha <= 2.5, got {alpha}")

    def F(c):
        a, b = ab_from_c(c, alpha)
        return math.log(a) - math.log(4.0 * math.pi) - 3.0 * math.log(b) + math.pi * b

    lo, hi = 1.0, 1e6
    flo, fhi = F(lo), F(hi)
    if flo * fhi > 0:
        raise NoRoot(f"no crossing on [{lo}, {hi}] for alpha={alpha}")
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if (F(mid) < 0) == (flo < 0):
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 * hi:
            break
    closed = math.log((alpha - 2.0) / 16.0) ** 2 / math.pi ** 2
    return 0.5 * (lo + hi), closed


def count_sign_changes(values: Sequence[float]) -> int:
    """Number of strict sign changes in a sequence, ignoring exact zeros."""
    v = np.asarray(values, dtype=float)
    v = v[v != 0]
    return int(np.count_nonzero(v[:-1] * v[1:] < 0))
