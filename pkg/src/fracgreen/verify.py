"""Property suites run by ``fracgreen verify``.

Each check returns a :class:`Check` with the measured worst-case residual
and the bound it was held to.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy.special import rgamma

from .green import (GreenParams, PiMethod, c_alpha, green_at_pi, green_closed_alpha2,
                    green_closed_alpha4, green_fourier, green_integral, profile)
from .mittag_leffler import (MLMethod, MLQuery, ml_deriv_identity_residual, ml_eval,
                             ml_eval_array, ml_integral_rep)
from .series import SeriesControl, cosine_series
from .zeros import (I1_asym, I2_asym, I_ab, I_ab_split, OscIntegralParams, coalescence_alpha,
                    count_sign_changes, green_pi, predict_first_zero, scan_pi_zeros,
                    transcendental_roots_alpha4, zero_curves)

__all__ = ["Check", "SUITES", "run_suite", "ml_closed_form"]


@dataclass
class Check:
    name: str
    passed: bool
    worst: float
    bound: float
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: worst={self.worst:.3e} bound={self.bound:.3e} ({self.seconds:.1f}s)"


def _check(name: str, worst: float, bound: float, ok: bool | None = None) -> Check:
    passed = bool(worst <= bound) if ok is None else bool(ok)
    return Check(name, passed, float(worst), float(bound))


def ml_closed_form(alpha: int, x: np.ndarray) -> np.ndarray:
    """``E_alpha(-x**alpha)`` for alpha in {1, 2, 3, 4} in elementary functions."""
    x = np.asarray(x, dtype=float)
    if alpha == 1:
        return np.exp(-x)
    if alpha == 2:
        return np.cos(x)
    if alpha == 3:
        return (np.exp(-x) + 2.0 * np.exp(x / 2.0) * np.cos(math.sqrt(3.0) * x / 2.0)) / 3.0
    if alpha == 4:
        y = x / math.sqrt(2.0)
        return np.cos(y) * np.cosh(y)
    raise ValueError(alpha)


# ---------------------------------------------------------------------------
# Mittag-Leffler

def _ml_normalization() -> Check:
    worst = 0.0
    for a in np.linspace(0.1, 4.0, 14):
        for b in np.linspace(0.1, 4.0, 14):
            worst = max(worst, abs(ml_eval(MLQuery(a, b, 0.0))[0] - rgamma(b)))
        worst = max(worst, abs(ml_eval(MLQuery(a, 1.0, 0.0))[0] - 1.0))
    return _check("ml normalization E(0) = 1/Gamma(beta)", worst, 0.0)


def _ml_closed_forms() -> Check:
    worst = 0.0
    x = np.linspace(0.0, 20.0, 50)
    for a in (1, 2, 3, 4):
        v = ml_eval_array(a, 1.0, -x ** a)
        worst = max(worst, float(np.max(np.abs(v - ml_closed_form(a, x)))))
    return _check("ml closed forms alpha in {1,2,3,4}", worst, 1e-8)


def _ml_monotone() -> Check:
    x = np.linspace(0.0, 50.0, 501)
    violations = 0
    worst_neg = 0.0
    for a in (0.3, 0.6, 1.0):
        e = ml_eval_array(a, 1.0, -x)
        d1 = np.diff(e)
        d2 = np.diff(e, 2)
        violations += int(np.sum(e <= 0) + np.sum(d1 >= 0) + np.sum(d2 <= 0))
        ea = ml_eval_array(a, a, -x)
        worst_neg = max(worst_neg, float(-np.min(ea)))
        violations += int(np.sum(ea < -1e-10))
    return _check("ml complete monotonicity alpha in {0.3,0.6,1}", violations, 0)


def _ml_derivative() -> Check:
    worst = 0.0
    for a in (0.3, 0.8, 1.2, 1.7):
        for x in np.linspace(-30.0, 0.0, 31):
            worst = max(worst, ml_deriv_identity_residual(a, float(x), 1e-5))
    return _check("ml derivative identity E_{a,a} = a E_a'", worst, 1e-5)


def _rel(u: float, v: float) -> float:
    return abs(u - v) / max(1.0, abs(v))


def _ml_consistency() -> Check:
    """Pairwise agreement of the routes where both apply."""
    worst = 0.0
    # series against the branch-cut formula on the edge of the series disc
    for a in (0.4, 0.9, 1.5, 2.5, 3.3):
        for b in (1.0, a):
            for r in (3.0, 3.5, 4.0):
                x = -r ** a
                s = ml_eval(MLQuery(a, b, x), MLMethod.Series)[0]
                worst = max(worst, _rel(s, ml_eval(MLQuery(a, b, x), MLMethod.BranchCut)[0]))
    # large-argument expansions where the dispatcher accepts them
    for a, b in ((0.5, 1.0), (0.7, 0.7), (1.3, 1.0), (2.5, 1.0), (3.5, 3.5)):
        x = np.array([-1e3, -1e4, -1e5])
        vals, meth = ml_eval_array(a, b, x, return_methods=True)
        for v, m, xx in zip(vals, meth, x):
            if m in (MLMethod.AsymptoticSub2, MLMethod.AsymptoticSup2):
                bc = ml_eval(MLQuery(a, b, float(xx)), MLMethod.BranchCut)[0]
                worst = max(worst, _rel(v, bc))
    # integral representation (alpha < 2) against the dispatcher
    for a in (0.5, 1.0, 1.5, 1.9):
        for t in (0.0, 0.7, 2.0, 5.0):
            worst = max(worst, _rel(ml_integral_rep(a, t), ml_eval(MLQuery(a, 1.0, -t ** a))[0]))
    # closed form against the series for integer parameters
    for a in (1, 2, 3, 4):
        for x in (-0.5, -3.0, -5.0):
            s = ml_eval(MLQuery(a, 1.0, x), MLMethod.Series)[0]
            worst = max(worst, _rel(s, ml_eval(MLQuery(a, 1.0, x), MLMethod.ClosedForm)[0]))
    # duplication against the default route for 2 < alpha <= 4
    for a in (2.5, 3.0, 3.5, 4.0):
        for b in (1.0, 1.7):
            x = np.array([-2.0, -50.0, -700.0])
            d = ml_eval_array(a, b, x, MLMethod.Duplication)
            r = ml_eval_array(a, b, x)
            worst = max(worst, max(_rel(u, v) for u, v in zip(d, r)))
    return _check("ml method consistency (relative to max(1,|E|))", worst, 1e-7)


# ---------------------------------------------------------------------------
# Green's function

_GRID_C = (0.5, 1.0, 5.0)
_GRID_A = (0.5, 1.0, 1.5, 2.0)


def _green_evenness() -> Check:
    worst = 0.0
    for c in _GRID_C:
        for a in (0.5, 1.5, 2.5, 4.0):
            p = GreenParams(c, a)
            for x in np.linspace(0.1, math.pi, 7):
                worst = max(worst, abs(green_fourier(p, x) - green_fourier(p, -x)))
                if a <= 2:
                    worst = max(worst, abs(green_integral(p, x) - green_integral(p, -x)))
            worst = max(worst, abs(green_closed_alpha2(c, 1.0) - green_closed_alpha2(c, -1.0)))
            worst = max(worst, abs(green_closed_alpha4(c, 1.0) - green_closed_alpha4(c, -1.0)))
    return _check("green evenness G(-x) = G(x)", worst, 0.0)


def _green_cross() -> Check:
    worst = 0.0
    xs = np.linspace(math.pi / 20, math.pi, 20)
    for c in _GRID_C:
        for a in _GRID_A:
            p = GreenParams(c, a)
            for x in xs:
                worst = max(worst, abs(green_fourier(p, x) - green_integral(p, x)))
    for a in (2.5, 3.5):
        for c in (1.0, 2.0):
            p = GreenParams(c, a)
            for x in xs:
                worst = max(worst, abs(green_fourier(p, x) - green_integral(p, x)))
    return _check("green Fourier vs integral representation", worst, 1e-7)


def _green_positive_decreasing() -> Check:
    xs = np.linspace(math.pi / 200, math.pi, 200)
    violations = 0
    for c in _GRID_C:
        for a in _GRID_A:
            g = np.array([s.g for s in profile(GreenParams(c, a), xs, "fourier")])
            violations += int(np.sum(g <= 0) + np.sum(np.diff(g) >= 0))
    return _check("green positive and decreasing for alpha <= 2", violations, 0)


def _green_pi_below_zero() -> Check:
    worst = -math.inf
    for c in _GRID_C:
        for a in (1.2, 1.5, 2.0, 2.5, 3.5, 4.0):
            p = GreenParams(c, a)
            worst = max(worst, green_fourier(p, math.pi) - green_fourier(p, 0.0))
    return _check("green G(pi) < G(0) for alpha > 1", worst, 0.0, ok=worst < 0)


def _green_pi_methods() -> Check:
    worst = 0.0
    for c in _GRID_C:
        for a in (0.5, 1.0, 1.5, 1.9):
            p = GreenParams(c, a)
            s = green_at_pi(p, PiMethod.Series)
            worst = max(worst, abs(s - green_at_pi(p, PiMethod.MLIntegral)),
                        abs(s - green_at_pi(p, PiMethod.Csch)))
    for a, c in ((2.5, 1.0), (2.5, 10.0), (3.5, 2.0)):
        p = GreenParams(c, a)
        worst = max(worst, abs(green_at_pi(p, PiMethod.Series) - green_at_pi(p, PiMethod.MLIntegral)))
    return _check("green G(pi): series vs ML integral vs csch", worst, 1e-8)


def _green_periodization() -> Check:
    ratio = 0.0
    for c in (0.25, 1.0, 4.0):
        s = math.sqrt(c)
        for K in (1, 2, 3):
            for x in (0.0, 1.0, math.pi):
                n = np.arange(-K, K + 1)
                per = float(np.sum(np.exp(-s * np.abs(x - 2 * math.pi * n)))) / (2 * s)
                scale = math.exp(-s * math.pi * (2 * K - 1)) / (s * (1 - math.exp(-2 * math.pi * s)))
                ratio = max(ratio, abs(per - green_closed_alpha2(c, x)) / scale)
    return _check("green periodization of the line Green's function (err/scale)", ratio, 1.0)


def _green_tail_honesty() -> Check:
    worst = 0.0
    ctrl = SeriesControl(abs_tol=1e-14, max_terms=10_000_000)
    for c in _GRID_C:
        for a in (1.5, 2.0, 2.5, 3.5, 4.0):
            for x in (0.3, 1.0, math.pi):
                s1, _, M = cosine_series(c, a, x, ctrl)
                s2, _, _ = cosine_series(c, a, x, ctrl, min_terms=2 * M)
                worst = max(worst, abs(s1 - s2) / math.pi)
    return _check("green Fourier tail: doubling N changes G by < abs_tol", worst, 1e-14)


def _green_closed_forms() -> Check:
    worst = 0.0
    xs = np.linspace(-math.pi, math.pi, 200)
    for c in (0.25, 1.0, 4.0, 25.0):
        for x in xs:
            worst = max(worst, abs(green_fourier(GreenParams(c, 2.0), x) - green_closed_alpha2(c, x)),
                        abs(green_fourier(GreenParams(c, 4.0), x) - green_closed_alpha4(c, x)))
    return _check("green closed forms alpha = 2, 4 vs Fourier", worst, 1e-10)


# ---------------------------------------------------------------------------
# zeros

def _zeros_brackets() -> Check:
    bad = 0
    for a in (2.5, 3.0, 3.5, 4.0):
        for r in scan_pi_zeros(a, 500.0):
            lo, hi = r.bracket
            if lo == hi:
                continue
            if not (lo <= r.c <= hi and green_pi(lo, a) * green_pi(hi, a) < 0):
                bad += 1
    return _check("zeros brackets straddle a sign change", bad, 0)


def _zeros_table1() -> Check:
    tr = transcendental_roots_alpha4(5)
    recs = scan_pi_zeros(4.0, 3000.0, tol=1e-13)
    bounds = (1e-8, 1e-6, 1e-4, 5e-3, 2e-2)
    if len(recs) < 5:
        return _check("zeros alpha=4 bisection vs transcendental roots", math.inf, 1.0)
    ratio = max(abs(recs[k].c - tr[k][1]) / bounds[k] for k in range(5))
    return _check("zeros alpha=4 bisection vs transcendental roots (err/tol)", ratio, 1.0)


def _zeros_first_root_location() -> Check:
    bad = 0
    for a in np.linspace(2.05, 4.0, 14):
        ca = c_alpha(a)
        recs = scan_pi_zeros(a, min(4.0 * ca, 3000.0))
        if not recs or not 0 < recs[0].c < ca:
            bad += 1
        bad += sum(1 for r in recs[1:] if not r.c > ca)
    return _check("zeros first root inside (0, c_alpha), later roots outside", bad, 0)


def _zeros_alpha4_profiles() -> Check:
    bad = 0
    xs = np.linspace(1e-3, math.pi - 1e-3, 4001)
    counts = []
    for a in (3.0, 5.0, 8.0):
        c = 4 * a ** 4
        g = np.array([green_closed_alpha4(c, x) for x in xs])
        n = count_sign_changes(g)
        counts.append(n)
        if n == 0:
            bad += 1
        idx = np.nonzero(g[:-1] * g[1:] < 0)[0]
        for i in idx:
            x0 = xs[i] - g[i] * (xs[i + 1] - xs[i]) / (g[i + 1] - g[i])
            if x0 < math.pi / 2:
                k = round(x0 * a / math.pi + 0.25)
                if abs(x0 - (k - 0.25) * math.pi / a) > 0.05 / a:
                    bad += 1
    bad += sum(1 for u, v in zip(counts, counts[1:]) if v < u)
    # positive and decreasing for small a, not monotone for a = 1.5
    g = np.array([green_closed_alpha4(4 * 0.4 ** 4, x) for x in xs])
    if np.any(g <= 0) or np.any(np.diff(g) >= 0):
        bad += 1
    g = np.array([green_closed_alpha4(4 * 1.5 ** 4, x) for x in xs])
    if np.all(np.diff(g) < 0):
        bad += 1
    return _check("zeros alpha=4 interior sign changes and monotonicity boundary", bad, 0)


def _zeros_coalescence() -> Check:
    curves = zero_curves(3.2, 4.0, 9, 5, c_max_cap=3000.0)
    a23 = coalescence_alpha(curves[1], curves[2])
    a45 = coalescence_alpha(curves[3], curves[4])
    worst = max(abs(a23 - 3.325), abs(a45 - 3.89))
    return _check(f"zeros coalescence alpha*(2,3)={a23:.4f}, alpha*(4,5)={a45:.4f}", worst, 0.02)


def _zeros_alpha2_empty() -> Check:
    n = len(scan_pi_zeros(2.0, 1e4))
    return _check("zeros none for alpha = 2", n, 0)


# ---------------------------------------------------------------------------
# oscillatory-integral asymptotics

def _asym_I2() -> Check:
    ratio = 0.0
    for a in (0.2, 0.4):
        for b in (8.0, 12.0):
            p = OscIntegralParams(a, b)
            i2 = I_ab_split(p)[1]
            ratio = max(ratio, abs(i2 - I2_asym(p)) / (2.0 * a / b ** 4))
    return _check("asymptotics sinh part vs -a/b^2 (err / (2a/b^4))", ratio, 1.0)


def _asym_total() -> Check:
    ratio = 0.0
    for a, b in ((0.2, 8.0), (0.3, 10.0)):
        p = OscIntegralParams(a, b)
        scale = max(20 * math.pi * b * math.exp(-3 * math.pi * b), 2.0 * a / b ** 4)
        ratio = max(ratio, abs(I_ab(p) - I1_asym(p) - I2_asym(p)) / scale)
    p = OscIntegralParams(0.3, 10.0)
    rel = abs(I_ab(p) - I1_asym(p) - I2_asym(p)) / abs(I_ab(p))
    return _check("asymptotics I vs I1_asym + I2_asym", max(ratio, rel / 0.1), 1.0)


def _asym_I1() -> Check:
    worst = 0.0
    for a, b in ((0.0, 3.0), (0.3, 3.0), (0.5, 5.0)):
        p = OscIntegralParams(a, b)
        worst = max(worst, abs(I_ab_split(p)[0] - I1_asym(p)) / abs(I1_asym(p)))
    return _check("asymptotics cosh part vs residue term (relative)", worst, 1e-3)


def _asym_first_zero() -> Check:
    c_scan = scan_pi_zeros(2.5, 50.0)[0].c
    pred = predict_first_zero(2.5)[0]
    factor = max(pred / c_scan, c_scan / pred)
    alphas = (2.05, 2.1, 2.2, 2.35, 2.5)
    preds = [predict_first_zero(a)[0] for a in alphas]
    monotone = all(u > v for u, v in zip(preds, preds[1:]))
    c_imp, c_closed = predict_first_zero(2.1)
    eps = 0.1
    scale = math.log(abs(math.log(eps))) / abs(math.log(eps))
    u_rel = abs(c_imp ** (1 / 2.1) - c_closed ** (1 / 2.1)) / c_imp ** (1 / 2.1)
    ok = factor <= 2.0 and monotone and u_rel <= scale
    return _check("asymptotics first-zero law (factor vs scan)", factor, 2.0, ok=ok)


SUITES: dict[str, list[Callable[[], Check]]] = {
    "ml": [_ml_normalization, _ml_closed_forms, _ml_monotone, _ml_derivative, _ml_consistency],
    "green": [_green_evenness, _green_closed_forms, _green_cross, _green_positive_decreasing,
              _green_pi_below_zero, _green_pi_methods, _green_periodization, _green_tail_honesty],
    "zeros": [_zeros_alpha2_empty, _zeros_brackets, _zeros_table1, _zeros_first_root_location,
              _zeros_alpha4_profiles, _zeros_coalescence],
    "asymptotics": [_asym_I1, _asym_I2, _asym_total, _asym_first_zero],
}


def run_suite(name: str, emit: Callable[[str], None] = print) -> list[Check]:
    """Run one suite (or ``all``), emitting one line per property."""
    names = list(SUITES) if name == "all" else [name]
    results = []
    for n in names:
        if n not in SUITES:
            raise KeyError(n)
        for fn in SUITES[n]:
            t0 = time.perf_counter()
            try:
                chk = fn()
            except Exception as exc:  # a crashing property is a failing property
                chk = Check(f"{fn.__name__} raised {type(exc).__name__}: {exc}", False, math.inf, 0.0)
            chk.seconds = time.perf_counter() - t0
            emit(chk.line())
            results.append(chk)
    return results
