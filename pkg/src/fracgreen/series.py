"""Truncation control and tail acceleration for the cosine series of G.

The series ``sum_n cos(n x) / (c + n**alpha)`` is summed directly up to an
index ``M`` and the remainder is replaced by an asymptotic expansion: the
coefficient ``1/(c + (M+k)**alpha)`` is Taylor-expanded in ``k`` and each
power ``k**j`` is paired with the Abel-summed ``sum_k k**j z**k``,
``z = exp(i x)``, which has a closed rational form.  The zeroth-order
term is exactly one step of summation by parts, so the scheme also covers
the conditionally convergent case ``alpha <= 1``.  At ``x = 0`` the tail is
expanded in Hurwitz zeta values instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import binom, zeta

from .errors import DomainError, TruncationFailure

__all__ = ["SeriesControl", "cosine_series", "zero_series"]

_TAYLOR_ORDER = 18


@dataclass(frozen=True)
class SeriesControl:
    """Absolute tolerance and term budget for truncating an infinite sum."""

    abs_tol: float = 1e-14
    max_terms: int = 400

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if int(self.max_terms) < 1:
            raise DomainError("max_terms must be >= 1")


def _abel_moments(z: complex, order: int) -> np.ndarray:
    """``A_j = sum_{k>=0} k**j z**k`` (Abel sense) for ``j = 0..order``."""
    A = np.zeros(order + 1, dtype=complex)
    A[0] = 1.0 / (1.0 - z)
    for j in range(1, order + 1):
        s = sum(math.comb(j, i) * A[i] for i in range(j))
        A[j] = z * s / (1.0 - z)
    return A


def _reciprocal_taylor(c: float, alpha: float, M: int, order: int) -> np.ndarray:
    """Taylor coefficients in ``k`` of ``1/(c + (M+k)**alpha)``."""
    i = np.arange(order + 1)
    w = float(M) ** alpha * binom(alpha, i) * float(M) ** (-i.astype(float))
    w[0] += c
    f = np.zeros(order + 1)
    f[0] = 1.0 / w[0]
    for j in range(1, order + 1):
        f[j] = -np.dot(w[1:j + 1], f[j - 1::-1][:j]) / w[0]
    return f


def cosine_series(c: float, alpha: float, x: float, ctrl: SeriesControl,
                  min_terms: int = 0) -> tuple[float, float, int]:
    """Sum ``S = sum_{n>=1} cos(n x)/(c + n**alpha)`` for ``0 < x <= pi``.

    Returns ``(S, err_estimate, M)`` where ``M`` is the number of terms summed
    explicitly (at least ``min_terms``).  Raises :class:`TruncationFailure`
    if ``M`` would exceed ``ctrl.max_terms`` before the tail estimate drops
    below ``ctrl.abs_tol``.
    """
    if not 0.0 < x <= math.pi:
        raise DomainError(f"x must lie in (0, pi], got {x}")
    J = _TAYLOR_ORDER
    M = int(max(32.0, 2.0 * c ** (1.0 / alpha) + 2.0, 60.0 / x, min_terms))
    if M > ctrl.max_terms:
        raise TruncationFailure(
            f"series for c={c}, alpha={alpha}, x={x} needs more than {ctrl.max_terms} terms")
    z = complex(math.cos(x), math.sin(x))
    A = _abel_moments(z, J)
    while True:
        if M > ctrl.max_terms:
            raise TruncationFailure(
                f"series for c={c}, alpha={alpha}, x={x} needs more than {ctrl.max_terms} terms")
        f = _reciprocal_taylor(c, alpha, M, J)
        terms = A * f
        trunc = 2.0 * abs(terms[-1])
        if trunc <= ctrl.abs_tol or trunc < 1e-300:
            break
        M *= 2
    n = np.arange(1, M, dtype=float)
    vals = np.cos(n * x) / (c + n ** alpha)
    head = float(np.sum(vals))
    err = trunc + 2.0 * np.finfo(float).eps * float(np.sum(np.abs(vals)))
    tail = (z ** M * np.sum(terms)).real
    return head + tail, err, M


def zero_series(c: float, alpha: float, ctrl: SeriesControl) -> tuple[float, float, int]:
    """Sum ``sum_{n>=1} 1/(c + n**alpha)`` for ``alpha > 1``.

    The tail beyond ``M`` is expanded as ``sum_k (-c)**k zeta(alpha(k+1), M)``.
    """
    if alpha <= 1.0:
        raise DomainError("the series at x = 0 diverges for alpha <= 1")
    M = int(max(32.0, (16.0 * c) ** (1.0 / alpha) + 2.0))
    if M > ctrl.max_terms:
        raise TruncationFailure(f"series at x=0 needs more than {ctrl.max_terms} terms")
    n = np.arange(1, M, dtype=float)
    head = float(np.sum(1.0 / (c + n ** alpha)))
    parts = []
    term = math.inf
    for k in range(200):
        term = (-c) ** k * float(zeta(alpha * (k + 1), M))
        parts.append(term)
        if abs(term) < 1e-3 * ctrl.abs_tol:
            break
    else:
        raise TruncationFailure("zeta expansion of the tail did not converge")
    return head + math.fsum(parts), abs(term), M
