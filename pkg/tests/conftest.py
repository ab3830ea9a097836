"""Shared high-precision oracles (mpmath) for the test-suite."""

import math

import mpmath as mp
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("default")


def ml_ref(alpha, beta, z):
    """E_{alpha,beta}(z) by its power series in extended precision."""
    r0 = abs(z) ** (1.0 / alpha) if z != 0 else 0.0
    dps = 30 + int(r0 / 2.0)
    with mp.workdps(dps):
        a, b, z = mp.mpf(alpha), mp.mpf(beta), mp.mpf(z)
        s = mp.mpf(0)
        k = 0
        while True:
            t = z ** k * mp.rgamma(a * k + b)
            s += t
            if k > 10 and abs(t) < mp.mpf(10) ** (-dps + 3) * max(1, abs(s)) and k * a > r0 ** a:
                break
            k += 1
        return float(s)


def green_ref(c, alpha, x):
    """G(x) = 1/(2 pi c) + (1/pi) sum cos(n x)/(c + n**alpha) by mpmath nsum (alpha > 1)."""
    with mp.workdps(30):
        if x == 0:
            # nsum's extrapolation is unreliable for this slowly converging sum;
            # for c < 1 expand 1/(c + n**alpha) geometrically into zeta values
            assert c < 1
            s = mp.nsum(lambda k: (-c) ** k * mp.zeta(alpha * (k + 1)), [0, mp.inf])
        else:
            s = mp.nsum(lambda n: mp.cos(n * x) / (c + n ** alpha), [1, mp.inf])
        return float(1 / (2 * mp.pi * c) + s / mp.pi)


@pytest.fixture
def mlref():
    return ml_ref
