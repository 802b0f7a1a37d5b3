"""Bernoulli numbers, Bernoulli polynomials and multiple Bernoulli polynomials.

The multiple Bernoulli polynomials are the expansion coefficients of

    s^r e^(z s) / prod_i (e^(w_i s) - 1)  =  sum_n  B_{n,r}(z | w) s^n / n!

computed by truncated power-series division.  The series arithmetic is
generic over the coefficient field: with Fraction inputs everything is exact,
with complex inputs the same code path evaluates numerically.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """B_0..B_n from s/(e^s - 1), so B_1 = -1/2 (exact Fractions)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += Fraction(math.comb(m + 1, k)) * out[k]
        out.append(-acc / (m + 1))
    return tuple(out)


def bernoulli_poly(n: int, z):
    """B_n(z) = sum_k C(n,k) B_k z^(n-k); exact for Fraction z, numeric otherwise."""
    if n < 0:
        raise ValueError("n must be >= 0")
    nums = bernoulli_numbers(n)
    acc = 0
    for k in range(n + 1):
        b = nums[k]
        term = math.comb(n, k) * (b if isinstance(z, Fraction) else complex(b))
        if n - k > 0:
            term = term * z ** (n - k)
        acc = acc + term
    return acc


# -- generic truncated power series helpers (coefficient lists, index = power)


def _series_mul(a: list, b: list, n: int) -> list:
    out = [0] * (n + 1)
    for i, ai in enumerate(a[: n + 1]):
        if ai == 0:
            continue
        for j in range(0, n + 1 - i):
            bj = b[j]
            if bj == 0:
                continue
            out[i + j] += ai * bj
    return out


def _series_inv(a: list, n: int) -> list:
    """Inverse of a series with a(0) = 1."""
    if a[0] != 1:
        raise ValueError("series inversion requires unit constant term")
    out = [0] * (n + 1)
    out[0] = 1 if not isinstance(a[0], complex) else 1 + 0j
    for j in range(1, n + 1):
        acc = 0
        for i in range(1, j + 1):
            if i < len(a) and a[i] != 0:
                acc += a[i] * out[j - i]
        out[j] = -acc
    return out


def _exp_series(z, n: int, one) -> list:
    """Coefficients of e^(z s) up to s^n."""
    out = [one]
    term = one
    for k in range(1, n + 1):
        term = term * z / k
        out.append(term)
    return out


def multiple_bernoulli(n: int, r: int, z, omegas) -> object:
    """B_{n,r}(z | w_1..w_r) by exact truncated series division.

    Writing (e^(w s) - 1) = w s h_w(s) with h_w(0) = 1 gives
    B_{n,r} = n! [s^n] ( e^(zs) prod_i h_i(s)^(-1) ) / prod_i w_i.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")
    omegas = list(omegas)
    if len(omegas) != r:
        raise ValueError(f"expected {r} omega parameters, got {len(omegas)}")
    if any(w == 0 for w in omegas):
        raise ValueError("all omega parameters must be nonzero")

    exact = isinstance(z, Fraction) and all(isinstance(w, Fraction) for w in omegas)
    one = Fraction(1) if exact else complex(1)
    if not exact:
        z = complex(z)
        omegas = [complex(w) for w in omegas]

    series = _exp_series(z, n, one)
    for w in omegas:
        # h_w(s) = (e^(ws)-1)/(ws) = sum_k w^k s^k / (k+1)!
        h = [one]
        term = one
        for k in range(1, n + 1):
            term = term * w / (k + 1)
            h.append(term)
        series = _series_mul(series, _series_inv(h, n), n)

    denom = one
    for w in omegas:
        denom = denom * w
    return series[n] * math.factorial(n) / denom


def zeta_int(d: int, nterms: int = 64) -> float:
    """zeta(d) for integer d >= 2: direct series with an Euler-Maclaurin tail.

    zeta(2) is returned as pi^2/6 exactly (in floating point); for the rest
    the tail sum_{m>=N} m^-d is expanded to three correction orders, which
    reaches ~1e-15 relative accuracy already at N = 64.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if d == 2:
        return math.pi**2 / 6
    head = sum(m ** (-float(d)) for m in range(1, nterms))
    n = float(nterms)
    tail = (n ** (1 - d) / (d - 1) + 0.5 * n ** (-d) + d / 12 * n ** (-d - 1)
            - d * (d + 1) * (d + 2) / 720 * n ** (-d - 3))
    return head + tail
