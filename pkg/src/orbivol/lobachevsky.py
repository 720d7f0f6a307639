"""Lobachevsky functions and Riemann zeta at integer arguments.

With the normalisation used throughout the package::

    lob2(w) = 1/2 sum_{r>=1} sin(2 r w) / r^2 = -int_0^w log|2 sin t| dt
    lob3(w) = 1/4 sum_{r>=1} cos(2 r w) / r^3 = zeta(3)/4 - int_0^w lob2(t) dt

Both are pi-periodic (lob2 odd, lob3 even).  After reducing the argument to
theta = 2w in [-pi, pi) the Fourier series are summed in closed form through
the Bernoulli expansions of the Clausen functions, whose terms decay at
least like 4^-n, so the truncation tail is bounded by a third of the last
retained term.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mp, mpf

from .errors import DomainError
from .numkernel import integrate, precision, resolve_digits


@dataclass(frozen=True)
class LobValue:
    omega: mpf
    order: int
    value: mpf


@lru_cache(maxsize=None)
def _bernoulli_abs(n: int) -> Fraction:
    """|B_n| as an exact fraction (n even)."""
    num, den = mpmath.bernfrac(n)
    return Fraction(abs(int(num)), int(den))


@lru_cache(maxsize=None)
def _clausen_coeffs(dps: int, order: int) -> tuple[mpf, ...]:
    # order 2: |B_2n| / (2n (2n+1)!);  order 3: |B_2n| / (2n (2n+2)!)
    with mp.workdps(dps):
        coeffs = []
        n = 1
        # (theta / 2pi)^2 <= 1/4 bounds the decay; stop well past 10^-dps
        while True:
            b = _bernoulli_abs(2 * n)
            fact = mpmath.factorial(2 * n + order - 1)
            coeffs.append(mpf(b.numerator) / (b.denominator * 2 * n * fact))
            if (mpf(4) ** -n) < mpf(10) ** (-(dps + 5)):
                break
            n += 1
        return tuple(coeffs)


def _reduce(omega: mpf) -> mpf:
    """Representative of omega modulo pi in [-pi/2, pi/2)."""
    pi = mp.pi
    k = mpmath.floor(omega / pi + mpf(1) / 2)
    return omega - k * pi


def _series_sum(theta: mpf, coeffs, power0: int) -> mpf:
    """Sum coeff_n * theta^(2n + power0) with an explicit stopping rule."""
    eps = mpf(10) ** (-(mp.dps + 2))
    t2 = theta * theta
    p = theta ** power0 * t2
    s = mpf(0)
    for c in coeffs:
        term = c * p
        s += term
        # successive terms shrink by at least (theta/2pi)^2 <= 1/4
        if abs(term) < eps:
            break
        p *= t2
    return s


def clausen2(theta) -> mpf:
    """Cl_2(theta) = sum sin(r theta)/r^2 for theta in [-pi, pi]."""
    theta = mpf(theta)
    if theta == 0:
        return mpf(0)
    coeffs = _clausen_coeffs(mp.dps, 2)
    return theta - theta * mpmath.log(abs(theta)) + _series_sum(theta, coeffs, 1)


def clausen3_cos(theta, zeta3=None) -> mpf:
    """sum cos(r theta)/r^3 for theta in [-pi, pi]."""
    theta = mpf(theta)
    z3 = zeta_odd(3) if zeta3 is None else zeta3
    if theta == 0:
        return z3
    coeffs = _clausen_coeffs(mp.dps, 3)
    t2 = theta * theta
    return z3 - 3 * t2 / 4 + t2 * mpmath.log(abs(theta)) / 2 - _series_sum(theta, coeffs, 2)


def lob2(omega, digits: int | None = None) -> mpf:
    """Lobachevsky's function lob2(omega) = 1/2 Cl_2(2 omega)."""
    with precision(digits):
        omega = mpf(omega)
        r = _reduce(omega)
        # exact multiples of pi short-circuit to zero
        if abs(r) <= 4 * mpf(2) ** (-mp.prec) * max(1, abs(omega)):
            return mpf(0)
        return clausen2(2 * r) / 2


def lob3(omega, digits: int | None = None) -> mpf:
    """Lobachevsky trilogarithm lob3(omega) = 1/4 sum cos(2 r omega)/r^3."""
    with precision(digits):
        r = _reduce(mpf(omega))
        return clausen3_cos(2 * r) / 4


def lob3_integral(omega, digits: int | None = None, tol=None):
    """lob3 through zeta(3)/4 - int_0^omega lob2(t) dt.

    The integrand has logarithmic derivative singularities at multiples of
    pi, so the integral is taken over a single half period ending on such a
    point, where tanh-sinh handles it.  Returns a QuadratureResult-like pair
    (value, error_estimate).
    """
    d = resolve_digits(digits)
    with precision(d):
        omega = mpf(omega)
        # lob3 is even
        r = abs(_reduce(omega))
        z3 = zeta_odd(3)
        if r == 0:
            return z3 / 4, mpf(0)
        half = mp.pi / 2
        f = lambda t: lob2(t, d)
        if r <= half:
            res = integrate(f, 0, r, tol=tol, digits=d)
            return z3 / 4 - res.value, res.error_estimate
        # int_0^pi lob2 = 0, so int_0^r = -int_r^pi
        res = integrate(f, r, mp.pi, tol=tol, digits=d)
        return z3 / 4 + res.value, res.error_estimate


def lob_fourier(omega: float, order: int, terms: int) -> tuple[float, float]:
    """Direct partial sum of the defining Fourier series in double precision.

    Returns (partial_sum, tail_bound).  The tail bound is the larger of the
    absolute bound and, away from multiples of pi, the Abel-summation bound
    2 / ((N+1)^order |sin omega|) scaled by the series prefactor.
    """
    if order not in (2, 3):
        raise DomainError("lob_fourier", order, "order must be 2 or 3")
    r = np.arange(1, terms + 1, dtype=np.float64)
    if order == 2:
        s = 0.5 * np.sum(np.sin(2.0 * r * omega) / r**2)
        pref, absbound = 0.5, 0.5 / terms
    else:
        s = 0.25 * np.sum(np.cos(2.0 * r * omega) / r**3)
        pref, absbound = 0.25, 0.25 / (2.0 * terms**2)
    sw = abs(np.sin(omega))
    bound = absbound
    if sw > 0:
        bound = min(bound, pref * 2.0 / ((terms + 1) ** order * sw))
    # rounding in the float64 accumulation
    bound += terms * 2.0**-52
    return float(s), float(bound)


# --- Riemann zeta at integers -------------------------------------------------


def zeta_even(n: int) -> mpf:
    """zeta(n) for even n via |B_n| (2 pi)^n / (2 n!)."""
    b = _bernoulli_abs(n)
    return mpf(b.numerator) / b.denominator * (2 * mp.pi) ** n / (2 * mpmath.factorial(n))


@lru_cache(maxsize=None)
def _zeta_odd_cached(n: int, dps: int) -> mpf:
    with mp.workdps(dps + 5):
        # Borwein's acceleration of the alternating eta series; the error is
        # below 3 / (3 + sqrt 8)^m relative to eta(n).
        m = int((dps + 10) / 0.76) + 2
        d = []
        acc = mpf(0)
        for i in range(m + 1):
            acc += mpf(mpmath.factorial(m + i - 1)) * 4**i / (mpmath.factorial(m - i) * mpmath.factorial(2 * i))
            d.append(m * acc)
        dm = d[m]
        s = mpf(0)
        for k in range(m):
            s += (-1) ** k * (dm - d[k]) / mpf(k + 1) ** n
        eta = s / dm
        return eta / (1 - mpf(2) ** (1 - n))


def zeta_odd(n: int) -> mpf:
    return +_zeta_odd_cached(n, mp.dps)


def zeta_int(n: int, digits: int | None = None) -> mpf:
    """Riemann zeta at an integer n >= 2."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise DomainError("zeta_int", n, "requires integer n >= 2")
    with precision(digits):
        if n % 2 == 0:
            return zeta_even(int(n))
        return zeta_odd(int(n))
