"""Volumes of the compact 5-prisms P(alpha) = [5,3,3,3,alpha].

The prism volume is obtained from the Schlaefli differential, integrating
the volume of the 3-dimensional orthoscheme face [5,3,beta(t)] from alpha up
to 2pi/5, where the prism degenerates to a polytope of volume zeta(3)/3200.
"""
from __future__ import annotations

from functools import lru_cache

import mpmath
from mpmath import mp, mpf

from .errors import ConfigurationError, DomainError
from .lobachevsky import lob2, lob3, zeta_int
from .numkernel import QuadratureResult, default_tol, integrate, precision, resolve_digits

POLYTOPES = ("P0", "P1", "P2")


def alpha_bounds() -> tuple[mpf, mpf]:
    return mp.pi / 4, 2 * mp.pi / 5


def beta_of_t(t, digits: int | None = None) -> mpf:
    """beta(t) = arctan sqrt(2 - cot^2 t)."""
    with precision(digits):
        t = mpf(t)
        s = mpmath.sin(t)
        if s == 0:
            raise DomainError("beta_of_t", t, "cot has a pole")
        rad = 2 - mpmath.cot(t) ** 2
        if rad < 0:
            # tiny negative values at t = arccot(sqrt 2) are rounding noise
            if rad > -mpf(10) ** (-(mp.dps - 3)):
                rad = mpf(0)
            else:
                raise DomainError("beta_of_t", t, "2 - cot^2 t < 0, outside the prism family")
        return mpmath.atan(mpmath.sqrt(rad))


def _theta_from_beta(beta: mpf, t) -> mpf:
    s5 = mpmath.sin(mp.pi / 5)
    rad = 1 - 4 * s5**2 * mpmath.sin(beta) ** 2
    if rad < 0:
        raise DomainError("theta_of_t", t, "1 - 4 sin^2(pi/5) sin^2 beta < 0, configuration not compact")
    return mpmath.atan(mpmath.sqrt(rad) / (2 * mpmath.cos(mp.pi / 5) * mpmath.cos(beta)))


def theta_of_t(t, digits: int | None = None) -> mpf:
    with precision(digits):
        return _theta_from_beta(beta_of_t(t), t)


def vol3_orthoscheme(t, digits: int | None = None) -> mpf:
    """Volume of the compact orthoscheme [5,3,beta(t)] by Lobachevsky's formula."""
    d = resolve_digits(digits)
    with precision(d):
        t = mpf(t)
        b = beta_of_t(t, d)
        th = _theta_from_beta(b, t)
        p5, p6, p2 = mp.pi / 5, mp.pi / 6, mp.pi / 2
        L = lambda w: lob2(w, d)
        return (
            L(p5 + th) - L(p5 - th) - L(p6 + th) + L(p6 - th)
            + L(b + th) - L(b - th) + 2 * L(p2 - th)
        ) / 4


def _check_alpha(alpha: mpf) -> mpf:
    lo, hi = alpha_bounds()
    slack = mpf(10) ** (-(mp.dps - 5))
    if alpha < lo - slack or alpha > hi + slack:
        raise DomainError("prism_volume", alpha, "alpha must lie in [pi/4, 2pi/5]")
    return min(max(alpha, lo), hi)


@lru_cache(maxsize=64)
def _prism_volume_cached(alpha: mpf, tol: mpf, d: int) -> QuadratureResult:
    with precision(d):
        alpha = _check_alpha(alpha)
        _, hi = alpha_bounds()
        base = zeta_int(3, d) / 3200
        if hi - alpha <= mpf(10) ** (-(mp.dps - 5)):
            return QuadratureResult(base, mpf(0), 0, 0)
        # the integral carries a factor 1/4, so integrate to 4*tol
        res = integrate(lambda t: vol3_orthoscheme(t, d), alpha, hi, tol=4 * tol, digits=d)
        return QuadratureResult(res.value / 4 + base, res.error_estimate / 4, res.evaluations, res.levels)


def prism_volume_detail(alpha, tol=None, digits: int | None = None) -> QuadratureResult:
    """vol5(P(alpha)) with its quadrature error estimate and evaluation count."""
    d = resolve_digits(digits)
    with precision(d):
        tol = default_tol(d) if tol is None else mpf(tol)
        return _prism_volume_cached(mpf(alpha), tol, d)


def prism_volume(alpha, tol=None, digits: int | None = None) -> mpf:
    return prism_volume_detail(alpha, tol, digits).value


def closed_form_references(digits: int | None = None) -> list[tuple[str, mpf]]:
    """The three exactly known volumes in the prism's neighbourhood.

    vol5([5/2,3,3,5,5/2]) and vol5([5,3,3,5/2,5]) are expressed through
    zeta(3) and lob3(pi/5); a fifth of their difference is vol5(P(2pi/5)).
    """
    with precision(digits):
        z3 = zeta_int(3, digits)
        l3 = lob3(mp.pi / 5, digits)
        first = 13 * z3 / 9600 + mpf(11) / 1152 * l3
        second = -z3 / 4800 + mpf(11) / 1152 * l3
        return [
            ("[5/2,3,3,5,5/2]", first),
            ("[5,3,3,5/2,5]", second),
            ("P(2pi/5)", (first - second) / 5),
        ]


def polytope_alpha(pid: str) -> mpf:
    if pid in ("P0", "P1"):
        return mp.pi / 3
    if pid == "P2":
        return mp.pi / 4
    raise ConfigurationError(f"unknown polytope {pid!r}; expected one of {POLYTOPES}")


def polytope_volume(pid: str, tol=None, digits: int | None = None) -> mpf:
    """Volume of P0 = [5,3,3,3,3], P2 = [5,3,3,3,4], or P1 = the double of P0."""
    d = resolve_digits(digits)
    with precision(d):
        v = prism_volume(polytope_alpha(pid), tol, d)
        return 2 * v if pid == "P1" else v
