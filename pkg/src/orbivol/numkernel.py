"""Arbitrary-precision real arithmetic and quadrature.

Every real quantity in orbivol is an :class:`mpmath.mpf`.  Precision is
expressed in decimal digits of *output*; computations run with
``GUARD_DIGITS`` extra digits.  The process-wide default comes from the
``ORBIVOL_DIGITS`` environment variable (60 when unset) and can be changed
with :func:`set_default_digits`.

The integrator is tanh-sinh (double exponential) quadrature.  Each level
halves the step and reuses every node of the previous level, so the
difference between consecutive levels is the doubling error estimate.
"""
from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import mpmath
from mpmath import mp, mpf

from .errors import ConfigurationError, DomainError, QuadratureError

MIN_DIGITS = 30
GUARD_DIGITS = 10

_default_digits: int | None = None


def _env_digits() -> int:
    raw = os.environ.get("ORBIVOL_DIGITS")
    if raw is None or raw.strip() == "":
        return 60
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"ORBIVOL_DIGITS must be an integer, got {raw!r}") from None
    return check_digits(value)


def default_digits() -> int:
    return _default_digits if _default_digits is not None else _env_digits()


def set_default_digits(digits: int | None) -> None:
    """Set the process-wide default precision (``None`` restores the env/default)."""
    global _default_digits
    if digits is not None:
        check_digits(digits)
    _default_digits = digits


def check_digits(digits: int) -> int:
    if not isinstance(digits, int) or digits < MIN_DIGITS:
        raise ConfigurationError(f"precision must be an integer >= {MIN_DIGITS} digits, got {digits!r}")
    return digits


def resolve_digits(digits: int | None) -> int:
    return check_digits(default_digits() if digits is None else digits)


def working_dps(digits: int | None = None) -> int:
    return resolve_digits(digits) + GUARD_DIGITS


def default_tol(digits: int | None = None) -> mpf:
    """Default absolute quadrature tolerance, 10^-(digits-5)."""
    d = resolve_digits(digits)
    with mp.workdps(d + GUARD_DIGITS):
        return mpf(10) ** (-(d - 5))


@contextmanager
def precision(digits: int | None = None):
    """Run the block at the working precision derived from ``digits``."""
    with mp.workdps(working_dps(digits)):
        yield


def const_pi(digits: int | None = None) -> mpf:
    with precision(digits):
        return +mp.pi


def _require(cond, fname, x, reason):
    if not cond:
        raise DomainError(fname, x, reason)


def _pow(x, y):
    if y is None:
        raise DomainError("pow", x, "exponent required")
    y = mpf(y)
    if x < 0 and y != int(y):
        raise DomainError("pow", x, "negative base with non-integer exponent")
    if x == 0 and y < 0:
        raise DomainError("pow", x, "zero to a negative power")
    return mpmath.power(x, y)


def _cot(x):
    _require(mpmath.sin(x) != 0, "cot", x, "pole")
    return mpmath.cot(x)


def _tan(x):
    _require(mpmath.cos(x) != 0, "tan", x, "pole")
    return mpmath.tan(x)


def _log(x):
    _require(x > 0, "log", x, "requires x > 0")
    return mpmath.log(x)


def _sqrt(x):
    _require(x >= 0, "sqrt", x, "requires x >= 0")
    return mpmath.sqrt(x)


_ELEMENTARY: dict[str, Callable] = {
    "sin": mpmath.sin,
    "cos": mpmath.cos,
    "tan": _tan,
    "arctan": mpmath.atan,
    "log": _log,
    "sqrt": _sqrt,
    "exp": mpmath.exp,
    "cot": _cot,
}


def elem(f: str, x, y=None, digits: int | None = None) -> mpf:
    """Evaluate an elementary function by name at working precision.

    ``f`` is one of sin, cos, tan, arctan, log, sqrt, exp, cot, pow; ``y`` is
    the exponent for pow.  Domain violations raise :class:`DomainError`.
    """
    with precision(digits):
        x = mpf(x)
        if f == "pow":
            return _pow(x, y)
        try:
            fn = _ELEMENTARY[f]
        except KeyError:
            raise ConfigurationError(f"unknown elementary function {f!r}") from None
        return fn(x)


@dataclass(frozen=True)
class QuadratureResult:
    value: mpf
    error_estimate: mpf
    evaluations: int
    levels: int = 0


@lru_cache(maxsize=None)
def _ts_nodes(dps: int, level: int) -> tuple[tuple[mpf, mpf], ...]:
    """Tanh-sinh nodes added at ``level`` on [0, 1], as (offset, weight).

    The offset c is the distance from the nearer endpoint, so the node pair is
    a + (b-a)c and b - (b-a)c; the weight is for the unit-interval measure.
    Level 0 uses integer abscissae t = 1, 2, ...; level k >= 1 adds the odd
    multiples of 2^-k.
    """
    with mp.workdps(dps):
        half_pi = mp.pi / 2
        umax = (dps + 5) * mpmath.log(10) / 2
        tmax = mpmath.asinh(umax / half_pi)
        h = mpf(2) ** (-level)
        j = 1
        step = 1 if level == 0 else 2
        nodes = []
        while True:
            t = j * h
            if t > tmax:
                break
            u = half_pi * mpmath.sinh(t)
            e2u = mpmath.exp(2 * u)
            c = 1 / (1 + e2u)
            # cosh(u)^2 = e2u (1 + 1/e2u)^2 / 4
            w = half_pi * mpmath.cosh(t) / (e2u * (1 + 1 / e2u) ** 2) * 2
            nodes.append((c, w))
            j += step
        return tuple(nodes)


def integrate(
    f: Callable[[mpf], mpf],
    a,
    b,
    tol=None,
    digits: int | None = None,
    max_level: int = 12,
    min_level: int = 3,
) -> QuadratureResult:
    """Integrate ``f`` over [a, b] by nested tanh-sinh quadrature.

    Stops at the first level >= ``min_level`` whose change from the previous
    level is at most ``tol``; that change is returned as the error estimate.
    Endpoint singularities of logarithmic or algebraic type are tolerated as
    long as ``f`` is finite at interior points.
    """
    with precision(digits):
        dps = mp.dps
        a = mpf(a)
        b = mpf(b)
        tol = default_tol(digits) if tol is None else mpf(tol)
        if not a < b:
            raise DomainError("integrate", (a, b), "requires a < b")
        if not tol > 0:
            raise DomainError("integrate", tol, "tolerance must be positive")
        width = b - a
        # the centre node has unit-interval weight pi/4
        total = (mp.pi / 4) * f(a + width / 2)
        evaluations = 1
        for c, w in _ts_nodes(dps, 0):
            dx = width * c
            total += w * (f(a + dx) + f(b - dx))
            evaluations += 2
        prev = width * total
        err = None
        for level in range(1, max_level + 1):
            h = mpf(2) ** (-level)
            for c, w in _ts_nodes(dps, level):
                dx = width * c
                total += w * (f(a + dx) + f(b - dx))
                evaluations += 2
            cur = width * h * total
            err = abs(cur - prev)
            floor = abs(cur) * mpf(10) ** (-(dps - 2))
            err = max(err, floor)
            prev = cur
            if level >= min_level and err <= tol:
                return QuadratureResult(cur, err, evaluations, level)
        raise QuadratureError(
            f"tanh-sinh did not reach tol={mpmath.nstr(tol, 5)} within {max_level} levels "
            f"({evaluations} evaluations)",
            best_estimate=prev,
            error_estimate=err,
        )
