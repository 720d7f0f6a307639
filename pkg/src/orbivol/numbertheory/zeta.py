"""Dedekind zeta functions and relative L-functions at integers s >= 2.

Quadratic fields are evaluated to full precision through the Hurwitz
decomposition of L(s, chi_D).  Quartic fields and relative L-functions are
Euler products over all rational primes p <= cutoff, with an explicit bound
on the neglected tail derived from the Rosser-Schoenfeld estimate
pi(x) < 1.25506 x / log x.

Tail bound.  If every prime p contributes at most m prime ideals, each of
norm >= p, the omitted log-factors satisfy

    |log tail| <= m / (1 - P^-s) * sum_{p > P} p^-s
              <= m / (1 - P^-s) * 1.25506 s / ((s - 1) P^(s-1) log P),

and the absolute error of the truncated product is |value| (exp(T) - 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mp, mpf

from ..errors import ConfigurationError, DomainError, RefusedError
from ..lobachevsky import zeta_int
from ..numkernel import precision
from . import kernels
from .fields import NumberField, QuadraticField, _prime_factors, is_fundamental, kronecker
from .polynomials import factor_mod_p

DEFAULT_CUTOFF = 10**7
MIN_CUTOFF = 10**3
# primes up to this bound are summed in multiprecision
SMALL_PRIME_BOUND = 10**4
ROSSER_SCHOENFELD = 1.25506


@dataclass(frozen=True)
class EulerProductValue:
    s: int
    cutoff: int
    value: mpf
    tail_bound: mpf
    log_tail: float
    primes: int
    rounding: float = 0.0

    def __iter__(self):
        yield self.value
        yield self.tail_bound


def _check_cutoff(cutoff: int) -> int:
    if not isinstance(cutoff, (int, np.integer)) or cutoff < 2:
        raise ConfigurationError(f"cutoff must be an integer >= 2, got {cutoff!r}")
    if cutoff > kernels.MAX_MODULUS:
        raise ConfigurationError(f"cutoff {cutoff} exceeds the kernel limit {kernels.MAX_MODULUS}")
    return int(cutoff)


def _check_s(s) -> int:
    if not isinstance(s, (int, np.integer)) or s < 2:
        raise DomainError("zeta", s, "requires an integer s >= 2")
    return int(s)


@lru_cache(maxsize=8)
def _primes_cached(n: int) -> np.ndarray:
    arr = kernels.sieve(n)
    arr.setflags(write=False)
    return arr


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n (int64 array)."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise DomainError("primes_up_to", n, "requires N >= 2")
    return _primes_cached(int(n))


def prime_sum_tail(P: int, s: int) -> float:
    """Upper bound for sum_{p > P} p^-s."""
    return ROSSER_SCHOENFELD * s / ((s - 1) * P ** (s - 1) * math.log(P))


def log_tail_bound(P: int, s: int, ideals_per_prime: int) -> float:
    return ideals_per_prime * prime_sum_tail(P, s) / (1.0 - float(P) ** (-s))


class _LogAccumulator:
    """Sum of -log(1 - c q^-s) over Euler factors.

    Factors with small q are summed in multiprecision; the rest, whose
    terms are below 10^-12, go through a correctly rounded float sum, and
    their rounding is folded into ``rounding``.
    """

    def __init__(self, s: int):
        self.s = s
        self.mp_total = mpf(0)
        self.float_terms: list[np.ndarray] = []

    def add_exact(self, coeff: int, q: int, f: int = 1):
        """Factor (1 - coeff q^(-f s))^-1 at multiprecision."""
        if coeff:
            self.mp_total -= mpmath.log1p(-coeff * mpf(q) ** (-f * self.s))

    def add_float(self, coeff: np.ndarray, q: np.ndarray, f: int = 1, mult: np.ndarray | None = None):
        """Factors (1 - coeff q^(-f s))^-mult in double precision."""
        mask = coeff != 0
        if mult is not None:
            mask &= mult != 0
        if np.any(mask):
            x = coeff[mask] * np.power(q[mask].astype(np.float64), -float(f * self.s))
            term = -np.log1p(-x)
            if mult is not None:
                term *= mult[mask]
            self.float_terms.append(term)

    def total(self) -> tuple[mpf, float]:
        if not self.float_terms:
            return self.mp_total, 0.0
        terms = np.concatenate(self.float_terms)
        fl = math.fsum(terms)
        # each term carries at most a few ulps of relative error
        rounding = 4.0 * 2.0**-52 * float(np.sum(np.abs(terms)))
        return self.mp_total + mpf(fl), rounding


def _finish(acc: _LogAccumulator, s: int, cutoff: int, nprimes: int, per_prime: int) -> EulerProductValue:
    log_value, rounding = acc.total()
    value = mpmath.exp(log_value)
    T = log_tail_bound(cutoff, s, per_prime)
    # exp(T + rounding) - 1 covers both the omitted primes and float rounding
    tail = value * mpmath.expm1(mpf(T) + mpf(rounding))
    return EulerProductValue(s, cutoff, value, tail, T, nprimes, rounding)


# --- quadratic fields ------------------------------------------------------------


def dirichlet_L_quadratic(D: int, s: int, digits: int | None = None) -> mpf:
    """L(s, chi_D) = D^-s sum_{a=1}^{D-1} chi_D(a) zeta(s, a/D)."""
    s = _check_s(s)
    if not is_fundamental(D):
        raise DomainError("dirichlet_L_quadratic", D, "D must be a fundamental discriminant")
    with precision(digits):
        total = mpf(0)
        for a in range(1, abs(D)):
            c = kronecker(D, a)
            if c:
                total += c * mpmath.zeta(s, mpf(a) / abs(D))
        return total / mpf(abs(D)) ** s


def dedekind_zeta_quadratic(D: int, s: int, digits: int | None = None) -> mpf:
    """zeta_k(s) = zeta(s) L(s, chi_D) for k = Q(sqrt D), D > 0 fundamental."""
    s = _check_s(s)
    if not isinstance(D, (int, np.integer)) or D <= 1 or not is_fundamental(int(D)):
        raise DomainError("dedekind_zeta_quadratic", D, "D must be a positive fundamental discriminant")
    with precision(digits):
        return zeta_int(s, digits) * dirichlet_L_quadratic(int(D), s, digits)


def dedekind_zeta_quadratic_euler(D: int, s: int, cutoff: int = DEFAULT_CUTOFF, digits: int | None = None) -> EulerProductValue:
    """Euler-product oracle for zeta_k(s), k = Q(sqrt D)."""
    s = _check_s(s)
    cutoff = _check_cutoff(cutoff)
    if not is_fundamental(D):
        raise DomainError("dedekind_zeta_quadratic_euler", D, "D must be a fundamental discriminant")
    with precision(digits):
        primes = primes_up_to(cutoff)
        acc = _LogAccumulator(s)
        small = primes[primes <= SMALL_PRIME_BOUND]
        large = primes[primes > SMALL_PRIME_BOUND]
        for p in small.tolist():
            chi = kronecker(D, p)
            acc.add_exact(1, p)
            acc.add_exact(chi, p)
        if len(large):
            # large primes are odd and do not divide D
            chi = kernels.legendre(D % large, large).astype(np.float64)
            acc.add_float(np.ones(len(large)), large)
            acc.add_float(chi, large)
        return _finish(acc, s, cutoff, len(primes), 2)


# --- quartic fields ------------------------------------------------------------


def _pattern_terms(pattern: np.ndarray):
    """(factor degree, count array) pairs from a factor_pattern result."""
    return [(f + 1, pattern[:, f].astype(np.float64)) for f in range(pattern.shape[1])]


@lru_cache(maxsize=32)
def _quartic_euler(poly: tuple[int, ...], disc: int, s: int, cutoff: int, dps: int) -> EulerProductValue:
    with mp.workdps(dps):
        primes = primes_up_to(cutoff)
        n = len(poly) - 1
        bad = set(_prime_factors(disc))
        acc = _LogAccumulator(s)
        small = primes[primes <= SMALL_PRIME_BOUND]
        for p in small.tolist():
            for f, _e in factor_mod_p(poly, p):
                acc.add_exact(1, p, f)
        large = primes[primes > SMALL_PRIME_BOUND]
        coeffs = np.array(poly[::-1], dtype=np.int64)
        good = np.array([p not in bad for p in large.tolist()], dtype=bool) if bad else np.ones(len(large), bool)
        pattern = kernels.factor_pattern(coeffs, large[good])
        ones = np.ones(len(pattern))
        for f, count in _pattern_terms(pattern):
            acc.add_float(ones, large[good], f, mult=count)
        for p in large[~good].tolist():
            for f, _e in factor_mod_p(poly, p):
                acc.add_exact(1, p, f)
        return _finish(acc, s, cutoff, len(primes), n)


def dedekind_zeta_quartic(F: NumberField, s: int, cutoff: int = DEFAULT_CUTOFF, digits: int | None = None) -> EulerProductValue:
    """Euler product for zeta_F(s) over p <= cutoff, F monogenic.

    Every Euler factor is read off from the factorization of the defining
    polynomial modulo p, which is valid at all p only when Z[x]/(poly) is
    the full ring of integers.
    """
    s = _check_s(s)
    cutoff = _check_cutoff(cutoff)
    if F.degree != 4:
        raise DomainError("dedekind_zeta_quartic", F.label, "field must have degree 4")
    if not F.monogenic:
        raise RefusedError(
            f"{F.label}: Z[x]/(poly) has index {F.index} in the maximal order; "
            "Euler factors at index primes are unknown, use relative_L instead"
        )
    with precision(digits):
        return _quartic_euler(F.poly, F.poly_disc, s, cutoff, mp.dps)


# --- relative L-functions of quadratic extensions ------------------------------


@lru_cache(maxsize=32)
def _relative_L(D: int, beta: tuple[int, int], s: int, cutoff: int, dps: int) -> tuple[EulerProductValue, tuple]:
    with mp.workdps(dps):
        k = QuadraticField(D)
        primes = primes_up_to(cutoff)
        bad = set(k.bad_primes(beta))
        N = k.norm(beta)
        acc = _LogAccumulator(s)
        local = []
        for p in sorted(bad):
            if p > cutoff:
                continue
            for lp in k.local_primes(beta, p):
                local.append(lp)
                acc.add_exact(lp.chi, lp.norm)
        is_bad = np.isin(primes, np.array(sorted(bad), dtype=np.int64))
        good = primes[~is_bad]
        split = kernels.legendre(D % good, good) == 1
        inert = good[~split]
        chi_inert = kernels.legendre(N % inert, inert).astype(np.float64)
        splitp = good[split]
        roots = kernels.factor_pattern(np.array(k.h_poly(beta)[::-1], dtype=np.int64), splitp)[:, 0]
        # 4 roots: chi = (1, 1); 2 roots: (1, -1); 0 roots: (-1, -1)
        chi_prod = kernels.legendre(N % splitp, splitp).astype(np.float64)
        for arr_p, name in ((inert, "inert"), (splitp, "split")):
            small = arr_p <= SMALL_PRIME_BOUND
            if name == "inert":
                for p, c in zip(arr_p[small].tolist(), chi_inert[small].tolist()):
                    acc.add_exact(int(c), p, 2)
                acc.add_float(chi_inert[~small], arr_p[~small], 2)
            else:
                for p, r in zip(arr_p[small].tolist(), roots[small].tolist()):
                    for c in _split_chis(int(r)):
                        acc.add_exact(c, p)
                large = arr_p[~small]
                for c_arr in _split_chi_arrays(roots[~small]):
                    acc.add_float(c_arr, large)
        # consistency of the root count with the product of the two characters
        if np.any(chi_prod != np.where(roots == 2, -1.0, 1.0)):
            raise ArithmeticError("root counts disagree with the norm character")
        return _finish(acc, s, cutoff, len(primes), 2), tuple(local)


def _split_chis(roots: int) -> tuple[int, int]:
    return {4: (1, 1), 2: (1, -1), 0: (-1, -1)}[roots]


def _split_chi_arrays(roots: np.ndarray):
    first = np.where(roots == 0, -1.0, 1.0)
    second = np.where(roots == 4, 1.0, -1.0)
    return first, second


def relative_L(k, beta_desc, s: int, cutoff: int = DEFAULT_CUTOFF, digits: int | None = None) -> EulerProductValue:
    """L(s) = zeta_l(s)/zeta_k(s) for l = k(sqrt beta), beta = (a + b sqrt D)/c.

    ``k`` is a fundamental discriminant, a :class:`QuadraticField` or a
    quadratic :class:`NumberField`.  Primes of k above each rational p <=
    cutoff contribute (1 - chi(P) N(P)^-s)^-1.
    """
    D = _quadratic_disc(k)
    s = _check_s(s)
    cutoff = _check_cutoff(cutoff)
    K = QuadraticField(D)
    beta = K.from_desc(*beta_desc)
    if K.is_square(beta):
        raise DomainError("relative_L", beta_desc, "beta is a square in k")
    with precision(digits):
        return _relative_L(D, beta, s, cutoff, mp.dps)[0]


def relative_L_local_data(k, beta_desc, cutoff: int = DEFAULT_CUTOFF):
    """Character values at the bad primes used by :func:`relative_L`."""
    D = _quadratic_disc(k)
    K = QuadraticField(D)
    beta = K.from_desc(*beta_desc)
    return [lp for p in K.bad_primes(beta) if p <= cutoff for lp in K.local_primes(beta, p)]


def _quadratic_disc(k) -> int:
    if isinstance(k, QuadraticField):
        return k.D
    if isinstance(k, NumberField):
        if k.degree != 2:
            raise DomainError("relative_L", k.label, "base field must be quadratic")
        return k.abs_disc
    return int(k)


def relative_L_ratio(ell: NumberField, D: int, s: int, cutoff: int = DEFAULT_CUTOFF, digits: int | None = None) -> EulerProductValue:
    """zeta_l / zeta_k from two truncated Euler products with the same cutoff.

    The quotient of the truncations is exactly the truncated L product, so
    its tail obeys the bound for two ideals per rational prime.
    """
    with precision(digits):
        zl = dedekind_zeta_quartic(ell, s, cutoff, digits)
        zk = dedekind_zeta_quadratic_euler(D, s, cutoff, digits)
        value = zl.value / zk.value
        T = log_tail_bound(cutoff, s, 2)
        tail = value * mpmath.expm1(mpf(T) + mpf(zl.rounding + zk.rounding))
        return EulerProductValue(s, cutoff, value, tail, T, zl.primes, zl.rounding + zk.rounding)
