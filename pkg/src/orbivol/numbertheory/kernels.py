"""Hot integer kernels over all primes below an Euler-product cutoff.

Two interchangeable implementations are provided:

* ``numba``: scalar loops compiled with ``@njit``;
* ``numpy``: the same algorithms vectorised across primes.

The backend is chosen once at import from ``ORBIVOL_KERNELS`` (``numba`` by
default, ``numpy`` to force the fallback).  If numba cannot be imported the
numpy path is used.  Both backends are always importable as
``kernels.numba_backend`` (when available) and ``kernels.numpy_backend`` so
tests and benchmarks can compare them.

Polynomials are monic of degree d <= 4 and passed as int64 arrays of the
d+1 coefficients in *ascending* order.  All moduli are primes below 2^29, so
sums of four products of residues fit in int64.
"""
from __future__ import annotations

import os
import warnings
from types import SimpleNamespace

import numpy as np

MAX_MODULUS = 2**29

# --------------------------------------------------------------------------
# numpy backend
# --------------------------------------------------------------------------


def _np_sieve(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    is_prime[4::2] = False
    for p in range(3, int(n**0.5) + 1, 2):
        if is_prime[p]:
            is_prime[p * p :: 2 * p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _np_powmod(a: np.ndarray, e: np.ndarray, m: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64) % m
    e = np.asarray(e, dtype=np.int64).copy()
    m = np.asarray(m, dtype=np.int64)
    result = np.ones(np.broadcast(a, e, m).shape, dtype=np.int64) % m
    base = np.broadcast_to(a, result.shape).copy()
    e = np.broadcast_to(e, result.shape).copy()
    while np.any(e > 0):
        odd = (e & 1).astype(bool)
        result = np.where(odd, (result * base) % m, result)
        base = (base * base) % m
        e >>= 1
    return result


def _np_legendre(a: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Legendre symbol (a/p) for odd primes p, as int8 in {-1, 0, 1}."""
    p = np.asarray(p, dtype=np.int64)
    r = _np_powmod(np.asarray(a, dtype=np.int64) % p, (p - 1) // 2, p)
    out = np.where(r == 1, 1, np.where(r == 0, 0, -1))
    return out.astype(np.int8)


def _np_mulmod(a, b, f, p, d):
    """(a*b) mod (f, p) for residue arrays a, b of shape (N, d)."""
    n = a.shape[0]
    prod = np.zeros((n, 2 * d - 1), dtype=np.int64)
    for i in range(d):
        prod[:, i : i + d] += a[:, i : i + 1] * b
    prod %= p[:, None]
    for k in range(2 * d - 2, d - 1, -1):
        c = prod[:, k : k + 1]
        prod[:, k - d : k] = (prod[:, k - d : k] - c * f) % p[:, None]
    return prod[:, :d]


def _np_xpow(f, p, d, exponent):
    """x^exponent mod (f, p), exponents given per lane."""
    n = f.shape[0]
    res = np.zeros((n, d), dtype=np.int64)
    res[:, 0] = 1
    nbits = int(exponent.max()).bit_length()
    for bit in range(nbits - 1, -1, -1):
        res = _np_mulmod(res, res, f, p, d)
        sel = ((exponent >> bit) & 1).astype(bool)
        if np.any(sel):
            # multiply by x: shift up and reduce the overflowing coefficient
            top = res[:, d - 1].copy()
            shifted = np.empty_like(res)
            shifted[:, 0] = (-top * f[:, 0]) % p
            for i in range(1, d):
                shifted[:, i] = (res[:, i - 1] - top * f[:, i]) % p
            res = np.where(sel[:, None], shifted, res)
    return res


def _np_compose(h, f, p, d):
    """h(h(x)) mod (f, p) by Horner's rule."""
    r = np.zeros_like(h)
    r[:, 0] = h[:, d - 1]
    for i in range(d - 2, -1, -1):
        r = _np_mulmod(r, h, f, p, d)
        r[:, 0] = (r[:, 0] + h[:, i]) % p
    return r


def _np_degree(a):
    """Degree per row (-1 for the zero polynomial)."""
    nz = a != 0
    idx = np.arange(a.shape[1])
    return np.where(nz.any(axis=1), (nz * idx).max(axis=1), -1)


def _np_gcd_degree(f, g, p, d):
    """deg gcd(f, g) over F_p per lane; f monic of degree d, deg g < d."""
    n = f.shape[0]
    pc = p[:, None]
    A = np.zeros((n, d + 1), dtype=np.int64)
    A[:, :d] = f % pc
    A[:, d] = 1
    B = np.zeros((n, d + 1), dtype=np.int64)
    B[:, :d] = g % pc
    rows = np.arange(n)
    cols = np.arange(d + 1)
    # each pass lowers deg A below deg B, then swaps; d+1 passes suffice
    for _ in range(d + 1):
        degB = _np_degree(B)
        active = degB >= 0
        if not np.any(active):
            break
        lb = np.where(active, B[rows, np.maximum(degB, 0)], 1)
        for _ in range(d + 1):
            degA = _np_degree(A)
            red = active & (degA >= degB)
            if not np.any(red):
                break
            shift = np.where(red, degA - degB, 0)
            q = np.where(red, A[rows, np.maximum(degA, 0)], 0)
            src = cols[None, :] - shift[:, None]
            Bs = np.where(src >= 0, B[rows[:, None], np.clip(src, 0, d)], 0)
            # pseudo-remainder step: lc(B) * A - q x^shift B
            scale = np.where(red, lb, 1)
            A = (A * scale[:, None] - q[:, None] * Bs) % pc
        A, B = np.where(active[:, None], B, A), np.where(active[:, None], A, B)
        B = np.where(active[:, None], B, 0)
    return _np_degree(A)


def _np_factor_pattern(coeffs: np.ndarray, primes: np.ndarray, chunk: int = 1 << 17) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=np.int64)
    d = len(coeffs) - 1
    out = np.zeros((len(primes), 4), dtype=np.int8)
    for start in range(0, len(primes), chunk):
        p = np.asarray(primes[start : start + chunk], dtype=np.int64)
        n = len(p)
        if d == 1:
            out[start : start + n, 0] = 1
            continue
        f = np.broadcast_to(coeffs[:d], (n, d)) % p[:, None]
        x = np.zeros((n, d), dtype=np.int64)
        x[:, 1] = 1
        h1 = _np_xpow(f, p, d, p)
        n1 = _np_gcd_degree(f, (h1 - x) % p[:, None], p, d)
        h2 = _np_compose(h1, f, p, d)
        g2 = _np_gcd_degree(f, (h2 - x) % p[:, None], p, d)
        n2 = (g2 - n1) // 2
        rest = d - n1 - 2 * n2
        block = out[start : start + n]
        block[:, 0] = n1
        block[:, 1] = n2
        block[:, 2] = rest == 3
        block[:, 3] = rest == 4
    return out


numpy_backend = SimpleNamespace(
    name="numpy",
    sieve=_np_sieve,
    powmod=_np_powmod,
    legendre=_np_legendre,
    factor_pattern=_np_factor_pattern,
)

# --------------------------------------------------------------------------
# numba backend
# --------------------------------------------------------------------------

try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

numba_backend = None

if numba is not None:

    @njit(cache=True)
    def _nb_sieve_flags(n):
        flags = np.ones(n + 1, dtype=np.bool_)
        flags[0] = False
        if n >= 1:
            flags[1] = False
        for i in range(4, n + 1, 2):
            flags[i] = False
        p = 3
        while p * p <= n:
            if flags[p]:
                for j in range(p * p, n + 1, 2 * p):
                    flags[j] = False
            p += 2
        return flags

    def _nb_sieve(n: int) -> np.ndarray:
        if n < 2:
            return np.zeros(0, dtype=np.int64)
        return np.flatnonzero(_nb_sieve_flags(n)).astype(np.int64)

    @njit(cache=True)
    def _nb_powmod_scalar(a, e, m):
        result = 1 % m
        base = a % m
        while e > 0:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    @njit(cache=True)
    def _nb_powmod_arr(a, e, m):
        out = np.empty(a.shape[0], dtype=np.int64)
        for i in range(a.shape[0]):
            out[i] = _nb_powmod_scalar(a[i] % m[i], e[i], m[i])
        return out

    def _nb_powmod(a, e, m):
        a, e, m = np.broadcast_arrays(
            np.asarray(a, dtype=np.int64), np.asarray(e, dtype=np.int64), np.asarray(m, dtype=np.int64)
        )
        shape = a.shape
        r = _nb_powmod_arr(a.ravel().copy(), e.ravel().copy(), m.ravel().copy())
        return r.reshape(shape)

    @njit(cache=True)
    def _nb_legendre_arr(a, p):
        out = np.empty(p.shape[0], dtype=np.int8)
        for i in range(p.shape[0]):
            r = _nb_powmod_scalar(a[i] % p[i], (p[i] - 1) // 2, p[i])
            if r == 0:
                out[i] = 0
            elif r == 1:
                out[i] = 1
            else:
                out[i] = -1
        return out

    def _nb_legendre(a, p):
        a, p = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(p, dtype=np.int64))
        return _nb_legendre_arr(a.ravel().copy(), p.ravel().copy()).reshape(p.shape)

    @njit(cache=True)
    def _nb_mulmod(a, b, f, p, d, prod, out):
        # residues < 2^29, so four accumulated products stay below 2^60
        for k in range(2 * d - 1):
            prod[k] = 0
        for i in range(d):
            ai = a[i]
            for j in range(d):
                prod[i + j] += ai * b[j]
        for k in range(2 * d - 1):
            prod[k] %= p
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c != 0:
                for i in range(d):
                    prod[k - d + i] = (prod[k - d + i] - c * f[i]) % p
        for i in range(d):
            out[i] = prod[i]

    @njit(cache=True)
    def _nb_deg(a, top):
        for i in range(top, -1, -1):
            if a[i] != 0:
                return i
        return -1

    @njit(cache=True)
    def _nb_gcd_degree(f, g, p, d, A, B):
        # pseudo-remainder Euclid: scaling by the unit lc(B) avoids inverses
        for i in range(d):
            A[i] = f[i] % p
            B[i] = g[i] % p
        A[d] = 1
        B[d] = 0
        da = d
        db = _nb_deg(B, d)
        while db >= 0:
            lb = B[db]
            while da >= db:
                q = A[da]
                s = da - db
                for i in range(da + 1):
                    A[i] = (A[i] * lb) % p
                for i in range(db + 1):
                    A[i + s] = (A[i + s] - q * B[i]) % p
                da = _nb_deg(A, da)
            for i in range(d + 1):
                t = A[i]
                A[i] = B[i]
                B[i] = t
            t = da
            da = db
            db = t
        return da

    @njit(cache=True)
    def _nb_factor_pattern(coeffs, primes):
        d = coeffs.shape[0] - 1
        n = primes.shape[0]
        out = np.zeros((n, 4), dtype=np.int8)
        if d == 1:
            for idx in range(n):
                out[idx, 0] = 1
            return out
        f = np.empty(d, dtype=np.int64)
        prod = np.empty(2 * d - 1, dtype=np.int64)
        res = np.empty(d, dtype=np.int64)
        r = np.empty(d, dtype=np.int64)
        g = np.empty(d, dtype=np.int64)
        A = np.empty(d + 1, dtype=np.int64)
        B = np.empty(d + 1, dtype=np.int64)
        for idx in range(n):
            p = primes[idx]
            for i in range(d):
                f[i] = coeffs[i] % p
            # res = x^p mod f
            for i in range(d):
                res[i] = 0
            res[0] = 1
            nbits = 0
            e = p
            while e > 0:
                nbits += 1
                e >>= 1
            for bit in range(nbits - 1, -1, -1):
                _nb_mulmod(res, res, f, p, d, prod, res)
                if (p >> bit) & 1:
                    top = res[d - 1]
                    for i in range(d - 1, 0, -1):
                        res[i] = (res[i - 1] - top * f[i]) % p
                    res[0] = (-top * f[0]) % p
            for i in range(d):
                g[i] = res[i]
            g[1] = (g[1] - 1) % p
            n1 = _nb_gcd_degree(f, g, p, d, A, B)
            # r = res(res(x)) = x^(p^2) mod f
            for i in range(d):
                r[i] = 0
            r[0] = res[d - 1]
            for i in range(d - 2, -1, -1):
                _nb_mulmod(r, res, f, p, d, prod, r)
                r[0] = (r[0] + res[i]) % p
            r[1] = (r[1] - 1) % p
            g2 = _nb_gcd_degree(f, r, p, d, A, B)
            n2 = (g2 - n1) // 2
            rest = d - n1 - 2 * n2
            out[idx, 0] = n1
            out[idx, 1] = n2
            if rest == 3:
                out[idx, 2] = 1
            elif rest == 4:
                out[idx, 3] = 1
        return out

    def _nb_factor_pattern_py(coeffs, primes):
        return _nb_factor_pattern(np.asarray(coeffs, dtype=np.int64), np.asarray(primes, dtype=np.int64))

    numba_backend = SimpleNamespace(
        name="numba",
        sieve=_nb_sieve,
        powmod=_nb_powmod,
        legendre=_nb_legendre,
        factor_pattern=_nb_factor_pattern_py,
    )


def _select_backend():
    requested = os.environ.get("ORBIVOL_KERNELS", "numba").strip().lower()
    if requested not in ("numba", "numpy"):
        warnings.warn(f"ORBIVOL_KERNELS={requested!r} not recognised; using numba if available")
        requested = "numba"
    if requested == "numba" and numba_backend is None:
        warnings.warn("numba is not installed; falling back to the numpy kernels")
        return numpy_backend
    return numba_backend if requested == "numba" else numpy_backend


backend = _select_backend()
BACKEND = backend.name


def sieve(n: int) -> np.ndarray:
    """All primes <= n as an int64 array."""
    if n > MAX_MODULUS:
        raise ValueError(f"sieve bound {n} exceeds {MAX_MODULUS}")
    return backend.sieve(int(n))


def powmod(a, e, m) -> np.ndarray:
    return backend.powmod(a, e, m)


def legendre(a, p) -> np.ndarray:
    return backend.legendre(a, p)


def factor_pattern(coeffs, primes) -> np.ndarray:
    """Counts of irreducible factors of degree 1..4 of f modulo each prime.

    ``coeffs`` are the ascending coefficients of a monic f of degree <= 4.
    The result is only meaningful at primes where f is squarefree mod p.
    """
    primes = np.asarray(primes, dtype=np.int64)
    if len(primes) == 0:
        return np.zeros((0, 4), dtype=np.int8)
    return backend.factor_pattern(np.asarray(coeffs, dtype=np.int64), primes)
