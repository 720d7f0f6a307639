"""Exact integer polynomial arithmetic and factorization modulo primes.

Public functions take coefficient sequences in *descending* order, so
``(1, -1, -1)`` is x^2 - x - 1.  Everything is plain Python integers; no
floating point is involved anywhere in this module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError, RefusedError

# --- integer polynomials (descending coefficients) ---------------------------


def normalize(poly) -> tuple[int, ...]:
    """Strip leading zeros and coerce coefficients to int."""
    coeffs = [int(c) for c in poly]
    for c, orig in zip(coeffs, poly):
        if c != orig:
            raise DomainError("normalize", orig, "coefficients must be integers")
    i = 0
    while i < len(coeffs) - 1 and coeffs[i] == 0:
        i += 1
    return tuple(coeffs[i:]) if coeffs else (0,)


def degree(poly) -> int:
    p = normalize(poly)
    return -1 if p == (0,) else len(p) - 1


def derivative(poly) -> tuple[int, ...]:
    p = normalize(poly)
    n = len(p) - 1
    if n == 0:
        return (0,)
    return tuple(c * (n - i) for i, c in enumerate(p[:-1]))


def evaluate(poly, x):
    acc = 0
    for c in normalize(poly):
        acc = acc * x + c
    return acc


def _bareiss_det(m: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer matrices."""
    a = [row[:] for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def sylvester(f, g) -> list[list[int]]:
    f = normalize(f)
    g = normalize(g)
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(g) + [0] * (size - n - 1 - i))
    return rows


def resultant(f, g) -> int:
    f = normalize(f)
    g = normalize(g)
    if degree(f) < 0 or degree(g) < 0:
        return 0
    if degree(f) == 0 and degree(g) == 0:
        return 1
    return _bareiss_det(sylvester(f, g))


def poly_disc(poly) -> int:
    """Discriminant (-1)^(n(n-1)/2) Res(f, f') / lc(f), exactly."""
    f = normalize(poly)
    n = len(f) - 1
    if n < 2:
        raise DomainError("poly_disc", f, "degree must be at least 2")
    r = resultant(f, derivative(f))
    q, rem = divmod(r, f[0])
    if rem:
        raise ArithmeticError("resultant not divisible by the leading coefficient")
    return -q if (n * (n - 1) // 2) % 2 else q


# --- arithmetic in F_p[x] (ascending lists internally) -----------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _to_mod(poly, p: int) -> list[int]:
    return _trim([c % p for c in reversed(normalize(poly))])


def _sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = a[:]
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        s = len(a) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] = (a[s + i] - c * y) % p
        _trim(a)
    return _trim(q), a


def _monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _gcd(a, b, p):
    while b:
        a, b = b, _divmod(a, b, p)[1]
    return _monic(a, p)


def _deriv(a, p):
    return _trim([(i * c) % p for i, c in enumerate(a)][1:])


def _powmod(base, e, mod, p):
    result = [1]
    base = _divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _divmod(_mul(result, base, p), mod, p)[1]
        base = _divmod(_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _pth_root(a, p):
    """Inverse Frobenius for a polynomial whose derivative vanishes."""
    return [a[i] for i in range(0, len(a), p)]


def _squarefree(a, p) -> list[tuple[list[int], int]]:
    """Yun's algorithm adapted to characteristic p; a is monic."""
    out: list[tuple[list[int], int]] = []
    da = _deriv(a, p)
    if not da:
        for g, m in _squarefree(_pth_root(a, p), p):
            out.append((g, m * p))
        return out
    c = _gcd(a, da, p)
    w = _divmod(a, c, p)[0]
    i = 1
    while len(w) > 1:
        y = _gcd(w, c, p)
        z = _divmod(w, y, p)[0]
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        c = _divmod(c, y, p)[0]
    if len(c) > 1:
        for g, m in _squarefree(_pth_root(c, p), p):
            out.append((g, m * p))
    return out


def _ddf(a, p) -> list[tuple[int, int]]:
    """Distinct-degree factorization of a squarefree monic a: (degree, count)."""
    out = []
    x = [0, 1]
    h = x
    d = 0
    while 2 * (d + 1) <= len(a) - 1:
        d += 1
        h = _powmod(h, p, a, p)
        g = _gcd(a, _sub(h, x, p), p)
        if len(g) > 1:
            out.append((d, (len(g) - 1) // d))
            a = _divmod(a, g, p)[0]
            h = _divmod(h, a, p)[1]
    if len(a) > 1:
        out.append((len(a) - 1, 1))
    return out


def factor_mod_p(poly, p: int) -> list[tuple[int, int]]:
    """Irreducible factor degrees of poly modulo p as sorted (degree, multiplicity)."""
    if p < 2:
        raise DomainError("factor_mod_p", p, "modulus must be prime")
    a = _to_mod(poly, p)
    if len(a) - 1 != degree(poly):
        raise DomainError("factor_mod_p", p, "leading coefficient vanishes modulo p")
    a = _monic(a, p)
    shape = []
    for part, mult in _squarefree(a, p):
        for deg, count in _ddf(part, p):
            shape.extend([(deg, mult)] * count)
    return sorted(shape)


def roots_mod_p(poly, p: int) -> list[int]:
    """All roots in F_p, by brute force for small p and gcd with x^p - x otherwise."""
    if p < 64:
        return [r for r in range(p) if evaluate(poly, r) % p == 0]
    a = _monic(_to_mod(poly, p), p)
    g = _gcd(a, _sub(_powmod([0, 1], p, a, p), [0, 1], p), p)
    return sorted(_split_linear(g, p))


def _split_linear(g, p):
    """Roots of a product of distinct linear factors (Cantor-Zassenhaus, p odd)."""
    if len(g) <= 1:
        return []
    if len(g) == 2:
        return [(-g[0]) % p]
    a = 1
    while True:
        h = _powmod([a, 1], (p - 1) // 2, g, p)
        d = _gcd(g, _sub(h, [1], p), p)
        if 1 < len(d) < len(g):
            return _split_linear(d, p) + _split_linear(_divmod(g, d, p)[0], p)
        a += 1


def hensel_lift(poly, root: int, p: int, m: int) -> int:
    """Lift a simple root modulo p to a root modulo p^m."""
    f = normalize(poly)
    df = derivative(f)
    if evaluate(df, root) % p == 0:
        raise DomainError("hensel_lift", root, "root is not simple modulo p")
    r = root % p
    mod = p
    while mod < p**m:
        mod = min(mod * mod, p**m)
        r = (r - evaluate(f, r) * pow(evaluate(df, r), -1, mod)) % mod
    return r


@dataclass(frozen=True)
class SplittingType:
    """Decomposition shape of a rational prime: sorted (f, e) pairs."""

    prime: int
    shape: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return sum(f * e for f, e in self.shape)

    @property
    def ramified(self) -> bool:
        return any(e > 1 for _, e in self.shape)

    def __str__(self) -> str:
        parts = [f"f={f}" + (f",e={e}" if e > 1 else "") for f, e in self.shape]
        return f"p={self.prime}: " + " ".join(parts)


def index_square(poly, abs_disc: int) -> int:
    """|disc(poly)| / abs_disc, the square of the index of Z[x]/(poly)."""
    d = abs(poly_disc(poly))
    q, r = divmod(d, abs_disc)
    if r or math.isqrt(q) ** 2 != q:
        raise DomainError("index_square", abs_disc, f"|disc(poly)| = {d} is not abs_disc times a square")
    return q


def factor_degrees_mod_p(poly, p: int, abs_disc: int | None = None) -> SplittingType:
    """Splitting shape of p read off from poly mod p (Dedekind's criterion).

    When ``abs_disc`` is given, primes dividing the index are refused because
    the factorization of poly no longer reflects the splitting of p.
    """
    if abs_disc is not None and index_square(poly, abs_disc) % p == 0:
        raise RefusedError(
            f"p={p} divides the index of the equation order; supply the splitting of p explicitly"
        )
    return SplittingType(p, tuple(factor_mod_p(poly, p)))


# --- irreducibility over Q ---------------------------------------------------


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(poly) -> list[Fraction]:
    f = normalize(poly)
    if f[-1] == 0:
        rest = rational_roots(f[:-1]) if len(f) > 2 else []
        return sorted(set([Fraction(0)] + rest))
    out = set()
    for q in _divisors(f[0]):
        for r in _divisors(f[-1]):
            for s in (1, -1):
                x = Fraction(s * r, q)
                if sum(c * x ** (len(f) - 1 - i) for i, c in enumerate(f)) == 0:
                    out.add(x)
    return sorted(out)


def _has_quadratic_factor(f) -> bool:
    """Monic quartic x^4 + a x^3 + b x^2 + c x + d as a product of integer quadratics."""
    _, a, b, c, d = f
    for v in _divisors(d):
        for v_signed in (v, -v):
            z = d // v_signed
            if z != v_signed:
                num = c - a * v_signed
                den = z - v_signed
                if num % den:
                    continue
                u = num // den
                w = a - u
                if v_signed + z + u * w == b:
                    return True
            elif c == a * v_signed:
                # u + w = a, u w = b - 2v
                disc = a * a - 4 * (b - 2 * v_signed)
                if disc >= 0 and math.isqrt(disc) ** 2 == disc:
                    return True
    return False


def is_irreducible(poly) -> bool:
    """Irreducibility over Q of a monic integer polynomial.

    Degrees up to 4 are decided exactly by the rational root test and a
    search for integer quadratic factors (Gauss's lemma).  Higher degrees
    are accepted only when some prime not dividing the discriminant leaves
    the polynomial irreducible; otherwise the question is refused.
    """
    f = normalize(poly)
    n = len(f) - 1
    if n < 1:
        raise DomainError("is_irreducible", f, "degree must be at least 1")
    if f[0] != 1:
        raise DomainError("is_irreducible", f, "polynomial must be monic")
    if n == 1:
        return True
    if rational_roots(f):
        return False
    if n <= 3:
        return True
    if n == 4:
        return not _has_quadratic_factor(f)
    disc = poly_disc(f)
    if disc == 0:
        return False
    for p in _small_primes(2000):
        if disc % p and factor_mod_p(f, p) == [(n, 1)]:
            return True
    raise RefusedError(f"cannot certify irreducibility of a degree {n} polynomial")


def _small_primes(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(n + 1) if sieve[i]]


def format_poly(poly, var: str = "x") -> str:
    f = normalize(poly)
    n = len(f) - 1
    terms = []
    for i, c in enumerate(f):
        e = n - i
        if c == 0:
            continue
        mag = abs(c)
        body = var if e == 1 else f"{var}^{e}" if e > 1 else ""
        coef = "" if (mag == 1 and e > 0) else str(mag)
        term = coef + body
        sign = "-" if c < 0 else "+"
        terms.append((sign, term))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, term in terms[1:]:
        out += f" {sign} {term}"
    return out
