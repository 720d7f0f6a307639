"""Number fields of degree <= 4 and quadratic extensions of real quadratic fields.

A :class:`NumberField` is a record (defining polynomial, signature, absolute
discriminant, optional class number) validated on construction.  Quadratic
extensions l = k(sqrt beta) of k = Q(sqrt D) are handled through
:class:`QuadraticField`, which does exact arithmetic in the maximal order
Z[w] and computes the quadratic character of beta at every prime of k,
including the dyadic ones.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError, DomainError, InconclusiveCharacterError
from .polynomials import (
    factor_mod_p,
    hensel_lift,
    index_square,
    is_irreducible,
    normalize,
    poly_disc,
    roots_mod_p,
)


@dataclass(frozen=True)
class NumberField:
    label: str
    poly: tuple[int, ...]
    r1: int
    r2: int
    abs_disc: int
    class_number: int | None = None
    notes: str = ""

    def __post_init__(self):
        poly = normalize(self.poly)
        object.__setattr__(self, "poly", poly)
        n = len(poly) - 1
        if poly[0] != 1:
            raise DomainError("NumberField", poly, "defining polynomial must be monic")
        if self.r1 < 0 or self.r2 < 0 or self.r1 + 2 * self.r2 != n:
            raise DomainError("NumberField", (self.r1, self.r2), f"signature incompatible with degree {n}")
        if self.abs_disc < 1:
            raise DomainError("NumberField", self.abs_disc, "discriminant must be positive")
        if not is_irreducible(poly):
            raise DomainError("NumberField", poly, "polynomial is reducible over Q")
        index_square(poly, self.abs_disc)
        real = _count_real_roots(poly)
        if real != self.r1:
            raise DomainError("NumberField", (self.r1, self.r2), f"polynomial has {real} real roots")
        # the sign of the discriminant is (-1)^r2
        if (poly_disc(poly) < 0) != (self.r2 % 2 == 1):
            raise DomainError("NumberField", self.r2, "discriminant sign disagrees with r2")

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def signature(self) -> tuple[int, int]:
        return (self.r1, self.r2)

    @cached_property
    def poly_disc(self) -> int:
        return poly_disc(self.poly)

    @cached_property
    def index(self) -> int:
        return math.isqrt(index_square(self.poly, self.abs_disc))

    @property
    def monogenic(self) -> bool:
        return self.index == 1

    def to_record(self) -> dict:
        rec = {"label": self.label, "poly": list(self.poly), "r1": self.r1, "r2": self.r2, "abs_disc": self.abs_disc}
        if self.class_number is not None:
            rec["h"] = self.class_number
        if self.notes:
            rec["notes"] = self.notes
        return rec


def _count_real_roots(poly) -> int:
    # root separation for these small integer polynomials is far above 1e-6
    roots = np.roots(np.array(poly, dtype=float))
    scale = max(1.0, float(np.max(np.abs(roots))))
    return int(np.sum(np.abs(roots.imag) < 1e-7 * scale))


# --- field data files --------------------------------------------------------


def _default_path():
    return resources.files("orbivol").joinpath("data/fields.json")


def load_field_records(path: str | Path | None = None) -> dict[str, dict]:
    """Raw records keyed by label."""
    src = _default_path() if path is None else Path(path)
    try:
        data = json.loads(src.read_text())
    except FileNotFoundError:
        raise ConfigurationError(f"field data file not found: {src}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"field data file {src} is not valid JSON: {exc}") from None
    records = data["fields"] if isinstance(data, dict) else data
    return {rec["label"]: rec for rec in records}


def field_from_record(rec: dict) -> NumberField:
    try:
        return NumberField(
            label=rec["label"],
            poly=tuple(rec["poly"]),
            r1=int(rec["r1"]),
            r2=int(rec["r2"]),
            abs_disc=int(rec["abs_disc"]),
            class_number=rec.get("h"),
            notes=rec.get("notes", ""),
        )
    except KeyError as exc:
        raise ConfigurationError(f"field record missing key {exc}") from None


def load_field(spec: str, path: str | Path | None = None) -> NumberField:
    """Load a field by ``label`` or ``FILE#label``."""
    if "#" in spec:
        path, spec = spec.split("#", 1)
    records = load_field_records(path)
    if spec not in records:
        raise ConfigurationError(f"no field labelled {spec!r}; available: {sorted(records)}")
    return field_from_record(records[spec])


# --- fundamental discriminants and Kronecker symbols --------------------------


def _squarefree(n: int) -> bool:
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def is_fundamental(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n > 0."""
    if n <= 0:
        raise DomainError("kronecker", n, "requires n > 0")
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    # Jacobi symbol for odd n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# --- quadratic fields ---------------------------------------------------------


def _vp(n: int, p: int) -> int:
    if n == 0:
        raise DomainError("valuation", n, "valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class LocalPrime:
    """A prime of k above p with its norm and the character value of beta."""

    p: int
    norm: int
    e: int
    chi: int
    label: str
    disc_exponent: int = 0


@dataclass(frozen=True)
class QuadraticField:
    """k = Q(sqrt D) for a positive fundamental discriminant D.

    Elements of the maximal order are pairs (x, y) meaning x + y w, where w
    is a root of w^2 = t w + n with (t, n) = (1, (D-1)/4) or (0, D/4).
    """

    D: int
    t: int = field(init=False)
    n: int = field(init=False)

    def __post_init__(self):
        if self.D <= 1 or not is_fundamental(self.D):
            raise DomainError("QuadraticField", self.D, "requires a positive fundamental discriminant")
        t = self.D % 2
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "n", (self.D - 1) // 4 if t else self.D // 4)

    @property
    def poly(self) -> tuple[int, int, int]:
        return (1, -self.t, -self.n)

    def number_field(self, label: str | None = None) -> NumberField:
        return NumberField(label or f"Q(sqrt {self.D})", self.poly, 2, 0, self.D)

    # arithmetic in Z[w]
    def mul(self, a, b):
        x1, y1 = a
        x2, y2 = b
        yy = y1 * y2
        return (x1 * x2 + yy * self.n, x1 * y2 + x2 * y1 + yy * self.t)

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def norm(self, a) -> int:
        x, y = a
        return x * x + self.t * x * y - self.n * y * y

    def trace(self, a) -> int:
        x, y = a
        return 2 * x + self.t * y

    def from_desc(self, a: int, b: int, c: int = 1):
        """(a + b sqrt D)/c in the w basis, scaled by c^2 if not integral.

        Scaling by a square leaves the extension k(sqrt beta) unchanged.
        """
        if c == 0:
            raise DomainError("from_desc", c, "denominator must be nonzero")
        x_num, y_num = a - b * self.t, 2 * b
        if x_num % c == 0 and y_num % c == 0:
            return (x_num // c, y_num // c)
        return (c * x_num, c * y_num)

    def embeddings_sign(self, a) -> tuple[int, int]:
        """Signs of the two real embeddings of x + y w, decided exactly."""
        x, y = a
        # x + y w = (2x + t y)/2 + (y/2) sqrt D
        u, v = 2 * x + self.t * y, y

        def sgn(u, v):
            if v == 0:
                return (u > 0) - (u < 0)
            if u == 0 or (u > 0) == (v > 0):
                return 1 if (u > 0 or v > 0) else -1
            return 1 if (u * u > v * v * self.D) == (u > 0) else -1

        return sgn(u, v), sgn(u, -v)

    def is_square(self, a) -> bool:
        x, y = a
        N = self.norm(a)
        if N < 0:
            return False
        r = math.isqrt(N)
        if r * r != N:
            return False
        # (u + v w)^2 = a with u^2 + t u v - n v^2 = +-r; search v from the trace
        for s in (r, -r):
            tr = self.trace(a) + 2 * s
            # trace(z)^2 = trace(a) + 2 N(z)
            if tr < 0:
                continue
            T = math.isqrt(tr)
            if T * T != tr:
                continue
            for Tz in (T, -T):
                for v in range(-abs(y) - abs(x) - 2, abs(y) + abs(x) + 3):
                    u2 = Tz - self.t * v
                    if u2 % 2:
                        continue
                    z = (u2 // 2, v)
                    if self.mul(z, z) == (x, y):
                        return True
        return False

    # --- primes of k and local characters ---------------------------------

    def h_poly(self, beta) -> tuple[int, ...]:
        """Minimal polynomial X^4 - Tr(beta) X^2 + N(beta) of sqrt(beta) over Q."""
        return (1, 0, -self.trace(beta), 0, self.norm(beta))

    def bad_primes(self, beta) -> list[int]:
        """Primes dividing 2 D N(beta) y, where the root-count shortcut can fail."""
        N = self.norm(beta)
        if N == 0:
            raise DomainError("bad_primes", beta, "beta must be nonzero")
        return sorted(set(_prime_factors(2 * self.D * N * (beta[1] or 1))))

    def _dyadic_unit_level(self, u, e: int, val) -> int:
        """Largest t <= 2e+1 with u a square modulo P^t, by search over O/8O."""
        best = 0
        for x in range(8):
            for y in range(8):
                diff = self.sub(u, self.mul((x, y), (x, y)))
                level = 2 * e + 1 if diff == (0, 0) else min(val(diff), 2 * e + 1)
                best = max(best, level)
                if best == 2 * e + 1:
                    return best
        return best

    def local_primes(self, beta, p: int) -> list[LocalPrime]:
        """The primes of k above p with the character of k(sqrt beta)/k.

        chi is +1 (split), -1 (inert) or 0 (ramified); ``disc_exponent`` is
        the exponent of the prime in the relative discriminant.
        """
        if self.norm(beta) == 0:
            raise DomainError("local_primes", beta, "beta must be nonzero")
        shape = factor_mod_p(self.poly, p)
        if shape == [(1, 1), (1, 1)]:
            return self._split_primes(beta, p)
        if shape == [(2, 1)]:
            return [self._unique_prime(beta, p, e=1, f=2)]
        return [self._unique_prime(beta, p, e=2, f=1)]

    def _uniformizer(self, p):
        """pi = w - r with v_P(pi) = 1 at the ramified prime above p."""
        for r in range(p * p):
            if _vp(self.norm((-r, 1)), p) == 1:
                return (-r, 1)
        raise InconclusiveCharacterError(f"no uniformizer of the form w - r above {p}")

    def conj(self, a):
        x, y = a
        return (x + self.t * y, -y)

    def _unique_prime(self, beta, p, e, f) -> LocalPrime:
        # P is the only prime above p, so v_P(a) = v_p(N a) / f
        def val(a):
            return _vp(self.norm(a), p) // f

        v = val(beta)
        label = f"({p})" if e == 1 else f"P{p}"
        norm = p**f
        if v % 2:
            return LocalPrime(p, norm, e, 0, label, self._odd_val_exponent(p, e))
        # a unit u in the square class of beta
        if e == 1:
            q = p**v
            u = (beta[0] // q, beta[1] // q)
        else:
            # beta * conj(pi)^v / p^v, exact since conj(pi) lies in P and p = P^2
            pib = self.conj(self._uniformizer(p))
            acc = beta
            for _ in range(v):
                acc = self.mul(acc, pib)
            q = p**v
            u = (acc[0] // q, acc[1] // q)
        if val(u) != 0 or self.mul(u, (q, 0)) != (beta if e == 1 else acc):
            raise InconclusiveCharacterError(f"could not extract the unit part of beta at {label}")
        if p != 2:
            if f == 2:
                chi = 1 if pow(self.norm(u) % p, (p - 1) // 2, p) == 1 else -1
            else:
                r = roots_mod_p(self.poly, p)[0]
                res = (u[0] + u[1] * r) % p
                chi = 1 if pow(res, (p - 1) // 2, p) == 1 else -1
            return LocalPrime(p, norm, e, chi, label, 0)
        level = self._dyadic_unit_level(u, e, val)
        if level >= 2 * e + 1:
            return LocalPrime(p, norm, e, 1, label, 0)
        if level >= 2 * e:
            return LocalPrime(p, norm, e, -1, label, 0)
        return LocalPrime(p, norm, e, 0, label, 2 * e + 1 - level)

    @staticmethod
    def _odd_val_exponent(p, e):
        return 1 if p != 2 else 2 * e + 1

    def _split_primes(self, beta, p) -> list[LocalPrime]:
        N = self.norm(beta)
        m = _vp(N, p) + (5 if p == 2 else 2)
        out = []
        for i, r in enumerate(roots_mod_p(self.poly, p)):
            R = hensel_lift(self.poly, r, p, m)
            mod = p**m
            image = (beta[0] + beta[1] * R) % mod
            label = f"P{p}_{i + 1}"
            if image == 0:
                raise InconclusiveCharacterError(f"beta vanishes to the working precision at {label}")
            v = _vp(image, p)
            if v % 2:
                out.append(LocalPrime(p, p, 1, 0, label, self._odd_val_exponent(p, 1)))
                continue
            unit = (image // p**v) % p ** (m - v)
            if p != 2:
                chi = 1 if pow(unit % p, (p - 1) // 2, p) == 1 else -1
                out.append(LocalPrime(p, p, 1, chi, label, 0))
                continue
            if m - v < 3:
                raise InconclusiveCharacterError(f"insufficient 2-adic precision at {label}")
            if unit % 8 == 1:
                out.append(LocalPrime(p, p, 1, 1, label, 0))
            elif unit % 4 == 1:
                out.append(LocalPrime(p, p, 1, -1, label, 0))
            else:
                out.append(LocalPrime(p, p, 1, 0, label, 2))
        return out

    def relative_disc_norm(self, beta) -> int:
        """Norm of the relative discriminant of k(sqrt beta)/k."""
        total = 1
        for p in self.bad_primes(beta):
            for lp in self.local_primes(beta, p):
                total *= lp.norm**lp.disc_exponent
        return total

    def extension_signature(self, beta) -> tuple[int, int]:
        s1, s2 = self.embeddings_sign(beta)
        positive = (s1 > 0) + (s2 > 0)
        return (2 * positive, 2 - positive)


def search_beta(D: int, target_abs_disc: int, signature: tuple[int, int], bound: int = 10):
    """All beta = x + y w with |x|, |y| <= bound giving k(sqrt beta) the target data.

    Returns (beta, minimal polynomial of sqrt beta) pairs; beta is in the w
    basis of :class:`QuadraticField` (w = sqrt(D/4) when 4 | D).
    """
    k = QuadraticField(D)
    found = []
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            beta = (x, y)
            if y == 0 or k.is_square(beta):
                continue
            if k.extension_signature(beta) != tuple(signature):
                continue
            if D * D * k.relative_disc_norm(beta) == target_abs_disc:
                found.append((beta, k.h_poly(beta)))
    return found
