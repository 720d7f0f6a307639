"""Covolumes of arithmetic lattices in Isom(H^5) from Prasad's volume formula.

For a principal arithmetic subgroup attached to a quadratic extension l/k
with [k:Q] = d the Haar covolume is

    mu = D_k^7.5 (D_l / D_k^2)^2.5 C^d zeta_k(2) zeta_k(4) L_{l/k}(3),

with C = 3 2^-7 pi^-9.  Hyperbolic volume is 2 pi^3 mu, and passing to the
normalizer divides by its index.  The lower bounds used to sieve the
remaining (k, l) pairs share the constant a = 3^3 2^-4 pi^-11.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import mpmath
from mpmath import mp, mpf

from .errors import ConfigurationError, DegradedPrecisionWarning, DependencyError, DomainError
from .numbertheory.fields import load_field, load_field_records
from .numbertheory.zeta import (
    DEFAULT_CUTOFF,
    EulerProductValue,
    dedekind_zeta_quadratic,
    relative_L,
    relative_L_ratio,
)
from .numkernel import precision, resolve_digits
from .prism import prism_volume_detail

THRESHOLD = mpf("4e-3")


@dataclass(frozen=True)
class PrasadConstants:
    C: mpf
    a: mpf
    hyperbolic_factor: mpf


def prasad_constants(digits: int | None = None) -> PrasadConstants:
    with precision(digits):
        pi = mp.pi
        return PrasadConstants(
            C=3 * mpf(2) ** -7 * pi**-9,
            a=27 * mpf(2) ** -4 * pi**-11,
            hyperbolic_factor=2 * pi**3,
        )


def _positive(name, *values):
    for v in values:
        if not v > 0:
            raise DomainError(name, v, "inputs must be positive")


def principal_mu_covolume(d: int, D_k, D_rel, z2, z4, L3, digits: int | None = None) -> mpf:
    """D_k^7.5 D_rel^2.5 C^d z2 z4 L3."""
    if not isinstance(d, int) or d < 2:
        raise DomainError("principal_mu_covolume", d, "degree d must be an integer >= 2")
    with precision(digits):
        D_k, D_rel, z2, z4, L3 = (mpf(x) for x in (D_k, D_rel, z2, z4, L3))
        _positive("principal_mu_covolume", D_k, D_rel, z2, z4, L3)
        C = prasad_constants(digits).C
        return D_k ** mpf(7.5) * D_rel ** mpf(2.5) * C**d * z2 * z4 * L3


# --- lattice cases ---------------------------------------------------------------


@dataclass(frozen=True)
class LatticeCase:
    """Data of one lattice; ``L_route`` is ("ratio", field label) or ("character", beta)."""

    label: str
    d: int
    D_k: int
    D_rel: int
    index: int
    L_route: tuple
    description: str = ""

    def __post_init__(self):
        if self.D_rel < 1 or self.index not in (1, 2, 4, 8):
            raise ConfigurationError(f"case {self.label}: invalid D_rel or index")


CASES: dict[str, LatticeCase] = {
    "gamma0": LatticeCase("gamma0", 2, 5, 11, 2, ("ratio", "ell0"), "normalizer of Lambda0, l0/k0 with D_l = 275"),
    "gamma1": LatticeCase("gamma1", 2, 5, 11, 1, ("ratio", "ell0"), "Lambda0 itself, twice the covolume of Gamma0"),
    "gamma2": LatticeCase("gamma2", 2, 5, 16, 2, ("ratio", "ell2"), "normalizer of Lambda2, l2/k0 with D_l = 400"),
    "448": LatticeCase("448", 2, 8, 7, 8, ("character", "ell448"), "lower bound for (D_k, D_l) = (8, 448), index at most 8"),
    "475": LatticeCase("475", 2, 5, 19, 2, ("character", "ell475"), "l = k0(sqrt(-1 + 2 sqrt 5)), D_l = 475"),
}


def get_case(label: str) -> LatticeCase:
    key = label.lower().replace("case", "").replace("_", "")
    if key not in CASES:
        raise ConfigurationError(f"unknown case {label!r}; expected one of {sorted(CASES)}")
    return CASES[key]


@dataclass(frozen=True)
class ProvenanceItem:
    name: str
    value: mpf
    cutoff: int | None = None
    tail_bound: mpf | None = None


@dataclass(frozen=True)
class CovolumeReport:
    case: str
    mu_covolume: mpf
    hyperbolic_covolume: mpf
    tail_bound: mpf
    provenance: tuple[ProvenanceItem, ...] = field(default=())


def _L_value(case: LatticeCase, cutoff: int, digits: int, fields_path=None) -> tuple[EulerProductValue, str]:
    route, label = case.L_route
    try:
        ell = load_field(label, fields_path)
    except ConfigurationError as exc:
        raise DependencyError(f"case {case.label}: field data for {label!r} unavailable ({exc})") from None
    if route == "ratio":
        return relative_L_ratio(ell, case.D_k, 3, cutoff, digits), f"L_{label}/k(3) [zeta_l/zeta_k Euler products]"
    rec = load_field_records(fields_path)[label]
    if "beta" not in rec:
        raise DependencyError(f"case {case.label}: field {label!r} has no beta for the character route")
    beta = tuple(int(x) for x in rec["beta"])
    return relative_L(case.D_k, beta, 3, cutoff, digits), f"L_{label}/k(3) [character of beta={beta}]"


def hyperbolic_covolume(case, cutoff: int = DEFAULT_CUTOFF, digits: int | None = None, fields_path=None) -> CovolumeReport:
    """2 pi^3 mu / index for a registered lattice case."""
    if isinstance(case, str):
        case = get_case(case)
    d = resolve_digits(digits)
    with precision(d):
        z2 = dedekind_zeta_quadratic(case.D_k, 2, d)
        z4 = dedekind_zeta_quadratic(case.D_k, 4, d)
        L, lname = _L_value(case, cutoff, d, fields_path)
        mu = principal_mu_covolume(case.d, case.D_k, case.D_rel, z2, z4, L.value, d)
        hyp = prasad_constants(d).hyperbolic_factor * mu / case.index
        tail = hyp * L.tail_bound / L.value
        prov = (
            ProvenanceItem(f"zeta_k(2), D_k={case.D_k}", z2),
            ProvenanceItem(f"zeta_k(4), D_k={case.D_k}", z4),
            ProvenanceItem(lname, L.value, cutoff, L.tail_bound),
        )
        return CovolumeReport(case.label, mu, hyp, tail, prov)


def case_covolume_448(cutoff: int = DEFAULT_CUTOFF, digits: int | None = None, fields_path=None) -> mpf:
    return hyperbolic_covolume("448", cutoff, digits, fields_path).hyperbolic_covolume


def case_covolume_475(cutoff: int = DEFAULT_CUTOFF, digits: int | None = None, fields_path=None) -> mpf:
    return hyperbolic_covolume("475", cutoff, digits, fields_path).hyperbolic_covolume


# --- lower bounds ----------------------------------------------------------------


def _check_bound_args(name, d, *discs):
    if not isinstance(d, int) or d < 2:
        raise DomainError(name, d, "degree d must be an integer >= 2")
    for D in discs:
        if not D >= 1:
            raise DomainError(name, D, "discriminants must be >= 1")


def bound_deg_ge7(digits: int | None = None) -> mpf:
    """(2 pi^3 / 32) (9.3^5.5 a)^7, valid for every degree d >= 7."""
    with precision(digits):
        a = prasad_constants(digits).a
        return 2 * mp.pi**3 / 32 * (mpf("9.3") ** mpf(5.5) * a) ** 7


def bound_disc(d: int, D_k, digits: int | None = None) -> mpf:
    """(2 pi^3 / 32) D_k^5.5 a^d."""
    _check_bound_args("bound_disc", d, D_k)
    with precision(digits):
        a = prasad_constants(digits).a
        return 2 * mp.pi**3 / 32 * mpf(D_k) ** mpf(5.5) * a**d


def bound_disc_pair(d: int, D_k, D_ell, digits: int | None = None) -> mpf:
    """(2 pi^3 / 32) D_k^2.5 D_l^1.5 a^d."""
    _check_bound_args("bound_disc_pair", d, D_k, D_ell)
    with precision(digits):
        a = prasad_constants(digits).a
        return 2 * mp.pi**3 / 32 * mpf(D_k) ** mpf(2.5) * mpf(D_ell) ** mpf(1.5) * a**d


def bound_classno(d: int, D_k, D_ell, h_ell: int, digits: int | None = None) -> mpf:
    """(2 pi^3 / (h_l 2^(d+1))) D_k^7.5 (D_l / D_k^2)^2.5 C^d."""
    _check_bound_args("bound_classno", d, D_k, D_ell)
    if not isinstance(h_ell, int) or h_ell < 1:
        raise DomainError("bound_classno", h_ell, "class number must be a positive integer")
    with precision(digits):
        C = prasad_constants(digits).C
        D_k, D_ell = mpf(D_k), mpf(D_ell)
        return 2 * mp.pi**3 / (h_ell * mpf(2) ** (d + 1)) * D_k ** mpf(7.5) * (D_ell / D_k**2) ** mpf(2.5) * C**d


def min_disc_exceeding(d: int, threshold=THRESHOLD, digits: int | None = None) -> int:
    """Smallest integer D_k with bound_disc(d, D_k) > threshold."""
    with precision(digits):
        a = prasad_constants(digits).a
        x = (mpf(threshold) * 32 / (2 * mp.pi**3) / a**d) ** (1 / mpf(5.5))
        D = max(1, int(mpmath.floor(x)))
        while bound_disc(d, D, digits) <= threshold:
            D += 1
        while D > 1 and bound_disc(d, D - 1, digits) > threshold:
            D -= 1
        return D


def max_ell_disc(d: int, D_k: int, threshold=THRESHOLD, digits: int | None = None) -> int:
    """Largest integer D_l with bound_disc_pair(d, D_k, D_l) <= threshold (the bound b_k)."""
    with precision(digits):
        a = prasad_constants(digits).a
        x = (mpf(threshold) * 32 / (2 * mp.pi**3) / (mpf(D_k) ** mpf(2.5) * a**d)) ** (1 / mpf(1.5))
        D = int(mpmath.floor(x)) + 1
        while D > 0 and bound_disc_pair(d, D_k, D, digits) > threshold:
            D -= 1
        while bound_disc_pair(d, D_k, D + 1, digits) <= threshold:
            D += 1
        return D


# --- the geometric/arithmetic identity -----------------------------------------------

IDENTITIES = {
    "gamma0_p0": ("gamma0", "pi/3"),
    "gamma2_p2": ("gamma2", "pi/4"),
}


@dataclass(frozen=True)
class IdentityReport:
    which: str
    lhs: mpf
    rhs: mpf
    matched_digits: int
    achievable_digits: int
    lhs_tail: mpf
    rhs_error: mpf
    degraded: bool


def _digits_between(x: mpf, y: mpf, cap: int) -> int:
    diff = abs(x - y)
    if diff == 0:
        return cap
    return min(cap, int(mpmath.floor(-mpmath.log10(diff / abs(x)))))


def verify_identity(which: str, digits_target: int = 11, cutoff: int = DEFAULT_CUTOFF, digits: int | None = None, fields_path=None) -> IdentityReport:
    """Compare the arithmetic covolume with twice the prism volume.

    ``matched_digits`` counts agreeing significant digits.  The Euler-product
    tail plus the quadrature error bound what can be certified; asking for
    more than that emits a :class:`DegradedPrecisionWarning`.
    """
    key = which.lower().replace("-", "_")
    if key in ("gamma0", "gamma2"):
        key = {"gamma0": "gamma0_p0", "gamma2": "gamma2_p2"}[key]
    if key not in IDENTITIES:
        raise ConfigurationError(f"unknown identity {which!r}; expected gamma0_p0 or gamma2_p2")
    case_label, alpha_text = IDENTITIES[key]
    d = resolve_digits(digits)
    with precision(d):
        rep = hyperbolic_covolume(case_label, cutoff, d, fields_path)
        alpha = mp.pi / 3 if alpha_text == "pi/3" else mp.pi / 4
        q = prism_volume_detail(alpha, digits=d)
        lhs, rhs = rep.hyperbolic_covolume, 2 * q.value
        rhs_err = 2 * q.error_estimate
        total = rep.tail_bound + rhs_err
        achievable = d if total == 0 else min(d, int(mpmath.floor(-mpmath.log10(total / abs(lhs)))))
        matched = _digits_between(lhs, rhs, d)
        degraded = digits_target > achievable
        if degraded:
            warnings.warn(
                f"{key}: {digits_target} digits requested but the Euler tail and quadrature error "
                f"certify only {achievable}",
                DegradedPrecisionWarning,
                stacklevel=2,
            )
        return IdentityReport(key, lhs, rhs, matched, achievable, rep.tail_bound, rhs_err, degraded)


def achievable_digits(cutoff: int, value_scale: float = 1.0) -> int:
    """Rough digit ceiling imposed by the relative L tail at ``cutoff``."""
    from .numbertheory.zeta import log_tail_bound

    return int(math.floor(-math.log10(math.expm1(log_tail_bound(cutoff, 3, 2)) * value_scale)))
