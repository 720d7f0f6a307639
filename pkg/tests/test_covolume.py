import json
import math
import warnings

import pytest
from mpmath import mp, mpf

from orbivol import covolume as cv
from orbivol.errors import ConfigurationError, DegradedPrecisionWarning, DependencyError, DomainError
from orbivol.numbertheory.zeta import dedekind_zeta_quadratic, relative_L_ratio
from orbivol.numbertheory.fields import load_field
from orbivol.numkernel import precision
from orbivol.prism import polytope_volume

D = 30
P = 10**5


def test_constants_stable_across_precision():
    lo, hi = cv.prasad_constants(30), cv.prasad_constants(60)
    with precision(30):
        for name in ("C", "a", "hyperbolic_factor"):
            x, y = getattr(lo, name), getattr(hi, name)
            assert abs(x - y) <= abs(y) * mpf(10) ** -35
        assert abs(lo.C - 3 / (128 * mp.pi**9)) < mpf(10) ** -45
        assert abs(lo.a - 27 / (16 * mp.pi**11)) < mpf(10) ** -45


def test_principal_mu_all_ones():
    with precision(D):
        C = cv.prasad_constants(D).C
        got = cv.principal_mu_covolume(2, 5, 16, 1, 1, 1, D)
        assert abs(got - mpf(5) ** mpf(7.5) * 16 ** mpf(2.5) * C**2) <= got * mpf(10) ** -(D + 2)
    with pytest.raises(DomainError):
        cv.principal_mu_covolume(2, 5, 16, 1, 0, 1, D)
    with pytest.raises(DomainError):
        cv.principal_mu_covolume(2, -5, 16, 1, 1, 1, D)


def test_gamma0_closed_form():
    r = cv.hyperbolic_covolume("gamma0", P, D)
    with precision(D):
        L = relative_L_ratio(load_field("ell0"), 5, 3, P, D).value
        zz = dedekind_zeta_quadratic(5, 2, D) * dedekind_zeta_quadratic(5, 4, D)
        closed = 9 * mp.sqrt(5) ** 15 * mp.sqrt(11) ** 5 / (2**14 * mp.pi**15) * zz * L
        assert abs(r.hyperbolic_covolume - closed) <= closed * mpf(10) ** -(D + 2)


def test_gamma2_against_printed_prefactor():
    # D_rel = 16 with index 2 gives 9 sqrt5^15 / (2^4 pi^15); the printed 2^3 is twice that
    r = cv.hyperbolic_covolume("gamma2", P, D)
    with precision(D):
        L = relative_L_ratio(load_field("ell2"), 5, 3, P, D).value
        zz = dedekind_zeta_quadratic(5, 2, D) * dedekind_zeta_quadratic(5, 4, D)
        printed = 9 * mp.sqrt(5) ** 15 / (2**3 * mp.pi**15) * zz * L
        assert abs(2 * r.hyperbolic_covolume - printed) <= printed * mpf(10) ** -(D + 2)


def test_report_invariants():
    for label in ("gamma0", "gamma2", "448", "475"):
        r = cv.hyperbolic_covolume(label, P, D)
        case = cv.get_case(label)
        with precision(D):
            expect = 2 * mp.pi**3 * r.mu_covolume / case.index
            assert abs(r.hyperbolic_covolume - expect) <= expect * mpf(10) ** -(D + 2)
        assert len(r.provenance) == 3
        assert r.provenance[-1].cutoff == P and r.provenance[-1].tail_bound > 0
        assert r.tail_bound > 0


def test_gamma1_doubles_gamma0_and_ordering():
    g0 = cv.hyperbolic_covolume("gamma0", P, D).hyperbolic_covolume
    g1 = cv.hyperbolic_covolume("gamma1", P, D).hyperbolic_covolume
    g2 = cv.hyperbolic_covolume("gamma2", P, D).hyperbolic_covolume
    with precision(D):
        assert g1 == 2 * g0
    assert g0 < g1 < g2


def test_delta_is_half_gamma():
    for pid, label in (("P0", "gamma0"), ("P2", "gamma2")):
        r = cv.hyperbolic_covolume(label, P, D)
        with precision(D):
            vol = polytope_volume(pid, digits=D)
            assert abs(vol - r.hyperbolic_covolume / 2) <= r.tail_bound


def test_cutoff_increase_within_tail():
    a = cv.hyperbolic_covolume("475", 10**4, D)
    b = cv.hyperbolic_covolume("475", 10**5, D)
    with precision(D):
        assert abs(b.hyperbolic_covolume - a.hyperbolic_covolume) <= a.tail_bound


def test_bounds():
    with precision(D):
        v = cv.bound_deg_ge7(D)
        assert abs(v - cv.bound_deg_ge7(2 * D)) < mpf(10) ** -(D - 5)
        a = 27 / 16 / math.pi**11
        assert abs(float(v) - 2 * math.pi**3 / 32 * (9.3**5.5 * a) ** 7) < 1e-12
        assert mp.floor(v * 1000) == 7657 and v > cv.THRESHOLD
        assert cv.bound_disc(2, 27, D) > cv.THRESHOLD > cv.bound_disc(2, 26, D)
        assert cv.min_disc_exceeding(2, digits=D) == 27
        assert cv.bound_disc_pair(2, 5, 1, D) <= cv.bound_disc_pair(2, 5, 2, D)
        # with D_l = D_k^2 the pair bound reduces to the single-discriminant bound
        assert abs(cv.bound_disc_pair(2, 5, 25, D) - cv.bound_disc(2, 5, D)) < mpf(10) ** -(D + 2)
        b = cv.max_ell_disc(2, 5, digits=D)
        assert cv.bound_disc_pair(2, 5, b, D) <= cv.THRESHOLD < cv.bound_disc_pair(2, 5, b + 1, D)
        assert cv.bound_classno(2, 5, 475, 1, D) == 2 * cv.bound_classno(2, 5, 475, 2, D)
    with pytest.raises(DomainError):
        cv.bound_disc(1, 5, D)
    with pytest.raises(DomainError):
        cv.bound_classno(2, 5, 475, 0, D)


def test_unknown_case_and_missing_data(tmp_path):
    with pytest.raises(ConfigurationError):
        cv.get_case("gamma9")
    path = tmp_path / "fields.json"
    path.write_text(json.dumps({"schema": "orbivol.fields/1", "fields": []}))
    with pytest.raises(DependencyError):
        cv.hyperbolic_covolume("gamma2", 10**4, D, fields_path=path)


def test_verify_identity_degraded_warning():
    with pytest.warns(DegradedPrecisionWarning):
        r = cv.verify_identity("gamma2", 20, 10**4, D)
    assert r.degraded and r.achievable_digits < 20
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        r = cv.verify_identity("gamma0_p0", 8, 10**5, D)
    assert not r.degraded and r.matched_digits >= 8
    with pytest.raises(ConfigurationError):
        cv.verify_identity("gamma1", 11, 10**4, D)
