from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from orbivol.errors import DomainError
from orbivol.lobachevsky import lob2, lob3, lob3_integral, lob_fourier, zeta_int
from orbivol.numkernel import precision

D = 30
EPS = mpf(10) ** -(D - 5)

# frozen from mpmath's polylogarithm Clausen functions at 50 digits
LOB2_PI_6 = "0.50747080320482681251060127713726014297084465376515"
LOB3_PI_5 = "0.047341978752707920969861201191603403407818557436058"
LOB2_07 = "0.48371600684138949088023612680477190812133965011855"
LOB3_07 = "0.01209304303950308263892238721392613086596409465564"

angles = st.floats(min_value=-10, max_value=10, allow_nan=False)


def test_trivial_values():
    with precision(D):
        assert lob2(0, D) == 0
        assert abs(lob2(mp.pi / 2, D)) < EPS
        assert abs(lob3(0, D) - zeta_int(3, D) / 4) < EPS
        assert abs(lob3(mp.pi / 2, D) + 3 * zeta_int(3, D) / 16) < EPS


def test_frozen_oracles():
    with precision(D):
        assert abs(lob2(mp.pi / 6, D) - mpf(LOB2_PI_6)) < EPS
        assert abs(lob3(mp.pi / 5, D) - mpf(LOB3_PI_5)) < EPS
        assert abs(lob2(mpf("0.7"), D) - mpf(LOB2_07)) < EPS
        assert abs(lob3(mpf("0.7"), D) - mpf(LOB3_07)) < EPS


def test_direct_summation_oracle():
    # 10^6 terms of 1/2 sum sin(r pi/3)/r^2; the tail is below 1/(2N)
    n = 10**6
    r = np.arange(1, n + 1, dtype=np.float64)
    direct = 0.5 * np.sum(np.sin(r * np.pi / 3) / r**2)
    assert abs(direct - float(lob2(mp.pi / 6, D))) < 1 / (2 * n) + 1e-12


@pytest.mark.parametrize("omega", [0.1, 0.7, 1.3, 2.9])
def test_fourier_helper_tail(omega):
    for order, fn in ((2, lob2), (3, lob3)):
        value, tail = lob_fourier(omega, order, 4000)
        assert abs(value - float(fn(omega, D))) <= tail + 1e-13


@settings(max_examples=100, deadline=None)
@given(angles)
def test_lob2_odd_and_periodic(w):
    with precision(D):
        w = mpf(w)
        assert abs(lob2(-w, D) + lob2(w, D)) < EPS
        assert abs(lob2(w + mp.pi, D) - lob2(w, D)) < EPS


@settings(max_examples=100, deadline=None)
@given(angles)
def test_lob2_duplication(w):
    with precision(D):
        w = mpf(w)
        assert abs(lob2(2 * w, D) - 2 * lob2(w, D) - 2 * lob2(w + mp.pi / 2, D)) < EPS


@settings(max_examples=100, deadline=None)
@given(angles)
def test_lob3_even_and_periodic(w):
    with precision(D):
        w = mpf(w)
        assert abs(lob3(-w, D) - lob3(w, D)) < EPS
        assert abs(lob3(w + mp.pi, D) - lob3(w, D)) < EPS


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=1e-3, max_value=3.14))
def test_lob3_series_matches_integral(w):
    with precision(D):
        value, err = lob3_integral(w, D)
        assert abs(value - lob3(w, D)) < EPS


def test_zeta_int():
    with precision(D):
        assert abs(zeta_int(2, D) - mp.pi**2 / 6) < EPS
        assert abs(zeta_int(4, D) - mp.pi**4 / 90) < EPS
        # Apery's series, an independent accelerated series for zeta(3)
        apery = mpf(5) / 2 * sum((-1) ** (n + 1) / (mpf(n) ** 3 * comb(2 * n, n)) for n in range(1, 120))
        assert abs(zeta_int(3, D) - apery) < EPS
        assert abs(zeta_int(3, D) - mpf("1.2020569031595942853997381615114")) < EPS
        assert abs(zeta_int(5, D) - mpf("1.0369277551433699263313654864570")) < EPS
    with pytest.raises(DomainError):
        zeta_int(1, D)
