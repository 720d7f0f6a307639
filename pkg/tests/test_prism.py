import math

import numpy as np
import pytest
from mpmath import mp, mpf

from orbivol import prism
from orbivol.errors import ConfigurationError, DomainError
from orbivol.lobachevsky import zeta_int
from orbivol.numkernel import precision

from oracles import orthoscheme_volume

D = 30
EPS = mpf(10) ** -(D - 5)


def test_beta_examples():
    with precision(D):
        assert abs(prism.beta_of_t(mp.pi / 4, D) - mp.pi / 4) < EPS
        assert abs(prism.beta_of_t(mp.acot(mp.sqrt(2)), D)) < mpf(10) ** -12
        assert abs(prism.beta_of_t(2 * mp.pi / 5, D) - mpf("0.94247779607693797153879301498385")) < EPS
    with pytest.raises(DomainError):
        prism.beta_of_t(mpf("0.5"), D)


def test_theta_examples():
    with precision(D):
        t0 = mp.acot(mp.sqrt(2))
        # the radicand vanishes at t0; compare just inside the admissible side
        assert abs(prism.theta_of_t(t0, D) - mp.atan(1 / (2 * mp.cos(mp.pi / 5)))) < mpf(10) ** -10
        b = mp.pi / 4
        expect = mp.atan(mp.sqrt(1 - 4 * mp.sin(mp.pi / 5) ** 2 * mp.sin(b) ** 2) / (2 * mp.cos(mp.pi / 5) * mp.cos(b)))
        assert abs(prism.theta_of_t(mp.pi / 4, D) - expect) < EPS
        grid = [mp.pi / 4 + k * (2 * mp.pi / 5 - mp.pi / 4) / 49 for k in range(50)]
        values = [prism.theta_of_t(t, D) for t in grid]
        assert all(b < a for a, b in zip(values, values[1:]))
        assert all(0 < v < mp.pi / 2 for v in values)


@pytest.mark.parametrize("t", [math.pi / 4, 0.9, math.pi / 3, 1.15, 2 * math.pi / 5])
def test_vol3_against_brute_force(t):
    beta = float(prism.beta_of_t(t, D))
    oracle = orthoscheme_volume(math.pi / 5, math.pi / 3, beta)
    assert abs(float(prism.vol3_orthoscheme(t, D)) - oracle) < 1e-11


def test_vol3_example_and_smoothness():
    with precision(D):
        assert abs(prism.vol3_orthoscheme(mp.pi / 4, D) - mpf("0.0358850633394")) < mpf("1e-12")
        a, b = mp.pi / 4, 2 * mp.pi / 5
        h = (b - a) / 200
        vals = [prism.vol3_orthoscheme(a + k * h, D) for k in range(201)]
        assert all(v > 0 for v in vals)
        slopes = [(y - x) / h for x, y in zip(vals, vals[1:])]
        assert max(abs(s) for s in slopes) < 1
        curv = [(y - x) / h for x, y in zip(slopes, slopes[1:])]
        assert max(abs(c) for c in curv) < 10


def test_endpoint_and_references():
    with precision(D):
        z3 = zeta_int(3, D)
        assert abs(prism.prism_volume(2 * mp.pi / 5, digits=D) - z3 / 3200) < mpf("1e-25")
        (n1, first), (n2, second), (n3, third) = prism.closed_form_references(D)
        assert (n1, n2) == ("[5/2,3,3,5,5/2]", "[5,3,3,5/2,5]")
        assert abs(third - z3 / 3200) < EPS
        assert abs((first - second) / 5 - third) < EPS


def test_table_values():
    with precision(D):
        assert abs(prism.prism_volume(mp.pi / 3, digits=D) - mpf("0.00076729618")) < mpf("5e-11")
        assert abs(prism.prism_volume(mp.pi / 4, digits=D) - mpf("0.00198469643")) < mpf("5e-11")
        p0 = prism.polytope_volume("P0", digits=D)
        assert prism.polytope_volume("P1", digits=D) == 2 * p0
        assert abs(prism.polytope_volume("P2", digits=D) - mpf("0.00198469643")) < mpf("5e-11")


def test_error_estimate_honest():
    with precision(D):
        r = prism.prism_volume_detail(mp.pi / 3, digits=D)
        fine = prism.prism_volume_detail(mp.pi / 3, tol=mpf("1e-38"), digits=D)
        assert abs(fine.value - r.value) <= r.error_estimate + mpf("1e-38")


def test_monotone_decreasing():
    with precision(D):
        a, b = mp.pi / 4, 2 * mp.pi / 5
        grid = [a + k * (b - a) / 19 for k in range(20)]
        vols = [prism.prism_volume(t, tol=mpf("1e-20"), digits=D) for t in grid]
    assert all(y < x for x, y in zip(vols, vols[1:]))


def test_alpha_just_outside_range_is_reported():
    # the float nearest pi/4 lies below pi/4 by more than the rounding slack
    with pytest.raises(DomainError):
        prism.prism_volume(math.pi / 4 - 1e-12, digits=D)


def test_domain():
    with pytest.raises(DomainError):
        prism.prism_volume(mpf("0.7"), digits=D)
    with pytest.raises(DomainError):
        prism.prism_volume(mpf("1.3"), digits=D)
    with pytest.raises(ConfigurationError):
        prism.polytope_volume("P3", digits=D)
