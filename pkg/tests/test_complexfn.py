import cmath

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from xibessel.complexfn import EvalRequest, Xi, complex_gamma, log_gamma, xi_completed, zeta, zeta_times_sm1
from xibessel.errors import PoleError

GAMMA_POINTS = [0.5, 1, 2.5, 10, 1 + 1j, -0.5 + 0.3j, -3.7, 0.1 - 7j, 4 + 20j, -9.5 + 2j, 60 + 1j]
ZETA_POINTS = [2, 3.5, 0.5 + 14.1j, 0.5 + 100j, -1.5, -7 + 3j, 0.2, 1.0001, 3 - 40j, -20.5]


@pytest.mark.parametrize("z", GAMMA_POINTS)
def test_gamma_matches_mpmath(z, close):
    close(complex_gamma(z), complex(mpmath.gamma(z)), 1e-12)


def test_gamma_spec_value(close):
    close(complex_gamma(1 + 1j), 0.4980156681 - 0.1549498283j, 1e-9)


@pytest.mark.parametrize("z", [0, -1, -2, -17])
def test_gamma_poles(z):
    with pytest.raises(PoleError):
        complex_gamma(z)


def test_gamma_overflow():
    with pytest.raises(OverflowError):
        complex_gamma(200.0)


@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=30, allow_nan=False, allow_infinity=False))
@settings(max_examples=60, deadline=None)
def test_gamma_recurrence(z):
    if abs(z.imag) < 0.05 and z.real < 0.5:
        return  # too close to the poles for a relative comparison
    lhs = complex_gamma(z + 1)
    rhs = z * complex_gamma(z)
    assert abs(lhs - rhs) <= 1e-10 * abs(lhs)


@pytest.mark.parametrize("z", [0.5, 3 + 4j, -2.5 + 0.1j, 30 - 12j])
def test_log_gamma_exponentiates_to_gamma(z, close):
    close(cmath.exp(log_gamma(z)), complex_gamma(z), 1e-12)


@pytest.mark.parametrize("s", ZETA_POINTS)
def test_zeta_matches_mpmath(s, close):
    close(zeta(s), complex(mpmath.zeta(s)), 1e-11)


def test_zeta_first_zero():
    assert abs(zeta(0.5 + 14.1347251417j)) < 1e-6
    assert abs(zeta(0.5 + 14.134725141734693j)) < 1e-13


@pytest.mark.parametrize("s", [-1.5 + 2j, -6 + 0.5j, 3 + 1j])
def test_zeta_times_sm1_off_axis(s, close):
    close(zeta_times_sm1(s), complex((mpmath.mpc(s) - 1) * mpmath.zeta(s)), 1e-12)


def test_zeta_pole():
    with pytest.raises(PoleError):
        zeta(1)


def test_zeta_times_sm1_is_regular_at_one(close):
    close(zeta_times_sm1(1), 1.0, 1e-14)
    close(zeta_times_sm1(1 + 1e-6), complex(mpmath.zeta(1 + 1e-6) * 1e-6), 1e-9)


def test_zeta_trivial_zero():
    assert abs(zeta(-2)) < 1e-14


def test_loose_request_still_close():
    req = EvalRequest(target_rel_tol=1e-6)
    assert abs(zeta(3, req) - 1.2020569031595942) < 1e-6


def test_xi_half():
    assert abs(xi_completed(0.5) - 0.4971207782) < 1e-10


@pytest.mark.parametrize("s", [0.5 + 3j, 2, -3 + 1j, 0.3 + 25j, 15 - 2j])
def test_xi_functional_equation(s, close):
    close(xi_completed(s), xi_completed(1 - s), 1e-11)


@pytest.mark.parametrize("s", [0.5 + 3j, 2.5, -3 + 1j, -5 + 1j, -0.7 + 40j])
def test_xi_matches_mpmath(s, close):
    s_ = mpmath.mpc(s)
    ref = 0.5 * s_ * (s_ - 1) * mpmath.pi ** (-s_ / 2) * mpmath.gamma(s_ / 2) * mpmath.zeta(s_)
    close(xi_completed(s), complex(ref), 1e-11)


def test_Xi_values(close):
    close(Xi(0), 0.4971207782, 1e-10)
    assert abs(Xi(14.1347251417)) < 1e-6
    # Xi(y) = xi(1/2 + iy) is real
    close(Xi(7.3), xi_completed(0.5 + 7.3j).real, 1e-13)


@given(st.floats(min_value=0, max_value=60))
@settings(max_examples=40, deadline=None)
def test_Xi_even(y):
    assert Xi(y) == Xi(-y)


def test_Xi_against_mpmath_on_a_grid():
    for y in (0.3, 5, 14, 21, 33.3, 48):
        s = mpmath.mpc(0.5, y)
        ref = (0.5 * s * (s - 1) * mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2) * mpmath.zeta(s)).real
        assert abs(Xi(y) - float(ref)) <= 1e-11 * abs(float(ref))
