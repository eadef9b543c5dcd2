import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xibessel.besselhyp import g1
from xibessel.complexfn import complex_gamma, zeta
from xibessel.errors import DomainError, PoleError
from xibessel.quadrature import Decay, contour_spec_for, mellin_inverse_contour
from xibessel.series import (
    Muntz,
    PhysParams,
    ThetaConvention,
    abel_limit,
    bvp_initial_closed_form,
    g1_taylor,
    h1,
    h1_constant,
    heat_u,
    muntz_transform,
    theta_psi,
)
from xibessel.verify.checks import _g1_decay, mellin_kernel_h1


def test_phys_params_validation():
    with pytest.raises(DomainError):
        PhysParams(t=0)
    with pytest.raises(DomainError):
        PhysParams(kappa=-1)
    with pytest.raises(DomainError):
        PhysParams(r=1 + 1j)
    p = PhysParams(r=0.5j, t=2.0)
    assert p.r2 == -0.25 and p.w == 0.25 / 8
    assert p.replace(x=1.0).x == 1.0


def test_theta_values():
    assert abs(theta_psi(1.0).value - 0.3863186) < 1e-7
    assert abs(theta_psi(0.01).value - 0.5 * (math.sqrt(100 * math.pi) - 1)) < 1e-10
    assert abs(theta_psi(0.01).value - 8.3622693) < 1e-7
    ref = float(mpmath.nsum(lambda n: mpmath.exp(-mpmath.pi * n * n * 0.3), [1, mpmath.inf]))
    assert abs(theta_psi(0.3, ThetaConvention.PI).value - ref) < 1e-15


@given(st.floats(0.02, 20))
@settings(max_examples=40, deadline=None)
def test_theta_functional_equation(y):
    # psi(y) = sqrt(pi/y) psi(pi^2/y) + sqrt(pi/y)/2 - 1/2 in the plain convention
    q = math.sqrt(math.pi / y)
    rhs = q * theta_psi(math.pi ** 2 / y).value + 0.5 * q - 0.5
    assert abs(theta_psi(y).value - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_theta_domain():
    with pytest.raises(DomainError):
        theta_psi(0.0)


def test_h1_values():
    p = PhysParams(r=0.0, t=1.0)
    assert abs(h1(1.0, p).value - (theta_psi(1.0).value - math.sqrt(math.pi) / 2)) < 1e-15
    assert abs(h1(1.0, p).value - (-0.4999083)) < 1e-7
    assert abs(h1(0.01, p).value + 0.5) <= 1e-3


@pytest.mark.parametrize("r,t", [(0.5, 1.0), (1.0, 1.0), (0.5j, 1.0), (2.0, 0.3)])
def test_h1_constant_against_mpmath(r, t):
    p = PhysParams(r=r, t=t)
    ref = mpmath.sqrt(mpmath.pi) / (2 * mpmath.sqrt(t)) * mpmath.hyp1f1(0.5, 1, -(complex(r) ** 2).real / (4 * t))
    assert abs(h1_constant(p) - float(mpmath.re(ref))) < 1e-14


@pytest.mark.parametrize("r", [1.0, 0.5j])
def test_h1_equals_contour_representation(r):
    p = PhysParams(r=r, t=1.0)
    y = 0.5
    spec = contour_spec_for(1e-13, y, 0.5)
    contour = mellin_inverse_contour(lambda s: mellin_kernel_h1(s, p), spec, y, 1e-12).value
    assert abs(h1(y, p).value - contour) < 1e-10


def test_h1_imaginary_r_matches_direct_sum():
    p = PhysParams(r=0.5j, t=1.0)
    y = 0.8
    direct = mpmath.nsum(lambda n: mpmath.exp(-n * n * y * y) * mpmath.besseli(0, 0.5 * n * y), [1, mpmath.inf])
    assert abs(h1(y, p).value - (float(direct) - h1_constant(p) / y)) < 1e-14


def test_heat_u_value():
    ref = mpmath.nsum(lambda n: mpmath.besselj(0, n) * mpmath.exp(-n * n), [1, mpmath.inf])
    got = heat_u(1.0, 1.0, 1.0)
    assert abs(got.value - float(ref)) < 1e-15
    assert abs(got.value - 0.285569062) < 1e-9
    assert got.tail_bound < 1e-17


def test_heat_u_domain():
    with pytest.raises(DomainError):
        heat_u(1.0, 0.0)


def test_heat_u_terms_satisfy_pde():
    # each J0(n r) exp(-n^2 kappa t) solves u_t = kappa (u_rr + u_r / r)
    from xibessel.besselhyp import bessel_j0, bessel_j1
    r, t, kappa, h = 1.3, 0.4, 0.7, 1e-4
    for n in (1, 2, 5):
        f = lambda rr, tt: bessel_j0(n * rr) * math.exp(-n * n * kappa * tt)
        urr = (f(r + h, t) - 2 * f(r, t) + f(r - h, t)) / h ** 2
        ur = -n * bessel_j1(n * r) * math.exp(-n * n * kappa * t)
        ut = (f(r, t + h) - f(r, t - h)) / (2 * h)
        assert abs(kappa * (urr + ur / r) - ut) < 1e-7 * max(1, n * n)


def test_muntz_examples():
    v = muntz_transform(lambda y: np.exp(-math.pi * np.asarray(y) ** 2), 1.0)
    assert abs(v - (theta_psi(1.0, ThetaConvention.PI).value - 0.5)) < 1e-13
    assert abs(v - (-0.4567826)) < 1e-7


def test_muntz_small_expansion_is_continuous():
    r, t = 0.5j, 1.0
    m = Muntz(lambda z: g1(z, r, t), _g1_decay(r, t), taylor=g1_taylor(r, t, 30))
    lattice = m.lattice_sum(0.1)[0] - m.integral / 0.1
    assert abs(m.small_expansion(0.1) - lattice) < 1e-12
    assert abs(m(1e-4) - m.small_expansion(1e-4)) == 0.0


def test_g1_taylor_against_function():
    r, t = 0.7, 1.3
    coef = g1_taylor(r, t, 40)
    z = 0.3
    assert abs(np.polyval(coef[::-1], z) - g1(z, r, t)) < 1e-15


def test_muntz_mellin_property():
    # int_0^inf y^{s-1} M(y) dy = zeta(s) * Gamma(s/2)/2 for F = exp(-y^2) at s = 1/2
    from xibessel.verify.checks import _muntz_mellin
    taylor = [(-1.0) ** (j // 2) / math.factorial(j // 2) if j % 2 == 0 else 0.0 for j in range(30)]
    m = Muntz(lambda z: np.exp(-np.asarray(z) ** 2), Decay("gaussian", 1.0), taylor=taylor)
    lhs = _muntz_mellin(m, 0.5, 8.0)
    rhs = (zeta(0.5) * 0.5 * complex_gamma(0.25)).real
    assert abs(lhs - rhs) < 1e-8 * abs(rhs)


def test_muntz_domain():
    m = Muntz(lambda z: np.exp(-np.asarray(z)), Decay("exponential", 1.0))
    with pytest.raises(DomainError):
        m(0.0)
    with pytest.raises(DomainError):
        Muntz(lambda z: z, Decay("algebraic", 1.0))


@pytest.mark.parametrize("r,expected", [(math.pi, -0.5 + 1 / math.pi), (7.0, 0.2910070)])
def test_abel_limit_examples(r, expected):
    lim = abel_limit(lambda t: heat_u(r, t, 1.0))
    assert abs(lim.value - expected) < 1e-4
    assert lim.converged


def test_abel_limit_validates_sequence():
    with pytest.raises(ValueError):
        abel_limit(lambda t: t, [0.1, 0.2, 0.05, 0.01])
    with pytest.raises(ValueError):
        abel_limit(lambda t: t, [0.1, 0.05])


def test_abel_limit_polynomial_family_is_exact():
    lim = abel_limit(lambda t: 2.0 + 3 * t - t ** 2)
    assert abs(lim.value - 2.0) < 1e-12


def test_bvp_closed_form():
    assert abs(bvp_initial_closed_form(math.pi) - (-0.5 + 1 / math.pi)) < 1e-15
    assert abs(bvp_initial_closed_form(7.0) - 0.2910070) < 1e-7
    assert abs(bvp_initial_closed_form(7.0) - (-0.5 + 1 / 7 + 2 / math.sqrt(49 - 4 * math.pi ** 2))) < 1e-15
    with pytest.raises(PoleError):
        bvp_initial_closed_form(2 * math.pi)
    with pytest.raises(DomainError):
        bvp_initial_closed_form(0.0)
