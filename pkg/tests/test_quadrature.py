import math

import numpy as np
import pytest

from xibessel.complexfn import Xi, complex_gamma
from xibessel.errors import ConvergenceError, DomainError
from xibessel.quadrature import (
    ContourSpec,
    Decay,
    QuadResult,
    contour_spec_for,
    integrate_finite,
    integrate_oscillatory_cos,
    integrate_semi_infinite,
    mellin_forward,
    mellin_inverse_contour,
    wynn_epsilon,
)
from xibessel.series import ThetaConvention, theta_psi


def test_finite_basics():
    res = integrate_finite(lambda y: y * y, 0, 1, 1e-12)
    assert isinstance(res, QuadResult) and res.converged
    assert abs(res.value - 1 / 3) < 1e-14
    assert abs(integrate_finite(math.sin, 0, math.pi, 1e-12).value - 2) < 1e-13


def test_finite_endpoint_singularity():
    res = integrate_finite(lambda y: 1 / math.sqrt(y - 1) if y > 1 else 0.0, 1, 2, 1e-11, singular_left=True)
    assert abs(res.value - 2) < 1e-10
    res = integrate_finite(lambda y: 1 / math.sqrt(1 - y) if y < 1 else 0.0, 0, 1, 1e-11, singular_right=True)
    assert abs(res.value - 2) < 1e-10


def test_finite_vectorized_matches_scalar():
    a = integrate_finite(np.cos, 0, 3, 1e-12, vectorized=True).value
    b = integrate_finite(math.cos, 0, 3, 1e-12).value
    assert abs(a - b) < 1e-14 and abs(a - math.sin(3)) < 1e-14


def test_finite_strict_raises_on_failure():
    with pytest.raises(ConvergenceError):
        integrate_finite(lambda y: math.sin(1 / y) / y if y else 0.0, 0, 1, 1e-14, max_depth=4, strict=True)


def test_semi_infinite_gaussian():
    res = integrate_semi_infinite(lambda y: math.exp(-y * y), 0, 1e-12, Decay("gaussian", 1.0))
    assert abs(res.value - math.sqrt(math.pi) / 2) < 1e-12


def test_semi_infinite_algebraic_with_tail():
    # int_0^inf dy/(1+y)^2 = 1 with the exact tail 1/(1+Y)
    decay = Decay("algebraic", 2.0, tail=lambda Y: 1 / (1 + Y), cutoff=50.0)
    res = integrate_semi_infinite(lambda y: 1 / (1 + y) ** 2, 0, 1e-12, decay)
    assert abs(res.value - 1) < 1e-12


def test_decay_validation():
    with pytest.raises(ValueError):
        Decay("polynomial", 1.0)
    with pytest.raises(ValueError):
        Decay("gaussian", 0.0)
    with pytest.raises(DomainError):
        Decay("algebraic", 1.0).cutoff_for(1e-8, 0.0)
    d = Decay("exponential", 2.0)
    y = d.cutoff_for(1e-10, 0.0)
    assert d.bound_beyond(y) <= 1e-10


def test_oscillatory_closed_forms():
    env = Decay("algebraic", 2.0)
    res = integrate_oscillatory_cos(lambda y: 1 / (y * y + 0.25), 1.0, 1e-10, env)
    assert abs(res.value - math.pi * math.exp(-0.5)) < 1e-9
    res = integrate_oscillatory_cos(lambda y: math.exp(-y * y), 2.0, 1e-12, Decay("gaussian", 1.0))
    assert abs(res.value - math.sqrt(math.pi) / 2 * math.exp(-1)) < 1e-12


def test_oscillatory_xi_pi_convention():
    # int_0^inf Xi(y)/(y^2+1/4) dy = (pi/2)(1 - 2 psi_pi(1))
    res = integrate_oscillatory_cos(lambda y: Xi(y) / (y * y + 0.25), 0.0, 1e-11,
                                    Decay("exponential", 0.7, const=10.0))
    expected = 0.5 * math.pi * (1 - 2 * theta_psi(1.0, ThetaConvention.PI).value)
    assert abs(res.value - expected) < 1e-9 * expected
    assert abs(res.value - 1.43502484283382) < 1e-11


def test_wynn_epsilon_accelerates_alternating_series():
    partial = np.cumsum([(-1) ** k / (k + 1) for k in range(20)])
    assert abs(partial[-1] - math.log(2)) > 1e-2
    est, err = wynn_epsilon(list(partial))
    assert abs(est - math.log(2)) < 1e-12
    assert err < 1e-10


def test_mellin_forward_examples():
    # Mellin of e^{-y} is Gamma(s); of exp(-y^2) is Gamma(s/2)/2
    for s in (0.5, 1.7, 2 + 3j):
        got = mellin_forward(lambda y: np.exp(-np.asarray(y)), s, 1e-12, Decay("exponential", 1.0),
                             vectorized=True).value
        assert abs(got - complex_gamma(s)) < 1e-11 * abs(complex_gamma(s))
        got = mellin_forward(lambda y: math.exp(-y * y), s, 1e-12, Decay("gaussian", 1.0)).value
        assert abs(got - 0.5 * complex_gamma(0.5 * s)) < 1e-11 * abs(complex_gamma(0.5 * s))


def test_contour_spec_validation():
    with pytest.raises(ValueError):
        ContourSpec(0.5, 10.0, 2.0)
    with pytest.raises(ValueError):
        ContourSpec(0.5, -1.0, 0.01)
    spec = contour_spec_for(1e-12, 1.0, 0.5)
    assert spec.h <= spec.T / 10


def test_cahen_mellin():
    spec = contour_spec_for(1e-13, 1.0, 1.0)
    res = mellin_inverse_contour(complex_gamma, spec, 1.0, 1e-12)
    assert abs(res.value - math.exp(-1)) < 1e-11
    res = mellin_inverse_contour(complex_gamma, contour_spec_for(1e-13, 2.5, 1.0), 2.5, 1e-12)
    assert abs(res.value - math.exp(-2.5)) < 1e-11


def test_contour_algebraic_regimes():
    spec = ContourSpec(1.0, 10.0, 1.0)
    res = mellin_inverse_contour(lambda s: complex_gamma(s) / complex_gamma(s + 0.5), spec, 0.5, 1e-11,
                                 decay="algebraic")
    assert abs(res.value - math.sqrt(2 / math.pi)) < 1e-10
    res = mellin_inverse_contour(lambda s: complex_gamma(s) / complex_gamma(s + 1), spec, 2.0, 1e-11,
                                 decay="algebraic")
    assert abs(res.value) < 1e-10


def test_contour_rejects_bad_decay_kind():
    with pytest.raises(ValueError):
        mellin_inverse_contour(complex_gamma, ContourSpec(1.0, 10.0, 0.5), 1.0, 1e-10, decay="gaussian")
