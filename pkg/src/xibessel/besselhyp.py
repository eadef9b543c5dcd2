"""Bessel J0/J1, modified I0, Kummer 1F1(a; b; w) and the Gaussian-Bessel kernel g1.

The Bessel routines accept floats or numpy arrays; 1F1 is scalar.
"""
from __future__ import annotations

import cmath
import decimal
import math

import numpy as np

from .complexfn import DEFAULT_REQUEST, EvalRequest
from .errors import ConvergenceError, DomainError

__all__ = [
    "bessel_j",
    "bessel_j0",
    "bessel_j1",
    "bessel_i0",
    "j0_scaled",
    "kummer_1f1",
    "g1",
    "j0_asymptotic_pair",
]

SERIES_MAX = 2.0
HANKEL_MIN = 25.0
_SERIES_TERMS = 48
_TRAP_NODES = 64
_I0_SERIES_MAX = 30.0
_I0_MAX = 700.0


def _j_series(x, v):
    q = -0.25 * x * x
    term = np.ones_like(x) if v == 0 else 0.5 * x
    total = term.copy()
    for n in range(1, _SERIES_TERMS):
        term = term * q / (n * (n + v))
        total += term
    return total


def _j_trapezoid(x, v):
    # J_v(x) = (1/2pi) int_0^2pi cos(v th - x sin th) dth; the periodic trapezoid
    # rule is exact up to terms of size J_{M-v}(x), negligible for x < HANKEL_MIN
    theta = (np.arange(_TRAP_NODES) + 0.5) * (2.0 * math.pi / _TRAP_NODES)
    arg = v * theta[None, :] - x[:, None] * np.sin(theta)[None, :]
    return np.cos(arg).mean(axis=1)


def _j_hankel(x, v):
    # large-argument expansion J_v(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi)
    mu = 4.0 * v * v
    ax = np.abs(x)
    p = np.ones_like(ax)
    q = np.zeros_like(ax)
    term = np.ones_like(ax)
    for k in range(1, 30):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * ax)
        if k % 2:
            q += term if (k // 2) % 2 == 0 else -term
        else:
            p += -term if (k // 2) % 2 else term
        if np.all(np.abs(term) < 1e-17):
            break
    chi = ax - (0.5 * v + 0.25) * math.pi
    out = np.sqrt(2.0 / (math.pi * ax)) * (p * np.cos(chi) - q * np.sin(chi))
    if v == 1:
        out = np.where(x < 0, -out, out)
    return out


def bessel_j(v: int, x):
    """Bessel function of the first kind J_v(x) for v in {0, 1}.

    Power series for |x| <= 2, Bessel's integral on a periodic trapezoid grid
    for 2 < |x| < 25 and the Hankel expansion beyond.
    """
    if v not in (0, 1):
        raise DomainError(f"bessel order must be 0 or 1, got {v!r}")
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    ax = np.abs(xa)
    out = np.empty_like(xa)
    low = ax <= SERIES_MAX
    high = ax >= HANKEL_MIN
    mid = ~(low | high)
    if low.any():
        out[low] = _j_series(xa[low], v)
    if mid.any():
        out[mid] = _j_trapezoid(xa[mid], v)
    if high.any():
        out[high] = _j_hankel(xa[high], v)
    return float(out[0]) if scalar else out


def bessel_j0(x):
    return bessel_j(0, x)


def bessel_j1(x):
    return bessel_j(1, x)


def bessel_i0(x):
    """Modified Bessel function I0(x); OverflowError for |x| > 700."""
    scalar = np.ndim(x) == 0
    xa = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
    if np.any(xa > _I0_MAX):
        raise OverflowError("bessel_i0 argument beyond |x| = 700")
    out = np.empty_like(xa)
    low = xa <= _I0_SERIES_MAX
    if low.any():
        xl = xa[low]
        q = 0.25 * xl * xl
        term = np.ones_like(xl)
        total = term.copy()
        n = 1
        while True:
            term = term * q / (n * n)
            total += term
            if np.all(term <= 1e-17 * total):
                break
            n += 1
        out[low] = total
    if (~low).any():
        xh = xa[~low]
        term = np.ones_like(xh)
        total = term.copy()
        for k in range(1, 40):
            term = term * (2 * k - 1) ** 2 / (k * 8.0 * xh)
            total += term
            if np.all(term < 1e-17 * total):
                break
        out[~low] = np.exp(xh) / np.sqrt(2.0 * math.pi * xh) * total
    return float(out[0]) if scalar else out


def j0_scaled(r2, z):
    """J0(r z) expressed through r**2, so that imaginary r gives I0(|r| z).

    ``r2`` must be real; negative values mean r is purely imaginary.
    """
    r2 = float(r2)
    if r2 >= 0.0:
        return bessel_j0(math.sqrt(r2) * np.asarray(z, dtype=float))
    return bessel_i0(math.sqrt(-r2) * np.asarray(z, dtype=float))


def _taylor_1f1(a: complex, b: float, w: complex, req: EvalRequest):
    """Taylor sum of 1F1; returns (value, largest term magnitude)."""
    term = 1.0 + 0j
    total = 1.0 + 0j
    biggest = 1.0
    small = 0
    for n in range(req.max_terms):
        term *= (a + n) * w / ((b + n) * (n + 1))
        total += term
        biggest = max(biggest, abs(term))
        if abs(term) < req.target_rel_tol * 1e-2 * abs(total) or term == 0:
            small += 1
            if small == 3:
                return total, biggest
        else:
            small = 0
    raise ConvergenceError(
        f"1F1({a}; {b}; {w}) not converged in {req.max_terms} terms", context="kummer_1f1"
    )


def _taylor_1f1_guarded(a: complex, b: int, w: complex, digits: int, req: EvalRequest) -> complex:
    # same series in decimal arithmetic; inputs are exact binary floats
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        D = decimal.Decimal
        ar, ai, wr, wi = D(a.real), D(a.imag), D(w.real), D(w.imag)
        tr, ti = D(1), D(0)
        sr, si = D(1), D(0)
        eps = D(10) ** (-(digits - 2))
        small = 0
        for n in range(req.max_terms):
            pr, pi_ = ar + n, ai
            # (a + n) * w
            qr, qi = pr * wr - pi_ * wi, pr * wi + pi_ * wr
            den = D((b + n) * (n + 1))
            tr, ti = (tr * qr - ti * qi) / den, (tr * qi + ti * qr) / den
            sr += tr
            si += ti
            if abs(tr) + abs(ti) <= eps * (abs(sr) + abs(si)):
                small += 1
                if small == 3:
                    return complex(float(sr), float(si))
            else:
                small = 0
    raise ConvergenceError(
        f"1F1({a}; {b}; {w}) not converged in {req.max_terms} terms", context="kummer_1f1"
    )


def _sum_1f1(a: complex, b: int, w: complex, req: EvalRequest) -> complex:
    value, biggest = _taylor_1f1(a, b, w, req)
    # digits lost to cancellation: log10(largest term / result)
    lost = math.log10(biggest / abs(value)) if value != 0 else 300.0
    if 10.0 ** lost * 2.2e-16 <= req.target_rel_tol * 0.1:
        return value
    digits = 30 + int(lost)
    for _ in range(4):
        guarded = _taylor_1f1_guarded(a, b, w, digits, req)
        lost_now = math.log10(biggest / abs(guarded)) if guarded != 0 else digits
        if lost_now + 20 <= digits:
            return guarded
        digits = 30 + int(lost_now)
    return guarded


def kummer_1f1(a, w, req: EvalRequest = DEFAULT_REQUEST, b: int = 1) -> complex:
    """Confluent hypergeometric 1F1(a; b; w), default b = 1.

    Taylor summation; for Re w < 0 the Kummer transformation
    1F1(a; b; w) = e^w 1F1(b - a; b; -w) is applied first. When the terms
    cancel by more than the tolerance allows, the sum is redone in decimal
    arithmetic with enough guard digits.
    """
    a = complex(a)
    w = complex(w)
    if b <= 0 or b != int(b):
        raise DomainError("only positive integer b is supported")
    if w == 0:
        return 1.0 + 0j
    if w.real < 0.0:
        return cmath.exp(w) * _sum_1f1(b - a, b, -w, req)
    return _sum_1f1(a, b, w, req)


def g1(z, r, t: float):
    """Kernel e^{-z^2} z J0(2 sqrt(-r^2/(4t)) z) with the principal square root.

    Real r gives e^{-z^2} z I0(r z / sqrt t); purely imaginary r = i rho gives
    e^{-z^2} z J0(rho z / sqrt t). Accepts scalar or array z.
    """
    if not t > 0:
        raise DomainError("g1 needs t > 0")
    r2 = complex(r) ** 2
    if abs(r2.imag) > 1e-14 * max(abs(r2), 1.0):
        raise DomainError("r must be real or purely imaginary")
    z = np.asarray(z, dtype=float)
    # J0(i*r*z/sqrt t) = I0(r z/sqrt t): the kernel is J0 evaluated at scale^2 = -r^2/t
    out = np.exp(-z * z) * z * j0_scaled(-r2.real / t, z)
    return float(out) if out.ndim == 0 else out


def j0_asymptotic_pair(r: float) -> float:
    """Large-argument surrogate (cos r + sin r)/sqrt(pi r) for J0(r)."""
    if not r > 0:
        raise DomainError("j0_asymptotic_pair needs r > 0")
    return (math.cos(r) + math.sin(r)) / math.sqrt(math.pi * r)
