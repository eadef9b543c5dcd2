"""Gaussian-damped lattice sums: theta, H1, the cylindrical heat solution and friends.

Every truncated sum reports a rigorous bound on what it dropped.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from .besselhyp import bessel_j0, j0_scaled, kummer_1f1
from .complexfn import _BERNOULLI
from .errors import ConvergenceError, DomainError, PoleError
from .quadrature import Decay, integrate_semi_infinite

__all__ = [
    "PhysParams",
    "SeriesValue",
    "ThetaConvention",
    "theta_psi",
    "h1",
    "h1_constant",
    "heat_u",
    "Muntz",
    "muntz_transform",
    "g1_taylor",
    "AbelLimit",
    "abel_limit",
    "bvp_initial_closed_form",
]

# exp(-42) ~ 5.7e-19
_GAUSS_CUT = 42.0


@dataclass(frozen=True)
class PhysParams:
    """Shift x, Bessel scale r (real or purely imaginary), width/time t, diffusivity kappa."""

    x: float = 0.0
    r: complex | float = 0.0
    t: float = 1.0
    kappa: float = 1.0

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError("t must be positive")
        if not self.kappa > 0:
            raise DomainError("kappa must be positive")
        r = complex(self.r)
        if r.real != 0 and r.imag != 0:
            raise DomainError("r must be real or purely imaginary")

    @property
    def r2(self) -> float:
        """r**2 as a real number (negative for imaginary r)."""
        r = complex(self.r)
        return r.real * r.real - r.imag * r.imag

    @property
    def w(self) -> float:
        """The Kummer argument -r**2/(4t)."""
        return -self.r2 / (4.0 * self.t)

    def replace(self, **kw) -> "PhysParams":
        return PhysParams(**{**self.__dict__, **kw})


@dataclass(frozen=True)
class SeriesValue:
    value: float | complex
    terms_used: int
    tail_bound: float

    def __post_init__(self):
        if not self.tail_bound >= 0:
            raise ValueError("tail_bound must be non-negative")

    def __float__(self):
        return float(self.value)


class ThetaConvention(enum.Enum):
    PLAIN = "plain"  # sum exp(-n^2 y)
    PI = "pi"  # sum exp(-pi n^2 y)


def _gauss_tail(a: float, b: float, m: int) -> float:
    """Bound on sum_{n >= m} exp(-a n^2 + b n), valid once the terms decrease."""
    if m < b / (2 * a):
        raise ValueError("tail bound requested before the terms decrease")
    head = -a * m * m + b * m
    ratio = math.exp(-a * (2 * m + 1) + b)
    return math.exp(head) / (1.0 - ratio) if head > -745 else 0.0


def _gauss_count(a: float, b: float = 0.0) -> int:
    # smallest N with a N^2 - b N > _GAUSS_CUT
    return int(math.ceil((b + math.sqrt(b * b + 4 * a * _GAUSS_CUT)) / (2 * a))) + 1


def theta_psi(y: float, conv: ThetaConvention = ThetaConvention.PLAIN) -> SeriesValue:
    """psi(y) = sum_{n>=1} exp(-c n^2 y) with c = 1 (PLAIN) or pi (PI)."""
    if not y > 0:
        raise DomainError("theta_psi needs y > 0")
    a = (math.pi if conv is ThetaConvention.PI else 1.0) * y
    n_terms = _gauss_count(a)
    n = np.arange(n_terms, 0, -1, dtype=float)
    value = float(np.exp(-a * n * n).sum())
    return SeriesValue(value, n_terms, _gauss_tail(a, 0.0, n_terms + 1))


def h1_constant(p: PhysParams) -> float:
    """Residue coefficient sqrt(pi)/(2 sqrt t) * 1F1(1/2; 1; -r^2/4t) of H1's 1/y term."""
    return math.sqrt(math.pi) / (2.0 * math.sqrt(p.t)) * kummer_1f1(0.5, p.w).real


def _bessel_sum(y: float, p: PhysParams, scale: float = 1.0):
    """sum_n exp(-t n^2 y^2) J0(r n y) with its truncation bound."""
    a = p.t * y * y
    # |J0(r z)| <= 1 for real r, I0(|r| z) <= exp(|r| z) for imaginary r
    b = math.sqrt(-p.r2) * y if p.r2 < 0 else 0.0
    n_terms = max(_gauss_count(a, b), int(math.ceil(b / (2 * a))) + 2)
    n = np.arange(n_terms, 0, -1, dtype=float)
    terms = np.exp(-a * n * n) * j0_scaled(p.r2, n * y)
    return float(terms.sum()), n_terms, _gauss_tail(a, b, n_terms + 1)


def h1(y: float, p: PhysParams) -> SeriesValue:
    """H1(y) = sum_n exp(-t n^2 y^2) J0(r n y) - C / y.

    C = sqrt(pi)/(2 sqrt t) 1F1(1/2; 1; -r^2/4t) is the residue of the Mellin
    kernel at s = 1, which makes H1 bounded at the origin (H1 -> -1/2).
    """
    if not y > 0:
        raise DomainError("h1 needs y > 0")
    total, n_terms, tail = _bessel_sum(y, p)
    return SeriesValue(total - h1_constant(p) / y, n_terms, tail)


def heat_u(r: float, t: float, kappa: float = 1.0) -> SeriesValue:
    """u(r, t) = sum_{n>=1} J0(n r) exp(-n^2 kappa t), a solution of the cylindrical heat equation."""
    if not t > 0:
        raise DomainError("heat_u needs t > 0; use abel_limit for t -> 0")
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    a = kappa * t
    n_terms = _gauss_count(a)
    n = np.arange(n_terms, 0, -1, dtype=float)
    value = float((bessel_j0(n * r) * np.exp(-a * n * n)).sum())
    return SeriesValue(value, n_terms, _gauss_tail(a, 0.0, n_terms + 1))


def g1_taylor(r, t: float, order: int = 40) -> np.ndarray:
    """Taylor coefficients of z -> g1(z, r, t) at z = 0, up to z**order."""
    q = -(complex(r) ** 2).real / t  # g1 = e^{-z^2} z J0(sqrt(q) z)
    half = order // 2 + 1
    gauss = np.array([(-1.0) ** j / math.factorial(j) for j in range(half)])
    bess = np.array([(-q / 4.0) ** m / math.factorial(m) ** 2 for m in range(half)])
    even = np.convolve(gauss, bess)[:half]
    coef = np.zeros(order + 1)
    odd_idx = np.arange(half) * 2 + 1
    keep = odd_idx <= order
    coef[odd_idx[keep]] = even[keep]
    return coef


class Muntz:
    """The transform y -> sum_{n>=1} F(n y) - (1/y) * integral_0^inf F.

    ``decay`` certifies how F vanishes at infinity and drives both the
    truncation of the lattice sum and the quadrature of the integral, which is
    computed once and cached. With ``taylor`` (coefficients of F at 0) small
    arguments are handled by the Euler-Maclaurin expansion
    -F(0)/2 - sum_k B_2k/(2k) F_{2k-1} y^(2k-1) instead of a huge direct sum.
    """

    small_y = 0.1

    def __init__(self, F: Callable, decay: Decay, *, quad_tol: float = 1e-13,
                 taylor: Optional[Sequence[float]] = None, vectorized: bool = True):
        if decay.kind == "algebraic" and decay.rate <= 1:
            raise DomainError("Muntz transform needs decay faster than 1/y")
        self.F = F
        self.decay = decay
        self.quad_tol = quad_tol
        self.taylor = None if taylor is None else np.asarray(taylor, dtype=float)
        self.vectorized = vectorized

    @cached_property
    def integral(self) -> float:
        res = integrate_semi_infinite(self.F, 0.0, self.quad_tol, self.decay,
                                      vectorized=self.vectorized)
        if not res.converged:
            raise ConvergenceError("integral of F did not converge", context="muntz integral")
        return float(np.real(res.value))

    def _eval_F(self, z):
        if self.vectorized:
            return np.asarray(self.F(z), dtype=float)
        return np.array([self.F(float(v)) for v in z])

    def lattice_sum(self, y: float):
        """sum_{n>=1} F(n y) and the certified size of the dropped tail."""
        d = self.decay
        cut = d.cutoff_for(1e-18 * y, 0.0)
        n_terms = int(math.ceil(max(cut, d.start) / y)) + 1
        if n_terms > 2_000_000:
            raise ConvergenceError(f"Muntz lattice sum needs {n_terms} terms at y = {y}",
                                   context="muntz sum")
        n = np.arange(n_terms, 0, -1, dtype=float)
        total = float(self._eval_F(n * y).sum())
        # sum_{n > N} |F(n y)| <= (1/y) int_{N y}^inf |F| + |F(N y)| for decreasing envelopes
        tail = d.bound_beyond(n_terms * y) / y
        return total, n_terms, tail

    def small_expansion(self, y: float) -> float:
        a = self.taylor
        value = -0.5 * a[0]
        for k, bern in enumerate(_BERNOULLI, start=1):
            j = 2 * k - 1
            if j >= len(a):
                break
            value -= bern / (2 * k) * a[j] * y ** j
        return value

    def __call__(self, y: float) -> float:
        if not y > 0:
            raise DomainError("Muntz transform needs y > 0")
        if self.taylor is not None and y < self.small_y:
            return self.small_expansion(y)
        total, _, _ = self.lattice_sum(y)
        return total - self.integral / y

    def vector(self, ys) -> np.ndarray:
        return np.array([self(float(v)) for v in np.atleast_1d(ys)])


def muntz_transform(F: Callable, y: float, quad_tol: float = 1e-13,
                    decay: Decay = Decay("gaussian", 1.0)) -> float:
    """One-off Muntz transform of F at y; build a :class:`Muntz` to reuse the integral."""
    return Muntz(F, decay, quad_tol=quad_tol)(y)


@dataclass(frozen=True)
class AbelLimit:
    value: float
    err_estimate: float
    converged: bool


def abel_limit(family: Callable[[float], SeriesValue | float],
               t_seq: Optional[Sequence[float]] = None) -> AbelLimit:
    """Limit t -> 0+ of family(t) by Richardson extrapolation in powers of t.

    Every extrapolation order and window of trailing points is formed; the
    estimate whose neighbour (one order lower) it agrees with best wins. The
    error estimate is that disagreement.
    """
    if t_seq is None:
        t_seq = [0.1 * 0.5 ** k for k in range(8)]
    ts = [float(t) for t in t_seq]
    if len(ts) < 4:
        raise ValueError("abel_limit needs at least 4 points")
    if any(b >= a for a, b in zip(ts, ts[1:])) or ts[-1] <= 0:
        raise ValueError("t_seq must decrease strictly towards 0")
    vals = [float(getattr(family(t), "value", family(t))) for t in ts]
    n = len(ts)
    # Neville table: table[j][i] uses points i..i+j
    table = [vals[:]]
    for j in range(1, n):
        prev = table[-1]
        row = []
        for i in range(n - j):
            t_lo, t_hi = ts[i], ts[i + j]
            row.append((t_lo * prev[i + 1] - t_hi * prev[i]) / (t_lo - t_hi))
        table.append(row)
    best, best_err = vals[-1], abs(vals[-1] - vals[-2])
    for j in range(1, n):
        # estimate from the last j+1 points vs the same order on the previous window
        cur = table[j][-1]
        lower = table[j - 1][-1]
        err = abs(cur - lower)
        if len(table[j]) > 1:
            err = max(err, abs(cur - table[j][-2]))
        if err < best_err:
            best, best_err = cur, err
    diffs = [abs(table[j][-1] - table[j - 1][-1]) for j in range(1, n)]
    contracting = min(diffs[1:]) < diffs[0]
    return AbelLimit(best, best_err, bool(contracting))


def bvp_initial_closed_form(r: float) -> float:
    """-1/2 + 1/r + 2 sum_{m=1}^{n} (r^2 - 4 m^2 pi^2)^(-1/2) with n = floor(r / 2pi)."""
    if not r > 0:
        raise DomainError("bvp_initial_closed_form needs r > 0")
    n = int(math.floor(r / (2 * math.pi)))
    if n >= 1 and r - 2 * math.pi * n < 1e-12 * r:
        raise PoleError(f"closed form has a pole at r = 2*pi*{n}")
    total = -0.5 + 1.0 / r
    for m in range(1, n + 1):
        total += 2.0 / math.sqrt(r * r - 4 * m * m * math.pi * math.pi)
    return total
