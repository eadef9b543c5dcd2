"""Adaptive quadrature: finite panels, semi-infinite ranges, cosine kernels and Mellin pairs.

Integrands are plain callables. Pass ``vectorized=True`` when ``f`` accepts a
numpy array of abscissae; otherwise it is called once per node.
"""
from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadResult",
    "Decay",
    "ContourSpec",
    "integrate_finite",
    "integrate_semi_infinite",
    "integrate_oscillatory_cos",
    "mellin_forward",
    "mellin_inverse_contour",
    "contour_spec_for",
    "wynn_epsilon",
]


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    err_estimate: float
    evals: int
    converged: bool

    def __post_init__(self):
        if not self.err_estimate >= 0:
            raise ValueError("err_estimate must be non-negative")


@dataclass(frozen=True)
class Decay:
    """Certificate for how an integrand dies off at infinity.

    kind is one of:
      * ``"gaussian"``: |f(y)| <= const * exp(-rate * y**2) for y >= start
      * ``"exponential"``: |f(y)| <= const * exp(-rate * y) for y >= start
      * ``"algebraic"``: |f(y)| <= const * y**(-rate) for y >= start, rate > 1

    ``tail``, if given, is the exact (or leading-order) value of the integral
    from Y to infinity, valid once Y >= ``cutoff``; ``tail_error`` bounds what
    the tail formula leaves out.
    """

    kind: str
    rate: float
    const: float = 1.0
    start: float = 0.0
    tail: Optional[Callable[[float], complex]] = None
    cutoff: Optional[float] = None
    tail_error: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.kind not in ("gaussian", "exponential", "algebraic"):
            raise ValueError(f"unknown decay kind {self.kind!r}")
        if not self.rate > 0:
            raise ValueError("decay rate must be positive")

    def bound_beyond(self, y: float) -> float:
        """Upper bound on the integral of |f| over [y, inf)."""
        c, lam = self.const, self.rate
        if self.kind == "gaussian":
            return c * math.exp(-lam * y * y) / (2.0 * lam * y)
        if self.kind == "exponential":
            return c * math.exp(-lam * y) / lam
        if lam <= 1:
            return math.inf
        return c * y ** (1.0 - lam) / (lam - 1.0)

    def cutoff_for(self, tol: float, lo: float) -> float:
        y = max(lo, self.start, 1.0)
        if self.kind == "algebraic" and self.rate <= 1:
            raise DomainError("algebraic decay needs exponent > 1 without an analytic tail")
        while self.bound_beyond(y) > tol:
            y *= 1.25
            if y > 1e9:
                raise ConvergenceError("decay certificate needs an impractical cutoff")
        return y


@dataclass(frozen=True)
class ContourSpec:
    """Vertical line Re s = c, truncated at |Im s| <= T, trapezoid spacing h."""

    c: float
    T: float
    h: float

    def __post_init__(self):
        if not (self.T > 0 and self.h > 0):
            raise ValueError("T and h must be positive")
        if self.h > self.T / 10:
            raise ValueError("h must not exceed T/10")


# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (1, 3, 5 from each side, plus the centre)
_GAUSS[[1, 3, 5]] = _WG[:3]
_GAUSS[[13, 11, 9]] = _WG[:3]
_GAUSS[7] = _WG[3]


def _eval(f, xs, vectorized):
    if vectorized:
        return np.asarray(f(xs))
    return np.array([f(float(x)) for x in xs])


def _gk15(f, a, b, vectorized):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = _eval(f, mid + half * _NODES, vectorized)
    k = half * np.dot(_KRONROD, fx)
    g = half * np.dot(_GAUSS, fx)
    return k, abs(k - g)


def _adaptive(f, a, b, tol, rel_tol, vectorized, max_depth, breakpoints=()):
    edges = sorted({a, b, *[p for p in breakpoints if a < p < b]})
    heap = []
    total = 0.0
    err = 0.0
    evals = 0
    order = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, e = _gk15(f, lo, hi, vectorized)
        evals += 15
        total += val
        err += e
        heapq.heappush(heap, (-e, order, lo, hi, val, 0))
        order += 1
    while heap:
        if err <= max(tol, rel_tol * abs(total)):
            return total, err, evals, True
        neg_e, _, lo, hi, val, depth = heapq.heappop(heap)
        if depth >= max_depth:
            heapq.heappush(heap, (neg_e, order, lo, hi, val, depth))
            return total, err, evals, False
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid, vectorized)
        v2, e2 = _gk15(f, mid, hi, vectorized)
        evals += 30
        total += v1 + v2 - val
        err += e1 + e2 + neg_e
        for piece in ((lo, mid, v1, e1), (mid, hi, v2, e2)):
            heapq.heappush(heap, (-piece[3], order, piece[0], piece[1], piece[2], depth + 1))
            order += 1
    return total, err, evals, err <= tol


def _as_scalar(v):
    v = complex(v)
    return v.real if v.imag == 0 else v


def integrate_finite(
    f,
    a: float,
    b: float,
    tol: float = 1e-10,
    *,
    rel_tol: float = 0.0,
    singular_left: bool = False,
    singular_right: bool = False,
    vectorized: bool = False,
    max_depth: int = 40,
    breakpoints=(),
    strict: bool = False,
) -> QuadResult:
    """Adaptive Gauss-Kronrod (7/15) integral of f over [a, b].

    Endpoints flagged singular are treated with the substitution y = a + u**2
    (or y = b - u**2), which removes (y - a)**(-1/2) singularities. With
    ``strict`` a non-converged result raises ConvergenceError.
    """
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    lo, hi = a, b
    pts = list(breakpoints)
    if singular_left and singular_right:
        m = 0.5 * (a + b)
        left = integrate_finite(f, a, m, 0.5 * tol, rel_tol=rel_tol, singular_left=True,
                                vectorized=vectorized, max_depth=max_depth,
                                breakpoints=[p for p in pts if p < m])
        right = integrate_finite(f, m, b, 0.5 * tol, rel_tol=rel_tol, singular_right=True,
                                 vectorized=vectorized, max_depth=max_depth,
                                 breakpoints=[p for p in pts if p > m])
        res = QuadResult(_as_scalar(left.value + right.value), left.err_estimate + right.err_estimate,
                         left.evals + right.evals, left.converged and right.converged)
        if strict and not res.converged:
            raise ConvergenceError("finite integral did not converge", context=f"[{a}, {b}]")
        return res
    if singular_left:
        def g(u, f=f):
            return 2.0 * u * _call(f, a + u * u, vectorized)
        lo, hi = 0.0, math.sqrt(b - a)
        pts = [math.sqrt(p - a) for p in pts if a < p < b]
    elif singular_right:
        def g(u, f=f):
            return 2.0 * u * _call(f, b - u * u, vectorized)
        lo, hi = 0.0, math.sqrt(b - a)
        pts = [math.sqrt(b - p) for p in pts if a < p < b]
    else:
        g = f
    total, err, evals, ok = _adaptive(g, lo, hi, tol, rel_tol, vectorized, max_depth, pts)
    if strict and not ok:
        raise ConvergenceError("finite integral did not converge", context=f"[{a}, {b}]")
    return QuadResult(_as_scalar(total), float(err), evals, bool(ok))


def _call(f, x, vectorized):
    if vectorized:
        return np.asarray(f(x))
    if np.ndim(x):
        return np.array([f(float(v)) for v in x])
    return f(x)


def _geometric_breaks(a: float, b: float):
    # panel edges a+1, a+2, a+4, ... help the adaptive rule on long ranges
    pts = []
    step = 1.0
    while a + step < b:
        pts.append(a + step)
        step *= 2.0
    return pts


def integrate_semi_infinite(
    f,
    a: float,
    tol: float = 1e-10,
    decay: Decay = Decay("exponential", 1.0),
    *,
    rel_tol: float = 0.0,
    singular_left: bool = False,
    vectorized: bool = False,
    breakpoints=(),
    strict: bool = False,
) -> QuadResult:
    """Integral of f over [a, inf) using a decay certificate for the tail.

    Without an analytic tail the range is cut where the certified tail drops
    below tol/2. With ``decay.tail`` the cut sits at ``decay.cutoff`` and the
    tail formula is added.
    """
    if decay.tail is not None:
        if decay.cutoff is None:
            raise DomainError("an analytic tail needs a cutoff")
        cut = max(decay.cutoff, a + 1e-12)
        tail = decay.tail(cut)
        tail_err = decay.tail_error(cut) if decay.tail_error else 0.0
    else:
        cut = decay.cutoff_for(0.5 * tol, a)
        tail = 0.0
        tail_err = decay.bound_beyond(cut)
    body = integrate_finite(
        f, a, cut, max(0.5 * tol - tail_err, 0.25 * tol), rel_tol=rel_tol,
        singular_left=singular_left, vectorized=vectorized,
        breakpoints=list(breakpoints) + _geometric_breaks(a, cut),
    )
    res = QuadResult(_as_scalar(body.value + tail), body.err_estimate + tail_err, body.evals,
                     body.converged and body.err_estimate + tail_err <= tol)
    if strict and not res.converged:
        raise ConvergenceError("semi-infinite integral did not converge", context=f"[{a}, inf)")
    return res


def wynn_epsilon(partial_sums):
    """Wynn's epsilon extrapolation of a sequence of partial sums.

    Returns (estimate, error estimate); the error is the distance between the
    last two even-column estimates.
    """
    s = [complex(v) for v in partial_sums]
    n = len(s)
    if n < 3:
        return s[-1], abs(s[-1] - s[-2]) if n == 2 else math.inf
    prev = [0j] * (n + 1)
    cur = list(s)
    estimates = [s[-1]]
    for k in range(1, n):
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0:
                nxt.append(complex(1e300))
            else:
                nxt.append(prev[i + 1] + 1.0 / d)
        prev, cur = cur, nxt
        if k % 2 == 0 and cur:
            estimates.append(cur[-1])
        if len(cur) < 2:
            break
    if len(estimates) < 2:
        return estimates[-1], abs(s[-1] - s[-2])
    return estimates[-1], abs(estimates[-1] - estimates[-2])


def _oscillatory_panels(h, period, tol, first=0.0, max_panels=400, min_panels=12):
    """Sum panel integrals of h over [first + k*period, first + (k+1)*period], extrapolated."""
    partial = []
    total = 0.0
    evals = 0
    lo = first
    best, best_err = None, math.inf
    for k in range(max_panels):
        piece = integrate_finite(h, lo, lo + period, 0.05 * tol)
        evals += piece.evals
        total += piece.value
        partial.append(total)
        lo += period
        if k + 1 >= min_panels and (k + 1) % 2 == 0:
            window = partial[-min(len(partial), 24):]
            est, est_err = wynn_epsilon(window)
            if est_err < best_err:
                best, best_err = est, est_err
            if est_err <= 0.5 * tol:
                break
    return best, best_err, evals


def integrate_oscillatory_cos(
    g,
    x: float,
    tol: float = 1e-10,
    envelope: Decay = Decay("exponential", math.pi / 4),
    *,
    vectorized: bool = False,
) -> QuadResult:
    """Integral of g(y) cos(x y) over [0, inf).

    Only |x| matters. Fast envelopes (exponential or Gaussian) are truncated
    where the certified tail is negligible and integrated panel by panel
    between cosine zeros; algebraic envelopes use the panel sums with Wynn
    epsilon acceleration.
    """
    x = abs(float(x))
    if x == 0.0:
        return integrate_semi_infinite(g, 0.0, tol, envelope, vectorized=vectorized)

    def h(y):
        return _call(g, y, vectorized) * np.cos(x * np.asarray(y))

    period = math.pi / x
    first_zero = 0.5 * period
    if envelope.kind in ("gaussian", "exponential"):
        cut = envelope.cutoff_for(0.5 * tol, 0.0)
        pts = list(np.arange(first_zero, cut, period))
        if len(pts) > 2000:
            pts = list(np.linspace(0.0, cut, 2001)[1:-1])
        body = integrate_finite(h, 0.0, cut, 0.5 * tol, vectorized=True, breakpoints=pts)
        err = body.err_estimate + envelope.bound_beyond(cut)
        return QuadResult(body.value, err, body.evals, body.converged and err <= tol)
    head = integrate_finite(h, 0.0, first_zero, 0.1 * tol, vectorized=True)
    rest, rest_err, evals = _oscillatory_panels(
        lambda y: h(y), period, tol, first=first_zero
    )
    err = head.err_estimate + rest_err
    return QuadResult(_as_scalar(head.value + rest), err, head.evals + evals, err <= tol)


def mellin_forward(
    f,
    s,
    tol: float = 1e-10,
    decay: Decay = Decay("exponential", 1.0),
    *,
    near_zero_bound: float = 1.0,
    lower_cut: Optional[float] = None,
    lower_value: complex = 0.0,
    vectorized: bool = False,
) -> QuadResult:
    """Numeric Mellin transform: integral of f(y) y^(s-1) over (0, inf).

    Integrated in log variables y = e^v. Near zero either |f| <= near_zero_bound
    is used to pick a negligible cut, or the caller supplies ``lower_cut`` with
    ``lower_value`` = the integral over (0, lower_cut) computed analytically.
    ``decay`` describes f itself; its ``tail`` (if any) must already include
    the y^(s-1) weight.
    """
    s = complex(s)
    sigma = s.real
    if lower_cut is None:
        if sigma <= 0:
            raise DomainError(f"Mellin integral diverges at 0 for Re s = {sigma}")
        # bound * y_lo^sigma / sigma <= tol / 1000; cheap in log variables
        y_lo = (1e-3 * tol * sigma / near_zero_bound) ** (1.0 / sigma)
        y_lo = max(y_lo, 1e-300)
        head_err = 1e-3 * tol
    else:
        y_lo = lower_cut
        head_err = 0.0
    if decay.tail is not None:
        y_hi = decay.cutoff
        tail = decay.tail(y_hi)
        tail_err = decay.tail_error(y_hi) if decay.tail_error else 0.0
    else:
        if decay.kind == "algebraic" and decay.rate + 1 - sigma <= 1:
            raise DomainError(f"Mellin integral diverges at infinity for Re s = {sigma}")
        weighted = Decay(decay.kind, decay.rate - (sigma - 1) if decay.kind == "algebraic" else decay.rate,
                         decay.const, decay.start)
        y_hi = max(weighted.cutoff_for(1e-3 * tol, 1.0), 1.0)
        if decay.kind != "algebraic":
            # y^(sigma-1) grows at most polynomially; add a safety margin
            y_hi *= 1.0 + max(sigma, 0.0) * 0.5
        tail = 0.0
        tail_err = 1e-3 * tol
    v_lo, v_hi = math.log(y_lo), math.log(y_hi)

    def h(v):
        v = np.asarray(v, dtype=float)
        y = np.exp(v)
        return _call(f, y, vectorized) * np.exp(s * v)

    pts = list(np.arange(math.ceil(v_lo), v_hi, 2.0))
    body = integrate_finite(h, v_lo, v_hi, 0.25 * tol, vectorized=True, breakpoints=pts)
    value = body.value + tail + lower_value
    err = body.err_estimate + tail_err + head_err
    return QuadResult(_as_scalar(value), err, body.evals, body.converged and err <= tol)


def contour_spec_for(tol: float, y: float, c: float, decay_rate: float = math.pi / 4,
                     scale: float = 1.0) -> ContourSpec:
    """Truncation height and spacing for a kernel decaying like scale * e^(-decay_rate |tau|)."""
    T = max(10.0, math.log(10.0 * scale * max(y ** -c, 1.0) / tol) / decay_rate)
    h = min(0.05, math.pi / (4.0 * abs(math.log(tol)) * max(1.0, abs(math.log(y)))))
    return ContourSpec(c, T, h)


def mellin_inverse_contour(
    Fhat,
    spec: ContourSpec,
    y: float,
    tol: float = 1e-10,
    *,
    decay: str = "exponential",
    conjugate_symmetric: bool = True,
) -> QuadResult:
    """(1/2 pi i) times the integral of Fhat(s) y^(-s) along Re s = spec.c.

    Exponentially decaying kernels use the trapezoid rule on [-T, T]; the error
    estimate combines the step-halving difference with the size of the
    integrand at |tau| = T. ``decay="algebraic"`` sums half-period panels of
    the oscillation y^(-i tau) and extrapolates them (needs y != 1).
    With ``conjugate_symmetric`` (Fhat(conj s) = conj Fhat(s)) only tau >= 0 is
    sampled and the real part is returned.
    """
    if not y > 0:
        raise DomainError("mellin_inverse_contour needs y > 0")
    if decay not in ("exponential", "algebraic"):
        raise ValueError(f"decay must be 'exponential' or 'algebraic', got {decay!r}")
    c = spec.c
    log_y = math.log(y)

    def point(tau):
        s = complex(c, tau)
        return complex(Fhat(s)) * cmath.exp(-s * log_y)

    if decay == "algebraic":
        if not conjugate_symmetric:
            raise DomainError("algebraic decay is only supported for conjugate-symmetric kernels")
        if log_y == 0.0:
            raise DomainError("algebraic kernels need y != 1")
        period = math.pi / abs(log_y)

        def re_part(tau):
            return point(tau).real

        val, err, evals = _oscillatory_panels(re_part, period, math.pi * tol, max_panels=2000)
        value = val.real / math.pi
        err = err / math.pi
        return QuadResult(value, err, evals, err <= tol)

    n = int(round(spec.T / spec.h))
    h = spec.T / n
    taus = np.arange(n + 1) * h
    if conjugate_symmetric:
        vals = np.array([point(t).real for t in taus])
        weights = np.full(n + 1, 1.0)
        weights[0] = 0.5
        fine = h * np.dot(weights, vals) / math.pi
        coarse_w = weights[::2].copy()
        coarse_w[0] = 0.5
        coarse = 2 * h * np.dot(coarse_w, vals[::2]) / math.pi
        edge = abs(vals[-1])
        evals = n + 1
        value = fine
    else:
        taus2 = np.concatenate([-taus[:0:-1], taus])
        vals = np.array([point(t) for t in taus2])
        fine = h * vals.sum() / (2 * math.pi)
        coarse = 2 * h * vals[::2].sum() / (2 * math.pi)
        edge = max(abs(vals[0]), abs(vals[-1]))
        evals = len(taus2)
        value = fine
    # truncation: integrand beyond T is bounded by edge * e^{-(tau - T)/4}-type decay
    trunc = 4.0 * edge / math.pi
    disc = abs(fine - coarse)
    err = trunc + disc
    return QuadResult(_as_scalar(value), float(err), evals, bool(err <= tol))
