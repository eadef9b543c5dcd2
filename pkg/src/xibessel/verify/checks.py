"""Both-sides evaluations for every identity in the registry.

Each ``check_*`` function takes a parameter dict and a tolerance and returns
an :class:`Evaluation`; the registry at the bottom binds them to ids,
default grids, modes and tolerances. Left and right sides go through
different code paths wherever the identity allows it.
"""
from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

from ..besselhyp import bessel_j, g1, j0_asymptotic_pair, kummer_1f1
from ..complexfn import Xi, complex_gamma, log_gamma, zeta
from ..errors import DomainError
from ..quadrature import (
    ContourSpec,
    Decay,
    contour_spec_for,
    integrate_finite,
    integrate_oscillatory_cos,
    integrate_semi_infinite,
    mellin_forward,
    mellin_inverse_contour,
)
from ..series import (
    Muntz,
    PhysParams,
    ThetaConvention,
    abel_limit,
    bvp_initial_closed_form,
    g1_taylor,
    h1,
    h1_constant,
    heat_u,
    theta_psi,
)
from .core import CheckSpec, Evaluation, Mode, Point

SQRT_PI = math.sqrt(math.pi)


def _as_list(v):
    if isinstance(v, (list, tuple)):
        return list(v)
    return [v]


def _as_r(v):
    if isinstance(v, str):
        return complex(v.replace("i", "j")) if ("i" in v or "j" in v) else float(v)
    return v


def _rt_pairs(params):
    if "rt" in params:
        return [(_as_r(r), float(t)) for r, t in params["rt"]]
    return [(_as_r(r), float(t)) for r in _as_list(params.get("r", 0.0))
            for t in _as_list(params.get("t", 1.0))]


def _r_label(r):
    r = complex(r)
    if r.imag == 0:
        return r.real
    return f"{r.imag:g}i"


def _x_grid(params):
    xs = [float(x) for x in _as_list(params.get("x", 0.0))]
    # x = 0 first: CALIBRATE takes the sign from the first point
    return sorted(xs, key=lambda v: (abs(v), v))


def f_plus(s, p: PhysParams) -> complex:
    """e^{xs} 1F1(s/2; 1; -r^2/4t) + e^{x(1-s)} 1F1((1-s)/2; 1; -r^2/4t)."""
    s = complex(s)
    return (cmath.exp(p.x * s) * kummer_1f1(0.5 * s, p.w)
            + cmath.exp(p.x * (1.0 - s)) * kummer_1f1(0.5 * (1.0 - s), p.w))


def mellin_kernel_h1(s, p: PhysParams) -> complex:
    """Gamma(s/2) / (2 t^{s/2}) * 1F1(s/2; 1; -r^2/4t) * zeta(s), the Mellin transform of H1."""
    s = complex(s)
    return complex_gamma(0.5 * s) / (2.0 * p.t ** (0.5 * s)) * kummer_1f1(0.5 * s, p.w) * zeta(s)


def _envelope(g, rate: float, y_max: float, n: int = 400) -> Decay:
    """Exponential envelope certificate with the constant measured on a grid (x4 margin)."""
    ys = np.linspace(0.0, y_max, n)
    c = max(abs(g(float(y))) * math.exp(rate * y) for y in ys)
    return Decay("exponential", rate, const=4.0 * max(c, 1e-300))


# ----------------------------------------------------------------------------- Xi cosine transform

def _xi_weight(y):
    return Xi(y) / (y * y + 0.25)


@lru_cache(maxsize=None)
def _xi_envelope():
    return _envelope(_xi_weight, 0.7, 60.0)


def eq_1_1_lhs(x: float, tol: float = 1e-11) -> float:
    return integrate_oscillatory_cos(_xi_weight, x, tol, _xi_envelope()).value


def eq_1_1_rhs(x: float, conv: ThetaConvention) -> float:
    return 0.5 * math.pi * (math.exp(0.5 * x) - 2.0 * math.exp(-0.5 * x) * theta_psi(math.exp(-2 * x), conv).value)


def check_eq_1_1(params, tol):
    xs = [float(x) for x in _as_list(params["x"])]
    lhs = [eq_1_1_lhs(x, min(1e-11, tol * 1e-2)) for x in xs]
    worst = {}
    rhs = {}
    for conv in ThetaConvention:
        rhs[conv] = [eq_1_1_rhs(x, conv) for x in xs]
        worst[conv] = max(abs(l - r) / abs(r) for l, r in zip(lhs, rhs[conv]))
    winners = [c for c in ThetaConvention if worst[c] <= tol]
    chosen = winners[0] if len(winners) == 1 else min(ThetaConvention, key=lambda c: worst[c])
    points = [Point({"x": x, "convention": chosen.value}, l, r)
              for x, l, r in zip(xs, lhs, rhs[chosen])]
    errata = []
    if chosen is ThetaConvention.PI:
        errata.append({
            "check_id": "eq_1_1",
            "finding": "identity holds with psi(y) = sum exp(-pi n^2 y), not the stated sum exp(-n^2 y)",
            "claimed": "plain",
            "measured": "pi",
        })
    extras = {
        "convention": chosen.value if len(winners) == 1 else None,
        "max_rel_diff_by_convention": {c.value: worst[c] for c in ThetaConvention},
    }
    return Evaluation(points, extras, errata, verdict=len(winners) == 1)


# ----------------------------------------------------------------------------- H1 x H1

def h1_product_integral(x: float, p: PhysParams, tol: float = 1e-11) -> float:
    """integral_0^inf H1(y e^{-x}) H1(y) dy with the exact 1/y^2 tail added analytically."""
    c = h1_constant(p)
    b = math.sqrt(-p.r2) if p.r2 < 0 else 0.0
    # beyond this both lattice sums are below e^-45, leaving H1(z) = -c/z exactly
    z_cut = (b + math.sqrt(b * b + 4 * p.t * 46.0)) / (2 * p.t)
    y_cut = z_cut * math.exp(abs(x))
    ex = math.exp(-x)

    def f(y):
        return h1(y * ex, p).value * h1(y, p).value

    decay = Decay("algebraic", 2.0, tail=lambda Y: c * c * math.exp(x) / Y, cutoff=y_cut)
    res = integrate_semi_infinite(f, 0.0, tol, decay, strict=True)
    return float(res.value)


def thm_1_1_lhs(x: float, p: PhysParams, tol: float = 1e-11) -> float:
    w = p.w

    def g(y):
        F = kummer_1f1(complex(0.25, 0.5 * y), w)
        v = Xi(y) / (y * y + 0.25)
        return v * v * (F.real * F.real + F.imag * F.imag)

    env = _envelope(g, 1.2, 40.0)
    return integrate_oscillatory_cos(g, x, tol, env).value


def check_thm_1_1(params, tol):
    points = []
    even = []
    qt = min(1e-11, tol * 1e-3)
    for r, t in _rt_pairs(params):
        p = PhysParams(r=r, t=t)
        cache = {}
        for x in _x_grid(params):
            lhs = thm_1_1_lhs(x, p, qt)
            rhs = math.exp(-0.5 * x) * math.sqrt(t) * h1_product_integral(x, p, qt)
            cache[x] = rhs
            points.append(Point({"x": x, "r": _r_label(r), "t": t}, lhs, rhs))
        for x, v in cache.items():
            if x > 0 and -x in cache:
                even.append(abs(v - cache[-x]) / abs(v))
    extras = {"rhs_evenness_max_rel": max(even) if even else None}
    return Evaluation(points, extras, claimed_constant=1.0)


# ----------------------------------------------------------------------------- Xi against the Bessel lattice sum

def thm_1_3_lhs(p: PhysParams, tol: float = 1e-11) -> float:
    def g(y):
        return _xi_weight(y) * f_plus(complex(0.5, y), p).real

    env = _envelope(g, 0.6, 50.0)
    pts = list(np.arange(1.0, 40.0, 1.0))
    return integrate_semi_infinite(g, 0.0, tol, env, breakpoints=pts, strict=True).value


def thm_1_3_rhs(p: PhysParams) -> float:
    # sum exp(-t n^2 e^{-2x}) J0(r n e^{-x}) - C e^x is exactly H1 at e^{-x}
    return h1(math.exp(-p.x), p).value


def check_thm_1_3(params, tol):
    points = []
    qt = min(1e-11, tol * 1e-3)
    for r, t in _rt_pairs(params):
        for x in _x_grid(params):
            p = PhysParams(x=x, r=r, t=t)
            points.append(Point({"x": x, "r": _r_label(r), "t": t}, thm_1_3_lhs(p, qt), thm_1_3_rhs(p)))
    return Evaluation(points, claimed_constant=1.0)


# ----------------------------------------------------------------------------- Muntz-kernel representation of H1

def _g1_decay(r, t: float) -> Decay:
    """Gaussian certificate |g1(z)| <= C exp(-z^2/2)."""
    r = complex(r)
    beta = abs(r) / math.sqrt(t) if r.imag == 0 else 0.0
    zs = np.linspace(0.0, 20.0 + 2 * beta, 4000)
    bound = zs * np.exp(-0.5 * zs * zs + beta * zs)
    return Decay("gaussian", 0.5, const=1.5 * float(bound.max()))


class _Thm12:
    """Shared pieces of the Muntz-kernel representation at fixed (r, t): the Muntz transform of g1 and its y-integrals."""

    def __init__(self, r, t):
        self.r, self.t = r, t
        self.p = PhysParams(r=r, t=t)
        decay = _g1_decay(r, t)
        self.muntz = Muntz(lambda z: g1(z, r, t), decay, taylor=g1_taylor(r, t, 30))
        # lattice sum below e^-45 relative beyond this
        self.y_flat = math.sqrt(2 * 46.0 / decay.rate) + 1.0

    def kernel_integral(self, x: float, lower: float, tol: float = 1e-12) -> float:
        """integral_lower^inf M(y) / sqrt(t (y x)^2 - pi^2) dy."""
        a = x * math.sqrt(self.t)
        edge = math.pi / a
        if lower < edge * (1 - 1e-12):
            raise DomainError("kernel is imaginary below pi/(x sqrt t)")
        singular = abs(lower - edge) <= 1e-12 * edge
        ival = self.muntz.integral
        y_cut = max(self.y_flat, lower + 1.0)

        def f(y):
            return self.muntz(y) / math.sqrt(max(a * a * y * y - math.pi * math.pi, 0.0)) if y > edge else 0.0

        body = integrate_finite(f, lower, y_cut, tol, singular_left=singular, strict=True)
        # M(y) = -I/y beyond y_cut, and int_Y^inf dy / (y sqrt(a^2 y^2 - pi^2)) = asin(pi/(aY))/pi
        tail = -ival * math.asin(math.pi / (a * y_cut)) / math.pi
        return body.value + tail

    def stated_rhs(self, x: float) -> float:
        return math.exp(self.p.w) * self.kernel_integral(x, 1.0)

    def corrected_rhs(self, x: float) -> float:
        return 2.0 * math.exp(self.p.w) * self.kernel_integral(x, math.pi / (x * math.sqrt(self.t)))


def _thm_1_2_domain(x, t):
    if not x * math.sqrt(t) > math.pi * (1 + 1e-6):
        raise DomainError(f"thm_1_2 needs x sqrt(t) > pi (got x={x}, t={t})")


def _thm_1_2_block(r, t, xs):
    tool = _Thm12(r, t)
    rows = []
    for x in xs:
        _thm_1_2_domain(x, t)
        lhs = h1(x, tool.p).value
        rows.append((x, lhs, tool.stated_rhs(x), tool.corrected_rhs(x)))
    return rows


_LOWER_LIMIT_ERRATUM = (
    "y-integral must start at pi/(x sqrt t), not 1, and carries a factor 2: "
    "H1(x) = 2 e^{-r^2/4t} int_{pi/(x sqrt t)}^inf M(y) dy / sqrt(t (yx)^2 - pi^2)"
)


def check_thm_1_2(params, tol):
    xs = [float(x) for x in _as_list(params["x"])]
    t = float(params["t"])
    r = _as_r(params["r"])
    if complex(r).real != 0 or complex(r).imag == 0:
        raise DomainError("thm_1_2 validated mode needs purely imaginary r")
    rows = _thm_1_2_block(r, t, xs)
    points = [Point({"x": x, "r": _r_label(r), "t": t}, lhs, stated) for x, lhs, stated, _ in rows]
    corrected = max(abs(lhs - c) / abs(lhs) for _, lhs, _, c in rows)
    extras = {
        "corrected_max_rel_diff": corrected,
        "corrected_passed": corrected <= tol,
    }
    if params.get("real_r") is not None:
        rr = _as_r(params["real_r"])
        try:
            real_rows = _thm_1_2_block(rr, t, xs)
            ratios = [lhs / stated for _, lhs, stated, _ in real_rows]
            extras["real_r"] = {
                "r": _r_label(rr),
                "stated_ratios": ratios,
                "stated_spread": (max(ratios) - min(ratios)) / abs(sum(ratios) / len(ratios)),
                "corrected_max_rel_diff": max(abs(lhs - c) / abs(lhs) for _, lhs, _, c in real_rows),
            }
        except Exception as exc:  # the real-r mode is exploratory; report, never abort
            extras["real_r"] = {"r": _r_label(rr), "error": f"{type(exc).__name__}: {exc}"}
    errata = [{
        "check_id": "thm_1_2",
        "finding": _LOWER_LIMIT_ERRATUM,
        "claimed": "e^{-r^2/4t} int_1^inf",
        "measured": f"corrected form agrees to {corrected:.2e}",
    }]
    return Evaluation(points, extras, errata, claimed_constant=1.0)


def check_thm_1_2_r0(params, tol):
    xs = [float(x) for x in _as_list(params["x"])]
    t = float(params["t"])
    points = []
    fe_worst = 0.0
    corr_worst = 0.0

    def m_closed(y):
        # r = 0: G1(z) = z e^{-z^2}, integral exactly 1/2
        n = np.arange(int(math.ceil(7.0 / y)) + 2, 0, -1, dtype=float)
        return float((n * y * np.exp(-(n * y) ** 2)).sum()) - 0.5 / y

    for x in xs:
        _thm_1_2_domain(x, t)
        a = x * math.sqrt(t)
        lhs = h1(x, PhysParams(r=0.0, t=t)).value
        # theta functional equation: H1(x) = -1/2 + sqrt(pi)/(sqrt(t) x) psi(pi^2/(t x^2))
        fe = -0.5 + SQRT_PI / a * theta_psi(math.pi ** 2 / (a * a)).value
        fe_worst = max(fe_worst, abs(lhs - fe) / abs(fe))

        def f(y):
            return m_closed(y) / math.sqrt(max(a * a * y * y - math.pi ** 2, 0.0))

        y_cut = 12.0
        tail = -0.5 * math.asin(math.pi / (a * y_cut)) / math.pi
        stated = integrate_finite(f, 1.0, y_cut, 1e-13, strict=True).value + tail
        corrected = 2.0 * (integrate_finite(f, math.pi / a, y_cut, 1e-13, singular_left=True,
                                            strict=True).value + tail)
        corr_worst = max(corr_worst, abs(corrected - lhs) / abs(lhs))
        points.append(Point({"x": x, "t": t}, lhs, stated))
    extras = {
        "functional_equation_max_rel_diff": fe_worst,
        "corrected_max_rel_diff": corr_worst,
        "corrected_passed": corr_worst <= tol and fe_worst <= tol,
    }
    errata = [{
        "check_id": "thm_1_2_r0",
        "finding": _LOWER_LIMIT_ERRATUM,
        "claimed": "int_1^inf",
        "measured": f"corrected form agrees to {corr_worst:.2e}",
    }]
    return Evaluation(points, extras, errata)


def chain_contour(x: float, tool: _Thm12, c: float = 0.5, tol: float = 1e-12) -> float:
    """Contour form of the Muntz-kernel representation, on Re s = c.

    The Mellin transform of the Muntz transform is zeta(s) times the transform
    of g1, taken here from the Gaussian-Bessel closed form.
    """
    p = tool.p
    w, t = p.w, p.t

    def g_mellin(s):
        return 0.5 * complex_gamma(0.5 * (s + 1)) * kummer_1f1(0.5 * (s + 1), -w)

    def integrand(s):
        front = complex_gamma(0.5 * s) * math.exp(w) / (2.0 * complex_gamma(0.5 * (s + 1)) * t ** (0.5 * (1 - s)))
        return SQRT_PI * front * zeta(s) * g_mellin(s) * math.pi ** (-s) * x ** (s - 1)

    spec = contour_spec_for(tol, 1.0, c, math.pi / 4, scale=10.0)
    return mellin_inverse_contour(integrand, spec, 1.0, tol).value


def check_chain_3_12(params, tol):
    xs = _x_grid(params)
    t = float(params["t"])
    r = _as_r(params["r"])
    tool = _Thm12(r, t)
    points = []
    corr = 0.0
    for x in xs:
        _thm_1_2_domain(x, t)
        contour = chain_contour(x, tool)
        stated = math.exp(tool.p.w) * tool.kernel_integral(x, 1.0)
        corrected = math.exp(tool.p.w) * tool.kernel_integral(x, math.pi / (x * math.sqrt(t)))
        corr = max(corr, abs(contour - corrected) / abs(contour))
        points.append(Point({"x": x, "r": _r_label(r), "t": t}, contour, stated))
    extras = {"corrected_max_rel_diff": corr, "corrected_passed": corr <= tol}
    errata = [{
        "check_id": "chain_3_12",
        "finding": "last step: the y-integral runs from pi/(x sqrt t), not 1; the earlier step also drops a factor 2",
        "claimed": "int_1^inf",
        "measured": f"corrected lower limit agrees to {corr:.2e}",
    }]
    return Evaluation(points, extras, errata)


# ----------------------------------------------------------------------------- contour representations of H1

def check_residue_3_5(params, tol):
    points = []
    stated_gap = math.inf
    for r, t in _rt_pairs(params):
        p = PhysParams(r=r, t=t)
        c35 = h1_constant(p)
        stated = 2.0 * math.sqrt(t * math.pi) * kummer_1f1(0.5, p.w).real
        for y in _as_list(params["y"]):
            y = float(y)
            spec = contour_spec_for(1e-13, y, 0.5)
            contour = mellin_inverse_contour(lambda s: mellin_kernel_h1(s, p), spec, y, 1e-12).value
            direct = h1(y, p).value + c35 / y  # the bare lattice sum
            measured = (direct - contour) * y
            stated_gap = min(stated_gap, abs(measured - stated) / c35)
            points.append(Point({"y": y, "r": _r_label(r), "t": t, "claimed_ratio": stated / measured},
                                measured, c35))
    margin = stated_gap / tol
    extras = {"claimed_constant_min_rel_gap": stated_gap, "decision_margin_over_tol": margin}
    errata = [{
        "check_id": "residue_3_5",
        "finding": "subtracted term of H1 is sqrt(pi)/(2 sqrt t) 1F1(1/2;1;-r^2/4t) / y; the alternative "
                   "2 sqrt(t pi) 1F1(...) / y is larger by the factor 4t",
        "claimed": "2 sqrt(t pi)",
        "measured": "sqrt(pi)/(2 sqrt t)",
    }]
    ok = margin >= 1e3
    return Evaluation(points, extras, errata, verdict=None if ok else False)


def contour_3_6(x: float, p: PhysParams, tol: float = 1e-12) -> float:
    w = p.w

    def fhat(s):
        g = complex_gamma(0.5 * s)
        z = zeta(s)
        return g * g * kummer_1f1(0.5 * s, w) * kummer_1f1(0.5 * (1 - s), w) * z * z * math.pi ** (0.5 - s)

    y = math.exp(-x)  # e^{xs} = y^{-s}
    spec = contour_spec_for(tol, y, 0.5, math.pi / 2, scale=10.0)
    return mellin_inverse_contour(fhat, spec, y, tol).value


def check_contour_3_6(params, tol):
    points = []
    for r, t in _rt_pairs(params):
        p = PhysParams(r=r, t=t)
        for x in _x_grid(params):
            lhs = math.sqrt(t) * h1_product_integral(x, p)
            points.append(Point({"x": x, "r": _r_label(r), "t": t}, lhs, contour_3_6(x, p)))
    return Evaluation(points, claimed_constant=1.0)


def reflect_lines(y: float, p: PhysParams, pp: float, tol: float = 1e-12):
    """Lines 2, 3 and 4 of the reflection chain for H1(y), each as a contour integral."""
    t, w = p.t, p.w

    def line2(s):
        return mellin_kernel_h1(s, p) * y ** (-s)

    def line3(s):
        u = 1 - s
        return complex_gamma(0.5 * u) / (2 * t ** (0.5 * u)) * kummer_1f1(0.5 * u, w) * zeta(u) * y ** (s - 1)

    def line4(s):
        front = complex_gamma(0.5 * s) / (2 * t ** (0.5 * (1 - s)))
        return SQRT_PI * front * kummer_1f1(0.5 * (1 - s), w) * zeta(s) * math.pi ** (-s) * y ** (s - 1)

    out = []
    for fn, c in ((line2, pp), (line3, 1 - pp), (line4, 1 - pp)):
        spec = contour_spec_for(tol, 1.0, c, math.pi / 4, scale=10.0 * max(y, 1 / y))
        out.append(mellin_inverse_contour(fn, spec, 1.0, tol).value)
    return out


def check_reflect_3_7(params, tol):
    pp = float(params["p_prime"])
    if not 0 < pp < 1:
        raise DomainError("p' must lie in (0, 1)")
    points = []
    direct = 0.0
    for r, t in _rt_pairs(params):
        p = PhysParams(r=r, t=t)
        for y in _as_list(params["y"]):
            y = float(y)
            l2, l3, l4 = reflect_lines(y, p, pp)
            label = {"y": y, "r": _r_label(r), "t": t}
            points.append(Point({**label, "pair": "line2-line3"}, l2, l3))
            points.append(Point({**label, "pair": "line3-line4"}, l3, l4))
            direct = max(direct, abs(l4 - h1(y, p).value) / abs(l4))
    return Evaluation(points, {"max_rel_diff_vs_direct_h1": direct})


# ----------------------------------------------------------------------------- Mellin machinery

def check_mellin_3_3(params, tol):
    points = []
    for v in _as_list(params["v"]):
        v = int(v)
        for s in _as_list(params["s"]):
            s = complex(s)
            for r in _as_list(params["r"]):
                r = float(r)
                for t in _as_list(params["t"]):
                    t = float(t)

                    def f(y, v=v, r=r, t=t):
                        return np.exp(-t * y * y) * bessel_j(v, r * np.asarray(y))

                    num = mellin_forward(f, s, 1e-12, Decay("gaussian", t), vectorized=True).value
                    # (r/2)^v / 2: the 2^-v matters only for v >= 1
                    closed = ((0.5 * r) ** v * complex_gamma(0.5 * (v + s))
                              / (2 * t ** (0.5 * (s + v)) * math.gamma(v + 1))
                              * kummer_1f1(0.5 * (v + s), -r * r / (4 * t), b=v + 1))
                    label = {"v": v, "s": str(s), "r": r, "t": t}
                    points.append(Point(label, num, closed))
    return Evaluation(points)


def check_beta_3_8(params, tol):
    points = []
    spec = ContourSpec(float(params["c"]), 10.0, 1.0)
    for a, x in params["cases"]:
        a, x = float(a), float(x)

        def fhat(s, a=a):
            # ratio through log-gamma: both factors underflow far up the line
            return cmath.exp(log_gamma(s) - log_gamma(s + a + 1))

        res = mellin_inverse_contour(fhat, spec, x, 1e-11, decay="algebraic")
        exact = (1 - x) ** a / math.gamma(a + 1) if x < 1 else 0.0
        points.append(Point({"a": a, "x": x}, res.value, exact))
    # 0 for x > 1: compare on an absolute scale
    return Evaluation(points, diff_floor=1.0)


def check_kummer_3_9(params, tol):
    points = []
    for s in _as_list(params["s"]):
        s = float(s)
        for x in _as_list(params["x"]):
            x = float(x)

            def f(y, x=x):
                y = np.asarray(y)
                return np.exp(-y) * bessel_j(0, 2.0 * np.sqrt(x * y))

            integral = mellin_forward(f, 0.5 * (s + 1), 1e-13, Decay("exponential", 1.0), vectorized=True).value
            rhs = math.exp(x) / math.gamma(0.5 * (s + 1)) * integral
            lhs = kummer_1f1(0.5 * (1 - s), x)
            points.append(Point({"s": s, "x": x}, lhs.real, rhs.real))
    return Evaluation(points)


def _muntz_mellin(muntz: Muntz, s: float, y_flat: float, tol: float = 1e-12) -> float:
    """Mellin transform of the Muntz transform: analytic pieces near 0 and infinity, quadrature between."""
    y0 = muntz.small_y
    a = muntz.taylor
    # small-y expansion c_j y^j integrated against y^{s-1} on (0, y0)
    coef = {0: -0.5 * a[0]}
    from ..complexfn import _BERNOULLI
    for k, bern in enumerate(_BERNOULLI, start=1):
        j = 2 * k - 1
        if j < len(a):
            coef[j] = -bern / (2 * k) * a[j]
    lower = sum(cj * y0 ** (s + j) / (s + j) for j, cj in coef.items())
    ival = muntz.integral
    tail = Decay("algebraic", 2.0 - s, tail=lambda Y: -ival * Y ** (s - 1) / (1 - s), cutoff=y_flat)
    res = mellin_forward(muntz, s, tol, tail, lower_cut=y0, lower_value=lower)
    return float(np.real(res.value))


def check_muntz_3_11(params, tol):
    points = []
    r, t = _as_r(params["r"]), float(params["t"])
    p = PhysParams(r=r, t=t)
    gauss = Muntz(lambda z: np.exp(-np.asarray(z) ** 2), Decay("gaussian", 1.0),
                  taylor=[(-1.0) ** (j // 2) / math.factorial(j // 2) if j % 2 == 0 else 0.0 for j in range(30)])
    bess = Muntz(lambda z: g1(z, r, t), _g1_decay(r, t), taylor=g1_taylor(r, t, 30))
    for s in _as_list(params["s"]):
        s = float(s)
        z = zeta(s).real
        lhs = _muntz_mellin(gauss, s, 8.0)
        rhs = z * 0.5 * complex_gamma(0.5 * s).real
        points.append(Point({"s": s, "F": "exp(-y^2)"}, lhs, rhs))
        lhs = _muntz_mellin(bess, s, 15.0)
        rhs = z * 0.5 * (complex_gamma(0.5 * (s + 1)) * kummer_1f1(0.5 * (s + 1), -p.w)).real
        points.append(Point({"s": s, "F": "g1", "r": _r_label(r), "t": t}, lhs, rhs))
    return Evaluation(points)


def check_parseval(params, tol):
    spec = contour_spec_for(1e-13, 1.0, 0.5, math.pi / 2, scale=10.0)
    # f = g = e^{-y}: integral of e^{-2y}; Mellin pair Gamma(s) Gamma(1-s)
    lhs = integrate_semi_infinite(lambda y: math.exp(-2 * y), 0.0, 1e-13, Decay("exponential", 2.0)).value
    rhs = mellin_inverse_contour(lambda s: complex_gamma(s) * complex_gamma(1 - s), spec, 1.0, 1e-12).value
    points = [Point({"pair": "exp(-y), exp(-y)"}, lhs, rhs)]
    # f = e^{-y^2}, g = e^{-4y^2}: F(s) = Gamma(s/2)/2, G(1-s) = Gamma((1-s)/2) 4^{-(1-s)/2} / 2
    lhs = integrate_semi_infinite(lambda y: math.exp(-y * y) * math.exp(-4 * y * y), 0.0, 1e-13,
                                  Decay("gaussian", 5.0)).value
    rhs = mellin_inverse_contour(
        lambda s: 0.25 * complex_gamma(0.5 * s) * complex_gamma(0.5 * (1 - s)) * 4.0 ** (-0.5 * (1 - s)),
        spec, 1.0, 1e-12).value
    points.append(Point({"pair": "exp(-y^2), exp(-4y^2)"}, lhs, rhs))
    extras = {"exact": [0.5, SQRT_PI / (2 * math.sqrt(5))]}
    return Evaluation(points, extras)


# ----------------------------------------------------------------------------- heat equation and BVP

def check_bvp_i(params, tol):
    points = []
    for t in _as_list(params["t"]):
        t = float(t)
        lhs = heat_u(0.0, t, 1.0).value
        q = math.sqrt(math.pi / t)
        rhs = q * theta_psi(math.pi ** 2 / t).value + 0.5 * q - 0.5
        points.append(Point({"t": t}, lhs, rhs))
    return Evaluation(points)


def check_bvp_ii(params, tol):
    points = []
    worst_est = 0.0
    for r in _as_list(params["r"]):
        r = float(r)
        lim = abel_limit(lambda t, r=r: heat_u(r, t, 1.0))
        worst_est = max(worst_est, lim.err_estimate)
        points.append(Point({"r": r, "extrapolation_error": lim.err_estimate}, lim.value,
                            bvp_initial_closed_form(r)))
    return Evaluation(points, {"max_extrapolation_error": worst_est}, diff_floor=1.0)


def heat_residual(r, t, kappa, h, richardson):
    def u(rr, tt):
        return heat_u(rr, tt, kappa).value

    def parts(h):
        u0 = u(r, t)
        urr = (u(r + h, t) - 2 * u0 + u(r - h, t)) / (h * h)
        ur = (u(r + h, t) - u(r - h, t)) / (2 * h)
        ut = (u(r, t + h) - u(r, t - h)) / (2 * h)
        return kappa * (urr + ur / r), ut

    lap, ut = parts(h)
    if richardson:
        lap2, ut2 = parts(0.5 * h)
        lap, ut = (4 * lap2 - lap) / 3, (4 * ut2 - ut) / 3
    return lap, ut


def check_heat_pde(params, tol):
    kappa = float(params["kappa"])
    h = float(params["h"])
    h_ref = float(params["h_refine"])
    points = []
    ratios = []
    for r, t in params["rt"]:
        r, t = float(r), float(t)
        lap, ut = heat_residual(r, t, kappa, h, richardson=True)
        points.append(Point({"r": r, "t": t}, lap, ut))
        coarse = heat_residual(r, t, kappa, h_ref, False)
        fine = heat_residual(r, t, kappa, 0.5 * h_ref, False)
        ratios.append(abs(coarse[0] - coarse[1]) / abs(fine[0] - fine[1]))
    residual = max(abs(p.lhs - p.rhs) for p in points)
    order_ok = all(3.2 <= q <= 4.8 for q in ratios)
    extras = {"max_residual": residual, "refinement_ratios": ratios, "second_order": order_ok}
    return Evaluation(points, extras, verdict=residual <= tol and order_ok, diff_floor=1.0)


def _fd1(f, x, h):
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3


def _fd2(f, x, h):
    d1 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)
    hh = h / 2
    d2 = (f(x + hh) - 2 * f(x) + f(x - hh)) / (hh * hh)
    return (4 * d2 - d1) / 3


def check_bessel_derivs(params, tol):
    lo, hi, num = params["r_grid"]
    rs = np.linspace(float(lo), float(hi), int(num))
    points = []
    literal = []
    for n in _as_list(params["n"]):
        n = int(n)

        def J0n(r, n=n):
            return bessel_j(0, n * r)

        def J1n(r, n=n):
            return bessel_j(1, n * r)

        for r in rs:
            r = float(r)
            points.append(Point({"n": n, "r": r, "order": 1}, _fd1(J0n, r, 1e-5), -n * J1n(r)))
            second = _fd2(J0n, r, 1e-3)
            points.append(Point({"n": n, "r": r, "order": 2}, second, n / r * J1n(r) - n * n * J0n(r)))
            if n > 1:
                # the intermediate form -n^2 d/dr J1(nr), taken literally
                as_stated = -n * n * _fd1(J1n, r, 1e-5)
                if abs(second) > 1e-3:
                    literal.append(as_stated / second / n)
    errata = []
    if literal:
        errata.append({
            "check_id": "bessel_derivs",
            "finding": "intermediate step -n^2 dJ1(nr)/dr has a spurious factor n; it should read -n dJ1(nr)/dr",
            "claimed": "-n^2 dJ1(nr)/dr",
            "measured": f"stated / true second derivative = n (mean of ratio/n: {np.mean(literal):.12f})",
        })
    return Evaluation(points, {"intermediate_ratio_over_n": float(np.mean(literal)) if literal else None},
                      errata, diff_floor=1.0)


def check_asym_remark(params, tol):
    """tol is the allowed growth of the r-scaled deviation relative to the first radius."""
    t = float(params["t"])
    kappa = float(params["kappa"])
    devs = []
    for r in _as_list(params["r"]):
        r = float(r)
        u = heat_u(r, t, kappa)
        n = np.arange(1, u.terms_used + 1, dtype=float)
        pair = np.array([j0_asymptotic_pair(float(k) * r) for k in n])
        surrogate = float((math.sqrt(r) * pair * np.exp(-n * n * kappa * t)).sum())
        devs.append((r, r * abs(math.sqrt(r) * u.value - surrogate)))
    base = devs[0][1]
    points = [Point({"r": r}, d, base) for r, d in devs]
    bounded = all(d <= tol * base for _, d in devs)
    return Evaluation(points, {"scaled_deviation": [d for _, d in devs],
                               "growth": max(d for _, d in devs) / base}, verdict=bounded)


# ----------------------------------------------------------------------------- registry

REGISTRY: dict[str, CheckSpec] = {}


def _register(check_id, anchor, fn, defaults, mode, tol, summary):
    REGISTRY[check_id] = CheckSpec(check_id, anchor, fn, defaults, mode, tol, summary)


_register("eq_1_1", "Xi cosine transform / theta closed form", check_eq_1_1,
          {"x": [0.0, 0.5, 1.0, 2.0]}, Mode.EXACT, 1e-8,
          "cosine transform of Xi(y)/(y^2+1/4) against the theta closed form, both conventions")
_register("thm_1_1", "squared-Xi transform / H1 autocorrelation", check_thm_1_1,
          {"x": [0.0, 0.2, -0.2, 0.4, -0.4], "rt": [[0.0, math.pi], [0.5, 1.0], [1.0, 2.0]]}, Mode.CALIBRATE, 1e-5,
          "Xi^2 |1F1|^2 cosine transform against the H1 x H1 integral")
_register("thm_1_2", "Muntz-kernel representation of H1", check_thm_1_2,
          {"x": [3.5, 4.0, 4.5, 5.0], "r": "0.5i", "t": 1.0, "real_r": 0.5}, Mode.CALIBRATE, 1e-4,
          "H1(x) against the Muntz-kernel y-integral (imaginary r; real r reported alongside)")
_register("thm_1_2_r0", "Muntz-kernel representation at r = 0", check_thm_1_2_r0,
          {"x": [3.5, 4.0, 5.0], "t": 1.0}, Mode.EXACT, 1e-8,
          "r = 0 reduction of the y-integral representation to the theta functional equation")
_register("thm_1_3", "Xi transform / Bessel lattice sum", check_thm_1_3,
          {"x": [0.0, 0.3, -0.3], "r": [0.0, 0.5, 1.0], "t": math.pi}, Mode.CALIBRATE, 1e-5,
          "Xi(y)/(y^2+1/4) F+(1/2+iy) integral against the Bessel lattice sum")
_register("asym_remark", "large-r surrogate of u", check_asym_remark,
          {"r": [20.0, 40.0, 80.0, 160.0], "t": 0.1, "kappa": 1.0}, Mode.EXACT, 2.0,
          "r-scaled gap between sqrt(r) u and its large-r surrogate stays bounded")
_register("heat_pde", "cylindrical heat equation", check_heat_pde,
          {"rt": [[0.5, 0.5], [1.0, 1.0], [3.0, 0.3]], "kappa": 1.0, "h": 1e-4, "h_refine": 0.02},
          Mode.EXACT, 1e-6, "finite-difference residual of the cylindrical heat equation on u")
_register("bvp_i", "boundary condition at r = 0", check_bvp_i,
          {"t": [0.1, 0.5, 1.0, 2.0, 5.0]}, Mode.EXACT, 1e-10,
          "u(0, t) against the theta functional equation")
_register("bvp_ii", "initial condition at t = 0+", check_bvp_ii,
          {"r": [1.0, math.pi, 5.0, 7.0, 9.0]}, Mode.EXACT, 1e-4,
          "Abel limit u(r, 0+) against the closed-form initial profile")
_register("bessel_derivs", "J0(nr) derivative relations", check_bessel_derivs,
          {"n": [1, 2], "r_grid": [0.1, 20.0, 40]}, Mode.EXACT, 1e-8,
          "first and second r-derivatives of J0(nr) by finite differences")
_register("parseval", "Mellin-Parseval formula", check_parseval,
          {}, Mode.EXACT, 1e-8, "Mellin-Parseval for two explicit pairs")
_register("mellin_3_3", "Gaussian-Bessel Mellin transform", check_mellin_3_3,
          {"v": [0, 1], "s": [1.2, 1.7, "0.5+0.3j"], "r": [0.5, 1.0], "t": [0.5, 1.0]}, Mode.EXACT, 1e-8,
          "numeric Mellin transform of exp(-t y^2) J_v(r y) against the 1F1 closed form")
_register("residue_3_5", "residue of the H1 kernel at s = 1", check_residue_3_5,
          {"y": [0.5, 1.0, 2.0], "rt": [[0.5, 1.0], [1.0, 2.0]]}, Mode.EXACT, 1e-8,
          "lattice sum minus the p'=1/2 contour integral, times y, against both stated constants")
_register("contour_3_6", "H1 autocorrelation as a contour integral", check_contour_3_6,
          {"x": [0.0, 0.2, -0.2, 0.4, -0.4], "rt": [[0.5, 1.0]]}, Mode.CALIBRATE, 1e-4,
          "sqrt(t) H1 x H1 integral against the stated vertical-line integral")
_register("reflect_3_7", "reflected contour representation of H1", check_reflect_3_7,
          {"y": [0.5, 1.0, 2.0], "rt": [[0.5, 1.0]], "p_prime": 0.3}, Mode.EXACT, 1e-8,
          "consecutive lines of the reflected contour representation of H1")
_register("beta_3_8", "inverse Mellin transform of a gamma ratio", check_beta_3_8,
          {"c": 1.0, "cases": [[-0.5, 0.5], [0.0, 0.5], [1.0, 0.5], [0.0, 0.99], [1.0, 0.999],
                               [-0.5, 2.0], [0.0, 2.0], [1.0, 2.0]]},
          Mode.EXACT, 1e-8, "inverse Mellin transform of Gamma(s)/Gamma(s+a+1) in all three regimes")
_register("kummer_3_9", "integral representation of 1F1", check_kummer_3_9,
          {"s": [0.5, 1.5], "x": [0.25, 1.0]}, Mode.EXACT, 1e-8,
          "integral representation of 1F1((1-s)/2; 1; x)")
_register("muntz_3_11", "Mellin transform of the Muntz transform", check_muntz_3_11,
          {"s": [0.3, 0.5, 0.7], "r": "0.5i", "t": 1.0}, Mode.EXACT, 1e-8,
          "Mellin transform of the Muntz transform equals zeta(s) times the Mellin transform")
_register("chain_3_12", "contour form of the Muntz-kernel chain", check_chain_3_12,
          {"x": [3.5, 4.0, 4.5, 5.0, 5.5], "r": "0.5i", "t": 1.0}, Mode.CALIBRATE, 1e-4,
          "contour form of the Muntz-kernel chain against its final y-integral")
