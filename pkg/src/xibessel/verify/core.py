"""Report types and the generic EXACT / CALIBRATE judging shared by every check."""
from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

__all__ = [
    "Mode",
    "Point",
    "Evaluation",
    "CheckSpec",
    "Calibration",
    "CheckReport",
    "SuiteReport",
    "fit_constant",
    "judge",
]


class Mode(enum.Enum):
    EXACT = "exact"
    CALIBRATE = "calibrate"


@dataclass
class Point:
    """One evaluated parameter point of an identity."""

    label: dict
    lhs: complex | float
    rhs: complex | float


@dataclass
class Evaluation:
    """What a check function hands back before judging.

    ``verdict`` overrides the ratio-based EXACT test for checks whose
    criterion is not "lhs equals rhs" (boundedness, residual size, ...).
    ``diff_floor`` turns rel_diff into an absolute difference near zero.
    """

    points: list[Point]
    extras: dict = field(default_factory=dict)
    errata: list[dict] = field(default_factory=list)
    verdict: Optional[bool] = None
    diff_floor: float = 0.0
    claimed_constant: complex | float = 1.0


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    anchor: str
    fn: Callable[[dict, float], Evaluation]
    defaults: dict
    mode: Mode
    tol: float
    summary: str


@dataclass(frozen=True)
class Calibration:
    constant: complex | float
    spread: float


@dataclass
class CheckReport:
    check_id: str
    params: dict
    lhs: complex | float
    rhs: complex | float
    abs_diff: float
    rel_diff: float
    ratio: complex | float
    tol: float
    passed: bool
    mode: Mode
    calibration: Optional[Calibration] = None
    wall_time: float = 0.0
    errata: list = field(default_factory=list)


@dataclass
class SuiteReport:
    reports: list[CheckReport]
    errata: list[dict]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.reports)

    @property
    def exact_passed(self) -> bool:
        """True when every EXACT-mode report passed (CALIBRATE results are findings)."""
        return all(r.passed for r in self.reports if r.mode is Mode.EXACT)


def _real_if_close(v):
    v = complex(v)
    return v.real if abs(v.imag) <= 1e-13 * max(abs(v.real), 1e-300) else v


def rel_diff(lhs, rhs, floor: float = 0.0) -> float:
    return abs(lhs - rhs) / max(abs(rhs), floor, 1e-300)


def fit_constant(ratios) -> Calibration:
    """Single multiplicative constant through a set of LHS/RHS ratios.

    Least squares on log-magnitudes; the phase (sign, for real data) comes
    from the first ratio, which callers arrange to be the x = 0 point.
    """
    ratios = [complex(q) for q in ratios]
    if any(q == 0 for q in ratios):
        return Calibration(0.0, math.inf)
    log_mag = sum(math.log(abs(q)) for q in ratios) / len(ratios)
    phase = ratios[0] / abs(ratios[0])
    constant = _real_if_close(math.exp(log_mag) * phase)
    spread = max(abs(q - constant) for q in ratios) / abs(constant)
    return Calibration(constant, spread)


def judge(spec: CheckSpec, params: dict, ev: Evaluation, mode: Mode, tol: float,
          wall_time: float) -> CheckReport:
    points = ev.points
    diffs = [rel_diff(p.lhs, p.rhs, ev.diff_floor) for p in points]
    point_rows = [
        {**p.label, "lhs": _real_if_close(p.lhs), "rhs": _real_if_close(p.rhs), "rel_diff": d}
        for p, d in zip(points, diffs)
    ]
    out_params = {**params, "points": point_rows, **ev.extras}
    errata = list(ev.errata)
    calibration = None
    if mode is Mode.CALIBRATE:
        calibration = fit_constant([p.lhs / p.rhs for p in points])
        head = points[0]
        passed = calibration.spread <= tol
        claimed = complex(ev.claimed_constant)
        if math.isfinite(calibration.spread) and abs(calibration.constant - claimed) > tol * abs(claimed):
            errata.append({
                "check_id": spec.check_id,
                "finding": "measured LHS/RHS constant differs from the stated one",
                "claimed": _real_if_close(claimed),
                "measured": calibration.constant,
                "spread": calibration.spread,
            })
    else:
        worst = max(range(len(points)), key=lambda i: diffs[i])
        head = points[worst]
        passed = ev.verdict if ev.verdict is not None else max(diffs) <= tol
    lhs, rhs = _real_if_close(head.lhs), _real_if_close(head.rhs)
    ratio = _real_if_close(head.lhs / head.rhs) if head.rhs != 0 else math.inf
    return CheckReport(
        check_id=spec.check_id,
        params=out_params,
        lhs=lhs,
        rhs=rhs,
        abs_diff=abs(head.lhs - head.rhs),
        rel_diff=rel_diff(head.lhs, head.rhs, ev.diff_floor),
        ratio=ratio,
        tol=tol,
        passed=bool(passed),
        mode=mode,
        calibration=calibration,
        wall_time=wall_time,
        errata=errata,
    )


def timed(fn: Callable[[], Any]):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0
