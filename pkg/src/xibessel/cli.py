"""Command-line front end.

    xibessel eval <fn> --<param> <value> ...
    xibessel verify <check_id|all> [--mode exact|calibrate] [--tol T] [--grid SPEC] [--format F] [--out PATH]
    xibessel scan xi-zeros --y-max Y [--step H]
    xibessel heat --r R --t T --kappa K [--residual]

Exit codes: 0 success, 1 an EXACT-mode check failed, 2 usage error,
3 numerical non-convergence or an output write failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
import tempfile
from typing import Optional, TextIO

from . import besselhyp, complexfn, series
from .errors import ConvergenceError, DomainError, PoleError
from .verify import CHECK_IDS, REGISTRY, CheckReport, Mode, SuiteConfig, SuiteReport, run_check, run_suite
from .verify.checks import _g1_decay, heat_residual

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

EVAL_FUNCTIONS = ("Xi", "xi", "zeta", "gamma", "j0", "j1", "i0", "1f1", "psi", "h1", "u", "muntz")
FORMATS = ("human", "json", "csv")
CSV_COLUMNS = ("check_id", "params", "lhs", "rhs", "abs_diff", "rel_diff", "ratio", "tol", "passed",
               "calibration_constant", "calibration_spread", "wall_ms")

_NUMBER = {"type": ["number", "null"]}
_SCALAR = {"oneOf": [_NUMBER, {"type": "object", "required": ["re", "im"],
                               "properties": {"re": _NUMBER, "im": _NUMBER}, "additionalProperties": False}]}
REPORT_SCHEMA = {
    "type": "object",
    "required": ["check_id", "params", "lhs", "rhs", "abs_diff", "rel_diff", "ratio", "tol", "passed", "wall_ms"],
    "additionalProperties": False,
    "properties": {
        "check_id": {"type": "string", "enum": list(CHECK_IDS)},
        "params": {"type": "object"},
        "lhs": _SCALAR,
        "rhs": _SCALAR,
        "abs_diff": _NUMBER,
        "rel_diff": _NUMBER,
        "ratio": _SCALAR,
        "tol": {"type": "number"},
        "passed": {"type": "boolean"},
        "calibration": {
            "type": "object",
            "required": ["constant", "spread"],
            "additionalProperties": False,
            "properties": {"constant": _SCALAR, "spread": _NUMBER},
        },
        "wall_ms": {"type": "number"},
    },
}
SUITE_SCHEMA = {
    "type": "object",
    "required": ["reports", "all_passed", "errata"],
    "additionalProperties": False,
    "properties": {
        "reports": {"type": "array", "items": REPORT_SCHEMA},
        "all_passed": {"type": "boolean"},
        "errata": {"type": "array", "items": {"type": "object"}},
    },
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ----------------------------------------------------------------------------- value parsing

def parse_scalar(text: str):
    """'1.5' -> float, '0.5+14.1i' or '2j' -> complex, 'pi' allowed as a float."""
    text = text.strip()
    if text.lower() in ("pi", "+pi"):
        return math.pi
    if text.lower() == "-pi":
        return -math.pi
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None


def parse_grid(spec: str) -> dict:
    """'x=0,0.2;r=0.5' -> {'x': [0.0, 0.2], 'r': [0.5]}."""
    out = {}
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        key, sep, values = part.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"bad grid entry {part!r}; expected key=v1,v2,...")
        out[key.strip()] = [parse_scalar(v) for v in values.split(",") if v.strip()]
    return out


def read_config(path: str) -> dict:
    """Plain 'key = value' lines; '#' starts a comment."""
    cfg = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise UsageError(f"{path}:{lineno}: expected key = value")
                cfg[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    return cfg


# ----------------------------------------------------------------------------- report rendering

def _json_scalar(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, complex):
        return {"re": _json_scalar(v.real), "im": _json_scalar(v.imag)}
    if isinstance(v, (int, float)) or hasattr(v, "item"):
        v = v.item() if hasattr(v, "item") else v
        if isinstance(v, complex):
            return _json_scalar(v)
        if isinstance(v, float) and not math.isfinite(v):
            return None
        return v
    return v


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _jsonable(obj.tolist())
    if isinstance(obj, Mode):
        return obj.value
    return _json_scalar(obj)


def report_to_dict(report: CheckReport, timing: bool = True) -> dict:
    out = {
        "check_id": report.check_id,
        "params": _jsonable({**report.params, "mode": report.mode.value}),
        "lhs": _json_scalar(report.lhs),
        "rhs": _json_scalar(report.rhs),
        "abs_diff": _json_scalar(report.abs_diff),
        "rel_diff": _json_scalar(report.rel_diff),
        "ratio": _json_scalar(report.ratio),
        "tol": report.tol,
        "passed": report.passed,
    }
    if report.calibration is not None:
        out["calibration"] = {"constant": _json_scalar(report.calibration.constant),
                              "spread": _json_scalar(report.calibration.spread)}
    out["wall_ms"] = round(report.wall_time * 1e3, 3) if timing else 0
    return out


def suite_to_dict(suite: SuiteReport, timing: bool = True) -> dict:
    return {
        "reports": [report_to_dict(r, timing) for r in suite.reports],
        "all_passed": suite.all_passed,
        "errata": _jsonable(suite.errata),
    }


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, complex):
        return f"{v.real!r}{'+' if v.imag >= 0 or math.isnan(v.imag) else '-'}{abs(v.imag)!r}i"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv_row(report: CheckReport, timing: bool) -> list[str]:
    cal = report.calibration
    params = json.dumps(_jsonable({**report.params, "mode": report.mode.value}), sort_keys=True)
    return [report.check_id, params] + [_csv_cell(v) for v in (
        report.lhs, report.rhs, report.abs_diff, report.rel_diff, report.ratio, report.tol, report.passed,
        None if cal is None else cal.constant, None if cal is None else cal.spread,
        round(report.wall_time * 1e3, 3) if timing else 0)]


def _fmt(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.6g}{v.imag:+.6g}i"
    return f"{v:.6g}" if isinstance(v, float) else str(v)


def render(reports: list[CheckReport], errata: list[dict], fmt: str, suite: bool, timing: bool = True) -> str:
    if fmt == "json":
        if suite:
            body = suite_to_dict(SuiteReport(reports, errata), timing)
        else:
            body = report_to_dict(reports[0], timing)
        return json.dumps(body, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in reports:
            writer.writerow(_csv_row(r, timing))
        return buf.getvalue()
    lines = [f"{'check':<14} {'mode':<9} {'result':<6} {'rel_diff':>11} {'ratio/const':>13} "
             f"{'spread':>10} {'tol':>8} {'ms':>9}"]
    for r in reports:
        cal = r.calibration
        lines.append(
            f"{r.check_id:<14} {r.mode.value:<9} {'PASS' if r.passed else 'FAIL':<6} {_fmt(r.rel_diff):>11} "
            f"{_fmt(cal.constant if cal else r.ratio):>13} {_fmt(cal.spread) if cal else '-':>10} "
            f"{r.tol:>8.1e} {r.wall_time * 1e3 if timing else 0:>9.1f}")
        if "error" in r.params:
            lines.append(f"{'':<14} error: {r.params['error']}")
    if errata:
        lines.append("")
        lines.append("errata:")
        for e in errata:
            lines.append(f"  [{e.get('check_id')}] {e.get('finding')} (claimed {e.get('claimed')}, "
                         f"measured {e.get('measured')})")
    return "\n".join(lines) + "\n"


def write_output(text: str, out: Optional[str], stream: TextIO) -> None:
    """Write to ``stream`` or atomically to ``out`` (temp file in the same directory, then rename)."""
    if out is None:
        stream.write(text)
        stream.flush()
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(prefix=".xibessel-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ----------------------------------------------------------------------------- commands

def _param(args, name, default=None, kind=float):
    v = getattr(args, name, None)
    if v is None:
        if default is None:
            raise UsageError(f"eval {args.fn} needs --{name}")
        return default
    if kind is complex:
        return parse_scalar(v)
    try:
        return kind(parse_scalar(v).real if isinstance(parse_scalar(v), complex) else parse_scalar(v))
    except (TypeError, ValueError):
        raise UsageError(f"--{name}: bad value {v!r}") from None


def _phys(args) -> series.PhysParams:
    return series.PhysParams(x=_param(args, "x", 0.0), r=_param(args, "r", 0.0, complex),
                             t=_param(args, "t", 1.0), kappa=_param(args, "kappa", 1.0))


def evaluate(args):
    fn = args.fn
    if fn == "Xi":
        return complexfn.Xi(_param(args, "y"))
    if fn == "xi":
        return complexfn.xi_completed(_param(args, "s", kind=complex))
    if fn == "zeta":
        return complexfn.zeta(_param(args, "s", kind=complex))
    if fn == "gamma":
        return complexfn.complex_gamma(_param(args, "z", kind=complex))
    if fn == "j0":
        return besselhyp.bessel_j0(_param(args, "x"))
    if fn == "j1":
        return besselhyp.bessel_j1(_param(args, "x"))
    if fn == "i0":
        return besselhyp.bessel_i0(_param(args, "x"))
    if fn == "1f1":
        return besselhyp.kummer_1f1(_param(args, "a", kind=complex), _param(args, "w", kind=complex),
                                    b=int(_param(args, "b", 1.0)))
    if fn == "psi":
        conv = series.ThetaConvention(args.convention or "plain")
        return series.theta_psi(_param(args, "y"), conv).value
    if fn == "h1":
        return series.h1(_param(args, "y"), _phys(args)).value
    if fn == "u":
        p = _phys(args)
        return series.heat_u(float(complex(p.r).real), p.t, p.kappa).value
    if fn == "muntz":
        p = _phys(args)
        m = series.Muntz(lambda z: besselhyp.g1(z, p.r, p.t), _g1_decay(p.r, p.t),
                         taylor=series.g1_taylor(p.r, p.t, 30))
        return m(_param(args, "y"))
    raise UsageError(f"unknown function {fn!r}")


def _complex_or_real(v):
    if isinstance(v, complex) and v.imag == 0:
        return v.real
    return v


def cmd_eval(args, out: TextIO) -> int:
    value = _complex_or_real(evaluate(args))
    if args.format == "json":
        text = json.dumps({"fn": args.fn, "value": _json_scalar(value)}) + "\n"
    elif isinstance(value, complex):
        text = _csv_cell(value) + "\n"
    else:
        text = repr(float(value)) + "\n"
    write_output(text, args.out, out)
    return EXIT_OK


def _check_params(check_id: str, args) -> dict:
    params = dict(parse_grid(args.grid)) if args.grid else {}
    for name in ("x", "r", "t", "kappa"):
        v = getattr(args, name, None)
        if v is not None:
            params[name] = [parse_scalar(p) for p in v.split(",")]
    defaults = REGISTRY[check_id].defaults
    if "rt" in defaults and ("r" in params or "t" in params):
        rs = params.pop("r", None) or sorted({rt[0] for rt in defaults["rt"]}, key=abs)
        ts = params.pop("t", None) or sorted({rt[1] for rt in defaults["rt"]})
        params["rt"] = [[r, t] for r, t in itertools.product(rs, ts)]
    # scalar-valued defaults take scalars back
    for key, value in list(params.items()):
        if key in defaults and not isinstance(defaults[key], (list, tuple)) and isinstance(value, list):
            if len(value) != 1:
                raise UsageError(f"{check_id}: {key} takes a single value")
            params[key] = value[0]
    return params


def cmd_verify(args, out: TextIO) -> int:
    target = args.target
    if target != "all" and target not in REGISTRY:
        raise UsageError(f"unknown check {target!r}; choose from: all, {', '.join(CHECK_IDS)}")
    ids = list(CHECK_IDS) if target == "all" else [target]
    mode = args.mode
    tol = args.tol
    params = {cid: _check_params(cid, args) for cid in ids}
    if target == "all":
        cfg = SuiteConfig(checks=ids, params=params,
                          modes={cid: mode for cid in ids} if mode else {},
                          tols={cid: tol for cid in ids} if tol is not None else {},
                          workers=args.workers)
        suite = run_suite(cfg)
        reports, errata = suite.reports, suite.errata
    else:
        try:
            report = run_check(target, params[target], mode, tol)
        except DomainError as exc:
            raise UsageError(f"{target}: {exc}") from None
        reports, errata = [report], report.errata
    text = render(reports, errata, args.format, target == "all", timing=not args.no_timing)
    write_output(text, args.out, out)
    if any(str(r.params.get("error", "")).startswith("ConvergenceError") for r in reports):
        return EXIT_NUMERIC
    return EXIT_OK if SuiteReport(reports, errata).exact_passed else EXIT_FAIL


def scan_xi_zeros(y_max: float, step: float = 0.1, width: float = 1e-9):
    """Bisection brackets of every sign change of Xi on [0, y_max] sampled at ``step``."""
    if not (y_max > 0 and step > 0):
        raise DomainError("scan needs y_max > 0 and step > 0")
    n = int(math.ceil(y_max / step))
    ys = [min(k * step, y_max) for k in range(n + 1)]
    vals = [complexfn.Xi(y) for y in ys]
    brackets = []
    for a, b, fa, fb in zip(ys, ys[1:], vals, vals[1:]):
        if fa == 0:
            brackets.append((a, a))
            continue
        if fa * fb >= 0:
            continue
        while b - a > width:
            m = 0.5 * (a + b)
            fm = complexfn.Xi(m)
            if fm == 0:
                a = b = m
                break
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b = m
        brackets.append((a, b))
    return brackets


def cmd_scan(args, out: TextIO) -> int:
    if args.what != "xi-zeros":
        raise UsageError(f"unknown scan target {args.what!r}; only xi-zeros is available")
    try:
        brackets = scan_xi_zeros(args.y_max, args.step)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "y_lower", "y_upper", "y_mid"])
    for k, (a, b) in enumerate(brackets, 1):
        writer.writerow([k, repr(a), repr(b), repr(0.5 * (a + b))])
    write_output(buf.getvalue(), args.out, out)
    return EXIT_OK


def cmd_heat(args, out: TextIO) -> int:
    try:
        u = series.heat_u(args.r, args.t, args.kappa)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    row = {"r": args.r, "t": args.t, "kappa": args.kappa, "u": u.value, "terms": u.terms_used}
    if args.residual:
        if args.r <= 0:
            raise UsageError("--residual needs r > 0 (the 1/r term)")
        lap, ut = heat_residual(args.r, args.t, args.kappa, 1e-4, richardson=True)
        row["residual"] = abs(lap - ut)
    if args.format == "json":
        text = json.dumps(row) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(row))
        writer.writerow([_csv_cell(v) for v in row.values()])
        text = buf.getvalue()
    else:
        text = "\n".join(f"{k:<9} {v!r}" for k, v in row.items()) + "\n"
    write_output(text, args.out, out)
    return EXIT_OK


# ----------------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xibessel", description="Xi function, Bessel lattice sums and identity checks.",
                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=FORMATS, default=None, help="output format (default human)")
        p.add_argument("--out", default=None, help="write output to PATH atomically instead of stdout")
        p.add_argument("--config", default=None, help="plain 'key = value' file; flags override it")

    p = sub.add_parser("eval", help="evaluate one function",
                       description=f"functions: {', '.join(EVAL_FUNCTIONS)}")
    p.add_argument("fn", choices=EVAL_FUNCTIONS)
    for name, help_ in (("y", "Xi, psi, h1, muntz argument"), ("s", "xi/zeta argument (complex ok)"),
                        ("z", "gamma argument (complex ok)"), ("x", "Bessel argument"), ("a", "1F1 a"),
                        ("w", "1F1 argument"), ("b", "1F1 b (integer, default 1)"),
                        ("r", "radius (h1/u/muntz, default 0; '0.5i' for imaginary)"),
                        ("t", "time (default 1)"), ("kappa", "diffusivity (default 1)")):
        p.add_argument(f"--{name}", default=None, help=help_)
    p.add_argument("--convention", choices=[c.value for c in series.ThetaConvention], default=None,
                   help="theta convention for psi (default plain)")
    common(p)

    table = "\n".join(f"  {cid:<14} {spec.mode.value:<9} tol {spec.tol:g}  {spec.summary}"
                      for cid, spec in REGISTRY.items())
    p = sub.add_parser("verify", help="run one check or the whole suite",
                       formatter_class=argparse.RawDescriptionHelpFormatter,
                       description="run one identity check or 'all'", epilog=f"checks (default mode, tolerance):\n{table}")
    p.add_argument("target", help="check id or 'all'")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=None, help="override the check's mode")
    p.add_argument("--tol", type=float, default=None, help="override the check's tolerance")
    p.add_argument("--grid", default=None, help="parameter grid, e.g. 'x=0,0.2;r=0.5'")
    for name in ("x", "r", "t", "kappa"):
        p.add_argument(f"--{name}", default=None, help=f"comma-separated {name} values")
    p.add_argument("--workers", type=int, default=None, help="processes for 'all' (default 1)")
    p.add_argument("--no-timing", action="store_true", default=None,
                   help="report wall_ms as 0 so repeated runs are byte-identical")
    common(p)

    p = sub.add_parser("scan", help="bracket sign changes of Xi(y)")
    p.add_argument("what", help="xi-zeros")
    p.add_argument("--y-max", type=float, required=True)
    p.add_argument("--step", type=float, default=0.1)
    common(p)

    p = sub.add_parser("heat", help="evaluate u(r, t) of the cylindrical heat problem")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--residual", action="store_true", help="also print the finite-difference PDE residual")
    common(p)
    return parser


_CONFIG_TYPES = {"tol": float, "workers": int, "step": float, "y_max": float, "kappa": None,
                 "no_timing": lambda v: v.lower() in ("1", "true", "yes", "on"),
                 "residual": lambda v: v.lower() in ("1", "true", "yes", "on")}


def _apply_config(args) -> None:
    if not args.config:
        return
    for key, value in read_config(args.config).items():
        if not hasattr(args, key) or key in ("verb", "fn", "target", "what", "config"):
            raise UsageError(f"config key {key!r} does not apply to {args.verb}")
        if getattr(args, key) is not None and getattr(args, key) is not False:
            continue
        conv = _CONFIG_TYPES.get(key)
        try:
            setattr(args, key, conv(value) if conv else value)
        except ValueError:
            raise UsageError(f"config {key}: bad value {value!r}") from None


def main(argv: Optional[list[str]] = None, stdout: Optional[TextIO] = None,
         stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
        _apply_config(args)
        args.format = args.format or "human"
        if args.format not in FORMATS:
            raise UsageError(f"--format must be one of {FORMATS}")
        if args.verb == "verify":
            args.workers = args.workers or 1
            args.no_timing = bool(args.no_timing)
            if args.mode is not None and args.mode not in ("exact", "calibrate"):
                raise UsageError("--mode must be exact or calibrate")
        handler = {"eval": cmd_eval, "verify": cmd_verify, "scan": cmd_scan, "heat": cmd_heat}[args.verb]
        return handler(args, stdout)
    except UsageError as exc:
        stderr.write(f"{exc}\n\n{parser.format_usage()}")
        stderr.write(__doc__.split("\n\n")[1] + "\n")
        return EXIT_USAGE
    except (PoleError, DomainError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ConvergenceError, OverflowError, ArithmeticError) as exc:
        stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        stderr.write(f"write failed: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
