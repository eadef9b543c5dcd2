"""Identity-check registry and suite runner."""
from .checks import REGISTRY, f_plus
from .core import Calibration, CheckReport, Mode, SuiteReport, fit_constant
from .suite import CHECK_IDS, SuiteConfig, run_check, run_suite

__all__ = [
    "REGISTRY",
    "CHECK_IDS",
    "Calibration",
    "CheckReport",
    "Mode",
    "SuiteConfig",
    "SuiteReport",
    "f_plus",
    "fit_constant",
    "run_check",
    "run_suite",
]
