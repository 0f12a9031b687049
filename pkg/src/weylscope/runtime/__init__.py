"""
Verification runtime.

- config: SuiteConfig and its YAML loader
- context: SuiteContext and Outcome, the per-check bookkeeping
- checks: one function per suite
- suites: run_suite

Usage:
    from weylscope.runtime import load_config, run_suite

    report = run_suite(load_config("verify.yaml"))
    print(report.summary)
"""

from .checks import SUITE_RUNNERS
from .config import SuiteConfig, config_from_dict, load_config, print_config_status
from .context import Outcome, SuiteContext
from .suites import run_suite

__all__ = [
    "SuiteConfig",
    "load_config",
    "config_from_dict",
    "print_config_status",
    "SuiteContext",
    "Outcome",
    "SUITE_RUNNERS",
    "run_suite",
]
