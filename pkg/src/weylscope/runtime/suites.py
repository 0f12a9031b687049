"""
Suite runner

run_suite resolves every name a configuration refers to, then runs the
selected suites in canonical order and returns the VerificationReport.

Name resolution happens before any check runs, so an unknown symbol,
function, phase or order function aborts the run with a RegistryError
instead of producing a half-filled report.

Usage:
    from weylscope.runtime import load_config, run_suite
    from weylscope.storage import emit_report

    cfg = load_config("verify.yaml")
    report = run_suite(cfg)
    emit_report(report, cfg.output_dir)
"""

from typing import Optional

from ..core.errors import ConfigError
from ..interfaces.specs import clear_cache, function_on, get_order, get_phase, symbol_entry
from ..storage.report import VerificationReport
from ..storage.run_log import RunLogger
from .checks import SUITE_RUNNERS
from .config import SuiteConfig
from .context import SuiteContext


def resolve_corpus(ctx: SuiteContext) -> None:
    """
    Look up every corpus entry of the configuration.

    Raises:
        UnknownEntryError: For a name missing from its registry
        SpecSyntaxError: For a malformed spec
    """
    cfg = ctx.cfg
    for spec in cfg.corpus["symbols"]:
        symbol_entry(spec)
    for name in cfg.phases:
        get_phase(name)
    ctx.functions = {spec: function_on(spec, ctx.function_grid) for spec in cfg.corpus["functions"]}
    ctx.order_functions = {
        name: get_order(name, cfg.order_functions) for name in cfg.corpus["order_functions"]
    }


def run_suite(cfg: SuiteConfig, logger: Optional[RunLogger] = None) -> VerificationReport:
    """
    Run the suites selected by a configuration.

    Args:
        cfg: Validated configuration
        logger: Optional run log; every check is logged with its status

    Returns:
        VerificationReport with records in execution order

    Raises:
        RegistryError: If the configuration names an unknown entry
        ConfigError: If a suite has no runner
    """
    report = VerificationReport(config_echo=cfg.echo())
    ctx = SuiteContext(cfg, report, logger)
    resolve_corpus(ctx)

    for suite in cfg.ordered_suites():
        runner = SUITE_RUNNERS.get(suite)
        if runner is None:
            raise ConfigError(f"no runner for suite {suite!r}")
        ctx.suite = suite
        clear_cache()
        if logger is not None:
            logger.info(f"suite {suite} started", suite=suite)
        before = len(report.records)
        runner(ctx)
        if logger is not None:
            records = report.records[before:]
            failed = sum(r.failed for r in records)
            logger.info(f"suite {suite} finished", suite=suite, checks=len(records), failed=failed)
    return report
