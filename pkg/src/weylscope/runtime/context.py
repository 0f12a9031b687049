"""
Check execution

A suite is a function that calls SuiteContext.check once per check. Each
check is a zero-argument callable returning an Outcome; the context times
it, turns the warnings it raised into a report status and appends the
record.

Numerical failures inside a check (any WeylscopeError except registry
errors) become 'fail' records carrying the error text. Registry errors
propagate: a run that names an unknown entry is a configuration error.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from ..bargmann.transform import ComplexGrid
from ..core.errors import (
    AliasingWarning,
    BoundaryMassWarning,
    RegistryError,
    TruncationWarning,
    WeylscopeError,
)
from ..core.grids import PhaseGrid, RealGrid, SampledFunction
from ..core.order_functions import OrderFunction
from ..storage.report import CheckRecord, VerificationReport, status_for
from ..storage.run_log import RunLogger
from .config import SuiteConfig

# Grid over E for Schur sums and composed weights
SCHUR_GRID = RealGrid(2, 6.0, 24)

BOUNDARY_WARNINGS = (BoundaryMassWarning, AliasingWarning)


@dataclass
class Outcome:
    """
    Result of one check before it becomes a record.

    Attributes:
        computed: Computed quantities
        expected: Oracle values
        passed: Whether the comparison holds
        tolerance: Tolerance used (None for bracket or flag checks)
        boundary_flag: Diagnostics say the box is too small
        tail_flag: Diagnostics say a truncated sum is too short
    """

    computed: Dict[str, Any]
    expected: Dict[str, Any]
    passed: bool
    tolerance: Optional[float] = None
    boundary_flag: bool = False
    tail_flag: bool = False


def within(value: float, expected: float, tol: float, relative: bool = False) -> bool:
    err = abs(value - expected)
    if relative:
        err = err / max(abs(expected), 1e-300)
    return err <= tol


@dataclass
class SuiteContext:
    """
    Everything a suite needs: configuration, resolved grids and corpora,
    the report under construction and an optional run log.
    """

    cfg: SuiteConfig
    report: VerificationReport
    logger: Optional[RunLogger] = None
    function_grid: RealGrid = field(init=False)
    symbol_grid: PhaseGrid = field(init=False)
    complex_grid: ComplexGrid = field(init=False)
    functions: Dict[str, SampledFunction] = field(default_factory=dict)
    order_functions: Dict[str, OrderFunction] = field(default_factory=dict)
    suite: str = ""

    def __post_init__(self) -> None:
        cfg = self.cfg
        self.function_grid = cfg.grid.real_grid(1)
        self.symbol_grid = PhaseGrid.square(1, cfg.symbol_grid.half_width, cfg.symbol_grid.points_per_axis)
        self.complex_grid = ComplexGrid.square(1, cfg.complex_grid.half_width, cfg.complex_grid.points_per_axis)

    @property
    def symbols(self) -> List[str]:
        return list(self.cfg.corpus["symbols"])

    def tol(self, name: str) -> float:
        return self.cfg.tolerance(name)

    def check(self, name: str, anchor: str, func: Callable[[], Outcome]) -> CheckRecord:
        """Run one check of the current suite and record it"""
        start = time.perf_counter()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                outcome = func()
            except RegistryError:
                raise
            except WeylscopeError as e:
                outcome = Outcome({"error": f"{type(e).__name__}: {e}"}, {}, False)
        runtime = time.perf_counter() - start

        boundary = outcome.boundary_flag or any(issubclass(w.category, BOUNDARY_WARNINGS) for w in caught)
        tail = outcome.tail_flag or any(issubclass(w.category, TruncationWarning) for w in caught)
        record = CheckRecord(
            suite=self.suite,
            name=name,
            anchor=anchor,
            computed=outcome.computed,
            expected=outcome.expected,
            tolerance=outcome.tolerance,
            status=status_for(outcome.passed, boundary, tail),
            runtime=runtime,
        )
        self.report.add(record)
        if self.logger is not None:
            self.logger.check(self.suite, name, record.status, runtime, anchor=anchor)
            for w in caught:
                self.logger.debug(str(w.message), suite=self.suite, check=name, category=w.category.__name__)
        return record
