"""
Verification reports

A suite run produces a VerificationReport: one CheckRecord per check plus
the configuration it ran with and the package versions. emit_report writes
it as report.json with a fixed key order and fixed float formatting, so two
runs with the same configuration and worker count give byte-identical files.

Runtimes are kept out of report.json (they differ run to run). They go to
runtimes.csv next to it and to the run log.

Layout of an output directory:
    report.json
    runtimes.csv
    <table>.csv         one per exported table
    versions/report/    archived copies of every report.json
"""

from __future__ import annotations

import csv
import json
import math
import platform
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import scipy

from ..core.errors import ReportError
from .report_archive import ReportArchive

STATUSES = ("pass", "fail", "warn-tail", "warn-boundary")

# Named results a record may point at; "plumbing" marks checks of the
# artifact machinery itself
ANCHORS: Dict[str, str] = {
    "plumbing": "artifact plumbing",
    "core.symplectic-form": "sigma(X, Y) = JX.Y with J^2 = -1, J^t = -J",
    "core.q-bijection": "q(x, y) = ((x + y)/2, J^{-1}(y - x))",
    "core.order-function": "m(X) <= C0 <X - Y>^N0 m(Y)",
    "core.lattice-partition": "sum over the lattice of translated windows is 1",
    "stft.window": "f_T = 2^n exp(-|Y - T|^2), the Weyl symbol of the projection on e_0",
    "stft.criterion": "S~(m) norm as sup |F(f_T a)(Xi)| / m(T, Xi)",
    "stft.lattice-definition": "S~(m) norm through windowed L^2 norms on a lattice",
    "stft.density": "mollified symbols stay bounded in S~(m) and converge",
    "stft.symplectic-fourier": "F_sigma b(X) = pi^{-n} int exp(2i sigma(X, Y)) b(Y) dY",
    "weyl.quantization": "Weyl kernel K(x, y) = (F_2^{-1} a)((x + y)/2, x - y)",
    "weyl.projection-symbol": "f_0^w is the projection on C e_0",
    "weyl.composition": "symbol of a_1^w o a_2^w",
    "weyl.schur-operator": "row and column sups of m(q(x, y))",
    "weyl.composed-weight": "m_3(x, y) = int m_1(q(x, z)) m_2(q(z, y)) dz is an order function",
    "weyl.operator-bound": "||a^w u|| <= C ||a|| ||M|| ||u|| in M^p",
    "weyl.product-bound": "||a_1 # a_2||_{S~(m_3)} <= C ||a_1|| ||a_2||",
    "bargmann.transform": "T is unitary from L^2 onto H_Phi",
    "bargmann.ground-state": "T e_0 is a constant times exp(i g)",
    "bargmann.hp-spaces": "H^p_Phi norms and the reproducing projection",
    "bargmann.phase-independence": "M^p norms under two phases are equivalent",
    "bargmann.fourier-invariance": "M^p norms are invariant under F_0",
    "rankone.magnetic-translation": "magnetic translations are isometries of H^p_Phi",
    "rankone.egorov": "T exp(-i l(x, D)) = exp(-i k(x, D)) T with k = l o kappa^{-1}",
    "rankone.coherent-state": "V_Y decays like a Gaussian around the point above Y",
    "rankone.reconstruction": "a^w as an integral of rank-one operators",
    "rankone.effective-kernel": "|K_eff(x, z)| <= C ||a|| m(q~(x, z))",
    "rankone.offdiagonal-decay": "effective kernels of S(m) symbols decay off the diagonal",
    "rankone.schur-chain": "the intermediate Schur estimate of the boundedness argument",
}


def status_for(passed: bool, boundary_flag: bool = False, tail_flag: bool = False) -> str:
    """Map a comparison and its diagnostics to a record status"""
    if not passed:
        return "fail"
    if boundary_flag:
        return "warn-boundary"
    if tail_flag:
        return "warn-tail"
    return "pass"


@dataclass
class CheckRecord:
    """
    Outcome of one check.

    Attributes:
        suite: Suite the check belongs to
        name: Check name, unique within the suite
        anchor: Key of ANCHORS
        computed: Computed quantities
        expected: Oracle or expected quantities
        tolerance: Tolerance the comparison used (None for bracket checks)
        status: One of STATUSES
        runtime: Seconds spent (not written to report.json)
    """

    suite: str
    name: str
    anchor: str
    computed: Dict[str, Any] = field(default_factory=dict)
    expected: Dict[str, Any] = field(default_factory=dict)
    tolerance: Optional[float] = None
    status: str = "pass"
    runtime: float = 0.0

    def __post_init__(self) -> None:
        if self.anchor not in ANCHORS:
            raise ReportError(f"unknown anchor {self.anchor!r} for check {self.suite}/{self.name}")
        if self.status not in STATUSES:
            raise ReportError(f"status must be one of {STATUSES}, got {self.status!r}")

    @property
    def failed(self) -> bool:
        return self.status == "fail"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "tolerance": self.tolerance,
            "computed": self.computed,
            "expected": self.expected,
        }


@dataclass
class Table:
    """A plot-ready table exported as CSV"""

    header: List[str]
    rows: List[Sequence[Any]] = field(default_factory=list)


def package_versions() -> Dict[str, str]:
    from .. import __version__

    return {
        "weylscope": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


@dataclass
class VerificationReport:
    """
    Records of a suite run with the configuration they ran under.

    Attributes:
        config_echo: The configuration as plain data
        records: Check records in execution order
        versions: Package versions
        tables: Exported tables by name
    """

    config_echo: Dict[str, Any] = field(default_factory=dict)
    records: List[CheckRecord] = field(default_factory=list)
    versions: Dict[str, str] = field(default_factory=package_versions)
    tables: Dict[str, Table] = field(default_factory=dict)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    def add_table(self, name: str, header: List[str], rows: List[Sequence[Any]]) -> None:
        if name in self.tables or name == "runtimes":
            raise ReportError(f"duplicate table name {name!r}")
        self.tables[name] = Table(list(header), list(rows))

    @property
    def summary(self) -> Dict[str, int]:
        statuses = [r.status for r in self.records]
        return {
            "pass": statuses.count("pass"),
            "fail": statuses.count("fail"),
            "warn": sum(s.startswith("warn") for s in statuses),
        }

    @property
    def exit_code(self) -> int:
        return 1 if any(r.failed for r in self.records) else 0

    def failures(self) -> List[CheckRecord]:
        return [r for r in self.records if r.failed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config_echo": self.config_echo,
            "records": [r.to_dict() for r in self.records],
            "summary": self.summary,
            "versions": self.versions,
        }


# Serialization

def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _encode(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return _encode({"re": float(value.real), "im": float(value.imag)}, indent, level)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, np.ndarray):
        return _encode(value.tolist(), indent, level)
    if isinstance(value, Mapping):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    raise ReportError(f"cannot serialize value of type {type(value).__name__}")


def dumps_report(report: VerificationReport, indent: int = 2) -> str:
    """report.json text: insertion key order, floats with 17 significant digits"""
    return _encode(report.to_dict(), indent, 0) + "\n"


def _csv_cell(value: Any) -> Any:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (complex, np.complexfloating)):
        return f"{value.real:.17g}{value.imag:+.17g}j"
    return value


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(v) for v in row])


def emit_report(report: VerificationReport, directory: Union[str, Path], archive: bool = True,
                run_id: str = "") -> Dict[str, Path]:
    """
    Write report.json, runtimes.csv and one CSV per table.

    Existing files are overwritten. With archive=True the report text is
    also stored in a ReportArchive under the same directory.

    Args:
        report: The report
        directory: Output directory (created if missing)
        archive: Archive report.json under versions/report/
        run_id: Run name stored with the archived copy

    Returns:
        Paths written, by name ('report', 'runtimes', and table names)

    Raises:
        ReportError: On any I/O failure, carrying the path
    """
    out = Path(directory)
    target = out
    try:
        out.mkdir(parents=True, exist_ok=True)
        written: Dict[str, Path] = {}

        target = out / "report.json"
        text = dumps_report(report)
        target.write_text(text)
        written["report"] = target

        target = out / "runtimes.csv"
        _write_csv(target, ["suite", "name", "status", "runtime"],
                   [(r.suite, r.name, r.status, f"{r.runtime:.3f}") for r in report.records])
        written["runtimes"] = target

        for name, table in report.tables.items():
            target = out / f"{name}.csv"
            _write_csv(target, table.header, table.rows)
            written[name] = target
    except OSError as e:
        raise ReportError(f"cannot write report ({e.strerror})", target) from e

    if archive:
        ReportArchive(out).save(text, run_id=run_id, message=f"summary {report.summary}")
    return written


def load_report(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a report.json back as plain data"""
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except OSError as e:
        raise ReportError(f"cannot read report ({e.strerror})", path) from e
