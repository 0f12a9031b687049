"""
Suite configuration

A verification run is described by a YAML document. Every key is optional;
missing keys take the defaults of SuiteConfig.

Keys:
    suites                  - list of suite names, run in the canonical order
    grid                    - function grid: {half_width, points_per_axis}
    symbol_grid             - symbol grid of the S~(m) checks
    complex_grid            - box of the H^p_Phi quadratures
    phases                  - registered phase names
    corpus                  - {symbols, functions, order_functions} name lists
    tolerances              - {name: value} overrides of DEFAULT_TOLERANCES
    allow_loose_tolerances  - permit overrides above the defaults
    workers                 - FFT worker count (null: physical cores)
    output_dir              - where report.json and the CSV tables go
    rankone                 - {radius, nodes} of the rank-one quadrature
    registry                - optional grid / order-function registry file

Nothing is read from the environment.

Usage:
    from weylscope.runtime.config import load_config

    cfg = load_config("verify.yaml")
    print_config_status(cfg)
"""

import csv
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import yaml

from ..core.errors import ConfigError, RegistryError
from ..core.grids import RealGrid
from ..core.order_functions import OrderFunction, order_function_from_spec

SUITES = ("phase-core", "stft", "weyl", "bargmann", "rankone", "theorems")

# Documented tolerances; overrides may tighten freely, loosen only with
# allow_loose_tolerances
DEFAULT_TOLERANCES: Dict[str, float] = {
    "exact": 1e-12,
    "partition": 1e-8,
    "window_integral": 1e-10,
    "stft_closed_form": 1e-8,
    "dense_scan": 0.02,
    "mollify_sup": 1e-3,
    "symplectic_fourier": 1e-8,
    "identity": 1e-8,
    "derivative": 1e-6,
    "eigenvalue": 1e-6,
    "projection": 1e-8,
    "round_trip": 1e-6,
    "commutator": 1e-4,
    "associativity": 1e-4,
    "pullback": 1e-6,
    "unitarity": 1e-6,
    "ground_state": 1e-6,
    "fourier_invariance": 1e-5,
    "phase_bracket_stability": 0.10,
    "magnetic": 1e-6,
    "egorov": 1e-5,
    "reconstruction": 0.02,
    "grid_stability": 0.20,
    "chain_slack": 0.05,
}

KNOWN_KEYS = (
    "suites", "grid", "symbol_grid", "complex_grid", "phases", "corpus", "tolerances",
    "allow_loose_tolerances", "workers", "output_dir", "rankone", "registry",
)

CORPUS_KEYS = ("symbols", "functions", "order_functions")

REGISTRY_FIELDS = ("name", "dim", "half_width", "points_per_axis", "family", "params", "C0", "N0")


@dataclass(frozen=True)
class GridSettings:
    half_width: float
    points_per_axis: int

    def real_grid(self, dim: int = 1) -> RealGrid:
        return RealGrid(dim, self.half_width, self.points_per_axis)


@dataclass(frozen=True)
class RankOneSettings:
    radius: float = 5.0
    nodes: int = 16


def default_corpus() -> Dict[str, List[str]]:
    return {
        "symbols": ["one", "f0", "gauss_bump", "shifted_gauss", "modulated_gauss", "bump",
                    "cos_xi", "bracket_weighted", "oscillator", "x"],
        "functions": ["hermite:0", "hermite:1", "hermite:2", "gauss:x0=1,p0=0.5,s=1",
                      "gauss:x0=-0.5,p0=-1,s=0.8"],
        "order_functions": ["one", "bracket_2", "decay_xi_5"],
    }


@dataclass
class SuiteConfig:
    """Configuration of a verification run"""

    suites: List[str] = field(default_factory=list)
    grid: GridSettings = GridSettings(8.0, 128)
    symbol_grid: GridSettings = GridSettings(6.0, 64)
    complex_grid: GridSettings = GridSettings(8.0, 64)
    phases: List[str] = field(default_factory=lambda: ["radial", "symbol_side", "tilted"])
    corpus: Dict[str, List[str]] = field(default_factory=default_corpus)
    tolerances: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    allow_loose_tolerances: bool = False
    workers: Optional[int] = None
    output_dir: str = "weylscope-out"
    rankone: RankOneSettings = RankOneSettings()
    registry: Optional[str] = None
    order_functions: Dict[str, OrderFunction] = field(default_factory=dict, repr=False, compare=False)

    def tolerance(self, name: str) -> float:
        return self.tolerances[name]

    def ordered_suites(self) -> List[str]:
        """Selected suites in canonical order"""
        return [s for s in SUITES if s in self.suites]

    def echo(self) -> Dict[str, Any]:
        """Plain-data copy for report.json (no registry objects)"""
        data = asdict(replace(self, order_functions={}))
        data.pop("order_functions")
        data["suites"] = self.ordered_suites()
        data["registry_order_functions"] = sorted(self.order_functions)
        return data


def _mapping(data: Any, key: str) -> Mapping[str, Any]:
    if data is None:
        return {}
    if not isinstance(data, Mapping):
        raise ConfigError(f"config key '{key}' must be a mapping, got {type(data).__name__}")
    return data


def _grid_settings(data: Any, key: str, default: GridSettings) -> GridSettings:
    data = _mapping(data, key)
    unknown = set(data) - {"half_width", "points_per_axis"}
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} under '{key}'")
    try:
        settings = GridSettings(
            float(data.get("half_width", default.half_width)),
            int(data.get("points_per_axis", default.points_per_axis)),
        )
        settings.real_grid()
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid '{key}': {e}") from e
    return settings


def _name_list(data: Any, key: str) -> List[str]:
    if isinstance(data, str) or not isinstance(data, (list, tuple)):
        raise ConfigError(f"config key '{key}' must be a list of names")
    return [str(x) for x in data]


def _suites(data: Any) -> List[str]:
    names = _name_list(data, "suites")
    for name in names:
        if name not in SUITES:
            raise ConfigError(f"unknown suite {name!r} in 'suites'; available: {list(SUITES)}")
    return names


def _tolerances(data: Any, allow_loose: bool) -> Dict[str, float]:
    tolerances = dict(DEFAULT_TOLERANCES)
    for name, value in _mapping(data, "tolerances").items():
        if name not in DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown tolerance 'tolerances.{name}'; available: {sorted(DEFAULT_TOLERANCES)}")
        try:
            value = float(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"tolerance 'tolerances.{name}' must be a number") from e
        if value < 0:
            raise ConfigError(f"tolerance 'tolerances.{name}' must be non-negative")
        if value > DEFAULT_TOLERANCES[name] and not allow_loose:
            raise ConfigError(
                f"tolerance 'tolerances.{name}' = {value:g} loosens the default "
                f"{DEFAULT_TOLERANCES[name]:g}; set allow_loose_tolerances: true"
            )
        tolerances[name] = value
    return tolerances


def _corpus(data: Any) -> Dict[str, List[str]]:
    corpus = default_corpus()
    for key, names in _mapping(data, "corpus").items():
        if key not in CORPUS_KEYS:
            raise ConfigError(f"unknown key 'corpus.{key}'; available: {list(CORPUS_KEYS)}")
        corpus[key] = _name_list(names, f"corpus.{key}")
    return corpus


def config_from_dict(data: Optional[Mapping[str, Any]], base_dir: Union[str, Path, None] = None) -> SuiteConfig:
    """
    Validate a parsed config document.

    Args:
        data: Parsed YAML (None for an empty document)
        base_dir: Directory relative registry paths are resolved against

    Raises:
        ConfigError: Naming the offending key or suite
    """
    data = _mapping(data, "<document>")
    unknown = set(data) - set(KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s) {sorted(unknown)}; available: {list(KNOWN_KEYS)}")

    default = SuiteConfig()
    allow_loose = bool(data.get("allow_loose_tolerances", False))
    rank = _mapping(data.get("rankone"), "rankone")
    try:
        rankone = RankOneSettings(float(rank.get("radius", 5.0)), int(rank.get("nodes", 16)))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid 'rankone': {e}") from e
    if rankone.radius <= 0 or rankone.nodes < 2:
        raise ConfigError("'rankone' needs radius > 0 and nodes >= 2")

    workers = data.get("workers")
    if workers is not None and (not isinstance(workers, int) or workers < 1):
        raise ConfigError(f"'workers' must be a positive integer or null, got {workers!r}")

    cfg = SuiteConfig(
        suites=_suites(data.get("suites", [])),
        grid=_grid_settings(data.get("grid"), "grid", default.grid),
        symbol_grid=_grid_settings(data.get("symbol_grid"), "symbol_grid", default.symbol_grid),
        complex_grid=_grid_settings(data.get("complex_grid"), "complex_grid", default.complex_grid),
        phases=_name_list(data.get("phases", default.phases), "phases"),
        corpus=_corpus(data.get("corpus")),
        tolerances=_tolerances(data.get("tolerances"), allow_loose),
        allow_loose_tolerances=allow_loose,
        workers=workers,
        output_dir=str(data.get("output_dir", default.output_dir)),
        rankone=rankone,
        registry=data.get("registry"),
    )
    if cfg.registry:
        path = Path(cfg.registry)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        entries = load_registry(path)
        cfg = replace(cfg, order_functions={
            name: e.order_function for name, e in entries.items() if e.order_function is not None
        })
    return cfg


def load_config(path: Union[str, Path, None] = None) -> SuiteConfig:
    """
    Load a suite configuration from YAML (defaults when path is None).

    Raises:
        ConfigError: If the file is missing, is not YAML, or fails validation
    """
    if path is None:
        return SuiteConfig()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from e
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"config {path} is not valid YAML: {e}") from e
    return config_from_dict(data, base_dir=path.parent)


# Registry files

@dataclass(frozen=True)
class RegistryEntry:
    """A named grid and/or order function read from a registry file"""

    name: str
    grid: Optional[RealGrid] = None
    order_function: Optional[OrderFunction] = None


def _parse_params(value: Any) -> List[float]:
    if value is None or value == "":
        return []
    if isinstance(value, (int, float)):
        return [float(value)]
    if isinstance(value, str):
        return [float(p) for p in value.split(",") if p.strip()]
    return [float(p) for p in value]


def _registry_entry(row: Mapping[str, Any]) -> RegistryEntry:
    name = str(row.get("name") or "").strip()
    if not name:
        raise ConfigError("registry row without a name")
    grid = None
    if row.get("dim") not in (None, "") and row.get("half_width") not in (None, ""):
        try:
            grid = RealGrid(int(row["dim"]), float(row["half_width"]), int(row["points_per_axis"]))
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"registry entry {name!r}: invalid grid ({e})") from e
    m = None
    family = str(row.get("family") or "").strip()
    if family:
        spec: Dict[str, Any] = {"family": family, "params": _parse_params(row.get("params"))}
        for key in ("C0", "N0"):
            if row.get(key) not in (None, ""):
                spec[key] = float(row[key])
        try:
            m = replace(order_function_from_spec(spec), label=name)
        except (ValueError, IndexError, RegistryError) as e:
            raise ConfigError(f"registry entry {name!r}: invalid order function ({e})") from e
    return RegistryEntry(name, grid, m)


def load_registry(path: Union[str, Path]) -> Dict[str, RegistryEntry]:
    """
    Read a registry of grids and order functions.

    YAML files hold a list of mappings; .tsv files hold one row per entry
    with the columns of REGISTRY_FIELDS and '#' comment lines.

    Raises:
        ConfigError: If the file cannot be read or an entry is invalid
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            if path.suffix == ".tsv":
                rows = list(csv.DictReader((line for line in f if not line.startswith("#")), delimiter="\t"))
            else:
                rows = yaml.safe_load(f) or []
    except OSError as e:
        raise ConfigError(f"cannot read registry {path}: {e.strerror}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"registry {path} is not valid YAML: {e}") from e
    if not isinstance(rows, list):
        raise ConfigError(f"registry {path} must be a list of entries")

    entries: Dict[str, RegistryEntry] = {}
    for row in rows:
        if not isinstance(row, Mapping):
            raise ConfigError(f"registry {path}: every entry must be a mapping")
        if not any(str(v or "").strip() for v in row.values()):
            continue
        entry = _registry_entry(row)
        if entry.name in entries:
            raise ConfigError(f"registry {path}: duplicate entry {entry.name!r}")
        entries[entry.name] = entry
    return entries


def print_config_status(cfg: SuiteConfig) -> None:
    """Print a summary of a configuration"""
    print("weylscope verification configuration:")
    print(f"  Suites: {', '.join(cfg.ordered_suites()) or '(none)'}")
    print(f"  Function grid: L = {cfg.grid.half_width:g}, N = {cfg.grid.points_per_axis}")
    print(f"  Symbol grid: L = {cfg.symbol_grid.half_width:g}, N = {cfg.symbol_grid.points_per_axis}")
    print(f"  Complex grid: L = {cfg.complex_grid.half_width:g}, N = {cfg.complex_grid.points_per_axis}")
    print(f"  Phases: {', '.join(cfg.phases)}")
    for key in CORPUS_KEYS:
        print(f"  Corpus {key}: {len(cfg.corpus[key])}")
    print(f"  Rank-one quadrature: R = {cfg.rankone.radius:g}, M = {cfg.rankone.nodes}")
    print(f"  Workers: {cfg.workers if cfg.workers is not None else 'default'}")
    print(f"  Output: {cfg.output_dir}")
    changed = {k: v for k, v in cfg.tolerances.items() if v != DEFAULT_TOLERANCES[k]}
    if changed:
        print(f"  Tolerance overrides: {changed}")
    if cfg.allow_loose_tolerances:
        print("  Loose tolerances allowed")
    if cfg.order_functions:
        print(f"  Registry order functions: {', '.join(sorted(cfg.order_functions))}")
