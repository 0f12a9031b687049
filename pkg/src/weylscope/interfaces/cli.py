"""
weylscope command line

Commands:
    quantize  Weyl kernel of a symbol, written as CSV
    compose   a # b on the quantization grid, written as CSV
    stft      STFT table of a symbol against an order function, written as CSV
    snorm     S~(m) norm of a symbol with the location of the maximum
    mnorm     M^p norm of a function under a registered phase
    rankone   (a^w u, v) through the rank-one decomposition, with its oracle
    verify    run the verification suites of a config file

Global flags (before the command):
    --grid-N, --grid-L  function grid (symbol commands use the square grid
                        with the same N and L)
    --workers           FFT worker count
    --out               output directory

Exit status: 0 on success; for verify, 0 iff no check failed. Errors in the
inputs exit with 2 and a one-line message on stderr.
"""

import argparse
import csv
import json
import sys
from dataclasses import replace
from datetime import datetime
from pathlib import Path
from typing import List, Optional

from .. import __version__
from ..bargmann.phases import phi_weight
from ..bargmann.transform import ComplexGrid, bargmann_transform, hp_norm
from ..core.errors import WeylscopeError
from ..core.grids import PhaseGrid, RealGrid, SampledSymbol
from ..rankone.reconstruct import COEFFICIENT_ROUTES, RankOneQuadrature, rank_one_reconstruct
from ..runtime.config import GridSettings, SuiteConfig, load_config, print_config_status
from ..runtime.suites import run_suite
from ..stft.transform import export_stft_csv, locate_stilde_norm, stft
from ..storage.report import emit_report
from ..storage.report_archive import ReportArchive
from ..storage.run_log import RunLogger
from ..weyl.kernels import moyal_compose, symbol_to_kernel
from .specs import function_on, get_order, get_phase, symbol_on, weyl_symbol

DEFAULT_N = 128
DEFAULT_L = 8.0


def _function_grid(args) -> RealGrid:
    return RealGrid(1, args.grid_L or DEFAULT_L, args.grid_N or DEFAULT_N)


def _symbol_grid(args) -> PhaseGrid:
    return PhaseGrid.square(1, args.grid_L or DEFAULT_L, args.grid_N or DEFAULT_N)


def _out(args) -> Path:
    path = Path(args.out or "weylscope-out")
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit(data) -> None:
    print(json.dumps(data, indent=2))


def write_symbol_csv(a: SampledSymbol, path: Path) -> Path:
    """Columns x, xi, re, im of a symbol on an n = 1 grid"""
    X, XI = a.grid.mesh()
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["x", "xi", "re", "im"])
        for x, xi, v in zip(X.ravel(), XI.ravel(), a.values.ravel()):
            writer.writerow([repr(float(x)), repr(float(xi)), repr(v.real), repr(v.imag)])
    return path


# Commands

def cmd_quantize(args) -> int:
    K = symbol_to_kernel(weyl_symbol(args.symbol, _function_grid(args)))
    path = K.to_csv(_out(args) / args.name)
    _emit({"symbol": args.symbol, "kernel": str(path)})
    return 0


def cmd_compose(args) -> int:
    fg = _function_grid(args)
    c = moyal_compose(weyl_symbol(args.a, fg), weyl_symbol(args.b, fg))
    path = write_symbol_csv(c, _out(args) / args.name)
    _emit({"a": args.a, "b": args.b, "symbol": str(path)})
    return 0


def cmd_stft(args) -> int:
    a = symbol_on(args.symbol, _symbol_grid(args))
    m = get_order(args.order)
    table = stft(a, stride=args.stride, workers=args.workers)
    path = export_stft_csv(table, m, _out(args) / args.name)
    _emit({"symbol": args.symbol, "order_function": args.order, "table": str(path),
           "boundary_flag": table.boundary_flag})
    return 0


def cmd_snorm(args) -> int:
    a = symbol_on(args.symbol, _symbol_grid(args))
    result = locate_stilde_norm(a, get_order(args.order), stride=args.stride, workers=args.workers)
    _emit({"symbol": args.symbol, "order_function": args.order, "value": result.value,
           "T": list(result.T), "Xi": list(result.Xi), "boundary_flag": result.boundary_flag})
    return 0


def cmd_mnorm(args) -> int:
    phi = get_phase(args.phase)
    u = function_on(args.input, _function_grid(args))
    V = bargmann_transform(u, phi, ComplexGrid.square(1, args.box_L, args.box_N))
    W = phi_weight(phi)
    value = hp_norm(V, W, args.p)
    out = {"input": args.input, "phase": args.phase, "p": args.p, "norm": value}
    if args.csv:
        out["transform"] = str(V.to_csv(_out(args) / args.csv, W))
    _emit(out)
    return 0


def cmd_rankone(args) -> int:
    fg = _function_grid(args)
    a = symbol_on(args.symbol, PhaseGrid.square(1, 6.0, 64))
    u = function_on(args.u, fg)
    v = function_on(args.v, fg)
    quad = RankOneQuadrature(args.radius, args.nodes)
    result = rank_one_reconstruct(a, u, v, quad, coefficients=args.coefficients)
    oracle = complex(symbol_to_kernel(weyl_symbol(args.symbol, fg)).apply(u).inner(v))
    rel = abs(result.value - oracle) / max(abs(oracle), 1e-300)
    _emit({
        "value_re": result.value.real,
        "value_im": result.value.imag,
        "oracle_re": oracle.real,
        "oracle_im": oracle.imag,
        "rel_error": rel,
        "tail_flag": result.tail_flag,
        "coefficients": args.coefficients,
    })
    return 0


def _apply_overrides(cfg: SuiteConfig, args) -> SuiteConfig:
    if args.grid_N or args.grid_L:
        grid = GridSettings(args.grid_L or cfg.grid.half_width, args.grid_N or cfg.grid.points_per_axis)
        cfg = replace(cfg, grid=grid)
    if args.workers is not None:
        cfg = replace(cfg, workers=args.workers)
    if args.out:
        cfg = replace(cfg, output_dir=args.out)
    return cfg


def cmd_verify(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    if args.dry_run:
        print_config_status(cfg)
        return 0

    out = Path(cfg.output_dir)
    run_id = args.run_id or datetime.now().strftime("verify-%Y%m%d-%H%M%S")
    logger = RunLogger(run_id, out)
    logger.info("verification started", suites=",".join(cfg.ordered_suites()))
    report = run_suite(cfg, logger)
    written = emit_report(report, out, run_id=run_id)
    summary = report.summary
    logger.info("verification finished", **summary)

    print(f"weylscope {__version__}: {summary['pass']} passed, {summary['fail']} failed, "
          f"{summary['warn']} warned")
    for record in report.failures():
        print(f"  FAIL {record.suite}/{record.name} [{record.anchor}]")
    print(f"Report: {written['report']}")
    archive = ReportArchive(out)
    repeat = " (unchanged since the previous run)" if archive.same_as_previous() else ""
    print(f"Report hash: {archive.latest_hash()}{repeat}")
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weylscope",
        description="Weyl calculus, STFT symbol norms and FBI-Bargmann transforms at desk scale",
    )
    parser.add_argument("--version", action="version", version=f"weylscope {__version__}")
    parser.add_argument("--grid-N", dest="grid_N", type=int, default=None,
                        help=f"Grid points per axis (default: {DEFAULT_N})")
    parser.add_argument("--grid-L", dest="grid_L", type=float, default=None,
                        help=f"Grid half width (default: {DEFAULT_L:g})")
    parser.add_argument("--workers", type=int, default=None, help="FFT workers (default: physical cores)")
    parser.add_argument("--out", default=None, help="Output directory (default: weylscope-out)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quantize", help="Weyl kernel of a symbol")
    p.add_argument("--symbol", required=True, help="Symbol spec, e.g. f0 or gauss_bump:s=0.7")
    p.add_argument("--name", default="kernel.csv", help="Output file name")
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("compose", help="Weyl product a # b")
    p.add_argument("--a", required=True, help="First symbol spec")
    p.add_argument("--b", required=True, help="Second symbol spec")
    p.add_argument("--name", default="compose.csv", help="Output file name")
    p.set_defaults(func=cmd_compose)

    for name, func, help_text in (("stft", cmd_stft, "STFT table of a symbol"),
                                  ("snorm", cmd_snorm, "S~(m) norm of a symbol")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--symbol", required=True, help="Symbol spec")
        p.add_argument("--order", default="one", help="Order function name (default: one)")
        p.add_argument("--stride", type=int, default=4, help="T decimation (default: 4)")
        if name == "stft":
            p.add_argument("--name", default="stft.csv", help="Output file name")
        p.set_defaults(func=func)

    p = sub.add_parser("mnorm", help="M^p norm of a function")
    p.add_argument("--phase", default="radial", help="Registered phase (default: radial)")
    p.add_argument("--p", default="2", choices=["1", "2", "inf"], help="Exponent")
    p.add_argument("--input", required=True, help="Function spec, e.g. hermite:2")
    p.add_argument("--box-L", dest="box_L", type=float, default=8.0, help="Complex box half width")
    p.add_argument("--box-N", dest="box_N", type=int, default=64, help="Complex box points per axis")
    p.add_argument("--csv", default=None, help="Also write T u to this file name")
    p.set_defaults(func=cmd_mnorm)

    p = sub.add_parser("rankone", help="Rank-one reconstruction of (a^w u, v)")
    p.add_argument("--symbol", required=True, help="Schwartz symbol spec")
    p.add_argument("--u", required=True, help="Function spec")
    p.add_argument("--v", required=True, help="Function spec")
    p.add_argument("--nodes", type=int, default=16, help="Quadrature nodes per axis M")
    p.add_argument("--radius", type=float, default=5.0, help="Truncation radius R")
    p.add_argument("--coefficients", choices=COEFFICIENT_ROUTES, default="real",
                   help="Where the zeta integral of F is taken")
    p.set_defaults(func=cmd_rankone)

    p = sub.add_parser("verify", help="Run verification suites")
    p.add_argument("--config", default=None, help="YAML config (default: built-in defaults, no suites)")
    p.add_argument("--dry-run", action="store_true", help="Print the configuration and exit")
    p.add_argument("--run-id", default=None, help="Run name for the log and report archive")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WeylscopeError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
