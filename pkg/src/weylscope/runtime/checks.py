"""
Verification suites

One function per suite. Each builds its inputs from the SuiteContext and
calls ctx.check(name, anchor, func) once per check; the checks themselves are
the nested functions returning Outcome objects.

Suites:
    phase-core  symplectic form, q map, order functions, lattice partitions
    stft        window, S~(m) norm by the STFT, lattice norm, mollifiers,
                symplectic Fourier transform
    weyl        kernel map, composition, Schur quantities, composed weights
    bargmann    unitarity, ground state, reproducing projection, F_0
                invariance, change of phase
    rankone     magnetic translations, Egorov, coherent states, rank-one
                reconstruction, effective kernels, Schur chain
    theorems    empirical constants of the operator and product bounds
"""

from __future__ import annotations

import itertools
import warnings
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from ..bargmann.hermite import hermite_batch, hermite_sample
from ..bargmann.phases import bergman_constant, ground_state_form, phi_weight
from ..bargmann.transform import (
    ComplexGrid,
    bargmann_transform,
    calibrated_weight,
    hp_norm,
    norm_ratio_bracket,
    reproducing_constant,
    reproducing_projection,
    unitary_fourier,
)
from ..core.errors import AliasingWarning, BoundaryMassWarning
from ..core.grids import PhaseGrid, RealGrid, SampledFunction, SampledSymbol
from ..core.lattice import Lattice, WindowSpec, partition_check
from ..core.order_functions import OrderFunction, bracket, certify_order_function, check_order_function
from ..core.symplectic import SymplecticStructure, q_inverse, q_map, symplectic_form
from ..interfaces.specs import function_on, get_phase, symbol_entry, symbol_on, weyl_symbol
from ..rankone.chain import schur_chain_check
from ..rankone.coherent import coherent_norms, overlap_profile
from ..rankone.effective import effective_kernel, kernel_bound_constant, offdiagonal_slope, route_discrepancy
from ..rankone.magnetic import LinearFormEll, egorov_check, magnetic_translate, translated_transform
from ..rankone.reconstruct import (
    RankOneQuadrature,
    pullback_coefficients,
    rank_one_coefficients,
    rank_one_reconstruct,
)
from ..stft.lattice_norm import lattice_stilde_norm
from ..stft.mollify import MollifierSpec, mollify
from ..stft.symplectic_fourier import symplectic_fourier
from ..stft.transform import dense_stilde_norm, locate_stilde_norm, square_grid, stft, stilde_norm, t_nodes
from ..stft.windows import gaussian_window_f
from ..utils.fitting import fit_log_slope
from ..utils.fourier import spectral_derivative
from ..weyl.kernels import kernel_to_symbol, moyal_compose, resample_symbol, symbol_to_kernel
from ..weyl.schur import compose_order_functions, schur_bounds
from .context import SCHUR_GRID, Outcome, SuiteContext, within

# Symbols whose STFT stays inside the default symbol box
NARROW_BUMP = "gauss_bump:s=0.6"
SHIFTED_BUMP = "gauss_bump:c1=0.5,c2=-0.5,s=0.6"

MOLLIFY_SWEEP = (1, 2, 4, 8, 16)
MOLLIFY_LIMIT = 64

P_SWEEP: Tuple[str, ...] = ("1", "2", "inf")

# Symbols the effective-kernel bound constant is compared over
GAUSSIAN_SYMBOLS = ("f0", "gauss_bump", "shifted_gauss", "modulated_gauss")

# Nodes per axis of the refined rank-one quadrature
REFINED_NODES = 24

# Symbols whose coefficients F are compared between the real and pullback routes
PULLBACK_SYMBOLS = ("f0", "shifted_gauss")

RECONSTRUCTION_TRIPLES = (
    ("f0", "hermite:0", "hermite:0"),
    ("gauss_bump", "hermite:1", "hermite:1"),
    ("shifted_gauss", "gauss:x0=1,p0=0.5,s=1", "hermite:0"),
    ("modulated_gauss", "hermite:0", "hermite:1"),
    ("bump", "hermite:2", "hermite:0"),
    ("modulated_gauss", "gauss:x0=1,p0=0.5,s=1", "gauss:x0=-0.5,p0=-1,s=0.8"),
)

ASSOCIATIVITY_TRIPLES = (
    ("f0", "gauss_bump", "modulated_gauss"),
    ("modulated_gauss", "f0", "gauss_bump"),
    ("gauss_bump", "modulated_gauss", "modulated_gauss"),
)

EGOROV_FORMS = {
    "translation": LinearFormEll(np.array([0.0]), np.array([0.75])),
    "modulation": LinearFormEll(np.array([-1.0]), np.array([0.0])),
    "mixed": LinearFormEll(np.array([0.5]), np.array([-0.6])),
}


def _max_abs(values) -> float:
    return float(np.max(np.abs(values)))


def _rel_change(first: float, second: float) -> float:
    return abs(second - first) / max(abs(first), 1e-300)


def _interior(nodes: np.ndarray, reach: float) -> np.ndarray:
    return np.all((np.abs(nodes.real) <= reach) & (np.abs(nodes.imag) <= reach), axis=-1)


def refined_nodes(nodes: int) -> int:
    """REFINED_NODES, or half as many again once the base rule reaches it"""
    return REFINED_NODES if nodes < REFINED_NODES else nodes + nodes // 2


def doubled_grids(ctx: SuiteContext) -> Tuple[RealGrid, ComplexGrid, PhaseGrid]:
    """Function, complex and symbol grids of the context with twice the nodes on the same boxes"""
    cg, sg = ctx.complex_grid, ctx.symbol_grid
    return (ctx.function_grid.refine(),
            ComplexGrid.square(1, cg.re.half_width, 2 * cg.re.points_per_axis),
            PhaseGrid.square(1, sg.x.half_width, 2 * sg.x.points_per_axis))


def _quiet(func: Callable[[], Outcome], *categories) -> Callable[[], Outcome]:
    """Run func with the given warning categories ignored"""

    def run() -> Outcome:
        with warnings.catch_warnings():
            for category in categories:
                warnings.simplefilter("ignore", category)
            return func()

    return run


# phase-core

def phase_core_suite(ctx: SuiteContext) -> None:
    S = SymplecticStructure.standard(1)
    exact = ctx.tol("exact")

    def structure() -> Outcome:
        J = S.J
        sq = int(np.abs(J @ J + np.eye(2, dtype=np.int64)).max())
        skew = int(np.abs(J.T + J).max())
        return Outcome({"J2_plus_I": sq, "Jt_plus_J": skew}, {"J2_plus_I": 0, "Jt_plus_J": 0},
                       sq == 0 and skew == 0, 0.0)

    def examples() -> Outcome:
        s1 = float(symplectic_form([1.0, 0.0], [0.0, 1.0]))
        s2 = float(symplectic_form([1.0, 2.0], [3.0, 4.0]))
        return Outcome({"sigma_e1_e2": s1, "sigma_12_34": s2}, {"sigma_e1_e2": -1.0, "sigma_12_34": 2.0},
                       s1 == -1.0 and s2 == 2.0, 0.0)

    def antisymmetry() -> Outcome:
        rng = np.random.default_rng(0)
        X = rng.normal(size=(100, 2))
        Y = rng.normal(size=(100, 2))
        skew = _max_abs(symplectic_form(X, Y) + symplectic_form(Y, X))
        diag = _max_abs(symplectic_form(X, X))
        return Outcome({"max_sum": skew, "max_diagonal": diag}, {"max_sum": 0.0, "max_diagonal": 0.0},
                       skew == 0.0 and diag == 0.0, 0.0)

    def q_round_trip() -> Outcome:
        rng = np.random.default_rng(1)
        x = rng.normal(size=(200, 2))
        y = rng.normal(size=(200, 2))
        bx, by = q_inverse(q_map(x, y))
        err = max(_max_abs(bx - x), _max_abs(by - y))
        diag = q_map(x, x)
        diag_err = max(_max_abs(diag[:, :2] - x), _max_abs(diag[:, 2:]))
        example = q_map([1.0, 0.0], [0.0, 0.0])
        ex_err = _max_abs(example - np.array([0.5, 0.0, 0.0, -1.0]))
        return Outcome(
            {"round_trip": err, "diagonal": diag_err, "example": example},
            {"round_trip": 0.0, "diagonal": 0.0, "example": [0.5, 0.0, 0.0, -1.0]},
            max(err, diag_err, ex_err) <= exact,
            exact,
        )

    ctx.check("J-structure", "core.symplectic-form", structure)
    ctx.check("sigma-examples", "core.symplectic-form", examples)
    ctx.check("sigma-antisymmetry", "core.symplectic-form", antisymmetry)
    ctx.check("q-round-trip", "core.q-bijection", q_round_trip)

    cert_grid = RealGrid(4, 2.0, 8)
    for name, m in ctx.order_functions.items():
        def certify(m: OrderFunction = m) -> Outcome:
            empirical = check_order_function(m, cert_grid)
            return Outcome({"C0_empirical": empirical}, {"C0_certified": m.C0, "N0": m.N0}, True)

        ctx.check(f"certify[{name}]", "core.order-function", certify)

    for (n1, m1), (n2, m2) in itertools.combinations(ctx.order_functions.items(), 2):
        def product_bound(m1: OrderFunction = m1, m2: OrderFunction = m2) -> Outcome:
            C0 = certify_order_function(m1 * m2, cert_grid, m1.N0 + m2.N0)
            bound = m1.C0 * m2.C0
            return Outcome({"C0": C0}, {"C0_bound": bound}, C0 <= bound * (1.0 + 1e-9))

        ctx.check(f"product[{n1}*{n2}]", "core.order-function", product_bound)

    def peetre_growth() -> Outcome:
        m = bracket(2.0)
        small = certify_order_function(m, RealGrid(4, 1.0, 6), 1.0)
        large = certify_order_function(m, RealGrid(4, 2.0, 6), 1.0)
        return Outcome({"C0_L1": small, "C0_L2": large}, {"grows": True}, large > small)

    ctx.check("peetre-too-small-N0", "core.order-function", peetre_growth)

    part_tol = ctx.tol("partition")
    lattice = Lattice.cubic(2, 0.5)
    part_grid = RealGrid(2, 4.0, 32)

    def partition() -> Outcome:
        dev = partition_check(lattice, part_grid)
        shifted = partition_check(lattice, part_grid, shift=(0.123, -0.377))
        return Outcome({"deviation": dev, "deviation_shifted": shifted}, {"deviation": 0.0},
                       max(dev, shifted) <= part_tol, part_tol)

    def zero_window() -> Outcome:
        zero = Lattice.cubic(2, 0.5, WindowSpec("gaussian-f0", (0.0, 0.0), 1.0, 0.0))
        dev = partition_check(zero, part_grid)
        return Outcome({"deviation": dev}, {"deviation": 1.0}, dev == 1.0, 0.0)

    ctx.check("lattice-partition", "core.lattice-partition", partition)
    ctx.check("lattice-zero-window", "core.lattice-partition", zero_window)


# stft

def stft_suite(ctx: SuiteContext) -> None:
    grid = ctx.symbol_grid
    workers = ctx.cfg.workers
    m_one = ctx.order_functions.get("one") or bracket(0.0)
    window_tol = ctx.tol("window_integral")
    closed_tol = ctx.tol("stft_closed_form")
    f0 = symbol_on("f0", grid)

    def window() -> Outcome:
        f = gaussian_window_f((0.0, 0.0), grid)
        c = grid.x.center_index
        centre = float(f.values[c, c].real)
        integral = float(f.integral().real)
        ok = centre == 2.0 and within(integral, 2.0 * np.pi, window_tol, relative=True)
        return Outcome({"f0_origin": centre, "integral": integral}, {"f0_origin": 2.0, "integral": 2.0 * np.pi},
                       ok, window_tol)

    def constant_symbol() -> Outcome:
        one = symbol_on("one", grid)
        table = stft(one, T_points=np.array([[0.0, 0.0], [1.0, -1.0]]), workers=workers)
        xi = table.xi_points()
        exact = 2.0 * np.pi * np.exp(-np.sum(xi * xi, axis=-1) / 4.0)
        err = max(_max_abs(np.abs(v).ravel() - exact) for v in table.values)
        return Outcome({"max_error": err}, {"modulus": "2 pi exp(-|Xi|^2 / 4)"}, err <= closed_tol,
                       closed_tol, boundary_flag=table.boundary_flag)

    def f0_origin() -> Outcome:
        table = stft(f0, T_points=np.zeros((1, 2)), workers=workers)
        c = table.Xi_grid.center_index
        value = complex(table.values[0, c, c])
        return Outcome({"value": value}, {"value": 2.0 * np.pi},
                       within(value, 2.0 * np.pi, closed_tol, relative=True), closed_tol)

    ctx.check("window-f0", "stft.window", window)
    ctx.check("constant-symbol", "stft.criterion", constant_symbol)
    ctx.check("f0-at-origin", "stft.criterion", f0_origin)

    exact = ctx.tol("exact")
    bump = symbol_on(NARROW_BUMP, grid)
    shifted = symbol_on(SHIFTED_BUMP, grid)

    def norm_axioms() -> Outcome:
        lam = 0.7 - 1.3j
        n0 = stilde_norm(f0, m_one, workers=workers)
        n_scaled = stilde_norm(f0.scaled(lam), m_one, workers=workers)
        homogeneity = abs(n_scaled - abs(lam) * n0) / n0
        na = stilde_norm(bump, m_one, workers=workers)
        nb = stilde_norm(shifted, m_one, workers=workers)
        nsum = stilde_norm(bump + shifted, m_one, workers=workers)
        ok = homogeneity <= exact and nsum <= (na + nb) * (1.0 + exact)
        return Outcome({"homogeneity_error": homogeneity, "norm_sum": nsum, "sum_of_norms": na + nb},
                       {"homogeneity_error": 0.0}, ok, exact)

    def monotone_in_m() -> Outcome:
        heavier = ctx.order_functions.get("bracket_2") or bracket(2.0)
        light = stilde_norm(f0, m_one, workers=workers)
        heavy = stilde_norm(f0, heavier, workers=workers)
        return Outcome({"norm_one": light, "norm_heavier_weight": heavy}, {"ordered": True},
                       heavy <= light * (1.0 + exact), exact)

    def symmetry() -> Outcome:
        table = stft(f0, T_points=np.array([[1.0, 0.5], [-1.0, -0.5]]), workers=workers)
        plus = np.abs(table.values[0])[1:, 1:]
        minus = np.abs(table.values[1])[1:, 1:][::-1, ::-1]
        err = _max_abs(plus - minus)
        return Outcome({"max_error": err}, {"max_error": 0.0}, err <= window_tol, window_tol)

    ctx.check("norm-axioms", "stft.criterion", norm_axioms)
    ctx.check("monotone-in-m", "stft.criterion", monotone_in_m)
    ctx.check("even-symbol-symmetry", "stft.criterion", symmetry)

    dense_tol = ctx.tol("dense_scan")
    for spec in ("f0", NARROW_BUMP):
        def dense(spec: str = spec) -> Outcome:
            a = symbol_on(spec, grid)
            fast = locate_stilde_norm(a, m_one, workers=workers)
            T = t_nodes(square_grid(a), 2)
            T = T[np.all(np.abs(T) <= 1.5, axis=-1)]
            line = np.linspace(-2.0, 2.0, 17)
            Xi = np.stack([g.ravel() for g in np.meshgrid(line, line, indexing="ij")], axis=-1)
            brute = dense_stilde_norm(a, m_one, T, Xi)
            rel = _rel_change(fast.value, brute)
            return Outcome({"fft": fast.value, "dense": brute, "argmax_T": fast.T, "argmax_Xi": fast.Xi},
                           {"relative_difference": 0.0}, rel <= dense_tol, dense_tol,
                           boundary_flag=fast.boundary_flag)

        ctx.check(f"dense-scan[{spec}]", "stft.criterion", dense)

    lattice = Lattice.cubic(4, 1.0)
    for spec in ("f0", NARROW_BUMP):
        def lattice_bracket(spec: str = spec) -> Outcome:
            a = symbol_on(spec, grid)
            reference = stilde_norm(a, m_one, workers=workers)
            inner = lattice_stilde_norm(a, lattice, m_one, radius=2.0, warn=False)
            outer = lattice_stilde_norm(a, lattice, m_one, radius=3.0)
            normalized = outer.value * lattice.normalization
            ratio = normalized / reference
            ok = 0.1 <= ratio <= 10.0 and inner.value <= outer.value
            return Outcome(
                {"lattice_norm": normalized, "stft_norm": reference, "ratio": ratio,
                 "radius_2": inner.value, "radius_3": outer.value, "points": outer.points},
                {"ratio_low": 0.1, "ratio_high": 10.0},
                ok,
                tail_flag=outer.truncation_flag,
            )

        ctx.check(f"lattice-bracket[{spec}]", "stft.lattice-definition", lattice_bracket)

    sweep_rows: List[Sequence] = []
    mollify_tol = ctx.tol("mollify_sup")

    def mollifier_bound() -> Outcome:
        base = stilde_norm(bump, m_one, workers=workers)
        ratios = []
        for nu in MOLLIFY_SWEEP:
            norm = stilde_norm(mollify(bump, MollifierSpec(nu)), m_one, workers=workers)
            ratios.append(norm / base)
            sweep_rows.append((nu, norm, norm / base))
        C = max(ratios)
        return Outcome({"uniform_constant": C, "ratios": ratios}, {"finite": True}, bool(np.isfinite(C)))

    def mollifier_limit() -> Outcome:
        sup = _max_abs(mollify(bump, MollifierSpec(MOLLIFY_LIMIT)).values - bump.values)
        zero = SampledSymbol(grid, np.zeros(grid.shape))
        zero_sup = max(_max_abs(mollify(zero, MollifierSpec(nu)).values) for nu in MOLLIFY_SWEEP)
        return Outcome({"sup_distance": sup, "zero_image": zero_sup}, {"sup_distance": 0.0, "zero_image": 0.0},
                       sup <= mollify_tol and zero_sup == 0.0, mollify_tol)

    ctx.check("mollifier-bound", "stft.density", mollifier_bound)
    ctx.check("mollifier-limit", "stft.density", mollifier_limit)
    if sweep_rows:
        ctx.report.add_table("mollify_sweep", ["nu", "stilde_norm", "ratio"], sweep_rows)

    sf_tol = ctx.tol("symplectic_fourier")
    for spec in ("f0", NARROW_BUMP):
        def fourier(spec: str = spec) -> Outcome:
            b = symbol_on(spec, grid)
            Fb = symplectic_fourier(b)
            c = grid.x.center_index
            origin = complex(Fb.values[c, c])
            expected = complex(b.integral()) / np.pi
            involution = _max_abs(symplectic_fourier(Fb).values - b.values)
            isometry = abs(Fb.norm() / b.norm() - 1.0)
            ok = (abs(origin - expected) <= sf_tol * abs(expected)
                  and involution <= sf_tol and isometry <= sf_tol)
            return Outcome({"origin": origin, "involution": involution, "isometry": isometry},
                           {"origin": expected, "involution": 0.0, "isometry": 0.0}, ok, sf_tol)

        ctx.check(f"symplectic-fourier[{spec}]", "stft.symplectic-fourier", fourier)


# weyl

def weyl_suite(ctx: SuiteContext) -> None:
    fg = ctx.function_grid
    h = fg.spacing
    ident_tol = ctx.tol("identity")

    def identity() -> Outcome:
        K = symbol_to_kernel(weyl_symbol("one", fg))
        err = _max_abs(K.entries * h - np.eye(fg.size))
        return Outcome({"max_error": err}, {"kernel": "I / h"}, err <= ident_tol, ident_tol)

    def multiplication() -> Outcome:
        K = symbol_to_kernel(weyl_symbol("x", fg))
        M = K.entries * h
        diag = _max_abs(np.diag(M) - fg.axis())
        off = _max_abs(M - np.diag(np.diag(M)))
        return Outcome({"diagonal_error": diag, "offdiagonal": off}, {"kernel": "x delta(x - y)"},
                       max(diag, off) <= ident_tol, ident_tol)

    def derivative() -> Outcome:
        u = function_on("gauss:x0=0.5,p0=1,s=1", fg)
        lhs = apply_weyl_values("xi", u)
        rhs = -1j * spectral_derivative(u.values, h)
        err = _max_abs(lhs - rhs)
        tol = ctx.tol("derivative")
        return Outcome({"max_error": err}, {"operator": "-i d/dx"}, err <= tol, tol)

    def apply_weyl_values(spec: str, u: SampledFunction) -> np.ndarray:
        return symbol_to_kernel(weyl_symbol(spec, fg)).apply(u).values

    def oscillator() -> Outcome:
        e0 = hermite_sample(0, fg)
        err = _max_abs(apply_weyl_values("oscillator", e0) - e0.values)
        tol = ctx.tol("eigenvalue")
        return Outcome({"max_error": err}, {"eigenvalue": 1.0}, err <= tol, tol)

    def projection() -> Outcome:
        e0 = hermite_sample(0, fg).values
        K = symbol_to_kernel(weyl_symbol("f0", fg))
        err = _max_abs(K.entries - np.outer(e0, np.conj(e0)))
        tol = ctx.tol("projection")
        return Outcome({"max_error": err}, {"kernel": "e0(x) e0(y)"}, err <= tol, tol)

    ctx.check("identity", "weyl.quantization", _quiet(identity, AliasingWarning))
    ctx.check("multiplication-x", "weyl.quantization", _quiet(multiplication, AliasingWarning))
    ctx.check("derivative-xi", "weyl.quantization", derivative)
    ctx.check("oscillator-e0", "weyl.quantization", oscillator)
    ctx.check("projection-f0", "weyl.projection-symbol", projection)

    rt_tol = ctx.tol("round_trip")
    for spec in ("f0", "gauss_bump", "modulated_gauss"):
        def round_trip(spec: str = spec) -> Outcome:
            a = weyl_symbol(spec, fg)
            back = kernel_to_symbol(symbol_to_kernel(a))
            err = _max_abs(back.values - a.values) / _max_abs(a.values)
            return Outcome({"relative_error": err}, {"relative_error": 0.0}, err <= rt_tol, rt_tol)

        ctx.check(f"kernel-round-trip[{spec}]", "weyl.quantization", round_trip)

    def commutator() -> Outcome:
        x = weyl_symbol("x", fg)
        xi = weyl_symbol("xi", fg)
        c = moyal_compose(x, xi) - moyal_compose(xi, x)
        X, XI = c.grid.mesh()
        mask = (np.abs(X) <= fg.half_width / 2) & (np.abs(XI) <= c.grid.xi.half_width / 4)
        err = _max_abs(c.values[mask] - 1j)
        tol = ctx.tol("commutator")
        return Outcome({"max_error": err}, {"commutator": 1j}, err <= tol, tol)

    ctx.check("moyal-commutator", "weyl.composition",
              _quiet(commutator, AliasingWarning, BoundaryMassWarning))

    assoc_tol = ctx.tol("associativity")
    for triple in ASSOCIATIVITY_TRIPLES:
        def associativity(triple: Tuple[str, str, str] = triple) -> Outcome:
            a1, a2, a3 = (weyl_symbol(spec, fg) for spec in triple)
            left = moyal_compose(moyal_compose(a1, a2), a3)
            right = moyal_compose(a1, moyal_compose(a2, a3))
            X, XI = left.grid.mesh()
            inner = (np.abs(X) <= fg.half_width / 2) & (np.abs(XI) <= left.grid.xi.half_width / 2)
            err = _max_abs((left.values - right.values)[inner]) / _max_abs(left.values)
            return Outcome({"relative_error": err}, {"relative_error": 0.0}, err <= assoc_tol, assoc_tol)

        ctx.check(f"associativity[{'#'.join(triple)}]", "weyl.composition", associativity)

    for name, m in ctx.order_functions.items():
        def schur(m: OrderFunction = m) -> Outcome:
            bounds = {p: schur_bounds(m, SCHUR_GRID, p) for p in P_SWEEP}
            b_inf = bounds["inf"]
            symmetric = abs(b_inf.row_sup - b_inf.col_sup) <= 1e-10 * max(b_inf.row_sup, 1e-300)
            p2 = bounds["2"].p_norm_estimate
            ceiling = max(bounds["1"].p_norm_estimate, b_inf.p_norm_estimate)
            return Outcome(
                {"row_sup": b_inf.row_sup, "col_sup": b_inf.col_sup,
                 "row_sup_doubled": b_inf.row_sup_doubled, "col_sup_doubled": b_inf.col_sup_doubled,
                 "p2_estimate": p2, "divergent": b_inf.divergent},
                {"row_equals_col": True, "p2_at_most": ceiling},
                symmetric and p2 <= ceiling * (1.0 + 1e-6),
                boundary_flag=b_inf.divergent,
            )

        ctx.check(f"schur[{name}]", "weyl.schur-operator", schur)

    for name, m in _convergent(ctx):
        def composed(m: OrderFunction = m) -> Outcome:
            m3 = compose_order_functions(m, m, RealGrid(2, 6.0, 16), table_points=6)
            empirical = check_order_function(m3, m3.table_grid)
            return Outcome({"C0": m3.C0, "N0": m3.N0, "C0_recheck": empirical, "divergent": m3.diverges},
                           {"certified": True}, m3.is_certified and bool(np.isfinite(m3.C0)),
                           boundary_flag=m3.diverges)

        ctx.check(f"composed-weight[{name}]", "weyl.composed-weight", composed)


def _convergent(ctx: SuiteContext) -> List[Tuple[str, OrderFunction]]:
    """Corpus order functions whose Schur sups are stable under doubling the box"""
    out = []
    for name, m in ctx.order_functions.items():
        if not schur_bounds(m, SCHUR_GRID, "inf").divergent:
            out.append((name, m))
    return out


# bargmann

def bargmann_suite(ctx: SuiteContext) -> None:
    fg = ctx.function_grid
    cg = ctx.complex_grid
    batch = hermite_batch(fg)
    phases = {name: get_phase(name) for name in ctx.cfg.phases}

    for name, phi in phases.items():
        def unitarity(phi=phi) -> Outcome:
            W = phi_weight(phi)
            errors = [abs(hp_norm(bargmann_transform(u, phi, cg), W, 2) - u.norm()) for u in batch]
            tol = ctx.tol("unitarity")
            return Outcome({"max_error": max(errors)}, {"norm_ratio": 1.0}, max(errors) <= tol, tol)

        def ground(phi=phi) -> Outcome:
            W = phi_weight(phi)
            V = bargmann_transform(batch[0], phi, cg)
            z = cg.nodes()
            g = ground_state_form(phi)(x=z)
            weighted = V.weighted(W)
            keep = _interior(z, cg.re.half_width / 2) & (weighted > 1e-6 * weighted.max())
            ratio = V.values[keep] / np.exp(1j * g[keep])
            mean = complex(np.mean(ratio))
            spread = _max_abs(ratio - mean) / abs(mean)
            tol = ctx.tol("ground_state")
            return Outcome({"constant": mean, "relative_spread": spread}, {"relative_spread": 0.0},
                           spread <= tol, tol)

        def bergman(phi=phi) -> Outcome:
            fitted = reproducing_constant(phi, fg, cg)
            closed = bergman_constant(phi_weight(phi))
            tol = ctx.tol("ground_state")
            return Outcome({"a_phi": fitted}, {"bergman_constant": closed},
                           within(fitted, closed, tol, relative=True), tol)

        def projection(phi=phi) -> Outcome:
            W = calibrated_weight(phi, fg, cg)
            V = bargmann_transform(batch[1], phi, cg)
            P = reproducing_projection(V, W)
            z = cg.nodes()
            keep = _interior(z, cg.re.half_width / 4)
            damp = np.exp(-W(z))
            err = _max_abs(((P.values - V.values) * damp)[keep]) / _max_abs(V.values * damp)
            tol = ctx.tol("projection")
            return Outcome({"relative_error": err}, {"relative_error": 0.0}, err <= tol, tol)

        ctx.check(f"unitarity[{name}]", "bargmann.transform", unitarity)
        ctx.check(f"ground-state[{name}]", "bargmann.ground-state", ground)
        ctx.check(f"bergman-constant[{name}]", "bargmann.hp-spaces", bergman)
        ctx.check(f"reproducing-projection[{name}]", "bargmann.hp-spaces", projection)

    if "radial" in phases:
        radial = phases["radial"]
        fi_tol = ctx.tol("fourier_invariance")
        for spec, u in ctx.functions.items():
            def invariance(u: SampledFunction = u) -> Outcome:
                W = phi_weight(radial)
                V = bargmann_transform(u, radial, cg)
                VF = bargmann_transform(unitary_fourier(u), radial, cg)
                norms = {p: (hp_norm(V, W, p), hp_norm(VF, W, p)) for p in P_SWEEP}
                errs = {f"p={p}": _rel_change(a, b) for p, (a, b) in norms.items()}
                return Outcome({"relative_change": errs}, {"relative_change": 0.0},
                               max(errs.values()) <= fi_tol, fi_tol)

            ctx.check(f"fourier-invariance[{spec}]", "bargmann.fourier-invariance", invariance)

    names = list(phases)
    stab_tol = ctx.tol("phase_bracket_stability")
    doubled = ComplexGrid.square(1, 2.0 * cg.re.half_width, 2 * cg.re.points_per_axis)
    rows: List[Sequence] = []
    for other in names[1:]:
        def independence(other: str = other) -> Outcome:
            phi1, phi2 = phases[names[0]], phases[other]
            constants: Dict[str, float] = {}
            changes = []
            for p in P_SWEEP:
                base = norm_ratio_bracket(batch, phi1, phi2, p, cg)
                big = norm_ratio_bracket(batch, phi1, phi2, p, doubled)
                constants[f"p={p}"] = base.constant
                changes.append(_rel_change(base.constant, big.constant))
                rows.append((names[0], other, p, base.low, base.high, base.constant, big.constant))
            return Outcome({"constants": constants, "max_change_on_doubled_box": max(changes)},
                           {"stable_within": stab_tol}, max(changes) <= stab_tol, stab_tol)

        ctx.check(f"phase-independence[{names[0]}~{other}]", "bargmann.phase-independence", independence)
    if rows:
        ctx.report.add_table("phase_brackets",
                             ["phase_1", "phase_2", "p", "low", "high", "constant", "constant_doubled"], rows)


# rankone

def rankone_suite(ctx: SuiteContext) -> None:
    fg = ctx.function_grid
    cg = ctx.complex_grid
    phi = get_phase(ctx.cfg.phases[0]) if ctx.cfg.phases else get_phase("radial")
    W = phi_weight(phi)
    u = function_on("gauss:x0=1,p0=0.5,s=1", fg)
    V = bargmann_transform(u, phi, cg)
    z = cg.nodes()
    mag_tol = ctx.tol("magnetic")
    ell = LinearFormEll.real_on(W, [0.7 + 0.3j])

    def isometry() -> Outcome:
        moved = magnetic_translate(V, ell, W)
        errs = {f"p={p}": _rel_change(hp_norm(V, W, p), hp_norm(moved, W, p)) for p in ("1", "2")}
        return Outcome({"relative_change": errs}, {"relative_change": 0.0},
                       max(errs.values()) <= mag_tol, mag_tol)

    def grid_route() -> Outcome:
        moved = magnetic_translate(V, ell, W)
        exact = translated_transform(u, phi, ell, z, cg)
        keep = _interior(z, cg.re.half_width / 2)
        damp = np.exp(-W(z))
        err = _max_abs(((moved.values - exact) * damp)[keep]) / _max_abs(V.values * damp)
        return Outcome({"relative_error": err}, {"relative_error": 0.0}, err <= mag_tol, mag_tol)

    ctx.check("magnetic-isometry", "rankone.magnetic-translation", isometry)
    ctx.check("magnetic-grid-route", "rankone.magnetic-translation", grid_route)

    eg_tol = ctx.tol("egorov")
    for label, form in EGOROV_FORMS.items():
        def egorov(form: LinearFormEll = form) -> Outcome:
            err = egorov_check(u, form, phi, cg)
            return Outcome({"h2_error": err}, {"h2_error": 0.0}, err <= eg_tol, eg_tol)

        ctx.check(f"egorov[{label}]", "rankone.egorov", egorov)

    def norms() -> Outcome:
        base = np.array([[0.0], [1.0 + 0.5j], [-1.5 + 1.0j]])
        values = coherent_norms(base, phi, cg, fg)
        err = _max_abs(values - 1.0)
        tol = ctx.tol("unitarity")
        return Outcome({"norms": values, "max_error": err}, {"norm": 1.0}, err <= tol, tol)

    def decay() -> Outcome:
        radii = np.linspace(2.0, 4.0, 9)
        profile = overlap_profile(hermite_sample(0, fg), phi, radii, grid=cg)
        slope = fit_log_slope(radii, profile)
        return Outcome({"log_slope": slope}, {"log_slope_below": -4.0}, slope < -4.0)

    ctx.check("coherent-norms", "rankone.coherent-state", norms)
    ctx.check("overlap-decay", "rankone.coherent-state", decay)

    settings = ctx.cfg.rankone
    quad = RankOneQuadrature(settings.radius, settings.nodes)
    finer = RankOneQuadrature(settings.radius, refined_nodes(settings.nodes))
    rec_tol = ctx.tol("reconstruction")
    rows: List[Sequence] = []
    for a_spec, u_spec, v_spec in RECONSTRUCTION_TRIPLES:
        def reconstruct(a_spec=a_spec, u_spec=u_spec, v_spec=v_spec) -> Outcome:
            a = symbol_on(a_spec, ctx.symbol_grid)
            uu = function_on(u_spec, fg)
            vv = function_on(v_spec, fg)
            reference = complex(symbol_to_kernel(weyl_symbol(a_spec, fg)).apply(uu).inner(vv))
            coarse = rank_one_reconstruct(a, uu, vv, quad, phi, cg)
            fine = rank_one_reconstruct(a, uu, vv, finer, phi, cg, warn=False)
            scale = max(abs(reference), 1e-300)
            err = abs(coarse.value - reference) / scale
            err_fine = abs(fine.value - reference) / scale
            rows.append((a_spec, u_spec, v_spec, quad.points_per_axis, reference, coarse.value, err))
            rows.append((a_spec, u_spec, v_spec, finer.points_per_axis, reference, fine.value, err_fine))
            return Outcome(
                {"value": coarse.value, "relative_error": err, "relative_error_finer": err_fine,
                 "points_per_axis": quad.points_per_axis, "points_per_axis_finer": finer.points_per_axis,
                 "node_count": coarse.node_count,
                 "shell_fraction": coarse.shell_modulus / max(coarse.total_modulus, 1e-300)},
                {"value": reference},
                err <= rec_tol and err_fine < err,
                rec_tol,
                tail_flag=coarse.tail_flag or coarse.phase_flag,
            )

        ctx.check(f"reconstruct[{a_spec}|{u_spec}|{v_spec}]", "rankone.reconstruction", reconstruct)
    if rows:
        ctx.report.add_table("rankone_reconstruction",
                             ["symbol", "u", "v", "nodes", "reference", "rank_one", "relative_error"], rows)

    pb_tol = ctx.tol("pullback")
    pb_rho = quad.nodes(phi).rho[::3]
    for a_spec in PULLBACK_SYMBOLS:
        def pullback(a_spec=a_spec) -> Outcome:
            a = symbol_on(a_spec, ctx.symbol_grid)
            G_real = rank_one_coefficients(a, pb_rho)
            G_pull = pullback_coefficients(a, phi, pb_rho)
            err = _max_abs(G_pull - G_real) / _max_abs(G_real)
            return Outcome({"relative_difference": err, "node_pairs": len(pb_rho) ** 2},
                           {"relative_difference": 0.0}, err <= pb_tol, pb_tol)

        ctx.check(f"pullback-route[{a_spec}]", "rankone.reconstruction", pullback)

    a = symbol_on("f0", ctx.symbol_grid)
    m_one = ctx.order_functions.get("one") or bracket(0.0)

    def routes() -> Outcome:
        K1 = effective_kernel(a, phi, "rankone", quad=quad, function_grid=fg, calibration=cg)
        K2 = effective_kernel(a, phi, "direct", function_grid=fg, calibration=cg)
        diff = route_discrepancy(K1, K2)
        return Outcome({"relative_difference": diff}, {"relative_difference": 0.0}, diff <= rec_tol, rec_tol)

    gaussians = [s for s in ctx.symbols if s.split(":")[0] in GAUSSIAN_SYMBOLS] or ["f0"]
    fine_fg, fine_cg, fine_sg = doubled_grids(ctx)

    def bound_at(f_grid: RealGrid, c_grid: ComplexGrid, s_grid: PhaseGrid) -> Tuple[float, Dict[str, float]]:
        per_symbol = {}
        for spec in gaussians:
            b = symbol_on(spec, s_grid)
            b_norm = stilde_norm(b, m_one, workers=ctx.cfg.workers)
            K = effective_kernel(b, phi, "rankone", quad=quad, function_grid=f_grid, calibration=c_grid)
            per_symbol[spec] = kernel_bound_constant(K, b_norm, m_one, phi)
        return max(per_symbol.values()), per_symbol

    def bound_constant() -> Outcome:
        C1, coarse = bound_at(fg, cg, ctx.symbol_grid)
        C2, fine = bound_at(fine_fg, fine_cg, fine_sg)
        change = _rel_change(C1, C2)
        tol = ctx.tol("grid_stability")
        return Outcome({"C": C1, "C_refined": C2, "relative_change": change,
                        "per_symbol": coarse, "per_symbol_refined": fine,
                        "grid_points": fg.points_per_axis, "grid_points_refined": fine_fg.points_per_axis},
                       {"stable_within": tol},
                       bool(np.isfinite(C1)) and change <= tol, tol)

    def slope() -> Outcome:
        bump = symbol_on("bump", ctx.symbol_grid)
        K = effective_kernel(bump, phi, "direct", function_grid=fg, calibration=cg)
        s2 = offdiagonal_slope(K, phi, order=2)
        s4 = offdiagonal_slope(K, phi, order=4)
        return Outcome({"log_slope_N2": s2, "log_slope_N4": s4},
                       {"log_slope_N4_negative": True, "log_slope_N4_below_N2": True},
                       s4 < 0.0 and s4 < s2)

    ctx.check("effective-routes[f0]", "rankone.effective-kernel", routes)
    ctx.check("effective-bound[gaussians]", "rankone.effective-kernel", bound_constant)
    ctx.check("offdiagonal-slope[bump]", "rankone.offdiagonal-decay", slope)

    slack = 1.0 + ctx.tol("chain_slack")
    for name, m in _convergent(ctx):
        for p in P_SWEEP:
            def chain(m: OrderFunction = m, p: str = p) -> Outcome:
                result = schur_chain_check(u, m, p, phi, settings.radius, settings.nodes, cg)
                return Outcome({"h_norm": result.h_norm, "f_norm": result.f_norm,
                                "p_norm_estimate": result.p_norm_estimate, "ratio": result.ratio},
                               {"ratio_at_most": slack}, result.ratio <= slack, slack - 1.0)

            ctx.check(f"schur-chain[{name},p={p}]", "rankone.schur-chain", chain)


# theorems

def _bound_ratio(ctx: SuiteContext, m: OrderFunction, fg: RealGrid, sg: PhaseGrid
                 ) -> Tuple[float, List[Sequence]]:
    """max ||a^w u||_{M^p} / (||a|| ||M||_p ||u||_{M^p}) over the corpus, on one grid pair"""
    phi = get_phase("radial")
    W = phi_weight(phi)
    cg = ctx.complex_grid
    estimates = {p: schur_bounds(m, SCHUR_GRID, p).p_norm_estimate for p in P_SWEEP}
    functions = {spec: function_on(spec, fg) for spec in ctx.cfg.corpus["functions"]}
    u_norms = {spec: {p: hp_norm(bargmann_transform(f, phi, cg, warn=False), W, p, warn=False)
                      for p in P_SWEEP} for spec, f in functions.items()}
    best = 0.0
    rows: List[Sequence] = []
    for a_spec in ctx.symbols:
        a_norm = stilde_norm(symbol_on(a_spec, sg), m, workers=ctx.cfg.workers)
        K = symbol_to_kernel(weyl_symbol(a_spec, fg))
        for spec, f in functions.items():
            Au = bargmann_transform(K.apply(f), phi, cg, warn=False)
            for p in P_SWEEP:
                lhs = hp_norm(Au, W, p, warn=False)
                denom = a_norm * estimates[p] * u_norms[spec][p]
                ratio = lhs / denom if denom > 0 else 0.0
                best = max(best, ratio)
                rows.append((a_spec, spec, p, fg.points_per_axis, lhs, a_norm, estimates[p], ratio))
    return best, rows


def theorems_suite(ctx: SuiteContext) -> None:
    stab_tol = ctx.tol("grid_stability")
    convergent = _convergent(ctx)

    def no_weight() -> Outcome:
        return Outcome({"error": "no order function in the corpus has convergent Schur sums"}, {}, False)

    if not convergent:
        ctx.check("operator-bound", "weyl.operator-bound", no_weight)
        return
    fg, sg = ctx.function_grid, ctx.symbol_grid
    fine_fg, _, fine_sg = doubled_grids(ctx)
    decaying = [s for s in ctx.symbols if symbol_entry(s)[0].decays]
    pairs = list(itertools.combinations(decaying, 2))
    operator_rows: List[Sequence] = []
    product_rows: List[Sequence] = []

    for name, m in convergent:
        def operator_bound(name: str = name, m: OrderFunction = m) -> Outcome:
            C, rows = _bound_ratio(ctx, m, fg, sg)
            C_fine, fine_rows = _bound_ratio(ctx, m, fine_fg, fine_sg)
            operator_rows.extend((name,) + tuple(row) for row in rows + fine_rows)
            change = _rel_change(C, C_fine)
            return Outcome({"order_function": name, "C": C, "C_refined": C_fine, "relative_change": change},
                           {"stable_within": stab_tol}, bool(np.isfinite(C)) and change <= stab_tol, stab_tol)

        def product_bound(name: str = name, m: OrderFunction = m) -> Outcome:
            m3 = compose_order_functions(m, m, RealGrid(2, 6.0, 16), table_points=6)
            constants = []
            for f_grid, s_grid in ((fg, sg), (fine_fg, fine_sg)):
                best = 0.0
                for s1, s2 in pairs:
                    a1 = symbol_on(s1, s_grid)
                    a2 = symbol_on(s2, s_grid)
                    c = resample_symbol(moyal_compose(weyl_symbol(s1, f_grid), weyl_symbol(s2, f_grid)), s_grid)
                    n12 = stilde_norm(c, m3, workers=ctx.cfg.workers)
                    n1 = stilde_norm(a1, m, workers=ctx.cfg.workers)
                    n2 = stilde_norm(a2, m, workers=ctx.cfg.workers)
                    ratio = n12 / (n1 * n2)
                    best = max(best, ratio)
                    product_rows.append((name, s1, s2, f_grid.points_per_axis, n12, n1, n2, ratio))
                constants.append(best)
            change = _rel_change(constants[0], constants[1])
            return Outcome({"order_function": name, "m3_C0": m3.C0, "C": constants[0], "C_refined": constants[1],
                            "relative_change": change, "pairs": len(pairs)},
                           {"stable_within": stab_tol},
                           bool(np.isfinite(constants[0])) and change <= stab_tol,
                           stab_tol,
                           boundary_flag=m3.diverges)

        ctx.check(f"operator-bound[{name}]", "weyl.operator-bound", _quiet(operator_bound, AliasingWarning))
        if pairs:
            ctx.check(f"product-bound[{name}]", "weyl.product-bound", product_bound)

    convergent_names = {name for name, _ in convergent}
    for name in ctx.order_functions:
        if name in convergent_names:
            continue

        def outside_hypothesis(name: str = name) -> Outcome:
            return Outcome({"order_function": name, "schur_divergent": True}, {"bound_applies": False},
                           True, boundary_flag=True)

        ctx.check(f"operator-bound[{name}]", "weyl.operator-bound", outside_hypothesis)

    if operator_rows:
        ctx.report.add_table("operator_bound",
                             ["order_function", "symbol", "function", "p", "grid_points", "lhs", "stilde_norm",
                              "schur_estimate", "ratio"], operator_rows)
    if product_rows:
        ctx.report.add_table("product_bound",
                             ["order_function", "symbol_1", "symbol_2", "grid_points", "composed_norm",
                              "norm_1", "norm_2", "ratio"], product_rows)


SUITE_RUNNERS: Dict[str, Callable[[SuiteContext], None]] = {
    "phase-core": phase_core_suite,
    "stft": stft_suite,
    "weyl": weyl_suite,
    "bargmann": bargmann_suite,
    "rankone": rankone_suite,
    "theorems": theorems_suite,
}
